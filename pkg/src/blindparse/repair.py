"""Two-stage repair of model-emitted CoNLL text.

Stage one (repair_format) fixes the table: prose is discarded, every target
word ends up with exactly one ten-column row.  Stage two (repair_tree) fixes
the head column: one root, no cycles, everything attached.  The NP/P1/P2
level records how much surgery was needed: NP none, P1 table only, P2 head
column (with or without table fixes).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .conllu import NCOLS, DepTree, Sentence


class RepairLevel(str, Enum):
    NP = "NP"
    P1 = "P1"
    P2 = "P2"


@dataclass
class RawOutput:
    """Raw model text paired with the sentence it was asked to parse."""

    text: str
    target: Sentence


def _tabular(line: str) -> tuple[int, list[str]] | None:
    """Id and fields when the line looks like a table row, else None.

    A row has at least two tab-separated fields and a first field that
    parses as a positive integer.
    """
    fields = line.split("\t")
    if len(fields) < 2:
        return None
    try:
        row_id = int(fields[0])
    except ValueError:
        return None
    if row_id < 1:
        return None
    return row_id, fields


def _rebuild(row_id: int, fields: list[str], form: str) -> list[str]:
    """Reshape a row with the wrong column count around its last integer.

    The last integer-valued field after the form slot is taken as HEAD and
    its successor as DEPREL; everything else is filled with underscores.
    """
    head, deprel = "0", "dep"
    for i in range(len(fields) - 1, 1, -1):
        try:
            int(fields[i])
        except ValueError:
            continue
        head = fields[i]
        if i + 1 < len(fields):
            deprel = fields[i + 1]
        break
    return [str(row_id), form, "_", "_", "_", "_", head, deprel, "_", "_"]


def repair_format(raw: RawOutput) -> tuple[list[list[str]], bool]:
    """Stage one: a ten-column row for each of the n target words.

    Returns (rows, format_touched).  Rows that already have ten columns
    pass through byte-verbatim.  format_touched flags column padding or
    truncation, synthesized rows, and dropped duplicate or out-of-range
    ids; throwing away prose alone does not count.
    """
    n = raw.target.n
    found: dict[int, list[str]] = {}
    touched = False
    for line in raw.text.split("\n"):
        parsed = _tabular(line)
        if parsed is None:
            continue
        row_id, fields = parsed
        if row_id > n or row_id in found:
            touched = True
            continue
        found[row_id] = fields
    rows: list[list[str]] = []
    for i in range(1, n + 1):
        form = raw.target.tokens[i - 1].form
        fields = found.get(i)
        if fields is None:
            rows.append([str(i), form, "_", "_", "_", "_", "0", "dep", "_", "_"])
            touched = True
        elif len(fields) == NCOLS:
            fields = list(fields)
            fields[0] = str(i)
            rows.append(fields)
        elif len(fields) > NCOLS:
            trimmed = list(fields[:NCOLS])
            trimmed[0] = str(i)
            rows.append(trimmed)
            touched = True
        else:
            rows.append(_rebuild(i, fields, form))
            touched = True
    return rows, touched


def extract_heads(rows: Sequence[Sequence[str]]) -> list[int]:
    """HEAD column as integers, 0 where the field does not parse."""
    heads = []
    for row in rows:
        try:
            heads.append(int(row[6]))
        except (ValueError, IndexError):
            heads.append(0)
    return heads


def format_table(rows: Sequence[Sequence[str]]) -> str:
    return "\n".join("\t".join(row) for row in rows)


def repair_tree(heads: Sequence[int], rng: np.random.Generator) -> tuple[list[int], bool]:
    """Stage two: force the head vector into a valid tree.

    The root is drawn uniformly among head-0 words (any word when there is
    none).  Remaining head-0, out-of-range, and self-pointing words attach
    to the root.  A breadth-first walk from the root with ascending-id
    child order then reattaches the smallest unreached word to the root
    until everything is connected, which breaks every cycle.
    Returns (new_heads, tree_touched).
    """
    n = len(heads)
    if n == 0:
        raise ValueError("empty head vector")
    out = list(heads)
    zero = [d for d in range(1, n + 1) if out[d - 1] == 0]
    if zero:
        root = zero[int(rng.integers(len(zero)))]
    else:
        root = 1 + int(rng.integers(n))
    out[root - 1] = 0
    for d in range(1, n + 1):
        if d == root:
            continue
        h = out[d - 1]
        if h == 0 or h < 0 or h > n or h == d:
            out[d - 1] = root
    deps: list[list[int]] = [[] for _ in range(n + 1)]
    for d in range(1, n + 1):
        if d != root:
            deps[out[d - 1]].append(d)
    visited = [False] * (n + 1)

    def bfs(start: int) -> None:
        queue = [start]
        visited[start] = True
        while queue:
            nxt: list[int] = []
            for u in queue:
                for w in deps[u]:
                    if not visited[w]:
                        visited[w] = True
                        nxt.append(w)
            queue = nxt

    bfs(root)
    for u in range(1, n + 1):
        if not visited[u]:
            out[u - 1] = root
            bfs(u)
    return out, out != list(heads)


def postprocess(raw: RawOutput, rng: np.random.Generator) -> tuple[DepTree, RepairLevel]:
    """Full pipeline: format repair, then tree repair, then classify.

    Never fails on any input text; the worst case degenerates to a flat
    tree under a drawn root.
    """
    rows, format_touched = repair_format(raw)
    heads, tree_touched = repair_tree(extract_heads(rows), rng)
    if tree_touched:
        level = RepairLevel.P2
    elif format_touched:
        level = RepairLevel.P1
    else:
        level = RepairLevel.NP
    return DepTree(tuple(heads)), level
