"""CoNLL-U reading and writing plus dependency-tree validation.

Token lines carry the usual ten tab-separated columns (ID FORM LEMMA UPOS
XPOS FEATS HEAD DEPREL DEPS MISC).  Multiword-token ranges (``3-4``) and
empty nodes (``3.1``) are preserved verbatim for round-tripping but take no
part in the syntactic tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL, DEPS, MISC = range(10)
NCOLS = 10

# validity verdicts, in precedence order
VALID = "valid"
MULTI_ROOT = "multi_root"
NO_ROOT = "no_root"
CYCLE = "cycle"
OUT_OF_RANGE = "out_of_range"
SELF_LOOP = "self_loop"

_TOKEN_ID = re.compile(r"^\d+$")
_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


class ConlluError(Exception):
    pass


class ParseError(ConlluError):
    """Malformed input text, reported with a 1-based line number."""


class TreeValidityError(ConlluError):
    """A sentence whose head column does not encode a valid tree."""


def validate_heads(heads: Sequence[int]) -> str:
    """Classify a head vector.

    Returns one of VALID, MULTI_ROOT, NO_ROOT, CYCLE, OUT_OF_RANGE or
    SELF_LOOP; when several classes apply the first one in that order wins.
    """
    n = len(heads)
    if n == 0:
        raise ValueError("empty head vector")
    roots = sum(1 for h in heads if h == 0)
    if roots > 1:
        return MULTI_ROOT
    if roots == 0:
        return NO_ROOT
    # cycle detection follows only in-range, non-self parent links
    state = [0] * (n + 1)  # 0 unseen, 1 on current chain, 2 finished
    for start in range(1, n + 1):
        if state[start]:
            continue
        chain = []
        v: int | None = start
        while v is not None and state[v] == 0:
            state[v] = 1
            chain.append(v)
            h = heads[v - 1]
            v = h if 1 <= h <= n and h != v else None
            if v is not None and state[v] == 1:
                return CYCLE
        for u in chain:
            state[u] = 2
    if any(h < 0 or h > n for h in heads):
        return OUT_OF_RANGE
    if any(h == d for d, h in enumerate(heads, start=1)):
        return SELF_LOOP
    return VALID


@dataclass(frozen=True)
class DepTree:
    """A validated dependency tree stored as a 1-based head vector.

    heads[d - 1] is the head of word d, with 0 marking the single root.
    Construction fails on anything validate_heads rejects.
    """

    heads: tuple[int, ...]

    def __post_init__(self):
        verdict = validate_heads(self.heads)
        if verdict != VALID:
            raise TreeValidityError(f"invalid head vector {list(self.heads)}: {verdict}")

    @classmethod
    def from_heads(cls, heads: Iterable[int]) -> "DepTree":
        return cls(tuple(int(h) for h in heads))

    @property
    def n(self) -> int:
        return len(self.heads)

    @property
    def root(self) -> int:
        """1-based position of the root word."""
        return self.heads.index(0) + 1

    def children(self) -> list[list[int]]:
        """children()[h] lists dependents of word h (index 0 = root slot)."""
        out: list[list[int]] = [[] for _ in range(self.n + 1)]
        for d, h in enumerate(self.heads, start=1):
            out[h].append(d)
        return out


@dataclass
class Token:
    id: int
    form: str
    lemma: str = "_"
    upos: str = "_"
    xpos: str = "_"
    feats: str = "_"
    head: int | None = None
    deprel: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be positive, got {self.id}")
        if self.head is not None and self.head < 0:
            raise ValueError(f"negative head {self.head} for token {self.id}")

    def to_line(self) -> str:
        head = "_" if self.head is None else str(self.head)
        return "\t".join(
            (str(self.id), self.form, self.lemma, self.upos, self.xpos,
             self.feats, head, self.deprel, self.deps, self.misc)
        )


@dataclass
class Sentence:
    """One sentence: syntactic words plus verbatim non-word lines.

    extras holds (i, line) pairs meaning the raw line sits immediately
    before tokens[i] (i == len(tokens) puts it after the last word).
    """

    tokens: list[Token]
    comments: list[str] = field(default_factory=list)
    extras: list[tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        for i, tok in enumerate(self.tokens, start=1):
            if tok.id != i:
                raise ValueError(f"token ids must be 1..n in order, got {tok.id} at {i}")

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(t.form for t in self.tokens)

    @property
    def sent_id(self) -> str | None:
        for c in self.comments:
            m = re.match(r"#\s*sent_id\s*=\s*(.+)", c)
            if m:
                return m.group(1).strip()
        return None

    def head_vector(self) -> list[int | None]:
        return [t.head for t in self.tokens]

    def text(self) -> str:
        return " ".join(self.forms)


@dataclass
class Treebank:
    source_id: str
    sentences: list[tuple[Sentence, DepTree]]

    def __post_init__(self):
        for sent, tree in self.sentences:
            if sent.n != tree.n:
                raise ValueError(
                    f"{self.source_id}: sentence/tree length mismatch {sent.n} != {tree.n}"
                )

    def __len__(self) -> int:
        return len(self.sentences)

    def trees(self) -> list[DepTree]:
        return [tree for _, tree in self.sentences]


def _sentence_name(sent: Sentence, ordinal: int) -> str:
    return sent.sent_id or f"sentence {ordinal}"


def _finish_sentence(tokens, comments, extras, ordinal: int) -> tuple[Sentence, DepTree]:
    sent = Sentence(tokens=tokens, comments=comments, extras=extras)
    name = _sentence_name(sent, ordinal)
    heads = sent.head_vector()
    if any(h is None for h in heads):
        raise TreeValidityError(f"{name}: missing head")
    verdict = validate_heads(heads)  # type: ignore[arg-type]
    if verdict != VALID:
        raise TreeValidityError(f"{name}: {verdict}")
    return sent, DepTree.from_heads(heads)  # type: ignore[arg-type]


def parse_conllu(text: str, source_id: str = "") -> Treebank:
    """Parse CoNLL-U text into a Treebank of validated trees.

    Raises ParseError for malformed lines (with line number) and
    TreeValidityError for head vectors that do not form a tree (with the
    sent_id or ordinal of the offending sentence).
    """
    sentences: list[tuple[Sentence, DepTree]] = []
    tokens: list[Token] = []
    comments: list[str] = []
    extras: list[tuple[int, str]] = []
    ordinal = 1

    def flush():
        nonlocal tokens, comments, extras, ordinal
        if tokens or comments or extras:
            sentences.append(_finish_sentence(tokens, comments, extras, ordinal))
            ordinal += 1
        tokens, comments, extras = [], [], []

    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        fields = line.split("\t")
        first = fields[0]
        if _RANGE_ID.match(first) or _EMPTY_ID.match(first):
            extras.append((len(tokens), line))
            continue
        if not _TOKEN_ID.match(first):
            raise ParseError(f"line {lineno}: unrecognized line {line!r}")
        if len(fields) != NCOLS:
            raise ParseError(f"line {lineno}: expected {NCOLS} columns, got {len(fields)}")
        head_field = fields[HEAD]
        if head_field == "_":
            head = None
        else:
            try:
                head = int(head_field)
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer head {head_field!r}") from None
            if head < 0:
                raise TreeValidityError(f"sentence {ordinal}: {OUT_OF_RANGE}")
        tok_id = int(first)
        expected = len(tokens) + 1
        if tok_id != expected:
            name = f"sentence {ordinal}"
            raise TreeValidityError(f"{name}: token id {tok_id} where {expected} expected")
        tokens.append(
            Token(
                id=tok_id, form=fields[FORM], lemma=fields[LEMMA], upos=fields[UPOS],
                xpos=fields[XPOS], feats=fields[FEATS], head=head,
                deprel=fields[DEPREL], deps=fields[DEPS], misc=fields[MISC],
            )
        )
    flush()
    return Treebank(source_id=source_id, sentences=sentences)


def write_conllu(treebank: Treebank) -> str:
    """Serialize a Treebank; parse(write(t)) reproduces every column."""
    lines: list[str] = []
    for sent, tree in treebank.sentences:
        lines.extend(sent.comments)
        extras_at: dict[int, list[str]] = {}
        for idx, raw in sent.extras:
            extras_at.setdefault(idx, []).append(raw)
        for i, tok in enumerate(sent.tokens):
            lines.extend(extras_at.get(i, ()))
            if tok.head != tree.heads[i]:
                tok = replace(tok, head=tree.heads[i])
            lines.append(tok.to_line())
        lines.extend(extras_at.get(sent.n, ()))
        lines.append("")
    return "\n".join(lines) + "\n" if lines else ""
