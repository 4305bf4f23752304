"""Uninformed baseline tree generators.

Eight generators map a sentence length to a valid dependency tree using
no lexical information at all: deterministic chains (R, L), a flat tree
under a random root (A), uniform random labeled trees (RD), random
projective trees (RD*), optimal linear arrangements of random shapes
(LI, LI*), and resampling from a reference treebank (S).
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .conllu import DepTree, Treebank
from .repair import repair_tree
from .treealg import (
    linearize,
    min_linear_arrangement,
    min_projective_arrangement,
    random_labeled_tree,
    random_projective_arrangement,
    random_unlabeled_tree,
)


class BaselineKind(str, Enum):
    """Generator labels; values are the report row names."""

    A = "A"
    R = "R"
    L = "L"
    RD = "RD"
    RDstar = "RD*"
    LI = "LI"
    LIstar = "LI*"
    S = "S"


class LengthIndex:
    """Gold head vectors grouped by sentence length, multiplicity kept.

    Lookups for an absent length fall back to the nearest stored length
    (ties toward the smaller one) and are tallied in ``miss_count`` so a
    run can report how often the fallback fired.
    """

    def __init__(self, by_length: dict[int, list[tuple[int, ...]]]):
        self._by_length = {n: list(vecs) for n, vecs in by_length.items() if vecs}
        if not self._by_length:
            raise ValueError("length index needs at least one tree")
        self._lengths = sorted(self._by_length)
        self.miss_count = 0

    def lengths(self) -> list[int]:
        return list(self._lengths)

    def vectors(self, n: int) -> list[tuple[int, ...]]:
        return list(self._by_length.get(n, []))

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_length.values())

    def nearest_length(self, n: int) -> int:
        return min(self._lengths, key=lambda m: (abs(m - n), m))

    def sample(self, n: int, rng: np.random.Generator) -> tuple[int, ...]:
        """Draw one stored vector of length n, or of the nearest length."""
        pool = self._by_length.get(n)
        if pool is None:
            self.miss_count += 1
            pool = self._by_length[self.nearest_length(n)]
        return pool[int(rng.integers(len(pool)))]


def build_length_index(treebank: Treebank) -> LengthIndex:
    """Index a reference treebank's trees by sentence length."""
    by_length: dict[int, list[tuple[int, ...]]] = {}
    for tree in treebank.trees():
        by_length.setdefault(tree.n, []).append(tree.heads)
    return LengthIndex(by_length)


def _adapt(vec: tuple[int, ...], n: int, rng: np.random.Generator) -> DepTree:
    # borrowed vector of the wrong length: truncate or pad with 0, clamp
    # heads into [0, n], and let tree repair settle the rest
    heads = list(vec[:n]) + [0] * (n - len(vec))
    heads = [min(max(h, 0), n) for h in heads]
    repaired, _ = repair_tree(heads, rng)
    return DepTree(tuple(repaired))


def generate(
    kind: BaselineKind,
    n: int,
    rng: np.random.Generator,
    index: LengthIndex | None = None,
) -> DepTree:
    """Generate one baseline tree of length n.

    The index argument is required for kind S and rejected otherwise.
    """
    if n < 1:
        raise ValueError(f"sentence length must be >= 1, got {n}")
    if kind is BaselineKind.S:
        if index is None:
            raise ValueError("the S generator needs a length index")
    elif index is not None:
        raise ValueError(f"the {kind.value} generator takes no length index")

    if kind is BaselineKind.A:
        root = 1 + int(rng.integers(n))
        return DepTree(tuple(0 if d == root else root for d in range(1, n + 1)))
    if kind is BaselineKind.R:
        return DepTree(tuple(range(n)))
    if kind is BaselineKind.L:
        return DepTree(tuple(range(2, n + 1)) + (0,))
    if kind is BaselineKind.RD:
        return random_labeled_tree(n, rng)
    if kind is BaselineKind.RDstar:
        shape = random_unlabeled_tree(n, rng)
        return linearize(shape, random_projective_arrangement(shape, rng))
    if kind is BaselineKind.LI:
        shape = random_unlabeled_tree(n, rng)
        arr, _ = min_linear_arrangement(shape)
        return linearize(shape, arr)
    if kind is BaselineKind.LIstar:
        shape = random_unlabeled_tree(n, rng)
        arr, _ = min_projective_arrangement(shape)
        return linearize(shape, arr)
    assert kind is BaselineKind.S
    vec = index.sample(n, rng)
    if len(vec) == n:
        return DepTree(vec)
    return _adapt(vec, n, rng)
