"""Rooted tree shapes, linear arrangements, and uniform samplers.

Randomness: every sampler takes a numpy Generator made by make_rng, which
pins the PCG64 bit generator so that a given seed yields the same draws on
every platform.  Draws from ranges wider than 64 bits (needed when ranking
trees at realistic sentence lengths) go through randbelow, a chunked
rejection sampler on top of 64-bit words.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .conllu import DepTree


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; identical streams across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


def randbelow(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large bounds."""
    if bound <= 0:
        raise ValueError(f"bound must be positive, got {bound}")
    if bound <= 1 << 63:
        return int(rng.integers(bound))
    k = (bound - 1).bit_length()
    words = (k + 63) // 64
    excess = words * 64 - k
    while True:
        r = 0
        for _ in range(words):
            r = (r << 64) | int(rng.integers(0, 1 << 64, dtype=np.uint64))
        r >>= excess
        if r < bound:
            return r


@dataclass(frozen=True)
class TreeShape:
    """A rooted tree on vertices 0..n-1: parent[v] is -1 exactly at the root."""

    parent: tuple[int, ...]

    def __post_init__(self):
        n = len(self.parent)
        if n == 0:
            raise ValueError("shape needs at least one vertex")
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        for v, p in enumerate(self.parent):
            if p != -1 and not 0 <= p < n:
                raise ValueError(f"parent {p} of vertex {v} out of range")
        # every vertex must reach the root
        for v in range(n):
            seen = set()
            u = v
            while u != -1:
                if u in seen:
                    raise ValueError(f"cycle through vertex {v}")
                seen.add(u)
                u = self.parent[u]

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p != -1:
                out[p].append(v)
        return out

    def subtree_sizes(self) -> list[int]:
        size = [1] * self.n
        for v in self._postorder():
            p = self.parent[v]
            if p != -1:
                size[p] += size[v]
        return size

    def _postorder(self) -> list[int]:
        children = self.children()
        order: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(children[v])
        order.reverse()
        return order

    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p != -1]


@dataclass(frozen=True)
class Arrangement:
    """pos[v] is the 1-based line position of vertex v; pos is a permutation."""

    pos: tuple[int, ...]

    def __post_init__(self):
        n = len(self.pos)
        if sorted(self.pos) != list(range(1, n + 1)):
            raise ValueError("positions must be a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.pos)

    def order(self) -> list[int]:
        """Vertices left to right."""
        out = [0] * self.n
        for v, p in enumerate(self.pos):
            out[p - 1] = v
        return out


def random_labeled_tree(n: int, rng: np.random.Generator) -> DepTree:
    """Uniform draw from the n^(n-1) rooted labeled trees on n nodes.

    A uniform Prufer sequence gives a uniform unrooted labeled tree; a
    uniform root choice on top makes the rooted distribution exact.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1:
        return DepTree((0,))
    if n == 2:
        edges = [(1, 2)]
    else:
        seq = [int(a) + 1 for a in rng.integers(0, n, size=n - 2)]
        edges = _prufer_decode(seq, n)
    root = int(rng.integers(1, n + 1))
    adj: list[list[int]] = [[] for _ in range(n + 1)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    heads = [0] * n
    stack = [root]
    seen = [False] * (n + 1)
    seen[root] = True
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                heads[w - 1] = u
                stack.append(w)
    heads[root - 1] = 0
    return DepTree(tuple(heads))


def _prufer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    deg = [1] * (n + 1)
    for a in seq:
        deg[a] += 1
    leaves = [v for v in range(1, n + 1) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        deg[a] -= 1
        if deg[a] == 1:
            heapq.heappush(leaves, a)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


@lru_cache(maxsize=None)
def _tree_counts(n: int) -> tuple[int, ...]:
    # t[m] = number of unlabeled rooted trees on m nodes, via the
    # divisor-sum recurrence (m-1) t[m] = sum_{k<m} s[k] t[m-k],
    # s[k] = sum_{d|k} d t[d]
    t = [0] * (n + 1)
    s = [0] * (n + 1)
    if n >= 1:
        t[1] = 1
    for m in range(2, n + 1):
        for k in range(1, m):
            if s[k] == 0:
                s[k] = sum(d * t[d] for d in range(1, k + 1) if k % d == 0)
            t[m] += s[k] * t[m - k]
        t[m] //= m - 1
    return tuple(t)


def count_unlabeled_trees(n: int) -> int:
    """Number of unlabeled rooted trees on n nodes (1, 1, 2, 4, 9, 20, ...)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return _tree_counts(n)[n]


def random_unlabeled_tree(n: int, rng: np.random.Generator) -> TreeShape:
    """Uniform draw over the count_unlabeled_trees(n) rooted tree shapes.

    Recursive ranked sampling: split off j copies of a d-vertex subtree with
    probability d*t(d)*t(n-jd) / ((n-1)*t(n)), recurse on both parts, then
    hang the copies under the root of the larger part.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    t = _tree_counts(n)
    parent = _ranrut(n, rng, t)
    return TreeShape(tuple(parent))


def _ranrut(n: int, rng: np.random.Generator, t: tuple[int, ...]) -> list[int]:
    if n == 1:
        return [-1]
    if n == 2:
        return [-1, 0]
    r = randbelow(rng, (n - 1) * t[n])
    acc = 0
    jd: tuple[int, int] | None = None
    for d in range(1, n):
        for j in range(1, (n - 1) // d + 1):
            acc += d * t[d] * t[n - j * d]
            if r < acc:
                jd = (j, d)
                break
        if jd:
            break
    assert jd is not None
    j, d = jd
    trunk = _ranrut(n - j * d, rng, t)
    limb = _ranrut(d, rng, t)
    parent = list(trunk)
    for _ in range(j):
        off = len(parent)
        parent.extend(0 if p == -1 else p + off for p in limb)
    return parent


def random_projective_arrangement(shape: TreeShape, rng: np.random.Generator) -> Arrangement:
    """Uniform draw over the prod_v (c_v + 1)! projective arrangements.

    Independently permutes {v} with v's child blocks at every vertex, in
    depth-first expansion order starting at the root.
    """
    children = shape.children()
    order: list[int] = []

    def expand(v: int) -> None:
        items: list[int] = [-1] + children[v]
        for i in rng.permutation(len(items)):
            if items[i] == -1:
                order.append(v)
            else:
                expand(items[i])

    expand(shape.root)
    pos = [0] * shape.n
    for p, v in enumerate(order, start=1):
        pos[v] = p
    return Arrangement(tuple(pos))


def arrangement_cost(shape: TreeShape, arr: Arrangement) -> int:
    """Sum of |pos(u) - pos(v)| over tree edges."""
    return sum(abs(arr.pos[u] - arr.pos[v]) for u, v in shape.edges())


def min_projective_arrangement(shape: TreeShape) -> tuple[Arrangement, int]:
    """An optimal projective arrangement of the rooted shape, with its cost.

    At each vertex the child blocks alternate sides in decreasing subtree
    size, largest placed outermost on the side away from the parent; inside
    a block the child hugs the end facing its parent.  Exchanging any two
    blocks can only lengthen edges, so the local rule is globally optimal.
    Deterministic: ties in size break toward the smaller vertex id.
    """
    children = shape.children()
    size = shape.subtree_sizes()

    def layout(v: int, parent_on_left: bool) -> list[int]:
        if parent_on_left:
            return list(reversed(layout(v, False)))
        kids = sorted(children[v], key=lambda c: (-size[c], c))
        seq: list[int] = []
        for c in kids[0::2]:
            seq.extend(layout(c, False))
        seq.append(v)
        for c in reversed(kids[1::2]):
            seq.extend(layout(c, True))
        return seq

    order = layout(shape.root, False)
    pos = [0] * shape.n
    for p, v in enumerate(order, start=1):
        pos[v] = p
    arr = Arrangement(tuple(pos))
    return arr, arrangement_cost(shape, arr)


def reroot(shape: TreeShape, new_root: int) -> TreeShape:
    """Same undirected tree, rooted at new_root."""
    if not 0 <= new_root < shape.n:
        raise ValueError(f"vertex {new_root} out of range")
    adj: list[list[int]] = [[] for _ in range(shape.n)]
    for u, v in shape.edges():
        adj[u].append(v)
        adj[v].append(u)
    parent = [-2] * shape.n
    parent[new_root] = -1
    stack = [new_root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if parent[w] == -2:
                parent[w] = u
                stack.append(w)
    return TreeShape(tuple(parent))


def min_linear_arrangement(shape: TreeShape) -> tuple[Arrangement, int]:
    """A minimum-cost arrangement of the underlying free tree, with cost.

    Some optimal arrangement of a tree has no crossing edges, and a
    crossing-free arrangement is projective with respect to its leftmost
    vertex, so minimizing the projective optimum over all rerootings is
    exact.  The given root plays no role.  Ties break toward the smaller
    root id, keeping the output deterministic.
    """
    best: tuple[int, int, Arrangement] | None = None
    for r in range(shape.n):
        arr, cost = min_projective_arrangement(reroot(shape, r))
        if best is None or cost < best[0]:
            best = (cost, r, arr)
    assert best is not None
    return best[2], best[0]


def linearize(shape: TreeShape, arr: Arrangement) -> DepTree:
    """Read a head vector off an arranged shape: word at pos(v) heads pos(parent)."""
    if arr.n != shape.n:
        raise ValueError("arrangement and shape sizes differ")
    heads = [0] * shape.n
    for v, p in enumerate(shape.parent):
        heads[arr.pos[v] - 1] = 0 if p == -1 else arr.pos[p]
    return DepTree(tuple(heads))


def is_projective(heads) -> bool:
    """True when every subtree covers a contiguous span of positions."""
    n = len(heads)
    kids: list[list[int]] = [[] for _ in range(n + 1)]
    for d, h in enumerate(heads, start=1):
        kids[h].append(d)
    lo = list(range(n + 1))
    hi = list(range(n + 1))
    cnt = [1] * (n + 1)
    root = kids[0][0]
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])
    for v in reversed(order):
        for c in kids[v]:
            lo[v] = min(lo[v], lo[c])
            hi[v] = max(hi[v], hi[c])
            cnt[v] += cnt[c]
    return all(hi[v] - lo[v] + 1 == cnt[v] for v in range(1, n + 1))
