"""Brute-force oracles the test modules check library output against.

Everything here is deliberately naive: exhaustive enumeration, subset DP,
pairwise interval tests.  Nothing imports the library's algorithms.
"""

import itertools
import math
from collections import Counter
from functools import lru_cache

# Canonical form of a rooted shape: a tuple of the children's canonical
# forms, sorted.  A leaf is ().


@lru_cache(maxsize=None)
def _partitions(k):
    if k == 0:
        return ((),)
    out = set()
    for first in range(1, k + 1):
        for rest in _partitions(k - first):
            if not rest or first >= rest[0]:
                out.add((first,) + rest)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def all_shapes(n):
    """Every rooted tree on n unlabeled nodes, as canonical nested tuples."""
    if n == 1:
        return ((),)
    out = set()
    for part in _partitions(n - 1):
        groups = sorted(Counter(part).items())
        pools = [
            list(itertools.combinations_with_replacement(all_shapes(s), m))
            for s, m in groups
        ]
        for combo in itertools.product(*pools):
            kids = tuple(sorted(ch for grp in combo for ch in grp))
            out.add(kids)
    return tuple(sorted(out))


def nested_to_parent(nested):
    """Canonical nested tuple -> parent array (root 0, preorder ids)."""
    parent = [-1]

    def rec(node, idx):
        for ch in node:
            parent.append(idx)
            rec(ch, len(parent) - 1)

    rec(nested, 0)
    return parent


def parent_to_nested(parent):
    """Parent array -> canonical nested tuple."""
    n = len(parent)
    children = [[] for _ in range(n)]
    root = None
    for v, p in enumerate(parent):
        if p == -1:
            root = v
        else:
            children[p].append(v)

    def rec(v):
        return tuple(sorted(rec(c) for c in children[v]))

    return rec(root)


def aut_size(nested):
    """Order of the automorphism group of a rooted shape."""
    a = 1
    for ch, m in Counter(nested).items():
        a *= math.factorial(m) * aut_size(ch) ** m
    return a


def mla_exact(n, edges):
    """Exact free MLA cost by DP over vertex subsets.

    Placing vertices left to right, the total edge length equals the sum
    over proper prefixes of the number of edges leaving the prefix, so
    f(S) = min_v f(S - v) + cut(S) solves the problem exactly.
    """
    full = (1 << n) - 1
    amask = [0] * n
    for a, b in edges:
        amask[a] |= 1 << b
        amask[b] |= 1 << a
    inf = 1 << 60
    f = [inf] * (full + 1)
    f[0] = 0
    for s in range(1, full + 1):
        best = inf
        t = s
        while t:
            v = (t & -t).bit_length() - 1
            t &= t - 1
            prev = f[s ^ (1 << v)]
            if prev < best:
                best = prev
        if s != full:
            cut = 0
            t = s
            while t:
                v = (t & -t).bit_length() - 1
                t &= t - 1
                cut += bin(amask[v] & ~s & full).count("1")
            best += cut
        f[s] = best
    return f[full]


def mla_by_permutations(n, edges):
    """Literal minimum over all n! arrangements; keep n small."""
    best = math.inf
    for perm in itertools.permutations(range(n)):
        pos = [0] * n
        for p, v in enumerate(perm):
            pos[v] = p
        best = min(best, sum(abs(pos[a] - pos[b]) for a, b in edges))
    return best


def all_projective_arrangements(parent):
    """All vertex orders where every subtree stays contiguous.

    One order per choice of a permutation of {v} + child blocks at each
    vertex, so there are prod_v (c_v + 1)! of them, all distinct.
    """
    n = len(parent)
    children = [[] for _ in range(n)]
    root = None
    for v, p in enumerate(parent):
        if p == -1:
            root = v
        else:
            children[p].append(v)

    def rec(v):
        blocks = [[(v,)]] + [rec(c) for c in children[v]]
        out = []
        for perm in itertools.permutations(range(len(blocks))):
            for choice in itertools.product(*(blocks[i] for i in perm)):
                out.append(tuple(x for part in choice for x in part))
        return out

    return rec(root)


def order_cost(order, edges):
    pos = {v: i for i, v in enumerate(order)}
    return sum(abs(pos[a] - pos[b]) for a, b in edges)


def projective_by_crossing(heads):
    """Projectivity via the pairwise test: no crossing arcs, root uncovered."""
    arcs = []
    root = None
    for d, h in enumerate(heads, start=1):
        if h == 0:
            root = d
        else:
            arcs.append((min(d, h), max(d, h)))
    for (a, b), (c, d) in itertools.combinations(arcs, 2):
        if a < c < b < d or c < a < d < b:
            return False
    return all(not lo < root < hi for lo, hi in arcs)


def valid_head_vectors(n):
    """All single-root acyclic head vectors of length n, by filtering."""
    out = []
    for vec in itertools.product(range(n + 1), repeat=n):
        if vec.count(0) != 1:
            continue
        ok = True
        for start in range(1, n + 1):
            seen = set()
            u = start
            while 1 <= u <= n and u not in seen:
                seen.add(u)
                u = vec[u - 1]
            if 1 <= u <= n:  # stopped on a revisit
                ok = False
                break
        if ok and all(h != d for d, h in enumerate(vec, 1)):
            out.append(vec)
    return out


def chi_square_stat(counts, expected_probs, total):
    """Pearson statistic; expected_probs must cover every possible outcome."""
    stat = 0.0
    for outcome, p in expected_probs.items():
        exp = p * total
        obs = counts.get(outcome, 0)
        stat += (obs - exp) ** 2 / exp
    return stat
