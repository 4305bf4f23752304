import math
from collections import Counter

import pytest
from scipy.stats import chi2

from blindparse.baselines import BaselineKind, LengthIndex, build_length_index, generate
from blindparse.conllu import VALID, DepTree, Sentence, Token, Treebank, validate_heads
from blindparse.treealg import make_rng
from oracles import (
    all_shapes,
    aut_size,
    chi_square_stat,
    mla_exact,
    parent_to_nested,
    projective_by_crossing,
    valid_head_vectors,
)

ALPHA = 0.01

ALL_KINDS = list(BaselineKind)
RANDOM_KINDS = [k for k in ALL_KINDS if k not in (BaselineKind.R, BaselineKind.L)]


def make_treebank(vectors):
    pairs = []
    for heads in vectors:
        tree = DepTree(tuple(heads))
        sent = Sentence(tokens=[Token(id=i, form=f"w{i}") for i in range(1, tree.n + 1)])
        pairs.append((sent, tree))
    return Treebank("toy", pairs)


def test_chain_kinds_are_deterministic():
    for seed in (0, 1, 99):
        assert generate(BaselineKind.R, 4, make_rng(seed)).heads == (0, 1, 2, 3)
        assert generate(BaselineKind.L, 4, make_rng(seed)).heads == (2, 3, 4, 0)
    assert generate(BaselineKind.R, 1, make_rng(0)).heads == (0,)
    assert generate(BaselineKind.L, 1, make_rng(0)).heads == (0,)


def test_flat_tree_structure():
    tree = generate(BaselineKind.A, 6, make_rng(7))
    root = tree.root
    assert all(h == root for d, h in enumerate(tree.heads, 1) if d != root)


def test_flat_root_is_uniform():
    n, draws = 5, 30000
    rng = make_rng(21)
    counts = Counter(generate(BaselineKind.A, n, rng).root for _ in range(draws))
    stat = chi_square_stat(counts, {r: 1 / n for r in range(1, n + 1)}, draws)
    assert stat < chi2.ppf(1 - ALPHA, df=n - 1)


def test_flat_expected_uas_matches_enumeration():
    gold = (2, 0, 2, 3, 3)
    n = len(gold)
    # score of the flat tree rooted at r, by definition of arc agreement
    def hits(r):
        return sum(
            1
            for d in range(1, n + 1)
            if gold[d - 1] == (0 if d == r else r)
        )
    expected = sum(hits(r) for r in range(1, n + 1)) / n
    rng = make_rng(33)
    draws = 40000
    total = sum(hits(generate(BaselineKind.A, n, rng).root) for _ in range(draws))
    assert abs(total / draws - expected) < 0.05


def test_random_labeled_kind_is_uniform():
    n, draws = 3, 45000
    vectors = valid_head_vectors(n)
    assert len(vectors) == 9
    rng = make_rng(4)
    counts = Counter(generate(BaselineKind.RD, n, rng).heads for _ in range(draws))
    stat = chi_square_stat(counts, {v: 1 / 9 for v in vectors}, draws)
    assert stat < chi2.ppf(1 - ALPHA, df=8)


def projective_tree_law(n):
    """Exact law of the shape-then-arrangement composition.

    P(tree) = (1 / t_n) * aut(shape) / prod_v (children_v + 1)!
    """
    t_n = len(all_shapes(n))
    law = {}
    for vec in valid_head_vectors(n):
        if not projective_by_crossing(vec):
            continue
        parent = [-1 if h == 0 else h - 1 for h in vec]
        kids = Counter(h for h in vec if h != 0)
        nested = parent_to_nested(parent)
        denom = math.prod(math.factorial(kids.get(v, 0) + 1) for v in range(1, n + 1))
        law[vec] = aut_size(nested) / (t_n * denom)
    assert abs(sum(law.values()) - 1.0) < 1e-12
    return law


@pytest.mark.parametrize("n,draws", [(3, 48000), (4, 60000)])
def test_projective_kind_matches_composite_law(n, draws):
    law = projective_tree_law(n)
    rng = make_rng(15)
    counts = Counter(generate(BaselineKind.RDstar, n, rng).heads for _ in range(draws))
    assert set(counts) <= set(law)
    stat = chi_square_stat(counts, law, draws)
    assert stat < chi2.ppf(1 - ALPHA, df=len(law) - 1)


def test_projective_kinds_never_cross():
    rng = make_rng(8)
    for _ in range(400):
        n = 2 + int(rng.integers(12))
        for kind in (BaselineKind.RDstar, BaselineKind.LIstar):
            assert projective_by_crossing(generate(kind, n, rng).heads)


def arc_cost(tree):
    return sum(abs(d - h) for d, h in enumerate(tree.heads, 1) if h != 0)


def test_arrangement_kinds_reach_the_optimum():
    from blindparse.treealg import min_projective_arrangement, random_unlabeled_tree

    for seed in range(40):
        n = 2 + seed % 7
        shape = random_unlabeled_tree(n, make_rng(seed))
        free = generate(BaselineKind.LI, n, make_rng(seed))
        assert arc_cost(free) == mla_exact(n, shape.edges())
        proj = generate(BaselineKind.LIstar, n, make_rng(seed))
        _, proj_cost = min_projective_arrangement(shape)
        assert arc_cost(proj) == proj_cost
        assert arc_cost(free) <= arc_cost(proj)


def test_sampling_kind_returns_stored_vectors():
    bank = make_treebank([(2, 0, 2), (0, 1, 2), (2, 0, 2), (0, 1)])
    index = build_length_index(bank)
    assert sorted(index.lengths()) == [2, 3]
    assert len(index) == 4
    rng = make_rng(12)
    seen = Counter(generate(BaselineKind.S, 3, rng, index=index).heads for _ in range(9000))
    assert set(seen) == {(2, 0, 2), (0, 1, 2)}
    # (2,0,2) is stored twice so should come up about twice as often
    ratio = seen[(2, 0, 2)] / seen[(0, 1, 2)]
    assert 1.8 < ratio < 2.2
    assert index.miss_count == 0


def test_sampling_length_miss_falls_back_to_nearest():
    index = LengthIndex({2: [(0, 2)], 5: [(2, 0, 2, 3, 3)]})
    assert index.nearest_length(3) == 2
    assert index.nearest_length(4) == 5
    tree = generate(BaselineKind.S, 3, make_rng(0), index=index)
    assert validate_heads(tree.heads) == VALID
    assert index.miss_count == 1


def test_sampling_tie_prefers_smaller_length():
    index = LengthIndex({2: [(0, 2)], 4: [(0, 1, 2, 3)]})
    assert index.nearest_length(3) == 2


def test_sampling_adapts_borrowed_vectors():
    # padding: the length-2 vector grows a third word with head 0, which
    # tree repair then resolves
    index = LengthIndex({2: [(0, 2)]})
    tree = generate(BaselineKind.S, 3, make_rng(1), index=index)
    assert tree.n == 3
    assert validate_heads(tree.heads) == VALID
    # truncation: heads pointing past the cut get clamped then repaired
    index2 = LengthIndex({5: [(5, 5, 5, 5, 0)]})
    tree2 = generate(BaselineKind.S, 3, make_rng(2), index=index2)
    assert tree2.n == 3
    assert validate_heads(tree2.heads) == VALID


def test_sampling_index_argument_is_mandatory_and_exclusive():
    index = LengthIndex({2: [(0, 2)]})
    with pytest.raises(ValueError):
        generate(BaselineKind.S, 2, make_rng(0))
    with pytest.raises(ValueError):
        generate(BaselineKind.RD, 2, make_rng(0), index=index)


def test_empty_index_rejected():
    with pytest.raises(ValueError):
        LengthIndex({})
    with pytest.raises(ValueError):
        LengthIndex({3: []})


def test_zero_length_rejected():
    for kind in ALL_KINDS:
        with pytest.raises(ValueError):
            generate(kind, 0, make_rng(0), index=None)


def test_every_kind_yields_valid_trees():
    index = build_length_index(make_treebank([(0,), (2, 0, 2), (2, 3, 0, 3, 3)]))
    rng = make_rng(77)
    for kind in ALL_KINDS:
        for n in (1, 2, 3, 5, 8, 13, 21, 40):
            for _ in range(12):
                kw = {"index": index} if kind is BaselineKind.S else {}
                tree = generate(kind, n, rng, **kw)
                assert tree.n == n
                assert validate_heads(tree.heads) == VALID


def test_generation_is_reproducible():
    index = build_length_index(make_treebank([(2, 0, 2), (0, 1)]))
    for kind in ALL_KINDS:
        kw = {"index": index} if kind is BaselineKind.S else {}
        a = [generate(kind, 7, make_rng(5), **kw).heads for _ in range(3)]
        b = [generate(kind, 7, make_rng(5), **kw).heads for _ in range(3)]
        assert a == b


def test_row_labels():
    assert [k.value for k in BaselineKind] == ["A", "R", "L", "RD", "RD*", "LI", "LI*", "S"]
