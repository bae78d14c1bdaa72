import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eispack.enumeration import iter_wheels
from eispack.errors import IntegerOverflow, NonPositiveSum, NotEisenstein, NotPrimitive
from eispack.forms import roots_with_outer_curvature
from eispack.quadruples import (
    SwapKind,
    apply_swap,
    apply_word,
    congruence_predicates,
    content,
    has_stationary_symmetry,
    is_primitive,
    is_reduced,
    is_reduced_word,
    is_strip,
    packing_type,
    reduce,
    standard_position,
    swap_classification,
    validate,
    word_to_str,
)

ROOTS = [tuple(r) for n in range(0, 16) for r in roots_with_outer_curvature(n)]
roots = st.sampled_from(ROOTS)
words = st.lists(st.integers(1, 4), max_size=20)


def _eisenstein(q):
    a, b, c, d = q
    return a * a + b * b + c * c + d * d == 2 * (a + c) * (b + d)


@pytest.mark.parametrize("q", [(-5, 11, 20, 12), (0, 0, 1, 1), (-1, 3, 4, 2), (-4, 12, 19, 7)])
def test_validate_accepts(q):
    assert tuple(validate(*q)) == q


def test_validate_rejects():
    with pytest.raises((NotEisenstein, NonPositiveSum)):
        validate(1, 1, -1, -1)
    with pytest.raises(NotEisenstein):
        validate(1, 1, 1, 1)
    with pytest.raises(NonPositiveSum):
        validate(0, 0, 0, 0)
    with pytest.raises(IntegerOverflow):
        validate(1 << 63, 0, 0, 0)


@pytest.mark.parametrize(
    "q,i,expected",
    [((0, 0, 1, 1), 1, (2, 0, 1, 1)), ((0, 0, 1, 1), 3, (0, 0, 1, 1)), ((-5, 11, 20, 12), 1, (51, 11, 20, 12))],
)
def test_apply_swap_examples(q, i, expected):
    assert apply_swap(q, i) == expected


@pytest.mark.parametrize(
    "q,i,kind",
    [((2, 0, 1, 1), 1, SwapKind.DECREASING), ((0, 0, 1, 1), 3, SwapKind.STATIONARY)]
    + [((-5, 11, 20, 12), i, SwapKind.INCREASING) for i in range(1, 5)],
)
def test_swap_classification(q, i, kind):
    assert swap_classification(q, i) is kind


@given(roots, words, st.integers(1, 4))
def test_swap_involution_and_equation(root, word, i):
    q = apply_word(root, word)
    assert _eisenstein(q) and sum(q) > 0
    assert apply_swap(apply_swap(q, i), i) == q


@given(roots, words)
def test_swaps_commute_across_opposite_pairs(root, word):
    q = apply_word(root, word)
    assert apply_word(q, (1, 3)) == apply_word(q, (3, 1))
    assert apply_word(q, (2, 4)) == apply_word(q, (4, 2))


@given(roots, words)
def test_content_is_orbit_invariant(root, word):
    assert content(apply_word(root, word)) == content(root) == 1


@given(roots, words)
def test_lemma_pairs_nonnegative(root, word):
    a, b, c, d = apply_word(root, word)
    assert a + c > 0 and b + d > 0
    assert min(a + b, a + d, b + c, c + d) >= 0


def test_reduction_confluence():
    rng = random.Random(5)
    for root in ROOTS:
        for _ in range(60):
            word = [rng.randint(1, 4) for _ in range(rng.randint(0, 20))]
            assert reduce(apply_word(root, word))[0] == root, (root, word)


@given(roots, words)
def test_reduction_word_replays(root, word):
    q = apply_word(root, word)
    got, w = reduce(q)
    end = apply_word(q, w)
    assert is_reduced(end)
    assert sorted(end) == sorted(got)


@pytest.mark.parametrize(
    "q,root,word",
    [((2, 0, 1, 1), (0, 0, 1, 1), (1,)), ((-5, 11, 20, 12), (-5, 11, 20, 12), ()), ((51, 11, 20, 12), (-5, 11, 20, 12), (1,))],
)
def test_reduce_examples(q, root, word):
    assert reduce(q) == (root, word)
    assert word_to_str(word) == [f"S{i}" for i in word]


@pytest.mark.parametrize("root", ROOTS)
def test_roots_satisfy_root_invariants(root):
    a, b, c, d = root
    assert is_reduced(root)
    assert (a - b) % 2 == 0 and (c - d) % 2 == 0
    assert a <= 0 and a == min(root)


def test_standard_position():
    assert standard_position((-5, 11, 20, 12)) == (-5, 11, 20, 12)
    assert standard_position((-5, 12, 20, 11)) == (-5, 11, 20, 12)
    assert not is_primitive((2, 4, 6, 8))
    with pytest.raises(NotPrimitive):
        standard_position((2, 4, 6, 8))


@pytest.mark.parametrize("q,expected", [((0, 0, 1, 1), True), ((-3, 5, 14, 10), False), ((-5, 11, 20, 12), False)])
def test_stationary_symmetry(q, expected):
    assert has_stationary_symmetry(q) is expected


def test_strip_detection():
    assert is_strip((0, 0, 1, 1))
    assert not is_strip((-1, 3, 4, 2))


@pytest.mark.parametrize("q,t", [((-4, 12, 19, 7), 3), ((-3, 5, 14, 10), 1), ((0, 0, 1, 1), 1), ((-1, 3, 4, 2), 3)])
def test_packing_type(q, t):
    assert packing_type(q) == t
    assert congruence_predicates(q).type_t == t


@given(st.lists(st.integers(1, 4), min_size=1, max_size=12))
def test_reduced_word_rules(word):
    ok = all(p != n and (p, n) not in ((3, 1), (4, 2)) for p, n in zip(word, word[1:]))
    assert is_reduced_word(word) is ok


@given(roots, words)
def test_congruence_predicates_hold_on_orbit(root, word):
    rep = congruence_predicates(apply_word(root, word))
    assert rep.all_ok
    assert rep.type_t == packing_type(root)


def test_mod3_pattern_never_alternates():
    # brute force over the orbit rather than the predicate
    for root in ROOTS[:12]:
        for q, _ in iter_wheels(root, 3000):
            r = [x % 3 for x in q]
            assert r not in ([1, 2, 1, 2], [2, 1, 2, 1])


@pytest.mark.parametrize("root", [(-1, 3, 4, 2), (-5, 11, 20, 12), (-3, 5, 14, 10), (-2, 8, 11, 3)])
def test_three_smallest_curvatures(root):
    a, b, c, d = root
    floor = max(b, d)
    for q, last in iter_wheels(root, 5000):
        if last:
            assert q[last - 1] >= floor
    assert c >= floor
