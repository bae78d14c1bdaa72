import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eispack.errors import LevelTooHigh
from eispack.strongapprox import (
    MOD3_WITNESSES,
    T_INT,
    VTV_INT,
    W_INT,
    EisMod,
    ModMatrix,
    closure,
    closure_mod,
    f2_rank,
    generator_integers,
    generators,
    identity_fibre_from_closure,
    identity_fibre_search,
    mod3_products,
    mod3_surjectivity,
    sl2_mod3_brute_order,
    sl2_order,
    strong_approx_report,
    x_part_mod3,
)

residues = st.integers(0, 63)


def _ident(m):
    return ModMatrix.from_residues((1, 0, 0, 0, 0, 0, 1, 0), m)


def _word(rng, gens, length):
    g = _ident(gens[0].modulus)
    for _ in range(length):
        g = g @ rng.choice(gens)
    return g


def test_omega_relation():
    w = EisMod(0, 1, 16)
    assert w * w == w - EisMod(1, 0, 16)
    # omega is a primitive sixth root of unity
    p = EisMod(1, 0, 16)
    for _ in range(6):
        p = p * w
    assert p.is_one()


@given(residues, residues, residues, residues, residues, residues)
def test_eismod_ring_laws(a, b, c, d, e, f):
    x, y, z = EisMod(a, b, 64), EisMod(c, d, 64), EisMod(e, f, 64)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == EisMod(0, 0, 64)


@pytest.mark.parametrize("k", range(1, 7))
def test_generators_have_det_one(k):
    for g in generators(k):
        assert g.det().is_one()


def test_generator_shapes():
    assert VTV_INT == (1, 0, -2, 0, 0, 0, 1, 0)
    t2 = ModMatrix.from_residues(T_INT, 2)
    assert t2 == _ident(2)
    w2 = ModMatrix.from_residues(W_INT, 2).entries
    assert w2[:4] == (1, 0, 0, 0) and w2[6:] == (1, 0)
    for g, h in zip(generator_integers()[:4], generator_integers()[4:]):
        big = 1 << 20
        assert ModMatrix.from_residues(g, big) @ ModMatrix.from_residues(h, big) == _ident(big)


def test_generators_reject_level_zero():
    with pytest.raises(ValueError):
        generators(0)


def test_closure_orders():
    orders = [closure(k).order for k in range(1, 5)]
    assert orders == [2, 32, 1024, 32768]
    for k, o in enumerate(orders, 1):
        assert sl2_order(2**k) % o == 0
    for lo, hi in zip(orders, orders[1:]):
        assert hi % lo == 0


def test_sl2_order_matches_brute_force():
    assert sl2_order(3) == sl2_mod3_brute_order() == 648
    # SL(2, F_4) has 60 elements
    count = 0
    for res in itertools.product(range(2), repeat=8):
        if ModMatrix.from_residues(res, 2).det().is_one():
            count += 1
    assert count == sl2_order(2) == 60


def test_closure_level_cap():
    with pytest.raises(LevelTooHigh):
        closure(5)


def test_reduction_is_a_homomorphism():
    gens = generators(4)
    rng = random.Random(2)
    for _ in range(50):
        g = _word(rng, gens, rng.randint(1, 30))
        h = _word(rng, gens, rng.randint(1, 30))
        assert (g @ h).reduce(4) == g.reduce(4) @ h.reduce(4)
        assert g.det().is_one()


def test_closure_contains_words_and_is_closed():
    c = closure(3)
    gens = generators(3)
    rng = random.Random(4)
    for _ in range(200):
        assert _word(rng, gens, rng.randint(0, 40)) in c
    elems = c.elements()
    assert np.unique(elems, axis=0).shape[0] == c.order
    for row in elems[rng.sample(range(c.order), 40)]:
        g = ModMatrix.from_residues(row, 8)
        for s in gens[:4]:
            assert g @ s in c


def test_closure_image_projects_onto_lower_level():
    hi = closure(3).elements() % 4
    keys = {tuple(r) for r in hi}
    assert len(keys) == closure(2).order
    assert all(tuple(r) in closure(2) for r in hi[:100])


def test_fibres_from_closure():
    fib = [identity_fibre_from_closure(k) for k in (1, 2, 3)]
    assert fib == [16, 32, 32]
    assert all(64 % f == 0 and f < 64 for f in fib)


def test_fibre_lies_in_trace_even_lifts():
    # I + 2^k M has det 1 mod 2^(k+1) only when trace(M) is even
    elems = closure(3).elements()
    low = elems % 4
    mask = np.all(low == np.array([1, 0, 0, 0, 0, 0, 1, 0]), axis=1)
    M = ((elems[mask] - np.array([1, 0, 0, 0, 0, 0, 1, 0])) % 8) // 4
    assert ((M[:, 0] + M[:, 6]) % 2 == 0).all()
    assert ((M[:, 1] + M[:, 7]) % 2 == 0).all()


@pytest.mark.parametrize("k,budget", [(1, 20000), (2, 60000), (3, 200000)])
def test_search_matches_closure(k, budget):
    res = identity_fibre_search(k, budget=budget)
    assert res.size == identity_fibre_from_closure(k)
    assert res.status == "INCONCLUSIVE"


def test_f2_rank():
    assert f2_rank([]) == 0
    assert f2_rank([1, 2, 3]) == 2
    assert f2_rank([1, 2, 4, 8, 16, 32, 63]) == 6


def test_mod3_surjective():
    assert closure_mod(3).order == 648
    assert mod3_surjectivity()


def test_mod3_witnesses():
    prods = mod3_products()
    for name, x in MOD3_WITNESSES.items():
        assert x_part_mod3(prods[name]) == x
    c = closure_mod(3)
    for g in prods.values():
        assert g in c


def test_products_are_signed_integers():
    # residues mod 2^80 would reduce wrongly mod 3
    assert all(max(map(abs, g)) < 100 for g in mod3_products().values())


def test_report_below_level_four_is_inconclusive():
    rows, verdict = strong_approx_report(2)
    assert [r.order for r in rows] == [2, 32]
    assert [r.method for r in rows] == ["closure", "closure"]
    assert verdict == "INCONCLUSIVE"


@pytest.mark.slow
def test_report_level_four():
    rows, verdict = strong_approx_report(4)
    assert [r.fibre for r in rows] == [16, 32, 32, 64]
    assert verdict == "PASS"
