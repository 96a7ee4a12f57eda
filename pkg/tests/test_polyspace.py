import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from buchi.arith import PrimePowerModulus
from buchi.errors import BudgetExceeded, ModulusMismatch
from buchi.polyspace import (
    QuadPoly,
    all_polys,
    build_linear_square_index,
    evaluate,
    find_square_root_bounded,
    is_square_of_linear,
    is_square_poly,
    oracle_is_square_poly_bounded,
    trivial_mask,
)

M9, M27, M625 = PrimePowerModulus(3, 2), PrimePowerModulus(3, 3), PrimePowerModulus(5, 4)


def expand_square(phi, m):
    out = [0] * (2 * len(phi) - 1)
    for i, a in enumerate(phi):
        for j, b in enumerate(phi):
            out[i + j] = (out[i + j] + a * b) % m
    return out


def test_eval_examples():
    assert evaluate(QuadPoly(25, 0, 125, M625), 1) == 150
    assert all(evaluate(QuadPoly(0, 0, 7, M27), x) == 7 for x in range(-5, 40))
    f = QuadPoly(1, 2, 1, M9)
    assert evaluate(f, 2) == 0 == f(2)


def test_quadpoly_reduces():
    f = QuadPoly(-1, 28, 9, M27)
    assert f.coeffs == (26, 1, 9)


def test_linear_index_examples():
    idx3 = build_linear_square_index(PrimePowerModulus(3, 1))
    assert (1, 2, 1) in idx3
    assert (2, 0, 0) not in idx3
    idx9 = build_linear_square_index(M9)
    direct = any(a * a % 9 == 0 and 2 * a * b % 9 == 3 and b * b % 9 == 7 for a in range(9) for b in range(9))
    assert ((0, 3, 7) in idx9) == direct


@pytest.mark.parametrize("p,s", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])
def test_linear_index_is_exact(p, s):
    m = p**s
    expected = {(a * a % m, 2 * a * b % m, b * b % m) for a in range(m) for b in range(m)}
    idx = build_linear_square_index(PrimePowerModulus(p, s))
    assert set(idx) == expected
    assert len(idx) == len(expected)


def test_is_square_of_linear_examples():
    assert is_square_of_linear(QuadPoly(1, 2, 1, M27))
    assert not is_square_of_linear(QuadPoly(25, 0, 125, M625))
    assert is_square_of_linear(QuadPoly(0, 0, 4, M27))


def test_modulus_mismatch():
    idx = build_linear_square_index(M9)
    with pytest.raises(ModulusMismatch):
        is_square_of_linear(QuadPoly(1, 2, 1, M27), idx)
    with pytest.raises(ModulusMismatch):
        is_square_poly(QuadPoly(1, 2, 1, M27), idx)


def test_is_square_poly_examples():
    assert not is_square_poly(QuadPoly(25, 0, 125, M625))
    f = QuadPoly(9, 3, 1, M27)
    assert is_square_poly(f)
    assert oracle_is_square_poly_bounded(f, 4)
    assert is_square_poly(QuadPoly(0, 0, 0, M9))
    # f1 = f2 = 0 and f0 a non-zero square: trivial through the order branch
    assert is_square_poly(QuadPoly(0, 0, 4, M27))


def test_oracle_examples():
    assert oracle_is_square_poly_bounded(QuadPoly(1, 2, 1, M9), 1)
    assert not oracle_is_square_poly_bounded(QuadPoly(0, 0, 2, PrimePowerModulus(3, 1)), 3)


def test_oracle_witness_squares_back():
    for f in all_polys(M9):
        phi = find_square_root_bounded(f, 4)
        if phi is not None:
            sq = expand_square(phi, 9)
            assert sq[:3] == [f.f0, f.f1, f.f2]
            assert not any(sq[3:])


def test_oracle_budget():
    with pytest.raises(BudgetExceeded):
        oracle_is_square_poly_bounded(QuadPoly(1, 0, 0, PrimePowerModulus(5, 3)), 4)


def test_triviality_exhaustive_mod9():
    for f in all_polys(M9):
        assert is_square_poly(f) == oracle_is_square_poly_bounded(f, 4), f


def test_triviality_sampled_mod27():
    rng = random.Random(1234)
    for _ in range(2000):
        f = QuadPoly(rng.randrange(27), rng.randrange(27), rng.randrange(27), M27)
        assert is_square_poly(f) == oracle_is_square_poly_bounded(f, 4), f


@pytest.mark.parametrize("p,s", [(3, 2), (3, 3), (5, 2), (7, 1)])
def test_unit_leading_coefficient_needs_linear_root(p, s):
    mod = PrimePowerModulus(p, s)
    for f in all_polys(mod):
        if f.f2 % p:
            assert is_square_poly(f) == is_square_of_linear(f)


@pytest.mark.parametrize("p,s", [(3, 2), (3, 3), (5, 2), (5, 3)])
def test_trivial_mask_matches_scalar(p, s):
    mod = PrimePowerModulus(p, s)
    rng = random.Random(p * 100 + s)
    pairs = [(0, 0), (0, p), (p, 0)] + [(rng.randrange(mod.m), rng.randrange(mod.m)) for _ in range(20)]
    for f2, f1 in pairs:
        mask = trivial_mask(mod, f2, f1)
        assert mask.tolist() == [is_square_poly(QuadPoly(f2, f1, f0, mod)) for f0 in range(mod.m)]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([(3, 2), (3, 3), (5, 2)]), st.integers(), st.integers(), st.integers(), st.integers())
def test_unit_square_scaling_preserves_triviality(ps, c, f2, f1, f0):
    mod = PrimePowerModulus(*ps)
    if c % mod.p == 0:
        return
    f = QuadPoly(f2, f1, f0, mod)
    k = c * c
    assert is_square_poly(QuadPoly(k * f2, k * f1, k * f0, mod)) == is_square_poly(f)


@pytest.mark.parametrize("p,s", [(3, 2), (3, 3), (5, 2)])
def test_direct_linear_root_matches_index(p, s):
    mod = PrimePowerModulus(p, s)
    idx = build_linear_square_index(mod)
    for f in all_polys(mod):
        assert is_square_of_linear(f) == is_square_of_linear(f, idx)
        assert is_square_poly(f) == is_square_poly(f, idx)
