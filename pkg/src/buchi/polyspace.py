"""Quadratic polynomials over Z/p^s and the square-of-a-polynomial test."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .arith import (
    PrimePowerModulus,
    Residue,
    check_cap,
    is_square_residue,
    order_array,
    padic_ord,
    square_mask,
)
from .errors import BudgetExceeded, ModulusMismatch

DEFAULT_ORACLE_BUDGET = 27**5


@dataclass(frozen=True)
class QuadPoly:
    """``f2*x**2 + f1*x + f0`` with coefficients reduced into [0, m)."""

    f2: int
    f1: int
    f0: int
    mod: PrimePowerModulus

    def __post_init__(self):
        m = self.mod.m
        for name in ("f2", "f1", "f0"):
            object.__setattr__(self, name, int(getattr(self, name)) % m)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.f2, self.f1, self.f0)

    def __call__(self, x: int) -> int:
        return evaluate(self, x)


def evaluate(f: QuadPoly, x: int) -> int:
    m = f.mod.m
    x %= m
    return (f.f2 * x * x + f.f1 * x + f.f0) % m


class LinearSquareIndex:
    """All coefficient triples ``(a*a, 2*a*b, b*b) mod m``.

    Stored as ``(A, B) -> frozenset of C`` so the search can pull every
    trivial constant term for a fixed leading pair at once.
    """

    def __init__(self, mod: PrimePowerModulus, table: dict[tuple[int, int], frozenset[int]]):
        self.mod = mod
        self._table = table

    def __contains__(self, triple) -> bool:
        a, b, c = triple
        return c in self._table.get((a, b), ())

    def __len__(self) -> int:
        return sum(len(v) for v in self._table.values())

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        for (a, b), cs in self._table.items():
            for c in cs:
                yield (a, b, c)

    def constants_for(self, f2: int, f1: int) -> frozenset[int]:
        return self._table.get((f2, f1), frozenset())


def build_linear_square_index(mod: PrimePowerModulus) -> LinearSquareIndex:
    """Enumerate every (a, b) once; O(m**2). Cached per modulus."""
    check_cap(mod.m)
    return _build_index(mod)


@lru_cache(maxsize=None)
def _build_index(mod: PrimePowerModulus) -> LinearSquareIndex:
    m = mod.m
    acc: dict[tuple[int, int], set[int]] = {}
    b = np.arange(m, dtype=np.int64)
    b_sq = (b * b) % m
    for a in range(m):
        lead = a * a % m
        mids = (2 * a * b) % m
        for mid, c in zip(mids.tolist(), b_sq.tolist()):
            acc.setdefault((lead, mid), set()).add(c)
    return LinearSquareIndex(mod, {k: frozenset(v) for k, v in acc.items()})


def linear_root(f: QuadPoly) -> tuple[int, int] | None:
    """Some (a, b) with (a*x + b)**2 == f mod m, found in O(m) without an index."""
    m = f.mod.m
    x = np.arange(m, dtype=np.int64)
    sq = (x * x) % m
    a_roots = np.flatnonzero(sq == f.f2)
    b_roots = np.flatnonzero(sq == f.f0)
    for a in a_roots.tolist():
        hits = b_roots[(2 * a * b_roots) % m == f.f1]
        if hits.size:
            return a, int(hits[0])
    return None


def _check_index(f: QuadPoly, idx: LinearSquareIndex) -> None:
    if idx.mod != f.mod:
        raise ModulusMismatch(f"index built for {idx.mod}, polynomial is mod {f.mod}")


def is_square_of_linear(f: QuadPoly, idx: LinearSquareIndex | None = None) -> bool:
    """Membership in the index when given one, else a direct O(m) root search."""
    if idx is None:
        return linear_root(f) is not None
    _check_index(f, idx)
    return f.coeffs in idx


def is_square_poly(f: QuadPoly, idx: LinearSquareIndex | None = None) -> bool:
    """Decide whether f is congruent to the square of some polynomial mod p^s.

    Two ways to be a square: the constant term strictly dominates in p-adic
    order and is itself a square, or f is the square of a linear polynomial.
    """
    if idx is not None:
        _check_index(f, idx)
    mod = f.mod
    o0 = padic_ord(Residue(f.f0, mod))
    lead = min(padic_ord(Residue(f.f1, mod)), padic_ord(Residue(f.f2, mod)))
    if o0 < lead and is_square_residue(Residue(f.f0, mod)):
        return True
    return is_square_of_linear(f, idx)


def trivial_mask(mod: PrimePowerModulus, f2: int, f1: int, idx: LinearSquareIndex | None = None) -> np.ndarray:
    """``mask[f0]`` = ``is_square_poly((f2, f1, f0))`` for every f0 at once."""
    if idx is None:
        idx = build_linear_square_index(mod)
    elif idx.mod != mod:
        raise ModulusMismatch(f"index built for {idx.mod}, requested {mod}")
    f2 %= mod.m
    f1 %= mod.m
    orders = order_array(mod)
    lead = min(padic_ord(Residue(f1, mod)), padic_ord(Residue(f2, mod)))
    mask = (orders < lead) & square_mask(mod)
    consts = idx.constants_for(f2, f1)
    if consts:
        mask[np.fromiter(consts, dtype=np.int64, count=len(consts))] = True
    return mask


def _check_budget(m: int, d: int, budget: int) -> None:
    if d < 0:
        raise ValueError("degree_bound must be >= 0")
    if m ** (d + 1) > budget:
        raise BudgetExceeded(f"{m}^{d + 1} candidates exceed budget {budget}")


@lru_cache(maxsize=None)
def bounded_square_quadratics(mod: PrimePowerModulus, degree_bound: int) -> dict[tuple[int, int, int], tuple[int, ...]]:
    """Every quadratic that is phi**2 mod m for some phi of degree <= d.

    Exhaustive over phi's coefficients, chosen from the top degree down. Once
    c_d..c_k are fixed the coefficient of x**j in phi**2 is determined for
    j >= k + d, so degrees above 2 are required to vanish as soon as they
    are determined. Maps ``(f2, f1, f0)`` to the first phi found (lowest
    coefficient first). Shares no code with :func:`is_square_poly`.
    """
    m = mod.m
    d = degree_bound
    coeffs = [0] * (d + 1)
    found: dict[tuple[int, int, int], tuple[int, ...]] = {}

    def square_coeff(j: int) -> int:
        return sum(coeffs[a] * coeffs[j - a] for a in range(max(0, j - d), min(j, d) + 1)) % m

    def descend(k: int) -> None:
        for c in range(m):
            coeffs[k] = c
            if k > 0:
                if k + d <= 2 or square_coeff(k + d) == 0:
                    descend(k - 1)
                continue
            if all(square_coeff(j) == 0 for j in range(3, d + 1)):
                key = (square_coeff(2), square_coeff(1), square_coeff(0))
                found.setdefault(key, tuple(coeffs))
        coeffs[k] = 0

    descend(d)
    return found


def find_square_root_bounded(
    f: QuadPoly, degree_bound: int = 4, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[int, ...] | None:
    """A phi of degree <= d with phi**2 == f mod m (lowest coefficient first), or None."""
    _check_budget(f.mod.m, degree_bound, budget)
    return bounded_square_quadratics(f.mod, degree_bound).get(f.coeffs)


def oracle_is_square_poly_bounded(
    f: QuadPoly, degree_bound: int = 4, budget: int = DEFAULT_ORACLE_BUDGET
) -> bool:
    return find_square_root_bounded(f, degree_bound, budget) is not None


def all_polys(mod: PrimePowerModulus) -> Iterator[QuadPoly]:
    m = mod.m
    for f2 in range(m):
        for f1 in range(m):
            for f0 in range(m):
                yield QuadPoly(f2, f1, f0, mod)
