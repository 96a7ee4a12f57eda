"""Closed-form optimal bounds, reduced to three constants per prime.

The constants opt(p, 0), opt(p, n) and opt(p, 1) at modulus p have no known
closed form, so they are computed once by exhaustive search and cached.
Everything else follows from the order/character case split of f2.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .arith import INF, PrimePowerModulus, Residue, least_nonresidue, qr_mod_p, unit_part_lifted
from .errors import InvalidInput
from .search import Length, ml_opt

OptValue = Length


@dataclass(frozen=True)
class BaseConstants:
    p: int
    nonresidue: int
    opt_linear: OptValue
    opt_nonsquare: OptValue
    opt_unit_square: OptValue


_cache: dict[int, BaseConstants] = {}
_cache_lock = threading.Lock()


def base_constants(p: int) -> BaseConstants:
    """Memoised opt(p, 0), opt(p, n) for the least non-residue n, and opt(p, 1)."""
    hit = _cache.get(p)
    if hit is not None:
        return hit
    mod = PrimePowerModulus(p, 1)
    n = least_nonresidue(p)
    nonsquare = ml_opt(mod, n).opt
    if p == 3 and nonsquare != INF:
        raise AssertionError(f"search found opt(3, 2) = {nonsquare}, expected infinity")
    consts = BaseConstants(
        p=p,
        nonresidue=n,
        opt_linear=ml_opt(mod, 0).opt,
        opt_nonsquare=nonsquare,
        opt_unit_square=ml_opt(mod, 1).opt,
    )
    with _cache_lock:
        return _cache.setdefault(p, consts)


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def _unit_case(p: int, s: int, unit: int) -> OptValue:
    # f2 invertible modulo p**s
    base = base_constants(p)
    if qr_mod_p(unit, p):
        r = s // 2
        if s % 2 == 0:
            return p**r
        return base.opt_unit_square * p**r
    if p == 3:
        return INF if s == 1 else 5
    return base.opt_nonsquare


def formula_opt(mod: PrimePowerModulus, f2: int | Residue) -> OptValue:
    if isinstance(f2, Residue):
        if f2.mod != mod:
            raise InvalidInput(f"f2 is a residue mod {f2.mod}, expected {mod}")
        f2 = f2.value
    if not isinstance(f2, int) or not 0 <= f2 < mod.m:
        raise InvalidInput(f"f2 must be a canonical residue in [0, {mod.m}), got {f2!r}")
    p, s = mod.p, mod.s
    t2, g2 = unit_part_lifted(Residue(f2, mod))
    if t2 == 0:
        return _unit_case(p, s, f2)
    linear = base_constants(p).opt_linear
    if t2 == INF or t2 % 2 == 1:
        return linear
    return max(linear, formula_opt(g2.mod, g2.value))


def corollary_opt(p: int, s: int, t2: int) -> OptValue:
    """opt for f2 = p**t2 * (unit square) with s, t2 positive even and t2 < s."""
    if not (isinstance(s, int) and isinstance(t2, int)):
        raise InvalidInput("s and t2 must be integers")
    if p < 3 or p % 2 == 0:
        raise InvalidInput(f"p must be an odd prime, got {p}")
    if t2 <= 0 or s <= 0 or t2 % 2 or s % 2 or t2 >= s:
        raise InvalidInput(f"need positive even t2 < s with s even, got s={s}, t2={t2}")
    return p ** ((s - t2) // 2)


def predicted_infinite(mod: PrimePowerModulus, f2: int) -> bool:
    """Where opt(p**s, f2) is infinite: p = 3, t2 = s - 1 even, unit part = 2 mod 3."""
    t2, g2 = unit_part_lifted(Residue(f2, mod))
    return mod.p == 3 and t2 != INF and t2 % 2 == 0 and mod.s - t2 == 1 and g2.value % 3 == 2
