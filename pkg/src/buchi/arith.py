"""Exact residue arithmetic modulo odd prime powers.

Orders and lengths use ``math.inf`` for the infinite value, so ordinary
comparison, ``max`` and ``+ 1`` already behave as extended arithmetic.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import CapExceeded, InvalidInput, ModulusMismatch

INF = math.inf
DEFAULT_MAX_MODULUS = 2**20

# p-adic order: a non-negative int, or INF for the zero class.
ExtOrder = Union[int, float]

_max_modulus_override: int | None = None


def max_modulus() -> int:
    """Current table cap: explicit override, then $BUCHI_MAX_MODULUS, then 2**20."""
    if _max_modulus_override is not None:
        return _max_modulus_override
    env = os.environ.get("BUCHI_MAX_MODULUS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInput(f"BUCHI_MAX_MODULUS must be an integer, got {env!r}")
    return DEFAULT_MAX_MODULUS


def set_max_modulus(cap: int | None) -> None:
    global _max_modulus_override
    if cap is not None and cap < 3:
        raise InvalidInput(f"modulus cap must be >= 3, got {cap}")
    _max_modulus_override = cap


def check_cap(m: int) -> None:
    cap = max_modulus()
    if m > cap:
        raise CapExceeded(f"modulus {m} exceeds the configured cap {cap}")


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_even_finite(t: ExtOrder) -> bool:
    """True for finite even orders; infinity has no parity."""
    return t != INF and t % 2 == 0


def is_odd_finite(t: ExtOrder) -> bool:
    return t != INF and t % 2 == 1


@dataclass(frozen=True)
class PrimePowerModulus:
    p: int
    s: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_odd_prime(self.p):
            raise InvalidInput(f"p must be an odd prime, got {self.p!r}")
        if not isinstance(self.s, int) or self.s < 1:
            raise InvalidInput(f"s must be a positive integer, got {self.s!r}")

    @property
    def m(self) -> int:
        return self.p**self.s

    def residue(self, value: int) -> Residue:
        return Residue(value, self)

    def lower(self, s: int) -> PrimePowerModulus:
        return PrimePowerModulus(self.p, s)

    def __str__(self):
        return f"{self.p}^{self.s}"


@dataclass(frozen=True)
class Residue:
    """Canonical representative in [0, m); any integer is reduced on entry."""

    value: int
    mod: PrimePowerModulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.mod.m)

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.mod != self.mod:
                raise ModulusMismatch(f"{self.mod} vs {other.mod}")
            return other.value
        return other

    def __add__(self, other):
        return Residue(self.value + self._other(other), self.mod)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._other(other), self.mod)

    def __mul__(self, other):
        return Residue(self.value * self._other(other), self.mod)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.mod)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


def _ord_int(value: int, p: int, s: int) -> ExtOrder:
    if value == 0:
        return INF
    t = 0
    while value % p == 0 and t < s - 1:
        value //= p
        t += 1
    return t


def padic_ord(x: Residue) -> ExtOrder:
    return _ord_int(x.value, x.mod.p, x.mod.s)


def unit_part(x: Residue) -> tuple[ExtOrder, Residue]:
    """Split ``x = p**t * g`` with ``g`` a unit; ``g`` is reported modulo p.

    The zero class gives ``(INF, 0)``.
    """
    p, s = x.mod.p, x.mod.s
    base = x.mod.lower(1)
    t = padic_ord(x)
    if t == INF:
        return INF, Residue(0, base)
    g = (x.value // p**t) % p ** (s - t)
    return t, Residue(g, base)


def unit_part_lifted(x: Residue) -> tuple[ExtOrder, Residue | None]:
    """Like :func:`unit_part` but keeps ``g`` modulo ``p**(s - t)``."""
    p, s = x.mod.p, x.mod.s
    t = padic_ord(x)
    if t == INF:
        return INF, None
    return t, Residue(x.value // p**t, x.mod.lower(s - t))


def qr_mod_p(u: int, p: int) -> bool:
    """Euler's criterion; 0 counts as a square."""
    u %= p
    return u == 0 or pow(u, (p - 1) // 2, p) == 1


def least_nonresidue(p: int) -> int:
    for n in range(2, p):
        if not qr_mod_p(n, p):
            return n
    raise InvalidInput(f"no quadratic non-residue modulo {p}")


def is_square_residue(y: Residue) -> bool:
    if y.value == 0:
        return True
    t, g = unit_part(y)
    return t % 2 == 0 and qr_mod_p(g.value, y.mod.p)


class SquareTable(frozenset):
    """Frozen set of the squares mod m, tagged with its modulus."""

    def __new__(cls, mod: PrimePowerModulus, values):
        self = super().__new__(cls, values)
        self.mod = mod
        return self

    def __reduce__(self):
        return (SquareTable, (self.mod, frozenset(self)))


def square_table(mod: PrimePowerModulus) -> SquareTable:
    check_cap(mod.m)
    return _square_table(mod)


@lru_cache(maxsize=None)
def _square_table(mod: PrimePowerModulus) -> SquareTable:
    m = mod.m
    return SquareTable(mod, (x * x % m for x in range(m)))


def square_mask(mod: PrimePowerModulus) -> np.ndarray:
    """Boolean array ``mask[y]`` = y is a square mod m (read-only)."""
    check_cap(mod.m)
    return _square_mask(mod)


@lru_cache(maxsize=None)
def _square_mask(mod: PrimePowerModulus) -> np.ndarray:
    m = mod.m
    x = np.arange(m, dtype=np.int64)
    mask = np.zeros(m, dtype=bool)
    mask[(x * x) % m] = True
    mask.setflags(write=False)
    return mask


def order_array(mod: PrimePowerModulus) -> np.ndarray:
    """Float array of p-adic orders of 0..m-1, with inf at 0 (read-only)."""
    check_cap(mod.m)
    return _order_array(mod)


@lru_cache(maxsize=None)
def _order_array(mod: PrimePowerModulus) -> np.ndarray:
    p, s, m = mod.p, mod.s, mod.m
    orders = np.zeros(m, dtype=np.float64)
    orders[0] = INF
    for t in range(1, s):
        orders[p**t :: p**t] = t
    orders.setflags(write=False)
    return orders
