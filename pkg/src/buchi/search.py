"""Exhaustive search for the longest non-trivial runs of square values."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Literal, Union

import numpy as np

from .arith import (
    INF,
    PrimePowerModulus,
    check_cap,
    least_nonresidue,
    max_modulus,
    set_max_modulus,
    square_mask,
    SquareTable,
    square_table,
)
from .errors import InvalidInput, ModulusMismatch
from .polyspace import LinearSquareIndex, QuadPoly, build_linear_square_index, trivial_mask

# A run length or opt value: non-negative int, or INF.
Length = Union[int, float]


def successor(n: Length) -> Length:
    return n + 1


def default_jobs() -> int:
    env = os.environ.get("BUCHI_JOBS")
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise InvalidInput(f"BUCHI_JOBS must be an integer, got {env!r}")


@dataclass(frozen=True)
class SearchOutcome:
    length: Length
    witness: QuadPoly | None = None
    trivial_only: bool = False

    @property
    def opt(self) -> Length:
        return successor(self.length)


def square_run(f: QuadPoly, limit: int, tbl: SquareTable | None = None) -> int:
    """Number of leading squares among f(1), f(2), ..., capped at ``limit``.

    Steps by finite differences: f(x+1) - f(x) = 2*f2*x + f2 + f1.
    """
    m = f.mod.m
    if tbl is None:
        tbl = square_table(f.mod)
    value = (f.f2 + f.f1 + f.f0) % m
    step = (3 * f.f2 + f.f1) % m
    accel = (2 * f.f2) % m
    n = 0
    while n < limit and value in tbl:
        n += 1
        value = (value + step) % m
        step = (step + accel) % m
    return n


def buchi_length(f: QuadPoly, tbl: SquareTable | None = None) -> Length:
    """Longest N with f(1..N) all squares mod m; INF if every value is a square.

    f is periodic with period m, so m evaluations decide the infinite case.
    """
    if tbl is not None and tbl.mod != f.mod:
        raise ModulusMismatch(f"square table built for {tbl.mod}, polynomial is mod {f.mod}")
    n = square_run(f, f.mod.m, tbl)
    return INF if n == f.mod.m else n


def _resolve(mod: PrimePowerModulus, idx: LinearSquareIndex | None) -> LinearSquareIndex:
    check_cap(mod.m)
    if idx is None:
        return build_linear_square_index(mod)
    if idx.mod != mod:
        raise ModulusMismatch(f"index built for {idx.mod}, requested {mod}")
    return idx


def ml_f1(mod: PrimePowerModulus, f2: int, f1: int, idx: LinearSquareIndex | None = None) -> SearchOutcome:
    """Maximal non-trivial run length over all constant terms f0.

    All f0 are advanced together; trivial ones are dropped before the first
    step. The witness is the smallest f0 attaining the maximum.
    """
    idx = _resolve(mod, idx)
    m = mod.m
    f2 %= m
    f1 %= m
    alive = np.flatnonzero(~trivial_mask(mod, f2, f1, idx))
    if alive.size == 0:
        return SearchOutcome(0, None, True)
    sq = square_mask(mod)
    for x in range(1, m + 1):
        shift = (f2 * x * x + f1 * x) % m
        survivors = alive[sq[(alive + shift) % m]]
        if survivors.size == 0:
            return SearchOutcome(x - 1, QuadPoly(f2, f1, int(alive[0]), mod))
        alive = survivors
    return SearchOutcome(INF, QuadPoly(f2, f1, int(alive[0]), mod))


def _better(new: SearchOutcome, best: SearchOutcome | None) -> bool:
    if best is None:
        return True
    if best.trivial_only:
        return not new.trivial_only
    return not new.trivial_only and new.length > best.length


def _ml_f1_range(
    p: int, s: int, f2: int, f1s: Iterable[int], cap: int | None = None, idx: LinearSquareIndex | None = None
) -> SearchOutcome:
    if cap is not None:
        set_max_modulus(cap)
    mod = PrimePowerModulus(p, s)
    best = None
    for f1 in f1s:
        out = ml_f1(mod, f2, f1, idx)
        if _better(out, best):
            best = out
            if best.length == INF:
                break
    return best


def _merge(outcomes: Iterable[SearchOutcome]) -> SearchOutcome:
    # inputs arrive in ascending f1 order; strict improvement keeps the smallest witness
    best = None
    for out in outcomes:
        if _better(out, best):
            best = out
    return best


def ml_opt(mod: PrimePowerModulus, f2: int, idx: LinearSquareIndex | None = None, jobs: int = 1) -> SearchOutcome:
    """Maximise :func:`ml_f1` over every f1; ``.opt`` is the optimal bound."""
    idx = _resolve(mod, idx)
    f2 %= mod.m
    if jobs <= 1:
        return _ml_f1_range(mod.p, mod.s, f2, range(mod.m), idx=idx)
    size = -(-mod.m // jobs)
    chunks = [range(lo, min(lo + size, mod.m)) for lo in range(0, mod.m, size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_ml_f1_range, *zip(*[(mod.p, mod.s, f2, c, max_modulus()) for c in chunks]))
        return _merge(parts)


def representatives(mod: PrimePowerModulus) -> list[int]:
    """One f2 per (order, character) class, ascending, with 0 for infinite order."""
    p, s, m = mod.p, mod.s, mod.m
    n = least_nonresidue(p)
    reps = {p**t * g % m for t in range(s) for g in (1, n)}
    return sorted(reps | {0})


@dataclass
class SweepRecord:
    p: int
    s: int
    f2: int
    opt_brute: Length | None = None
    witness: QuadPoly | None = None
    trivial_only: bool | None = None
    opt_formula: Length | None = None
    elapsed_ms: float | None = None

    @property
    def modulus(self) -> int:
        return self.p**self.s


def select_f2(mod: PrimePowerModulus, selection: Literal["all", "representatives"]) -> list[int]:
    if selection == "all":
        return list(range(mod.m))
    if selection == "representatives":
        return representatives(mod)
    raise ValueError(f"unknown f2 selection {selection!r}")


def _sweep_one(p: int, s: int, f2: int, cap: int | None = None) -> SweepRecord:
    if cap is not None:
        set_max_modulus(cap)
    mod = PrimePowerModulus(p, s)
    t0 = time.perf_counter()
    out = ml_opt(mod, f2)
    elapsed = (time.perf_counter() - t0) * 1000
    return SweepRecord(p, s, f2, out.opt, out.witness, out.trivial_only, elapsed_ms=elapsed)


def sweep(mod: PrimePowerModulus, selection: Literal["all", "representatives"] = "all", jobs: int = 1) -> list[SweepRecord]:
    """Brute-force opt for each selected f2, in ascending f2 order."""
    check_cap(mod.m)
    f2s = select_f2(mod, selection)
    if jobs <= 1:
        return [_sweep_one(mod.p, mod.s, f2) for f2 in f2s]
    cap = max_modulus()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_one, [mod.p] * len(f2s), [mod.s] * len(f2s), f2s, [cap] * len(f2s)))
