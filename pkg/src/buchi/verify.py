"""Cross-check the closed forms against exhaustive search, plus lemma checks."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Literal

from .arith import (
    INF,
    PrimePowerModulus,
    Residue,
    is_square_residue,
    least_nonresidue,
    max_modulus,
    padic_ord,
    qr_mod_p,
    set_max_modulus,
    square_table,
    unit_part_lifted,
)
from .errors import CapExceeded, InvalidInput
from .formulas import formula_opt, predicted_infinite
from .polyspace import QuadPoly, all_polys, is_square_poly, oracle_is_square_poly_bounded
from .search import SearchOutcome, buchi_length, ml_f1, ml_opt, select_f2, square_run

Mode = Literal["all", "representatives"]

LEMMA_SUITES = (
    "periodicity",
    "proposition_trivial",
    "lemma_nonsquare_constant",
    "lemma_unit_linear",
    "lemma_odd_min_order",
    "lemma_odd_linear",
    "lemma_lower_bounds",
    "corollary_even_reduction",
    "unit_square_scaling",
    "hensley",
    "nonresidue_independence",
)


@dataclass(frozen=True)
class GridPoint:
    p: int
    s: int
    mode: Mode = "all"

    def __post_init__(self):
        if self.mode not in ("all", "representatives"):
            raise InvalidInput(f"mode must be 'all' or 'representatives', got {self.mode!r}")
        PrimePowerModulus(self.p, self.s)


def _default_points() -> list[GridPoint]:
    pts = [(3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2), (11, 1), (13, 1)]
    grid = [GridPoint(p, s, "all" if p**s <= 125 else "representatives") for p, s in pts]
    return grid + [GridPoint(3, 5, "representatives"), GridPoint(5, 4, "representatives")]


@dataclass
class GridSpec:
    points: list[GridPoint] = field(default_factory=_default_points)
    lemmas: tuple[str, ...] = LEMMA_SUITES
    jobs: int = 1

    @classmethod
    def from_json(cls, data, jobs: int = 1) -> GridSpec:
        if not isinstance(data, list):
            raise InvalidInput("grid file must hold a JSON list of {p, s, mode} objects")
        points = []
        for item in data:
            if not isinstance(item, dict) or "p" not in item or "s" not in item:
                raise InvalidInput(f"bad grid entry {item!r}")
            points.append(GridPoint(item["p"], item["s"], item.get("mode", "all")))
        return cls(points=points, jobs=jobs)


@dataclass
class PointReport:
    p: int
    s: int
    mode: str
    status: str  # PASS, FAIL or SKIPPED
    compared: int = 0
    mismatches: list[dict] = field(default_factory=list)
    infinite_f2: list[int] = field(default_factory=list)
    elapsed_ms: float = 0.0
    note: str = ""


@dataclass
class LemmaReport:
    name: str
    checked: int
    failures: list[dict] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerifyReport:
    points: list[PointReport] = field(default_factory=list)
    lemmas: list[LemmaReport] = field(default_factory=list)

    @property
    def mismatch_count(self) -> int:
        return sum(len(pt.mismatches) for pt in self.points)

    @property
    def status(self) -> str:
        if self.mismatch_count or any(not lem.passed for lem in self.lemmas):
            return "FAIL"
        return "PASS"

    def to_dict(self, timings: bool = True) -> dict:
        points = [asdict(pt) for pt in self.points]
        lemmas = [
            {"name": lem.name, "checked": lem.checked, "passed": lem.passed,
             "failures": lem.failures, "elapsed_ms": lem.elapsed_ms}
            for lem in self.lemmas
        ]
        if not timings:
            for row in points + lemmas:
                row["elapsed_ms"] = None
        return {
            "status": self.status,
            "mismatches": self.mismatch_count,
            "points": _jsonable(points),
            "lemmas": _jsonable(lemmas),
        }

    def summary(self) -> str:
        lines = [f"{'modulus':>9} {'mode':<16} {'status':<8} {'compared':>8} {'mismatch':>8} {'ms':>9}"]
        for pt in self.points:
            lines.append(
                f"{f'{pt.p}^{pt.s}':>9} {pt.mode:<16} {pt.status:<8} {pt.compared:>8} "
                f"{len(pt.mismatches):>8} {pt.elapsed_ms:>9.0f}"
            )
        if self.lemmas:
            lines.append("")
            lines.append(f"{'lemma suite':<28} {'checked':>8} {'result':<6}")
            for lem in self.lemmas:
                lines.append(f"{lem.name:<28} {lem.checked:>8} {'pass' if lem.passed else 'FAIL'}")
        lines.append("")
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, float) and obj == INF:
        return "inf"
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _verify_point(point: GridPoint, cap: int | None = None) -> PointReport:
    if cap is not None:
        set_max_modulus(cap)
    t0 = time.perf_counter()
    mod = PrimePowerModulus(point.p, point.s)
    rep = PointReport(point.p, point.s, point.mode, "PASS")
    try:
        f2s = select_f2(mod, point.mode)
        square_table(mod)
    except CapExceeded as exc:
        rep.status, rep.note = "SKIPPED", str(exc)
        return rep
    for f2 in f2s:
        brute = ml_opt(mod, f2)
        formula = formula_opt(mod, f2)
        rep.compared += 1
        if brute.opt == INF:
            rep.infinite_f2.append(f2)
        problems = []
        if brute.opt != formula:
            problems.append("formula")
        if (brute.opt == INF) != predicted_infinite(mod, f2):
            problems.append("infinity")
        if problems:
            w = brute.witness
            rep.mismatches.append({
                "f2": f2, "kind": problems, "opt_brute": brute.opt, "opt_formula": formula,
                "witness": None if w is None else {"f1": w.f1, "f0": w.f0},
            })
    if rep.mismatches:
        rep.status = "FAIL"
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000
    return rep


def verify_main(grid: GridSpec) -> VerifyReport:
    """Formula vs. brute force at every grid point; points over the cap are SKIPPED."""
    if grid.jobs <= 1:
        return VerifyReport(points=[_verify_point(pt) for pt in grid.points])
    cap = max_modulus()
    with ProcessPoolExecutor(max_workers=grid.jobs) as pool:
        points = list(pool.map(_verify_point, grid.points, [cap] * len(grid.points)))
    return VerifyReport(points=points)


# ---------------------------------------------------------------- lemma suite


@lru_cache(maxsize=None)
def _ml(p: int, s: int, f2: int, f1: int) -> SearchOutcome:
    return ml_f1(PrimePowerModulus(p, s), f2, f1)


@lru_cache(maxsize=None)
def _opt(p: int, s: int, f2: int) -> SearchOutcome:
    return ml_opt(PrimePowerModulus(p, s), f2)


def _ords(mod, *values):
    return [padic_ord(Residue(v, mod)) for v in values]


class _Check:
    def __init__(self, name: str):
        self.report = LemmaReport(name, 0)

    def __call__(self, ok: bool, **detail):
        self.report.checked += 1
        if not ok and len(self.report.failures) < 20:
            self.report.failures.append(_jsonable(detail))


def check_periodicity(chk: _Check) -> None:
    mod = PrimePowerModulus(3, 2)
    m = mod.m
    for f in all_polys(mod):
        chk((buchi_length(f) == INF) == (square_run(f, 10 * m) == 10 * m), f=f.coeffs)


def check_proposition_trivial(chk: _Check, samples: int = 2000, seed: int = 20240601) -> None:
    mod = PrimePowerModulus(3, 2)
    for f in all_polys(mod):
        chk(is_square_poly(f) == oracle_is_square_poly_bounded(f, 4), m=9, f=f.coeffs)
    mod = PrimePowerModulus(3, 3)
    rng = random.Random(seed)
    for _ in range(samples):
        f = QuadPoly(rng.randrange(27), rng.randrange(27), rng.randrange(27), mod)
        chk(is_square_poly(f) == oracle_is_square_poly_bounded(f, 4), m=27, f=f.coeffs)


def check_nonsquare_constant(chk: _Check) -> None:
    for p, s in [(3, 2), (3, 3), (5, 2)]:
        mod = PrimePowerModulus(p, s)
        for f in all_polys(mod):
            o2, o1, o0 = _ords(mod, *f.coeffs)
            if o0 < min(o1, o2) and not is_square_residue(Residue(f.f0, mod)):
                chk(buchi_length(f) == 0, modulus=mod.m, f=f.coeffs)


def check_unit_linear(chk: _Check) -> None:
    for p, s in [(3, 2), (3, 3), (5, 2)]:
        m = p**s
        for f2 in range(0, m, p):
            for f1 in range(m):
                if f1 % p:
                    lhs = _ml(p, s, f2, f1).opt
                    rhs = _ml(p, 1, 0, f1 % p).opt
                    chk(lhs == rhs, modulus=m, f2=f2, f1=f1, lhs=lhs, rhs=rhs)


def check_odd_min_order(chk: _Check) -> None:
    for p, s in [(3, 3), (5, 2)]:
        mod = PrimePowerModulus(p, s)
        for f2 in range(mod.m):
            for f1 in range(mod.m):
                low = min(_ords(mod, f2, f1))
                if low != INF and low % 2 == 1:
                    n = _ml(p, s, f2, f1).length
                    chk(n <= 2, modulus=mod.m, f2=f2, f1=f1, ml=n)


def check_odd_linear(chk: _Check) -> None:
    for p, s in [(3, 3), (5, 2), (5, 3)]:
        mod = PrimePowerModulus(p, s)
        for f1 in range(1, mod.m):
            (t1,) = _ords(mod, f1)
            if t1 % 2 == 1:
                n = _ml(p, s, 0, f1).length
                chk(n <= 1, modulus=mod.m, f1=f1, ml=n)


def check_lower_bounds(chk: _Check, points: list[GridPoint]) -> None:
    for pt in points:
        mod = PrimePowerModulus(pt.p, pt.s)
        try:
            square_table(mod)
        except CapExceeded:
            continue
        m = mod.m
        n = _opt(pt.p, pt.s, 0).length
        chk(n >= 1, modulus=m, f2=0, ml=n)
        for f2 in select_f2(mod, pt.mode):
            if f2 == 0 or f2 % pt.p:
                continue
            f = QuadPoly(f2, 1 - 3 * f2, 2 * f2 - 1, mod)
            ok = f(1) == 0 and f(2) == 1 and not is_square_poly(f) and buchi_length(f) >= 2
            ok = ok and _opt(pt.p, pt.s, f2).length >= 2
            chk(ok, modulus=m, f2=f2)


def check_even_reduction(chk: _Check) -> None:
    for p, s in [(3, 3), (5, 2)]:
        mod = PrimePowerModulus(p, s)
        for f2 in range(1, mod.m):
            t2, g2 = unit_part_lifted(Residue(f2, mod))
            if t2 % 2:
                continue
            for f1 in range(mod.m):
                (t1,) = _ords(mod, f1)
                if t2 > t1:
                    continue
                low = s - t2
                lhs = _ml(p, s, f2, f1).opt
                rhs = _ml(p, low, g2.value, (f1 // p**t2) % p**low).opt
                chk(lhs == rhs, modulus=mod.m, f2=f2, f1=f1, lhs=lhs, rhs=rhs)


def check_unit_square_scaling(chk: _Check) -> None:
    for p, s in [(3, 2), (5, 2)]:
        m = p**s
        for f2 in range(m):
            base = _opt(p, s, f2).length
            for c in range(1, m):
                if c % p:
                    scaled = c * c * f2 % m
                    chk(_opt(p, s, scaled).length == base, modulus=m, f2=f2, c=c)


def check_hensley(chk: _Check) -> None:
    for p in (3, 5, 7, 11, 13):
        for f2 in range(1, p):
            if qr_mod_p(f2, p):
                n = _opt(p, 1, f2).length
                chk(n < p, p=p, f2=f2, ml=n)


def check_nonresidue_independence(chk: _Check) -> None:
    for p in (5, 7, 11):
        n = least_nonresidue(p)
        ref = _opt(p, 1, n).opt
        for u in range(1, p):
            if not qr_mod_p(u, p):
                got = _opt(p, 1, u).opt
                chk(got == ref, p=p, nonresidue=u, opt=got, reference=ref)


_SUITES: dict[str, Callable] = {
    "periodicity": check_periodicity,
    "proposition_trivial": check_proposition_trivial,
    "lemma_nonsquare_constant": check_nonsquare_constant,
    "lemma_unit_linear": check_unit_linear,
    "lemma_odd_min_order": check_odd_min_order,
    "lemma_odd_linear": check_odd_linear,
    "corollary_even_reduction": check_even_reduction,
    "unit_square_scaling": check_unit_square_scaling,
    "hensley": check_hensley,
    "nonresidue_independence": check_nonresidue_independence,
}


def run_lemma(name: str, grid: GridSpec | None = None) -> LemmaReport:
    if name not in LEMMA_SUITES:
        raise InvalidInput(f"unknown lemma suite {name!r}")
    chk = _Check(name)
    t0 = time.perf_counter()
    if name == "lemma_lower_bounds":
        check_lower_bounds(chk, (grid or GridSpec()).points)
    else:
        _SUITES[name](chk)
    chk.report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return chk.report


def verify_lemmas(grid: GridSpec) -> VerifyReport:
    return VerifyReport(lemmas=[run_lemma(name, grid) for name in grid.lemmas])


def verify_all(grid: GridSpec) -> VerifyReport:
    main = verify_main(grid)
    main.lemmas = verify_lemmas(grid).lemmas
    return main
