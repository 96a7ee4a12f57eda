"""Command-line front end: ``buchi length | opt | sweep | verify``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, fields

from . import arith
from .arith import INF, PrimePowerModulus, Residue, qr_mod_p, unit_part
from .errors import BuchiError, CapExceeded, InvalidInput
from .formulas import formula_opt
from .polyspace import QuadPoly, is_square_poly
from .search import SearchOutcome, buchi_length, default_jobs, ml_opt, select_f2, sweep
from .verify import GridSpec, verify_all

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

CSV_HEADER = [
    "p", "s", "modulus", "f2", "t2", "g2_character", "opt_formula", "opt_brute",
    "ml", "witness_f1", "witness_f0", "trivial_only", "elapsed_ms",
]


def encode(value):
    """inf -> "inf"; everything else passes through."""
    if isinstance(value, float) and value == INF:
        return "inf"
    return value


def decode(value):
    return INF if value == "inf" else value


@dataclass
class OutputRecord:
    p: int
    s: int
    modulus: int
    f2: int
    t2: int | str
    g2_character: str
    opt_formula: int | str | None = None
    opt_brute: int | str | None = None
    ml: int | str | None = None
    witness: dict | None = None
    trivial_only: bool | None = None
    elapsed_ms: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> OutputRecord:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    def csv_row(self) -> list[str]:
        w = self.witness or {}
        row = [
            self.p, self.s, self.modulus, self.f2, self.t2, self.g2_character,
            self.opt_formula, self.opt_brute, self.ml, w.get("f1"), w.get("f0"),
            self.trivial_only, self.elapsed_ms,
        ]
        return ["" if v is None else str(v).lower() if isinstance(v, bool) else str(v) for v in row]

    @classmethod
    def from_csv_row(cls, row: dict) -> OutputRecord:
        def num(v):
            if v == "":
                return None
            if v == "inf":
                return v
            return float(v) if "." in v else int(v)

        witness = None
        if row["witness_f1"] != "":
            witness = {"f1": int(row["witness_f1"]), "f0": int(row["witness_f0"])}
        trivial = {"true": True, "false": False, "": None}[row["trivial_only"]]
        return cls(
            p=int(row["p"]), s=int(row["s"]), modulus=int(row["modulus"]), f2=int(row["f2"]),
            t2=num(row["t2"]), g2_character=row["g2_character"],
            opt_formula=num(row["opt_formula"]), opt_brute=num(row["opt_brute"]), ml=num(row["ml"]),
            witness=witness, trivial_only=trivial, elapsed_ms=num(row["elapsed_ms"]),
        )


def describe_f2(mod: PrimePowerModulus, f2: int) -> tuple[int | str, str]:
    t2, g2 = unit_part(Residue(f2, mod))
    if t2 == INF:
        return "inf", "zero"
    return t2, "square" if qr_mod_p(g2.value, mod.p) else "nonsquare"


def make_record(mod, f2, opt_formula=None, brute=None, elapsed_ms=None) -> OutputRecord:
    t2, character = describe_f2(mod, f2)
    rec = OutputRecord(mod.p, mod.s, mod.m, f2, t2, character, elapsed_ms=elapsed_ms)
    if opt_formula is not None:
        rec.opt_formula = encode(opt_formula)
        rec.ml = encode(opt_formula - 1)
    if brute is not None:
        rec.opt_brute = encode(brute.opt)
        rec.ml = encode(brute.length)
        rec.trivial_only = brute.trivial_only
        if brute.witness is not None:
            rec.witness = {"f1": brute.witness.f1, "f0": brute.witness.f0}
    return rec


def records_to_csv(records: list[OutputRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[OutputRecord]:
    return [OutputRecord.from_csv_row(row) for row in csv.DictReader(io.StringIO(text))]


def write_output(text: str, out: str | None) -> None:
    """Write to stdout, or atomically to ``out`` via a temp file and rename."""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".buchi-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _modulus(args) -> PrimePowerModulus:
    return PrimePowerModulus(args.p, args.s)


def _disagree(rec: OutputRecord) -> bool:
    return rec.opt_formula is not None and rec.opt_brute is not None and rec.opt_formula != rec.opt_brute


def cmd_length(args) -> int:
    mod = _modulus(args)
    f = QuadPoly(args.f2, args.f1, args.f0, mod)
    t0 = time.perf_counter()
    length = buchi_length(f)
    trivial = is_square_poly(f)
    elapsed = round((time.perf_counter() - t0) * 1000, 3)
    rec = {
        "p": mod.p, "s": mod.s, "modulus": mod.m, "f2": f.f2, "f1": f.f1, "f0": f.f0,
        "length": encode(length), "trivial": trivial, "elapsed_ms": elapsed,
    }
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rec), lineterminator="\n")
        writer.writeheader()
        writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in rec.items()})
        write_output(buf.getvalue(), args.out)
    else:
        write_output(json.dumps(rec) + "\n", args.out)
    return EXIT_OK


def cmd_opt(args) -> int:
    mod = _modulus(args)
    f2 = args.f2 % mod.m
    t0 = time.perf_counter()
    formula = formula_opt(mod, f2) if args.method in ("formula", "both") else None
    brute = ml_opt(mod, f2, jobs=args.jobs) if args.method in ("brute", "both") else None
    elapsed = round((time.perf_counter() - t0) * 1000, 3)
    rec = make_record(mod, f2, formula, brute, elapsed)
    if args.format == "csv":
        write_output(records_to_csv([rec]), args.out)
    else:
        write_output(json.dumps(rec.to_dict()) + "\n", args.out)
    return EXIT_MISMATCH if _disagree(rec) else EXIT_OK


def cmd_sweep(args) -> int:
    mod = _modulus(args)
    selection = "representatives" if args.representatives else "all"
    records = []
    if args.method == "formula":
        for f2 in select_f2(mod, selection):
            t0 = time.perf_counter()
            value = formula_opt(mod, f2)
            elapsed = round((time.perf_counter() - t0) * 1000, 3) if args.timing else None
            records.append(make_record(mod, f2, value, None, elapsed))
    else:
        for row in sweep(mod, selection, jobs=args.jobs):
            formula = formula_opt(mod, row.f2) if args.method == "both" else None
            elapsed = round(row.elapsed_ms, 3) if args.timing else None
            brute = SearchOutcome(row.opt_brute - 1, row.witness, row.trivial_only)
            records.append(make_record(mod, row.f2, formula, brute, elapsed))
    if args.format == "json":
        text = json.dumps([rec.to_dict() for rec in records], indent=1) + "\n"
    else:
        text = records_to_csv(records)
    write_output(text, args.out)
    return EXIT_MISMATCH if any(_disagree(rec) for rec in records) else EXIT_OK


def load_grid(source: str, jobs: int) -> GridSpec:
    if source == "default":
        return GridSpec(jobs=jobs)
    try:
        with open(source) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read grid file {source!r}: {exc}")
    return GridSpec.from_json(data, jobs=jobs)


def cmd_verify(args) -> int:
    grid = load_grid(args.grid, args.jobs)
    if args.no_lemmas:
        grid.lemmas = ()
    report = verify_all(grid)
    if args.format == "json":
        text = json.dumps(report.to_dict(timings=args.timing), indent=1) + "\n"
    else:
        text = report.summary() + "\n"
    write_output(text, args.out)
    return EXIT_OK if report.status == "PASS" else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="buchi", description=__doc__)
    parser.add_argument("--max-modulus", type=int, default=None,
                        help="table cap (default: $BUCHI_MAX_MODULUS or 2**20)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default_format):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument("--out", default=None, help="write here instead of stdout")

    def jobs(p):
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $BUCHI_JOBS or 1)")

    p = sub.add_parser("length", help="run length and triviality of one polynomial")
    common(p, ["json", "csv"], "json")
    for name in ("--f2", "--f1", "--f0"):
        p.add_argument(name, type=int, required=True)
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("opt", help="optimal bound opt(p^s, f2)")
    common(p, ["json", "csv"], "json")
    p.add_argument("--f2", type=int, required=True)
    p.add_argument("--method", choices=["formula", "brute", "both"], default="both")
    jobs(p)
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("sweep", help="opt for every f2 class (or one per order/character)")
    common(p, ["csv", "json"], "csv")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="every f2 in [0, p^s) (default)")
    group.add_argument("--representatives", action="store_true")
    p.add_argument("--method", choices=["formula", "brute", "both"], default="both")
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (output no longer reproducible)")
    jobs(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="formula vs. brute force over a grid, plus lemma checks")
    p.add_argument("--grid", default="default", help="'default' or a JSON file: [{p, s, mode}, ...]")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)
    p.add_argument("--no-lemmas", action="store_true", help="skip the lemma suite")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON")
    jobs(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.max_modulus is not None:
            arith.set_max_modulus(args.max_modulus)
        if getattr(args, "jobs", 0) is None:
            args.jobs = default_jobs()
        return args.func(args)
    except CapExceeded as exc:
        print(f"buchi: {exc}", file=sys.stderr)
        return EXIT_CAP
    except BuchiError as exc:
        print(f"buchi: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        arith.set_max_modulus(None)


if __name__ == "__main__":
    sys.exit(main())
