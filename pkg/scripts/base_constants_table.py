"""Print opt(p, 0), opt(p, n), opt(p, 1) at modulus p for small primes.

These three constants feed every closed-form value; none has a known
formula in p, so this table is the thing to look at when extending the grid.

    python scripts/base_constants_table.py [max_p]
"""
import sys
import time

from buchi.arith import is_odd_prime
from buchi.formulas import base_constants


def main(max_p=31):
    print(f"{'p':>4} {'n':>3} {'opt(p,0)':>9} {'(p+3)/2':>8} {'opt(p,n)':>9} {'opt(p,1)':>9} {'secs':>6}")
    for p in range(3, max_p + 1):
        if not is_odd_prime(p):
            continue
        t0 = time.perf_counter()
        c = base_constants(p)
        print(f"{p:>4} {c.nonresidue:>3} {c.opt_linear:>9} {(p + 3) / 2:>8} "
              f"{c.opt_nonsquare:>9} {c.opt_unit_square:>9} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 31)
