"""Time the exhaustive axiom checks on chain powers, brute force against the
factor route, and confirm both give empty reports."""

import argparse
import time
from dataclasses import dataclass

from hilsup.algebra import check_derived_identities, make_chain, power, validate_hilbert, validate_product, validate_sup


@dataclass
class TimingConfig:
    max_carrier: int = 4096
    brute_max: int = 256


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-carrier", type=int, default=4096)
    ap.add_argument("--brute-max", type=int, default=256)
    a = ap.parse_args(argv)
    cfg = TimingConfig(a.max_carrier, a.brute_max)
    checks = (validate_hilbert, validate_sup, check_derived_identities)
    print(f"{'algebra':>10} {'size':>5} {'factor s':>9} {'brute s':>8}")
    for q in range(1, 7):
        k = 1
        while (q + 1) ** k <= cfg.max_carrier:
            A = power(make_chain(q), k)
            t0 = time.perf_counter()
            assert validate_product(A, *checks) == []
            tf = time.perf_counter() - t0
            tb = "-"
            if A.size <= cfg.brute_max:
                t0 = time.perf_counter()
                assert all(c(A) == [] for c in checks)
                tb = f"{time.perf_counter() - t0:.3f}"
            print(f"{f'J{q + 1}^{k}':>10} {A.size:>5} {tf:>9.3f} {tb:>8}")
            k += 1


if __name__ == "__main__":
    main()
