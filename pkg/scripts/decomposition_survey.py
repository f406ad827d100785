"""For every generator-join filter of the desk-scale free algebras, print the
chain factors found by the minimal irreducible d.s. and check the product map."""

import argparse
import time
from dataclasses import dataclass

from hilsup.cli import parse_range
from hilsup.free import build_free, canonical_subset, cardinality_checks, verify_decomposition


@dataclass
class SurveyConfig:
    ns: list
    rs: list
    allow_large: bool = False


def survey(cfg: SurveyConfig):
    bad = 0
    for n in cfg.ns:
        for r in cfg.rs:
            t0 = time.perf_counter()
            F = build_free(n, r, allow_large=cfg.allow_large)
            card = cardinality_checks(F)
            print(f"n={n} r={r} |Free|={F.size} forms={card.inclusion_exclusion},{card.binomial},{card.alpha_product}")
            for k in range(1, r + 1):
                d = verify_decomposition(F, canonical_subset(k))
                shape = " x ".join(f"J{p + 1}" for p in d.factors) or "1"
                print(f"  k={k} [g*) = {shape}  holds={d.holds}" + ("" if d.holds else f" witness={d.witness}"))
                bad += not d.holds
            print(f"  ({time.perf_counter() - t0:.2f}s)")
    return bad


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="1-3")
    ap.add_argument("--r", default="1-2")
    ap.add_argument("--allow-large", action="store_true")
    a = ap.parse_args(argv)
    raise SystemExit(1 if survey(SurveyConfig(parse_range(a.n), parse_range(a.r), a.allow_large)) else 0)


if __name__ == "__main__":
    main()
