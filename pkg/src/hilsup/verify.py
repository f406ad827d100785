"""Named verification suites over one free algebra ``Free_{n+1}(r)``.

Every check yields a :class:`CheckResult`; failures carry the least witness
found.  Timings are kept on the result but are not part of serialized output.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator

from . import algebra as alg
from .counting import beta, eta_closed_form, eta_via_theorem, surjections, surjections_bruteforce
from .dedsys import (
    canonical_epi,
    chain_above,
    classify_all,
    enumerate_ds,
    extensions_to_algebra,
    irreducible_ds,
    is_meet_irreducible,
    minimal_irreducible_ds,
    splitting_check,
    subdirect_injective,
)
from .free import (
    FreeAlgebra,
    build_free,
    canonical_subset,
    cardinality_checks,
    epi_image_check,
    freeness_violation,
    generator_diagnostics,
    gstar,
    verify_decomposition,
)
from .reports import count_report, discrepancy_report

SUITES = ("axioms", "structure", "dedsys", "decomposition", "counting", "bound")


@dataclass
class CheckResult:
    suite: str
    name: str
    status: str  # pass | fail | skip | note
    witness: object = None
    seconds: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "check": self.name, "status": self.status, "witness": _plain(self.witness)}

    def line(self) -> str:
        tail = "" if self.witness is None else f" witness={_plain(self.witness)}"
        return f"{self.status.upper():4} {self.suite}/{self.name}{tail}"


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if hasattr(x, "members"):
        return list(x.members)
    return repr(x)


class _Suite:
    def __init__(self, name: str):
        self.name = name
        self.results: list[CheckResult] = []

    def check(self, name: str, fn: Callable[[], object]) -> None:
        """``fn`` returns ``None`` on success or a witness on failure."""
        t0 = time.perf_counter()
        try:
            witness = fn()
        except AssertionError as exc:
            witness = str(exc) or "assertion failed"
        status = "pass" if witness is None else "fail"
        self.results.append(CheckResult(self.name, name, status, witness, time.perf_counter() - t0))

    def note(self, name: str, text: str) -> None:
        self.results.append(CheckResult(self.name, name, "note", text))


def _first(items) -> object:
    return next(iter(items), None)


def suite_axioms(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("axioms")
    C = alg.make_chain(F.n)
    A = F.algebra
    for label, X in ((f"chain J{F.n + 1}", C), (f"free n={F.n} r={F.r}", A)):
        s.check(f"hilbert {label}", lambda X=X: _first(alg.validate_hilbert(X)))
        s.check(f"sup {label}", lambda X=X: _first(alg.validate_sup(X)))
        s.check(f"derived {label}", lambda X=X: _first(alg.check_derived_identities(X)))
    s.check("chain valuedness", lambda: None if alg.valuedness(C) == F.n else alg.valuedness(C))
    s.check("free valuedness <= n", lambda: None if alg.valuedness(A) <= F.n else alg.valuedness(A))
    return s.results


def suite_structure(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("structure")
    A = F.algebra
    diag = generator_diagnostics(F)
    s.check("generators antichain", lambda: None if diag.antichain else F.generators)
    s.check("generators are the minimal elements", lambda: None if diag.minimal_equals_generators else diag.minimal)
    s.check("union of generator filters", lambda: None if diag.covered_by_filters else diag.uncovered)
    s.check(
        "generators generate",
        lambda: None if len(alg.generated_subalgebra(A, F.generators)) == A.size else "proper closure",
    )
    for q in range(1, F.n + 1):
        s.check(f"freeness into J{q + 1}", lambda q=q: freeness_violation(F, q))

    def intersections():
        for k in range(1, F.r + 1):
            for K in combinations(range(F.r), k):
                if not gstar(F, K).intersection_ok:
                    return K
        return None

    s.check("g* filter is the meet of generator filters", intersections)

    def symmetric():
        for k in range(1, F.r + 1):
            ref = gstar(F, canonical_subset(k))
            for K in combinations(range(F.r), k):
                g = gstar(F, K)
                if (g.alpha, g.eta, len(g.filter)) != (ref.alpha, ref.eta, len(ref.filter)):
                    return K
        return None

    s.check("alpha depends only on k", symmetric)
    rep = epi_image_check(F)
    s.check("epimorphism images cover the non-top values", lambda: _first(rep.cover_failures))
    s.check("epimorphisms map filters onto filters", lambda: _first(rep.filter_failures))
    return s.results


def _dedsys_checks(s: _Suite, X: alg.FiniteAlgebra, label: str) -> list:
    rows = classify_all(X, limit=None)
    family = [c.ds for c in rows]
    E = irreducible_ds(rows)
    s.check(f"{label}: irreducible == fully irreducible", lambda: _first(c.ds for c in rows if c.irreducible != c.fully_irreducible))
    s.check(f"{label}: irreducible == meet-irreducible", lambda: _first(c.ds for c in rows if c.irreducible != is_meet_irreducible(c.ds, family)))
    s.check(f"{label}: irreducible implies prime", lambda: _first(c.ds for c in rows if c.irreducible and not c.prime))
    s.check(f"{label}: irreducible d.s. are chain-valued", lambda: _first(c.ds for c in rows if c.irreducible and c.valued_p is None))
    s.check(f"{label}: splitting", lambda: None if X.size == 1 or splitting_check(X, rows) else "intersection is not {top}")
    s.check(f"{label}: subdirect map injective", lambda: None if X.size == 1 or subdirect_injective(X, E) else "collision")

    def epis():
        for c in rows:
            if c.irreducible:
                h = canonical_epi(X, c.ds)
                if not h.is_surjective or h.target.size != c.valued_p + 1:
                    return c.ds
        return None

    s.check(f"{label}: canonical epimorphisms", epis)

    def chains():
        for c in rows:
            if c.irreducible:
                above = [D.mask for D in family if D.mask & c.ds.mask == c.ds.mask]
                steps = [S.mask for S in chain_above(X, c.ds).steps]
                if sorted(above, key=lambda m: (m.bit_count(), m)) != steps:
                    return c.ds
        return None

    s.check(f"{label}: d.s. above an irreducible one form its chain", chains)
    return rows


def suite_dedsys(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("dedsys")
    A = F.algebra
    rows_A = _dedsys_checks(s, A, "free")
    E_A = irreducible_ds(rows_A)
    M_A = {D.mask for D in minimal_irreducible_ds(rows_A)}
    valued = {c.ds.mask: c.valued_p for c in rows_A}
    for k in range(1, F.r + 1):
        gs = gstar(F, canonical_subset(k))
        rows_f = _dedsys_checks(s, gs.sub, f"filter k={k}")
        emb = gs.embedding

        def lift(D):
            return alg.ElementSet.of(A, (emb[x] for x in D))

        def unique():
            for c in rows_f:
                if c.irreducible and len(extensions_to_algebra(A, gs.g_star, lift(c.ds), E_A)) != 1:
                    return c.ds
            return None

        def monotone():
            for c in rows_f:
                if c.irreducible:
                    (M,) = extensions_to_algebra(A, gs.g_star, lift(c.ds), E_A)
                    if c.valued_p > valued[M.mask]:
                        return (c.ds, c.valued_p, valued[M.mask])
            return None

        def transfer():
            for c in rows_f:
                if c.irreducible:
                    (M,) = extensions_to_algebra(A, gs.g_star, lift(c.ds), E_A)
                    if M.mask in M_A and not c.minimal_in_E:
                        return c.ds
            return None

        s.check(f"filter k={k}: unique irreducible extension", unique)
        s.check(f"filter k={k}: valuedness does not drop under extension", monotone)
        s.check(f"filter k={k}: minimality transfers to the filter", transfer)
    return s.results


def suite_decomposition(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("decomposition")
    for k in range(1, F.r + 1):
        def run(k=k):
            d = verify_decomposition(F, canonical_subset(k))
            return None if d.holds else d.witness
        s.check(f"k={k}: filter is a product of chains", run)
    card = cardinality_checks(F)
    s.check(
        "three cardinality forms",
        lambda: None if card.ok else (card.size, card.inclusion_exclusion, card.binomial, card.alpha_product),
    )
    return s.results


def suite_counting(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("counting")
    n, r = F.n, F.r

    def surj():
        for d in range(7):
            for a in range(7):
                if surjections(d, a) != surjections_bruteforce(d, a) and not (d == 0 and a == 0):
                    return (d, a)
        return None

    s.check("surjection formula vs enumeration (d, a <= 6)", surj)
    for k in range(1, r + 1):
        gs = gstar(F, canonical_subset(k))
        for p in range(1, n + 1):
            oracle = eta_via_theorem(n, r, k, p)
            s.check(f"k={k} p={p}: map enumeration == d.s. classification", lambda o=oracle, e=gs.eta[p]: None if o == e else (o, e))
            s.check(f"k={k} p={p}: alpha <= eta", lambda a=gs.alpha[p], o=oracle: None if a <= o else (a, o))
            if k < r and p <= gs.m_k:
                b = beta(k, p, n=n, r=r)
                s.check(f"k={k} p={p}: beta == enumeration", lambda b=b, o=oracle, w=(n, r, k, p): None if b == o else (w, b, o))
            cf = eta_closed_form(n, r, k, p, gs.m_k)
            s.check(f"k={k} p={p}: corrected closed form == enumeration", lambda v=cf.value, o=oracle: None if v == o else (v, o))
            if cf.literal != oracle:
                s.note(
                    f"k={k} p={p}: printed k=r sum",
                    f"sum to r gives {cf.literal}, enumeration gives {oracle} (witness n={n} r={r} k={k} p={p})",
                )
    for d in discrepancy_report():
        s.note(d.name, d.line())
    return s.results


def suite_bound(F: FreeAlgebra) -> list[CheckResult]:
    s = _Suite("bound")
    rep = count_report(F.n, F.r, F)
    s.check("bound with enumerated eta >= |Free|", lambda: None if rep.bound_holds else (rep.upper_bound, rep.cardinality_exact))
    if rep.upper_bound_literal < rep.cardinality_exact:
        s.note("bound with printed eta", f"{rep.upper_bound_literal} < |Free| = {rep.cardinality_exact}")
    return s.results


RUNNERS = {
    "axioms": suite_axioms,
    "structure": suite_structure,
    "dedsys": suite_dedsys,
    "decomposition": suite_decomposition,
    "counting": suite_counting,
    "bound": suite_bound,
}


def run_suites(n: int, r: int, suites=("all",), F: FreeAlgebra | None = None) -> Iterator[CheckResult]:
    names = SUITES if "all" in suites else tuple(suites)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; choose from {SUITES} or 'all'")
    F = build_free(n, r) if F is None else F
    for name in names:
        yield from RUNNERS[name](F)
