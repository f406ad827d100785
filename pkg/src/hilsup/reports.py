"""Count reports: enumeration oracles next to the closed forms, plus the bound."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from math import comb

from .counting import (
    alternating_bound,
    beta,
    eta_closed_form,
    eta_via_theorem,
    surjections,
    u2,
)
from .free import FreeAlgebra, build_free, canonical_subset, gstar

COLUMNS = ("k", "p", "m_k", "alpha", "eta_oracle", "eta_ds", "eta_formula", "eta_literal", "flag")


@dataclass
class CountRow:
    k: int
    p: int
    m_k: int
    alpha: int
    eta_oracle: int  # admissible-map enumeration
    eta_ds: int | None  # d.s. classification of the filter
    eta_formula: int  # corrected closed form
    eta_literal: int  # closed form as printed
    flag: str = ""


@dataclass
class CountReport:
    n: int
    r: int
    rows: list[CountRow]
    cardinality_exact: int
    upper_bound: int  # with the enumerated eta
    upper_bound_literal: int
    notes: list[str] = field(default_factory=list)

    @property
    def bound_holds(self) -> bool:
        return self.cardinality_exact <= self.upper_bound

    def row(self, k: int, p: int) -> CountRow:
        return next(x for x in self.rows if (x.k, x.p) == (k, p))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "rows": [asdict(x) for x in self.rows],
            "cardinality_exact": self.cardinality_exact,
            "upper_bound": self.upper_bound,
            "upper_bound_literal": self.upper_bound_literal,
            "bound_holds": self.bound_holds,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "r", *COLUMNS))
        for x in self.rows:
            w.writerow((self.n, self.r, *("" if v is None else v for v in astuple_row(x))))
        return buf.getvalue()

    def to_text(self) -> str:
        cells = [COLUMNS] + [tuple("-" if v is None else str(v) for v in astuple_row(x)) for x in self.rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(COLUMNS))]
        lines = [f"n={self.n} r={self.r}"]
        lines += ["  ".join(c[i].rjust(widths[i]) for i in range(len(COLUMNS))).rstrip() for c in cells]
        lines.append(self.bound_line())
        lines += [f"note: {s}" for s in self.notes]
        return "\n".join(lines) + "\n"

    def bound_line(self) -> str:
        return (
            f"bound={self.upper_bound} exact={self.cardinality_exact} "
            f"holds={'yes' if self.bound_holds else 'no'} bound_literal={self.upper_bound_literal}"
        )


def astuple_row(x: CountRow) -> tuple:
    return tuple(getattr(x, c) for c in COLUMNS)


def count_report(n: int, r: int, F: FreeAlgebra | None = None) -> CountReport:
    F = build_free(n, r) if F is None else F
    rows = []
    for k in range(1, r + 1):
        gs = gstar(F, canonical_subset(k), limit=None)
        for p in range(1, n + 1):
            oracle = eta_via_theorem(n, r, k, p)
            cf = eta_closed_form(n, r, k, p, gs.m_k)
            flags = []
            if cf.value != oracle:
                flags.append("formula-mismatch")
            if cf.literal != oracle:
                flags.append("literal-differs")
            if gs.eta[p] != oracle:
                flags.append("ds-mismatch")
            rows.append(CountRow(k, p, gs.m_k, gs.alpha[p], oracle, gs.eta[p], cf.value, cf.literal, ";".join(flags)))
    eta = {(x.k, x.p): x.eta_oracle for x in rows}
    literal = {(x.k, x.p): x.eta_literal for x in rows}
    rep = CountReport(n, r, rows, F.size, alternating_bound(n, r, eta), alternating_bound(n, r, literal))
    for x in rows:
        if "literal-differs" in x.flag:
            rep.notes.append(
                f"k=r summation limit: at (n={n}, r={r}, k={x.k}, p={x.p}) the sum up to r gives "
                f"{x.eta_literal}, up to n gives {x.eta_formula}, enumeration gives {x.eta_oracle}"
            )
    return rep


def beta_coefficient_variant(k: int, p: int, *, n: int, r: int) -> int:
    """The closed form with ``C(q-p+1, t)`` subsets of ``[0, (q-p)/q]``
    (the top value of the interval not forced into the image)."""
    return sum(
        comb(q - p + 1, t) * surjections(k, t) * u2(q, t, r=r, k=k)
        for q in range(p, n + 1)
        for t in range(1, q - p + 2)
    )


@dataclass
class Discrepancy:
    name: str
    witness: tuple[int, int, int, int] | None  # (n, r, k, p)
    printed: int | None
    alternative: int | None
    enumeration: int | None
    remark: str = ""

    def line(self) -> str:
        if self.witness is None:
            head = f"{self.name}: no distinguishing instance in the searched grid"
        else:
            n, r, k, p = self.witness
            head = (
                f"{self.name}: witness n={n} r={r} k={k} p={p}: printed={self.printed} "
                f"alternative={self.alternative} enumeration={self.enumeration} "
                f"-> {'printed' if self.printed == self.enumeration else 'alternative'} agrees"
            )
        return head + (f" ({self.remark})" if self.remark else "")


def discrepancy_report(grid=((1, 2), (1, 1), (2, 2), (2, 1), (1, 3), (2, 3))) -> list[Discrepancy]:
    """First instance where each suspected misprint changes the value, decided by enumeration.

    ``printed`` for the ``k = r`` case is the sum up to ``r`` and the
    alternative the sum up to ``n``; for the coefficient it is ``C(q-p, t-1)``
    against ``C(q-p+1, t)``.
    """
    out = []
    found = None
    for n, r in grid:
        for p in range(1, n + 1):
            cf = eta_closed_form(n, r, r, p, n)
            if cf.corrected:
                found = Discrepancy("k=r summation limit", (n, r, r, p), cf.literal, cf.value, eta_via_theorem(n, r, r, p))
                break
        if found:
            break
    out.append(found or Discrepancy("k=r summation limit", None, None, None, None))
    found = None
    for n, r in grid:
        for k in range(1, r):
            for p in range(1, n + 1):
                b, v = beta(k, p, n=n, r=r), beta_coefficient_variant(k, p, n=n, r=r)
                if b != v:
                    found = Discrepancy("beta coefficient", (n, r, k, p), b, v, eta_via_theorem(n, r, k, p))
                    break
            if found:
                break
        if found:
            break
    found = found or Discrepancy("beta coefficient", None, None, None, None)
    # beta only covers k < r; on the worked example (n=1, r=2) the k=2 row is
    # the k=r case, and at k=1 both coefficients coincide
    b, v = beta(1, 1, n=1, r=2), beta_coefficient_variant(1, 1, n=1, r=2)
    found.remark = (
        f"at n=1 r=2 k=2 beta does not apply (k=r); at n=1 r=2 k=1 p=1 printed={b} "
        f"alternative={v} enumeration={eta_via_theorem(1, 2, 1, 1)}"
    )
    out.append(found)
    return out
