"""Exact counting of irreducible deductive systems of generator-join filters.

Chain values are indices: in ``C_{q+1}`` the index ``i`` stands for ``i/q``,
so ``(q-p)/q`` is index ``q - p`` and top is ``q``.  Generators are 0-based and
``G_k`` is the first ``k`` of them.  All arithmetic is on Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from math import comb, prod

from .algebra import SizeGuardError

DEFAULT_ENUM_LIMIT = 10**7


def surjections(d: int, a: int) -> int:
    """``e_{d,a}``: the number of maps from a d-set onto an a-set."""
    if a <= 0 or d < a:
        return 0
    return sum((-1) ** j * comb(a, j) * (a - j) ** d for j in range(a))


def surjections_bruteforce(d: int, a: int) -> int:
    if a <= 0:
        return 0
    return sum(1 for f in iproduct(range(a), repeat=d) if len(set(f)) == a)


def u3(q: int, t: int, b: int, *, r: int, k: int) -> int:
    """Onto-maps of the remaining ``r - k`` generators, with or without top in the image."""
    return surjections(r - k, q + 1 - t + b) + surjections(r - k, q - t + b)


def u2(q: int, t: int, *, r: int, k: int) -> int:
    return sum(comb(t, b) * u3(q, t, b, r=r, k=k) for b in range(t + 1))


def beta(k: int, p: int, *, n: int, r: int) -> int:
    """Closed-form count of (p+1)-valued irreducible d.s. of ``[g_k*)`` for ``k < r``.

    ``t`` is the size of the image of ``G_k``: a subset of ``[0, (q-p)/q]``
    containing ``(q-p)/q``, hence ``C(q-p, t-1)`` choices.
    """
    return sum(
        comb(q - p, t - 1) * surjections(k, t) * u2(q, t, r=r, k=k)
        for q in range(p, n + 1)
        for t in range(1, q - p + 2)
    )


@dataclass(frozen=True)
class FCountSpec:
    n: int
    r: int
    k: int
    p: int
    q: int

    def __post_init__(self):
        if not (1 <= self.p <= self.q <= self.n and 1 <= self.k <= self.r):
            raise ValueError(f"need 1 <= p <= q <= n and 1 <= k <= r, got {self}")


def admissible_maps(spec: FCountSpec, *, limit: int = DEFAULT_ENUM_LIMIT):
    """Yield every ``f: G -> C_{q+1}`` satisfying F1-F3, as tuples of indices."""
    q, level = spec.q, spec.q - spec.p
    total = (q + 1) ** spec.r
    if total > limit:
        raise SizeGuardError("number of maps (q+1)^r", total, limit)
    needed = set(range(q))
    for f in iproduct(range(q + 1), repeat=spec.r):
        head = f[: spec.k]
        if max(head) == level and needed <= set(f):
            yield f


def count_F(spec: FCountSpec, *, limit: int = DEFAULT_ENUM_LIMIT) -> int:
    """Brute-force size of the set of maps with F1-F3."""
    return sum(1 for _ in admissible_maps(spec, limit=limit))


def eta_via_theorem(n: int, r: int, k: int, p: int) -> int:
    """Sum over ``q = p..n`` of the admissible-map counts."""
    return sum(count_F(FCountSpec(n, r, k, p, q)) for q in range(p, n + 1))


@dataclass(frozen=True)
class EtaClosedForm:
    value: int  # corrected closed form
    literal: int  # the case formula exactly as printed
    corrected: bool  # value and literal differ

    @property
    def flag(self) -> str:
        return "literal-differs" if self.corrected else ""


def eta_closed_form(n: int, r: int, k: int, p: int, m_k: int) -> EtaClosedForm:
    """Case formula for the count of (p+1)-valued irreducible d.s. of ``[g_k*)``.

    For ``k = r`` every admissible map sends all generators onto
    ``[0, (q-1)/q]``, which forces ``p = 1`` and ``q <= n``; the printed sum
    runs ``q = 1..r`` instead.  Both are returned.
    """
    if not (1 <= k <= r and 1 <= p <= n):
        raise ValueError(f"need 1 <= k <= r and 1 <= p <= n, got k={k}, p={p}")
    if k < r:
        v = beta(k, p, n=n, r=r) if p <= m_k else 0
        return EtaClosedForm(v, v, False)
    if p > 1:
        return EtaClosedForm(0, 0, False)
    value = sum(surjections(r, q) for q in range(1, n + 1))
    literal = sum(surjections(r, q) for q in range(1, r + 1))
    return EtaClosedForm(value, literal, value != literal)


def alternating_bound(n: int, r: int, exponents: dict[tuple[int, int], int]) -> int:
    """``sum_k (-1)^(k+1) C(r,k) prod_p (p+1)^exponents[k,p]``."""
    return sum(
        (-1) ** (k + 1) * comb(r, k) * prod((p + 1) ** exponents.get((k, p), 0) for p in range(1, n + 1))
        for k in range(1, r + 1)
    )


def upper_bound(n: int, r: int, eta_table: dict[tuple[int, int], int]) -> int:
    return alternating_bound(n, r, eta_table)
