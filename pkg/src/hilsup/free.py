"""Finitely generated free algebras of the variety generated by ``J_{n+1}``.

An element is stored as its table of values under every valuation of the
generators into ``C_{n+1}``: a tuple of length ``(n+1)**r`` over ``0..n``.
Valuations are listed in ``itertools.product`` order, so generator ``i``
(0-based) is the tuple whose entry at valuation ``v`` is ``v[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product as iproduct
from math import comb, prod

import numpy as np

from .algebra import (
    ElementSet,
    FiniteAlgebra,
    Homomorphism,
    SizeGuardError,
    epimorphisms,
    extend,
    is_antichain,
    make_chain,
    minimal_elements,
    principal_filter,
    product,
    size_guard,
    subalgebra,
    valuedness,
)
from .dedsys import (
    DsClassification,
    canonical_epi,
    classify_all,
    irreducible_ds,
    minimal_irreducible_ds,
)

DESK_N = 3
DESK_R = 2
DEFAULT_MAX_ELEMENTS = 50_000


@dataclass(frozen=True, eq=False)
class FreeAlgebra:
    n: int
    r: int
    elements: np.ndarray = field(repr=False)  # (size, valuation_count), read-only
    generators: tuple[int, ...]

    @property
    def valuation_count(self) -> int:
        return (self.n + 1) ** self.r

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def valuations(self) -> list[tuple[int, ...]]:
        return list(iproduct(range(self.n + 1), repeat=self.r))

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(v) for v in row): i for i, row in enumerate(self.elements)}

    def tuple_of(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.elements[i])

    @cached_property
    def top(self) -> int:
        return self.index[(self.n,) * self.valuation_count]

    @cached_property
    def algebra(self) -> FiniteAlgebra:
        """Materialized operation tables over the element indices."""
        C = make_chain(self.n)
        E = self.elements.astype(np.int64)
        codes = _codes(E, self.n + 1)
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(rows: np.ndarray) -> np.ndarray:
            c = _codes(rows, self.n + 1)
            pos = np.searchsorted(sorted_codes, c)
            if (pos >= len(codes)).any() or (sorted_codes[np.minimum(pos, len(codes) - 1)] != c).any():
                raise AssertionError("element set is not closed")
            return order[pos]

        imp = np.empty((self.size, self.size), dtype=np.int64)
        join = np.empty_like(imp)
        for i in range(self.size):
            imp[i] = lookup(C.imp[E[i][None, :], E])
            join[i] = lookup(C.join[E[i][None, :], E])
        return FiniteAlgebra(self.size, imp, join, self.top)


def _codes(rows: np.ndarray, base: int):
    """Injective integer code of each row (object dtype when int64 could overflow)."""
    width = rows.shape[-1]
    if base**width < 2**62:
        weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
        return rows.astype(np.int64) @ weights
    weights = np.array([base**k for k in range(width - 1, -1, -1)], dtype=object)
    return rows.astype(object) @ weights


def build_free(
    n: int,
    r: int,
    *,
    allow_large: bool = False,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    limit: int | None = None,
) -> FreeAlgebra:
    """Closure of the ``r`` projections inside ``J_{n+1}^{(n+1)^r}``.

    Elements are numbered generators first, then in discovery order: each
    processed element ``x_i`` is combined with ``x_0..x_i`` as ``x_i -> x_j``,
    ``x_j -> x_i`` and ``x_i v x_j``.
    """
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    if not allow_large and (n > DESK_N or r > DESK_R):
        raise SizeGuardError("desk-scale parameters (n, r)", max(n, r), max(DESK_N, DESK_R))
    limit = size_guard() if limit is None else limit
    width = (n + 1) ** r
    if width > limit:
        raise SizeGuardError("valuation count (n+1)^r", width, limit)
    C = make_chain(n)
    vals = np.array(list(iproduct(range(n + 1), repeat=r)), dtype=np.int64).reshape(width, r)
    cap = 64
    E = np.empty((cap, width), dtype=np.int64)
    seen: dict = {}
    count = 0

    def add(row: np.ndarray, code) -> None:
        nonlocal E, cap, count
        if count == cap:
            cap *= 2
            E = np.concatenate([E, np.empty_like(E)])
        E[count] = row
        seen[int(code) if not isinstance(code, int) else code] = count
        count += 1

    gens = []
    for i in range(r):
        row = vals[:, i]
        gens.append(count)
        add(row, _codes(row[None, :], n + 1)[0])
    i = 0
    while i < count:
        x = E[i]
        ys = E[: i + 1]
        cands = np.concatenate(
            [C.imp[x[None, :], ys], C.imp[ys, x[None, :]], C.join[x[None, :], ys]]
        )
        for row, code in zip(cands, _codes(cands, n + 1)):
            code = int(code) if not isinstance(code, int) else code
            if code not in seen:
                if count >= max_elements:
                    raise SizeGuardError("free algebra size", count + 1, max_elements)
                add(row, code)
        i += 1
    elements = E[:count].copy()
    elements.setflags(write=False)
    return FreeAlgebra(n, r, elements, tuple(gens))


# ---------------------------------------------------------------- structure


@dataclass
class GeneratorReport:
    antichain: bool
    minimal_equals_generators: bool
    covered_by_filters: bool
    minimal: tuple[int, ...]
    uncovered: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.antichain and self.minimal_equals_generators and self.covered_by_filters


def generator_diagnostics(F: FreeAlgebra) -> GeneratorReport:
    A = F.algebra
    mu = minimal_elements(A, A.elements).members
    covered = 0
    for g in F.generators:
        covered |= principal_filter(A, g).mask
    uncovered = tuple(x for x in A.elements if not covered >> x & 1)
    return GeneratorReport(
        antichain=is_antichain(A, F.generators),
        minimal_equals_generators=set(mu) == set(F.generators),
        covered_by_filters=not uncovered,
        minimal=mu,
        uncovered=uncovered,
    )


def join_of(A: FiniteAlgebra, xs) -> int:
    xs = list(xs)
    out = xs[0]
    for x in xs[1:]:
        out = int(A.join[out, x])
    return out


@dataclass(frozen=True)
class GStarFilter:
    subset: tuple[int, ...]  # 0-based generator positions
    g_star: int
    filter: ElementSet
    intersection_ok: bool
    m_k: int
    alpha: dict[int, int]  # p -> number of minimal irreducible (p+1)-valued d.s.
    eta: dict[int, int]  # p -> number of irreducible (p+1)-valued d.s.
    sub: FiniteAlgebra = field(repr=False, compare=False)
    embedding: tuple[int, ...] = field(repr=False, compare=False)
    rows: tuple[DsClassification, ...] = field(repr=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.subset)


def gstar(F: FreeAlgebra, K, *, limit: int | None = None) -> GStarFilter:
    """Join of the generators in ``K``, its principal filter, and d.s. counts."""
    K = tuple(sorted(K))
    if not K or not all(0 <= i < F.r for i in K):
        raise ValueError(f"need a non-empty subset of 0..{F.r - 1}, got {K}")
    A = F.algebra
    g_star = join_of(A, (F.generators[i] for i in K))
    filt = principal_filter(A, g_star)
    meet = (1 << A.size) - 1
    for i in K:
        meet &= principal_filter(A, F.generators[i]).mask
    sub, emb = subalgebra(A, filt)
    rows = tuple(classify_all(sub, limit=limit if limit is not None else max(sub.size, 24)))
    alpha = {p: len(minimal_irreducible_ds(list(rows), p)) for p in range(1, F.n + 1)}
    eta = {p: len(irreducible_ds(list(rows), p)) for p in range(1, F.n + 1)}
    return GStarFilter(
        subset=K,
        g_star=g_star,
        filter=filt,
        intersection_ok=meet == filt.mask,
        m_k=valuedness(sub),
        alpha=alpha,
        eta=eta,
        sub=sub,
        embedding=emb,
        rows=rows,
    )


def canonical_subset(k: int) -> tuple[int, ...]:
    return tuple(range(k))


def alpha(F: FreeAlgebra, K) -> dict[int, int]:
    return gstar(F, K).alpha


def eta_bruteforce(F: FreeAlgebra, K) -> dict[int, int]:
    return gstar(F, K).eta


@dataclass
class Decomposition:
    holds: bool
    alpha: dict[int, int]
    factors: tuple[int, ...]  # chain parameter p of each coordinate
    iso: tuple[int, ...] | None  # filter element (subalgebra index) -> product index
    witness: object = None


def verify_decomposition(F: FreeAlgebra, K) -> Decomposition:
    """Map ``[g*)`` into the product of chains given by its minimal irreducible d.s.

    Each minimal irreducible (p+1)-valued d.s. ``D`` contributes the canonical
    epimorphism onto ``J_{p+1}``; the joint map must be a bijective
    homomorphism onto the product, grouped by ascending ``p``.
    """
    gs = gstar(F, K)
    S = gs.sub
    minimal = []
    for p in range(1, F.n + 1):
        minimal += [(p, D) for D in minimal_irreducible_ds(list(gs.rows), p)]
    if not minimal:
        ok = S.size == 1
        return Decomposition(ok, gs.alpha, (), (0,) * S.size if ok else None, None if ok else "no factors")
    epis = [canonical_epi(S, D) for _, D in minimal]
    P = product([e.target for e in epis])
    iso = tuple(P.encode([e.map[x] for e in epis]) for x in S.elements)
    h = Homomorphism(S, P, iso)
    bad = h.violation()
    if bad is not None:
        return Decomposition(False, gs.alpha, tuple(p for p, _ in minimal), iso, bad)
    if not h.is_injective:
        seen: dict[int, int] = {}
        for x, y in enumerate(iso):
            if y in seen:
                return Decomposition(False, gs.alpha, tuple(p for p, _ in minimal), iso, ("not injective", seen[y], x))
            seen[y] = x
    if not h.is_surjective:
        missing = min(set(range(P.size)) - set(iso))
        return Decomposition(False, gs.alpha, tuple(p for p, _ in minimal), iso, ("not surjective", P.decode(missing)))
    return Decomposition(True, gs.alpha, tuple(p for p, _ in minimal), iso)


# ---------------------------------------------------------------- cardinalities


@dataclass
class CardinalityReport:
    size: int
    inclusion_exclusion: int  # all k-subsets intersected explicitly
    binomial: int  # C(r, k) times |[g_k*)| for the first k generators
    alpha_product: int  # C(r, k) times prod (p+1)^alpha_{k,p+1}

    @property
    def ok(self) -> bool:
        return self.size == self.inclusion_exclusion == self.binomial == self.alpha_product


def cardinality_checks(F: FreeAlgebra, filters: dict[int, GStarFilter] | None = None) -> CardinalityReport:
    A = F.algebra
    ups = [principal_filter(A, g).mask for g in F.generators]
    incl = 0
    for k in range(1, F.r + 1):
        for J in combinations(range(F.r), k):
            meet = (1 << A.size) - 1
            for j in J:
                meet &= ups[j]
            incl += (-1) ** (k + 1) * meet.bit_count()
    filters = filters or {k: gstar(F, canonical_subset(k)) for k in range(1, F.r + 1)}
    binom = sum((-1) ** (k + 1) * comb(F.r, k) * len(filters[k].filter) for k in range(1, F.r + 1))
    alpha_form = sum(
        (-1) ** (k + 1) * comb(F.r, k) * prod((p + 1) ** filters[k].alpha[p] for p in range(1, F.n + 1))
        for k in range(1, F.r + 1)
    )
    return CardinalityReport(F.size, incl, binom, alpha_form)


# ---------------------------------------------------------------- homomorphisms


def generator_extension(F: FreeAlgebra, B: FiniteAlgebra, images) -> Homomorphism | None:
    return extend(F.algebra, B, dict(zip(F.generators, images)))


def freeness_violation(F: FreeAlgebra, q: int) -> tuple[int, ...] | None:
    """First generator assignment into ``J_{q+1}`` that does not extend."""
    B = make_chain(q)
    for images in iproduct(range(q + 1), repeat=F.r):
        if generator_extension(F, B, images) is None:
            return images
    return None


@dataclass
class EpiImageReport:
    checked: int
    cover_failures: list = field(default_factory=list)
    filter_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.cover_failures and not self.filter_failures


def epi_image_check(F: FreeAlgebra) -> EpiImageReport:
    """Every epimorphism onto ``J_{q+1}`` (q <= n) hits all non-top values on
    the generators and maps principal filters onto principal filters."""
    A = F.algebra
    rep = EpiImageReport(0)
    for q in range(1, F.n + 1):
        B = make_chain(q)
        for h in epimorphisms(A, B):
            rep.checked += 1
            gen_images = {h(g) for g in F.generators}
            if not set(range(q)) <= gen_images:
                rep.cover_failures.append((q, h.map))
            for z in A.elements:
                image = {h(x) for x in principal_filter(A, z)}
                if image != set(range(h(z), q + 1)):
                    rep.filter_failures.append((q, h.map, z))
                    break
    return rep
