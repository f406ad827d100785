"""Deductive systems of finite Hilbert algebras with supremum and their classification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    ElementSet,
    FiniteAlgebra,
    Homomorphism,
    SizeGuardError,
    _bits,
    chain_isomorphism,
    make_chain,
    mp_closed,
    principal_filter,
    quotient,
)

DEFAULT_ENUM_LIMIT = 24


class ImproperDeductiveSystem(ValueError):
    """Raised when a classifier that needs a proper d.s. gets the whole carrier."""


@dataclass(frozen=True, repr=False)
class DeductiveSystem(ElementSet):
    pass


def as_ds(A: FiniteAlgebra, S: ElementSet) -> DeductiveSystem:
    if not mp_closed(A, S):
        raise ValueError(f"{S!r} is not a deductive system")
    return DeductiveSystem(A, S.mask)


class _MPTables:
    """``fiber[x][v]``: bitmask of the ``y`` with ``x -> y == v``."""

    def __init__(self, A: FiniteAlgebra):
        self.A = A
        self.fiber = []
        for x in A.elements:
            row = A.imp[x]
            masks = [0] * A.size
            for y, v in enumerate(row):
                masks[int(v)] |= 1 << y
            self.fiber.append(masks)

    def close(self, mask: int) -> int:
        """Least deductive system containing ``mask`` (and top)."""
        mask |= 1 << self.A.top
        while True:
            grown = mask
            for x in _bits(mask):
                fib = self.fiber[x]
                for v in _bits(mask):
                    grown |= fib[v]
            if grown == mask:
                return mask
            mask = grown


def ds_generated(A: FiniteAlgebra, S) -> DeductiveSystem:
    """Modus-ponens saturation of ``S`` and top; valid for any table."""
    mask = S.mask if isinstance(S, ElementSet) else ElementSet.of(A, S).mask
    return DeductiveSystem(A, _MPTables(A).close(mask))


def enumerate_ds(A: FiniteAlgebra, *, limit: int | None = DEFAULT_ENUM_LIMIT) -> list[DeductiveSystem]:
    """All deductive systems of a Hilbert algebra, sorted by (size, mask).

    Starts from ``{top}`` and repeatedly adds one outside element ``a``; by the
    deduction theorem the d.s. generated by ``D`` and ``a`` is
    ``{x : a -> x in D}``.  Every d.s. is reached through such one-step
    extensions.
    """
    if limit is not None and A.size > limit:
        raise SizeGuardError("carrier size for full d.s. enumeration", A.size, limit)
    weights = np.array([1 << x for x in A.elements], dtype=object)
    start = 1 << A.top
    seen = {start}
    todo = [start]
    while todo:
        mask = todo.pop()
        inside = np.array([mask >> x & 1 for x in A.elements], dtype=bool)
        for a in np.flatnonzero(~inside):
            bigger = int(weights[inside[A.imp[a]]].sum())
            if bigger not in seen:
                seen.add(bigger)
                todo.append(bigger)
    out = [DeductiveSystem(A, m) for m in seen]
    return sorted(out, key=DeductiveSystem.sort_key)


def _outside(A: FiniteAlgebra, D: ElementSet) -> np.ndarray:
    inside = np.zeros(A.size, dtype=bool)
    inside[list(D.members)] = True
    return ~inside


def _require_proper(A: FiniteAlgebra, D: ElementSet) -> np.ndarray:
    out = _outside(A, D)
    if not out.any():
        raise ImproperDeductiveSystem(f"{D!r} is the whole carrier")
    return out


def is_irreducible(A: FiniteAlgebra, D: ElementSet) -> bool:
    """Any two elements outside ``D`` have a common upper bound outside ``D``."""
    out = _require_proper(A, D)
    o = A.order[:, out]  # o[a, c]: a <= c with c outside D
    sub = o[out].astype(np.int64)
    common = sub @ sub.T  # number of shared outside upper bounds
    return bool((common > 0).all())


def fully_irreducible_witness(A: FiniteAlgebra, D: ElementSet) -> int | None:
    """Least ``a`` outside ``D`` with ``x -> a`` in ``D`` for every ``x`` outside ``D``."""
    out = _require_proper(A, D)
    inside = ~out
    xs = np.flatnonzero(out)
    for a in xs:
        if inside[A.imp[xs, a]].all():
            return int(a)
    return None


def is_fully_irreducible(A: FiniteAlgebra, D: ElementSet) -> bool:
    return fully_irreducible_witness(A, D) is not None


def prime_violation(A: FiniteAlgebra, D: ElementSet) -> tuple[int, int] | None:
    out = _require_proper(A, D)
    inside = ~out
    bad = np.argwhere(inside[A.join] & out[:, None] & out[None, :])
    return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))


def is_prime(A: FiniteAlgebra, D: ElementSet) -> bool:
    return prime_violation(A, D) is None


def is_meet_irreducible(D: ElementSet, family: list[ElementSet]) -> bool:
    """Lattice-theoretic irreducibility inside an enumerated d.s. family.

    In a finite lattice ``D`` is meet-irreducible iff it is proper and the
    intersection of all strictly larger members is still strictly larger.
    """
    above = [E.mask for E in family if E.mask != D.mask and E.mask & D.mask == D.mask]
    if not above:
        return False
    meet = above[0]
    for m in above[1:]:
        meet &= m
    return meet != D.mask


def valued_p(A: FiniteAlgebra, D: ElementSet) -> int | None:
    """``p`` with ``A/D`` isomorphic to ``C_{p+1}``, else ``None``."""
    Q, _ = quotient(A, D)
    return Q.size - 1 if chain_isomorphism(Q) is not None else None


@dataclass(frozen=True)
class DsClassification:
    ds: DeductiveSystem
    proper: bool
    irreducible: bool
    fully_irreducible: bool
    prime: bool
    minimal_in_E: bool
    valued_p: int | None

    def row(self) -> dict:
        return {
            "members": list(self.ds.members),
            "proper": self.proper,
            "irreducible": self.irreducible,
            "fully_irreducible": self.fully_irreducible,
            "prime": self.prime,
            "minimal_in_E": self.minimal_in_E,
            "valued_p": self.valued_p,
        }


def classify(A: FiniteAlgebra, D: ElementSet) -> DsClassification:
    D = as_ds(A, D)
    proper = len(D) < A.size
    irr = proper and is_irreducible(A, D)
    return DsClassification(
        ds=D,
        proper=proper,
        irreducible=irr,
        fully_irreducible=proper and is_fully_irreducible(A, D),
        prime=proper and is_prime(A, D),
        minimal_in_E=False,
        valued_p=valued_p(A, D) if proper else None,
    )


def classify_all(A: FiniteAlgebra, *, limit: int | None = DEFAULT_ENUM_LIMIT) -> list[DsClassification]:
    rows = [classify(A, D) for D in enumerate_ds(A, limit=limit)]
    irr = [c.ds.mask for c in rows if c.irreducible]
    out = []
    for c in rows:
        minimal = c.irreducible and not any(m != c.ds.mask and m & c.ds.mask == m for m in irr)
        out.append(DsClassification(c.ds, c.proper, c.irreducible, c.fully_irreducible, c.prime, minimal, c.valued_p))
    return out


def irreducible_ds(rows: list[DsClassification], p: int | None = None) -> list[DeductiveSystem]:
    """``E(A)``, or ``E_{p+1}(A)`` when ``p`` is given."""
    return [c.ds for c in rows if c.irreducible and (p is None or c.valued_p == p)]


def minimal_irreducible_ds(rows: list[DsClassification], p: int | None = None) -> list[DeductiveSystem]:
    """``M(A)``, or ``M_{p+1}(A)`` when ``p`` is given."""
    return [c.ds for c in rows if c.minimal_in_E and (p is None or c.valued_p == p)]


def splitting_check(A: FiniteAlgebra, rows: list[DsClassification] | None = None) -> bool:
    """Both ``E(A)`` and ``M(A)`` intersect to ``{top}``."""
    rows = classify_all(A) if rows is None else rows
    top = 1 << A.top
    for family in (irreducible_ds(rows), minimal_irreducible_ds(rows)):
        meet = (1 << A.size) - 1
        for D in family:
            meet &= D.mask
        if meet != top:
            return False
    return True


def subdirect_map(A: FiniteAlgebra, family: list[ElementSet]) -> list[tuple[int, ...]]:
    """``x -> (x / M)_M``: class labels of every element in each quotient."""
    projections = [quotient(A, M)[1].map for M in family]
    return [tuple(pr[x] for pr in projections) for x in A.elements]


def subdirect_injective(A: FiniteAlgebra, family: list[ElementSet]) -> bool:
    images = subdirect_map(A, family)
    return len(set(images)) == A.size


@dataclass(frozen=True)
class ChainAbove:
    """The d.s. containing a (p+1)-valued ``D``, ordered ``D = S_0 < ... < S_p = A``."""

    ds: DeductiveSystem
    steps: tuple[DeductiveSystem, ...]
    generators: tuple[int | None, ...]  # least element of each step when principal
    epi: Homomorphism = field(repr=False)

    @property
    def p(self) -> int:
        return len(self.steps) - 1


def chain_above(A: FiniteAlgebra, D: ElementSet) -> ChainAbove:
    """Chain of d.s. above ``D`` together with the canonical epimorphism.

    ``A/D`` is a chain ``0 < 1/p < ... < 1``; the d.s. above ``D`` are the
    preimages of its filters.  An element in step ``j`` but not ``j-1`` is sent
    to ``(p-j)/p``.
    """
    D = as_ds(A, D)
    if len(D) == A.size:
        raise ImproperDeductiveSystem(f"{D!r} is the whole carrier")
    Q, proj = quotient(A, D)
    iso = chain_isomorphism(Q)
    if iso is None:
        raise ValueError(f"{D!r} is not (p+1)-valued: the quotient is not a chain")
    p = Q.size - 1
    rank = [iso.map[c] for c in proj.map]  # chain index i stands for i/p
    steps, gens = [], []
    for j in range(p + 1):
        S = DeductiveSystem(A, ElementSet.of(A, (x for x in A.elements if rank[x] >= p - j)).mask)
        steps.append(S)
        least = [x for x in S if all(A.order[x, y] for y in S)]
        gens.append(least[0] if least else None)
    epi = Homomorphism(A, make_chain(p), tuple(rank))
    bad = epi.violation()
    if bad is not None:
        raise AssertionError(f"canonical map of {D!r} is not a homomorphism at {bad}")
    if epi.kernel.mask != D.mask:
        raise AssertionError(f"canonical map of {D!r} has the wrong kernel")
    return ChainAbove(D, tuple(steps), tuple(gens), epi)


def canonical_epi(A: FiniteAlgebra, D: ElementSet) -> Homomorphism:
    return chain_above(A, D).epi


def extensions_to_algebra(
    A: FiniteAlgebra, c: int, D: ElementSet, E_A: list[ElementSet]
) -> list[ElementSet]:
    """All ``M`` in ``E_A`` with ``M ∩ [c) = D`` (``D`` given inside ``A``)."""
    filt = principal_filter(A, c).mask
    return [M for M in E_A if M.mask & filt == D.mask]


def unique_extension(A: FiniteAlgebra, c: int, D: ElementSet, E_A: list[ElementSet]) -> ElementSet:
    """The unique irreducible ``M_D`` of ``A`` cutting ``[c)`` in ``D``."""
    found = extensions_to_algebra(A, c, D, E_A)
    if len(found) != 1:
        raise AssertionError(f"expected one extension of {D!r} above {c}, found {len(found)}")
    return found[0]
