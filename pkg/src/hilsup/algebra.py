"""Finite algebras of type (2, 2, 0): implication, join and a top constant.

Elements are dense indices ``0..size-1``.  Operation tables are read-only
numpy arrays so algebras can be shared freely.

Power and product algebras encode a tuple ``(c_0, ..., c_{k-1})`` by the
mixed-radix index ``c_0 + m_0 * (c_1 + m_1 * (c_2 + ...))``, i.e. coordinate 0
is the least significant digit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

DEFAULT_SIZE_GUARD = 2**24


class SizeGuardError(ValueError):
    """A construction would exceed a configured size limit."""

    def __init__(self, what: str, value: int, limit: int):
        self.what, self.value, self.limit = what, value, limit
        super().__init__(f"{what} = {value} exceeds the size guard {limit}")


def size_guard() -> int:
    """Carrier cap, overridable through ``HILSUP_SIZE_GUARD``."""
    raw = os.environ.get("HILSUP_SIZE_GUARD")
    if raw is None:
        return DEFAULT_SIZE_GUARD
    value = int(raw)
    if value <= 0:
        raise ValueError("HILSUP_SIZE_GUARD must be positive")
    return value


def _frozen_table(table, size: int, name: str) -> np.ndarray:
    arr = np.array(table, dtype=np.int32 if size < 2**31 else np.int64)
    if arr.shape != (size, size):
        raise ValueError(f"{name} table must be {size}x{size}, got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= size):
        raise ValueError(f"{name} table has entries outside 0..{size - 1}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    size: int
    imp: np.ndarray
    join: np.ndarray
    top: int
    factors: tuple["FiniteAlgebra", ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("an algebra needs at least one element")
        if not 0 <= self.top < self.size:
            raise ValueError(f"top {self.top} outside carrier")
        object.__setattr__(self, "imp", _frozen_table(self.imp, self.size, "imp"))
        object.__setattr__(self, "join", _frozen_table(self.join, self.size, "join"))

    def __repr__(self):
        return f"FiniteAlgebra(size={self.size}, top={self.top})"

    @property
    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def order(self) -> np.ndarray:
        """Boolean matrix with ``order[x, y]`` iff ``x <= y`` (``x -> y = top``)."""
        rel = self.imp == self.top
        rel.setflags(write=False)
        return rel

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """Bitmask of ``[x)`` for every ``x``."""
        return tuple(_mask_of(np.flatnonzero(row)) for row in self.order)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(_mask_of(np.flatnonzero(col)) for col in self.order.T)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.order[x, y])

    def tables(self) -> dict:
        return {
            "size": self.size,
            "top": self.top,
            "imp": self.imp.tolist(),
            "join": self.join.tolist(),
        }

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (
            self.size == other.size
            and self.top == other.top
            and np.array_equal(self.imp, other.imp)
            and np.array_equal(self.join, other.join)
        )

    @cached_property
    def radices(self) -> tuple[int, ...]:
        if self.factors is None:
            return (self.size,)
        return tuple(f.size for f in self.factors)

    def decode(self, index: int) -> tuple[int, ...]:
        """Coordinates of a product element (coordinate 0 least significant)."""
        coords = []
        for m in self.radices:
            index, c = divmod(index, m)
            coords.append(c)
        return tuple(coords)

    def encode(self, coords: Sequence[int]) -> int:
        index, stride = 0, 1
        for c, m in zip(coords, self.radices):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} outside 0..{m - 1}")
            index += c * stride
            stride *= m
        return index


def _mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class ElementSet:
    """A subset of a carrier, stored as a bitmask over element indices."""

    parent: FiniteAlgebra = field(compare=False, repr=False)
    mask: int

    @classmethod
    def of(cls, parent: FiniteAlgebra, members: Iterable[int]):
        members = list(members)
        for x in members:
            if not 0 <= x < parent.size:
                raise ValueError(f"element {x} outside carrier of size {parent.size}")
        return cls(parent, _mask_of(members))

    @cached_property
    def members(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def sort_key(self) -> tuple[int, int]:
        return (len(self), self.mask)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.members)})"


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra = field(compare=False, repr=False)
    target: FiniteAlgebra = field(compare=False, repr=False)
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    @cached_property
    def kernel(self) -> ElementSet:
        return ElementSet.of(
            self.source, (x for x, y in enumerate(self.map) if y == self.target.top)
        )

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def violation(self) -> tuple | None:
        """Least witness where an operation is not preserved, or ``None``."""
        S, T = self.source, self.target
        h = np.asarray(self.map, dtype=np.int64)
        if len(h) != S.size or (len(h) and (h.min() < 0 or h.max() >= T.size)):
            return ("map", len(h))
        if h[S.top] != T.top:
            return ("top", S.top)
        for name, s_tab, t_tab in (("imp", S.imp, T.imp), ("join", S.join, T.join)):
            bad = np.argwhere(h[s_tab] != t_tab[h[:, None], h[None, :]])
            if len(bad):
                return (name, int(bad[0][0]), int(bad[0][1]))
        return None

    def is_homomorphism(self) -> bool:
        return self.violation() is None


# ---------------------------------------------------------------- construction


def make_chain(q: int) -> FiniteAlgebra:
    """The chain ``J_{q+1}``: index ``i`` stands for ``i/q``, top is ``q``."""
    if q < 1:
        raise ValueError(f"chain parameter must be >= 1, got {q}")
    idx = np.arange(q + 1)
    a, b = idx[:, None], idx[None, :]
    imp = np.where(a <= b, q, np.broadcast_to(b, (q + 1, q + 1)))
    return FiniteAlgebra(q + 1, imp, np.maximum(a, b), q)


def trivial_algebra() -> FiniteAlgebra:
    return FiniteAlgebra(1, [[0]], [[0]], 0)


def product(algebras: Sequence[FiniteAlgebra], *, limit: int | None = None) -> FiniteAlgebra:
    """Direct product with componentwise operations (mixed-radix encoding)."""
    algebras = tuple(algebras)
    if not algebras:
        raise ValueError("product of an empty list")
    limit = size_guard() if limit is None else limit
    size = 1
    for a in algebras:
        size *= a.size
        if size > limit:
            raise SizeGuardError("product carrier size", size, limit)
    dtype = np.int32 if size < 2**31 else np.int64
    idx = np.arange(size, dtype=dtype)
    imp = np.zeros((size, size), dtype=dtype)
    join = np.zeros((size, size), dtype=dtype)
    top, stride = 0, 1
    for a in algebras:
        c = (idx // stride) % a.size
        imp += a.imp[c[:, None], c[None, :]] * stride
        join += a.join[c[:, None], c[None, :]] * stride
        top += a.top * stride
        stride *= a.size
    return FiniteAlgebra(size, imp, join, top, factors=algebras)


def power(A: FiniteAlgebra, k: int, *, limit: int | None = None) -> FiniteAlgebra:
    if k < 1:
        raise ValueError(f"power exponent must be >= 1, got {k}")
    return product([A] * k, limit=limit)


def subalgebra(A: FiniteAlgebra, S: ElementSet) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Induced algebra on a closed subset; returns it with the embedding map."""
    members = np.array(S.members, dtype=np.int64)
    if A.top not in S:
        raise ValueError("subset does not contain top")
    pos = np.full(A.size, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    imp = pos[A.imp[members[:, None], members[None, :]]]
    join = pos[A.join[members[:, None], members[None, :]]]
    if (imp < 0).any() or (join < 0).any():
        raise ValueError("subset is not closed under the operations")
    sub = FiniteAlgebra(len(members), imp, join, int(pos[A.top]))
    return sub, tuple(int(x) for x in members)


# ---------------------------------------------------------------- closures


def generated_subalgebra(A: FiniteAlgebra, G: Iterable[int]) -> ElementSet:
    """Least subset containing ``G`` and top, closed under imp and join."""
    found = [A.top]
    seen = {A.top}
    for g in G:
        if g not in seen:
            seen.add(g)
            found.append(g)
    imp, join = A.imp, A.join
    i = 0
    while i < len(found):
        x = found[i]
        for y in found[: i + 1]:
            for z in (imp[x, y], imp[y, x], join[x, y]):
                z = int(z)
                if z not in seen:
                    seen.add(z)
                    found.append(z)
        i += 1
    return ElementSet.of(A, found)


def principal_filter(A: FiniteAlgebra, z: int) -> ElementSet:
    return ElementSet(A, A.up_masks[z])


def minimal_elements(A: FiniteAlgebra, X: Iterable[int]) -> ElementSet:
    xs = sorted(set(X))
    order = A.order
    return ElementSet.of(
        A, (x for x in xs if not any(order[y, x] and y != x for y in xs))
    )


def is_antichain(A: FiniteAlgebra, X: Iterable[int]) -> bool:
    xs = list(X)
    return not any(x != y and A.order[x, y] for x in xs for y in xs)


# ---------------------------------------------------------------- validation

Violation = tuple  # (law name, witness...)


def _first_pair(bad: np.ndarray, law: str) -> list[Violation]:
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return []
    return [(law, *(int(v) for v in hits[0]))]


def _first_triple(
    A: FiniteAlgebra, law: str, bad: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
) -> list[Violation]:
    """Least ``(x, y, z)`` where ``bad`` holds; ``bad`` broadcasts over 3-D index grids."""
    m = A.size
    idx = np.arange(m)
    Y, Z = idx[None, :, None], idx[None, None, :]
    block = max(1, 4_000_000 // (m * m))
    for start in range(0, m, block):
        X = idx[start : start + block, None, None]
        hits = bad(X, Y, Z)
        if hits.any():
            x, y, z = np.argwhere(hits)[0]
            return [(law, int(x) + start, int(y), int(z))]
    return []


def validate_hilbert(A: FiniteAlgebra) -> list[Violation]:
    """Exhaustive check of H1-H3; each violated law reports its least witness."""
    I, t = A.imp, A.top
    report = []
    # H1: x -> (y -> x) = 1, witnesses indexed (x, y)
    report += _first_pair(I[np.arange(A.size)[:, None], I.T] != t, "H1")
    # H2: (x->(y->z)) -> ((x->y) -> (x->z)) = 1
    report += _first_triple(
        A, "H2", lambda X, Y, Z: I[I[X, I[Y, Z]], I[I[X, Y], I[X, Z]]] != t
    )
    order = A.order
    both = order & order.T
    np.fill_diagonal(both, False)
    report += _first_pair(both, "H3")
    return report


def validate_sup(A: FiniteAlgebra) -> list[Violation]:
    """Equations (a), (b), (c) characterizing Hilbert algebras with supremum."""
    I, J, t = A.imp, A.join, A.top
    idx = np.arange(A.size)
    report = []
    report += _first_pair(I[idx[:, None], J] != t, "a")
    report += _first_pair(I[idx[None, :], J] != t, "b")
    report += _first_triple(
        A, "c", lambda X, Y, Z: I[I[X, Z], I[I[Y, Z], I[J[X, Y], Z]]] != t
    )
    return report


def glb_table(A: FiniteAlgebra) -> np.ndarray:
    """Meet table, ``-1`` where the greatest lower bound does not exist."""
    by_down = {m: x for x, m in enumerate(A.down_masks)}
    down = A.down_masks
    out = np.full((A.size, A.size), -1, dtype=np.int64)
    for u in range(A.size):
        du = down[u]
        for v in range(u, A.size):
            w = by_down.get(du & down[v], -1)
            out[u, v] = out[v, u] = w
    return out


def check_derived_identities(A: FiniteAlgebra) -> list[Violation]:
    """Exhaustive check of H4-H11 plus order and least-upper-bound laws."""
    I, J, t = A.imp, A.join, A.top
    n = A.size
    idx = np.arange(n)
    diag = I[idx, idx]
    report = []
    report += _first_pair((I[diag, idx] != idx)[:, None], "H4")
    report += _first_pair(diag[:, None] != diag[None, :], "H5")
    report += _first_triple(A, "H6", lambda X, Y, Z: I[X, I[Y, Z]] != I[I[X, Y], I[X, Z]])
    # H7 with axes (x, y)
    lhs = I[I, I[I.T, idx[:, None]]]
    rhs = I[I.T, I[I, idx[None, :]]]
    report += _first_pair(lhs != rhs, "H7")
    report += _first_triple(A, "H8", lambda X, Y, Z: I[X, I[Y, Z]] != I[Y, I[X, Z]])
    report += _first_pair((I[:, t] != t)[:, None], "H9")
    glb = glb_table(A)
    # (a v b) -> c must be the meet of a -> c and b -> c
    report += _first_triple(A, "H10", lambda X, Y, Z: I[J[X, Y], Z] != glb[I[X, Z], I[Y, Z]])
    report += _first_triple(
        A, "H11", lambda X, Y, Z: I[I[X, Z], I[I[Y, Z], I[J[X, Y], Z]]] != t
    )
    order = A.order
    report += _first_pair(~np.diag(order)[:, None], "order-reflexive")
    o = order.astype(np.float32)
    report += _first_pair(((o @ o) > 0) & ~order, "order-transitive")
    report += _first_pair(~order[:, t][:, None], "order-top")
    report += _first_pair(J != J.T, "join-commutative")
    report += _first_pair((J[idx, idx] != idx)[:, None], "join-idempotent")
    report += _first_triple(A, "join-associative", lambda X, Y, Z: J[J[X, Y], Z] != J[X, J[Y, Z]])
    report += _first_pair(~(order[idx[:, None], J] & order[idx[None, :], J]), "join-upper")
    report += _first_triple(
        A, "join-least", lambda X, Y, Z: order[X, Z] & order[Y, Z] & ~order[J[X, Y], Z]
    )
    return report


def componentwise_violation(A: FiniteAlgebra) -> Violation | None:
    """Least pair where a table of ``A`` differs from the componentwise value."""
    if A.factors is None:
        raise ValueError("algebra carries no product structure")
    if A.top != A.encode([f.top for f in A.factors]):
        return ("componentwise-top", A.top)
    idx = np.arange(A.size, dtype=A.imp.dtype)
    stride = 1
    for f in A.factors:
        c = (idx // stride) % f.size
        for name, mine, ref in (("imp", A.imp, f.imp), ("join", A.join, f.join)):
            bad = (mine // stride) % f.size != ref[c[:, None], c[None, :]]
            hit = _first_pair(bad, f"componentwise-{name}")
            if hit:
                return hit[0]
        stride *= f.size
    return None


def validate_product(A: FiniteAlgebra, *checks: Callable[[FiniteAlgebra], list[Violation]]) -> list[Violation]:
    """Decide equational checks on a product algebra through its factors.

    Every table entry of ``A`` is compared with the componentwise value
    (exhaustive over all pairs), then each check runs exhaustively on every
    distinct factor.  Equations and quasi-equations are preserved by direct
    products and reflected by projections, so the verdict is exact.  A factor
    witness is lifted into ``A`` with top in the other coordinates.
    """
    bad = componentwise_violation(A)
    if bad is not None:
        return [bad]
    report: list[Violation] = []
    seen: dict[tuple[int, int], list[Violation]] = {}
    for i, f in enumerate(A.factors):
        for j, check in enumerate(checks):
            res = seen.setdefault((id(f), j), check(f))
            for law, *witness in res:
                if any(law == r[0] for r in report):
                    continue
                lifted = []
                for w in witness:
                    coords = [g.top for g in A.factors]
                    coords[i] = w
                    lifted.append(A.encode(coords))
                report.append((law, *lifted))
    return report


# ---------------------------------------------------------------- Thomas term


def _thomas_grid_fails(A: FiniteAlgebra, p: int, fixed: tuple[int, ...], free: int) -> np.ndarray | None:
    I, t = A.imp, A.top
    grids = np.indices((A.size,) * free).reshape(free, -1) if free else np.zeros((0, 1), np.int64)
    xs = [np.full(grids.shape[1], v, dtype=np.int64) for v in fixed] + list(grids)
    x0 = xs[0]
    value = x0
    for i in range(p):
        beta = I[I[xs[i], xs[i + 1]], x0]
        value = I[beta, value]  # beta_i -> (beta_{i-1} -> ... -> x0)
    bad = np.flatnonzero(value != t)
    if len(bad) == 0:
        return None
    return np.array([*fixed, *(grids[:, bad[0]] if free else [])], dtype=np.int64)


def thomas_witness(A: FiniteAlgebra, p: int, *, chunk: int = 2_000_000) -> tuple[int, ...] | None:
    """Least (p+1)-tuple at which the Thomas term T_{p+1} differs from top."""
    if p < 1:
        raise ValueError("Thomas term needs p >= 1")
    nvars = p + 1
    free = nvars
    while free > 0 and A.size**free > chunk:
        free -= 1
    for fixed in iproduct(range(A.size), repeat=nvars - free):
        hit = _thomas_grid_fails(A, p, fixed, free)
        if hit is not None:
            return tuple(int(v) for v in hit)
    return None


def thomas_holds(A: FiniteAlgebra, p: int) -> bool:
    return thomas_witness(A, p) is None


def valuedness(A: FiniteAlgebra) -> int:
    """Least ``p >= 1`` such that T_{p+1} is identically top."""
    for p in range(1, A.size + 1):
        if thomas_holds(A, p):
            return p
    raise AssertionError(f"no Thomas identity up to p = {A.size}; not a finite Hilbert algebra?")


# ---------------------------------------------------------------- homomorphisms


def generating_set(A: FiniteAlgebra) -> tuple[int, ...]:
    """A small generating set: minimal elements first, then greedy by index."""
    gens = list(minimal_elements(A, A.elements).members)
    if gens == [A.top] and A.size == 1:
        return ()
    closure = generated_subalgebra(A, gens)
    for x in A.elements:
        if len(closure) == A.size:
            break
        if x not in closure:
            gens.append(x)
            closure = generated_subalgebra(A, gens)
    return tuple(g for g in gens if g != A.top)


def extend(A: FiniteAlgebra, B: FiniteAlgebra, assignment: dict[int, int]) -> Homomorphism | None:
    """The homomorphism agreeing with ``assignment``, or ``None`` if none exists.

    Images are propagated through the closure of the assigned elements; a
    conflicting value aborts.  The result must cover all of ``A``, so the
    assigned elements have to generate ``A``.
    """
    image = {A.top: B.top}
    for x, y in assignment.items():
        if image.get(x, y) != y:
            return None
        image[x] = y
    order = list(image)
    Ai, Aj, Bi, Bj = A.imp, A.join, B.imp, B.join
    i = 0
    while i < len(order):
        x = order[i]
        hx = image[x]
        for y in order[: i + 1]:
            hy = image[y]
            for z, hz in (
                (Ai[x, y], Bi[hx, hy]),
                (Ai[y, x], Bi[hy, hx]),
                (Aj[x, y], Bj[hx, hy]),
            ):
                z, hz = int(z), int(hz)
                got = image.get(z)
                if got is None:
                    image[z] = hz
                    order.append(z)
                elif got != hz:
                    return None
        i += 1
    if len(image) != A.size:
        raise ValueError("assigned elements do not generate the source algebra")
    return Homomorphism(A, B, tuple(image[x] for x in A.elements))


def restricted_extensions(
    A: FiniteAlgebra, G: Sequence[int], B: FiniteAlgebra
) -> dict[tuple[int, ...], Homomorphism | None]:
    """For every map ``G -> B`` (lexicographic), its extension or ``None``."""
    return {
        images: extend(A, B, dict(zip(G, images)))
        for images in iproduct(range(B.size), repeat=len(G))
    }


def homomorphisms(A: FiniteAlgebra, B: FiniteAlgebra) -> list[Homomorphism]:
    G = generating_set(A)
    homs = [h for h in restricted_extensions(A, G, B).values() if h is not None]
    # different generator images give different maps, so no deduplication
    return sorted(homs, key=lambda h: h.map)


def epimorphisms(A: FiniteAlgebra, B: FiniteAlgebra) -> list[Homomorphism]:
    if B.size > A.size:
        return []
    return [h for h in homomorphisms(A, B) if h.is_surjective]


# ---------------------------------------------------------------- quotients


def mp_closed(A: FiniteAlgebra, S: ElementSet) -> bool:
    """``S`` contains top and is closed under modus ponens."""
    if A.top not in S:
        return False
    members = np.array(S.members, dtype=np.int64)
    inside = np.zeros(A.size, dtype=bool)
    inside[members] = True
    # x in S and x -> y in S must force y in S
    forced = inside[A.imp[members]].any(axis=0)
    return not (forced & ~inside).any()


def congruence_classes(A: FiniteAlgebra, D: ElementSet) -> list[list[int]]:
    inside = np.zeros(A.size, dtype=bool)
    inside[list(D.members)] = True
    rel = inside[A.imp] & inside[A.imp.T]
    classes, label = [], [-1] * A.size
    for x in A.elements:
        if label[x] < 0:
            cls = [int(y) for y in np.flatnonzero(rel[x])]
            for y in cls:
                label[y] = len(classes)
            classes.append(cls)
    return classes


def quotient(A: FiniteAlgebra, D: ElementSet) -> tuple[FiniteAlgebra, Homomorphism]:
    """``A/D`` with classes numbered by their least element, and the projection."""
    if not mp_closed(A, D):
        raise ValueError(f"{D!r} is not a deductive system")
    classes = congruence_classes(A, D)
    label = np.empty(A.size, dtype=np.int64)
    for c, cls in enumerate(classes):
        label[cls] = c
    reps = np.array([cls[0] for cls in classes], dtype=np.int64)
    imp = label[A.imp[reps[:, None], reps[None, :]]]
    join = label[A.join[reps[:, None], reps[None, :]]]
    # well-definedness: every member of a class must give the same classes
    for name, tab, q in (("imp", A.imp, imp), ("join", A.join, join)):
        if not np.array_equal(label[tab], q[label[:, None], label[None, :]]):
            raise AssertionError(f"{name} is not compatible with the congruence of {D!r}")
    Q = FiniteAlgebra(len(classes), imp, join, int(label[A.top]))
    proj = Homomorphism(A, Q, tuple(int(c) for c in label))
    return Q, proj


def is_chain(A: FiniteAlgebra) -> bool:
    o = A.order
    return bool((o | o.T).all())


def chain_isomorphism(A: FiniteAlgebra) -> Homomorphism | None:
    """If ``A`` is totally ordered, the order-rank map onto ``J_{|A|}``."""
    if A.size < 2 or not is_chain(A):
        return None
    rank = A.order.sum(axis=0) - 1  # number of elements strictly below
    iso = Homomorphism(A, make_chain(A.size - 1), tuple(int(x) for x in rank))
    if not iso.is_homomorphism():
        raise AssertionError("totally ordered algebra is not isomorphic to the chain of its size")
    return iso
