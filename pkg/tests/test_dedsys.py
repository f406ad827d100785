import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hilsup.algebra import (
    ElementSet,
    SizeGuardError,
    make_chain,
    mp_closed,
    power,
    principal_filter,
    product,
    quotient,
    subalgebra,
)
from hilsup.dedsys import (
    ImproperDeductiveSystem,
    chain_above,
    canonical_epi,
    classify_all,
    ds_generated,
    enumerate_ds,
    extensions_to_algebra,
    fully_irreducible_witness,
    irreducible_ds,
    is_fully_irreducible,
    is_irreducible,
    is_meet_irreducible,
    is_prime,
    minimal_irreducible_ds,
    splitting_check,
    subdirect_injective,
    unique_extension,
)
from hilsup.free import build_free, canonical_subset, gstar

J2, J3 = make_chain(1), make_chain(2)
P22 = power(J2, 2)


def es(A, xs):
    return ElementSet.of(A, xs)


def powerset_ds(A):
    """Oracle: every subset containing top that is closed under modus ponens."""
    out = []
    rest = [x for x in A.elements if x != A.top]
    for k in range(len(rest) + 1):
        for S in itertools.combinations(rest, k):
            D = es(A, S + (A.top,))
            if mp_closed(A, D):
                out.append(D.mask)
    return sorted(out, key=lambda m: (m.bit_count(), m))


SMALL = [
    J2,
    J3,
    make_chain(3),
    make_chain(5),
    P22,
    power(J2, 3),
    product([J2, J3]),
    power(J3, 2),
    build_free(1, 2).algebra,
]


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_enumeration_matches_powerset(A):
    assert A.size <= 12
    assert [D.mask for D in enumerate_ds(A)] == powerset_ds(A)


def test_enumerate_chain_j3():
    assert [set(D) for D in enumerate_ds(J3)] == [{2}, {1, 2}, {0, 1, 2}]
    assert len(enumerate_ds(J2)) == 2


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_principal_filters_are_ds(A):
    masks = {D.mask for D in enumerate_ds(A)}
    assert all(principal_filter(A, z).mask in masks for z in A.elements)


def test_enumeration_guard():
    with pytest.raises(SizeGuardError):
        enumerate_ds(power(J2, 5))
    assert len(enumerate_ds(power(J2, 5), limit=None)) == 2**5


def test_irreducible_examples():
    assert is_irreducible(J3, principal_filter(J3, 1))
    with pytest.raises(ImproperDeductiveSystem):
        is_irreducible(J3, es(J3, J3.elements))
    bottom = P22.encode((0, 0))
    assert len(principal_filter(P22, bottom)) == P22.size
    assert is_irreducible(P22, principal_filter(P22, P22.encode((0, 1))))


def test_fully_irreducible_examples():
    assert fully_irreducible_witness(J3, principal_filter(J3, 1)) == 0
    assert not is_fully_irreducible(P22, es(P22, [P22.top]))
    assert fully_irreducible_witness(J2, es(J2, [J2.top])) == 0


def test_fully_irreducible_witness_on_j4():
    C = make_chain(3)
    # [1) has outside {0} only; [2) has outside {0, 1} and a = 1 works
    assert fully_irreducible_witness(C, principal_filter(C, 2)) == 1


def test_prime_examples():
    assert not is_prime(P22, es(P22, [P22.top]))
    assert is_prime(J3, principal_filter(J3, 1))


def test_classification_j3():
    rows = classify_all(J3)
    by = {frozenset(c.ds): c for c in rows}
    assert by[frozenset({1, 2})].irreducible and by[frozenset({1, 2})].valued_p == 1
    assert by[frozenset({2})].irreducible and by[frozenset({2})].valued_p == 2
    assert not by[frozenset({0, 1, 2})].proper
    assert irreducible_ds(rows, p=2)


def test_minimal_irreducible_p22():
    rows = classify_all(P22)
    M = minimal_irreducible_ds(rows)
    expect = {principal_filter(P22, P22.encode((0, 1))).mask, principal_filter(P22, P22.encode((1, 0))).mask}
    assert {D.mask for D in M} == expect
    assert all(c.valued_p == 1 for c in rows if c.minimal_in_E)


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_classifier_relations(A):
    rows = classify_all(A)
    family = [c.ds for c in rows]
    for c in rows:
        if not c.proper:
            continue
        assert c.fully_irreducible == c.irreducible
        assert c.irreducible == is_meet_irreducible(c.ds, family)
        if c.irreducible:
            assert c.prime
            assert c.valued_p is not None
            Q, _ = quotient(A, c.ds)
            assert Q.size == c.valued_p + 1


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_splitting_and_subdirect(A):
    rows = classify_all(A)
    assert splitting_check(A, rows)
    assert subdirect_injective(A, irreducible_ds(rows))


def test_splitting_j3():
    E = irreducible_ds(classify_all(J3))
    assert {D.mask for D in E} == {0b110, 0b100}


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_canonical_epimorphisms(A):
    for c in classify_all(A):
        if c.irreducible:
            h = canonical_epi(A, c.ds)
            assert h.is_homomorphism() and h.is_surjective
            assert h.target.size == c.valued_p + 1
            assert h.kernel.mask == c.ds.mask


def test_chain_above_examples():
    ch = chain_above(J3, principal_filter(J3, 1))
    assert [set(S) for S in ch.steps] == [{1, 2}, {0, 1, 2}]
    assert ch.epi.map == (0, 1, 1)
    ch = chain_above(J3, es(J3, [J3.top]))
    assert ch.epi.map == (0, 1, 2)
    D = principal_filter(P22, P22.encode((0, 1)))
    ch = chain_above(P22, D)
    assert ch.p == 1 and ch.epi.kernel.mask == D.mask


def test_chain_above_rejects_non_chain_quotient():
    with pytest.raises(ValueError):
        chain_above(P22, es(P22, [P22.top]))


def test_unique_extension_free_2_2():
    F = build_free(1, 2)
    A = F.algebra
    gs = gstar(F, canonical_subset(2))
    E_A = irreducible_ds(classify_all(A))
    for c in classify_all(gs.sub):
        if c.irreducible:
            D = es(A, (gs.embedding[x] for x in c.ds))
            M = unique_extension(A, gs.g_star, D, E_A)
            assert M.mask & gs.filter.mask == D.mask


def test_unique_extension_whole_filter():
    E_A = irreducible_ds(classify_all(J3))
    for D in E_A:
        assert unique_extension(J3, 0, D, E_A).mask == D.mask


@pytest.mark.parametrize("n,r", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_extension_lemmas_on_free(n, r):
    F = build_free(n, r)
    A = F.algebra
    rows_A = classify_all(A, limit=None)
    E_A = irreducible_ds(rows_A)
    M_A = {D.mask for D in minimal_irreducible_ds(rows_A)}
    valued = {c.ds.mask: c.valued_p for c in rows_A}
    for k in range(1, r + 1):
        gs = gstar(F, canonical_subset(k))
        for c in classify_all(gs.sub, limit=None):
            if not c.irreducible:
                continue
            D = es(A, (gs.embedding[x] for x in c.ds))
            (M,) = extensions_to_algebra(A, gs.g_star, D, E_A)
            assert c.valued_p <= valued[M.mask]
            if M.mask in M_A:
                assert c.minimal_in_E


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 8)))
def test_ds_generated_is_least(xs):
    A = power(J3, 2)
    D = ds_generated(A, xs)
    assert mp_closed(A, D) and set(xs) <= set(D)
    for E in enumerate_ds(A):
        if set(xs) <= set(E):
            assert D.mask & E.mask == D.mask


def test_subalgebra_filters_are_classified():
    sub, _ = subalgebra(J3, principal_filter(J3, 1))
    assert [c.irreducible for c in classify_all(sub)] == [True, False]
