import pytest
from hypothesis import given, settings, strategies as st

from hilsup.algebra import SizeGuardError
from hilsup.counting import (
    FCountSpec,
    admissible_maps,
    alternating_bound,
    beta,
    count_F,
    eta_closed_form,
    eta_via_theorem,
    surjections,
    surjections_bruteforce,
    u2,
    u3,
    upper_bound,
)
from hilsup.free import build_free, canonical_subset, gstar
from hilsup.reports import beta_coefficient_variant, count_report, discrepancy_report

GRID = [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_surjection_examples():
    assert surjections(2, 2) == 2
    assert surjections(3, 2) == 6
    assert surjections(2, 3) == 0
    assert surjections(3, 0) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_surjections_vs_enumeration(d, a):
    assert surjections(d, a) == surjections_bruteforce(d, a)


def test_u_examples():
    assert u3(1, 1, 0, r=2, k=1) == 1
    assert u3(1, 1, 1, r=2, k=1) == 1
    assert u2(1, 1, r=2, k=1) == 2


def test_beta_examples():
    assert beta(1, 1, n=1, r=2) == 2
    assert beta(1, 2, n=1, r=2) == 0  # p > n: empty sum
    assert beta(1, 1, n=2, r=2) == eta_via_theorem(2, 2, 1, 1) == 3


def test_count_f_examples():
    spec = FCountSpec(1, 2, 1, 1, 1)
    assert sorted(admissible_maps(spec)) == [(0, 0), (0, 1)]
    assert count_F(spec) == 2
    assert list(admissible_maps(FCountSpec(1, 2, 2, 1, 1))) == [(0, 0)]


@pytest.mark.parametrize("n,r,k", [(2, 2, 1), (2, 3, 1), (3, 3, 2)])
def test_p_equals_q_forces_structure(n, r, k):
    for q in range(1, n + 1):
        for f in admissible_maps(FCountSpec(n, r, k, q, q)):
            assert set(f[:k]) == {0}
            assert set(range(q)) <= set(f[k:]) | {0}


def test_spec_bounds():
    with pytest.raises(ValueError):
        FCountSpec(1, 2, 1, 2, 1)
    with pytest.raises(ValueError):
        FCountSpec(1, 2, 3, 1, 1)
    with pytest.raises(SizeGuardError):
        count_F(FCountSpec(3, 12, 1, 1, 3), limit=1000)


def test_eta_examples():
    assert eta_via_theorem(1, 2, 1, 1) == 2
    assert eta_via_theorem(1, 2, 2, 1) == 1
    assert eta_via_theorem(1, 1, 1, 1) == 1


@pytest.mark.parametrize("n,r", GRID + [(3, 2)])
def test_eta_matches_classification(n, r):
    F = build_free(n, r)
    for k in range(1, r + 1):
        gs = gstar(F, canonical_subset(k))
        for p in range(1, n + 1):
            assert eta_via_theorem(n, r, k, p) == gs.eta[p]


@pytest.mark.parametrize("n,r", GRID + [(3, 2), (1, 3), (2, 3)])
def test_beta_matches_enumeration(n, r):
    for k in range(1, r):
        for p in range(1, n + 1):
            # beta is only asserted where p <= m_k; outside it the map count is 0 too
            assert beta(k, p, n=n, r=r) == eta_via_theorem(n, r, k, p), (n, r, k, p)


def test_closed_form_cases():
    assert eta_closed_form(1, 2, 1, 1, 1).value == 2
    cf = eta_closed_form(1, 2, 2, 1, 1)
    assert (cf.literal, cf.value, cf.corrected) == (3, 1, True)
    assert eta_via_theorem(1, 2, 2, 1) == cf.value
    assert eta_closed_form(2, 2, 1, 2, 1).value == 0  # p > m_k
    assert eta_closed_form(2, 2, 2, 2, 1).value == 0


@pytest.mark.parametrize("n,r", GRID + [(3, 2), (1, 3), (2, 3)])
def test_corrected_closed_form_matches_enumeration(n, r):
    for k in range(1, r + 1):
        m_k = max([p for p in range(1, n + 1) if eta_via_theorem(n, r, k, p)] or [0])
        for p in range(1, n + 1):
            assert eta_closed_form(n, r, k, p, m_k).value == eta_via_theorem(n, r, k, p)


def test_bound_examples():
    assert upper_bound(1, 2, {(1, 1): 2, (2, 1): 1}) == 6
    assert upper_bound(1, 1, {(1, 1): 1}) == 2
    assert alternating_bound(1, 2, {(1, 1): 2, (2, 1): 3}) == 0


FROZEN_REPORTS = {
    # (n, r): (exact, bound with enumerated eta, bound with printed eta)
    (1, 1): (2, 2, 2),
    (1, 2): (6, 6, 0),
    (2, 1): (2, 2, 2),
    (2, 2): (16, 40, 40),
}


@pytest.mark.parametrize("nr", sorted(FROZEN_REPORTS))
def test_count_reports(nr):
    rep = count_report(*nr)
    assert (rep.cardinality_exact, rep.upper_bound, rep.upper_bound_literal) == FROZEN_REPORTS[nr]
    assert rep.bound_holds
    for row in rep.rows:
        assert row.alpha <= row.eta_oracle == row.eta_ds == row.eta_formula


def test_report_rows_example_two():
    rep = count_report(1, 2)
    a, b = rep.row(1, 1), rep.row(2, 1)
    assert (a.alpha, a.eta_oracle, a.flag) == (2, 2, "")
    assert (b.alpha, b.eta_oracle, b.eta_literal) == (1, 1, 3)
    assert "literal-differs" in b.flag
    assert rep.notes


def test_report_serializations_are_stable():
    rep = count_report(1, 2)
    assert rep.to_json() == count_report(1, 2).to_json()
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,r,k,p,m_k,alpha,eta_oracle,eta_ds,eta_formula,eta_literal,flag"
    assert lines[2].endswith("literal-differs")
    text = rep.to_text()
    assert "bound=6 exact=6 holds=yes" in text
    assert len({len(x) for x in text.splitlines()[1:4] if x.strip()}) <= 2


def test_discrepancy_report():
    limit, coeff = discrepancy_report()
    assert limit.witness == (1, 2, 2, 1)
    assert (limit.printed, limit.alternative, limit.enumeration) == (3, 1, 1)
    assert coeff.witness == (2, 2, 1, 1)
    assert (coeff.printed, coeff.alternative, coeff.enumeration) == (3, 4, 3)
    assert "n=1 r=2 k=2" in coeff.line()


def test_variant_coefficient_agrees_on_example_two():
    assert beta_coefficient_variant(1, 1, n=1, r=2) == beta(1, 1, n=1, r=2) == 2
