import pytest

from fixmahonian import verifier as vf
from fixmahonian.verifier import (
    BudgetExceeded, Distribution, StatProfile, VerificationReport, binding_ok,
    check_derangement_counts, check_generating_function, check_pair_equidistribution, distribution,
    format_records, format_table, mutation_probe, partial_distribution, run_suites,
)


def by_claim(reports):
    return {r.claim: r for r in reports}


def test_profile_rejects_unknown_stat():
    with pytest.raises(ValueError):
        StatProfile.of("fix,bogus")


@pytest.mark.parametrize("names", ["fix,maj", "FIX,maf", "pix,IDES", "Der,maz"])
def test_split_distribution_adds_up(names):
    profile = StatProfile.of(names)
    whole = partial_distribution(6, profile, range(1, 7))
    parts = [partial_distribution(6, profile, [k]) for k in range(1, 7)]
    total = Distribution()
    for part in parts:
        total = total + part
    assert total == whole
    assert whole.domain_size == 720


def test_parallel_distribution_is_deterministic():
    profile = StatProfile.of("fix,maj")
    serial = distribution(6, profile)
    assert distribution(6, profile, workers=2) == serial
    assert distribution(6, profile, workers=3) == serial


def test_budget_guard(monkeypatch):
    monkeypatch.setenv(vf.BUDGET_ENV, "5")
    assert vf.enumeration_limit() == 5
    with pytest.raises(BudgetExceeded):
        distribution(6, StatProfile.of("fix"))
    assert distribution(6, StatProfile.of("fix"), allow_large=True).domain_size == 720
    monkeypatch.delenv(vf.BUDGET_ENV)
    assert vf.enumeration_limit() == vf.DEFAULT_LIMIT


def test_small_suites_pass():
    reports = run_suites("all", 5)
    assert binding_ok(reports)
    claims = by_claim(reports)
    assert claims["gf-identity"].status == "pass"
    assert claims["dw:F3-commute"].binding is False


def test_mutation_breaks_core_suites():
    reports = by_claim(mutation_probe(4))
    for claim in ("gf-identity", "pairs:fix-maj", "triples:Der"):
        assert reports[claim].status == "fail", claim
    assert reports["pairs:fix-maj"].witness is not None


def test_mutation_does_not_leak():
    mutation_probe(3)
    assert check_generating_function(4).status == "pass"


def test_counts_report():
    report = check_derangement_counts(9)
    assert report.status == "pass"
    assert vf.DERANGEMENT_NUMBERS == [1, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496]


def test_formatting_is_deterministic():
    first = format_records(check_pair_equidistribution(4))
    second = format_records(check_pair_equidistribution(4))
    assert first == second
    assert "seconds=" not in first
    for line in first.splitlines():
        assert line.startswith("claim=")
        assert dict(field.split("=", 1) for field in line.split())["status"] == "pass"


def test_binding_ok_ignores_informative_failures():
    reports = [
        VerificationReport("a", "x", 0, 1, "pass"),
        VerificationReport("b", "y", 0, 1, "fail", binding=False),
    ]
    assert binding_ok(reports)
    reports.append(VerificationReport("c", "z", 0, 1, "fail", witness={"n": 2}))
    assert not binding_ok(reports)
    table = format_table(reports)
    assert "FAIL" in table and "c counterexample" in table
