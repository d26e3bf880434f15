import pytest

from app.services.errors import InvalidParameterError
from app.services.report_svc import format_table
from app.services.verify_svc import (
    SUITES,
    run_suite,
    verify_classical,
    verify_corollary_fo,
    verify_prop1,
    verify_rela,
    verify_rr1,
    verify_s2,
    verify_s3,
    verify_sem1,
    verify_slater,
    verify_theomain,
    verify_theorem_main,
)

N = 40
ENUM_CAP = 20
BIJECTION_CAP = 10


def test_classical_suite_passes():
    reports = verify_classical(N, ENUM_CAP)
    assert all(report.passed for report in reports)
    assert {report.identity_id for report in reports} == {"pentagonal", "gauss", "jacobi", "q1", "distinct-product"}


@pytest.mark.parametrize(
    'report',
    (
        lambda: verify_theorem_main(N, ENUM_CAP),
        lambda: verify_theomain(N, 2, 3, ENUM_CAP, BIJECTION_CAP),
        lambda: verify_theomain(N, 4, 6, ENUM_CAP, BIJECTION_CAP),
        lambda: verify_prop1(N, 3, 2, ENUM_CAP, BIJECTION_CAP),
        lambda: verify_rr1(N, 2, 3, ENUM_CAP),
        lambda: verify_corollary_fo(N, 2, ENUM_CAP),
        lambda: verify_rela(N, 24),
        lambda: verify_sem1(N, 2, 0, 14, BIJECTION_CAP, 14),
        lambda: verify_sem1(N, 3, 2, 14, BIJECTION_CAP, 14),
        lambda: verify_s2(N, 2, ENUM_CAP),
        lambda: verify_s3(N, 4, ENUM_CAP),
        lambda: verify_slater(N, ENUM_CAP),
    ),
)
def test_suites_pass(report):
    result = report()
    assert result.passed, format_table([result])


def test_run_suite_single_point():
    reports = run_suite("theomain", N=30, enum_cap=ENUM_CAP, bijection_cap=8, params={"p": 2, "k": 4})
    assert len(reports) == 1
    assert reports[0].params == {"N": 30, "p": 2, "k": 4}
    assert reports[0].passed


def test_run_suite_ignores_empty_params():
    reports = run_suite("s2", N=20, enum_cap=ENUM_CAP, params={"alpha": 2, "mu": None})
    assert [report.params["alpha"] for report in reports] == [2]


def test_run_suite_rejects_unknown_names():
    assert "slater" in SUITES
    with pytest.raises(InvalidParameterError, match="Suite desconocido"):
        run_suite("nope", N=10)


def test_alpha_must_be_even():
    with pytest.raises(InvalidParameterError):
        verify_s2(10, 3)


def test_run_suite_rejects_partial_grid_point():
    with pytest.raises(InvalidParameterError, match="faltan: \\['k'\\]"):
        run_suite("theomain", N=10, params={"p": 3})
    with pytest.raises(InvalidParameterError, match="gamma"):
        run_suite("sem1", N=10, params={"mu": 2, "gamma": None})


def test_sem1_checks_inverse_after_forward_map(monkeypatch):
    monkeypatch.setattr("app.services.verify_svc.sylvester_general_inverse", lambda beta, profile: beta)
    report = verify_sem1(20, 2, 1, enum_cap=12, bijection_cap=6, roundtrip_cap=12)
    assert not report.passed
    assert report.first_failure.check == "sylvester-inverse-round-trip"
