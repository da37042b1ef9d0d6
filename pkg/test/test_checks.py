"""
Unit Tests for the Verification Service

Every registered check is run on its smallest indices; the runner is tested
for failure rows, error propagation and ordering under a process pool.
"""
import pytest

from spk_app.errors import CheckFailedError, InvariantError, UnknownNameError
from spk_app.model.codec import parse
from spk_app.model.records import CheckStatus
from spk_app.service import checks as checks_module
from spk_app.service.checks import CHECKS, VerifyService, evaluation_points, expect, expect_equal, n_range, run_task

SMALL_TASKS = [
    (check_id, n)
    for check_id, spec in CHECKS.items()
    for n in range(spec.n_min, min(spec.n_default, 4) + 1)
]


def test_registry_contents():
    assert list(CHECKS)[0] == "gamma-nonneg"
    assert list(CHECKS)[-1] == "zeros-structure"
    assert len(CHECKS) == 28
    assert CHECKS["thm-bn-expansion"].n_min == 2
    assert CHECKS["thm34-f17"].n_default == 5


@pytest.mark.parametrize("check_id, n", SMALL_TASKS)
def test_check_passes_at_small_n(catalog, check_id, n):
    row = run_task(catalog, check_id, n)
    assert row.status is CheckStatus.PASS, row.to_dict()


def test_expect_equal_reports_first_difference():
    with pytest.raises(CheckFailedError) as exc_info:
        expect_equal(3, "left", parse("1 + 2*x + y^2"), "right", parse("1 + 3*x + y^2 + x^3"))
    counterexample = exc_info.value.counterexample
    assert counterexample == {"n": 3, "monomial": "x", "left": 2, "right": 3}
    assert str(exc_info.value) == "left != right at n=3"


def test_expect_passes_through_details():
    expect(2, True, "never raised")
    with pytest.raises(CheckFailedError) as exc_info:
        expect(2, False, "broken", value=7)
    assert exc_info.value.counterexample == {"n": 2, "value": 7}


def test_n_range():
    spec = CHECKS["thm-bn-expansion"]
    assert n_range(spec) == range(2, 8)
    assert n_range(spec, deep=True) == range(2, 9)
    assert n_range(spec, n_max=4) == range(2, 5)
    assert n_range(spec, n_max=4, deep=True) == range(2, 5)
    assert len(n_range(spec, n_max=1)) == 0


def test_evaluation_points_are_deterministic():
    points = evaluation_points(5)
    assert points == evaluation_points(5)
    assert len(points) == 5
    assert all(value != 0 for point in points for value in point.values())


def test_failing_check_becomes_a_row(catalog, mocker):
    def broken(_catalog, n):
        raise CheckFailedError("forced", {"n": n})

    mocker.patch.dict(CHECKS, {"table1": CHECKS["table1"]._replace(func=broken)})
    row = run_task(catalog, "table1", 2)

    assert row.status is CheckStatus.FAIL
    assert row.counterexample == {"n": 2}
    assert row.to_dict() == {"check_id": "table1", "n": 2, "status": "fail", "detail": "forced",
                             "counterexample": {"n": 2}}


def test_invariant_errors_propagate(catalog, mocker):
    def breaks_invariant(_catalog, _n):
        raise InvariantError("impossible")

    mocker.patch.dict(CHECKS, {"counts": CHECKS["counts"]._replace(func=breaks_invariant)})
    with pytest.raises(InvariantError):
        run_task(catalog, "counts", 1)


def test_resolve_keeps_registry_order():
    specs = VerifyService.resolve(["carlitz", "table1"])
    assert [spec.check_id for spec in specs] == ["table1", "carlitz"]
    with pytest.raises(UnknownNameError):
        VerifyService.resolve(["nope"])


def test_run_sequential_report(app):
    report = app.verifier.run(["counts", "carlitz"], n_max=3)
    assert [(row.check_id, row.n) for row in report.rows] == [
        ("counts", 1), ("counts", 2), ("counts", 3), ("carlitz", 1), ("carlitz", 2), ("carlitz", 3),
    ]
    assert report.passed
    assert "millis" not in report.to_dict()["rows"][0]
    assert "millis" in report.to_dict(with_timing=True)["rows"][0]


def test_parallel_run_matches_sequential(app):
    sequential = app.verifier.run(["table1", "gamma-nonneg", "xi-zeta-T"], n_max=4, jobs=1)
    parallel = app.verifier.run(["table1", "gamma-nonneg", "xi-zeta-T"], n_max=4, jobs=2)
    assert parallel.to_dict() == sequential.to_dict()


def test_run_logs_phase_boundaries(app, mocker):
    info = mocker.spy(checks_module.logger, "info")
    app.verifier.run(["counts"], n_max=1)
    messages = [call.args[0] for call in info.call_args_list]
    assert any(message.startswith("Running 1 check tasks") for message in messages)
    assert any(message.startswith("Finished 1 check tasks") for message in messages)


def test_run_check_single_id(app):
    report = app.verifier.run_check("cor-oneminusy", n_max=3)
    assert [(row.check_id, row.n) for row in report.rows] == [
        ("cor-oneminusy", 1), ("cor-oneminusy", 2), ("cor-oneminusy", 3),
    ]
    assert report.passed
    with pytest.raises(UnknownNameError):
        app.verifier.run_check("nope")
