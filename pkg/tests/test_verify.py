import pytest

from railyard.config import load_config
from railyard.errors import VerificationError
from railyard.graph import build
from railyard.verify import (
    Check,
    VerifyReport,
    check_frozen,
    check_heights,
    check_partition_function,
    check_piecewise,
    verify,
)


def test_partition_function_check(four_column):
    check = check_partition_function(four_column)
    assert check.passed
    assert check.value == pytest.approx(1.12 * 1.10 / (0.85 * 0.92))


def test_partition_function_check_with_boundary():
    spec = build(1, 3, "LLL", "+--", (0.3, 0.4, 0.2))
    assert check_partition_function(spec, (1,), cap=20).passed


def test_heights_check(four_column):
    assert check_heights(four_column, seed=4, cap=30).passed


def test_piecewise_checks(four_slot, four_slot_boundary):
    checks = {c.name: c for c in check_piecewise(four_slot, four_slot_boundary, kappas=20)}
    for name in ("band_mass_1", "band_mass_2", "component_rank_1", "component_rank_2"):
        assert checks[name].passed, name
    assert checks["band_mass_1"].value == pytest.approx(1.0)
    assert checks["component_bounded_1"].passed and checks["component_bounded_2"].passed


def test_finite_config_without_sampler(configs_dir):
    config = load_config(configs_dir / "four_column.json").with_overrides(cap=30)
    report = verify(config, sampler=False)
    assert report.passed
    assert {c.name for c in report.checks} >= {"partition_function", "heights", "commutation_LL"}


def test_report_failures():
    report = VerifyReport([Check("a", True, 0.0), Check("b", False, 1.0)])
    assert not report.passed
    assert [c.name for c in report.failures] == ["b"]
    assert report.to_dict()["passed"] is False
    with pytest.raises(VerificationError):
        report.raise_for_failures()


def test_frozen_tangency_matches_trace(single_segment):
    checks = {c.name: c for c in check_frozen(single_segment, samples=50)}
    assert checks["tangency"].passed, checks["tangency"].detail
    assert checks["tangency"].value == 3.0
    assert checks["winding"].passed


def test_frozen_tangency_mismatch_fails(single_segment, monkeypatch):
    monkeypatch.setattr("railyard.verify.tangency_report", lambda model: (1, 1, 2))
    checks = {c.name: c for c in check_frozen(single_segment, samples=10)}
    assert not checks["tangency"].passed
    assert "traced 2, 1" in checks["tangency"].detail
