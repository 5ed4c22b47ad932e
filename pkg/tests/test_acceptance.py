"""
Tests for the Acceptance Engine

Success Criteria: a default run passes all twelve criteria; a corrupted E8
Gram matrix fails only the E8 enumeration line.
"""

import pytest

from obstruction_machine.acceptance.engine import AcceptanceEngine, k3_root_pool, run_acceptance
from obstruction_machine.cli import execute
from obstruction_machine.core.config import AcceptanceConfig
from obstruction_machine.core.errors import NotARoot
from obstruction_machine.core.lattice import builtin_lattice


@pytest.fixture(scope="module")
def small_config():
    return AcceptanceConfig(reflection_words=20, monomial_samples=20, max_arrangement_size=4)


@pytest.fixture(scope="module")
def report():
    return run_acceptance()


class TestDefaultRun:
    """Test the full suite with the shipped configuration."""

    def test_all_pass(self, report):
        """Test every criterion passes."""
        failed = [(r.number, r.name, r.error_message) for r in report.results if not r.passed]
        assert failed == []
        assert report.total == 12
        assert report.all_passed

    def test_numbering(self, report):
        """Test criteria are numbered 1..12 in order."""
        assert [r.number for r in report.results] == list(range(1, 13))

    def test_report_dict(self, report):
        """Test the summary counts."""
        data = report.to_dict()
        assert (data["passed"], data["failed"], data["all_passed"]) == (12, 0, True)

    def test_without_determinism(self, small_config):
        """Test the inner suite run skips only the determinism row."""
        report = AcceptanceEngine(config=small_config).run(include_determinism=False)
        assert [r.number for r in report.results] == list(range(1, 12))
        assert all(r.name != "Determinism" for r in report.results)

    def test_determinism_covers_the_suite(self, small_config):
        """Test the determinism row compares two rendered suite runs."""
        engine = AcceptanceEngine(config=small_config)
        assert engine.render_suite_json() == engine.render_suite_json()
        passed, detail = engine.check_determinism()
        assert passed
        assert "the suite rendered twice" in detail


class TestFaultInjection:
    """Test a corrupted E8 Gram matrix is localised to one criterion."""

    def test_scaled_identity(self, small_config):
        """Test 2*I_8 has 16 norm-2 vectors and fails only criterion 2."""
        gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
        report = AcceptanceEngine(config=small_config, e8_gram=gram).run()
        failed = [r.number for r in report.results if not r.passed]
        assert failed == [2]
        assert report.results[1].detail.startswith("16 vectors")

    def test_cli_exit_code(self, capsys):
        """Test reproduce exits 1 with the corrupted matrix and prints the table."""
        gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
        code, text = execute(["reproduce", "--e8-gram", str(gram)])
        assert code == 1
        assert "11/12 criteria passed" in text


class TestRunCheck:
    """Test failures are recorded, never raised."""

    def test_domain_error_recorded(self, small_config):
        """Test a domain error becomes a failed row with its name."""
        def boom():
            raise NotARoot("norm 0")

        result = AcceptanceEngine(config=small_config).run_check(99, "boom", boom)
        assert not result.passed
        assert result.error_message == "NotARoot: norm 0"

    def test_unexpected_error_recorded(self, small_config):
        """Test any other exception also becomes a failed row."""
        def boom():
            raise ZeroDivisionError("x")

        result = AcceptanceEngine(config=small_config).run_check(1, "boom", boom)
        assert not result.passed
        assert result.error_message.startswith("ZeroDivisionError")

    def test_false_outcome(self, small_config):
        """Test a (False, detail) outcome is a failure without an error."""
        result = AcceptanceEngine(config=small_config).run_check(1, "no", lambda: (False, "nope"))
        assert (result.passed, result.detail, result.error_message) == (False, "nope", None)


class TestRootPool:
    """Test the reflection pool for random words."""

    def test_size(self):
        """Test 6 hyperbolic roots plus 240 roots in each -E8 block."""
        pool = k3_root_pool()
        assert len(pool) == 6 + 480
        assert len(set(pool)) == len(pool)

    def test_all_roots(self):
        """Test every pool vector has K3 norm -2."""
        k3 = builtin_lattice("K3")
        assert all(k3.norm(v) == -2 for v in k3_root_pool())
