"""Unit tests for the Configuration module.

This module verifies that the numerical settings (Pydantic models) load with
their defaults, ignore the environment, and that Enum validations work as expected.
"""

import pytest
from src.config import LossKind, OutputWeighting, Settings, SolverKind


@pytest.mark.unit
class TestConfig:
    """Tests for the Settings class and configuration logic."""

    def test_default_values(self):
        """
        Verify that settings load with the documented defaults.

        These thresholds drive every tolerance in the library, so a silent
        change here would change solver and check behavior everywhere.
        """
        settings = Settings()

        assert settings.log_level == "INFO"
        assert settings.spectral_tol == 1e-6
        assert settings.spectral_max_iters == 10000
        assert settings.solve_residual_tol == 1e-8
        assert settings.divergence_factor == 1e3
        assert settings.check_slack == 1e-8
        assert settings.check_floor == 1e-12
        assert settings.default_graph_threshold == 0.5
        assert settings.default_nu == 1e-4

    def test_environment_is_ignored(self):
        """
        Verify that environment variables cannot change a setting.

        Every value influencing a run must be recorded in its config or
        manifest, so the environment is deliberately not a settings source.
        """
        with pytest.MonkeyPatch.context() as m:
            m.setenv("LOG_LEVEL", "DEBUG")
            m.setenv("DIVERGENCE_FACTOR", "5")
            settings = Settings()

        assert settings.log_level == "INFO"
        assert settings.divergence_factor == 1e3

    def test_explicit_values_override_defaults(self):
        """Verify that constructor arguments are honored."""
        settings = Settings(check_slack=1e-6, log_level="DEBUG")

        assert settings.check_slack == 1e-6
        assert settings.log_level == "DEBUG"

    def test_enum_handling(self):
        """
        Verify that string inputs are correctly mapped to the Enums.

        Run configs carry plain strings such as "asvrg_admm"; they must map
        onto the members used throughout the code.
        """
        assert LossKind("logistic") == LossKind.LOGISTIC
        assert SolverKind("asvrg_admm") == SolverKind.ASVRG_ADMM
        assert SolverKind("sadmm").value == "sadmm"
        assert OutputWeighting("appendix") == OutputWeighting.APPENDIX

        with pytest.raises(ValueError):
            SolverKind("sag_admm")
