"""Configuration settings for the ASVRG-ADMM library and benchmark harness.

This module manages numerical tolerances and library-wide constants using Pydantic.
It ensures type safety and provides default values for every tunable threshold.
Benchmark runs are configured separately by a TOML file (see `src.bench.config`);
nothing here is read from the environment, so a run manifest fully describes a run.
"""

from enum import Enum
from typing import Tuple

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class LossKind(str, Enum):
    """Supported per-sample loss components f_i."""
    LOGISTIC = "logistic"
    SQUARED = "squared"


class SolverKind(str, Enum):
    """Supported solvers (the accelerated method plus its baselines)."""
    ASVRG_ADMM = "asvrg_admm"
    SVRG_ADMM = "svrg_admm"
    SADMM = "sadmm"
    ADMM = "admm"


class OutputWeighting(str, Enum):
    """How the final ASVRG-ADMM output mixes the aggregate and snapshot iterates."""
    # weights 1/(1+a3 m) and a3 m/(1+a3 m)
    ALGORITHM = "algorithm"
    # weights a1/(a1+a3 m) and a3 m/(a1+a3 m)
    APPENDIX = "appendix"


class LbarRule(str, Enum):
    """Smoothness term lbar in the ASVRG-ADMM proximal weight eta_s = (lbar + chi beta1 ||A||^2) alpha_2."""
    # L_Q / alpha_{3,1} + L_f, one value for the whole run
    GLOBAL = "global"
    # L_Q / alpha_{3,s} + L_f, recomputed every outer iteration
    PER_OUTER = "per_outer"


class Settings(BaseSettings):
    """Global numerical settings with safe defaults."""

    # --- Logging ---
    log_level: str = "INFO"

    # --- Linear algebra ---
    spectral_tol: float = 1e-6
    spectral_max_iters: int = 10000
    solve_residual_tol: float = 1e-8
    # Above this dimension the exact x-update is refused; use chi=1.
    dense_factor_max_dim: int = 4096

    # --- Solvers ---
    divergence_factor: float = 1e3

    # --- Verification ---
    check_slack: float = 1e-8
    check_floor: float = 1e-12

    # --- Benchmark defaults (the experiments leave both unspecified) ---
    default_graph_threshold: float = 0.5
    default_nu: float = 1e-4

    model_config = SettingsConfigDict(extra="ignore")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        """Restrict sources to explicit constructor arguments.

        Environment variables and `.env` files are deliberately ignored so that
        every value influencing a run is recorded in its config or manifest.
        """
        return (init_settings,)


# Singleton instance for import across the package
settings = Settings()
