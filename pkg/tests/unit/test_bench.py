"""Unit tests for the Bench layer.

Covers the TOML run configuration, trace CSV files and their aggregate, the
plot and manifest writers, and the job wrapper that turns solver failures into
manifest statuses.

Conventions:
    - Mocks: unittest.mock.patch
    - Files: pytest's tmp_path
"""

import io
from unittest.mock import MagicMock, patch

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from src.bench import (
    Manifest,
    RunConfig,
    RunEntry,
    SolverSpec,
    aggregate_traces,
    inspect_dataset,
    load_manifest,
    load_run_config,
    plot_objective,
    read_trace,
    trace_frame,
    write_csv_atomic,
    write_manifest,
)
from src.bench.runner import Job, make_jobs, run_job
from src.bench.traces import TRACE_COLUMNS, trace_filename
from src.config import LbarRule, LossKind, SolverKind
from src.exceptions import DivergenceError, UnsupportedProblemError
from src.ingestion import desk_problem
from src.solvers import SolverConfig, TraceRecord

MINIMAL_TOML = """
loss = "squared"
seeds = [0, 1]
max_passes = 4

[synthetic]
n = 30
d = 5

[[solvers]]
kind = "asvrg_admm"

[[solvers]]
kind = "svrg_admm"
beta = 0.5
"""


def record(passes, objective, seed=0, solver="s"):
    return TraceRecord(solver=solver, seed=seed, passes=passes, objective=objective, violation=0.0, seconds=1.5)


@pytest.mark.unit
class TestRunConfig:
    """Tests for RunConfig validation and TOML loading."""

    def test_load_minimal_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(MINIMAL_TOML)

        config = load_run_config(str(path))

        assert config.loss == LossKind.SQUARED
        assert config.synthetic.n == 30
        assert [spec.name for spec in config.solvers] == ["asvrg_admm", "svrg_admm"]
        assert config.solvers[1].beta == 0.5
        assert config.dataset_name == "synthetic"
        assert config.record_wall_time is False

    def test_defaults(self):
        config = RunConfig(synthetic={}, solvers=[{"kind": "sadmm"}])

        assert config.seeds == list(range(10))
        assert config.max_passes == 20.0
        assert config.nu == 1e-4
        assert config.threshold == 0.5

    def test_relative_dataset_resolved_against_config(self, tmp_path):
        path = tmp_path / "configs" / "a9a.toml"
        path.parent.mkdir()
        path.write_text('dataset = "../data/a9a"\n[[solvers]]\nkind = "admm"\n')

        config = load_run_config(str(path))

        assert config.dataset == str(tmp_path / "data" / "a9a")
        assert config.dataset_name == "a9a"

    @pytest.mark.parametrize(
        "raw",
        [
            {"solvers": [{"kind": "admm"}]},
            {"dataset": "x", "synthetic": {}, "solvers": [{"kind": "admm"}]},
            {"synthetic": {}, "solvers": []},
            {"synthetic": {}, "solvers": [{"kind": "admm"}, {"kind": "admm"}]},
            {"synthetic": {}, "solvers": [{"kind": "admm"}], "seeds": [1, 1]},
            {"synthetic": {}, "solvers": [{"kind": "admm"}], "colour": "red"},
            {"synthetic": {}, "solvers": [{"kind": "admm", "chi": 2}]},
            {"synthetic": {}, "solvers": [{"kind": "sag_admm"}]},
        ],
    )
    def test_invalid_configs(self, raw):
        """
        Verify that malformed configurations are validation errors.

        Covers missing or doubled data sources, empty and duplicated solver
        lists, repeated seeds, unknown keys and out-of-range parameters.
        """
        with pytest.raises(ValidationError):
            RunConfig.model_validate(raw)

    def test_toml_syntax_error(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("loss = \n")

        with pytest.raises(ValueError):
            load_run_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_run_config(str(tmp_path / "nope.toml"))

    def test_hash_ignores_output_location(self):
        base = RunConfig(synthetic={}, solvers=[{"kind": "admm"}])
        moved = RunConfig(synthetic={}, solvers=[{"kind": "admm"}], output_dir="elsewhere", workers=3)
        changed = RunConfig(synthetic={}, solvers=[{"kind": "admm"}], nu=0.5)

        assert base.config_hash() == moved.config_hash()
        assert base.config_hash() != changed.config_hash()

    def test_solver_budget_falls_back_to_run_level(self):
        own = SolverSpec(kind=SolverKind.SADMM, max_passes=3.0)
        inherited = SolverSpec(kind=SolverKind.SADMM, label="sadmm_default")

        assert own.solver_config(10.0).max_passes == 3.0
        assert inherited.solver_config(10.0).max_passes == 10.0
        assert isinstance(inherited.solver_config(10.0), SolverConfig)

    def test_budget_fallback_survives_json_round_trip(self):
        config = RunConfig(synthetic={}, solvers=[{"kind": "admm"}], max_passes=7.0)

        restored = RunConfig.model_validate(config.model_dump(mode="json"))

        assert restored.solvers[0].solver_config(restored.max_passes).max_passes == 7.0
        assert restored.config_hash() == config.config_hash()

    def test_jobs_are_solver_major(self):
        config = RunConfig(synthetic={}, solvers=[{"kind": "admm"}, {"kind": "sadmm"}], seeds=[4, 2])

        jobs = make_jobs(config)

        assert [(job.label, job.seed) for job in jobs] == [("admm", 4), ("admm", 2), ("sadmm", 4), ("sadmm", 2)]

    def test_lbar_rule_reaches_solver_config(self):
        config = RunConfig(synthetic={}, solvers=[{"kind": "asvrg_admm", "lbar_rule": "per_outer"}])

        restored = RunConfig.model_validate(config.model_dump(mode="json"))

        assert restored.solvers[0].solver_config(20.0).lbar_rule == LbarRule.PER_OUTER
        assert SolverSpec(kind=SolverKind.ASVRG_ADMM).lbar_rule == LbarRule.GLOBAL


@pytest.mark.unit
class TestTraces:
    """Tests for trace frames, CSV files and aggregation."""

    def test_filename(self):
        assert trace_filename("asvrg_admm", 3) == "trace_asvrg_admm_seed3.csv"

    def test_frame_schema_and_wall_time(self):
        records = [record(0.0, 2.0), record(1.0, 1.0)]

        frame = trace_frame(records, record_wall_time=False)
        timed = trace_frame(records, record_wall_time=True)

        assert list(frame.columns) == TRACE_COLUMNS
        assert (frame["seconds"] == 0.0).all()
        assert (timed["seconds"] == 1.5).all()

    def test_csv_round_trips_exactly(self, tmp_path):
        """
        Verify that 17 significant digits reproduce every double bit for bit.
        """
        values = [0.1, 1.0 / 3.0, np.nextafter(1.0, 2.0), 123456.789e-300]
        frame = trace_frame([record(float(i), v) for i, v in enumerate(values)], record_wall_time=False)
        path = tmp_path / "trace.csv"

        write_csv_atomic(frame, str(path))

        restored = read_trace(str(path))
        assert restored["objective"].tolist() == values
        assert path.read_bytes().count(b"\r") == 0
        assert [p.name for p in tmp_path.iterdir()] == ["trace.csv"]

    def test_aggregate_forward_fills_on_union_grid(self):
        first = trace_frame([record(0.0, 4.0), record(1.0, 2.0), record(2.0, 1.0)], record_wall_time=False)
        second = trace_frame([record(0.0, 6.0, seed=1), record(1.5, 3.0, seed=1), record(2.0, 2.0, seed=1)],
                             record_wall_time=False)

        aggregate = aggregate_traces({"s": [first, second], "empty": []})

        assert aggregate["passes"].tolist() == [0.0, 1.0, 1.5, 2.0]
        assert aggregate["objective"].tolist() == [5.0, 4.0, 2.5, 1.5]
        assert set(aggregate["seeds"]) == {2}
        assert set(aggregate["solver"]) == {"s"}

    def test_aggregate_of_nothing(self):
        assert aggregate_traces({}).empty


@pytest.mark.unit
class TestArtifacts:
    """Tests for the plot and manifest writers."""

    def test_plot_is_reproducible(self, tmp_path):
        frame = trace_frame([record(0.0, 4.0), record(1.0, 2.0), record(2.0, 1.0)], record_wall_time=False)
        aggregate = aggregate_traces({"asvrg_admm": [frame], "custom": [frame]})

        plot_objective(aggregate, str(tmp_path / "a.svg"), title="desk", kinds={"custom": "sadmm"})
        plot_objective(aggregate, str(tmp_path / "b.svg"), title="desk", kinds={"custom": "sadmm"})

        first = (tmp_path / "a.svg").read_bytes()
        assert first.startswith(b"<?xml")
        assert first == (tmp_path / "b.svg").read_bytes()

    def test_manifest_round_trip(self, tmp_path):
        manifest = Manifest(
            config={"loss": "squared"},
            config_hash="abc",
            seeds=[0, 1],
            runs=[
                RunEntry(solver="a", seed=0, status="ok", seconds=0.1, trace_file="trace_a_seed0.csv"),
                RunEntry(solver="a", seed=1, status="diverged", seconds=0.2, message="boom"),
            ],
        )
        path = tmp_path / "out" / "manifest.json"

        write_manifest(manifest, str(path))
        restored = load_manifest(str(path))

        assert restored == manifest
        assert [run.seed for run in restored.failures] == [1]

    def test_manifest_errors(self, tmp_path):
        bad = tmp_path / "manifest.json"
        bad.write_text("{not json")

        with pytest.raises(ValueError):
            load_manifest(str(bad))
        with pytest.raises(FileNotFoundError):
            load_manifest(str(tmp_path / "missing.json"))


@pytest.mark.unit
class TestRunJob:
    """Tests for run_job status translation."""

    def _job(self):
        return Job(label="asvrg_admm", kind=SolverKind.ASVRG_ADMM, config=SolverConfig(max_passes=2), seed=1)

    def test_success_produces_frame(self):
        p = desk_problem(n=20, d=4, seed=0)

        result = run_job(p, self._job(), record_wall_time=False)

        assert result.status == "ok"
        assert result.frame["seed"].unique().tolist() == [1]
        assert result.frame["passes"].iloc[0] == 0.0
        assert np.isfinite(result.lasso_objective)

    @patch("src.bench.runner.get_solver")
    def test_divergence_is_recorded(self, mock_get_solver):
        mock_solver = MagicMock()
        mock_solver.run.side_effect = DivergenceError("objective left the admissible range", 2, 7)
        mock_get_solver.return_value = mock_solver

        result = run_job(MagicMock(), self._job(), record_wall_time=False)

        assert result.status == "diverged"
        assert result.frame is None
        assert "s=2" in result.message and "t=7" in result.message

    @patch("src.bench.runner.get_solver")
    def test_other_library_errors_fail_the_job(self, mock_get_solver):
        mock_get_solver.return_value.run.side_effect = UnsupportedProblemError("configure chi=1")

        result = run_job(MagicMock(), self._job(), record_wall_time=False)

        assert result.status == "failed"
        assert result.message == "configure chi=1"


@pytest.mark.unit
class TestInspect:
    def test_summary_of_small_file(self, tmp_path):
        path = tmp_path / "tiny.libsvm"
        path.write_bytes(b"+1 1:3 2:4\n-1 1:1\n")
        stream = io.StringIO()

        summary = inspect_dataset(str(path), stream=stream)

        X = np.array([[3.0, 4.0], [1.0, 0.0]])
        expected = float(np.linalg.eigvalsh(X.T @ X / 2).max())
        assert (summary["n"], summary["d"], summary["nnz"]) == (2, 2, 3)
        assert summary["lf_squared"] == pytest.approx(expected, rel=1e-5)
        assert summary["lf_logistic"] == pytest.approx(expected / 4, rel=1e-5)
        lines = stream.getvalue().splitlines()
        assert lines[1:4] == ["n: 2", "d: 2", "nnz: 3"]

    def test_frame_dtypes(self):
        frame = trace_frame([record(0.0, 1.0)])

        assert frame.dtypes["seed"] == np.int64
        assert pd.api.types.is_float_dtype(frame.dtypes["passes"])
