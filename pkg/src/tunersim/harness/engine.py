"""Experiment execution engine.

A run streams the configured regressor samples through every configured
update law, logs one TraceRecord per iteration, attaches the analysis
reports and writes the artifacts to ``<out>/<name>/``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel, Field

from tunersim.analysis.excitation import PEReport, pe_epsilon, pe_sensitivity
from tunersim.analysis.lyapunov import (
    EnvelopeReport,
    MonotoneReport,
    check_envelope,
    check_monotone,
    lyapunov,
    parameter_error,
)
from tunersim.analysis.rates import RateReport, rate_bound_hb, rate_bound_na
from tunersim.core.errors import (
    DivergenceError,
    InvalidArgumentError,
    NotPersistentlyExcitingError,
)
from tunersim.core.models import (
    Algorithm,
    HyperParams,
    RegressorSample,
    TraceRecord,
    TunerState,
)
from tunersim.core.vectors import Vector
from tunersim.formats.export import read_trace, write_trace
from tunersim.harness.config import (
    ExperimentConfig,
    config_to_json,
    load_config,
    resolve_output_dir,
)
from tunersim.regress.sources import regressor_stream
from tunersim.tuners.hyperparams import HyperParamCheck, validate_hyperparams
from tunersim.tuners.loss import prediction_error
from tunersim.tuners.steps import STEP_FUNCTIONS

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
REPORT_FILE = "report.json"


class AlgorithmReport(BaseModel):
    """Summary and analysis of one algorithm's run."""

    label: str
    algorithm: Algorithm
    hyperparams: HyperParams
    check: HyperParamCheck = Field(..., description="Validator result in the configured mode")
    iterations: int
    v0: float | None = Field(None, description="Lyapunov value of the initial state")
    final_e_y: float
    final_param_err: float
    pe: PEReport | None = None
    pe_sensitivity: list[PEReport] = Field(default_factory=list)
    rate: RateReport | None = None
    envelope: EnvelopeReport | None = None
    monotone: MonotoneReport | None = None


class RunReport(BaseModel):
    """Everything report.json holds."""

    name: str
    horizon: int
    dim: int
    theta_star: list[float]
    algorithms: list[AlgorithmReport]

    def get(self, label: str) -> AlgorithmReport | None:
        """Report for a label."""
        for report in self.algorithms:
            if report.label == label:
                return report
        return None


@dataclass
class RunArtifact:
    """In-memory result of a run, optionally backed by a directory."""

    config: ExperimentConfig
    report: RunReport
    traces: dict[str, list[TraceRecord]] = field(default_factory=dict)
    directory: Path | None = None

    @property
    def labels(self) -> list[str]:
        """Run labels in config order."""
        return [hp.name for hp in self.config.algorithms]

    def v_trace(self, label: str) -> list[float] | None:
        """[V_0, V_1, ..., V_H] for HB/NA runs, None otherwise."""
        report = self.report.get(label)
        if report is None or report.v0 is None:
            return None
        values = [record.v for record in self.traces[label]]
        if any(v is None for v in values):
            return None
        return [report.v0, *(v for v in values if v is not None)]


@dataclass
class _AlgorithmRun:
    hp: HyperParams
    records: list[TraceRecord]
    v0: float | None


def _lyapunov_or_none(state: TunerState, theta_star: Vector, hp: HyperParams) -> float | None:
    gamma = hp.lyapunov_gamma
    if gamma is None or gamma <= 0.0:
        return None
    return lyapunov(state.theta, state.vartheta, theta_star, gamma)


def run_algorithm(
    hp: HyperParams,
    samples: list[RegressorSample],
    theta_star: Vector,
    init_theta: Vector,
) -> tuple[list[TraceRecord], float | None]:
    """Apply one update law to a sample stream.

    Returns the trace (one row per sample) and V_0.

    Raises:
        DivergenceError: an iterate became non-finite (labelled with ``hp.name``)
    """
    step = STEP_FUNCTIONS[hp.algorithm]
    state = TunerState.initial(init_theta)
    v0 = _lyapunov_or_none(state, theta_star, hp)
    records: list[TraceRecord] = []

    for sample in samples:
        try:
            state, _ = step(state, sample, hp)
        except DivergenceError as exc:
            logger.error("%s diverged at iteration %d", hp.name, sample.k)
            raise DivergenceError(sample.k, algorithm=hp.name, detail=exc.detail) from exc

        records.append(
            TraceRecord(
                k=sample.k,
                algorithm=hp.name,
                e_y=prediction_error(state.theta, sample),
                param_err=parameter_error(state.theta, theta_star),
                v=_lyapunov_or_none(state, theta_star, hp),
                theta=state.theta.tolist(),
                vartheta=state.vartheta.tolist() if hp.algorithm.has_vartheta else None,
            )
        )

    logger.debug("%s finished %d iterations", hp.name, len(records))
    return records, v0


def _rate_report(
    hp: HyperParams, pe: PEReport, config: ExperimentConfig
) -> RateReport | None:
    assert hp.beta is not None and hp.gamma is not None
    grid = config.analysis.grid_points
    try:
        if hp.algorithm == Algorithm.HB:
            return rate_bound_hb(pe, hp.beta, hp.gamma, grid_points=grid)
        return rate_bound_na(pe, hp.beta, hp.gamma, pe.delta_t, grid_points=grid)
    except (NotPersistentlyExcitingError, InvalidArgumentError) as exc:
        logger.warning("No rate bound for %s: %s", hp.name, exc)
        return None


def _analyse(
    run: _AlgorithmRun,
    config: ExperimentConfig,
    pe: PEReport | None,
    sweep: list[PEReport],
) -> AlgorithmReport:
    hp = run.hp
    last = run.records[-1]
    report = AlgorithmReport(
        label=hp.name,
        algorithm=hp.algorithm,
        hyperparams=hp,
        check=validate_hyperparams(hp, config.analysis.bound_mode),
        iterations=len(run.records),
        v0=run.v0,
        final_e_y=last.e_y,
        final_param_err=last.param_err,
        pe=pe,
        pe_sensitivity=sweep,
    )
    if not config.analysis.enabled or run.v0 is None:
        return report

    v_trace = [run.v0, *(r.v for r in run.records if r.v is not None)]
    report.monotone = check_monotone(v_trace, config.analysis.monotone_tolerance)
    if not report.monotone.holds:
        logger.warning(
            "%s: Lyapunov value increased at k=%s", hp.name, report.monotone.first_violation_k
        )

    if pe is not None:
        report.rate = _rate_report(hp, pe, config)
    if report.rate is not None and 0.0 < report.rate.mu < 1.0:
        report.envelope = check_envelope(
            v_trace, report.rate.mu, report.rate.delta_t, config.analysis.tolerance
        )
        if not report.envelope.holds:
            logger.warning(
                "%s: envelope violated at k=%s", hp.name, report.envelope.first_violation_k
            )
    return report


def _write(artifact: RunArtifact, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / CONFIG_FILE).write_text(config_to_json(artifact.config))
    for label in artifact.labels:
        for fmt in artifact.config.output.formats:
            write_trace(directory / f"trace_{label}.{fmt}", artifact.traces[label])
    (directory / REPORT_FILE).write_text(artifact.report.model_dump_json(indent=2) + "\n")
    logger.info("Wrote run %s to %s", artifact.config.name, directory)


def run_experiment(
    config: ExperimentConfig,
    out_dir: Path | str | None = None,
    write: bool = True,
    max_workers: int = 1,
) -> RunArtifact:
    """Run every configured algorithm on the configured sample stream.

    Args:
        config: validated experiment
        out_dir: run root; defaults to the config, then $TUNERSIM_OUTPUT_DIR, then ./runs
        write: write artifacts to ``<out_dir>/<config.name>/``
        max_workers: algorithms run in a thread pool of this size

    Raises:
        DivergenceError: a run diverged (labelled with the algorithm)
        InvalidSpecError, ParseError: the source could not produce samples
    """
    theta_star = config.resolved_theta_star
    samples = regressor_stream(config.source, theta_star, config.horizon)
    init_theta = config.initial_theta
    logger.info(
        "Running %s: %d algorithm(s), horizon %d",
        config.name,
        len(config.algorithms),
        config.horizon,
    )

    def execute(hp: HyperParams) -> _AlgorithmRun:
        records, v0 = run_algorithm(hp, samples, theta_star, init_theta)
        return _AlgorithmRun(hp=hp, records=records, v0=v0)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            runs = list(pool.map(execute, config.algorithms))
    else:
        runs = [execute(hp) for hp in config.algorithms]

    pe: PEReport | None = None
    sweep: list[PEReport] = []
    if config.analysis.enabled:
        pe = pe_epsilon(samples, config.analysis.delta_t)
        sweep = pe_sensitivity(samples, config.analysis.sensitivity)

    report = RunReport(
        name=config.name,
        horizon=config.horizon,
        dim=config.dim,
        theta_star=theta_star.tolist(),
        algorithms=[_analyse(run, config, pe, sweep) for run in runs],
    )
    artifact = RunArtifact(
        config=config,
        report=report,
        traces={run.hp.name: run.records for run in runs},
    )

    if write:
        directory = resolve_output_dir(config, out_dir) / config.name
        _write(artifact, directory)
        artifact.directory = directory
    return artifact


def load_run(directory: Path | str) -> RunArtifact:
    """Read a run directory written by :func:`run_experiment`.

    Raises:
        ConfigError: missing or invalid config.json
        ParseError: malformed trace file
    """
    directory = Path(directory)
    config = load_config(directory / CONFIG_FILE)
    report = RunReport.model_validate_json((directory / REPORT_FILE).read_text())

    traces: dict[str, list[TraceRecord]] = {}
    for hp in config.algorithms:
        for fmt in ("csv", "json"):
            path = directory / f"trace_{hp.name}.{fmt}"
            if path.exists():
                traces[hp.name] = read_trace(path)
                break
    return RunArtifact(config=config, report=report, traces=traces, directory=directory)


def analyze_trace(
    trace_path: Path | str,
    delta_t: int | None = None,
    tolerance: float | None = None,
) -> AlgorithmReport:
    """Re-run the analysis of a saved trace.

    The samples are regenerated from the sibling ``config.json``.

    Raises:
        ConfigError: no readable config next to the trace
        InvalidArgumentError: the trace label is not in the config
    """
    trace_path = Path(trace_path)
    config = load_config(trace_path.parent / CONFIG_FILE)
    records = read_trace(trace_path)
    if not records:
        raise InvalidArgumentError(f"{trace_path} holds no rows")

    label = records[0].algorithm
    hp = next((h for h in config.algorithms if h.name == label), None)
    if hp is None:
        raise InvalidArgumentError(f"label {label} is not part of {config.name}")

    settings = config.analysis.model_copy(
        update={
            "enabled": True,
            "delta_t": delta_t or config.analysis.delta_t,
            "tolerance": config.analysis.tolerance if tolerance is None else tolerance,
        }
    )
    config = config.model_copy(update={"analysis": settings})

    samples = regressor_stream(config.source, config.resolved_theta_star, config.horizon)
    v0 = _lyapunov_or_none(TunerState.initial(config.initial_theta), config.resolved_theta_star, hp)
    pe = pe_epsilon(samples, settings.delta_t)
    return _analyse(_AlgorithmRun(hp=hp, records=records, v0=v0), config, pe, [])
