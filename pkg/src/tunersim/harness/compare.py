"""Cross-run comparison tables."""

from __future__ import annotations

import json

import numpy as np
from pydantic import BaseModel, Field

from tunersim.core.errors import IncompatibleRunsError, InvalidArgumentError
from tunersim.core.models import TraceRecord
from tunersim.formats.export import rows_to_csv
from tunersim.harness.engine import RunArtifact

NOT_REACHED = "not reached"
DEFAULT_EPS_E = 1e-3
DEFAULT_EPS_THETA = 1e-3
THRESHOLD_FIELDS = ("k_output", "k_param", "k_both")


class ComparisonRow(BaseModel):
    """One algorithm of one run."""

    run: str
    algorithm: str
    k_output: int | None = Field(None, description="First k with |e_y| < eps_e")
    k_param: int | None = Field(None, description="First k with ||theta - theta_star|| < eps_theta")
    k_both: int | None = Field(None, description="First k meeting both thresholds")
    final_abs_e_y: float
    final_param_err: float
    envelope_holds: bool | None = Field(None, description="None when no envelope was checked")
    delta_final_param_err: float | None = Field(None, description="Against the first run")
    delta_k_param: int | None = Field(None, description="Against the first run")


class ComparisonTable(BaseModel):
    """Summary table over one or more runs."""

    eps_e: float
    eps_theta: float
    rows: list[ComparisonRow]

    def row(self, run: str, algorithm: str) -> ComparisonRow | None:
        """Row for (run, algorithm)."""
        for row in self.rows:
            if row.run == run and row.algorithm == algorithm:
                return row
        return None

    def to_json(self) -> str:
        """JSON form; unreached thresholds are null."""
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"

    def to_csv(self) -> str:
        """CSV form; unreached thresholds read 'not reached'."""
        fields = list(ComparisonRow.model_fields)
        return rows_to_csv(
            fields,
            (
                [
                    NOT_REACHED if name in THRESHOLD_FIELDS and getattr(row, name) is None
                    else getattr(row, name)
                    for name in fields
                ]
                for row in self.rows
            ),
        )


def _first(mask: np.ndarray, ks: np.ndarray) -> int | None:
    hits = np.flatnonzero(mask)
    return int(ks[hits[0]]) if hits.size else None


def iterations_to_tolerance(
    records: list[TraceRecord], eps_e: float, eps_theta: float
) -> tuple[int | None, int | None, int | None]:
    """First k with |e_y| < eps_e, with ||theta~|| < eps_theta, and with both."""
    ks = np.array([r.k for r in records])
    output_ok = np.array([abs(r.e_y) < eps_e for r in records], dtype=bool)
    param_ok = np.array([r.param_err < eps_theta for r in records], dtype=bool)
    return _first(output_ok, ks), _first(param_ok, ks), _first(output_ok & param_ok, ks)


def compare(
    *runs: RunArtifact,
    eps_e: float = DEFAULT_EPS_E,
    eps_theta: float = DEFAULT_EPS_THETA,
) -> ComparisonTable:
    """Tabulate convergence of every algorithm in every run.

    Deltas are taken against the row with the same label in the first run.

    Raises:
        InvalidArgumentError: no runs
        IncompatibleRunsError: runs differ in theta_star or horizon
    """
    if not runs:
        raise InvalidArgumentError("compare needs at least one run")
    base = runs[0]
    for other in runs[1:]:
        if other.report.theta_star != base.report.theta_star:
            raise IncompatibleRunsError(
                f"{other.config.name} and {base.config.name} have different theta_star"
            )
        if other.report.horizon != base.report.horizon:
            raise IncompatibleRunsError(
                f"{other.config.name} has horizon {other.report.horizon}, "
                f"{base.config.name} has {base.report.horizon}"
            )

    rows: list[ComparisonRow] = []
    baseline: dict[str, ComparisonRow] = {}
    for index, run in enumerate(runs):
        for label in run.labels:
            records = run.traces[label]
            k_output, k_param, k_both = iterations_to_tolerance(records, eps_e, eps_theta)
            report = run.report.get(label)
            envelope = report.envelope if report is not None else None
            row = ComparisonRow(
                run=run.config.name,
                algorithm=label,
                k_output=k_output,
                k_param=k_param,
                k_both=k_both,
                final_abs_e_y=abs(records[-1].e_y),
                final_param_err=records[-1].param_err,
                envelope_holds=envelope.holds if envelope is not None else None,
            )
            if index == 0:
                baseline[label] = row
            ref = baseline.get(label)
            if ref is not None:
                row.delta_final_param_err = row.final_param_err - ref.final_param_err
                if row.k_param is not None and ref.k_param is not None:
                    row.delta_k_param = row.k_param - ref.k_param
            rows.append(row)

    return ComparisonTable(eps_e=eps_e, eps_theta=eps_theta, rows=rows)
