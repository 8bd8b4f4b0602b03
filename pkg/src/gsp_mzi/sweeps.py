"""Metric dispatch, grid sweeps, and deterministic CSV output.

A sweep is a list of independent jobs (state, z, metric, optional phase and
loss, engine).  Jobs are evaluated in parallel (``GSP_THREADS`` caps the
worker count, 0 or unset means auto), gathered, sorted lexicographically by
their parameter columns, and written single-threaded with a fixed float
format, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import fock
from .errors import DomainError, NumericFailureError
from .loss import LossConfig, Placement, parity_external, parity_internal, sensitivity_lossy
from .metrology import (
    PhasePoint,
    parity_expectation,
    phase_sensitivity,
    qcrb,
    qfi,
    sql_hl,
)
from .states import (
    GspParams,
    antibunching_r,
    average_photon_number,
    delta_db_vs_tmsv,
    squeezing_db,
    tmsv_params,
)

__all__ = [
    "METRICS",
    "FAMILIES",
    "CSV_HEADER",
    "StateSpec",
    "Job",
    "ResultRow",
    "SweepConfig",
    "evaluate_job",
    "run_jobs",
    "write_rows",
    "jobs_from_config",
    "default_engine",
    "worker_count",
]

METRICS = (
    "apn",
    "antibunch",
    "var_db",
    "delta_db",
    "qfi",
    "qcrb",
    "parity",
    "sensitivity",
    "parity_loss",
    "sensitivity_loss",
    "sql",
    "hl",
)
PHASE_METRICS = frozenset({"parity", "sensitivity", "parity_loss", "sensitivity_loss"})
LOSS_METRICS = frozenset({"parity_loss", "sensitivity_loss"})
FAMILIES = ("gsp", "tmsv", "ps-tmsv", "pa-tmsv")
ENGINE_LABELS = {"closed": "closed_form", "oracle": "fock_oracle"}

CSV_HEADER = "family,s,m,n,z,phi,eta1,eta2,metric,value,engine"


@dataclass(frozen=True)
class StateSpec:
    """One input-state family; gsp carries (s, m, n), the others do not."""

    family: str
    s: float | None = None
    m: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "gsp":
            if self.s is None or self.m is None or self.n is None:
                raise DomainError("gsp states need s, m and n")
            object.__setattr__(self, "s", float(self.s))
            object.__setattr__(self, "m", int(self.m))
            object.__setattr__(self, "n", int(self.n))
        elif any(v is not None for v in (self.s, self.m, self.n)):
            raise DomainError(f"family {self.family!r} takes no s/m/n parameters")

    def params(self, z: float) -> GspParams:
        """Closed-form parameters; only gsp and tmsv are covered closed-form."""
        if self.family == "gsp":
            return GspParams(s=self.s, m=self.m, n=self.n, z=z)
        if self.family == "tmsv":
            return tmsv_params(z)
        raise DomainError(f"the closed-form engine does not cover {self.family}")

    def schmidt(self, z: float) -> fock.SchmidtState:
        return _oracle_state(self.family, self.s, self.m, self.n, z)


@lru_cache(maxsize=512)
def _oracle_state(family: str, s, m, n, z: float) -> fock.SchmidtState:
    if family == "gsp":
        return fock.build_gsp_schmidt(GspParams(s=s, m=m, n=n, z=z))
    if family == "tmsv":
        return fock.build_tmsv(z)
    if family == "ps-tmsv":
        return fock.build_ps_tmsv(z)
    return fock.build_pa_tmsv(z)


def default_engine(family: str) -> str:
    """ps/pa comparison baselines exist only in the Fock engine."""
    return "oracle" if family in ("ps-tmsv", "pa-tmsv") else "closed"


@dataclass(frozen=True)
class Job:
    spec: StateSpec
    z: float
    metric: str
    engine: str
    phi: float | None = None
    placement: Placement | None = None
    eta: float | None = None


@dataclass(frozen=True)
class ResultRow:
    family: str
    s: float | None
    m: int | None
    n: int | None
    z: float
    phi: float | None
    eta1: float | None
    eta2: float | None
    metric: str
    value: float | str
    engine: str

    def sort_key(self):
        def f(x):
            return -math.inf if x is None else x

        return (
            self.family,
            f(self.s),
            -1 if self.m is None else self.m,
            -1 if self.n is None else self.n,
            self.z,
            f(self.phi),
            f(self.eta1),
            f(self.eta2),
            self.metric,
            self.engine,
        )

    def to_csv(self) -> str:
        def num(x):
            return "" if x is None else f"{x:.12e}"

        value = self.value if isinstance(self.value, str) else f"{self.value:.12e}"
        fields = (
            self.family,
            num(self.s),
            "" if self.m is None else str(self.m),
            "" if self.n is None else str(self.n),
            num(self.z),
            num(self.phi),
            num(self.eta1),
            num(self.eta2),
            self.metric,
            value,
            self.engine,
        )
        return ",".join(fields)


def _closed_metric(job: Job) -> float:
    p = job.spec.params(job.z)
    metric = job.metric
    if metric == "apn":
        return average_photon_number(p)
    if metric == "antibunch":
        return antibunching_r(p)
    if metric == "var_db":
        return squeezing_db(p)
    if metric == "delta_db":
        return delta_db_vs_tmsv(p)
    if metric == "qfi":
        return qfi(p)
    if metric == "qcrb":
        return qcrb(p)
    if metric == "sql":
        return sql_hl(2.0 * average_photon_number(p))[0]
    if metric == "hl":
        return sql_hl(2.0 * average_photon_number(p))[1]
    pp = PhasePoint(job.phi)
    if metric == "parity":
        return parity_expectation(p, pp)
    if metric == "sensitivity":
        return phase_sensitivity(p, pp)
    loss = LossConfig(job.placement, job.eta)
    if metric == "parity_loss":
        if loss.placement is Placement.EXTERNAL:
            return parity_external(p, pp, loss.eta)
        return parity_internal(p, pp, loss.eta)
    if metric == "sensitivity_loss":
        return sensitivity_lossy(p, pp, loss)
    raise DomainError(f"unknown metric {metric!r}")


def _oracle_metric(job: Job) -> float:
    st = job.spec.schmidt(job.z)
    metric = job.metric
    if metric == "apn":
        return fock.oracle_apn(st)
    if metric == "antibunch":
        return fock.oracle_antibunching(st)
    if metric == "var_db":
        return fock.oracle_squeezing_db(st)
    if metric == "delta_db":
        return fock.oracle_delta_db(st, _oracle_state("tmsv", None, None, None, job.z))
    if metric == "qfi":
        return fock.oracle_qfi(st)
    if metric == "qcrb":
        fisher = fock.oracle_qfi(st)
        if fisher <= 0.0:
            raise DomainError("Fisher information is not positive")
        return 1.0 / math.sqrt(fisher)
    if metric == "sql":
        return sql_hl(2.0 * fock.oracle_apn(st))[0]
    if metric == "hl":
        return sql_hl(2.0 * fock.oracle_apn(st))[1]
    pp = PhasePoint(job.phi)
    if metric == "parity":
        return fock.oracle_parity(st, pp)
    if metric == "sensitivity":
        return fock.oracle_sensitivity(st, pp)
    loss = LossConfig(job.placement, job.eta)
    if metric == "parity_loss":
        if loss.placement is Placement.EXTERNAL:
            return fock.oracle_parity_external(st, pp, loss.eta)
        return fock.oracle_parity_internal(st, pp, loss.eta)
    if metric == "sensitivity_loss":
        return fock.oracle_sensitivity(st, pp, loss)
    raise DomainError(f"unknown metric {metric!r}")


def evaluate_metric(job: Job) -> float:
    """Evaluate one job, raising on invalid input or numeric failure."""
    if job.engine == "closed":
        value = _closed_metric(job)
    elif job.engine == "oracle":
        value = _oracle_metric(job)
    else:
        raise DomainError(f"unknown engine {job.engine!r}")
    if not math.isfinite(value):
        raise NumericFailureError(f"non-finite value for {job}")
    return value


def evaluate_job(job: Job) -> ResultRow:
    """Evaluate one job; per-point failures become error-coded rows."""
    eta1 = eta2 = None
    if job.metric in LOSS_METRICS:
        if Placement(job.placement) is Placement.EXTERNAL:
            eta1 = job.eta
        else:
            eta2 = job.eta
    try:
        value = evaluate_metric(job)
    except NumericFailureError:
        value = "error:numeric"
    except DomainError:
        value = "error:domain"
    return ResultRow(
        family=job.spec.family,
        s=job.spec.s,
        m=job.spec.m,
        n=job.spec.n,
        z=job.z,
        phi=job.phi if job.metric in PHASE_METRICS else None,
        eta1=eta1,
        eta2=eta2,
        metric=job.metric,
        value=value,
        engine=ENGINE_LABELS[job.engine],
    )


def worker_count() -> int:
    raw = os.environ.get("GSP_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"GSP_THREADS must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise DomainError(f"GSP_THREADS must be non-negative, got {cap}")
    return cap if cap > 0 else (os.cpu_count() or 1)


def run_jobs(jobs: list[Job]) -> list[ResultRow]:
    """Evaluate jobs in parallel and return rows in deterministic order."""
    workers = worker_count()
    if workers == 1 or len(jobs) <= 1:
        rows = [evaluate_job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate_job, jobs))
    rows.sort(key=ResultRow.sort_key)
    return rows


def write_rows(path: str | Path, rows: list[ResultRow]):
    """Write the CSV; a failure removes the partial file."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in rows:
                fh.write(row.to_csv() + "\n")
    except BaseException:
        path.unlink(missing_ok=True)
        raise


# ---------------------------------------------------------------------------
# sweep configuration (CLI flags or JSON document)


def _linspace(start: float, stop: float, steps: int) -> tuple[float, ...]:
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    if steps == 1:
        return (float(start),)
    if not start < stop:
        raise DomainError(f"range needs from < to, got [{start}, {stop}]")
    return tuple(float(v) for v in np.linspace(start, stop, steps))


def _parse_axis(node, what: str) -> tuple[float, ...]:
    if node is None:
        return ()
    if isinstance(node, (list, tuple)):
        return tuple(float(v) for v in node)
    if isinstance(node, dict):
        try:
            return _linspace(float(node["from"]), float(node["to"]), int(node["steps"]))
        except KeyError as exc:
            raise DomainError(f"{what} range needs from/to/steps") from exc
    raise DomainError(f"cannot parse {what} axis from {node!r}")


@dataclass(frozen=True)
class SweepConfig:
    states: tuple[StateSpec, ...]
    z_values: tuple[float, ...]
    metrics: tuple[str, ...]
    engines: tuple[str, ...]
    output: str
    phi_values: tuple[float, ...] = ()
    placements: tuple[Placement, ...] = ()
    etas: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.states:
            raise DomainError("sweep needs at least one state")
        if not self.z_values:
            raise DomainError("sweep needs a non-empty z axis")
        if not self.metrics:
            raise DomainError("sweep needs at least one metric")
        for metric in self.metrics:
            if metric not in METRICS:
                raise DomainError(f"unknown metric {metric!r}; expected one of {METRICS}")
            if metric in PHASE_METRICS and not self.phi_values:
                raise DomainError(f"metric {metric!r} needs a phi axis")
            if metric in LOSS_METRICS and not (self.placements and self.etas):
                raise DomainError(f"metric {metric!r} needs a loss placement and eta list")
        for engine in self.engines:
            if engine not in ENGINE_LABELS:
                raise DomainError(f"unknown engine {engine!r}")

    @classmethod
    def from_json(cls, document: dict, output_override: str | None = None) -> "SweepConfig":
        if not isinstance(document, dict):
            raise DomainError("sweep config must be a JSON object")
        states = tuple(
            StateSpec(
                family=node.get("family", "gsp"),
                s=node.get("s"),
                m=node.get("m"),
                n=node.get("n"),
            )
            for node in document.get("states", [])
        )
        loss = document.get("loss") or {}
        placement = loss.get("placement", "")
        if placement == "both":
            placements = (Placement.EXTERNAL, Placement.INTERNAL)
        elif placement:
            placements = (Placement(placement),)
        else:
            placements = ()
        engine = document.get("engine", "closed")
        engines = ("closed", "oracle") if engine == "both" else (engine,)
        output = output_override or document.get("output")
        if not output:
            raise DomainError("sweep config needs an output path")
        return cls(
            states=states,
            z_values=_parse_axis(document.get("z"), "z"),
            metrics=tuple(document.get("metrics", [])),
            engines=engines,
            output=str(output),
            phi_values=_parse_axis(document.get("phi"), "phi"),
            placements=placements,
            etas=tuple(float(v) for v in loss.get("eta", [])),
        )


def jobs_from_config(cfg: SweepConfig) -> list[Job]:
    jobs = []
    for spec in cfg.states:
        for engine in cfg.engines:
            for z in cfg.z_values:
                for metric in cfg.metrics:
                    if metric in LOSS_METRICS:
                        for placement in cfg.placements:
                            for eta in cfg.etas:
                                for phi in cfg.phi_values:
                                    jobs.append(
                                        Job(spec, z, metric, engine, phi, placement, eta)
                                    )
                    elif metric in PHASE_METRICS:
                        for phi in cfg.phi_values:
                            jobs.append(Job(spec, z, metric, engine, phi))
                    else:
                        jobs.append(Job(spec, z, metric, engine))
    return jobs


def run_sweep(cfg: SweepConfig) -> list[ResultRow]:
    rows = run_jobs(jobs_from_config(cfg))
    write_rows(cfg.output, rows)
    return rows


def load_config_file(path: str | Path, output_override: str | None = None) -> SweepConfig:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read sweep config {path}: {exc}") from exc
    return SweepConfig.from_json(document, output_override)
