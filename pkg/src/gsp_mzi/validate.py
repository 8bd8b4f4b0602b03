"""Cross-engine validation harness.

Runs three families of checks and reports the worst deviation of each:

* closed-form vs Fock-oracle agreement for every metric over a parameter
  grid (``full`` is the master grid, ``small`` a sub-minute subset);
* exact reductions: lossy formulas at unit transmissivity against the ideal
  ones, and the un-operated state against its analytic expressions;
* scoped orderings that the physics fixes on specific parameter regimes
  (photon-number and Fisher-information orderings in s, external loss hurting
  more than internal loss, and the lossy-sensitivity family ordering).

Relative deviations are measured as |a - b| / max(|a|, |b|, floor); the
floor (default 1e-3) keeps near-zeros of oscillatory signals from demanding
sub-epsilon absolute agreement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import fock
from .errors import DomainError
from .loss import LossConfig, Placement, parity_external, parity_internal, sensitivity_lossy
from .metrology import PhasePoint, parity_expectation, phase_sensitivity, qfi
from .states import GspParams, average_photon_number, quadrature_variances
from .sweeps import Job, StateSpec, evaluate_job, worker_count

__all__ = ["CheckResult", "ValidationReport", "run_validation", "GRID_NAMES"]

GRID_NAMES = ("small", "full")

# per-metric agreement tolerances; the sensitivity oracle is finite-difference
# based and cannot match the algebraic metrics' agreement level
CROSS_TOLS = {
    "apn": 1e-8,
    "antibunch": 1e-8,
    "var_db": 1e-8,
    "delta_db": 1e-8,
    "qfi": 1e-8,
    "qcrb": 1e-8,
    "parity": 1e-8,
    "parity_loss": 1e-8,
    "sensitivity": 1e-6,
    "sensitivity_loss": 1e-6,
}
REDUCTION_TOL = 1e-10


@dataclass
class CheckResult:
    name: str
    max_dev: float
    tol: float
    worst_point: str = ""

    @property
    def passed(self) -> bool:
        return self.max_dev <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f"  at {self.worst_point}" if self.worst_point else ""
        return f"[{status}] {self.name}: max_dev={self.max_dev:.3e} (tol {self.tol:.0e}){where}"


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out.append("VALIDATION " + ("PASSED" if self.passed else "FAILED"))
        return out


def _grid(name: str):
    if name == "small":
        return dict(
            s_values=(0.0, 1.0),
            mn_pairs=((0, 1), (1, 1)),
            z_values=(0.3, 0.6),
            phi_values=(0.05, 0.3),
            etas=(0.9, 1.0),
        )
    if name == "full":
        return dict(
            s_values=(0.0, 0.5, 1.0),
            mn_pairs=((0, 1), (0, 2), (1, 1), (2, 2)),
            z_values=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
            phi_values=(0.05, 0.2, 0.4),
            etas=(0.8, 0.9, 1.0),
        )
    raise DomainError(f"unknown grid {name!r}; expected one of {GRID_NAMES}")


def _rel_dev(a: float, b: float, floor: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


def _grid_specs(grid) -> list[StateSpec]:
    specs = [StateSpec("tmsv")]
    specs += [
        StateSpec("gsp", s=s, m=m, n=n)
        for s in grid["s_values"]
        for (m, n) in grid["mn_pairs"]
    ]
    return specs


def _cross_engine_jobs(grid) -> list[Job]:
    jobs = []
    for spec in _grid_specs(grid):
        for z in grid["z_values"]:
            for metric in ("apn", "antibunch", "var_db", "delta_db", "qfi", "qcrb"):
                jobs.append(Job(spec, z, metric, "both"))
            for phi in grid["phi_values"]:
                jobs.append(Job(spec, z, "parity", "both", phi))
                jobs.append(Job(spec, z, "sensitivity", "both", phi))
                for placement in (Placement.EXTERNAL, Placement.INTERNAL):
                    for eta in grid["etas"]:
                        jobs.append(Job(spec, z, "parity_loss", "both", phi, placement, eta))
                        jobs.append(
                            Job(spec, z, "sensitivity_loss", "both", phi, placement, eta)
                        )
    return jobs


def _job_point(job: Job) -> str:
    spec = job.spec
    bits = [spec.family]
    if spec.family == "gsp":
        bits.append(f"s={spec.s:g} m={spec.m} n={spec.n}")
    bits.append(f"z={job.z:g}")
    if job.phi is not None:
        bits.append(f"phi={job.phi:g}")
    if job.placement is not None:
        bits.append(f"{Placement(job.placement).value} eta={job.eta:g}")
    return " ".join(bits)


def _compare_job(job: Job, floor: float):
    closed = evaluate_job(Job(job.spec, job.z, job.metric, "closed", job.phi, job.placement, job.eta))
    oracle = evaluate_job(Job(job.spec, job.z, job.metric, "oracle", job.phi, job.placement, job.eta))
    if isinstance(closed.value, str) or isinstance(oracle.value, str):
        return job.metric, math.inf, _job_point(job) + f" ({closed.value}/{oracle.value})"
    return job.metric, _rel_dev(closed.value, oracle.value, floor), _job_point(job)


def _run_cross_engine(grid, floor: float, progress) -> list[CheckResult]:
    jobs = _cross_engine_jobs(grid)
    progress(f"cross-engine grid: {len(jobs)} comparison points")
    workers = worker_count()
    if workers == 1:
        results = [_compare_job(j, floor) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda j: _compare_job(j, floor), jobs))
    worst: dict[str, tuple[float, str]] = {}
    for metric, dev, point in results:
        if metric not in worst or dev > worst[metric][0]:
            worst[metric] = (dev, point)
    return [
        CheckResult(f"cross-engine {metric}", dev, CROSS_TOLS[metric], point)
        for metric, (dev, point) in sorted(worst.items())
    ]


def _run_unit_eta_reductions(grid) -> CheckResult:
    worst, point = 0.0, ""
    for spec in _grid_specs(grid):
        for z in grid["z_values"]:
            p = spec.params(z)
            for phi in grid["phi_values"]:
                pp = PhasePoint(phi)
                ideal_parity = parity_expectation(p, pp)
                ideal_sens = phase_sensitivity(p, pp)
                for placement, lossy_parity in (
                    (Placement.EXTERNAL, parity_external),
                    (Placement.INTERNAL, parity_internal),
                ):
                    cfg = LossConfig(placement, 1.0)
                    for name, got, want in (
                        ("parity", lossy_parity(p, pp, 1.0), ideal_parity),
                        ("sensitivity", sensitivity_lossy(p, pp, cfg), ideal_sens),
                    ):
                        dev = abs(got - want) / max(abs(want), 1.0)
                        if dev > worst:
                            worst = dev
                            point = f"{name} {placement.value} {_job_point(Job(spec, z, name, 'closed', phi))}"
    return CheckResult("unit-transmissivity reductions", worst, REDUCTION_TOL, point)


def _run_tmsv_reductions(grid) -> CheckResult:
    worst, point = 0.0, ""

    def track(name, got, want, z):
        nonlocal worst, point
        dev = abs(got - want) / max(abs(want), 1.0)
        if dev > worst:
            worst, point = dev, f"{name} z={z:g}"

    for z in grid["z_values"]:
        p = GspParams(s=1.0, m=0, n=0, z=z)
        track("qfi", qfi(p), 4.0 * z**2 / (1.0 - z**2) ** 2, z)
        v1, _ = quadrature_variances(p)
        track("var", v1, (1.0 - z) / (1.0 + z), z)
        for phi in grid["phi_values"]:
            want = (1.0 - z**2) / math.sqrt(1.0 - 2.0 * z**2 * math.cos(2.0 * phi) + z**4)
            track(f"parity phi={phi:g}", parity_expectation(p, PhasePoint(phi)), want, z)
    return CheckResult("un-operated-state reductions", worst, REDUCTION_TOL, point)


def _ordering_margin(sequence) -> float:
    """Worst violation of a non-increasing ordering (0 when satisfied)."""
    worst = 0.0
    for a, b in zip(sequence, sequence[1:]):
        worst = max(worst, b - a)
    return worst


def _run_orderings(grid) -> list[CheckResult]:
    checks = []

    # photon number decreases with s and exceeds the un-operated state
    worst, point = 0.0, ""
    for (m, n) in grid["mn_pairs"]:
        for z in grid["z_values"]:
            apns = [average_photon_number(GspParams(s=s, m=m, n=n, z=z)) for s in (0.0, 0.5, 1.0)]
            ref = average_photon_number(GspParams(s=1.0, m=0, n=0, z=z))
            margin = max(_ordering_margin(apns), ref - apns[-1])
            if margin > worst:
                worst, point = margin, f"(m,n)=({m},{n}) z={z:g}"
    checks.append(CheckResult("ordering: photon number vs s", worst, 1e-12, point))

    # Fisher information ordering for z >= 0.2
    worst, point = 0.0, ""
    for (m, n) in grid["mn_pairs"]:
        for z in [z for z in grid["z_values"] if z >= 0.2]:
            fis = [qfi(GspParams(s=s, m=m, n=n, z=z)) for s in (0.0, 0.5, 1.0)]
            fis.append(qfi(GspParams(s=1.0, m=0, n=0, z=z)))
            margin = _ordering_margin(fis)
            if margin > worst:
                worst, point = margin, f"(m,n)=({m},{n}) z={z:g}"
    checks.append(CheckResult("ordering: Fisher information vs s", worst, 1e-12, point))

    # external loss degrades the sensitivity at least as much as internal:
    # pointwise in the operating region (before the internal signal's first
    # stationary point), over the transmissivity sweep at the reference
    # phase, and for the best achievable uncertainty of each placement
    worst, point = 0.0, ""
    operating_phis = [0.01 + 0.029 * i for i in range(11)]  # up to 0.30
    for s in (0.0, 0.5, 1.0):
        p = GspParams(s=s, m=1, n=1, z=0.6)
        best = {}
        for placement in (Placement.EXTERNAL, Placement.INTERNAL):
            best[placement] = min(
                sensitivity_lossy(p, PhasePoint(f), LossConfig(placement, 0.9))
                for f in operating_phis
            )
        for phi in operating_phis:
            pp = PhasePoint(phi)
            ext = sensitivity_lossy(p, pp, LossConfig(Placement.EXTERNAL, 0.9))
            intl = sensitivity_lossy(p, pp, LossConfig(Placement.INTERNAL, 0.9))
            if intl - ext > worst:
                worst, point = intl - ext, f"s={s:g} phi={phi:g}"
        for eta in (0.6, 0.7, 0.8, 0.9, 0.95):
            pp = PhasePoint(0.05)
            ext = sensitivity_lossy(p, pp, LossConfig(Placement.EXTERNAL, eta))
            intl = sensitivity_lossy(p, pp, LossConfig(Placement.INTERNAL, eta))
            if intl - ext > worst:
                worst, point = intl - ext, f"s={s:g} eta={eta:g}"
        if best[Placement.INTERNAL] - best[Placement.EXTERNAL] > worst:
            worst, point = best[Placement.INTERNAL] - best[Placement.EXTERNAL], f"s={s:g} minima"
    checks.append(CheckResult("ordering: external >= internal loss", worst, 1e-12, point))

    # lossy-sensitivity family ordering at the reference regime:
    # min-over-phi uncertainty must not decrease along
    # s=0, s=0.5, s=1, gained-pair, lost-pair, un-operated
    phis = [0.02 + 0.02 * i for i in range(20)]
    worst, point = 0.0, ""
    for placement in (Placement.EXTERNAL, Placement.INTERNAL):
        cfg = LossConfig(placement, 0.9)
        minima = []
        for s in (0.0, 0.5, 1.0):
            p = GspParams(s=s, m=1, n=1, z=0.6)
            minima.append(min(sensitivity_lossy(p, PhasePoint(f), cfg) for f in phis))
        for build in (fock.build_pa_tmsv, fock.build_ps_tmsv, fock.build_tmsv):
            st = build(0.6)
            minima.append(min(fock.oracle_sensitivity(st, PhasePoint(f), cfg) for f in phis))
        margin = _ordering_margin(list(reversed(minima)))
        if margin > worst:
            worst, point = margin, f"{placement.value} z=0.6 m=n=1 eta=0.9"
    checks.append(CheckResult("ordering: lossy sensitivity family", worst, 1e-12, point))
    return checks


def run_validation(grid_name: str = "full", rel_floor: float = 1e-3, progress=lambda s: None) -> ValidationReport:
    grid = _grid(grid_name)
    report = ValidationReport()
    report.checks.extend(_run_cross_engine(grid, rel_floor, progress))
    progress("cross-engine comparisons done")
    report.checks.append(_run_unit_eta_reductions(grid))
    report.checks.append(_run_tmsv_reductions(grid))
    report.checks.extend(_run_orderings(grid))
    return report
