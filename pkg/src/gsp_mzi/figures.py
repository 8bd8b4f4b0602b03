"""Canned figure sweeps with hard-coded parameter sets.

Each figure command reproduces one benchmark sweep bundled with this package
(fig2 .. fig18, one CSV per panel).  Parameter sets are frozen here on
purpose: reproduction commands must not drift, free exploration goes through
the generic ``sweep`` command.  ``docs/figures.md`` lists every mapping.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DomainError
from .loss import Placement
from .sweeps import Job, StateSpec, default_engine, run_jobs, write_rows

__all__ = ["FIGURE_NAMES", "figure_panels", "run_figure"]

TMSV = StateSpec("tmsv")
PS = StateSpec("ps-tmsv")
PA = StateSpec("pa-tmsv")

S_VALUES = (0.0, 0.5, 1.0)
SINGLE_SIDE = ((0, 1), (0, 2))
TWO_SIDE = ((1, 1), (2, 2))

Z_NONCLASS = tuple(np.linspace(0.05, 0.90, 18))
Z_APN_SWEEP = tuple(np.linspace(0.05, 0.95, 46))
PHI_PARITY = tuple(np.linspace(-1.5, 1.5, 121))
PHI_SENS = tuple(np.linspace(0.01, 1.20, 120))
ETA_AXIS = tuple(np.linspace(0.50, 1.00, 26))

Z_FIXED = 0.6
PHI_FIXED = 0.05
ETA_FIXED = 0.9
ETA_LADDER = (1.0, 0.99, 0.98, 0.97, 0.96, 0.95)


def _gsp(mn_pairs, s_values=S_VALUES):
    return tuple(StateSpec("gsp", s=s, m=m, n=n) for s in s_values for (m, n) in mn_pairs)


def _jobs(specs, metrics, z_values, phi_values=(None,), placements=(None,), etas=(None,)):
    jobs = []
    for spec in specs:
        engine = default_engine(spec.family)
        for z in z_values:
            for metric in metrics:
                needs_phase = metric in ("parity", "sensitivity", "parity_loss", "sensitivity_loss")
                needs_loss = metric in ("parity_loss", "sensitivity_loss")
                for phi in phi_values if needs_phase else (None,):
                    for placement in placements if needs_loss else (None,):
                        for eta in etas if needs_loss else (None,):
                            jobs.append(Job(spec, z, metric, engine, phi, placement, eta))
    return jobs


def _nonclassicality_panels(name, metric):
    return [
        (f"{name}a", _jobs(_gsp(SINGLE_SIDE) + (TMSV,), (metric,), Z_NONCLASS)),
        (f"{name}b", _jobs(_gsp(TWO_SIDE) + (TMSV,), (metric,), Z_NONCLASS)),
    ]


def _comparison_panel(name, metric, z_values, phi_values=(None,)):
    specs = _gsp(((1, 1),)) + (PA, PS, TMSV)
    return [(name, _jobs(specs, (metric,), z_values, phi_values))]


def _loss_panels(name, metric, specs, phi_values, etas, z_values=(Z_FIXED,)):
    return [
        (f"{name}a", _jobs(specs, (metric,), z_values, phi_values, (Placement.EXTERNAL,), etas)),
        (f"{name}b", _jobs(specs, (metric,), z_values, phi_values, (Placement.INTERNAL,), etas)),
    ]


def _apn_limit_panels():
    metrics = ("sensitivity", "apn", "sql", "hl")
    single = _gsp(((0, 1), (1, 0))) + (TMSV,)
    double = _gsp(((1, 1),)) + (TMSV,)
    return [
        ("fig12a", _jobs(single, metrics, Z_APN_SWEEP, (PHI_FIXED,))),
        ("fig12b", _jobs(double, metrics, Z_APN_SWEEP, (PHI_FIXED,))),
    ]


def _eta_ladder_panels():
    metrics = ("sensitivity_loss", "apn", "sql", "hl")
    specs = _gsp(((1, 1),), s_values=(1.0,))
    return [
        (
            "fig18a",
            _jobs(specs, metrics, Z_APN_SWEEP, (PHI_FIXED,), (Placement.EXTERNAL,), ETA_LADDER),
        ),
        (
            "fig18b",
            _jobs(specs, metrics, Z_APN_SWEEP, (PHI_FIXED,), (Placement.INTERNAL,), ETA_LADDER),
        ),
    ]


_LOSS_FAMILIES = _gsp(((1, 1),)) + (PA, PS, TMSV)


def _figure_registry():
    return {
        "fig2": lambda: _nonclassicality_panels("fig2", "apn"),
        "fig3": lambda: _comparison_panel("fig3", "apn", Z_NONCLASS),
        "fig4": lambda: _nonclassicality_panels("fig4", "antibunch"),
        "fig5": lambda: _nonclassicality_panels("fig5", "delta_db"),
        "fig6": lambda: _nonclassicality_panels("fig6", "qfi"),
        "fig7": lambda: _comparison_panel("fig7", "qfi", Z_NONCLASS),
        "fig8": lambda: [
            ("fig8a", _jobs(_gsp(SINGLE_SIDE) + (TMSV,), ("parity",), (Z_FIXED,), PHI_PARITY)),
            ("fig8b", _jobs(_gsp(TWO_SIDE) + (TMSV,), ("parity",), (Z_FIXED,), PHI_PARITY)),
        ],
        "fig9": lambda: _comparison_panel("fig9", "parity", (Z_FIXED,), PHI_PARITY),
        "fig10": lambda: [
            ("fig10a", _jobs(_gsp(SINGLE_SIDE) + (TMSV,), ("sensitivity",), (Z_FIXED,), PHI_SENS)),
            ("fig10b", _jobs(_gsp(TWO_SIDE) + (TMSV,), ("sensitivity",), (Z_FIXED,), PHI_SENS)),
        ],
        "fig11": lambda: _comparison_panel("fig11", "sensitivity", (Z_FIXED,), PHI_SENS),
        "fig12": _apn_limit_panels,
        "fig14": lambda: _loss_panels(
            "fig14", "parity_loss", _LOSS_FAMILIES, PHI_PARITY, (ETA_FIXED,)
        ),
        "fig15": lambda: _loss_panels(
            "fig15", "sensitivity_loss", _gsp(((1, 1),)), PHI_SENS, (1.0, 0.9, 0.8)
        ),
        "fig16": lambda: _loss_panels(
            "fig16", "sensitivity_loss", _LOSS_FAMILIES, PHI_SENS, (ETA_FIXED,)
        ),
        "fig17": lambda: _loss_panels(
            "fig17", "sensitivity_loss", _LOSS_FAMILIES, (PHI_FIXED,), ETA_AXIS
        ),
        "fig18": _eta_ladder_panels,
    }


FIGURE_NAMES = tuple(sorted(_figure_registry(), key=lambda s: int(s[3:])))


def figure_panels(name: str):
    registry = _figure_registry()
    if name not in registry:
        raise DomainError(f"unknown figure {name!r}; expected one of {FIGURE_NAMES}")
    return registry[name]()


def run_figure(name: str, outdir: str | Path) -> list[Path]:
    """Evaluate all panels of a figure and write one CSV per panel."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for panel_name, jobs in figure_panels(name):
        rows = run_jobs(jobs)
        path = outdir / f"{panel_name}.csv"
        write_rows(path, rows)
        written.append(path)
    return written
