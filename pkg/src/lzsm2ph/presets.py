"""Figure presets: each one computes a figure's data and writes it as tables."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RUNS, RunConfig
from .errors import IntegrationError
from .io import write_json, write_table
from .lzsm import fit_scaling, scaling_amplitudes
from .majorana import qutrit_projection, stars_trajectory
from .model import LEVEL_LABELS, drive_offset, to_mhz
from .propagate import Engine, evolve
from .spectra import branch_endpoint_characters, instantaneous_spectrum
from .sweep import SweepGrid, extract_contours, run_sweep, run_trajectory_batch

# Illustrative (amplitude, offset) pairs in MHz for the trajectory batch;
# chosen inside the high-transfer region, not taken from measured data.
BATCH_POINTS_MHZ = (
    ("A", 46.0, -0.8),
    ("B", 50.0, 0.5),
    ("C", 54.0, -0.3),
    ("D", 58.0, 0.9),
    ("E", 62.0, -0.5),
)


@dataclass
class PresetOutput:
    name: str
    files: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def _levels(n):
    return LEVEL_LABELS[:n]


def _pop_columns(prefix, n, suffix=""):
    return [f"{prefix}{lv}{suffix}" for lv in _levels(n)]


def _write(cfg: RunConfig, out: PresetOutput, stem, columns, rows, metadata=None):
    path = write_table(Path(cfg.out_dir) / stem, columns, rows,
                       {"preset": out.name, **(metadata or {})}, fmt=cfg.fmt)
    out.files.append(path.name)
    return path


def fig1_eigen(cfg: RunConfig, out: PresetOutput):
    # the instantaneous spectrum figure is drawn for the three-level Hamiltonian
    system = replace(cfg.system, n_levels=3)
    n_samples = max(cfg.n_samples, 1001)
    for tag, drive in (("", cfg.drive), ("_flipped", replace(cfg.drive, mod_depth=-cfg.drive.mod_depth))):
        branches = instantaneous_spectrum(system, drive, n_samples)
        cols, data = ["t_us"], [branches[0].times]
        for br in branches:
            k = br.label + 1
            cols += [f"E{k}_MHz"] + [f"comp{k}_{lv}" for lv in "gef"] + [f"rgb{k}_{c}" for c in "rgb"]
            data += [to_mhz(br.energies)] + list(br.compositions.T) + list(br.colours.T)
        chars = branch_endpoint_characters(branches)
        _write(cfg, out, f"fig1_eigen{tag}", cols, np.column_stack(data),
               {"mod_depth_MHz": to_mhz(drive.mod_depth), "n_levels": 3,
                "endpoint_characters": chars, "flagged_samples": branches[0].flagged})


def _trajectory_rows(tr, n):
    return [tr.populations[:, k] for k in range(n)]


def fig2_trajectory(cfg: RunConfig, out: PresetOutput):
    n = cfg.system.n_levels
    cols = ["t_us", "drive_offset_MHz", "rabi_MHz"]
    data = None
    warnings = {}
    for engine in Engine:
        tr = evolve(cfg.system, cfg.drive, engine, n_samples=cfg.n_samples, tol=cfg.tol)
        if data is None:
            data = [tr.times, to_mhz(drive_offset(tr.times, cfg.drive)), to_mhz(tr.drive_values[:, 1])]
        cols += _pop_columns("p_", n, f"_{engine.value}")
        data += _trajectory_rows(tr, n)
        warnings[engine.value] = tr.warnings
    _write(cfg, out, "fig2_trajectory", cols, np.column_stack(data), {"warnings": warnings})


def fig2_majorana(cfg: RunConfig, out: PresetOutput):
    tr = evolve(cfg.system, cfg.drive, Engine.SCHRODINGER, n_samples=cfg.n_samples, tol=cfg.tol)
    stars = stars_trajectory(tr, project=True)
    discarded = max(qutrit_projection(s)[1] for s in tr.states)
    rows = np.column_stack([tr.times, np.array([p.as_row() for p in stars])])
    _write(cfg, out, "fig2_majorana", ["t_us", "theta1", "phi1", "theta2", "phi2"], rows,
           {"max_discarded_weight": discarded})


def fig3_batch(cfg: RunConfig, out: PresetOutput):
    pts = [(2 * np.pi * a, 2 * np.pi * d) for _, a, d in BATCH_POINTS_MHZ]
    trajs = run_trajectory_batch(pts, cfg.system, cfg.drive, cfg.engine, tol=cfg.tol,
                                 n_samples=cfg.n_samples, parallelism=cfg.threads)
    n = cfg.system.n_levels
    cols, data = ["t_us"], [cfg.drive.sample_times(cfg.n_samples)]
    for (label, a, d), tr in zip(BATCH_POINTS_MHZ, trajs):
        cols += _pop_columns("p_", n, f"_{label}")
        if isinstance(tr, IntegrationError):
            out.failures.append({"point": label, "error": str(tr), "t_last": tr.t_last})
            data += [np.full(cfg.n_samples, np.nan)] * n
        else:
            data += _trajectory_rows(tr, n)
    _write(cfg, out, "fig3_batch", cols, np.column_stack(data),
           {"points_MHz": [list(p) for p in BATCH_POINTS_MHZ], "engine": cfg.engine.value,
            "note": "illustrative points, not measured values"})


def fig3_map(cfg: RunConfig, out: PresetOutput):
    amps, offs = cfg.sweep_axes()
    grid = SweepGrid(amps, offs, cfg.drive, cfg.system, cfg.engine)
    result = run_sweep(grid, tol=cfg.sweep_tol, parallelism=cfg.threads)
    n = cfg.system.n_levels
    rows = []
    for i, d in enumerate(offs):
        for j, a in enumerate(amps):
            rows.append([to_mhz(d), to_mhz(a), *result.populations[i, j]])
    _write(cfg, out, "fig3_map", ["offset_MHz", "amplitude_MHz"] + _pop_columns("p_", n), rows,
           {"engine": cfg.engine.value, "shape": list(grid.shape), "tol": cfg.sweep_tol})
    contours = extract_contours(result, cfg.sweep["contour_levels"])
    crows = []
    for level, lines in contours.items():
        for k, line in enumerate(lines):
            for p, (a, d) in enumerate(line):
                crows.append([level, k, p, to_mhz(a), to_mhz(d)])
    _write(cfg, out, "fig3_contours", ["level", "polyline", "point", "amplitude_MHz", "offset_MHz"],
           crows, {"levels": list(cfg.sweep["contour_levels"])})
    out.failures.extend(result.failures)


def fig4_scaling(cfg: RunConfig, out: PresetOutput):
    sc = cfg.scaling
    anh = cfg.system.anharmonicity
    summary = []
    for depth in sc["mod_depths"]:
        drive = replace(cfg.drive, mod_depth=depth, offset=0.0)
        v = drive.chirp_rate
        amps = scaling_amplitudes(v, anh, cfg.convention, (sc["p_min"], sc["p_max"]), sc["n_points"])
        trajs = run_trajectory_batch([(a, 0.0) for a in amps], cfg.system, drive, Engine.SCHRODINGER,
                                     tol=cfg.tol, n_samples=2, parallelism=cfg.threads)
        points = []
        for a, tr in zip(amps, trajs):
            if isinstance(tr, IntegrationError):
                out.failures.append({"mod_depth_MHz": to_mhz(depth), "amplitude_MHz": to_mhz(a),
                                     "error": str(tr)})
            else:
                points.append((a, tr.final[0]))
        fit = fit_scaling(points, v, anh, cfg.convention)
        x = fit.points[:, 0]
        rows = np.column_stack([to_mhz(np.array([p[0] for p in points])), x, fit.points[:, 1],
                                fit.theory_slope * x, fit.slope * x + fit.intercept])
        label = format(to_mhz(depth), "g")
        _write(cfg, out, f"fig4_scaling_D{label}MHz",
               ["amplitude_MHz", "omega4", "ln_p_g", "ln_p_g_theory", "ln_p_g_fit"], rows,
               {"mod_depth_MHz": to_mhz(depth), "convention": cfg.convention.value,
                "rejected": fit.rejected})
        summary.append([to_mhz(depth), to_mhz(v), fit.slope, fit.intercept, fit.r_squared,
                        fit.theory_slope, fit.slope_ratio])
    _write(cfg, out, "fig4_fits",
           ["mod_depth_MHz", "v_MHz_per_us", "slope", "intercept", "r_squared", "theory_slope",
            "slope_over_theory"], summary, {"convention": cfg.convention.value})


def simulate(cfg: RunConfig, out: PresetOutput):
    tr = evolve(cfg.system, cfg.drive, cfg.engine, n_samples=cfg.n_samples, tol=cfg.tol)
    n = cfg.system.n_levels
    rows = np.column_stack([tr.times, to_mhz(drive_offset(tr.times, cfg.drive)), to_mhz(tr.drive_values[:, 1]),
                            *_trajectory_rows(tr, n)])
    _write(cfg, out, f"trajectory_{cfg.engine.value}",
           ["t_us", "drive_offset_MHz", "rabi_MHz"] + _pop_columns("p_", n), rows,
           {"engine": cfg.engine.value, "warnings": tr.warnings})


RUNNERS = {
    "fig1-eigen": fig1_eigen,
    "fig2-trajectory": fig2_trajectory,
    "fig2-majorana": fig2_majorana,
    "fig3-batch": fig3_batch,
    "fig3-map": fig3_map,
    "fig4-scaling": fig4_scaling,
    "simulate": simulate,
}
assert set(RUNS) == set(RUNNERS)


def run_preset(name: str, cfg: RunConfig) -> PresetOutput:
    """Compute one preset, write its tables and a ``<name>.manifest.json``.

    The manifest stores the full configuration as unit strings, so
    ``load_config(manifest)`` reproduces the run.
    """
    if name not in RUNNERS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(RUNNERS)}")
    out = PresetOutput(name)
    RUNNERS[name](cfg, out)
    config = {sec: dict(vals) for sec, vals in cfg.values.items()}
    config["run"]["preset"] = name
    manifest = {
        "schema_version": 1,
        "software": {"package": "lzsm2ph", "version": __version__},
        "preset": name,
        "config": config,
        "tolerances": {"tol": cfg.tol, "sweep_tol": cfg.sweep_tol},
        "convention": cfg.convention.value,
        "files": out.files,
        "failures": out.failures,
    }
    write_json(Path(cfg.out_dir) / f"{name}.manifest.json", manifest)
    return out
