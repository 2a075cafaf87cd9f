"""Amplitude x offset sweeps, trajectory batches and iso-contours of the transfer map."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import contourpy
import numpy as np

from .errors import DomainError, IntegrationError
from .model import DriveSpec, SystemSpec
from .propagate import Engine, Trajectory, evolve

DEFAULT_SWEEP_TOL = 1e-8


@dataclass(frozen=True)
class SweepGrid:
    amplitudes: tuple
    offsets: tuple
    base_drive: DriveSpec = DriveSpec()
    base_system: SystemSpec = SystemSpec()
    engine: Engine = Engine.SCHRODINGER

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "offsets", tuple(float(d) for d in self.offsets))
        object.__setattr__(self, "engine", Engine(self.engine))
        for name in ("amplitudes", "offsets"):
            axis = np.asarray(getattr(self, name))
            if axis.size == 0:
                raise DomainError(f"{name} must be nonempty")
            if np.any(np.diff(axis) <= 0):
                raise DomainError(f"{name} must be strictly increasing")

    @property
    def shape(self):
        return len(self.offsets), len(self.amplitudes)

    def drive_at(self, amplitude, offset) -> DriveSpec:
        return replace(self.base_drive, omega_max=amplitude, offset=offset)


@dataclass
class SweepResult:
    grid: SweepGrid
    populations: np.ndarray  # (n_offsets, n_amplitudes, n_levels), NaN where a cell failed
    failures: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def p_f(self) -> np.ndarray:
        return self.populations[..., 2]

    def window(self, amplitude_range, offset_range):
        """Boolean mask (offsets x amplitudes) of cells inside a closed window."""
        amps, offs = np.asarray(self.grid.amplitudes), np.asarray(self.grid.offsets)
        eps = 1e-9 * max(1.0, np.abs(amps).max(), np.abs(offs).max())
        in_a = (amps >= amplitude_range[0] - eps) & (amps <= amplitude_range[1] + eps)
        in_d = (offs >= offset_range[0] - eps) & (offs <= offset_range[1] + eps)
        return in_d[:, None] & in_a[None, :]

    def min_p_f(self, amplitude_range, offset_range) -> float:
        mask = self.window(amplitude_range, offset_range)
        if not mask.any():
            raise DomainError("window contains no grid cells")
        return float(np.min(self.p_f[mask]))


def _final_populations(payload):
    system, drive, engine, tol = payload
    try:
        return evolve(system, drive, engine, n_samples=2, tol=tol).final
    except IntegrationError as exc:
        return exc


def _full_trajectory(payload):
    system, drive, engine, tol, n_samples = payload
    try:
        return evolve(system, drive, engine, n_samples=n_samples, tol=tol)
    except IntegrationError as exc:
        return exc


def _map(fn, payloads, parallelism):
    if parallelism <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    chunk = max(1, len(payloads) // (4 * parallelism))
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, payloads, chunksize=chunk))


def run_sweep(grid: SweepGrid, tol: float = DEFAULT_SWEEP_TOL, parallelism: int = 1) -> SweepResult:
    """Final populations for every (offset, amplitude) cell of ``grid``.

    Each cell is an independent propagation from |g>; results are written
    by index, so the output does not depend on ``parallelism``.  Failed
    cells hold NaN and are listed in ``failures``.
    """
    start = time.perf_counter()
    cells = [(i, j) for i in range(len(grid.offsets)) for j in range(len(grid.amplitudes))]
    payloads = [(grid.base_system, grid.drive_at(grid.amplitudes[j], grid.offsets[i]), grid.engine, tol)
                for i, j in cells]
    outs = _map(_final_populations, payloads, parallelism)
    pops = np.full((*grid.shape, grid.base_system.n_levels), np.nan)
    failures = []
    for (i, j), out in zip(cells, outs):
        if isinstance(out, Exception):
            failures.append({"offset_index": i, "amplitude_index": j,
                             "error": str(out), "t_last": getattr(out, "t_last", None)})
        else:
            pops[i, j] = out
    meta = {"tol": tol, "engine": grid.engine.value, "parallelism": parallelism,
            "wall_time_s": time.perf_counter() - start}
    return SweepResult(grid, pops, failures, meta)


def run_trajectory_batch(points, system: SystemSpec, drive: DriveSpec, engine=Engine.SCHRODINGER,
                         tol: float = 1e-10, n_samples: int = 401, parallelism: int = 1):
    """Full trajectories for ``(amplitude, offset)`` points sharing one modulation depth.

    Output order follows ``points``; a failed point appears as its
    :class:`IntegrationError` instead of a :class:`Trajectory`.
    """
    points = list(points)
    if not points:
        raise DomainError("need at least one point")
    engine = Engine(engine)
    payloads = [(system, replace(drive, omega_max=float(a), offset=float(d)), engine, tol, n_samples)
                for a, d in points]
    return _map(_full_trajectory, payloads, parallelism)


def amplitude_sensitivity(result: SweepResult) -> np.ndarray:
    """Finite-difference ``d p_f / d Omega`` on the map (per rad/us)."""
    if len(result.grid.amplitudes) < 2:
        raise DomainError("need at least two amplitudes")
    return np.gradient(result.p_f, np.asarray(result.grid.amplitudes), axis=1)


def iso_lines(field, level, x=None, y=None) -> list[np.ndarray]:
    """Iso-lines of ``field[row, col]`` at ``level`` as ``(k, 2)`` arrays of ``(x, y)``.

    Marching squares with linear interpolation along cell edges (contourpy).
    Closed loops repeat their first point; cells with a NaN corner are
    masked, so lines end at the hole.
    """
    field = np.asarray(field, dtype=float)
    ny, nx = field.shape
    x = np.arange(nx, dtype=float) if x is None else np.asarray(x, dtype=float)
    y = np.arange(ny, dtype=float) if y is None else np.asarray(y, dtype=float)
    gen = contourpy.contour_generator(x, y, np.ma.masked_invalid(field), name="serial",
                                      line_type=contourpy.LineType.Separate)
    return [np.asarray(line, dtype=float) for line in gen.lines(level)]


def extract_contours(result: SweepResult, levels) -> dict:
    """``{level: [polyline, ...]}`` for the p_f map, in (amplitude, offset) coordinates."""
    grid = result.grid
    if min(grid.shape) < 2:
        raise DomainError("contours need at least a 2x2 grid")
    out = {}
    for level in levels:
        if not 0 < level < 1:
            raise DomainError(f"contour level must lie in (0, 1), got {level}")
        out[level] = iso_lines(result.p_f, level, grid.amplitudes, grid.offsets)
    return out
