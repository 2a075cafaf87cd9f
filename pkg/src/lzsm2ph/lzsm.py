"""Landau-Zener formulas for one- and two-photon passages, and the ln(p_g) vs Omega^4 fit."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError


class Convention(str, enum.Enum):
    """Which two-photon Rabi frequency to use.

    ``EQ8_COUPLING`` is twice the eliminated g-f matrix element,
    ``sqrt2 * Omega^2 / (2 Delta)``; ``EQ9_TEXT`` drops the dipole ratio,
    ``Omega^2 / (2 Delta)``.  Full propagation of the transmon ladder
    follows ``EQ8_COUPLING`` (see tests/test_lzsm.py), so it is the default.
    """

    EQ8_COUPLING = "eq8"
    EQ9_TEXT = "eq9"


DEFAULT_CONVENTION = Convention.EQ8_COUPLING


@dataclass(frozen=True)
class LzsmPrediction:
    p_nonadiabatic: float
    p_f: float
    omega_2ph: float
    velocity_v: float
    convention: Convention


@dataclass
class ScalingFit:
    """Least-squares line through ``(Omega^4, ln p_g)``."""

    slope: float
    intercept: float
    r_squared: float
    points: np.ndarray
    rejected: list = field(default_factory=list)
    theory_slope: float | None = None
    convention: Convention | None = None

    @property
    def slope_ratio(self) -> float | None:
        if self.theory_slope in (None, 0):
            return None
        return self.slope / self.theory_slope


def _check_velocity(v):
    if v == 0:
        raise DomainError("LZSM velocity must be nonzero")


def p_lzsm_single(omega, v):
    """Nonadiabatic probability ``exp(-pi Omega^2 / (2|v|))`` of a single-photon passage."""
    _check_velocity(v)
    return float(np.exp(-np.pi * omega ** 2 / (2.0 * abs(v))))


def two_photon_rabi(omega, delta_anharm, convention=DEFAULT_CONVENTION, dipole_ratio_ef=np.sqrt(2.0)):
    convention = Convention(convention)
    base = omega ** 2 / (2.0 * delta_anharm)
    return dipole_ratio_ef * base if convention is Convention.EQ8_COUPLING else base


def p_lzsm_two_photon(omega, v, delta_anharm, convention=DEFAULT_CONVENTION) -> LzsmPrediction:
    """Two-photon passage: the same gap enters against ``4|v|`` instead of ``2|v|``."""
    _check_velocity(v)
    if delta_anharm <= 0:
        raise DomainError("anharmonicity must be positive")
    convention = Convention(convention)
    om2 = two_photon_rabi(omega, delta_anharm, convention)
    p = float(np.exp(-np.pi * om2 ** 2 / (4.0 * abs(v))))
    return LzsmPrediction(p, 1.0 - p, float(om2), float(v), convention)


def theory_slope(v, delta_anharm, convention=DEFAULT_CONVENTION) -> float:
    """d(ln p_g)/d(Omega^4) predicted by :func:`p_lzsm_two_photon`."""
    _check_velocity(v)
    factor = 2.0 if Convention(convention) is Convention.EQ8_COUPLING else 1.0
    return -factor * np.pi / (16.0 * delta_anharm ** 2 * abs(v))


def fit_scaling(points, v=None, delta_anharm=None, convention=DEFAULT_CONVENTION) -> ScalingFit:
    """Ordinary least squares of ``ln p_g`` against ``Omega^4``.

    ``points`` are ``(omega, p_g)`` pairs.  Points with ``p_g <= 0`` are
    dropped and listed in ``rejected``.  When ``v`` and ``delta_anharm``
    are given the fit also carries the theoretical slope.
    """
    xs, ys, rejected = [], [], []
    for omega, pg in points:
        if not pg > 0:
            rejected.append({"omega": float(omega), "p_g": float(pg), "reason": "p_g <= 0"})
            continue
        xs.append(float(omega) ** 4)
        ys.append(np.log(float(pg)))
    if len(xs) < 3:
        raise DomainError("need at least three points with p_g > 0")
    x, y = np.array(xs), np.array(ys)
    dx, dy = x - x.mean(), y - y.mean()
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.dot(dy, dy))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    fit = ScalingFit(slope, intercept, r2, np.column_stack([x, y]), rejected)
    if v is not None and delta_anharm is not None:
        fit.theory_slope = float(theory_slope(v, delta_anharm, convention))
        fit.convention = Convention(convention)
    return fit


def scaling_amplitudes(v, delta_anharm, convention=DEFAULT_CONVENTION,
                       p_range=(0.02, 0.8), n_points: int = 8) -> np.ndarray:
    """Amplitudes evenly spaced in Omega^4 whose predicted p_g spans ``p_range``.

    Below a few percent the passage is no longer a clean single crossing
    (the finite window leaves a small oscillating residue in |g>), so the
    fit range stops there.
    """
    slope = theory_slope(v, delta_anharm, convention)
    lo, hi = sorted(np.log(p_range))
    x4 = np.linspace(hi / slope, lo / slope, n_points)
    return x4 ** 0.25


def simulate_scaling(system, drive, mod_depth, amplitudes=None, convention=DEFAULT_CONVENTION,
                     engine="schrodinger", tol=1e-9, parallelism=1) -> ScalingFit:
    """Final ``p_g`` from full propagation at each amplitude, then :func:`fit_scaling`."""
    from .sweep import run_trajectory_batch

    base = replace(drive, mod_depth=mod_depth, offset=0.0)
    v = base.chirp_rate
    anh = system.anharmonicity
    if amplitudes is None:
        amplitudes = scaling_amplitudes(v, anh, convention)
    trajs = run_trajectory_batch([(a, 0.0) for a in amplitudes], system, base,
                                 engine=engine, tol=tol, n_samples=2, parallelism=parallelism)
    points = []
    for a, tr in zip(amplitudes, trajs):
        if isinstance(tr, Exception):
            raise tr
        points.append((a, tr.final[0]))
    return fit_scaling(points, v, anh, convention)
