"""Driven transmon ladder in the frame co-rotating with a chirped drive.

Units used throughout the package: time in microseconds, every frequency
as an angular frequency in rad/us (so ``2*pi*1`` is 1 MHz), decay rates as
plain rates in 1/us, temperature in kelvin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StarkSingularity

TWO_PI = 2.0 * np.pi
LEVEL_LABELS = "gefh"


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def mhz(value):
    """Convert an ordinary frequency in MHz to rad/us."""
    return _scalar_or_array(TWO_PI * np.asarray(value, dtype=float))


def to_mhz(omega):
    """Inverse of :func:`mhz`."""
    return _scalar_or_array(np.asarray(omega, dtype=float) / TWO_PI)


@dataclass(frozen=True)
class SystemSpec:
    """Transition frequencies, dipole scalings and dissipation of the ladder.

    The defaults are the transmon parameters of the reference experiment:
    7.24 GHz and 6.90 GHz transitions, a 33 kHz g-e decay rate and an
    effective temperature of 73 mK.  ``n_levels=4`` keeps the |h> level,
    which is what cancels the two-photon ac Stark shift.
    """

    omega_ge: float = TWO_PI * 7240.0
    omega_ef: float = TWO_PI * 6900.0
    dipole_ratio_ef: float = float(np.sqrt(2.0))
    dipole_ratio_fh: float = float(np.sqrt(3.0))
    n_levels: int = 4
    gamma_eg: float = 0.033
    temperature: float = 0.073

    def __post_init__(self):
        if not self.omega_ge > self.omega_ef > 0:
            raise DomainError("need omega_ge > omega_ef > 0 (positive anharmonicity)")
        if self.dipole_ratio_ef <= 0 or self.dipole_ratio_fh <= 0:
            raise DomainError("dipole ratios must be positive")
        if self.n_levels not in (3, 4):
            raise DomainError(f"n_levels must be 3 or 4, got {self.n_levels}")
        if self.gamma_eg < 0:
            raise DomainError("gamma_eg must be >= 0")
        if self.temperature < 0:
            raise DomainError("temperature must be >= 0")

    @property
    def anharmonicity(self) -> float:
        """Half the g-e / e-f splitting, the detuning of the virtual level."""
        return 0.5 * (self.omega_ge - self.omega_ef)

    @property
    def omega_gf(self) -> float:
        return self.omega_ge + self.omega_ef

    @property
    def omega_fh(self) -> float:
        # harmonic-ladder rule: every transition sits 2*anharmonicity below the previous one
        return self.omega_ef - 2.0 * self.anharmonicity

    def transition_frequencies(self):
        return (self.omega_ge, self.omega_ef, self.omega_fh)[: self.n_levels - 1]

    def dipole_ratios(self):
        return (1.0, self.dipole_ratio_ef, self.dipole_ratio_fh)[: self.n_levels - 1]


@dataclass(frozen=True)
class DriveSpec:
    """Chirped super-Gaussian pulse on the window ``[-T/2, T/2]``.

    ``mod_depth`` is the signed frequency excursion of the drive over the
    pulse; the chirp rate follows from it as ``v = -2 D / T``.
    """

    duration: float = 0.4
    mod_depth: float = TWO_PI * -12.5
    offset: float = 0.0
    omega_max: float = TWO_PI * 55.6
    envelope_order: int = 4
    envelope_cutoff: float = float(np.log(0.01))

    def __post_init__(self):
        if not self.duration > 0:
            raise DomainError("duration must be positive")
        if self.envelope_order < 2 or self.envelope_order % 2:
            raise DomainError("envelope_order must be an even integer >= 2")
        if not self.envelope_cutoff < 0:
            raise DomainError("envelope_cutoff must be negative")
        if self.omega_max < 0:
            raise DomainError("omega_max must be >= 0")

    @property
    def chirp_rate(self) -> float:
        return -2.0 * self.mod_depth / self.duration

    @property
    def t_start(self) -> float:
        return -0.5 * self.duration

    @property
    def t_end(self) -> float:
        return 0.5 * self.duration

    def sample_times(self, n_samples: int) -> np.ndarray:
        if n_samples < 2:
            raise DomainError("need at least two samples")
        return np.linspace(self.t_start, self.t_end, n_samples)


@dataclass(frozen=True)
class HamiltonianSample:
    matrix: np.ndarray
    time: float


@dataclass(frozen=True)
class EffectiveHamiltonianSample:
    """``H/hbar = sigma_z_coeff * (|f><f| - |g><g|) + sigma_x_coeff * (|g><f| + |f><g|)``."""

    sigma_z_coeff: float
    sigma_x_coeff: float
    time: float

    @property
    def matrix(self) -> np.ndarray:
        cz, cx = self.sigma_z_coeff, self.sigma_x_coeff
        return np.array([[-cz, cx], [cx, cz]], dtype=complex)

    @property
    def gap(self) -> float:
        return 2.0 * float(np.hypot(self.sigma_z_coeff, self.sigma_x_coeff))


def _check_window(t, drive: DriveSpec):
    slack = 1e-12 * drive.duration
    t = np.asarray(t, dtype=float)
    if np.any(t < drive.t_start - slack) or np.any(t > drive.t_end + slack):
        raise DomainError(f"time outside the pulse window [{drive.t_start}, {drive.t_end}]")


def _envelope(t, drive: DriveSpec):
    x = 2.0 * np.asarray(t, dtype=float) / drive.duration
    return drive.omega_max * np.exp(drive.envelope_cutoff * x ** drive.envelope_order)


def envelope(t, drive: DriveSpec):
    """Peak-normalised super-Gaussian Rabi amplitude at time ``t``."""
    _check_window(t, drive)
    return _scalar_or_array(_envelope(t, drive))


def frame_detuning(t, drive: DriveSpec):
    """Detuning of the two-photon transition in the rotating frame, ``-v t + delta``.

    Carries the full chirp rate because the frame follows the instantaneous
    drive phase, not the instantaneous drive frequency.
    """
    return _scalar_or_array(-drive.chirp_rate * np.asarray(t, dtype=float) + drive.offset)


def drive_offset(t, drive: DriveSpec):
    """Offset of the drive frequency from omega_gf/2, ``D t / T + delta``."""
    return _scalar_or_array(drive.mod_depth * np.asarray(t, dtype=float) / drive.duration + drive.offset)


def drive_frequency(t, drive: DriveSpec, system: SystemSpec):
    _check_window(t, drive)
    t = np.asarray(t, dtype=float)
    return _scalar_or_array(0.5 * system.omega_gf - 0.5 * drive.chirp_rate * t + drive.offset)


def detunings(t, drive: DriveSpec, system: SystemSpec):
    """Return ``(Delta_ge(t), Delta_ef(t))``."""
    _check_window(t, drive)
    dgf = frame_detuning(t, drive)
    anh = system.anharmonicity
    d_ge, d_ef = anh - dgf, -anh - dgf
    if np.ndim(dgf) == 0:
        return float(d_ge), float(d_ef)
    return d_ge, d_ef


class HamiltonianTerms:
    """``H(t) = static + frame_detuning(t) * chirp + envelope(t) * coupling``.

    Precomputed once per (system, drive) so the stepper only does two
    scalar evaluations and a couple of array adds per call.
    """

    def __init__(self, system: SystemSpec, drive: DriveSpec):
        self.system = system
        self.drive = drive
        n = system.n_levels
        anh = system.anharmonicity
        # diagonal in the drive frame: (-Delta_ge, 0, Delta_ef, 2 Delta_ef - 2 Delta)
        static = np.array([-anh, 0.0, -anh, -4.0 * anh])[:n]
        chirp = np.array([1.0, 0.0, -1.0, -2.0])[:n]
        coupling = np.zeros((n, n))
        for k, ratio in enumerate(system.dipole_ratios()):
            coupling[k, k + 1] = coupling[k + 1, k] = 0.5 * ratio
        self.static = np.diag(static).astype(complex)
        self.chirp = np.diag(chirp).astype(complex)
        self.coupling = coupling.astype(complex)
        self._v = drive.chirp_rate
        self._offset = drive.offset
        self._scale = 2.0 / drive.duration
        self._n = drive.envelope_order
        self._kc = drive.envelope_cutoff
        self._amp = drive.omega_max

    def rabi(self, t: float) -> float:
        return self._amp * np.exp(self._kc * (self._scale * t) ** self._n)

    def __call__(self, t: float) -> np.ndarray:
        return (self.static
                + (self._offset - self._v * t) * self.chirp
                + self.rabi(t) * self.coupling)


def hamiltonian(t: float, drive: DriveSpec, system: SystemSpec) -> HamiltonianSample:
    """Rotating-wave Hamiltonian (divided by hbar) of the driven ladder at ``t``."""
    _check_window(t, drive)
    return HamiltonianSample(HamiltonianTerms(system, drive)(float(t)), float(t))


def stark_shift_terms(omega_sq, eps_gf, anharmonicity, ratio_ef_sq, ratio_fh_sq, include_h=True):
    """The three ac Stark contributions to the g-f transition frequency.

    Written with plain arithmetic so exact number types (``Fraction``)
    pass straight through.
    """
    poles = [anharmonicity - eps_gf, anharmonicity + eps_gf]
    if include_h:
        poles.append(3 * anharmonicity + eps_gf)
    if any(p == 0 for p in poles):
        raise StarkSingularity(f"Stark shift is singular at eps_gf={eps_gf!r}")
    ge = omega_sq / (4 * (anharmonicity - eps_gf))
    ef = -ratio_ef_sq * omega_sq / (4 * (anharmonicity + eps_gf))
    fh = ratio_fh_sq * omega_sq / (4 * (3 * anharmonicity + eps_gf)) if include_h else 0 * omega_sq
    return ge, ef, fh


def stark_shift(omega, eps_gf, system: SystemSpec) -> float:
    """Drive-induced shift of the g-f transition frequency.

    The f-h term is included only for four-level systems.  At
    ``eps_gf = 0`` with the transmon dipole ratios the three terms cancel.
    """
    anh = system.anharmonicity
    if abs(abs(eps_gf) - anh) < 1e-12 * anh or abs(3 * anh + eps_gf) < 1e-12 * anh:
        raise StarkSingularity(f"Stark shift is singular at eps_gf={eps_gf!r}")
    terms = stark_shift_terms(
        float(omega) ** 2, float(eps_gf), anh,
        system.dipole_ratio_ef ** 2, system.dipole_ratio_fh ** 2,
        include_h=system.n_levels == 4,
    )
    return float(sum(terms))


def two_photon_coupling(omega, system: SystemSpec):
    """Second-order g-f matrix element ``-Omega_ge Omega_ef / (4 Delta)``."""
    return -system.dipole_ratio_ef * np.square(omega) / (4.0 * system.anharmonicity)


def effective_hamiltonian(t: float, drive: DriveSpec, system: SystemSpec,
                          include_stark: bool = False) -> EffectiveHamiltonianSample:
    """Two-level {g, f} Hamiltonian obtained by eliminating |e>.

    ``sigma_z_coeff`` is half the f-g energy difference, ``-frame_detuning``,
    so it grows at the full chirp rate (twice the single-photon value).
    With ``include_stark`` the residual ac Stark shift of the truncated
    ladder is added, evaluated at the drive offset.
    """
    _check_window(t, drive)
    rabi = float(_envelope(t, drive))
    cz = -float(frame_detuning(t, drive))
    if include_stark:
        cz += 0.5 * stark_shift(rabi, float(drive_offset(t, drive)), system)
    return EffectiveHamiltonianSample(cz, float(two_photon_coupling(rabi, system)), float(t))
