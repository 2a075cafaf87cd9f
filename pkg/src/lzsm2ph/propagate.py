"""Schrodinger, Lindblad and effective two-level propagation over the pulse."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError
from .model import (
    DriveSpec,
    HamiltonianTerms,
    SystemSpec,
    _envelope,
    effective_hamiltonian,
)

DEFAULT_TOL = 1e-10
DEFAULT_SAMPLES = 401
_METHOD = "DOP853"
# the integrator's per-step control runs tighter than the requested
# tolerance so the accumulated norm drift stays below 10 * tol
_SAFETY = 0.1


class Engine(str, enum.Enum):
    SCHRODINGER = "schrodinger"
    LINDBLAD = "lindblad"
    EFFECTIVE = "effective"


@dataclass
class Trajectory:
    """Time-ordered samples of one propagation.

    ``populations`` has one row per time and one column per ladder level
    (the effective engine leaves |e> and |h> at zero).  ``states`` holds
    state vectors (shape ``(n_t, N)``) or density matrices
    (``(n_t, N, N)``).  ``drive_values`` columns are the drive frequency
    and the Rabi amplitude, both in rad/us.
    """

    times: np.ndarray
    populations: np.ndarray
    states: np.ndarray | None
    drive_values: np.ndarray
    engine: Engine
    warnings: list = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.populations[-1]

    @property
    def is_pure(self) -> bool:
        return self.states is not None and self.states.ndim == 2

    def p(self, level: str) -> np.ndarray:
        return self.populations[:, "gefh".index(level)]


@dataclass(frozen=True)
class Dissipator:
    operator: np.ndarray  # bare ladder operator |lower><upper| or its adjoint
    rate: float
    transition: str
    kind: str  # "lower" or "raise"


@dataclass(frozen=True)
class DissipatorSet:
    items: tuple

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def lowering(self):
        return [d for d in self.items if d.kind == "lower"]

    def raising(self):
        return [d for d in self.items if d.kind == "raise"]


def basis_state(level, n_levels: int) -> np.ndarray:
    idx = "gefh".index(level) if isinstance(level, str) else int(level)
    psi = np.zeros(n_levels, dtype=complex)
    psi[idx] = 1.0
    return psi


def thermal_occupation(frequency: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at ``frequency`` (rad/us)."""
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    if temperature == 0:
        return 0.0
    x = constants.hbar * frequency * 1e6 / (constants.k * temperature)
    return float(1.0 / np.expm1(x))


def collapse_operators(system: SystemSpec) -> DissipatorSet:
    """Decay along the ladder with rates Gamma, 2 Gamma, 3 Gamma plus thermal partners."""
    n = system.n_levels
    names = ("eg", "fe", "hf")
    items = []
    for k, freq in enumerate(system.transition_frequencies()):
        lower = np.zeros((n, n), dtype=complex)
        lower[k, k + 1] = 1.0
        gamma = (k + 1) * system.gamma_eg
        nbar = thermal_occupation(freq, system.temperature)
        items.append(Dissipator(lower, (nbar + 1.0) * gamma, names[k], "lower"))
        if nbar * gamma > 0:
            items.append(Dissipator(lower.T.copy(), nbar * gamma, names[k], "raise"))
    return DissipatorSet(tuple(items))


def _solve(rhs, y0, t0, t1, t_eval, tol):
    sol = solve_ivp(rhs, (t0, t1), y0, method=_METHOD, t_eval=t_eval,
                    rtol=_SAFETY * tol, atol=_SAFETY * tol * 1e-2)
    if sol.status != 0:
        t_last = float(sol.t[-1]) if sol.t.size else t0
        raise IntegrationError(f"integration stopped at t={t_last:.6g} us: {sol.message}", t_last)
    return sol


def _check_tol(tol):
    if not tol > 0:
        raise DomainError("tol must be positive")


def _drive_values(times, system, drive):
    wd = 0.5 * system.omega_gf - 0.5 * drive.chirp_rate * times + drive.offset
    return np.column_stack([wd, _envelope(times, drive)])


def _normalised(psi, n):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != n:
        raise DomainError(f"state has dimension {psi.size}, system has {n} levels")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"initial state is not normalised (norm={norm})")
    return psi


def propagate_state(system: SystemSpec, drive: DriveSpec, psi, t0: float, t1: float,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unitary propagation of ``psi`` from ``t0`` to ``t1`` (either direction)."""
    _check_tol(tol)
    terms = HamiltonianTerms(system, drive)
    psi = _normalised(psi, system.n_levels)
    sol = _solve(lambda t, y: -1j * (terms(t) @ y), psi, t0, t1, None, tol)
    return sol.y[:, -1]


def evolve_schrodinger(system: SystemSpec, drive: DriveSpec, psi0=None,
                       n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> Trajectory:
    """Solve ``i dpsi/dt = H(t) psi`` across the pulse window."""
    _check_tol(tol)
    psi0 = basis_state("g", system.n_levels) if psi0 is None else _normalised(psi0, system.n_levels)
    terms = HamiltonianTerms(system, drive)
    times = drive.sample_times(n_samples)
    sol = _solve(lambda t, y: -1j * (terms(t) @ y), psi0, times[0], times[-1], times, tol)
    states = sol.y.T
    return Trajectory(times, np.abs(states) ** 2, states,
                      _drive_values(times, system, drive), Engine.SCHRODINGER)


def evolve_effective(system: SystemSpec, drive: DriveSpec, psi0=None,
                     n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                     include_stark: bool = True) -> Trajectory:
    """Propagate the two-level {g, f} model and embed it in the full ladder.

    ``psi0`` may be a 2-vector over (g, f) or a full ladder state whose
    |e>/|h> amplitudes are dropped.
    """
    _check_tol(tol)
    n = system.n_levels
    if psi0 is None:
        amp = np.array([1.0, 0.0], dtype=complex)
    else:
        psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
        amp = psi0 if psi0.size == 2 else psi0[[0, 2]]
        amp = _normalised(amp, 2)
    times = drive.sample_times(n_samples)

    def rhs(t, y):
        return -1j * (effective_hamiltonian(t, drive, system, include_stark).matrix @ y)

    sol = _solve(rhs, amp, times[0], times[-1], times, tol)
    states = np.zeros((n_samples, n), dtype=complex)
    states[:, 0] = sol.y[0]
    states[:, 2] = sol.y[1]
    return Trajectory(times, np.abs(states) ** 2, states,
                      _drive_values(times, system, drive), Engine.EFFECTIVE)


def lindblad_rhs(terms: HamiltonianTerms, dissipators: DissipatorSet):
    """Right-hand side ``drho/dt`` on the flattened density matrix."""
    n = terms.system.n_levels
    jumps = [np.sqrt(d.rate) * d.operator for d in dissipators if d.rate > 0]
    jumps_dag = [j.conj().T for j in jumps]
    anti = sum((jd @ j for j, jd in zip(jumps, jumps_dag)), np.zeros((n, n), dtype=complex))

    def rhs(t, y):
        rho = y.reshape(n, n)
        h = terms(t)
        drho = -1j * (h @ rho - rho @ h) - 0.5 * (anti @ rho + rho @ anti)
        for j, jd in zip(jumps, jumps_dag):
            drho += j @ rho @ jd
        return drho.reshape(-1)

    return rhs


def evolve_lindblad(system: SystemSpec, drive: DriveSpec, rho0=None,
                    n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                    dissipators: DissipatorSet | None = None) -> Trajectory:
    """Master-equation propagation with ladder decay and thermal excitation.

    Samples are symmetrised to remove round-off anti-Hermitian parts; a
    negative eigenvalue below -1e-6 adds an entry to ``warnings``.
    """
    _check_tol(tol)
    n = system.n_levels
    if rho0 is None:
        rho0 = np.zeros((n, n), dtype=complex)
        rho0[0, 0] = 1.0
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim == 1:
        psi = _normalised(rho0, n)
        rho0 = np.outer(psi, psi.conj())
    if rho0.shape != (n, n):
        raise DomainError(f"density matrix must be {n}x{n}")
    if abs(np.trace(rho0) - 1.0) > 1e-9 or np.max(np.abs(rho0 - rho0.conj().T)) > 1e-10:
        raise DomainError("rho0 must be Hermitian with unit trace")
    if dissipators is None:
        dissipators = collapse_operators(system)
    terms = HamiltonianTerms(system, drive)
    times = drive.sample_times(n_samples)
    sol = _solve(lindblad_rhs(terms, dissipators), rho0.reshape(-1),
                 times[0], times[-1], times, tol)
    rhos = sol.y.T.reshape(n_samples, n, n)
    rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, 1, 2)))
    warnings = []
    lowest = np.linalg.eigvalsh(rhos).min(axis=1)
    bad = np.flatnonzero(lowest < -1e-6)
    if bad.size:
        warnings.append(f"positivity violated at {bad.size} samples "
                        f"(min eigenvalue {lowest.min():.3g})")
    pops = np.real(np.einsum("tii->ti", rhos))
    return Trajectory(times, pops, rhos, _drive_values(times, system, drive),
                      Engine.LINDBLAD, warnings)


def evolve(system: SystemSpec, drive: DriveSpec, engine=Engine.SCHRODINGER,
           n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> Trajectory:
    """Run one engine from the ground state."""
    engine = Engine(engine)
    if engine is Engine.SCHRODINGER:
        return evolve_schrodinger(system, drive, n_samples=n_samples, tol=tol)
    if engine is Engine.LINDBLAD:
        return evolve_lindblad(system, drive, n_samples=n_samples, tol=tol)
    return evolve_effective(system, drive, n_samples=n_samples, tol=tol)
