"""Two-photon Landau-Zener-Stueckelberg-Majorana transfer in a driven transmon ladder."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, IntegrationError, StarkSingularity, UnsupportedRepresentation
from .model import (
    DriveSpec,
    EffectiveHamiltonianSample,
    HamiltonianSample,
    SystemSpec,
    detunings,
    drive_frequency,
    drive_offset,
    effective_hamiltonian,
    envelope,
    frame_detuning,
    hamiltonian,
    mhz,
    stark_shift,
    to_mhz,
)
from .propagate import (
    Engine,
    Trajectory,
    collapse_operators,
    evolve,
    evolve_effective,
    evolve_lindblad,
    evolve_schrodinger,
    thermal_occupation,
)
from .lzsm import Convention, fit_scaling, p_lzsm_single, p_lzsm_two_photon
from .spectra import branch_endpoint_characters, instantaneous_spectrum
from .majorana import StarPair, majorana_stars, stars_trajectory
from .sweep import SweepGrid, SweepResult, extract_contours, run_sweep, run_trajectory_batch
