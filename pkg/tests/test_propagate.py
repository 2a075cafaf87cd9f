from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants

from lzsm2ph.errors import DomainError, IntegrationError
from lzsm2ph.model import DriveSpec, SystemSpec, mhz
from lzsm2ph.propagate import (
    Engine,
    _solve,
    basis_state,
    collapse_operators,
    evolve,
    evolve_effective,
    evolve_lindblad,
    evolve_schrodinger,
    propagate_state,
    thermal_occupation,
)

SYSTEM = SystemSpec()
DRIVE = DriveSpec()
TOL = 1e-10


@pytest.fixture(scope="module")
def coherent():
    return evolve_schrodinger(SYSTEM, DRIVE, tol=TOL)


@pytest.fixture(scope="module")
def dissipative():
    return evolve_lindblad(SYSTEM, DRIVE, tol=TOL)


def _trajectory_invariants(tr):
    assert np.all(np.diff(tr.times) > 0)
    assert tr.populations.min() > -1e-6
    assert tr.populations.max() < 1 + 1e-6
    np.testing.assert_allclose(tr.populations.sum(axis=1), 1.0, atol=1e-6)


class TestSchrodinger:
    def test_sampling(self, coherent):
        assert coherent.times.shape == (401,)
        assert coherent.times[0] == -0.2 and coherent.times[-1] == 0.2
        assert coherent.states.shape == (401, 4)
        assert coherent.engine is Engine.SCHRODINGER
        _trajectory_invariants(coherent)

    def test_norm_conservation(self, coherent):
        norms = np.linalg.norm(coherent.states, axis=1)
        assert np.max(np.abs(norms - 1)) < 10 * TOL

    def test_reference_transfer(self, coherent):
        assert coherent.final[2] > 0.999
        assert coherent.p("e").max() < 0.0187 + 0.002

    def test_drive_off_is_phase_only(self):
        tr = evolve_schrodinger(SYSTEM, replace(DRIVE, omega_max=0.0), tol=TOL)
        np.testing.assert_allclose(tr.populations, np.tile([1, 0, 0, 0], (401, 1)), atol=1e-12)

    def test_negative_depth_keeps_e_lower(self, coherent):
        flipped = evolve_schrodinger(SYSTEM, replace(DRIVE, mod_depth=-DRIVE.mod_depth), tol=TOL)
        assert flipped.final[2] > 0.99
        assert flipped.p("e").max() > 2 * coherent.p("e").max()

    def test_self_convergence(self, coherent):
        finer = evolve_schrodinger(SYSTEM, DRIVE, n_samples=2, tol=TOL / 2)
        assert np.max(np.abs(finer.final - coherent.final)) < 1e-8

    def test_time_reversal(self):
        psi0 = basis_state("g", 4)
        mid = propagate_state(SYSTEM, DRIVE, psi0, -0.2, 0.2, tol=TOL)
        back = propagate_state(SYSTEM, DRIVE, mid, 0.2, -0.2, tol=TOL)
        assert np.max(np.abs(back - psi0)) < 100 * TOL

    def test_drive_values(self, coherent):
        wd, rabi = coherent.drive_values.T
        assert wd[200] == pytest.approx(0.5 * SYSTEM.omega_gf)
        assert rabi[200] == pytest.approx(DRIVE.omega_max)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            evolve_schrodinger(SYSTEM, DRIVE, psi0=[1, 1, 0, 0])
        with pytest.raises(DomainError):
            evolve_schrodinger(SYSTEM, DRIVE, psi0=[1, 0, 0])
        with pytest.raises(DomainError):
            evolve_schrodinger(SYSTEM, DRIVE, tol=0.0)

    @given(st.floats(0, 70), st.floats(-3, 3))
    @settings(max_examples=8, deadline=None)
    def test_norm_over_parameters(self, amp, off):
        drive = replace(DRIVE, omega_max=mhz(amp), offset=mhz(off))
        tr = evolve_schrodinger(SYSTEM, drive, n_samples=21, tol=1e-9)
        assert np.max(np.abs(np.linalg.norm(tr.states, axis=1) - 1)) < 1e-8
        _trajectory_invariants(tr)


def test_integration_failure_carries_last_time():
    with pytest.raises(IntegrationError) as info:
        _solve(lambda t, y: y ** 2, np.array([1.0]), 0.0, 2.0, None, 1e-8)
    assert info.value.t_last == pytest.approx(1.0, abs=1e-3)


class TestThermal:
    def test_zero_temperature(self):
        assert thermal_occupation(SYSTEM.omega_ge, 0.0) == 0.0

    def test_reference_occupation(self):
        x = constants.h * 7.24e9 / (constants.k * 0.073)
        assert x == pytest.approx(4.76, abs=0.01)
        assert thermal_occupation(SYSTEM.omega_ge, 0.073) == pytest.approx(0.0086, abs=1e-4)

    @given(st.floats(0.001, 1.0), st.floats(0.001, 1.0))
    def test_monotone_in_temperature(self, a, b):
        lo, hi = sorted((a, b))
        assert thermal_occupation(SYSTEM.omega_ge, lo) <= thermal_occupation(SYSTEM.omega_ge, hi)

    def test_domain(self):
        with pytest.raises(DomainError):
            thermal_occupation(1.0, -1.0)
        with pytest.raises(DomainError):
            thermal_occupation(0.0, 1.0)


class TestCollapseOperators:
    def test_ladder_rates_at_zero_temperature(self):
        ops = collapse_operators(replace(SYSTEM, temperature=0.0))
        assert not ops.raising()
        assert [d.rate for d in ops.lowering()] == pytest.approx([0.033, 0.066, 0.099])
        assert [d.transition for d in ops] == ["eg", "fe", "hf"]

    def test_truncation(self):
        ops = collapse_operators(SystemSpec(n_levels=3))
        assert len(ops.lowering()) == 2
        assert all(d.operator.shape == (3, 3) for d in ops)

    def test_adjacent_only_and_non_negative(self):
        for d in collapse_operators(SYSTEM):
            assert d.rate >= 0
            rows, cols = np.nonzero(d.operator)
            assert len(rows) == 1 and abs(rows[0] - cols[0]) == 1

    def test_detailed_balance(self):
        ops = collapse_operators(SYSTEM)
        freqs = SYSTEM.transition_frequencies()
        for k, (down, up) in enumerate(zip(ops.lowering(), ops.raising())):
            boltzmann = np.exp(-constants.hbar * freqs[k] * 1e6 / (constants.k * SYSTEM.temperature))
            assert up.rate / down.rate == pytest.approx(boltzmann, rel=1e-12)
            assert down.rate - up.rate == pytest.approx((k + 1) * SYSTEM.gamma_eg, rel=1e-12)


class TestLindblad:
    def test_reference_transfer(self, dissipative):
        assert 0.97 <= dissipative.final[2] <= 0.99
        assert not dissipative.warnings

    def test_density_matrix_invariants(self, dissipative):
        rhos = dissipative.states
        traces = np.real(np.einsum("tii->t", rhos))
        assert np.max(np.abs(traces - 1)) < 10 * TOL
        assert np.max(np.abs(rhos - np.conj(np.swapaxes(rhos, 1, 2)))) < 1e-10
        assert np.linalg.eigvalsh(rhos).min() > -1e-9
        assert not dissipative.is_pure
        _trajectory_invariants(dissipative)

    def test_free_decay_oracle(self):
        system = replace(SYSTEM, temperature=0.0)
        drive = replace(DRIVE, omega_max=0.0)
        tr = evolve_lindblad(system, drive, rho0=basis_state("e", 4), tol=TOL)
        expected = np.exp(-system.gamma_eg * (tr.times - tr.times[0]))
        np.testing.assert_allclose(tr.p("e"), expected, rtol=0, atol=1e-9)
        np.testing.assert_allclose(tr.p("g"), 1 - expected, rtol=0, atol=1e-9)

    def test_no_dissipation_reduces_to_unitary(self, coherent):
        system = replace(SYSTEM, gamma_eg=0.0, temperature=0.0)
        tr = evolve_lindblad(system, DRIVE, tol=TOL)
        assert np.max(np.abs(tr.populations - coherent.populations)) < 1e-6

    def test_rejects_invalid_rho(self):
        with pytest.raises(DomainError):
            evolve_lindblad(SYSTEM, DRIVE, rho0=np.eye(4))


class TestEffective:
    def test_embedding(self):
        tr = evolve_effective(SYSTEM, DRIVE, tol=TOL)
        assert tr.engine is Engine.EFFECTIVE
        assert np.all(tr.p("e") == 0) and np.all(tr.p("h") == 0)
        _trajectory_invariants(tr)

    def test_agrees_with_three_level_ladder(self):
        system = SystemSpec(n_levels=3)
        full = evolve_schrodinger(system, DRIVE, tol=TOL)
        eff = evolve_effective(system, DRIVE, tol=TOL)
        for lv in "gf":
            assert np.max(np.abs(full.p(lv) - eff.p(lv))) < 0.02

    def test_transfer_without_stark_term(self):
        tr = evolve_effective(SYSTEM, DRIVE, tol=TOL, include_stark=False)
        assert tr.final[2] > 0.99

    def test_accepts_two_component_state(self):
        tr = evolve_effective(SYSTEM, DRIVE, psi0=[0, 1], n_samples=3)
        assert tr.populations[0, 2] == pytest.approx(1.0)


def test_dispatch():
    for engine in Engine:
        tr = evolve(SystemSpec(n_levels=3), DRIVE, engine.value, n_samples=5, tol=1e-8)
        assert tr.engine is engine
        assert tr.populations.shape == (5, 3)
