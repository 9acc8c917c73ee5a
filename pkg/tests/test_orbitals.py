"""Orbital rotation, contracted ensemble energy, and the macro loop."""

import numpy as np
import pytest

from devqe import fock
from devqe.ansatz import default_ansatz
from devqe.de import DEConfig, TerminationCriteria
from devqe.integrals import MolecularIntegrals
from devqe.jw import jordan_wigner
from devqe.local import fd_gradient
from devqe.orbitals import (
    KappaMatrix,
    MacroConfig,
    OOConfig,
    minimize_orbitals,
    rotate_integrals,
    run_sa_oo_vqe,
    sa_oo_energy,
)
from devqe.savqe import OptimizerChoice, build_initial_states, run_sa_vqe, sa_energy
from devqe.statevector import measure_rdms, rdm_energy
from devqe.trace import SCOPE_MACRO, SCOPE_STEP


def hf_rdms(n_orb, n_elec):
    from devqe.statevector import basis_state

    return measure_rdms(basis_state(2 * n_orb, range(n_elec)), n_orb)


class TestKappa:
    def test_zero_rotation_is_identity(self, h2_integrals):
        kappa = KappaMatrix.zero(2)
        rotated = rotate_integrals(h2_integrals, kappa)
        assert np.allclose(rotated.h, h2_integrals.h)
        assert np.allclose(rotated.g, h2_integrals.g)
        assert rotated.core_energy == h2_integrals.core_energy

    def test_rotation_orthogonal_for_random_kappa(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            kappa = KappaMatrix.from_values(4, rng.uniform(-0.5, 0.5, 6))
            u = kappa.rotation()
            assert np.max(np.abs(u.T @ u - np.eye(4))) < 1e-12

    def test_full_matrix_antisymmetric(self):
        kappa = KappaMatrix.from_values(3, [0.1, -0.2, 0.3])
        full = kappa.full()
        assert np.max(np.abs(full + full.T)) == 0.0

    def test_fci_invariant_under_rotation(self, h2_integrals):
        rng = np.random.default_rng(1)
        reference = fock.fci_ground_energy(h2_integrals)
        for _ in range(20):
            kappa = KappaMatrix.from_values(2, rng.uniform(-0.5, 0.5, 1))
            rotated = rotate_integrals(h2_integrals, kappa)
            assert abs(fock.fci_ground_energy(rotated) - reference) < 1e-8


class TestSaOoEnergy:
    def test_kappa_zero_matches_statevector_path(self, h2_integrals):
        ham = jordan_wigner(h2_integrals)
        ansatz = default_ansatz(2, 2)
        states = build_initial_states(2, 2)
        theta = np.array([0.15, -0.3])
        e_ref, _, evolved = sa_energy(theta, ham, ansatz, states, (0.5, 0.5))
        rdms = tuple(measure_rdms(s, 2) for s in evolved)
        e_oo = sa_oo_energy(KappaMatrix.zero(2), h2_integrals, rdms, (0.5, 0.5))
        assert abs(e_oo - e_ref) < 1e-10

    def test_degenerate_weights_reduce_to_state_zero(self, h2_integrals):
        rdms = (hf_rdms(2, 2), hf_rdms(2, 2))
        e_oo = sa_oo_energy(KappaMatrix.zero(2), h2_integrals, rdms, (1.0, 0.0))
        assert abs(e_oo - rdm_energy(h2_integrals, rdms[0])) < 1e-12

    def test_smooth_at_zero(self, h2_integrals):
        rdms = (hf_rdms(2, 2), hf_rdms(2, 2))

        def objective(values):
            kappa = KappaMatrix.from_values(2, values)
            return sa_oo_energy(kappa, h2_integrals, rdms, (0.5, 0.5))

        grad = fd_gradient(objective, np.zeros(1), 1e-6)
        t = 1e-5
        secant = (objective(np.array([t])) - objective(np.array([-t]))) / (2 * t)
        assert abs(grad[0] - secant) < 1e-6


class TestMinimizeOrbitals:
    def test_exact_state_rdms_leave_no_room(self, h2_integrals):
        # FCI-quality ensemble states: the variational floor blocks improvement
        ham = jordan_wigner(h2_integrals)
        ansatz = default_ansatz(2, 2)
        vqe = run_sa_vqe(
            ham, ansatz, optimizer=OptimizerChoice("bfgs"), n_orb=2, n_elec=2
        )
        floor = fock.ensemble_floor(h2_integrals)
        result = minimize_orbitals(h2_integrals, vqe.rdms, (0.5, 0.5))
        assert result.e_sa >= floor - 1e-10
        assert result.e_sa <= vqe.e_sa + 1e-12

    def test_single_orbital_identity(self):
        ints = MolecularIntegrals(
            n_orb=1, n_elec=2, core_energy=0.1,
            h=np.array([[-1.0]]), g=np.full((1, 1, 1, 1), 0.5),
        )
        rdms = (hf_rdms(1, 2), hf_rdms(1, 2))
        result = minimize_orbitals(ints, rdms, (0.5, 0.5))
        assert result.kappa.values.size == 0
        assert np.allclose(result.integrals.h, ints.h)

    def test_two_orbital_toy_matches_grid_scan(self):
        # diagonal-dominant one-electron matrix, small repulsion, HF-only RDMs:
        # the 1-parameter minimizer must match a dense grid scan over kappa
        h = np.array([[-1.0, 0.35], [0.35, -0.2]])
        g = np.zeros((2,) * 4)
        g[0, 0, 0, 0] = 0.2  # physicist <00|00>
        ints = MolecularIntegrals(n_orb=2, n_elec=2, core_energy=0.0, h=h, g=g)
        rdms = (hf_rdms(2, 2), hf_rdms(2, 2))
        weights = (0.5, 0.5)

        grid = np.linspace(-np.pi, np.pi, 20001)
        energies = [
            sa_oo_energy(KappaMatrix.from_values(2, [k]), ints, rdms, weights)
            for k in grid
        ]
        grid_min = min(energies)

        result = minimize_orbitals(ints, rdms, weights)
        assert result.e_sa <= grid_min + 1e-6
        assert abs(result.e_sa - grid_min) < 1e-6

    def test_never_worse_than_identity(self, h2_integrals):
        rdms = (hf_rdms(2, 2), hf_rdms(2, 2))
        e_zero = sa_oo_energy(KappaMatrix.zero(2), h2_integrals, rdms, (0.5, 0.5))
        result = minimize_orbitals(h2_integrals, rdms, (0.5, 0.5))
        assert result.e_sa <= e_zero + 1e-12

    def test_pair_mask_restricts_parameters(self, h4_integrals):
        rdms = (hf_rdms(4, 4), hf_rdms(4, 4))
        config = OOConfig(pair_mask=[(2, 1)])
        result = minimize_orbitals(h4_integrals, rdms, (0.5, 0.5), config)
        assert result.kappa.values.size == 1
        assert result.kappa.pairs == [(2, 1)]


class TestMacroLoop:
    def test_disabled_oo_matches_plain_savqe(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        macro = MacroConfig(max_macro_iters=1)
        config = OOConfig(pair_mask=[])  # kappa forced to zero
        result = run_sa_oo_vqe(
            h2_integrals,
            ansatz,
            inner_optimizer=OptimizerChoice("bfgs"),
            oo_config=config,
            macro_config=macro,
        )
        ham = jordan_wigner(h2_integrals)
        plain = run_sa_vqe(
            ham, ansatz, optimizer=OptimizerChoice("bfgs"), n_orb=2, n_elec=2
        )
        assert abs(result.e_sa - plain.e_sa) < 1e-12
        assert result.evaluations == plain.evaluations
        step_events = result.trace.filter(SCOPE_STEP)
        plain_events = plain.trace.filter(SCOPE_STEP)
        assert [e.e_sa for e in step_events] == [e.e_sa for e in plain_events]

    def test_h2_macro_converges_quickly(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        result = run_sa_oo_vqe(
            h2_integrals, ansatz, inner_optimizer=OptimizerChoice("bfgs")
        )
        assert result.converged
        assert result.macro_iterations <= 10
        oo_series = [rec.e_sa_oo for rec in result.macro_trace]
        assert all(b <= a + 1e-10 for a, b in zip(oo_series, oo_series[1:]))
        assert abs(oo_series[-1] - oo_series[-2]) < 1e-4

    def test_final_not_above_first_iteration(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        result = run_sa_oo_vqe(
            h2_integrals, ansatz, inner_optimizer=OptimizerChoice("bfgs")
        )
        assert result.e_sa <= result.macro_trace[0].e_sa_oo + 1e-10

    def test_macro_events_increment(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        result = run_sa_oo_vqe(
            h2_integrals, ansatz, inner_optimizer=OptimizerChoice("bfgs")
        )
        macro_events = result.trace.filter(SCOPE_MACRO)
        assert [e.macro_index for e in macro_events] == list(
            range(1, len(macro_events) + 1)
        )
        cums = [e.cum_evals for e in result.trace.events]
        assert cums == sorted(cums)
        macro_cums = [rec.cum_evals for rec in result.macro_trace]
        assert all(b > a for a, b in zip(macro_cums, macro_cums[1:]))

    def test_rotation_dimension_mismatch(self, h2_integrals):
        with pytest.raises(ValueError):
            rotate_integrals(h2_integrals, KappaMatrix.zero(3))

    def test_h4_orbital_stage_strictly_improves(self, h4_integrals):
        # the pair-restricted ansatz cannot absorb an orbital rotation on H4,
        # so the classical stage must make measurable progress of its own
        ansatz = default_ansatz(4, 4)
        result = run_sa_oo_vqe(
            h4_integrals,
            ansatz,
            inner_optimizer=OptimizerChoice("bfgs"),
            macro_config=MacroConfig(max_macro_iters=12),
        )
        assert result.converged
        first = result.macro_trace[0]
        assert first.e_sa_oo < first.e_sa_vqe - 1e-7
        for rec in result.macro_trace:
            assert rec.e_sa_oo <= rec.e_sa_vqe + 1e-12
        floor = fock.ensemble_floor(h4_integrals)
        assert result.e_sa >= floor - 1e-10

    def test_de_inner_runs_and_stays_above_floor(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        choice = OptimizerChoice(
            "de",
            de_config=DEConfig(
                np_size=12,
                seed=0,
                termination=TerminationCriteria(
                    max_evals=600, abs_tol=(1e-8, 8)
                ),
            ),
        )
        result = run_sa_oo_vqe(
            h2_integrals,
            ansatz,
            inner_optimizer=choice,
            macro_config=MacroConfig(max_macro_iters=4),
        )
        floor = fock.ensemble_floor(h2_integrals)
        assert result.e_sa >= floor - 1e-10
        # best-so-far within each VQE stage is monotone
        for macro_index in {e.macro_index for e in result.trace.filter(SCOPE_STEP)}:
            stage = [
                e.e_sa
                for e in result.trace.filter(SCOPE_STEP)
                if e.macro_index == macro_index
            ]
            assert all(b <= a + 1e-12 for a, b in zip(stage, stage[1:]))

    def test_inner_failure_aborts_after_two(self, h2_integrals):
        ansatz = default_ansatz(2, 2)
        # force failures by pointing DE at an impossible population size
        choice = OptimizerChoice(
            "de",
            de_config=DEConfig(
                np_size=4,
                strategy="rand2",  # needs 5 distinct indices, population too small
                termination=TerminationCriteria(max_generations=3),
            ),
        )
        with pytest.raises(RuntimeError):
            run_sa_oo_vqe(h2_integrals, ansatz, inner_optimizer=choice)

    def test_single_transient_failure_recovers(self, h2_integrals, monkeypatch):
        import devqe.orbitals as orbitals_mod

        real_run = orbitals_mod.run_sa_vqe
        state = {"calls": 0}

        def flaky(*args, **kwargs):
            state["calls"] += 1
            if state["calls"] == 1:
                raise RuntimeError("transient glitch")
            return real_run(*args, **kwargs)

        monkeypatch.setattr(orbitals_mod, "run_sa_vqe", flaky)
        ansatz = default_ansatz(2, 2)
        result = run_sa_oo_vqe(
            h2_integrals, ansatz, inner_optimizer=OptimizerChoice("bfgs")
        )
        assert result.converged
        assert result.inner_failures == [(1, "transient glitch")]
        macro_events = result.trace.filter(SCOPE_MACRO)
        assert [e.macro_index for e in macro_events] == list(
            range(1, len(macro_events) + 1)
        )
