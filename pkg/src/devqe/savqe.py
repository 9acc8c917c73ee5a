"""State-averaged VQE: one shared parameterized unitary applied to a pair of
orthogonal reference states, with the weighted ensemble energy minimized by a
pluggable classical optimizer (DE, gradient descent, or BFGS).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import de as de_mod
from . import local as local_mod
from .ansatz import AnsatzSpec, apply_ansatz
from .pauli import QubitHamiltonian
from .statevector import (
    StateVector,
    apply_annihilation,
    apply_creation,
    basis_state,
    expectation,
    measure_rdms,
)
from .trace import SCOPE_STEP, OptimizationTrace, TraceEvent

WEIGHT_TOL = 1e-12
DEFAULT_THETA_BOUND = math.pi


@dataclass
class EnsembleSpec:
    weights: tuple = (0.5, 0.5)

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x < 0 for x in w):
            raise ValueError("ensemble weights must be nonnegative")
        if abs(sum(w) - 1.0) > WEIGHT_TOL:
            raise ValueError("ensemble weights must sum to 1")
        self.weights = w

    @property
    def n_states(self) -> int:
        return len(self.weights)


@dataclass
class OptimizerChoice:
    """Inner minimizer selection: kind is "de", "gd" or "bfgs"."""

    kind: str
    de_config: de_mod.DEConfig | None = None
    local_config: local_mod.LocalOptConfig | None = None
    theta_bound: float = DEFAULT_THETA_BOUND  # DE box half-width

    def __post_init__(self):
        if self.kind not in ("de", "gd", "bfgs"):
            raise ValueError(f"unknown optimizer kind {self.kind!r}")
        if self.kind == "de" and self.de_config is None:
            self.de_config = de_mod.DEConfig()
        if self.kind in ("gd", "bfgs") and self.local_config is None:
            self.local_config = local_mod.LocalOptConfig()


@dataclass
class SAVQEResult:
    theta: np.ndarray
    e_sa: float
    state_energies: tuple  # lineage order: energy of U(theta)|Phi_k>
    final_states: tuple
    rdms: tuple
    trace: OptimizationTrace
    evaluations: int
    stop_reason: str

    @property
    def sorted_energies(self) -> tuple:
        """Ascending copy, guarding summaries against root flips."""
        return tuple(sorted(self.state_energies))


def build_initial_states(n_orb: int, n_elec: int):
    """Hartree-Fock determinant plus the normalized singlet HOMO->LUMO single."""
    if n_elec % 2:
        raise ValueError("only closed-shell references are supported")
    if n_orb <= n_elec // 2:
        raise ValueError("no virtual orbital available for the excited reference")
    n_qubits = 2 * n_orb
    homo = n_elec // 2 - 1
    lumo = n_elec // 2
    hf = basis_state(n_qubits, range(n_elec))

    def promote(occ_mode, virt_mode):
        return apply_creation(apply_annihilation(hf, occ_mode), virt_mode)

    up = promote(2 * homo, 2 * lumo)
    down = promote(2 * homo + 1, 2 * lumo + 1)
    amps = (up.amplitudes + down.amplitudes) / math.sqrt(2.0)
    excited = StateVector(n_qubits, amps)
    return hf, excited


def sa_energy(theta, hamiltonian: QubitHamiltonian, ansatz: AnsatzSpec,
              initial_states, weights):
    """Apply the shared unitary to every reference and average the energies.

    One call here counts as a single objective evaluation everywhere.
    """
    theta = np.asarray(theta, dtype=float)
    states = tuple(apply_ansatz(state, ansatz, theta) for state in initial_states)
    energies = tuple(expectation(state, hamiltonian) for state in states)
    e_sa = float(sum(w * e for w, e in zip(weights, energies)))
    return e_sa, energies, states


class _CountedObjective:
    """sa_energy wrapper: exact call counting plus a component cache so trace
    events can carry per-state energies without extra evaluations."""

    def __init__(self, hamiltonian, ansatz, initial_states, weights, offset=0):
        self.hamiltonian = hamiltonian
        self.ansatz = ansatz
        self.initial_states = initial_states
        self.weights = weights
        self.calls = 0
        self.offset = offset
        self._components = {}

    @property
    def cum_evals(self) -> int:
        return self.offset + self.calls

    def __call__(self, theta):
        self.calls += 1
        e_sa, energies, _ = sa_energy(
            theta, self.hamiltonian, self.ansatz, self.initial_states, self.weights
        )
        self._components[np.asarray(theta, dtype=float).tobytes()] = (e_sa, energies)
        return e_sa

    def components(self, theta):
        key = np.asarray(theta, dtype=float).tobytes()
        if key in self._components:
            return self._components[key]
        # cache miss: a genuine sa_energy invocation, so it is counted
        e_sa = self(theta)
        return e_sa, self._components[key][1]


def run_sa_vqe(
    hamiltonian: QubitHamiltonian,
    ansatz: AnsatzSpec,
    weights=(0.5, 0.5),
    optimizer: OptimizerChoice | None = None,
    theta0=None,
    initial_states=None,
    n_orb: int | None = None,
    n_elec: int | None = None,
    trace: OptimizationTrace | None = None,
    macro_index: int = 0,
    eval_offset: int = 0,
) -> SAVQEResult:
    """Minimize the ensemble energy over the circuit parameters.

    The trace receives one optimizer_step event for the starting point and one
    after every internal optimizer step (for DE: every generation), each at
    exact cumulative-evaluation coordinates.
    """
    optimizer = optimizer or OptimizerChoice("bfgs")
    weights = EnsembleSpec(weights).weights
    if initial_states is None:
        if n_orb is None or n_elec is None:
            raise ValueError("provide initial_states or (n_orb, n_elec)")
        initial_states = build_initial_states(n_orb, n_elec)
    trace = OptimizationTrace() if trace is None else trace

    dim = ansatz.parameter_count
    theta0 = np.zeros(dim) if theta0 is None else np.asarray(theta0, dtype=float)
    objective = _CountedObjective(
        hamiltonian, ansatz, initial_states, weights, offset=eval_offset
    )

    def record(theta, e_sa=None):
        if e_sa is None:
            e_sa, energies = objective.components(theta)
        else:
            energies = objective.components(theta)[1]
        trace.append(
            TraceEvent(
                cum_evals=objective.cum_evals,
                scope=SCOPE_STEP,
                macro_index=macro_index,
                e_sa=e_sa,
                e_states=tuple(energies),
            )
        )

    if optimizer.kind == "de":
        bound = optimizer.theta_bound
        bounds = de_mod.Bounds.box(-bound, bound, dim)

        result = _run_de(objective, bounds, optimizer.de_config, trace, macro_index)
        theta_star = result.best_vector
        stop_reason = result.stop_reason
    elif optimizer.kind in ("gd", "bfgs"):
        def callback(x, fx, _evals, *_extra):
            record(x, fx)

        if optimizer.kind == "gd":
            result = local_mod.gradient_descent(
                objective, theta0, optimizer.local_config, callback=callback
            )
        else:
            result = local_mod.bfgs_minimize(
                objective, theta0, optimizer.local_config, callback=callback
            )
        theta_star = result.x
        stop_reason = result.stop_reason
    else:  # pragma: no cover - guarded by OptimizerChoice
        raise ValueError(optimizer.kind)

    # final state reconstruction is one more genuine sa_energy invocation
    objective.calls += 1
    e_sa, energies, states = sa_energy(
        theta_star, hamiltonian, ansatz, initial_states, weights
    )
    n_orb_eff = hamiltonian.n_qubits // 2
    rdms = tuple(measure_rdms(state, n_orb_eff) for state in states)
    return SAVQEResult(
        theta=np.asarray(theta_star, dtype=float),
        e_sa=e_sa,
        state_energies=energies,
        final_states=states,
        rdms=rdms,
        trace=trace,
        evaluations=objective.calls,
        stop_reason=stop_reason,
    )


def _run_de(objective, bounds, config, trace, macro_index):
    """DE drive recording one event per generation in the shared trace."""

    def on_generation(pop, _cum_evals):
        best = pop.members[pop.best_index()]
        e_sa, energies = objective.components(best)
        trace.append(
            TraceEvent(
                cum_evals=objective.cum_evals,
                scope=SCOPE_STEP,
                macro_index=macro_index,
                e_sa=e_sa,
                e_states=tuple(energies),
            )
        )

    return de_mod.de_minimize(objective, bounds, config, callback=on_generation)
