"""Classical state-averaged orbital optimization and the full macro-iteration.

The orbital rotation is parameterized by the independent entries of a real
antisymmetric matrix kappa; U = expm(-kappa) is orthogonal, and integrals
transform as h' = U^T h U with the matching four-index transform for g.
The ensemble energy over FIXED correlated-state RDMs is minimized over kappa
with BFGS on finite-difference gradients, then the macro loop alternates that
classical stage with a fresh SA-VQE stage until the state-averaged energy
change falls below the macro tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm

from . import local as local_mod
from .integrals import MolecularIntegrals
from .jw import jordan_wigner
from .savqe import OptimizerChoice, build_initial_states, run_sa_vqe, sa_energy
from .statevector import measure_rdms, rdm_energy
from .trace import SCOPE_MACRO, OptimizationTrace, TraceEvent

DEFAULT_MACRO_TOL = 1e-4
DEFAULT_MAX_MACRO_ITERS = 20
NO_WORSE_SLACK = 1e-12


def default_pairs(n_orb: int):
    return [(p, q) for p in range(n_orb) for q in range(p)]


@dataclass
class KappaMatrix:
    n_orb: int
    pairs: list
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.pairs),):
            raise ValueError("one value per rotation pair required")
        for p, q in self.pairs:
            if not 0 <= q < p < self.n_orb:
                raise ValueError("pairs must satisfy 0 <= q < p < n_orb")

    @classmethod
    def zero(cls, n_orb: int, pairs=None) -> "KappaMatrix":
        pairs = default_pairs(n_orb) if pairs is None else list(pairs)
        return cls(n_orb=n_orb, pairs=pairs, values=np.zeros(len(pairs)))

    @classmethod
    def from_values(cls, n_orb: int, values, pairs=None) -> "KappaMatrix":
        pairs = default_pairs(n_orb) if pairs is None else list(pairs)
        return cls(n_orb=n_orb, pairs=pairs, values=np.asarray(values, dtype=float))

    def full(self) -> np.ndarray:
        mat = np.zeros((self.n_orb, self.n_orb))
        for (p, q), val in zip(self.pairs, self.values):
            mat[p, q] = val
            mat[q, p] = -val
        return mat

    def rotation(self) -> np.ndarray:
        """U = expm(-kappa); orthogonal because kappa is antisymmetric."""
        return expm(-self.full())


def rotate_integrals(integrals: MolecularIntegrals, kappa: KappaMatrix) -> MolecularIntegrals:
    """Transform h and g into the rotated orbital basis; core energy unchanged."""
    if kappa.n_orb != integrals.n_orb:
        raise ValueError("rotation dimension does not match the integrals")
    u = kappa.rotation()
    h_rot = u.T @ integrals.h @ u
    # four successive single-index contractions, O(n^5)
    g_rot = integrals.g
    for axis in range(4):
        g_rot = np.tensordot(g_rot, u, axes=([0], [0]))
    # each tensordot consumes the leading axis and appends the new index,
    # so after four passes the index order is restored
    return replace(integrals, h=h_rot, g=g_rot)


def sa_oo_energy(kappa: KappaMatrix, base_integrals: MolecularIntegrals,
                 rdms_per_state, weights) -> float:
    """Ensemble energy of the FIXED correlated states under rotated integrals."""
    rotated = rotate_integrals(base_integrals, kappa)
    energies = [rdm_energy(rotated, rdms) for rdms in rdms_per_state]
    return float(sum(w * e for w, e in zip(weights, energies)))


@dataclass
class OOConfig:
    local: local_mod.LocalOptConfig = field(
        default_factory=lambda: local_mod.LocalOptConfig(max_iters=100)
    )
    pair_mask: list | None = None  # restrict rotations, e.g. for frozen cores


@dataclass
class OOResult:
    kappa: KappaMatrix
    integrals: MolecularIntegrals
    e_sa: float
    state_energies: tuple
    grad_norm: float
    line_search_failed: bool


def minimize_orbitals(base_integrals: MolecularIntegrals, rdms_per_state,
                      weights, oo_config: OOConfig | None = None) -> OOResult:
    """Minimize the contracted ensemble energy over the free kappa parameters.

    Guaranteed never to return an energy above the kappa = 0 value: a failed
    line search falls back to the identity rotation.
    """
    oo_config = oo_config or OOConfig()
    n_orb = base_integrals.n_orb
    pairs = default_pairs(n_orb) if oo_config.pair_mask is None else list(oo_config.pair_mask)

    def finish(kappa, e_sa, grad_norm, failed):
        rotated = rotate_integrals(base_integrals, kappa)
        energies = tuple(rdm_energy(rotated, rdms) for rdms in rdms_per_state)
        return OOResult(
            kappa=kappa,
            integrals=rotated,
            e_sa=e_sa,
            state_energies=energies,
            grad_norm=grad_norm,
            line_search_failed=failed,
        )

    zero = KappaMatrix.zero(n_orb, pairs)
    e_zero = sa_oo_energy(zero, base_integrals, rdms_per_state, weights)
    if not pairs:  # nothing to rotate (n_orb == 1 or masked out)
        return finish(zero, e_zero, 0.0, False)

    def objective(values):
        kappa = KappaMatrix.from_values(n_orb, values, pairs)
        return sa_oo_energy(kappa, base_integrals, rdms_per_state, weights)

    result = local_mod.bfgs_minimize(objective, np.zeros(len(pairs)), oo_config.local)
    grad_norm = float(
        np.linalg.norm(
            local_mod.fd_gradient(objective, result.x, oo_config.local.grad_step)
        )
    )
    failed = result.stop_reason == "line_search_failed"
    if result.fun > e_zero + NO_WORSE_SLACK or (failed and result.fun >= e_zero):
        return finish(zero, e_zero, grad_norm, failed)
    kappa = KappaMatrix.from_values(n_orb, result.x, pairs)
    return finish(kappa, result.fun, grad_norm, failed)


@dataclass
class MacroConfig:
    macro_tol: float = DEFAULT_MACRO_TOL
    max_macro_iters: int = DEFAULT_MAX_MACRO_ITERS


@dataclass
class MacroRecord:
    macro_index: int
    e_sa_vqe: float
    e_sa_oo: float
    cum_evals: int
    kappa_grad_norm: float


@dataclass
class SAOOVQEResult:
    e_sa: float
    state_energies: tuple  # lineage order
    theta: np.ndarray
    integrals: MolecularIntegrals
    macro_trace: list
    trace: OptimizationTrace
    evaluations: int
    macro_iterations: int
    converged: bool
    inner_failures: list  # (attempted macro index, message)

    @property
    def sorted_energies(self) -> tuple:
        return tuple(sorted(self.state_energies))


def _child_seed(base_seed: int, macro_index: int) -> int:
    return int(np.random.SeedSequence((base_seed, macro_index)).generate_state(1)[0])


def run_sa_oo_vqe(
    integrals: MolecularIntegrals,
    ansatz,
    weights=(0.5, 0.5),
    inner_optimizer: OptimizerChoice | None = None,
    oo_config: OOConfig | None = None,
    macro_config: MacroConfig | None = None,
) -> SAOOVQEResult:
    """Alternate SA-VQE and SA-OO stages until |delta E_SA| < macro_tol.

    Each VQE stage restarts from theta = 0 (the post-rotation energy spike is
    then visible in the per-step trace) but adopts the previous optimum when
    the fresh search fails to beat it, so the post-OO energy sequence is
    non-increasing for deterministic inner optimizers.
    """
    inner_optimizer = inner_optimizer or OptimizerChoice("bfgs")
    oo_config = oo_config or OOConfig()
    macro_config = macro_config or MacroConfig()

    trace = OptimizationTrace()
    macro_trace: list[MacroRecord] = []
    inner_failures: list = []
    current = integrals
    theta_prev = None
    evals = 0
    e_oo_prev = None
    converged = False
    consecutive_failures = 0
    final_energies = ()
    final_theta = np.zeros(ansatz.parameter_count)
    final_e_sa = np.nan

    for attempt in range(1, macro_config.max_macro_iters + 1):
        macro_index = len(macro_trace) + 1  # failed attempts are retried in place
        hamiltonian = jordan_wigner(current)
        initial_states = build_initial_states(current.n_orb, current.n_elec)
        stage_optimizer = inner_optimizer
        if inner_optimizer.kind == "de":
            stage_optimizer = OptimizerChoice(
                "de",
                de_config=replace(
                    inner_optimizer.de_config,
                    seed=_child_seed(inner_optimizer.de_config.seed, attempt),
                ),
                theta_bound=inner_optimizer.theta_bound,
            )
        try:
            vqe = run_sa_vqe(
                hamiltonian,
                ansatz,
                weights=weights,
                optimizer=stage_optimizer,
                initial_states=initial_states,
                trace=trace,
                macro_index=macro_index,
                eval_offset=evals,
            )
            evals += vqe.evaluations
            theta_star, e_vqe = vqe.theta, vqe.e_sa
            rdms = vqe.rdms
            if theta_prev is not None:
                e_prev, energies_prev, states_prev = sa_energy(
                    theta_prev, hamiltonian, ansatz, initial_states, weights
                )
                evals += 1
                if e_prev < e_vqe:
                    theta_star, e_vqe = theta_prev, e_prev
                    rdms = tuple(
                        measure_rdms(s, current.n_orb) for s in states_prev
                    )
            oo = minimize_orbitals(current, rdms, weights, oo_config)
        except Exception as exc:  # inner stage failed
            consecutive_failures += 1
            inner_failures.append((macro_index, str(exc)))
            if consecutive_failures >= 2:
                raise RuntimeError(
                    "two consecutive inner failures; aborting macro loop"
                ) from exc
            continue
        consecutive_failures = 0

        macro_trace.append(
            MacroRecord(
                macro_index=macro_index,
                e_sa_vqe=e_vqe,
                e_sa_oo=oo.e_sa,
                cum_evals=evals,
                kappa_grad_norm=oo.grad_norm,
            )
        )
        trace.append(
            TraceEvent(
                cum_evals=evals,
                scope=SCOPE_MACRO,
                macro_index=macro_index,
                e_sa=oo.e_sa,
                e_states=oo.state_energies,
            )
        )

        final_energies = oo.state_energies
        final_theta = theta_star
        final_e_sa = oo.e_sa
        current = oo.integrals
        theta_prev = theta_star

        if e_oo_prev is not None and abs(oo.e_sa - e_oo_prev) < macro_config.macro_tol:
            converged = True
            break
        e_oo_prev = oo.e_sa

    return SAOOVQEResult(
        e_sa=final_e_sa,
        state_energies=final_energies,
        theta=np.asarray(final_theta, dtype=float),
        integrals=current,
        macro_trace=macro_trace,
        trace=trace,
        evaluations=evals,
        macro_iterations=len(macro_trace),
        converged=converged,
        inner_failures=inner_failures,
    )
