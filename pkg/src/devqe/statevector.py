"""Dense statevector simulator for up to ~12 qubits.

Basis-state index bit j is the occupation of mode/qubit j (bit 0 least
significant).  All operations return new StateVector instances; amplitudes
are never mutated in place.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .pauli import QubitHamiltonian, string_to_masks

IMAG_TOLERANCE = 1e-10


@functools.lru_cache(maxsize=8)
def _index_array(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits, dtype=np.uint64)
    idx.setflags(write=False)
    return idx


class ShapeError(ValueError):
    """Qubit counts or vector lengths disagree."""


class ExpectationError(ValueError):
    """Expectation value kept an imaginary residue above tolerance."""


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ShapeError("amplitude vector length must be 2**n_qubits")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        if other.n_qubits != self.n_qubits:
            raise ShapeError("qubit counts differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


def basis_state(n_qubits: int, occupied_modes) -> StateVector:
    occupied = list(occupied_modes)
    if len(set(occupied)) != len(occupied):
        raise IndexError("occupied modes must be distinct")
    index = 0
    for mode in occupied:
        if not 0 <= mode < n_qubits:
            raise IndexError(f"mode {mode} outside [0, {n_qubits})")
        index |= 1 << mode
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def _parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values).astype(np.int64) & 1


def apply_pauli(state: StateVector, string: str) -> StateVector:
    """P|psi> for a letter string: one permute-and-phase pass."""
    if len(string) != state.n_qubits:
        raise ShapeError("Pauli string length must equal the qubit count")
    x_mask, z_mask = string_to_masks(string)
    n = state.amplitudes.size
    idx = _index_array(state.n_qubits)
    phase = (1j) ** ((x_mask & z_mask).bit_count() % 4)
    signs = 1.0 - 2.0 * _parity(idx & np.uint64(z_mask))
    out = np.empty(n, dtype=complex)
    out[idx ^ np.uint64(x_mask)] = phase * signs * state.amplitudes
    return StateVector(state.n_qubits, out)


def apply_pauli_rotation(state: StateVector, string: str, theta: float) -> StateVector:
    """exp(-i theta/2 P) |psi> = cos(theta/2)|psi> - i sin(theta/2) P|psi>."""
    rotated = apply_pauli(state, string)
    amps = (
        math.cos(theta / 2.0) * state.amplitudes
        - 1j * math.sin(theta / 2.0) * rotated.amplitudes
    )
    return StateVector(state.n_qubits, amps)


def apply_excitation(state: StateVector, excitation, theta: float) -> StateVector:
    """exp(theta (tau - tau^+)) |psi>, exact because the generator's Pauli
    words mutually commute: one rotation per word."""
    out = state
    for string, coeff in excitation.pauli_decomposition:
        if len(string) != state.n_qubits:
            raise ShapeError("excitation decomposition does not match the state")
        # generator contributes i*coeff*P, so exp(theta*i*coeff*P) = R_P(-2 theta coeff)
        out = apply_pauli_rotation(out, string, -2.0 * theta * coeff)
    return out


def _expectation_plan(hamiltonian: QubitHamiltonian):
    """Split terms into one combined diagonal vector plus the flipping terms.

    Cached on the Hamiltonian: every Z-only string contributes a sign pattern
    to a single length-2^N vector, so the diagonal part of the sum costs one
    pass regardless of how many such terms exist.
    """
    plan = getattr(hamiltonian, "_expectation_plan", None)
    if plan is None:
        n = 2**hamiltonian.n_qubits
        idx = _index_array(hamiltonian.n_qubits)
        diagonal = np.zeros(n)
        flipping = []
        for term in hamiltonian.terms:
            x_mask, z_mask = string_to_masks(term.string)
            if x_mask == 0:
                signs = 1.0 - 2.0 * _parity(idx & np.uint64(z_mask))
                diagonal += term.coefficient * signs
            else:
                flipping.append((term.coefficient, term.string))
        plan = (diagonal, flipping)
        hamiltonian._expectation_plan = plan
    return plan


def expectation(state: StateVector, hamiltonian: QubitHamiltonian) -> float:
    if hamiltonian.n_qubits != state.n_qubits:
        raise ShapeError("Hamiltonian and state qubit counts differ")
    diagonal, flipping = _expectation_plan(hamiltonian)
    total = complex(diagonal @ (state.amplitudes.real**2 + state.amplitudes.imag**2))
    for coefficient, string in flipping:
        total += coefficient * state.inner(apply_pauli(state, string))
    if abs(total.imag) > IMAG_TOLERANCE:
        raise ExpectationError(f"imaginary residue {total.imag:.3e} in expectation")
    return float(total.real)


def apply_annihilation(state: StateVector, mode: int) -> StateVector:
    """c_mode |psi> with the Jordan-Wigner sign (-1)^(occupied modes below)."""
    if not 0 <= mode < state.n_qubits:
        raise IndexError(f"mode {mode} outside [0, {state.n_qubits})")
    n = state.amplitudes.size
    bit = np.uint64(1 << mode)
    lower = np.uint64((1 << mode) - 1)
    idx = _index_array(state.n_qubits)
    occupied = (idx & bit) != 0
    src = idx[occupied]
    signs = 1.0 - 2.0 * _parity(src & lower)
    out = np.zeros(n, dtype=complex)
    out[src ^ bit] = signs * state.amplitudes[src]
    return StateVector(state.n_qubits, out)


def apply_creation(state: StateVector, mode: int) -> StateVector:
    """c_mode^dagger |psi>, zeroing components where the mode is occupied."""
    if not 0 <= mode < state.n_qubits:
        raise IndexError(f"mode {mode} outside [0, {state.n_qubits})")
    n = state.amplitudes.size
    bit = np.uint64(1 << mode)
    lower = np.uint64((1 << mode) - 1)
    idx = _index_array(state.n_qubits)
    empty = (idx & bit) == 0
    src = idx[empty]
    signs = 1.0 - 2.0 * _parity(src & lower)
    out = np.zeros(n, dtype=complex)
    out[src | bit] = signs * state.amplitudes[src]
    return StateVector(state.n_qubits, out)


@dataclass
class RDMPair:
    # D[p, q] = sum_sigma <c+_{p,sigma} c_{q,sigma}>
    one_rdm: np.ndarray
    # d[p, q, r, s] = sum_{sigma,tau} <c+_{p,sigma} c+_{q,tau} c_{s,tau} c_{r,sigma}>
    two_rdm: np.ndarray


def measure_rdms(state: StateVector, n_orb: int) -> RDMPair:
    """Spin-summed 1- and 2-RDMs by exact statevector inner products.

    The convention is fixed so rdm_energy(integrals, rdms) reproduces
    expectation(state, jordan_wigner(integrals)) exactly.
    """
    if state.n_qubits != 2 * n_orb:
        raise ShapeError("state must carry 2 * n_orb modes")
    n_modes = 2 * n_orb

    annihilated = [apply_annihilation(state, m) for m in range(n_modes)]

    rho = np.zeros((n_modes, n_modes), dtype=complex)
    for p_mode in range(n_modes):
        for q_mode in range(n_modes):
            if (p_mode ^ q_mode) & 1:
                continue  # spin-off-diagonal blocks vanish for S_z eigenstates
            rho[p_mode, q_mode] = annihilated[p_mode].inner(annihilated[q_mode])

    one = np.zeros((n_orb, n_orb))
    for p in range(n_orb):
        for q in range(n_orb):
            val = rho[2 * p, 2 * q] + rho[2 * p + 1, 2 * q + 1]
            one[p, q] = val.real

    # pair kets c_A c_B |psi> for A < B; antisymmetry covers the rest
    pair = {}
    for b_mode in range(n_modes):
        for a_mode in range(b_mode):
            pair[(a_mode, b_mode)] = apply_annihilation(annihilated[b_mode], a_mode)

    def pair_ket(a_mode, b_mode):
        if a_mode == b_mode:
            return None, 0.0
        if a_mode < b_mode:
            return pair[(a_mode, b_mode)], 1.0
        return pair[(b_mode, a_mode)], -1.0

    two = np.zeros((n_orb,) * 4)
    for p in range(n_orb):
        for q in range(n_orb):
            for r in range(n_orb):
                for s in range(n_orb):
                    total = 0.0 + 0.0j
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            bra, sb = pair_ket(2 * q + tau, 2 * p + sigma)
                            ket, sk = pair_ket(2 * s + tau, 2 * r + sigma)
                            if bra is None or ket is None:
                                continue
                            total += sb * sk * bra.inner(ket)
                    two[p, q, r, s] = total.real
    return RDMPair(one_rdm=one, two_rdm=two)


def rdm_energy(integrals, rdms: RDMPair) -> float:
    """Contract integrals with measured RDMs: the classical energy path."""
    if rdms.one_rdm.shape[0] != integrals.n_orb:
        raise ShapeError("RDM and integral dimensions differ")
    energy = integrals.core_energy
    energy += float(np.sum(integrals.h * rdms.one_rdm))
    energy += 0.5 * float(np.einsum("pqrs,pqrs->", integrals.g, rdms.two_rdm))
    return energy
