"""Occupation-number-basis electronic Hamiltonians and exact diagonalization.

Everything here works directly on fermionic bitstrings with ladder-operator
sign rules — no Pauli algebra, no statevector machinery — so it serves as an
independent reference path for the Jordan-Wigner and simulator modules.

Bit j of a basis bitstring is the occupation of spin orbital j (interleaved:
mode 2p = orbital p up, mode 2p+1 = orbital p down).
"""

from __future__ import annotations

import numpy as np

from .integrals import MolecularIntegrals

SINGLET_TOL = 1e-8


def _apply_ops(bits: int, ops) -> tuple:
    """Apply (mode, dagger) ladder operators right-to-left to a bitstring.

    Returns (sign, bits) or (0, None) when the string annihilates the ket.
    """
    sign = 1
    for mode, dagger in reversed(ops):
        occupied = (bits >> mode) & 1
        if dagger and occupied:
            return 0, None
        if not dagger and not occupied:
            return 0, None
        if (bits & ((1 << mode) - 1)).bit_count() & 1:
            sign = -sign
        bits ^= 1 << mode
    return sign, bits


def sector_basis(n_modes: int, n_elec: int | None = None, twice_sz: int | None = None):
    """All bitstrings of n_modes modes, optionally filtered by particle number
    and 2*S_z (even modes are spin-up)."""
    even_mask = sum(1 << m for m in range(0, n_modes, 2))
    odd_mask = sum(1 << m for m in range(1, n_modes, 2))
    basis = []
    for bits in range(1 << n_modes):
        if n_elec is not None and bits.bit_count() != n_elec:
            continue
        if twice_sz is not None:
            sz2 = (bits & even_mask).bit_count() - (bits & odd_mask).bit_count()
            if sz2 != twice_sz:
                continue
        basis.append(bits)
    return basis


def _operator_matrix(basis, op_terms, n_modes):
    """Dense matrix of sum_k coeff_k * ladder-string_k on the given basis."""
    index = {bits: i for i, bits in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)))
    for coeff, ops in op_terms:
        for col, bits in enumerate(basis):
            sign, out = _apply_ops(bits, ops)
            if out is None:
                continue
            row = index.get(out)
            if row is None:
                continue  # leaves the sector
            mat[row, col] += coeff * sign
    return mat


def hamiltonian_terms(integrals: MolecularIntegrals):
    """Ladder-string expansion of the electronic Hamiltonian over spin orbitals."""
    n_orb = integrals.n_orb
    terms = []
    for p in range(n_orb):
        for q in range(n_orb):
            val = integrals.h[p, q]
            if abs(val) < 1e-14:
                continue
            for sigma in (0, 1):
                terms.append(
                    (val, [(2 * p + sigma, True), (2 * q + sigma, False)])
                )
    for p in range(n_orb):
        for q in range(n_orb):
            for r in range(n_orb):
                for s in range(n_orb):
                    val = integrals.g[p, q, r, s]
                    if abs(val) < 1e-14:
                        continue
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            mp, mq = 2 * p + sigma, 2 * q + tau
                            mr, ms = 2 * r + sigma, 2 * s + tau
                            if mp == mq or mr == ms:
                                continue
                            terms.append(
                                (
                                    0.5 * val,
                                    [(mp, True), (mq, True), (ms, False), (mr, False)],
                                )
                            )
    return terms


def hamiltonian_matrix(integrals: MolecularIntegrals, basis) -> np.ndarray:
    mat = _operator_matrix(basis, hamiltonian_terms(integrals), 2 * integrals.n_orb)
    return mat + integrals.core_energy * np.eye(len(basis))


def full_spectrum(integrals: MolecularIntegrals) -> np.ndarray:
    """All eigenvalues over the complete Fock space (every particle sector)."""
    basis = sector_basis(2 * integrals.n_orb)
    return np.linalg.eigvalsh(hamiltonian_matrix(integrals, basis))


def fci_ground_energy(integrals: MolecularIntegrals) -> float:
    """Lowest eigenvalue in the (n_elec, S_z = ms2/2) sector."""
    basis = sector_basis(2 * integrals.n_orb, integrals.n_elec, integrals.ms2)
    return float(np.linalg.eigvalsh(hamiltonian_matrix(integrals, basis))[0])


def s_squared_matrix(basis, n_orb: int) -> np.ndarray:
    """S^2 = S- S+ + S_z (S_z + 1) on the given basis."""
    n_modes = 2 * n_orb
    sp_terms = [(1.0, [(2 * p, True), (2 * p + 1, False)]) for p in range(n_orb)]
    sm_terms = [(1.0, [(2 * p + 1, True), (2 * p, False)]) for p in range(n_orb)]

    # S+ and S- leave a (N, Sz) sector, so build them on the full particle sector
    wide = sector_basis(n_modes, n_elec=basis[0].bit_count() if basis else None)
    sp = _operator_matrix(wide, sp_terms, n_modes)
    sm = _operator_matrix(wide, sm_terms, n_modes)
    smsp = sm @ sp

    even_mask = sum(1 << m for m in range(0, n_modes, 2))
    odd_mask = sum(1 << m for m in range(1, n_modes, 2))
    wide_index = {bits: i for i, bits in enumerate(wide)}
    rows = [wide_index[b] for b in basis]
    out = smsp[np.ix_(rows, rows)].copy()
    for i, bits in enumerate(basis):
        sz = 0.5 * ((bits & even_mask).bit_count() - (bits & odd_mask).bit_count())
        out[i, i] += sz * (sz + 1.0)
    return out


def singlet_eigenvalues(integrals: MolecularIntegrals, n_elec: int | None = None):
    """Eigenvalues of H restricted to the singlet (S^2 = 0) block of the
    (n_elec, S_z = 0) sector, ascending."""
    n_elec = integrals.n_elec if n_elec is None else n_elec
    basis = sector_basis(2 * integrals.n_orb, n_elec, 0)
    ham = hamiltonian_matrix(integrals, basis)
    s2 = s_squared_matrix(basis, integrals.n_orb)
    evals, evecs = np.linalg.eigh(s2)
    singlet = evecs[:, np.abs(evals) < SINGLET_TOL]
    projected = singlet.T @ ham @ singlet
    return np.linalg.eigvalsh(projected)


def ensemble_floor(integrals: MolecularIntegrals, weights=(0.5, 0.5)) -> float:
    """Weighted sum of the lowest singlet eigenvalues: the exact lower bound
    for any state-averaged ensemble of orthogonal singlet states."""
    evals = singlet_eigenvalues(integrals)
    return float(sum(w * evals[k] for k, w in enumerate(weights)))
