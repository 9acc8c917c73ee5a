"""From an FCIDUMP file to a qubit Hamiltonian.

Loads the H2/STO-3G fixture, maps it onto four qubits, and checks the Pauli-sum
spectrum against a direct occupation-basis diagonalization.
"""

import numpy as np

from devqe import hf_determinant_energy, jordan_wigner, load_fcidump
from devqe import fock
from devqe.pauli import hamiltonian_matrix

integrals = load_fcidump("fixtures/h2_sto3g.fcidump")
print(f"H2/STO-3G: {integrals.n_orb} orbitals, {integrals.n_elec} electrons")
print(f"nuclear repulsion: {integrals.core_energy:.8f} Ha")
print(f"Hartree-Fock determinant energy: {hf_determinant_energy(integrals):.8f} Ha")

qubit_ham = jordan_wigner(integrals)
print(f"\nqubit Hamiltonian on {qubit_ham.n_qubits} qubits, {len(qubit_ham)} Pauli terms:")
for term in qubit_ham.terms:
    print(f"  {term.coefficient:+.8f} * {term.string}")

spectrum = np.linalg.eigvalsh(hamiltonian_matrix(qubit_ham))
oracle = fock.full_spectrum(integrals)
print(f"\nfull 16-state spectrum matches the occupation-basis oracle to "
      f"{np.max(np.abs(spectrum - oracle)):.1e}")

sector = fock.singlet_eigenvalues(integrals)
print(f"lowest singlet states: {sector[0]:.8f}, {sector[1]:.8f} Ha")
print(f"correlation energy recovered by exact diagonalization: "
      f"{hf_determinant_energy(integrals) - sector[0]:.6f} Ha")
