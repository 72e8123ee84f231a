"""Brute-force dense references.

Everything here works on explicit matrices: exact diagonalization in a
fixed particle-number sector, dense fermionic operator construction from
ladder-operator action (independent of the Jordan-Wigner/circuit path),
and unitary coupled-cluster energies evaluated with exact or n-step
Trotterized matrix exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fermion import ANNIHILATE, CREATE, build_ph_hamiltonian
from .vqe import VqeConfig, bfgs_minimize

__all__ = [
    "DenseOperator",
    "operator_to_matrix",
    "fermion_to_matrix",
    "sector_indices",
    "ground_energy_in_sector",
    "expm_antihermitian",
    "uccsd_analytic_energy",
]

MAX_QUBITS = 14


@dataclass
class DenseOperator:
    """Explicit 2^n x 2^n matrix of an operator."""

    dimension: int
    matrix: np.ndarray

    def hermiticity_defect(self):
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def _guard(n_qubits):
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"{n_qubits} qubits exceeds the dense guard of {MAX_QUBITS}")


def operator_to_matrix(op):
    """Dense matrix of a QubitOperator, sum of Kronecker products."""
    _guard(op.n_qubits)
    dim = 1 << op.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    for ps, c in op.terms.items():
        xmask, yzmask, n_y = ps.masks()
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & yzmask) & 1)
        phase = (1j ** (n_y % 4)) * signs
        m[idx ^ xmask, idx] += c * phase
    return DenseOperator(dim, m)


def _word_action(word, n_modes):
    """Vectorized action of a ladder word on every basis state.

    Returns (target_index, amplitude) arrays: word|J> = amp[J] |target[J]>,
    with amp[J] = 0 where the word annihilates the state.  Fermionic signs
    count occupations above the acted mode, matching the Jordan-Wigner
    parity convention.
    """
    dim = 1 << n_modes
    idx = np.arange(dim)
    amp = np.ones(dim, dtype=complex)
    cur = idx.copy()
    for mode, kind in reversed(word):
        bit = (cur >> mode) & 1
        alive = bit == (1 if kind == ANNIHILATE else 0)
        sign = 1.0 - 2.0 * (np.bitwise_count(cur >> (mode + 1)) & 1)
        amp = np.where(alive, amp * sign, 0.0)
        cur = np.where(alive, cur ^ (1 << mode), cur)
    return cur, amp


def fermion_to_matrix(op, n_modes):
    """Dense matrix of a FermionOperator from ladder-operator action."""
    _guard(n_modes)
    dim = 1 << n_modes
    m = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    for word, c in op.terms.items():
        target, amp = _word_action(word, n_modes)
        live = amp != 0.0
        np.add.at(m, (target[live], idx[live]), c * amp[live])
    return DenseOperator(dim, m)


def sector_indices(n_qubits, n_electrons):
    """Basis indices of Hamming weight n_electrons, ascending."""
    idx = np.arange(1 << n_qubits)
    return idx[np.bitwise_count(idx) == n_electrons]


def ground_energy_in_sector(op, n_electrons):
    """Minimum eigenvalue of a QubitOperator restricted to one particle sector.

    Returns (energy, ground vector embedded in the full 2^n space).
    """
    _guard(op.n_qubits)
    sector = sector_indices(op.n_qubits, n_electrons)
    if sector.size == 0:
        raise ValueError(f"empty sector: {n_electrons} electrons on {op.n_qubits} modes")
    dim = 1 << op.n_qubits
    pos = -np.ones(dim, dtype=np.int64)
    pos[sector] = np.arange(sector.size)
    h = np.zeros((sector.size, sector.size), dtype=complex)
    for ps, c in op.terms.items():
        xmask, yzmask, n_y = ps.masks()
        signs = 1.0 - 2.0 * (np.bitwise_count(sector & yzmask) & 1)
        phase = (1j ** (n_y % 4)) * signs
        rows = pos[sector ^ xmask]
        live = rows >= 0
        h[rows[live], np.arange(sector.size)[live]] += c * phase[live]
    defect = np.max(np.abs(h - h.conj().T))
    if defect > 1e-8:
        raise ValueError(f"sector block is not Hermitian (defect {defect:g})")
    h = 0.5 * (h + h.conj().T)
    vals, vecs = np.linalg.eigh(h)
    ground = np.zeros(dim, dtype=complex)
    ground[sector] = vecs[:, 0]
    return float(vals[0]), ground


def expm_antihermitian(g):
    """exp(G) for antihermitian G via eigendecomposition of iG."""
    a = 1j * g
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.exp(-1j * vals)) @ vecs.conj().T


def _excitation_generators(excitations, n_modes):
    """Dense antihermitian generator matrix per excitation, circuit order."""
    from .fermion import FermionOperator

    generators = []
    for i, m in excitations.singles:
        t = FermionOperator.from_term(1.0, ((m, CREATE), (i, ANNIHILATE)))
        g = t - t.adjoint()
        generators.append(fermion_to_matrix(g.simplify(), n_modes).matrix)
    for i, j, m, n in excitations.doubles:
        t = FermionOperator.from_term(
            1.0, ((n, CREATE), (m, CREATE), (j, ANNIHILATE), (i, ANNIHILATE)))
        g = t - t.adjoint()
        generators.append(fermion_to_matrix(g.simplify(), n_modes).matrix)
    return generators


def uccsd_analytic_energy(so, occ, excitations, n=None, config=None, theta0=None):
    """Optimized UCCSD energy with dense exponentials.

    With ``n`` absent the trial state is the exact exponential of the full
    antihermitian generator; with ``n`` given it is the n-step product of
    per-excitation exponentials in the fixed circuit term order (singles
    ascending, then doubles).  Returns (energy, theta_opt).
    """
    n_modes = so.n_so
    _guard(n_modes)
    if config is None:
        config = VqeConfig(tolerance=1e-12, max_iterations=500)
    ph = build_ph_hamiltonian(so, occ)
    h_dense = fermion_to_matrix(ph.as_fermion_operator(), n_modes).matrix
    defect = np.max(np.abs(h_dense - h_dense.conj().T))
    if defect > 1e-9:
        raise ValueError(f"Hamiltonian matrix not Hermitian (defect {defect:g})")
    generators = _excitation_generators(excitations, n_modes)
    n_params = len(generators)
    reference = np.zeros(1 << n_modes, dtype=complex)
    reference[sum(1 << m for m in occ.occupied)] = 1.0

    if n is not None:
        # theta-independent eigendecompositions, reused for every factor
        decomposed = []
        for g in generators:
            vals, vecs = np.linalg.eigh(1j * g)
            decomposed.append((vals, vecs))

    def trial_state(theta):
        if n is None:
            g = np.zeros_like(h_dense)
            for t, gk in zip(theta, generators):
                if t != 0.0:
                    g = g + t * gk
            return expm_antihermitian(g) @ reference
        state = reference
        step = [
            (vecs * np.exp(-1j * vals * t / n)) @ vecs.conj().T
            for t, (vals, vecs) in zip(theta, decomposed)
        ]
        for _ in range(n):
            for u in step:
                state = u @ state
        return state

    def energy(theta):
        psi = trial_state(theta)
        return float(np.real(np.vdot(psi, h_dense @ psi)))

    if theta0 is None:
        theta0 = np.zeros(n_params)
    result = bfgs_minimize(energy, np.asarray(theta0, dtype=float), config)
    return result.e_final, result.theta_opt
