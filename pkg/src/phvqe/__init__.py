"""Particle-hole VQE simulation laboratory."""

from .integrals import (
    MolecularIntegrals,
    SpinOrbitalIntegrals,
    load_fcidump,
    parse_fcidump,
    render_fcidump,
    to_spin_orbitals,
)
from .fermion import (
    FermionOperator,
    OccupationState,
    PhHamiltonian,
    build_ph_hamiltonian,
    build_sq_hamiltonian,
    fock_matrix,
    hf_energy,
    hf_reference,
    number_operator,
)
from .qubit import PauliString, QubitOperator, jordan_wigner, pauli_product
from .sim import (
    Circuit,
    Gate,
    Statevector,
    apply_circuit,
    apply_gate,
    apply_pauli_exponential,
    decompose_exchange,
    expand_block,
    expectation,
    export_circuit,
    init_basis_state,
)
from .uccsd import ExcitationList, UccsdAnsatz, build_uccsd_circuit, enumerate_excitations, uccsd_state
from .heuristic import EntanglerKind, HeuristicAnsatz, build_heuristic_circuit, param_count
from .vqe import VqeConfig, VqeProblem, VqeResult, energy_eval, gradient, minimize, trotter_replay
from .oracle import (
    DenseOperator,
    fermion_to_matrix,
    ground_energy_in_sector,
    operator_to_matrix,
    uccsd_analytic_energy,
)
from .estimator import PhVqeSolver

__version__ = "0.1.0"
