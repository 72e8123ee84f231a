"""Scikit-learn style front end.

``PhVqeSolver`` wires the whole pipeline behind a fit() call: FCIDUMP
ingestion, spin-orbital expansion, particle-hole Hamiltonian, Jordan-
Wigner mapping, ansatz construction, and BFGS minimization.  Fitted
attributes carry the optimized energy, angles, counters, and the exact
sector diagonalization for error reporting.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
from sklearn.base import BaseEstimator

from . import heuristic as heuristic_mod
from . import uccsd as uccsd_mod
from .fermion import build_ph_hamiltonian, hf_reference
from .integrals import to_spin_orbitals
from .oracle import ground_energy_in_sector
from .qubit import QubitOperator, jordan_wigner
from .validation import (
    as_molecular_integrals,
    check_ansatz_name,
    check_positive,
    resolve_active_window,
)
from .vqe import VqeConfig, VqeProblem, default_mu_schedule, minimize

__all__ = ["PhVqeSolver", "build_context", "build_ansatz"]


def build_context(mi, active_occ=None, active_virt=None):
    """Problem context shared by every ansatz on one integral set."""
    so = to_spin_orbitals(mi)
    so.validate()
    occ = hf_reference(so.n_electrons, so.n_so)
    ph = build_ph_hamiltonian(so, occ)
    h_q = (jordan_wigner(ph.body, so.n_so)
           + QubitOperator.identity(so.n_so, ph.e_hf)).simplify()
    occ_window, virt_window = resolve_active_window(
        so.n_so, so.n_electrons, active_occ, active_virt)
    return SimpleNamespace(
        mi=mi, so=so, occ=occ, ph=ph, h_q=h_q,
        n_qubits=so.n_so, n_electrons=so.n_electrons,
        e_hf=ph.e_hf,
        occ_window=occ_window, virt_window=virt_window,
    )


def build_ansatz(name, context, depth=8, trotter_steps=1, seed=0):
    """Ansatz object, circuit builder, and initial angles for one variant.

    UCCSD starts at theta=0 (the reference point); the heuristic variants
    draw the first iterate uniformly from [0, 2pi) with the given seed.
    """
    name = check_ansatz_name(name)
    if name == "uccsd":
        excitations = uccsd_mod.enumerate_excitations(
            context.n_qubits, context.occ.occupied,
            context.occ_window, context.virt_window)
        ansatz = uccsd_mod.UccsdAnsatz(context.n_qubits, excitations, trotter_steps)
        builder = lambda theta: uccsd_mod.build_uccsd_circuit(ansatz, theta)
        theta0 = np.zeros(ansatz.n_parameters)
    else:
        kind = {
            "ex1": heuristic_mod.EntanglerKind.EX1_BLOCK,
            "ex2": heuristic_mod.EntanglerKind.EX2_BLOCK,
            "cnot": heuristic_mod.EntanglerKind.CNOT_BLOCK,
        }[name]
        ansatz = heuristic_mod.HeuristicAnsatz(context.n_qubits, kind, depth)
        builder = lambda theta: heuristic_mod.build_heuristic_circuit(ansatz, theta)
        theta0 = heuristic_mod.random_initial_angles(ansatz.n_parameters, seed)
    return ansatz, builder, theta0


class PhVqeSolver(BaseEstimator):
    """Variational ground-state solver with a scikit-learn estimator API.

    Parameters mirror the CLI flags: ansatz variant, entangler depth,
    Trotter steps, active-space spin-orbital counts, optimizer settings,
    and the particle-number penalty strength for the non-conserving
    entangler.  fit(X) accepts MolecularIntegrals, an FCIDUMP path, or
    FCIDUMP text.
    """

    def __init__(self, ansatz="uccsd", depth=8, trotter_steps=1,
                 active_occ=None, active_virt=None, tolerance=1e-7,
                 grad_step=1e-6, max_iterations=200, mu=0.0, mu_ramp=False,
                 seed=0, compute_exact=True):
        self.ansatz = ansatz
        self.depth = depth
        self.trotter_steps = trotter_steps
        self.active_occ = active_occ
        self.active_virt = active_virt
        self.tolerance = tolerance
        self.grad_step = grad_step
        self.max_iterations = max_iterations
        self.mu = mu
        self.mu_ramp = mu_ramp
        self.seed = seed
        self.compute_exact = compute_exact

    def _config(self, n_electrons):
        schedule = ()
        if self.mu_ramp and self.mu != 0.0:
            schedule = default_mu_schedule(self.max_iterations, self.mu)
        return VqeConfig(
            tolerance=self.tolerance,
            grad_step=self.grad_step,
            max_iterations=check_positive(self.max_iterations, "max_iterations"),
            mu=self.mu,
            mu_schedule=schedule,
            seed=self.seed,
            target_electrons=n_electrons,
        )

    def fit(self, X, y=None):
        """Minimize the ground-state energy of the molecule in X."""
        mi = as_molecular_integrals(X)
        name = check_ansatz_name(self.ansatz)
        if name != "uccsd":
            check_positive(self.depth, "depth")
        else:
            check_positive(self.trotter_steps, "trotter_steps")

        context = build_context(mi, self.active_occ, self.active_virt)
        ansatz, builder, theta0 = build_ansatz(
            name, context, depth=self.depth,
            trotter_steps=self.trotter_steps, seed=self.seed)

        problem = VqeProblem(
            hamiltonian=context.h_q,
            builder=builder,
            n_params=ansatz.n_parameters,
            reference=context.occ,
            initial_theta=theta0,
            label=mi.source_label or name,
        )
        config = self._config(context.n_electrons)
        result = minimize(problem, config)

        template = ansatz.template()
        self.context_ = context
        self.ansatz_ = ansatz
        self.problem_ = problem
        self.result_ = result
        self.n_qubits_ = context.n_qubits
        self.n_parameters_ = ansatz.n_parameters
        self.hf_energy_ = context.e_hf
        self.energy_ = result.e_bare
        self.theta_ = result.theta_opt
        self.converged_ = result.converged
        self.n_expectation_ = result.n_expectation
        self.gate_counts_ = template.gate_counts()
        if self.compute_exact:
            self.exact_energy_, _ = ground_energy_in_sector(
                context.h_q, context.n_electrons)
            self.error_ = self.energy_ - self.exact_energy_
        else:
            self.exact_energy_ = None
            self.error_ = None
        return self
