"""The variational loop.

Energy functional with an optional particle-number penalty, central
finite-difference gradients, BFGS minimization with Armijo backtracking,
and the Trotter replay experiment (frozen optimal angles evaluated on
n-step circuits).

Stopping rule: the energy difference between two consecutive accepted
iterations falls below the tolerance.  Re-evaluations forced by a change
of the penalty strength do not count toward convergence.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .fermion import number_operator
from .qubit import jordan_wigner
from .sim import apply_circuit, compile_expectation, expectation, init_basis_state

__all__ = [
    "VqeConfig",
    "VqeResult",
    "VqeProblem",
    "energy_eval",
    "gradient",
    "bfgs_minimize",
    "minimize",
    "trotter_replay",
    "default_mu_schedule",
]


@dataclass(frozen=True)
class VqeConfig:
    """Optimizer settings; tolerance and penalty ramp as in the pipeline."""

    tolerance: float = 1e-7
    grad_step: float = 1e-6
    max_iterations: int = 200
    mu: float = 0.0
    mu_schedule: tuple = ()
    seed: int | None = None
    target_electrons: int | None = None
    track_number: bool = False

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.grad_step <= 0:
            raise ValueError("grad_step must be positive")
        last_it, last_mu = -1, 0.0
        for it, mu in self.mu_schedule:
            if mu < 0:
                raise ValueError("schedule mu values must be >= 0")
            if mu < last_mu:
                raise ValueError("schedule mu values must be non-decreasing")
            if it <= last_it:
                raise ValueError("schedule iterations must be increasing")
            last_it, last_mu = it, mu

    def mu_at(self, iteration):
        """Penalty strength at an iteration: linear between breakpoints,
        constant outside; falls back to the static ``mu``."""
        if not self.mu_schedule:
            return self.mu
        points = list(self.mu_schedule)
        if iteration <= points[0][0]:
            return points[0][1]
        for (i0, m0), (i1, m1) in zip(points, points[1:]):
            if iteration <= i1:
                frac = (iteration - i0) / (i1 - i0)
                return m0 + frac * (m1 - m0)
        return points[-1][1]


def default_mu_schedule(max_iterations, mu_max=10.0):
    """Penalty off for the first quarter, linear to mu_max at half, then flat."""
    quarter = max(1, max_iterations // 4)
    half = max(quarter + 1, max_iterations // 2)
    return ((quarter, 0.0), (half, mu_max))


@dataclass
class VqeResult:
    """Optimization outcome with energy trace and evaluation counters.

    ``e_final`` is the last accepted objective value (penalty included if
    one was active); ``e_bare`` is the plain Hamiltonian expectation at
    the optimum.  The two coincide for particle-conserving circuits.
    """

    theta_opt: np.ndarray
    e_final: float
    e_bare: float
    e_trace: list
    iterations: int
    energy_evaluations: int
    pauli_evaluations: int
    n_expectation: float | None
    converged: bool
    label: str = ""
    # (min, max) of <N> over every evaluated point, when tracking was on
    n_range: tuple | None = None

    def to_record(self):
        """Flat key=value text record."""
        lines = [
            f"label={self.label}",
            f"e_final={self.e_final!r}",
            f"e_bare={self.e_bare!r}",
            f"iterations={self.iterations}",
            f"energy_evaluations={self.energy_evaluations}",
            f"pauli_evaluations={self.pauli_evaluations}",
            f"converged={str(self.converged).lower()}",
            f"n_expectation={'' if self.n_expectation is None else repr(self.n_expectation)}",
            "theta_opt=" + ",".join(repr(float(t)) for t in self.theta_opt),
        ]
        return "\n".join(lines) + "\n"

    def trace_csv(self):
        buf = io.StringIO()
        buf.write("iteration,energy\n")
        for k, e in enumerate(self.e_trace):
            buf.write(f"{k},{e:.12g}\n")
        return buf.getvalue()


@dataclass
class VqeProblem:
    """Hamiltonian + parametrized circuit family + reference determinant."""

    hamiltonian: object
    builder: object
    n_params: int
    reference: object
    number_op: object | None = None
    initial_theta: np.ndarray | None = None
    label: str = ""

    def number_operator_q(self):
        if self.number_op is None:
            n = self.hamiltonian.n_qubits
            self.number_op = jordan_wigner(number_operator(n), n)
        return self.number_op


def _trial_state(h_q, circuit_builder, theta, reference):
    state = init_basis_state(h_q.n_qubits, reference.occupied)
    return apply_circuit(state, circuit_builder(theta))


def energy_eval(h_q, circuit_builder, theta, reference, config, number_op=None):
    """<psi(theta)|H|psi(theta)> plus the scalar penalty mu (<N> - N)^2."""
    state = _trial_state(h_q, circuit_builder, np.asarray(theta, dtype=float), reference)
    e = expectation(state, h_q)
    if config.mu != 0.0 and config.target_electrons is not None:
        if number_op is None:
            n = h_q.n_qubits
            number_op = jordan_wigner(number_operator(n), n)
        n_exp = expectation(state, number_op)
        e += config.mu * (n_exp - config.target_electrons) ** 2
    return e


def gradient(fun, theta, step=1e-6):
    """Central finite-difference gradient of a scalar function."""
    theta = np.asarray(theta, dtype=float)
    g = np.zeros_like(theta)
    for k in range(theta.size):
        probe = theta.copy()
        probe[k] = theta[k] + step
        plus = fun(probe)
        probe[k] = theta[k] - step
        minus = fun(probe)
        g[k] = (plus - minus) / (2.0 * step)
    return g


@dataclass
class _BfgsOutcome:
    theta_opt: np.ndarray
    e_final: float
    e_trace: list
    iterations: int
    evaluations: int
    converged: bool


def bfgs_minimize(fun, x0, config, reconfigure=None):
    """BFGS with Armijo backtracking (c=1e-4, shrink 0.5).

    ``reconfigure(iteration)`` may switch the objective (penalty ramp);
    returning True forces a re-evaluation that is excluded from the
    convergence test and resets the curvature estimate.
    """
    x = np.asarray(x0, dtype=float).copy()
    dim = x.size
    evals = 0

    def f(theta):
        nonlocal evals
        evals += 1
        return fun(theta)

    def grad(theta):
        return gradient(f, theta, config.grad_step)

    fx = f(x)
    gx = grad(x)
    hinv = np.eye(dim)
    scaled = False
    trace = [fx]
    converged = False
    iterations = 0

    for it in range(1, config.max_iterations + 1):
        iterations = it
        skip_convergence = False
        if reconfigure is not None and reconfigure(it):
            fx = f(x)
            gx = grad(x)
            hinv = np.eye(dim)
            scaled = False
            skip_convergence = True

        if dim == 0:
            converged = True
            break

        p = -hinv @ gx
        slope = float(gx @ p)
        if slope >= 0.0:
            hinv = np.eye(dim)
            scaled = False
            p = -gx
            slope = float(gx @ p)
        if abs(slope) < 1e-300:
            converged = True
            trace.append(fx)
            break

        t = 1.0
        accepted = None
        for _ in range(60):
            cand = x + t * p
            fc = f(cand)
            if fc <= fx + 1e-4 * t * slope:
                accepted = (cand, fc)
                break
            t *= 0.5
        if accepted is None:
            # no decrease even at tiny steps: numerically at a minimum
            converged = True
            trace.append(fx)
            break

        cand, fc = accepted
        gc = grad(cand)
        s = cand - x
        y = gc - gx
        ys = float(y @ s)
        if ys > 1e-12 * (np.linalg.norm(y) * np.linalg.norm(s) + 1e-300):
            if not scaled:
                hinv = (ys / float(y @ y)) * np.eye(dim)
                scaled = True
            rho = 1.0 / ys
            v = np.eye(dim) - rho * np.outer(s, y)
            hinv = v @ hinv @ v.T + rho * np.outer(s, s)

        delta = fx - fc
        x, fx, gx = cand, fc, gc
        trace.append(fx)
        if not skip_convergence and abs(delta) < config.tolerance:
            converged = True
            break

    return _BfgsOutcome(
        theta_opt=x, e_final=fx, e_trace=trace,
        iterations=iterations, evaluations=evals, converged=converged)


def minimize(problem, config):
    """Run the variational loop on a problem; returns a VqeResult."""
    h_q = problem.hamiltonian
    n_terms = len(h_q.terms)
    theta0 = problem.initial_theta
    if theta0 is None:
        theta0 = np.zeros(problem.n_params)
    theta0 = np.asarray(theta0, dtype=float)
    if theta0.shape != (problem.n_params,):
        raise ValueError(f"initial theta has shape {theta0.shape}, "
                         f"expected ({problem.n_params},)")

    penalized = config.target_electrons is not None and (
        config.mu != 0.0 or any(m != 0.0 for _, m in config.mu_schedule))
    watch_number = penalized or config.track_number
    number_q = problem.number_operator_q() if watch_number else None
    n_number_terms = len(number_q.terms) if penalized else 0

    # precompiled evaluators; numerically identical to sim.expectation
    h_fn = compile_expectation(h_q)
    n_fn = compile_expectation(number_q) if watch_number else None

    counters = {"energy": 0, "pauli": 0}
    mu_box = {"mu": config.mu_at(0)}
    n_seen = [np.inf, -np.inf]

    def objective(theta):
        state = _trial_state(h_q, problem.builder, theta, problem.reference)
        counters["energy"] += 1
        counters["pauli"] += n_terms
        e = h_fn(state)
        if watch_number:
            n_exp = n_fn(state)
            n_seen[0] = min(n_seen[0], n_exp)
            n_seen[1] = max(n_seen[1], n_exp)
            if penalized:
                counters["pauli"] += n_number_terms
                e += mu_box["mu"] * (n_exp - config.target_electrons) ** 2
        return e

    def reconfigure(iteration):
        new_mu = config.mu_at(iteration)
        if new_mu != mu_box["mu"]:
            mu_box["mu"] = new_mu
            return True
        return False

    outcome = bfgs_minimize(objective, theta0, config,
                            reconfigure=reconfigure if penalized else None)

    state = _trial_state(h_q, problem.builder, outcome.theta_opt, problem.reference)
    n_exp = expectation(state, problem.number_operator_q())
    e_bare = expectation(state, h_q)

    return VqeResult(
        theta_opt=outcome.theta_opt,
        e_final=outcome.e_trace[-1],
        e_bare=e_bare,
        e_trace=list(outcome.e_trace),
        iterations=outcome.iterations,
        energy_evaluations=counters["energy"],
        pauli_evaluations=counters["pauli"],
        n_expectation=n_exp,
        converged=outcome.converged,
        label=problem.label,
        n_range=(n_seen[0], n_seen[1]) if watch_number else None,
    )


def trotter_replay(h_q, excitations, reference, theta_opt, n):
    """Energy of the n-step Trotterized circuit at frozen optimal angles."""
    from .uccsd import UccsdAnsatz, uccsd_state

    ansatz = UccsdAnsatz(h_q.n_qubits, excitations, trotter_steps=n)
    state = uccsd_state(ansatz, np.asarray(theta_opt, dtype=float), reference)
    return expectation(state, h_q)
