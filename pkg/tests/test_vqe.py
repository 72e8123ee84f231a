import numpy as np
import pytest

from phvqe.estimator import build_ansatz, build_context
from phvqe.fermion import hf_reference
from phvqe.oracle import ground_energy_in_sector, _excitation_generators, expm_antihermitian
from phvqe.uccsd import UccsdAnsatz, build_uccsd_circuit, enumerate_excitations
from phvqe.vqe import (
    VqeConfig,
    VqeProblem,
    bfgs_minimize,
    default_mu_schedule,
    energy_eval,
    gradient,
    minimize,
    trotter_replay,
)

from conftest import load_fixture, random_molecular_integrals


def toy_context(rng=None, n_spatial=2, n_electrons=2, seed=12):
    gen = np.random.default_rng(seed) if rng is None else rng
    mi = random_molecular_integrals(gen, n_spatial, n_electrons, scale=0.3)
    mi.h += np.diag(np.linspace(-1.5, -0.5, n_spatial))
    return build_context(mi)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            VqeConfig(tolerance=0.0)
        with pytest.raises(ValueError):
            VqeConfig(mu_schedule=((5, 1.0), (3, 2.0)))
        with pytest.raises(ValueError):
            VqeConfig(mu_schedule=((1, 2.0), (2, 1.0)))
        with pytest.raises(ValueError):
            VqeConfig(mu_schedule=((1, -1.0),))

    def test_mu_interpolation(self):
        config = VqeConfig(mu_schedule=((10, 0.0), (20, 10.0)))
        assert config.mu_at(5) == 0.0
        assert config.mu_at(10) == 0.0
        assert config.mu_at(15) == pytest.approx(5.0)
        assert config.mu_at(20) == 10.0
        assert config.mu_at(99) == 10.0

    def test_default_schedule_shape(self):
        schedule = default_mu_schedule(100, 10.0)
        assert schedule == ((25, 0.0), (50, 10.0))


class TestBfgs:
    def test_quadratic(self):
        a = np.array([1.5, -2.0, 0.25])
        m = np.array([[3.0, 1.0, 0.0], [1.0, 2.0, 0.5], [0.0, 0.5, 1.0]])

        def f(x):
            d = x - a
            return float(d @ m @ d)

        out = bfgs_minimize(f, np.zeros(3), VqeConfig(tolerance=1e-14, max_iterations=50))
        assert out.converged
        assert out.iterations <= 50
        assert np.max(np.abs(out.theta_opt - a)) < 1e-8

    def test_trace_non_increasing(self):
        def f(x):
            return float(np.sum(x ** 2))

        out = bfgs_minimize(f, np.ones(4), VqeConfig(tolerance=1e-12, max_iterations=60))
        trace = out.e_trace
        assert all(trace[k + 1] <= trace[k] + 1e-12 for k in range(len(trace) - 1))
        assert out.e_final == trace[-1]


class TestGradient:
    def test_identity_acting_parameter_has_zero_component(self):
        # at all-zero angles the exchange gates are the identity, so every
        # RZ angle only rephases the reference determinant: its gradient
        # component vanishes
        from phvqe.heuristic import EntanglerKind, HeuristicAnsatz, build_heuristic_circuit

        ctx = toy_context(seed=21)
        ansatz = HeuristicAnsatz(ctx.n_qubits, EntanglerKind.EX2_BLOCK, 1)
        config = VqeConfig()

        def energy(theta):
            return energy_eval(ctx.h_q, lambda t: build_heuristic_circuit(ansatz, t),
                               theta, ctx.occ, config)

        g = gradient(energy, np.zeros(ansatz.n_parameters), step=1e-6)
        n_exchange = ctx.n_qubits - 1
        rotation_components = g[n_exchange:]
        assert np.max(np.abs(rotation_components)) < 1e-8

    def test_identity_direction_is_zero(self):
        ctx = toy_context()
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        config = VqeConfig()

        def energy(theta):
            return energy_eval(ctx.h_q, lambda t: build_uccsd_circuit(ansatz, t),
                               theta, ctx.occ, config)

        # pad with an inactive parameter by evaluating at theta = 0: gradient
        # components of symmetry-equivalent excitations match
        g = gradient(energy, np.zeros(ansatz.n_parameters), step=1e-6)
        # alpha/beta mirror excitations have equal gradients at theta = 0
        singles = list(excitations.singles)
        for k, (i, m) in enumerate(singles):
            mirror = (i ^ 1, m ^ 1)
            if mirror in singles:
                km = singles.index(mirror)
                assert g[k] == pytest.approx(g[km], abs=1e-8)

    def test_matches_analytic_directional_derivative(self):
        ctx = toy_context(seed=3)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        generators = _excitation_generators(excitations, ctx.n_qubits)
        from phvqe.oracle import fermion_to_matrix

        h_dense = fermion_to_matrix(ctx.ph.as_fermion_operator(), ctx.n_qubits).matrix
        ref = np.zeros(1 << ctx.n_qubits, dtype=complex)
        ref[ctx.occ.index()] = 1.0
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        config = VqeConfig()

        def energy(theta):
            return energy_eval(ctx.h_q, lambda t: build_uccsd_circuit(ansatz, t),
                               theta, ctx.occ, config)

        g = gradient(energy, np.zeros(ansatz.n_parameters), step=1e-6)
        # analytic derivative at theta=0: dE/dtheta_k = 2 Re <ref| H G_k |ref>
        for k, gen in enumerate(generators):
            analytic = 2.0 * float(np.real(ref.conj() @ (h_dense @ (gen @ ref))))
            assert g[k] == pytest.approx(analytic, rel=1e-5, abs=1e-8)


class TestMinimize:
    def test_uccsd_matches_analytic_optimum_on_toy(self):
        # a random tensor's sector ground state may sit in an Sz sector the
        # ansatz cannot reach, so the circuit VQE is checked against the
        # dense analytic optimum of the same ansatz and bounded by E_diag
        ctx = toy_context()
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        from phvqe.oracle import uccsd_analytic_energy

        e_an, _ = uccsd_analytic_energy(
            ctx.so, ctx.occ, excitations, n=1,
            config=VqeConfig(tolerance=1e-13, max_iterations=300))
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        problem = VqeProblem(
            hamiltonian=ctx.h_q,
            builder=lambda t: build_uccsd_circuit(ansatz, t),
            n_params=ansatz.n_parameters,
            reference=ctx.occ,
        )
        result = minimize(problem, VqeConfig(tolerance=1e-12, max_iterations=200))
        e_diag, _ = ground_energy_in_sector(ctx.h_q, ctx.n_electrons)
        assert result.converged
        assert result.e_final == pytest.approx(e_an, abs=1e-7)
        assert result.e_final >= e_diag - 1e-9
        assert result.e_trace[0] == pytest.approx(ctx.e_hf, abs=1e-10)
        assert result.e_final == result.e_trace[-1]
        assert result.n_expectation == pytest.approx(ctx.n_electrons, abs=1e-10)

    def test_theta_zero_gives_hf(self):
        ctx = toy_context(seed=5)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        config = VqeConfig()
        e = energy_eval(ctx.h_q, lambda t: build_uccsd_circuit(ansatz, t),
                        np.zeros(ansatz.n_parameters), ctx.occ, config)
        assert e == pytest.approx(ctx.e_hf, abs=1e-10)

    def test_penalty_invariant_for_conserving_ansatz(self):
        ctx = toy_context(seed=8)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)

        def make_problem():
            return VqeProblem(
                hamiltonian=ctx.h_q,
                builder=lambda t: build_uccsd_circuit(ansatz, t),
                n_params=ansatz.n_parameters,
                reference=ctx.occ,
            )

        plain = minimize(make_problem(), VqeConfig(tolerance=1e-10, max_iterations=60,
                                                   target_electrons=ctx.n_electrons))
        punished = minimize(make_problem(), VqeConfig(tolerance=1e-10, max_iterations=60,
                                                      mu=10.0,
                                                      target_electrons=ctx.n_electrons))
        # <N> deviates from N only at roundoff, so the squared penalty sits far
        # below one ulp of the energy: the runs match bitwise
        assert punished.e_trace == plain.e_trace
        assert np.array_equal(punished.theta_opt, plain.theta_opt)

    def test_penalty_nonnegative_for_cnot(self):
        from phvqe.heuristic import EntanglerKind, HeuristicAnsatz, build_heuristic_circuit, random_initial_angles

        ctx = toy_context(seed=2)
        ansatz = HeuristicAnsatz(ctx.n_qubits, EntanglerKind.CNOT_BLOCK, 1)
        theta = random_initial_angles(ansatz.n_parameters, seed=6)
        base = VqeConfig(target_electrons=ctx.n_electrons)
        strong = VqeConfig(mu=10.0, target_electrons=ctx.n_electrons)
        builder = lambda t: build_heuristic_circuit(ansatz, t)
        e_plain = energy_eval(ctx.h_q, builder, theta, ctx.occ, base)
        e_strong = energy_eval(ctx.h_q, builder, theta, ctx.occ, strong)
        assert e_strong >= e_plain - 1e-12

    def test_mu_ramp_reevaluation_not_counted(self):
        # objective switches mid-run; the run must still converge afterwards
        ctx = toy_context(seed=4)
        from phvqe.heuristic import EntanglerKind, HeuristicAnsatz, build_heuristic_circuit, random_initial_angles

        ansatz = HeuristicAnsatz(ctx.n_qubits, EntanglerKind.CNOT_BLOCK, 1)
        problem = VqeProblem(
            hamiltonian=ctx.h_q,
            builder=lambda t: build_heuristic_circuit(ansatz, t),
            n_params=ansatz.n_parameters,
            reference=ctx.occ,
            initial_theta=random_initial_angles(ansatz.n_parameters, seed=1),
        )
        config = VqeConfig(tolerance=1e-9, max_iterations=120, mu=5.0,
                           mu_schedule=((10, 0.0), (20, 5.0)),
                           target_electrons=ctx.n_electrons)
        result = minimize(problem, config)
        assert result.iterations > 20  # survived the ramp without stopping on it

    def test_determinism(self):
        ctx = toy_context(seed=9)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)

        def run():
            problem = VqeProblem(
                hamiltonian=ctx.h_q,
                builder=lambda t: build_uccsd_circuit(ansatz, t),
                n_params=ansatz.n_parameters,
                reference=ctx.occ,
            )
            return minimize(problem, VqeConfig(tolerance=1e-10, max_iterations=50))

        first, second = run(), run()
        assert first.e_trace == second.e_trace
        assert np.array_equal(first.theta_opt, second.theta_opt)

    def test_non_convergence_flag(self):
        ctx = toy_context(seed=7)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        problem = VqeProblem(
            hamiltonian=ctx.h_q,
            builder=lambda t: build_uccsd_circuit(ansatz, t),
            n_params=ansatz.n_parameters,
            reference=ctx.occ,
        )
        result = minimize(problem, VqeConfig(tolerance=1e-15, max_iterations=2))
        assert not result.converged  # no exception raised

    def test_record_serialization(self):
        ctx = toy_context(seed=11)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        problem = VqeProblem(
            hamiltonian=ctx.h_q,
            builder=lambda t: build_uccsd_circuit(ansatz, t),
            n_params=ansatz.n_parameters,
            reference=ctx.occ,
            label="toy",
        )
        result = minimize(problem, VqeConfig(tolerance=1e-9, max_iterations=40))
        record = result.to_record()
        assert "label=toy" in record
        assert "e_final=" in record
        csv_text = result.trace_csv()
        assert csv_text.splitlines()[0] == "iteration,energy"
        assert len(csv_text.splitlines()) == len(result.e_trace) + 1


class TestVariationalBound:
    def test_every_energy_above_exact(self, rng):
        ctx = toy_context(seed=14)
        e_diag, _ = ground_energy_in_sector(ctx.h_q, ctx.n_electrons)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        ansatz = UccsdAnsatz(ctx.n_qubits, excitations, 1)
        config = VqeConfig()
        for _ in range(20):
            theta = rng.normal(size=ansatz.n_parameters)
            e = energy_eval(ctx.h_q, lambda t: build_uccsd_circuit(ansatz, t),
                            theta, ctx.occ, config)
            assert e >= e_diag - 1e-9


class TestTrotterReplay:
    def test_replay_against_fixture(self):
        mi = load_fixture("h2_6-31g_0.592.fcidump")
        ctx = build_context(mi)
        excitations = enumerate_excitations(ctx.n_qubits, ctx.occ.occupied)
        from phvqe.oracle import uccsd_analytic_energy

        e_an, theta_opt = uccsd_analytic_energy(
            ctx.so, ctx.occ, excitations,
            config=VqeConfig(tolerance=1e-13, max_iterations=400))
        e_diag, _ = ground_energy_in_sector(ctx.h_q, ctx.n_electrons)
        errors = []
        for n in (1, 2, 4, 8):
            replay = trotter_replay(ctx.h_q, excitations, ctx.occ, theta_opt, n)
            errors.append(abs(replay - e_diag))
            assert replay >= e_an - 1e-9  # replay cannot beat the optimum
        # non-increasing toward the exact limit
        assert all(errors[k + 1] <= errors[k] + 1e-12 for k in range(len(errors) - 1))
        assert errors[-1] < 1e-8
        # large step counts land on the analytic optimum
        replay_16 = trotter_replay(ctx.h_q, excitations, ctx.occ, theta_opt, 16)
        assert abs(replay_16 - e_an) < 1e-9
