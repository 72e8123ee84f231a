import numpy as np
import pytest

from phvqe.fermion import hf_reference, number_operator
from phvqe.heuristic import (
    EntanglerKind,
    HeuristicAnsatz,
    build_heuristic_circuit,
    exchange_pairs,
    param_count,
    random_initial_angles,
)
from phvqe.qubit import jordan_wigner
from phvqe.sim import apply_circuit, expectation, init_basis_state


class TestParamCount:
    def test_table_values(self):
        assert param_count(EntanglerKind.EX1_BLOCK, 8, 8) == 112
        assert param_count(EntanglerKind.EX2_BLOCK, 8, 8) == 120
        assert param_count(EntanglerKind.CNOT_BLOCK, 8, 2) == 64

    def test_general_formulas(self):
        for n in (2, 3, 5, 8):
            for depth in (1, 3, 7):
                assert param_count(EntanglerKind.EX1_BLOCK, n, depth) == 2 * (n - 1) * depth
                assert param_count(EntanglerKind.EX2_BLOCK, n, depth) == (2 * n - 1) * depth
                assert param_count(EntanglerKind.CNOT_BLOCK, n, depth) == n * (3 * depth + 2)

    def test_depth_validation(self):
        with pytest.raises(ValueError):
            param_count(EntanglerKind.EX1_BLOCK, 8, 0)


class TestCircuitStructure:
    @pytest.mark.parametrize("kind", list(EntanglerKind))
    def test_template_param_accounting(self, kind):
        ansatz = HeuristicAnsatz(6, kind, 3)
        template = ansatz.template()
        assert template.n_params == ansatz.n_parameters
        # every angle is consumed by exactly one slot
        indices = sorted(ti for _, _, ti, _ in template.slots)
        assert indices == list(range(ansatz.n_parameters))

    def test_ex1_topology_nearest_neighbor(self):
        template = HeuristicAnsatz(5, EntanglerKind.EX1_BLOCK, 2).template()
        targets = [g.targets for g in template.gates]
        assert targets == [(0, 1), (1, 2), (2, 3), (3, 4)] * 2

    def test_ex2_alternates_strides(self):
        template = HeuristicAnsatz(8, EntanglerKind.EX2_BLOCK, 2).template()
        ex_targets = [g.targets for g in template.gates if g.kind == "EX2"]
        assert ex_targets[:7] == exchange_pairs(8, 1)
        assert ex_targets[7:] == exchange_pairs(8, 2)
        assert any(abs(a - b) != 1 for a, b in ex_targets[7:])

    def test_exchange_pairs_count(self):
        for n in (2, 3, 6, 9):
            for stride in (1, 2):
                assert len(exchange_pairs(n, stride)) == n - 1

    def test_ex2_zero_angles_identity(self):
        ansatz = HeuristicAnsatz(4, EntanglerKind.EX2_BLOCK, 2)
        occ = hf_reference(2, 4)
        state = init_basis_state(4, occ.occupied)
        circuit = build_heuristic_circuit(ansatz, np.zeros(ansatz.n_parameters))
        apply_circuit(state, circuit)
        assert state.amplitudes[occ.index()] == pytest.approx(1.0)

    def test_binding_length_check(self):
        ansatz = HeuristicAnsatz(4, EntanglerKind.EX1_BLOCK, 1)
        with pytest.raises(ValueError):
            build_heuristic_circuit(ansatz, np.zeros(ansatz.n_parameters + 1))


class TestParticleConservation:
    @pytest.mark.parametrize("kind", [EntanglerKind.EX1_BLOCK, EntanglerKind.EX2_BLOCK])
    def test_exchange_blocks_conserve(self, kind, rng):
        n = 6
        ansatz = HeuristicAnsatz(n, kind, 3)
        op = jordan_wigner(number_operator(n), n)
        for _ in range(5):
            theta = rng.uniform(0, 2 * np.pi, ansatz.n_parameters)
            state = init_basis_state(n, {0, 1, 2})
            apply_circuit(state, build_heuristic_circuit(ansatz, theta))
            assert expectation(state, op) == pytest.approx(3.0, abs=1e-10)
            # support restricted to Hamming weight 3
            for index, amp in enumerate(state.amplitudes):
                if abs(amp) > 1e-12:
                    assert bin(index).count("1") == 3

    def test_cnot_block_breaks_conservation(self, rng):
        n = 4
        ansatz = HeuristicAnsatz(n, EntanglerKind.CNOT_BLOCK, 2)
        n_op = jordan_wigner(number_operator(n), n)
        n_sq = (n_op * n_op).simplify()
        theta = random_initial_angles(ansatz.n_parameters, seed=3)
        state = init_basis_state(n, {0, 1})
        apply_circuit(state, build_heuristic_circuit(ansatz, theta))
        mean = expectation(state, n_op)
        variance = expectation(state, n_sq) - mean ** 2
        assert variance > 1e-4


class TestCnotWithPenalty:
    def test_ramped_penalty_pins_the_sector(self):
        # the non-conserving block explores other particle sectors during
        # optimization; the ramped penalty steers the final state back
        from phvqe.estimator import build_context
        from phvqe.oracle import ground_energy_in_sector
        from phvqe.vqe import VqeConfig, VqeProblem, default_mu_schedule, minimize
        from conftest import load_fixture

        ctx = build_context(load_fixture("h2_6-31g_0.700.fcidump"))
        e_diag, _ = ground_energy_in_sector(ctx.h_q, 2)
        ansatz = HeuristicAnsatz(8, EntanglerKind.CNOT_BLOCK, 2)
        config = VqeConfig(tolerance=1e-7, max_iterations=150, mu=10.0,
                           mu_schedule=default_mu_schedule(150, 10.0),
                           target_electrons=2, track_number=True)
        problem = VqeProblem(
            hamiltonian=ctx.h_q,
            builder=lambda t: build_heuristic_circuit(ansatz, t),
            n_params=ansatz.n_parameters,
            reference=ctx.occ,
            initial_theta=random_initial_angles(ansatz.n_parameters, seed=0),
        )
        result = minimize(problem, config)
        # for this molecule the 2-electron block holds the global minimum,
        # so even sector-breaking states obey the bound
        assert result.e_bare >= e_diag - 1e-9
        assert abs(result.n_expectation - 2.0) < 1e-2
        n_lo, n_hi = result.n_range
        assert n_hi > 2.1 or n_lo < 1.9  # it really left the sector mid-run


class TestInitialAngles:
    def test_seeded_uniform(self):
        a = random_initial_angles(50, seed=9)
        b = random_initial_angles(50, seed=9)
        assert np.array_equal(a, b)
        assert np.all(a >= 0.0) and np.all(a < 2 * np.pi)
        assert np.std(a) > 0.5


class TestDepthMonotonicity:
    def test_warm_started_deeper_is_no_worse(self):
        # embedding the optimum of depth D into depth D+1 with identity-acting
        # padding cannot raise the minimized energy
        from phvqe.vqe import VqeConfig, VqeProblem, minimize
        from conftest import load_fixture
        from phvqe.estimator import build_context

        mi = load_fixture("h2_6-31g_0.700.fcidump")
        context = build_context(mi, active_occ=2, active_virt=2)
        # restrict the register to the 4 active spin orbitals for speed
        kind = EntanglerKind.EX2_BLOCK
        n = context.n_qubits
        config = VqeConfig(tolerance=1e-8, max_iterations=60)

        shallow = HeuristicAnsatz(n, kind, 1)
        theta0 = random_initial_angles(shallow.n_parameters, seed=4)
        problem1 = VqeProblem(
            hamiltonian=context.h_q,
            builder=lambda th: build_heuristic_circuit(shallow, th),
            n_params=shallow.n_parameters,
            reference=context.occ,
            initial_theta=theta0,
        )
        result1 = minimize(problem1, config)

        deeper = HeuristicAnsatz(n, kind, 2)
        padded = np.zeros(deeper.n_parameters)
        per_block = shallow.n_parameters
        padded[:per_block] = result1.theta_opt
        problem2 = VqeProblem(
            hamiltonian=context.h_q,
            builder=lambda th: build_heuristic_circuit(deeper, th),
            n_params=deeper.n_parameters,
            reference=context.occ,
            initial_theta=padded,
        )
        result2 = minimize(problem2, config)
        assert result2.e_final <= result1.e_final + 1e-9
