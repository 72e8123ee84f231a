import math

import numpy as np
import pytest

from phvqe.qubit import PauliString, QubitOperator, jordan_wigner
from phvqe.fermion import hf_reference, number_operator
from phvqe.sim import (
    BlockTemplate,
    Circuit,
    Gate,
    apply_circuit,
    apply_gate,
    apply_pauli_exponential,
    circuit_unitary,
    compile_expectation,
    decompose_exchange,
    expand_block,
    expectation,
    export_circuit,
    gate_matrix,
    init_basis_state,
    pauli_exponential_circuit,
    sample_counts,
)

LETTERS = np.array(list("IXYZ"))


def random_state(rng, n):
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amp /= np.linalg.norm(amp)
    return init_basis_state(n, []), amp


def random_word(rng, n, nontrivial=True):
    while True:
        word = "".join(rng.choice(LETTERS, n))
        if not nontrivial or any(ch != "I" for ch in word):
            return PauliString(word)


def up_to_phase_distance(a, b):
    inner = np.vdot(a.ravel(), b.ravel())
    if abs(inner) < 1e-12:
        return float("inf")
    return float(np.max(np.abs(b - (inner / abs(inner)) * a)))


class TestBasisState:
    def test_examples(self):
        assert np.allclose(init_basis_state(2, {0}).amplitudes, [0, 1, 0, 0])
        assert np.allclose(init_basis_state(3, set()).amplitudes,
                           [1, 0, 0, 0, 0, 0, 0, 0])
        hf = init_basis_state(8, {0, 1})
        assert hf.amplitudes[0b11] == 1.0
        assert hf.norm() == pytest.approx(1.0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            init_basis_state(2, {5})


class TestGateMatrices:
    @pytest.mark.parametrize("kind,params,targets", [
        ("RX", (0.37,), (0,)),
        ("RZ", (-1.2,), (0,)),
        ("H", (), (0,)),
        ("X", (), (0,)),
        ("CNOT", (), (0, 1)),
        ("EX1", (0.8, -0.4), (0, 1)),
        ("EX2", (1.1,), (0, 1)),
    ])
    def test_unitarity(self, kind, params, targets):
        u = gate_matrix(Gate(kind, targets, params))
        dim = u.shape[0]
        assert np.max(np.abs(u @ u.conj().T - np.eye(dim))) < 1e-12

    def test_unitarity_random_parameters(self, rng):
        for _ in range(50):
            for kind, n_params in (("RX", 1), ("RZ", 1), ("EX1", 2), ("EX2", 1)):
                params = tuple(rng.uniform(-2 * np.pi, 2 * np.pi, n_params))
                targets = (0,) if kind in ("RX", "RZ") else (0, 1)
                u = gate_matrix(Gate(kind, targets, params))
                dim = u.shape[0]
                assert np.max(np.abs(u @ u.conj().T - np.eye(dim))) < 1e-12

    def test_ex2_zero_is_identity(self, rng):
        state, amp = random_state(rng, 3)
        state.amplitudes = amp.copy()
        apply_gate(state, Gate("EX2", (0, 2), (0.0,)))
        assert np.max(np.abs(state.amplitudes - amp)) < 1e-14

    def test_ex1_swap_point(self):
        # sin(theta1) = 1 realizes a particle-conserving SWAP
        state = init_basis_state(2, {0})  # |01> pattern: qubit0 = 1
        apply_gate(state, Gate("EX1", (0, 1), (math.pi / 2, 0.0)))
        assert state.amplitudes[0b10] == pytest.approx(1.0)
        state2 = init_basis_state(2, {1})
        apply_gate(state2, Gate("EX1", (0, 1), (math.pi / 2, 0.0)))
        assert state2.amplitudes[0b01] == pytest.approx(1.0)
        for occ in (set(), {0, 1}):
            s = init_basis_state(2, occ)
            ref = s.amplitudes.copy()
            apply_gate(s, Gate("EX1", (0, 1), (math.pi / 2, 0.0)))
            assert np.allclose(s.amplitudes, ref)

    def test_ex1_diagonal_at_zero(self):
        u = gate_matrix(Gate("EX1", (0, 1), (0.0, 1.234)))
        assert np.allclose(u, np.diag([1, 1, -1, 1]))

    def test_dense2q_gate(self, rng):
        # random unitary via QR, applied through the DENSE2Q kind
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, _ = np.linalg.qr(m)
        gate = Gate("DENSE2Q", (0, 2), matrix=q)
        state, amp = random_state(rng, 3)
        state.amplitudes = amp.copy()
        apply_gate(state, gate)
        assert abs(1.0 - state.norm()) < 1e-12
        # build the full operator column by column and compare
        full = np.zeros((8, 8), dtype=complex)
        for col in range(8):
            sv = init_basis_state(3, [])
            sv.amplitudes[0] = 0.0
            sv.amplitudes[col] = 1.0
            apply_gate(sv, Gate("DENSE2Q", (0, 2), matrix=q))
            full[:, col] = sv.amplitudes
        assert np.max(np.abs(state.amplitudes - full @ amp)) < 1e-12

    def test_gate_application_matches_kron(self, rng):
        # dense cross-check of the in-place apply for 1- and 2-qubit gates
        n = 3
        for _ in range(40):
            kind = rng.choice(["RX", "RZ", "H", "X", "CNOT", "EX1", "EX2"])
            if kind in ("RX", "RZ", "H", "X"):
                targets = (int(rng.integers(0, n)),)
            else:
                targets = tuple(rng.choice(n, size=2, replace=False).astype(int))
            n_params = {"RX": 1, "RZ": 1, "H": 0, "X": 0,
                        "CNOT": 0, "EX1": 2, "EX2": 1}[kind]
            gate = Gate(kind, targets, tuple(rng.uniform(-3, 3, n_params)))
            state, amp = random_state(rng, n)
            state.amplitudes = amp.copy()
            apply_gate(state, gate)
            full = np.zeros((1 << n, 1 << n), dtype=complex)
            u = gate_matrix(gate)
            for col in range(1 << n):
                basis = np.zeros(1 << n, dtype=complex)
                basis[col] = 1.0
                sv = init_basis_state(n, [])
                sv.amplitudes = basis
                apply_gate(sv, gate)
                full[:, col] = sv.amplitudes
            assert np.max(np.abs(full @ full.conj().T - np.eye(1 << n))) < 1e-12
            assert np.max(np.abs(state.amplitudes - full @ amp)) < 1e-12
            del u


class TestPauliExponential:
    def test_global_phase_on_z(self):
        state = init_basis_state(1, [])
        theta = 0.77
        apply_pauli_exponential(state, PauliString("Z"), theta)
        assert state.amplitudes[0] == pytest.approx(np.exp(0.5j * theta))

    def test_dense_oracle(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 5))
            word = random_word(rng, n, nontrivial=False)
            theta = float(rng.normal())
            state, amp = random_state(rng, n)
            state.amplitudes = amp.copy()
            apply_pauli_exponential(state, word, theta)
            p = word.to_matrix()
            u = math.cos(theta / 2) * np.eye(1 << n) + 1j * math.sin(theta / 2) * p
            assert np.max(np.abs(state.amplitudes - u @ amp)) < 1e-12

    def test_yx_at_pi(self):
        state = init_basis_state(2, [])
        apply_pauli_exponential(state, PauliString("YX"), math.pi)
        expected = 1j * (PauliString("YX").to_matrix() @ init_basis_state(2, []).amplitudes)
        assert np.max(np.abs(state.amplitudes - expected)) < 1e-12

    def test_circuit_path_agrees(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 7))
            word = random_word(rng, n)
            theta = float(rng.normal())
            state, amp = random_state(rng, n)
            state.amplitudes = amp.copy()
            other = init_basis_state(n, [])
            other.amplitudes = amp.copy()
            apply_pauli_exponential(state, word, theta, method="direct")
            apply_pauli_exponential(other, word, theta, method="circuit")
            assert np.max(np.abs(state.amplitudes - other.amplitudes)) < 1e-12

    def test_circuit_gates_are_elementary(self):
        circ = pauli_exponential_circuit(PauliString("XZYI"), 0.5)
        assert all(g.kind in ("H", "RX", "RZ", "CNOT") for g in circ.gates)

    def test_identity_word_has_no_circuit(self):
        with pytest.raises(ValueError):
            pauli_exponential_circuit(PauliString("II"), 0.3)


class TestExpectation:
    def test_number_operator_on_reference(self):
        n = 4
        op = jordan_wigner(number_operator(n), n)
        state = init_basis_state(n, {0, 1})
        assert expectation(state, op) == pytest.approx(2.0, abs=1e-12)

    def test_rejects_non_hermitian(self):
        op = QubitOperator(1, {"X": 1j})
        state = init_basis_state(1, [])
        with pytest.raises(ValueError):
            expectation(state, op)

    def test_compiled_matches_term_wise(self, rng):
        n = 4
        terms = {}
        for _ in range(12):
            word = "".join(rng.choice(LETTERS, n))
            terms[word] = terms.get(word, 0.0) + float(rng.normal())
        op = QubitOperator(n, terms).simplify()
        state, amp = random_state(rng, n)
        state.amplitudes = amp
        fn_dense = compile_expectation(op, dense_qubit_limit=10)
        fn_terms = compile_expectation(op, dense_qubit_limit=0)
        reference = expectation(state, op)
        assert fn_dense(state) == pytest.approx(reference, abs=1e-12)
        assert fn_terms(state) == pytest.approx(reference, abs=1e-12)


class TestDecomposeExchange:
    def test_ex2_zero_is_identity_up_to_phase(self):
        circ = decompose_exchange(Gate("EX2", (0, 1), (0.0,)))
        u = circuit_unitary(circ)
        assert up_to_phase_distance(u, np.eye(4)) < 1e-10

    def test_ex1_swap_point(self):
        circ = decompose_exchange(Gate("EX1", (0, 1), (math.pi / 2, 0.0)))
        u = circuit_unitary(circ)
        swap = gate_matrix(Gate("EX1", (0, 1), (math.pi / 2, 0.0)))
        assert up_to_phase_distance(u, swap) < 1e-10

    def test_random_angles(self, rng):
        worst = 0.0
        for _ in range(100):
            if rng.random() < 0.5:
                gate = Gate("EX1", (0, 1), tuple(rng.uniform(-np.pi, np.pi, 2)))
            else:
                gate = Gate("EX2", (0, 1), (float(rng.uniform(-np.pi, np.pi)),))
            circ = decompose_exchange(gate)
            assert all(g.kind in ("RZ", "RX", "CNOT") for g in circ.gates)
            worst = max(worst, up_to_phase_distance(
                circuit_unitary(circ), gate_matrix(gate)))
        assert worst < 1e-10

    def test_rejects_other_kinds(self):
        with pytest.raises(ValueError):
            decompose_exchange(Gate("CNOT", (0, 1)))


class TestExpandBlock:
    @staticmethod
    def two_qubit_template():
        def factory(targets, base):
            return [Gate("EX2", targets, (0.0,))], [(0, 0, base, 1.0)]
        return BlockTemplate(2, 1, factory)

    @staticmethod
    def one_qubit_template():
        def factory(targets, base):
            return [Gate("RZ", targets, (0.0,))], [(0, 0, base, 1.0)]
        return BlockTemplate(1, 1, factory)

    def test_two_qubit_instances(self):
        circ = expand_block(self.two_qubit_template(), 0, 3)
        assert [g.targets for g in circ.gates] == [(0, 1), (1, 2), (2, 3)]
        assert circ.n_params == 3

    def test_single_qubit_degenerate_range(self):
        circ = expand_block(self.one_qubit_template(), 2, 2)
        assert [g.targets for g in circ.gates] == [(2,)]
        assert circ.n_params == 1

    def test_parameter_slot_accounting(self):
        circ = expand_block(self.two_qubit_template(), 0, 5)
        assert len(circ.slots) == 5 * 1
        assert circ.n_params == 5


class TestCircuit:
    def test_bind_shape_check(self):
        circ = Circuit(2, [Gate("RZ", (0,), (0.0,))], n_params=1,
                       slots=[(0, 0, 0, 2.0)])
        bound = circ.bind([0.5])
        assert bound.gates[0].params == (1.0,)
        with pytest.raises(ValueError):
            circ.bind([0.1, 0.2])

    def test_target_validation(self):
        with pytest.raises(ValueError):
            Circuit(1, [Gate("RZ", (3,), (0.0,))])

    def test_norm_preservation_deep_random_circuits(self, rng):
        for n in (2, 4, 8):
            state, amp = random_state(rng, n)
            state.amplitudes = amp
            for _ in range(200):
                kind = rng.choice(["RX", "RZ", "H", "X", "CNOT", "EX1", "EX2", "PAULI_EXP"])
                if kind in ("RX", "RZ", "H", "X"):
                    gate = Gate(kind, (int(rng.integers(0, n)),),
                                tuple(rng.uniform(-3, 3, 1 if kind in ("RX", "RZ") else 0)))
                elif kind == "PAULI_EXP":
                    gate = Gate(kind, (), (float(rng.normal()),),
                                word=random_word(rng, n))
                else:
                    targets = tuple(rng.choice(n, size=2, replace=False).astype(int))
                    n_params = {"CNOT": 0, "EX1": 2, "EX2": 1}[kind]
                    gate = Gate(kind, targets, tuple(rng.uniform(-3, 3, n_params)))
                apply_gate(state, gate)
            assert abs(1.0 - state.norm()) < 1e-10

    def test_particle_conservation_exchange_circuits(self, rng):
        n = 6
        op = jordan_wigner(number_operator(n), n)
        state = init_basis_state(n, {0, 1, 2})
        for _ in range(100):
            kind = rng.choice(["EX1", "EX2", "RZ"])
            if kind == "RZ":
                gate = Gate("RZ", (int(rng.integers(0, n)),), (float(rng.normal()),))
            else:
                targets = tuple(rng.choice(n, size=2, replace=False).astype(int))
                params = tuple(rng.uniform(-3, 3, 2 if kind == "EX1" else 1))
                gate = Gate(kind, targets, params)
            apply_gate(state, gate)
        assert expectation(state, op) == pytest.approx(3.0, abs=1e-10)

    def test_export_format(self):
        circ = Circuit(2, [
            Gate("RZ", (0,), (math.pi / 2,)),
            Gate("CNOT", (0, 1)),
            Gate("PAULI_EXP", (), (0.25,), word=PauliString("XY")),
        ])
        text = export_circuit(circ)
        lines = text.splitlines()
        assert lines[0] == "RZ q0 1.570796327"
        assert lines[1] == "CNOT q0 q1"
        assert lines[2] == "PAULI_EXP XY 0.25"


class TestSampling:
    def test_seeded_counts(self):
        state = init_basis_state(2, [])
        state.amplitudes = np.array([1, 1, 1, 1], dtype=complex) / 2.0
        counts = sample_counts(state, 1000, seed=7)
        assert sum(counts.values()) == 1000
        again = sample_counts(state, 1000, seed=7)
        assert counts == again
