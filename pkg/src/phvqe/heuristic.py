"""Entangler-block trial-state circuits.

Three block variants:

* EX1_BLOCK: nearest-neighbor chains of two-parameter exchange gates, no
  single-qubit rotations (none are needed; the exchange gates carry all
  angles).
* EX2_BLOCK: chains of single-parameter exchange gates followed by one
  RZ rotation per qubit inside each block.  The chain alternates between
  the nearest-neighbor stride and a wraparound next-nearest stride from
  block to block: a purely nearest-neighbor EX2+RZ circuit is a matchgate
  (free-fermion) circuit, reaches only Slater determinants, and can never
  recover correlation energy; the crossing pairs break that closure while
  keeping the gate count and particle conservation intact.
* CNOT_BLOCK: an initial two-angle rotation layer, then nearest-neighbor
  CNOT ladders alternating with full three-angle Euler (Z X Z) layers.

The exchange variants conserve particle number at any angles; the CNOT
variant does not and pairs with the number-penalty objective.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .sim import BlockTemplate, Circuit, Gate, expand_block

__all__ = [
    "EntanglerKind",
    "HeuristicAnsatz",
    "param_count",
    "build_heuristic_circuit",
    "random_initial_angles",
]


class EntanglerKind(enum.Enum):
    EX1_BLOCK = "ex1"
    EX2_BLOCK = "ex2"
    CNOT_BLOCK = "cnot"


def param_count(kind, n_qubits, depth):
    """Independent angle count for ``depth`` entangler blocks."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = n_qubits
    if kind == EntanglerKind.EX1_BLOCK:
        return 2 * (n - 1) * depth
    if kind == EntanglerKind.EX2_BLOCK:
        return (n - 1) * depth + n * depth
    if kind == EntanglerKind.CNOT_BLOCK:
        return n * (3 * depth + 2)
    raise ValueError(f"unknown entangler kind {kind!r}")


def _ex1_chain():
    def factory(targets, base):
        gate = Gate("EX1", targets, (0.0, 0.0))
        return [gate], [(0, 0, base, 1.0), (0, 1, base + 1, 1.0)]

    return BlockTemplate(2, 2, factory)


def exchange_pairs(n_qubits, stride):
    """n-1 exchange pairs (q, q+stride mod n), the block's entangling graph."""
    return [(q, (q + stride) % n_qubits) for q in range(n_qubits - 1)]


def _ex2_block_gates(n_qubits, stride, base):
    gates = []
    slots = []
    for a, b in exchange_pairs(n_qubits, stride):
        slots.append((len(gates), 0, base, 1.0))
        base += 1
        gates.append(Gate("EX2", (a, b), (0.0,)))
    return gates, slots, base


def _cnot_chain():
    def factory(targets, base):
        return [Gate("CNOT", targets)], []

    return BlockTemplate(2, 0, factory)


def _rz_layer():
    def factory(targets, base):
        gate = Gate("RZ", targets, (0.0,))
        return [gate], [(0, 0, base, 1.0)]

    return BlockTemplate(1, 1, factory)


def _euler_layer(n_angles):
    """Z X Z rotations per qubit; the two-angle form drops the first-applied
    Z rotation (a pure phase on the reference determinant)."""

    def factory(targets, base):
        q = targets[0]
        if n_angles == 2:
            gates = [Gate("RX", (q,), (0.0,)), Gate("RZ", (q,), (0.0,))]
            slots = [(0, 0, base, 1.0), (1, 0, base + 1, 1.0)]
        else:
            gates = [
                Gate("RZ", (q,), (0.0,)),
                Gate("RX", (q,), (0.0,)),
                Gate("RZ", (q,), (0.0,)),
            ]
            slots = [(0, 0, base, 1.0), (1, 0, base + 1, 1.0), (2, 0, base + 2, 1.0)]
        return gates, slots

    return BlockTemplate(1, n_angles, factory)


@dataclass
class HeuristicAnsatz:
    """D repetitions of one entangler block variant."""

    n_qubits: int
    kind: EntanglerKind
    depth: int
    _template: Circuit | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.n_qubits < 2:
            raise ValueError("entangler blocks need at least 2 qubits")

    @property
    def n_parameters(self):
        return param_count(self.kind, self.n_qubits, self.depth)

    def template(self):
        if self._template is None:
            self._template = _build_template(self.n_qubits, self.kind, self.depth)
        return self._template


def _append(gates, slots, sub, theta_offset):
    base = len(gates)
    gates.extend(sub.gates)
    slots.extend(
        (base + gi, pos, theta_offset + ti, scale)
        for gi, pos, ti, scale in sub.slots
    )
    return theta_offset + sub.n_params


def _build_template(n, kind, depth):
    gates = []
    slots = []
    offset = 0
    if kind == EntanglerKind.EX1_BLOCK:
        for _ in range(depth):
            offset = _append(gates, slots, expand_block(_ex1_chain(), 0, n - 1), offset)
    elif kind == EntanglerKind.EX2_BLOCK:
        for d in range(depth):
            stride = 1 if (d % 2 == 0 or n < 3) else 2
            block_gates, block_slots, offset = _ex2_block_gates(n, stride, offset)
            base = len(gates)
            gates.extend(block_gates)
            slots.extend((base + gi, pos, ti, sc) for gi, pos, ti, sc in block_slots)
            offset = _append(gates, slots, expand_block(_rz_layer(), 0, n - 1), offset)
    elif kind == EntanglerKind.CNOT_BLOCK:
        offset = _append(gates, slots, expand_block(_euler_layer(2), 0, n - 1), offset)
        for _ in range(depth):
            offset = _append(gates, slots, expand_block(_cnot_chain(), 0, n - 1), offset)
            offset = _append(gates, slots, expand_block(_euler_layer(3), 0, n - 1), offset)
    else:
        raise ValueError(f"unknown entangler kind {kind!r}")
    expected = param_count(kind, n, depth)
    if offset != expected:
        raise AssertionError(f"slot accounting mismatch: {offset} != {expected}")
    return Circuit(n, gates, n_params=offset, slots=slots)


def build_heuristic_circuit(ansatz, theta):
    """Concrete circuit for one angle vector."""
    return ansatz.template().bind(theta)


def random_initial_angles(n_params, seed):
    """Seeded uniform draw from [0, 2pi) for the first optimizer iteration."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=n_params)
