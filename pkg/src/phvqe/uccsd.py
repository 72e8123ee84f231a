"""Unitary coupled-cluster singles/doubles ansatz circuits.

Excitations conserve Sz (singles preserve spin, doubles preserve the
spin multiset) and are canonicalized to i<j over occupied and m<n over
virtual modes, one independent angle each.  The circuit realizes the
n-step Trotter product of per-excitation exponentials in a fixed term
order (all singles ascending, then all doubles), each exponential
expanded into its commuting Pauli factors: 2 per single, 8 per double.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .qubit import PauliString
from .sim import Circuit, Gate, apply_circuit, init_basis_state

__all__ = [
    "ExcitationList",
    "UccsdAnsatz",
    "enumerate_excitations",
    "build_uccsd_circuit",
    "uccsd_state",
]

# Pauli letters at (i, j, m, n) and sign of the i*theta/8 exponent for one
# double excitation, after mapping the descending-index expansion onto
# i < j < m < n (occupied pair, then virtual pair).
DOUBLE_TERMS = (
    ("XXYX", +1),
    ("YXYY", +1),
    ("XYYY", +1),
    ("XXXY", +1),
    ("YXXX", -1),
    ("XYXX", -1),
    ("YYYX", -1),
    ("YYXY", -1),
)


def _spin(mode):
    return mode & 1


@dataclass(frozen=True)
class ExcitationList:
    """Canonical spin-conserving excitations within an active window."""

    singles: tuple
    doubles: tuple
    active_occupied: tuple
    active_virtual: tuple

    @property
    def n_parameters(self):
        return len(self.singles) + len(self.doubles)


def enumerate_excitations(n_so, occ, active_occ=None, active_virt=None):
    """All Sz-conserving single and double excitations, canonicalized.

    ``active_occ``/``active_virt`` restrict the participating occupied and
    virtual modes (defaults: all).  Raises on overlapping active sets or
    active sets leaving their side of the Fermi level.
    """
    occupied = frozenset(occ)
    virtuals = frozenset(range(n_so)) - occupied
    act_o = frozenset(occupied if active_occ is None else active_occ)
    act_v = frozenset(virtuals if active_virt is None else active_virt)
    if act_o & act_v:
        raise ValueError(f"active sets overlap: {sorted(act_o & act_v)}")
    if not act_o <= occupied:
        raise ValueError("active occupied set contains non-occupied modes")
    if not act_v <= virtuals:
        raise ValueError("active virtual set contains occupied modes")

    occ_sorted = sorted(act_o)
    virt_sorted = sorted(act_v)

    singles = tuple(
        (i, m)
        for i in occ_sorted
        for m in virt_sorted
        if _spin(i) == _spin(m)
    )
    doubles = tuple(
        (i, j, m, n)
        for i, j in combinations(occ_sorted, 2)
        for m, n in combinations(virt_sorted, 2)
        if sorted((_spin(i), _spin(j))) == sorted((_spin(m), _spin(n)))
    )
    return ExcitationList(
        singles=singles, doubles=doubles,
        active_occupied=tuple(occ_sorted), active_virtual=tuple(virt_sorted))


@dataclass
class UccsdAnsatz:
    """Trotterized q-UCCSD circuit family on ``n_qubits`` modes.

    One angle per excitation, shared across the ``trotter_steps``
    repetitions with 1/n scaling.
    """

    n_qubits: int
    excitations: ExcitationList
    trotter_steps: int = 1
    _template: Circuit | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")

    @property
    def n_parameters(self):
        return self.excitations.n_parameters

    def template(self):
        if self._template is None:
            self._template = _build_template(
                self.n_qubits, self.excitations, self.trotter_steps)
        return self._template


def _single_words(n_qubits, i, m):
    """(YX word, XY word) with the Z parity chain strictly between i and m."""
    chain = {q: "Z" for q in range(i + 1, m)}
    yx = PauliString.from_letters(n_qubits, {**chain, i: "Y", m: "X"})
    xy = PauliString.from_letters(n_qubits, {**chain, i: "X", m: "Y"})
    return yx, xy


def _double_words(n_qubits, i, j, m, n):
    words = []
    chain = {q: "Z" for q in range(i + 1, j)}
    chain.update({q: "Z" for q in range(m + 1, n)})
    for letters, sign in DOUBLE_TERMS:
        assignment = dict(chain)
        for mode, letter in zip((i, j, m, n), letters):
            assignment[mode] = letter
        words.append((PauliString.from_letters(n_qubits, assignment), sign))
    return words


def _build_template(n_qubits, excitations, n_steps):
    gates = []
    slots = []
    single_words = []
    for i, m in excitations.singles:
        if not 0 <= i < m < n_qubits:
            raise ValueError(f"single excitation ({i},{m}) out of order or range")
        single_words.append(_single_words(n_qubits, i, m))
    double_words = []
    for i, j, m, n in excitations.doubles:
        if not 0 <= i < j < m < n < n_qubits:
            raise ValueError(f"double excitation ({i},{j},{m},{n}) out of order or range")
        double_words.append(_double_words(n_qubits, i, j, m, n))

    n_singles = len(excitations.singles)
    for _ in range(n_steps):
        for k, (yx, xy) in enumerate(single_words):
            slots.append((len(gates), 0, k, 1.0 / n_steps))
            gates.append(Gate("PAULI_EXP", (), (0.0,), word=yx))
            slots.append((len(gates), 0, k, -1.0 / n_steps))
            gates.append(Gate("PAULI_EXP", (), (0.0,), word=xy))
        for d, words in enumerate(double_words):
            for word, sign in words:
                slots.append((len(gates), 0, n_singles + d, sign / (4.0 * n_steps)))
                gates.append(Gate("PAULI_EXP", (), (0.0,), word=word))

    return Circuit(n_qubits, gates, n_params=excitations.n_parameters, slots=slots)


def build_uccsd_circuit(ansatz, theta):
    """Concrete circuit for one angle vector."""
    return ansatz.template().bind(theta)


def uccsd_state(ansatz, theta, reference):
    """Apply the ansatz circuit to the reference determinant."""
    if reference.n_modes != ansatz.n_qubits:
        raise ValueError("reference size does not match ansatz qubits")
    state = init_basis_state(ansatz.n_qubits, reference.occupied)
    return apply_circuit(state, build_uccsd_circuit(ansatz, theta))
