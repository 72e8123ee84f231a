"""Jordan-Wigner mapping and Pauli-word algebra.

Convention: qubit j holds the occupation of mode j, and the ladder
operator on mode j carries identities on qubits below j and a Z parity
string on every qubit above j,

    a_j  -> I^(j) (X + iY)/2  Z^(n-j-1)
    a+_j -> I^(j) (X - iY)/2  Z^(n-j-1)

Text rendering puts qubit 0 leftmost: ``(+0.5) XIYZ``.
"""

from __future__ import annotations

import numpy as np

from .fermion import ANNIHILATE, CREATE, FermionOperator

__all__ = [
    "PauliString",
    "QubitOperator",
    "pauli_product",
    "jordan_wigner",
    "PAULI_MATRICES",
]

PRUNE_TOL = 1e-12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (left, right) -> (phase, product)
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


class PauliString:
    """An n-qubit Pauli word, one letter in {I, X, Y, Z} per qubit."""

    __slots__ = ("word",)

    def __init__(self, word):
        if any(ch not in "IXYZ" for ch in word):
            raise ValueError(f"invalid Pauli letters in {word!r}")
        self.word = word

    @property
    def n_qubits(self):
        return len(self.word)

    @classmethod
    def identity(cls, n_qubits):
        return cls("I" * n_qubits)

    @classmethod
    def from_letters(cls, n_qubits, letters):
        """Build from {qubit: letter} pairs, identity elsewhere."""
        chars = ["I"] * n_qubits
        for q, letter in letters.items():
            if not (0 <= q < n_qubits):
                raise ValueError(f"qubit {q} outside [0, {n_qubits})")
            chars[q] = letter
        return cls("".join(chars))

    def weight(self):
        return sum(ch != "I" for ch in self.word)

    def support(self):
        return tuple(q for q, ch in enumerate(self.word) if ch != "I")

    def masks(self):
        """(xmask, yzmask, n_y): bit j set in xmask when letter j flips the
        qubit, in yzmask when it contributes a (-1)^bit phase."""
        xmask = yzmask = n_y = 0
        for q, ch in enumerate(self.word):
            if ch in "XY":
                xmask |= 1 << q
            if ch in "YZ":
                yzmask |= 1 << q
            if ch == "Y":
                n_y += 1
        return xmask, yzmask, n_y

    def to_matrix(self):
        m = np.array([[1.0 + 0j]])
        # leftmost letter is qubit 0, and bit j of the basis index is qubit j,
        # so qubit 0 is the least-significant Kronecker factor
        for ch in self.word:
            m = np.kron(PAULI_MATRICES[ch], m)
        return m

    def __eq__(self, other):
        return isinstance(other, PauliString) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return f"PauliString({self.word!r})"


def pauli_product(a, b):
    """Product of two equal-length Pauli words as (phase, word)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits}")
    phase, word = _word_product(a.word, b.word)
    return phase, PauliString(word)


def _word_product(wa, wb):
    phase = 1 + 0j
    out = []
    for ca, cb in zip(wa, wb):
        p, c = _PRODUCT[(ca, cb)]
        phase *= p
        out.append(c)
    return phase, "".join(out)


class QubitOperator:
    """Coefficient-weighted sum of Pauli words on a fixed qubit count."""

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits, terms=None):
        self.n_qubits = n_qubits
        self.terms = {}
        if terms:
            for key, c in terms.items():
                word = key.word if isinstance(key, PauliString) else key
                if len(word) != n_qubits:
                    raise ValueError("term length does not match n_qubits")
                self.terms[PauliString(word)] = complex(c)

    @classmethod
    def zero(cls, n_qubits):
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits, coefficient=1.0):
        return cls(n_qubits, {"I" * n_qubits: coefficient})

    def __add__(self, other):
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        out = dict(self.terms)
        for ps, c in other.terms.items():
            out[ps] = out.get(ps, 0.0) + c
        return QubitOperator(self.n_qubits, out)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, QubitOperator):
            if other.n_qubits != self.n_qubits:
                raise ValueError("qubit count mismatch")
            out = {}
            for pa, ca in self.terms.items():
                for pb, cb in other.terms.items():
                    phase, word = _word_product(pa.word, pb.word)
                    key = PauliString(word)
                    out[key] = out.get(key, 0.0) + ca * cb * phase
            return QubitOperator(self.n_qubits, out)
        return QubitOperator(self.n_qubits, {p: c * other for p, c in self.terms.items()})

    __rmul__ = __mul__

    def simplify(self, tol=PRUNE_TOL):
        """Merge equal words and drop |coefficient| < tol; idempotent."""
        kept = {p: c for p, c in self.terms.items() if abs(c) >= tol}
        ordered = dict(sorted(kept.items(), key=lambda item: item[0].word))
        return QubitOperator(self.n_qubits, ordered)

    def max_imag(self):
        return max((abs(c.imag) for c in self.terms.values()), default=0.0)

    def is_hermitian(self, tol=1e-10):
        return self.simplify(tol=0.0).max_imag() <= tol

    def constant(self):
        return self.terms.get(PauliString.identity(self.n_qubits), 0.0)

    def __eq__(self, other):
        if not isinstance(other, QubitOperator):
            return NotImplemented
        return (self - other).simplify().terms == {}

    def __len__(self):
        return len(self.terms)

    def render(self):
        """One term per line as ``(+0.5) XIYZ``, leftmost letter = qubit 0."""
        lines = []
        for ps, c in sorted(self.simplify().terms.items(), key=lambda kv: kv[0].word):
            coefficient = c.real if abs(c.imag) < PRUNE_TOL else c
            lines.append(f"({coefficient:+.12g}) {ps.word}")
        return "\n".join(lines)

    def __repr__(self):
        return f"QubitOperator(n_qubits={self.n_qubits}, n_terms={len(self.terms)})"


def _ladder_words(mode, kind, n_qubits):
    """The two weighted Pauli words of one Jordan-Wigner ladder factor."""
    tail = "Z" * (n_qubits - mode - 1)
    head = "I" * mode
    x_word = head + "X" + tail
    y_word = head + "Y" + tail
    y_coeff = -0.5j if kind == CREATE else 0.5j
    return ((0.5, x_word), (y_coeff, y_word))


def jordan_wigner(op, n_modes):
    """Map a fermionic operator to a qubit operator on ``n_modes`` qubits."""
    out = {}
    identity = "I" * n_modes
    for word, coefficient in op.terms.items():
        for mode, _ in word:
            if not (0 <= mode < n_modes):
                raise ValueError(f"mode index {mode} outside [0, {n_modes})")
        partial = {identity: complex(coefficient)}
        for mode, kind in word:
            nxt = {}
            for factor_c, factor_w in _ladder_words(mode, kind, n_modes):
                for acc_w, acc_c in partial.items():
                    phase, prod = _word_product(acc_w, factor_w)
                    c = acc_c * factor_c * phase
                    nxt[prod] = nxt.get(prod, 0.0) + c
            partial = nxt
        for w, c in partial.items():
            out[w] = out.get(w, 0.0) + c
    return QubitOperator(n_modes, out).simplify()
