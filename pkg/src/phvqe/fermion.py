"""Fermionic operator algebra and Hamiltonian construction.

Builds the second-quantized electronic Hamiltonian, the closed-shell
reference quantities (reference energy, Fock matrix), and the equivalent
particle-hole Hamiltonian whose one- and two-body parts are normal
ordered with respect to the reference determinant, so that the reference
expectation of the body vanishes and only the correlation energy remains
to be optimized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CREATE",
    "ANNIHILATE",
    "FermionOperator",
    "OccupationState",
    "PhHamiltonian",
    "build_sq_hamiltonian",
    "hf_reference",
    "fock_matrix",
    "hf_energy",
    "build_ph_hamiltonian",
    "number_operator",
    "normal_ordered_word",
]

CREATE = 1
ANNIHILATE = 0

PRUNE_TOL = 1e-12


def _word_is_zero(word):
    """True when a word is identically zero.

    A word vanishes when some mode's kind subsequence repeats the same
    kind twice in a row (a+ a+ or a a on one mode, separated only by
    factors on other modes, which at most flip the sign).
    """
    last = {}
    for mode, kind in word:
        if last.get(mode) == kind:
            return True
        last[mode] = kind
    return False


def _sort_key(item):
    word, _ = item
    return (len(word), tuple(m for m, _ in word), tuple(k for _, k in word))


class FermionOperator:
    """Complex-weighted sum of ordered creation/annihilation strings.

    Words are stored exactly as constructed (no anticommutation is
    applied); ``simplify`` merges equal words, drops identically-zero
    words and negligible coefficients, and keeps the term list in a
    canonical sort so structural equality is representation independent.
    Instances are treated as immutable values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict mapping word (tuple of (mode, kind)) -> complex coefficient
        self.terms = dict(terms) if terms else {}

    @classmethod
    def from_term(cls, coefficient, word=()):
        return cls({tuple(word): complex(coefficient)})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def identity(cls, coefficient=1.0):
        return cls.from_term(coefficient)

    @classmethod
    def ladder(cls, mode, kind, coefficient=1.0):
        return cls.from_term(coefficient, ((mode, kind),))

    def n_modes(self):
        return 1 + max((m for word in self.terms for m, _ in word), default=-1)

    def __add__(self, other):
        out = dict(self.terms)
        for word, c in other.terms.items():
            out[word] = out.get(word, 0.0) + c
        return FermionOperator(out)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, FermionOperator):
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, 0.0) + c1 * c2
            return FermionOperator(out)
        out = {w: c * other for w, c in self.terms.items()}
        return FermionOperator(out)

    __rmul__ = __mul__

    def adjoint(self):
        out = {}
        for word, c in self.terms.items():
            w = tuple((m, 1 - k) for m, k in reversed(word))
            out[w] = out.get(w, 0.0) + np.conj(c)
        return FermionOperator(out)

    def simplify(self, tol=PRUNE_TOL):
        out = {}
        for word, c in self.terms.items():
            if _word_is_zero(word):
                continue
            out[word] = out.get(word, 0.0) + c
        cleaned = {w: c for w, c in out.items() if abs(c) >= tol}
        ordered = dict(sorted(cleaned.items(), key=_sort_key))
        return FermionOperator(ordered)

    def is_zero(self, tol=PRUNE_TOL):
        return not self.simplify(tol).terms

    def __eq__(self, other):
        if not isinstance(other, FermionOperator):
            return NotImplemented
        return self.simplify().terms == other.simplify().terms

    def __repr__(self):
        if not self.terms:
            return "FermionOperator<0>"
        parts = []
        for word, c in sorted(self.terms.items(), key=_sort_key):
            ops = " ".join(f"a^{m}" if k == CREATE else f"a{m}" for m, k in word)
            parts.append(f"({c.real:+g}{c.imag:+g}j) {ops}".rstrip())
        return "FermionOperator<" + " + ".join(parts) + ">"

    def render(self):
        """Debug text like ``(-1.0) a^0 a0``, one term per line."""
        lines = []
        for word, c in sorted(self.simplify().terms.items(), key=_sort_key):
            ops = " ".join(f"a^{m}" if k == CREATE else f"a{m}" for m, k in word)
            coeff = f"{c.real!r}" if abs(c.imag) < PRUNE_TOL else f"{c!r}"
            lines.append(f"({coeff}) {ops}".rstrip())
        return "\n".join(lines)


@dataclass(frozen=True)
class OccupationState:
    """A determinant given by its set of occupied modes."""

    n_modes: int
    occupied: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        occ = frozenset(self.occupied)
        object.__setattr__(self, "occupied", occ)
        if any(not (0 <= m < self.n_modes) for m in occ):
            raise ValueError("occupied index outside [0, n_modes)")

    @property
    def n_occupied(self):
        return len(self.occupied)

    def index(self):
        """Little-endian basis index with bit j set for occupied mode j."""
        return sum(1 << m for m in self.occupied)


@dataclass
class PhHamiltonian:
    """Particle-hole Hamiltonian: reference energy plus normal-ordered body."""

    e_hf: float
    body: FermionOperator
    occupied: frozenset

    def as_fermion_operator(self):
        return (FermionOperator.identity(self.e_hf) + self.body).simplify()


def hf_reference(n_electrons, n_modes):
    """Reference determinant occupying the lowest ``n_electrons`` modes."""
    if n_electrons > n_modes:
        raise ValueError(f"n_electrons={n_electrons} exceeds n_modes={n_modes}")
    if n_electrons < 0:
        raise ValueError("n_electrons must be non-negative")
    return OccupationState(n_modes, frozenset(range(n_electrons)))


def build_sq_hamiltonian(so):
    """Second-quantized Hamiltonian from spin-orbital integrals.

    H = e_core + sum_pq h_pq a+_p a_q
        + 1/2 sum_pqrs <pq|g|rs> a+_p a+_q a_s a_r
    """
    n = so.n_so
    terms = {}
    if so.e_core != 0.0:
        terms[()] = complex(so.e_core)
    h = so.h_so
    g = so.g_phys
    for p in range(n):
        for q in range(n):
            if h[p, q] != 0.0:
                terms[((p, CREATE), (q, ANNIHILATE))] = complex(h[p, q])
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = g[p, q, r, s]
                    if v == 0.0:
                        continue
                    word = ((p, CREATE), (q, CREATE), (s, ANNIHILATE), (r, ANNIHILATE))
                    terms[word] = terms.get(word, 0.0) + 0.5 * v
    return FermionOperator(terms).simplify()


def fock_matrix(so, occ):
    """Fock matrix F_rs = h_rs + sum_i (<ri|g|si> - <ri|g|is>) over occupied i."""
    idx = sorted(occ.occupied)
    f = so.h_so.copy()
    if idx:
        g = so.g_phys
        f = f + np.einsum("risi->rs", g[:, idx][:, :, :, idx])
        f = f - np.einsum("riis->rs", g[:, idx][:, :, idx, :])
    return f


def hf_energy(so, occ):
    """Reference-determinant expectation of the Hamiltonian, e_core included."""
    idx = sorted(occ.occupied)
    e = so.e_core + float(np.sum(so.h_so[idx, idx]))
    if idx:
        g = so.g_phys[np.ix_(idx, idx, idx, idx)]
        coulomb = np.einsum("ijij->", g)
        exchange = np.einsum("ijji->", g)
        e += 0.5 * float(coulomb - exchange)
    return e


def normal_ordered_word(word, occupied):
    """Normal order a ladder word with respect to a filled reference.

    Rewrites in quasi-particle language (occupied modes swap the roles of
    creation and annihilation), stably moves quasi-particle creators left
    of annihilators counting one sign flip per adjacent transposition,
    drops all contractions, and maps back.  Returns (sign, word); the sign
    is 0 when the word is identically zero as a quasi-particle product.
    """
    tagged = []
    for mode, kind in word:
        hole = mode in occupied
        b_create = (kind == ANNIHILATE) if hole else (kind == CREATE)
        tagged.append((b_create, mode, kind))

    sign = 1
    items = list(tagged)
    # insertion sort by descending b_create, counting adjacent swaps
    for i in range(1, len(items)):
        j = i
        while j > 0 and (not items[j - 1][0]) and items[j][0]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1

    ordered = tuple((mode, kind) for _, mode, kind in items)
    if _word_is_zero(ordered):
        return 0, ()
    return sign, ordered


def build_ph_hamiltonian(so, occ):
    """Rewrite the Hamiltonian with the reference determinant as vacuum.

    The body is the Fock-weighted normal-ordered one-body part plus the
    half-weighted normal-ordered two-body part; the dropped contractions
    are exactly the reference energy, so e_hf + body reproduces the
    second-quantized Hamiltonian as an operator.
    """
    n = so.n_so
    occupied = occ.occupied
    e_hf = hf_energy(so, occ)
    f = fock_matrix(so, occ)
    g = so.g_phys

    terms = {}

    def add(coefficient, raw_word):
        sign, word = normal_ordered_word(raw_word, occupied)
        if sign == 0:
            return
        c = sign * coefficient
        terms[word] = terms.get(word, 0.0) + c

    for r in range(n):
        for s in range(n):
            if f[r, s] != 0.0:
                add(complex(f[r, s]), ((r, CREATE), (s, ANNIHILATE)))
    for r in range(n):
        for s in range(n):
            for t in range(n):
                for u in range(n):
                    v = g[r, s, t, u]
                    if v == 0.0:
                        continue
                    add(0.5 * v, ((r, CREATE), (s, CREATE), (u, ANNIHILATE), (t, ANNIHILATE)))

    body = FermionOperator(terms).simplify()
    return PhHamiltonian(e_hf=e_hf, body=body, occupied=frozenset(occupied))


def number_operator(n_modes):
    """Total particle-number operator sum_p a+_p a_p."""
    terms = {((p, CREATE), (p, ANNIHILATE)): complex(1.0) for p in range(n_modes)}
    return FermionOperator(terms)
