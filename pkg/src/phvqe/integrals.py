"""Molecular integral ingestion.

Parses FCIDUMP interchange files (spatial-orbital one- and two-electron
integrals in chemist notation, nuclear-repulsion/core constant, electron
count) and expands them to the spin-orbital, physicist-notation tensors
that the Hamiltonian builders consume.

Spin-orbital convention: interleaved by spatial orbital, spatial orbitals
in ascending orbital-energy order as stored in the file, so spin orbital
2k is (spatial k, alpha) and 2k+1 is (spatial k, beta).  The closed-shell
reference determinant then occupies the first `n_electrons` spin orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FcidumpError",
    "MolecularIntegrals",
    "SpinOrbitalIntegrals",
    "parse_fcidump",
    "load_fcidump",
    "render_fcidump",
    "to_spin_orbitals",
]

SYMMETRY_TOL = 1e-12
DUPLICATE_TOL = 1e-10


class FcidumpError(ValueError):
    """Malformed FCIDUMP content; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass
class MolecularIntegrals:
    """Spatial-orbital integrals as stored in an FCIDUMP file.

    ``h`` is the core one-electron matrix and ``g_chem`` the rank-4
    two-electron tensor in chemist notation (ij|kl); both in Hartree.
    ``e_core`` carries nuclear repulsion plus any core constant folded
    in by the fixture generator.
    """

    n_spatial: int
    n_electrons: int
    e_core: float
    h: np.ndarray
    g_chem: np.ndarray
    ms2: int = 0
    source_label: str = ""

    def validate(self):
        """Check symmetry and range invariants; raises ValueError."""
        n = self.n_spatial
        if self.h.shape != (n, n):
            raise ValueError(f"h has shape {self.h.shape}, expected {(n, n)}")
        if self.g_chem.shape != (n, n, n, n):
            raise ValueError("g_chem shape does not match n_spatial")
        if not (0 < self.n_electrons <= 2 * n):
            raise ValueError(f"n_electrons={self.n_electrons} outside (0, {2 * n}]")
        if np.max(np.abs(self.h - self.h.T)) > SYMMETRY_TOL:
            raise ValueError("one-electron matrix is not symmetric")
        g = self.g_chem
        for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
            if np.max(np.abs(g - g.transpose(perm))) > SYMMETRY_TOL:
                raise ValueError(f"two-electron tensor lacks {perm} permutation symmetry")


@dataclass
class SpinOrbitalIntegrals:
    """Spin-orbital integrals with ``g_phys`` in physicist notation <pq|g|rs>."""

    n_so: int
    n_electrons: int
    e_core: float
    h_so: np.ndarray
    g_phys: np.ndarray
    source_label: str = ""

    def spin(self, p):
        return p & 1

    def validate(self):
        n = self.n_so
        g = self.g_phys
        if np.max(np.abs(g - g.transpose(1, 0, 3, 2))) > SYMMETRY_TOL:
            raise ValueError("<pq|g|rs> != <qp|g|sr>")
        spin = np.arange(n) & 1
        same = spin[:, None] == spin[None, :]
        if np.max(np.abs(self.h_so[~same])) > 0:
            raise ValueError("h_so mixes spins")
        bad = (~same[:, None, :, None]) | (~same[None, :, None, :])
        if np.max(np.abs(g[bad])) > 0:
            raise ValueError("g_phys violates the spin selection rule")


def _namelist_fields(header_tokens, line_of_token):
    """Split normalized namelist tokens into {KEY: [values]}."""
    fields = {}
    current = None
    for tok, line in zip(header_tokens, line_of_token):
        if "=" in tok:
            key, _, val = tok.partition("=")
            key = key.strip().upper()
            if not key:
                raise FcidumpError(f"namelist entry {tok!r} has no key", line)
            fields[key] = [val] if val else []
            current = key
        elif current is not None:
            fields[current].append(tok)
        else:
            raise FcidumpError(f"unexpected namelist token {tok!r}", line)
    return fields


def parse_fcidump(text, source_label=""):
    """Parse FCIDUMP text into :class:`MolecularIntegrals`.

    The &FCI namelist must define NORB and NELEC; MS2 defaults to 0.
    ORBSYM and ISYM entries are accepted and ignored.  Data lines hold
    ``value i j k l`` with 1-based indices: all four nonzero fills the
    two-electron tensor (with 8-fold symmetry completion), k=l=0 fills
    the one-electron matrix, and the all-zero line sets e_core.
    """
    lines = text.splitlines()
    header_tokens = []
    token_lines = []
    body_start = None
    seen_fci = False
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if not seen_fci:
            if not stripped.upper().startswith("&FCI"):
                raise FcidumpError("file must begin with an &FCI namelist", ln)
            seen_fci = True
            stripped = stripped[4:]
        end = None
        upper = stripped.upper()
        for terminator in ("&END", "/"):
            pos = upper.find(terminator)
            if pos >= 0:
                end = (pos, len(terminator))
                break
        head_part = stripped if end is None else stripped[: end[0]]
        for tok in head_part.replace(",", " ").split():
            header_tokens.append(tok)
            token_lines.append(ln)
        if end is not None:
            body_start = ln
            break
    else:
        raise FcidumpError("namelist never terminated with &END or /", len(lines))

    fields = _namelist_fields(header_tokens, token_lines)
    for required in ("NORB", "NELEC"):
        if required not in fields or not fields[required]:
            raise FcidumpError(f"namelist is missing {required}", body_start)

    def int_field(key, default=None):
        vals = fields.get(key)
        if not vals:
            return default
        try:
            return int(vals[0])
        except ValueError as exc:
            raise FcidumpError(f"{key} value {vals[0]!r} is not an integer", body_start) from exc

    n_spatial = int_field("NORB")
    n_electrons = int_field("NELEC")
    ms2 = int_field("MS2", 0)
    if n_spatial is None or n_spatial <= 0:
        raise FcidumpError("NORB must be a positive integer", body_start)

    h = np.zeros((n_spatial, n_spatial))
    g = np.zeros((n_spatial,) * 4)
    h_set = np.zeros((n_spatial, n_spatial), dtype=bool)
    g_set = np.zeros((n_spatial,) * 4, dtype=bool)
    e_core = 0.0

    def check_index(idx, ln):
        if not (1 <= idx <= n_spatial):
            raise FcidumpError(f"orbital index {idx} outside [1, {n_spatial}]", ln)
        return idx - 1

    for ln, raw in enumerate(lines[body_start:], start=body_start + 1):
        parts = raw.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {raw!r}", ln)
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"cannot parse data line {raw!r}", ln) from exc
        if i == j == k == l == 0:
            e_core = value
        elif k == 0 and l == 0 and i > 0 and j > 0:
            a, b = check_index(i, ln), check_index(j, ln)
            for p, q in ((a, b), (b, a)):
                if h_set[p, q] and abs(h[p, q] - value) > DUPLICATE_TOL:
                    raise FcidumpError(
                        f"conflicting one-electron entry ({i},{j}): "
                        f"{h[p, q]!r} vs {value!r}", ln)
                h[p, q] = value
                h_set[p, q] = True
        elif i > 0 and j > 0 and k > 0 and l > 0:
            a, b, c, d = (check_index(x, ln) for x in (i, j, k, l))
            for p, q, r, s in _eightfold((a, b, c, d)):
                if g_set[p, q, r, s] and abs(g[p, q, r, s] - value) > DUPLICATE_TOL:
                    raise FcidumpError(
                        f"conflicting two-electron entry ({i},{j},{k},{l}): "
                        f"{g[p, q, r, s]!r} vs {value!r}", ln)
                g[p, q, r, s] = value
                g_set[p, q, r, s] = True
        else:
            raise FcidumpError(f"unsupported index pattern ({i},{j},{k},{l})", ln)

    mi = MolecularIntegrals(
        n_spatial=n_spatial, n_electrons=n_electrons, e_core=e_core,
        h=h, g_chem=g, ms2=ms2, source_label=source_label)
    mi.validate()
    return mi


def _eightfold(idx):
    """The 8 chemist-notation index permutations of (ij|kl) for real orbitals."""
    i, j, k, l = idx
    return {
        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
    }


def load_fcidump(path):
    """Read and parse an FCIDUMP file, labeling it with the file stem."""
    import pathlib

    p = pathlib.Path(path)
    return parse_fcidump(p.read_text(), source_label=p.stem)


def render_fcidump(mi):
    """Render integrals back to FCIDUMP text.

    Writes one line per unique 8-fold orbit (two-electron) and unique
    upper triangle (one-electron), so parse(render(mi)) reproduces all
    stored values exactly.
    """
    n = mi.n_spatial
    out = [f" &FCI NORB={n},NELEC={mi.n_electrons},MS2={mi.ms2},"]
    out.append("  ORBSYM=" + ",".join("1" * n) + ",")
    out.append("  ISYM=1,")
    out.append(" &END")

    def fmt(value, i, j, k, l):
        return f" {float(value)!r} {i:3d} {j:3d} {k:3d} {l:3d}"

    seen = set()
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                for l in range(k + 1):
                    key = (i, j, k, l)
                    if key in seen:
                        continue
                    seen.update(_eightfold(key))
                    if mi.g_chem[i, j, k, l] != 0.0:
                        out.append(fmt(mi.g_chem[i, j, k, l], i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if mi.h[i, j] != 0.0:
                out.append(fmt(mi.h[i, j], i + 1, j + 1, 0, 0))
    out.append(fmt(mi.e_core, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def to_spin_orbitals(mi):
    """Expand spatial integrals to interleaved spin orbitals.

    Returns physicist-notation two-electron integrals
    <pq|g|rs> = (PR|QS) delta(spin p, spin r) delta(spin q, spin s)
    where capital letters are the spatial parts.
    """
    n = mi.n_spatial
    n_so = 2 * n
    spatial = np.arange(n_so) >> 1
    spin = np.arange(n_so) & 1

    h_so = mi.h[np.ix_(spatial, spatial)] * (spin[:, None] == spin[None, :])

    # chem[p,r,q,s] -> phys[p,q,r,s]
    g = mi.g_chem[np.ix_(spatial, spatial, spatial, spatial)].transpose(0, 2, 1, 3)
    same = spin[:, None] == spin[None, :]
    g = g * same[:, None, :, None] * same[None, :, None, :]

    so = SpinOrbitalIntegrals(
        n_so=n_so, n_electrons=mi.n_electrons, e_core=mi.e_core,
        h_so=h_so, g_phys=g, source_label=mi.source_label)
    return so
