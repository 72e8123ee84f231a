"""Input validation helpers shared by the estimator and the CLI."""

from __future__ import annotations

import os

from .integrals import MolecularIntegrals, load_fcidump, parse_fcidump

__all__ = [
    "ANSATZ_NAMES",
    "as_molecular_integrals",
    "check_ansatz_name",
    "check_positive",
    "resolve_active_window",
]

ANSATZ_NAMES = ("uccsd", "ex1", "ex2", "cnot")


def as_molecular_integrals(x):
    """Coerce a fit input to MolecularIntegrals.

    Accepts an existing MolecularIntegrals, a path to an FCIDUMP file, or
    raw FCIDUMP text (recognized by its leading &FCI namelist).
    """
    if isinstance(x, MolecularIntegrals):
        x.validate()
        return x
    if isinstance(x, (str, os.PathLike)):
        text = str(x)
        if text.lstrip().upper().startswith("&FCI"):
            return parse_fcidump(text)
        return load_fcidump(x)
    raise TypeError(
        f"expected MolecularIntegrals, an FCIDUMP path, or FCIDUMP text; got {type(x).__name__}")


def check_ansatz_name(name):
    normalized = str(name).lower()
    if normalized not in ANSATZ_NAMES:
        raise ValueError(f"ansatz must be one of {ANSATZ_NAMES}, got {name!r}")
    return normalized


def check_positive(value, name, minimum=1):
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def resolve_active_window(n_so, n_electrons, active_occ=None, active_virt=None):
    """Spin-orbital index sets for an active-space restriction.

    ``active_occ`` counts occupied spin orbitals taken downward from the
    Fermi level; ``active_virt`` counts virtual spin orbitals taken upward
    from it.  None means the full set on that side.
    """
    n_virtuals = n_so - n_electrons
    if active_occ is None:
        active_occ = n_electrons
    if active_virt is None:
        active_virt = n_virtuals
    active_occ = int(active_occ)
    active_virt = int(active_virt)
    if not (0 <= active_occ <= n_electrons):
        raise ValueError(f"active-occ {active_occ} outside [0, {n_electrons}]")
    if not (0 <= active_virt <= n_virtuals):
        raise ValueError(f"active-virt {active_virt} outside [0, {n_virtuals}]")
    occ_window = frozenset(range(n_electrons - active_occ, n_electrons))
    virt_window = frozenset(range(n_electrons, n_electrons + active_virt))
    return occ_window, virt_window
