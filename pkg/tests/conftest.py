import pathlib

import numpy as np
import pytest

from phvqe.integrals import MolecularIntegrals, load_fcidump

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name):
    path = FIXTURE_DIR / name
    if not path.exists():
        pytest.skip(f"fixture {name} not committed")
    return path


def sidecar_values(name):
    path = fixture_path(name).with_suffix(".sidecar")
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


_PARSED = {}


def load_fixture(name):
    if name not in _PARSED:
        _PARSED[name] = load_fcidump(fixture_path(name))
    return _PARSED[name]


def random_molecular_integrals(rng, n_spatial, n_electrons, scale=1.0):
    """Random integrals with the full 8-fold two-electron symmetry."""
    h = rng.normal(size=(n_spatial, n_spatial)) * scale
    h = 0.5 * (h + h.T)
    g = rng.normal(size=(n_spatial,) * 4) * scale
    g = g + g.transpose(1, 0, 2, 3)
    g = g + g.transpose(0, 1, 3, 2)
    g = g + g.transpose(2, 3, 0, 1)
    return MolecularIntegrals(
        n_spatial=n_spatial, n_electrons=n_electrons,
        e_core=float(rng.normal()), h=h, g_chem=g)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)
