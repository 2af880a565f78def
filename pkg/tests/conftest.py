import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psifrac import (
    assemble_composed,
    build_pair,
    make_spec,
    principal_eigenpair,
    solve_e,
)

# the alpha=1 catalog problem: classical limit, identity kernel, constant
# Kirchhoff coefficient, square-root reaction with nu=1/2
CATALOG = dict(
    alpha=1.0, beta=0.5, psi="identity", nu=0.5, lam=50.0, T=1.0,
    grid_n=257, h="sqrt", m="constant", zeta0=1.0, zeta_inf=1.0,
)
CATALOG_R = 0.8


@pytest.fixture(scope="session")
def catalog_spec():
    return make_spec(**CATALOG)


@pytest.fixture(scope="session")
def catalog_op(catalog_spec):
    return assemble_composed(catalog_spec)


@pytest.fixture(scope="session")
def catalog_eig(catalog_op):
    return principal_eigenpair(catalog_op, tol=1e-9)


@pytest.fixture(scope="session")
def catalog_e(catalog_op):
    return solve_e(catalog_op)


@pytest.fixture(scope="session")
def catalog_pair(catalog_spec, catalog_eig, catalog_e):
    return build_pair(catalog_spec, catalog_eig, catalog_e, CATALOG_R)


@pytest.fixture(scope="session")
def small_spec():
    return make_spec(**{**CATALOG, "grid_n": 65})


@pytest.fixture(scope="session")
def small_op(small_spec):
    return assemble_composed(small_spec)


@pytest.fixture(scope="session")
def small_eig(small_op):
    return principal_eigenpair(small_op, tol=1e-9)


@pytest.fixture(scope="session")
def small_e(small_op):
    return solve_e(small_op)
