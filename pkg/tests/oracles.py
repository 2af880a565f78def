"""Independent oracles for the test suite.

Nothing here touches the package's operator matrices: the BVP oracle uses
its own classical three-point stencil with a banded Newton solve, and the
closed forms are evaluated straight from special functions.  Expected
values frozen into tests were computed with these routines.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_banded


def frac_integral_of_one(u: np.ndarray, order: float) -> np.ndarray:
    """Closed form: the order-a left integral of f=1 is (u - u0)^a / Gamma(a+1)."""
    return (u - u[0]) ** order / math.gamma(order + 1.0)


def classical_e(x: np.ndarray, T: float) -> np.ndarray:
    """Solution of -e'' = 1 with Dirichlet data: x(T-x)/2."""
    return x * (T - x) / 2.0


def newton_fd_bvp(
    lam: float,
    h_fn,
    nu: float,
    T: float = 1.0,
    n: int = 8193,
    u0_scale: float = 30.0,
    tol: float = 1e-12,
    max_iter: int = 100,
):
    """Classical nonlinear two-point BVP solve of -u'' = lam*(h(u) - u^-nu).

    Damped-free Newton on the standard three-point stencil at a fine mesh;
    returns (x, u).  Completely independent of the package discretization
    (different stencil, different linearization, different solver).
    """
    x = np.linspace(0.0, T, n)
    h = x[1] - x[0]
    u = np.maximum(u0_scale * np.sin(np.pi * x / T), 1e-8)
    u[0] = u[-1] = 0.0
    for _ in range(max_iter):
        ui = np.maximum(u[1:-1], 1e-14)
        f = lam * (h_fn(ui) - ui ** (-nu))
        d = 1e-7 * (1.0 + ui)
        fp = lam * ((h_fn(ui + d) - h_fn(ui)) / d + nu * ui ** (-nu - 1.0))
        res = -(u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2 - f
        ab = np.zeros((3, n - 2))
        ab[0, 1:] = -1.0 / h**2
        ab[1, :] = 2.0 / h**2 - fp
        ab[2, :-1] = -1.0 / h**2
        step = solve_banded((1, 1), ab, -res)
        u[1:-1] = np.maximum(u[1:-1] + step, 1e-14)
        if np.abs(step).max() < tol * (1.0 + np.abs(u).max()):
            break
    return x, u


def powers_sup_norm_error(got: np.ndarray, want: np.ndarray, collar: int) -> float:
    """Sup error over interior nodes with the first `collar` nodes excluded."""
    return float(np.abs(got - want)[collar:-1].max())
