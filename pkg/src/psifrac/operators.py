"""The composed Kirchhoff differential operator, its eigenpair, and helpers.

The full operator is the matrix product of the right and left fractional
derivative matrices with the two boundary rows replaced by unit rows
(homogeneous Dirichlet).  All solves work on the interior block, whose LU
factorization is computed once at assembly and reused; the stored objects
are immutable afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .calculus import OperatorMatrix, OpTag, Side, hilfer_derivative_matrix
from .core import Field, ProblemSpec, validate_spec

__all__ = [
    "ComposedOperator",
    "EigenPair",
    "assemble_composed",
    "principal_eigenpair",
    "solve_e",
    "energy",
]


@dataclass(frozen=True)
class ComposedOperator:
    """Dirichlet realization of D_right(D_left u) on the grid.

    a_full keeps field indices aligned with grid nodes (unit boundary
    rows); interior solves use the cached factorization of the interior
    block.
    """

    a_full: OperatorMatrix
    d_left: OperatorMatrix
    spec: ProblemSpec
    _lu: tuple = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.a_full.n

    @property
    def interior(self) -> slice:
        return slice(1, self.n - 1)

    def interior_block(self) -> np.ndarray:
        return self.a_full.entries[1:-1, 1:-1]

    def solve_interior(self, rhs_interior: np.ndarray) -> Field:
        """Solve A u = rhs on the interior with zero Dirichlet data."""
        rhs_interior = np.asarray(rhs_interior, dtype=float)
        if rhs_interior.shape != (self.n - 2,):
            raise ValueError(
                f"rhs length {rhs_interior.shape} does not match interior size {self.n - 2}"
            )
        out = np.zeros(self.n)
        out[1:-1] = lu_solve(self._lu, rhs_interior)
        return out

    def apply_full(self, f: Field) -> Field:
        return self.a_full.entries @ np.asarray(f, dtype=float)


def assemble_composed(spec: ProblemSpec) -> ComposedOperator:
    """Build the composed operator for the problem data.

    Interior rows are (hilfer_right @ hilfer_left); rows 0 and n-1 are
    unit rows enforcing u = 0 at the boundary.
    """
    bad = validate_spec(spec)
    if bad:
        raise ValueError("invalid problem spec: " + "; ".join(bad))
    left = hilfer_derivative_matrix(spec.grid, spec.psi, spec.order, Side.LEFT)
    right = hilfer_derivative_matrix(spec.grid, spec.psi, spec.order, Side.RIGHT)
    a = right.entries @ left.entries
    a[0, :] = 0.0
    a[0, 0] = 1.0
    a[-1, :] = 0.0
    a[-1, -1] = 1.0
    lu = lu_factor(a[1:-1, 1:-1])
    return ComposedOperator(OperatorMatrix(a, OpTag.COMPOSED), left, spec, lu)


@dataclass(frozen=True)
class EigenPair:
    """Principal eigenpair of the composed operator with diagnostics.

    psi1 is sup-normalized with positive sign and zero boundary values.
    positive_interior reports whether every interior value is strictly
    positive; for alpha < 1 the discrete operator can lose positivity,
    which is reported here rather than asserted.
    """

    lambda1: float
    psi1: Field
    iterations: int
    residual: float
    converged: bool
    positive_interior: bool

    @property
    def psi1_min_interior(self) -> float:
        return float(self.psi1[1:-1].min())


def principal_eigenpair(
    op: ComposedOperator, tol: float = 1e-9, max_iter: int = 5000
) -> EigenPair:
    """Smallest-magnitude eigenpair by inverse power iteration.

    Iterates from a strictly positive start vector, reusing the interior
    LU factorization.  Stops once successive Rayleigh quotients differ by
    less than tol (relative) and the eigen-residual is below
    10 * tol * |lambda1|.  Raises on non-convergence.
    """
    m = op.n - 2
    a_int = op.interior_block()
    v = np.ones(m)
    lam = 0.0
    it = 0
    steps: list[float] = []
    for it in range(1, max_iter + 1):
        w = lu_solve(op._lu, v)
        w = w / np.abs(w).max()
        lam_new = float(w @ (a_int @ w)) / float(w @ w)
        steps.append(lam_new - lam)
        drift = abs(lam_new - lam)
        v = w
        lam = lam_new
        if drift <= tol * abs(lam):
            resid = float(np.abs(a_int @ v - lam * v).max())
            if resid <= 10.0 * tol * abs(lam):
                break
    else:
        tail = steps[-6:]
        flips = sum(1 for a, b in zip(tail, tail[1:]) if a * b < 0)
        hint = (
            "; the Rayleigh quotient oscillates, so the bottom of the spectrum is "
            "likely a complex pair (no real principal eigenpair at this discretization)"
            if flips >= 3
            else ""
        )
        raise RuntimeError(
            f"inverse power iteration did not converge in {max_iter} iterations "
            f"(last lambda {lam:.6g}{hint})"
        )
    # orient by the dominant component, then sup-normalize on the full grid
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    full = np.zeros(op.n)
    full[1:-1] = v / np.abs(v).max()
    resid = float(np.abs(a_int @ full[1:-1] - lam * full[1:-1]).max())
    return EigenPair(
        lambda1=lam,
        psi1=full,
        iterations=it,
        residual=resid,
        converged=True,
        positive_interior=bool(np.all(full[1:-1] > 0.0)),
    )


def solve_e(op: ComposedOperator) -> Field:
    """Solution of A e = 1 on the interior with e = 0 at the boundary.

    Positivity of e on the interior is checked and reported by the caller;
    for alpha = 1 it always holds, for alpha < 1 it is a diagnostic.
    """
    return op.solve_interior(np.ones(op.n - 2))


def energy(u: Field, op: ComposedOperator) -> float:
    """Trapezoid quadrature of |D_left u|^2 over the grid (the Kirchhoff argument)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (op.n,):
        raise ValueError(f"field length {u.shape} does not match grid size {op.n}")
    du = op.d_left.entries @ u
    return float(np.trapezoid(du * du, op.spec.grid.x))
