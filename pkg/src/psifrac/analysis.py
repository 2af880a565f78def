"""Constructive objects of the existence argument.

This module builds, from computed spectral data, the explicit
sub/supersolution pair: the linear majorant a*s - b of h(s) - s^(-nu), the
threshold zeta(lambda) balancing the Kirchhoff lower bound against h, the
eigenfunction power phi = lambda^r * psi1^(2/(1+nu)), the lifted field
Xi = zeta * e, and the discrete weak-inequality verifier that certifies
the pair against every interior tent test function.

The verifier integrates the bilinear form cell by cell: the derivative of
a tent test function (piecewise linear in the transformed variable u) is
known in closed form, so the quadrature pairs the matrix derivative of the
candidate field with exact one-sided cell-end values of the test
derivative.  Smearing a tent's kink through a difference stencil would
pollute the hats adjacent to the boundary with O(1) artifacts; the
closed-form route reproduces the supersolution chain discretely.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from .core import Field, Nonlinearity, ProblemSpec
from .operators import ComposedOperator, EigenPair, energy

__all__ = [
    "Majorant",
    "SubSuperPair",
    "VerifyReport",
    "TentBasis",
    "linear_majorant",
    "zeta_lambda",
    "build_subsolution",
    "build_supersolution",
    "build_pair",
    "verify_weak_inequality",
    "nonexistence_threshold",
    "empirical_mu2",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Majorant:
    """Linear bound h(s) - s^(-nu) <= a*s - b on the scan range, b > 0."""

    a: float
    b: float
    s_star: float
    scan_range: tuple[float, float]


def _golden_min(g, lo: float, hi: float, iters: int = 120) -> float:
    """Golden-section minimizer of g on [lo, hi]."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    for _ in range(iters):
        if g1 <= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLDEN * (hi - lo)
            g1 = g(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLDEN * (hi - lo)
            g2 = g(x2)
        if hi - lo <= 1e-14 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)


def linear_majorant(
    h: Nonlinearity, nu: float, a: float, s_max: float, s_min: float = 1e-8, n_scan: int = 20000
) -> Majorant:
    """Compute b = inf over (0, s_max] of g(s) = a*s - h(s) + s^(-nu).

    Log-spaced scan (>= 10^4 points) locates the best cell; golden-section
    refinement pins the minimizer.  Raises if h is not sublinear at s_max
    or if the infimum is nonpositive (slope a too small).
    """
    if a <= 0:
        raise ValueError(f"majorant slope must be positive, got {a}")
    if not 0 < nu < 1:
        raise ValueError(f"nu must lie in (0,1), got {nu}")
    if h(s_max) / s_max >= a:
        raise ValueError(f"h not sublinear at s_max: h({s_max:g})/{s_max:g} >= {a:g}")

    def g(s):
        return a * s - h(s) + s ** (-nu)

    s = np.logspace(math.log10(s_min), math.log10(s_max), n_scan)
    vals = g(s)
    k = int(np.argmin(vals))
    lo = s[max(k - 1, 0)]
    hi = s[min(k + 1, n_scan - 1)]
    s_star = _golden_min(g, lo, hi)
    b = float(g(s_star))
    # endpoint of the scan may beat the refined interior point
    if vals[-1] < b:
        s_star, b = float(s[-1]), float(vals[-1])
    if b <= 0:
        raise ValueError(
            f"majorant slope too small: infimum of a*s - h(s) + s^-nu is {b:.6g} <= 0; raise a"
        )
    return Majorant(a=a, b=b, s_star=float(s_star), scan_range=(s_min, s_max))


def zeta_lambda(
    h: Nonlinearity, lam: float, zeta0: float, e_sup: float, rel_tol: float = 1e-6
) -> float:
    """Smallest zeta with zeta0*zeta >= lam*h(zeta*e_sup), by doubling + bisection.

    Existence for the catalog members follows from h(s)/s -> 0.  The search
    floor 1e-12 is returned directly when the inequality already holds
    there (h == 0, say).
    """
    if lam <= 0 or zeta0 <= 0 or e_sup <= 0:
        raise ValueError("lambda, zeta0 and e_sup must all be positive")

    def ok(z):
        return zeta0 * z >= lam * h(z * e_sup)

    z = 1e-12
    if ok(z):
        return z
    while not ok(z):
        z *= 2.0
        if z > 1e12:
            raise RuntimeError("h not sublinear numerically: no zeta below 1e12 satisfies the bound")
    lo, hi = z / 2.0, z
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def build_subsolution(lam: float, r: float, nu: float, eig: EigenPair) -> Field:
    """phi = lambda^r * psi1^(2/(1+nu)), with r in the window (1/(1+nu), 1).

    Negative eigenfunction values (possible for alpha < 1 at coarse grids)
    are clipped to zero before the fractional power.
    """
    lo = 1.0 / (1.0 + nu)
    if not lo < r < 1.0:
        raise ValueError(f"exponent r must lie in ({lo:.6g}, 1), got {r}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    base = np.clip(eig.psi1, 0.0, None)
    return lam**r * base ** (2.0 / (1.0 + nu))


def build_supersolution(zeta: float, e: Field) -> Field:
    """Xi = zeta * e pointwise."""
    if zeta <= 0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    return zeta * np.asarray(e, dtype=float)


@dataclass(frozen=True)
class SubSuperPair:
    """Ordered candidate pair (phi below, xi above) with its data."""

    phi: Field
    xi: Field
    r: float
    zeta: float

    def ordered(self) -> bool:
        return bool(np.all(self.phi <= self.xi + 1e-14))


def build_pair(
    spec: ProblemSpec, eig: EigenPair, e: Field, r: float
) -> SubSuperPair:
    """Assemble the pair, raising zeta until xi dominates phi pointwise.

    zeta starts at the threshold of `zeta_lambda` and is raised to the
    largest interior ratio phi_i / e_i when that is bigger, which is the
    smallest scaling that makes zeta*e >= phi hold exactly.
    """
    phi = build_subsolution(spec.lam, r, spec.nu, eig)
    e = np.asarray(e, dtype=float)
    if np.any(e[1:-1] <= 0):
        # a computed-outcome failure (coarse fractional discretization),
        # not caller misuse
        raise RuntimeError(
            "e is not positive on the interior; cannot scale it into a supersolution"
        )
    z = zeta_lambda(spec.h, spec.lam, spec.m.zeta0, float(e.max()))
    ratio = float(np.max(phi[1:-1] / e[1:-1]))
    z = max(z, ratio)
    xi = build_supersolution(z, e)
    pair = SubSuperPair(phi=phi, xi=xi, r=r, zeta=z)
    if not pair.ordered():
        raise AssertionError("pair ordering failed after raising zeta; should be impossible")
    return pair


class TentBasis:
    """Interior tent test functions and their closed-form left derivatives.

    The tent at node i is piecewise linear in u with value 1 at u_i and 0
    at its neighbors.  Its left Hilfer-type derivative is a combination of
    three shifted kernels (u - u_k)_+^(1-alpha) / Gamma(2-alpha), which is
    independent of the type parameter beta.  For alpha = 1 these kernels
    degenerate to steps and the one-sided cell-end convention recovers the
    exact piecewise-constant slopes.
    """

    def __init__(self, spec: ProblemSpec):
        u = spec.grid.u
        x = spec.grid.x
        n = spec.grid.n
        alpha = spec.order.alpha
        ex = 1.0 - alpha
        du = np.diff(u)
        ncell = n - 1
        lv = np.zeros((n - 2, ncell))
        rv = np.zeros((n - 2, ncell))
        coef_scale = 1.0 / gamma_fn(2.0 - alpha)
        ul = u[:-1]
        ur = u[1:]
        for i in range(1, n - 1):
            coefs = (
                1.0 / du[i - 1],
                -(1.0 / du[i - 1] + 1.0 / du[i]),
                1.0 / du[i],
            )
            bases = (u[i - 1], u[i], u[i + 1])
            row_l = np.zeros(ncell)
            row_r = np.zeros(ncell)
            for c, b in zip(coefs, bases):
                dl = ul - b
                # left cell end is a right-limit: include the kink itself
                # (0^0 == 1 realizes the step convention at alpha = 1)
                row_l += np.where(dl >= 0.0, c * np.power(np.maximum(dl, 0.0), ex), 0.0)
                dr = ur - b
                row_r += np.where(dr > 0.0, c * np.power(np.maximum(dr, 0.0), ex), 0.0)
            lv[i - 1] = row_l * coef_scale
            rv[i - 1] = row_r * coef_scale
        half_dx = 0.5 * np.diff(x)
        self._wl = lv * half_dx
        self._wr = rv * half_dx
        # trapezoid weights of the nodal tent values, for the reaction side
        tw = np.empty(n)
        tw[1:-1] = 0.5 * (x[2:] - x[:-2])
        tw[0] = 0.5 * (x[1] - x[0])
        tw[-1] = 0.5 * (x[-1] - x[-2])
        self.node_weights = tw

    def bilinear(self, d_u: np.ndarray) -> np.ndarray:
        """Cell-trapezoid of (d_u)*(tent derivative) against every tent.

        d_u holds the nodal values of the candidate field's left derivative.
        Returns one value per interior node.
        """
        return self._wl @ d_u[:-1] + self._wr @ d_u[1:]


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the weak sub/super inequality check for one field."""

    side: str
    passed: bool
    margins: Field
    worst_margin: float
    worst_node: int
    tol_margin: float

    @property
    def verdict(self) -> str:
        return f"{self.side}-pass" if self.passed else f"{self.side}-fail"


def verify_weak_inequality(
    u: Field,
    op: ComposedOperator,
    side: str,
    basis: TentBasis | None = None,
) -> VerifyReport:
    """Check the weak inequality of the given side against all interior tents.

    For each interior test function w_i computes
    L_i = M(energy(u)) * int (D_left u)(D_left w_i) and
    R_i = lambda * int (h(u) - u^-nu) w_i, both by trapezoid quadrature;
    the margin is R_i - L_i for side="sub" (must be >= -tol_margin) and
    L_i - R_i for side="super".  tol_margin = 1e-8 * (1 + sup|R|).
    """
    spec = op.spec
    u = np.asarray(u, dtype=float)
    n = spec.grid.n
    if u.shape != (n,):
        raise ValueError(f"field length {u.shape} does not match grid size {n}")
    if side not in ("sub", "super"):
        raise ValueError(f"side must be 'sub' or 'super', got {side!r}")
    scale = 1.0 + float(np.abs(u).max())
    if abs(u[0]) > 1e-12 * scale or abs(u[-1]) > 1e-12 * scale:
        raise ValueError("field must vanish at both boundary nodes")
    ui = u[1:-1]
    if np.any(ui <= 0.0):
        raise ValueError(
            "singular-term failure: field must be strictly positive on the interior"
        )
    if basis is None:
        basis = TentBasis(spec)
    m_val = spec.m(energy(u, op))
    d_u = op.d_left.entries @ u
    left = m_val * basis.bilinear(d_u)
    react = spec.lam * (spec.h(ui) - ui ** (-spec.nu))
    right = react * basis.node_weights[1:-1]
    margins = (right - left) if side == "sub" else (left - right)
    tol_margin = 1e-8 * (1.0 + float(np.abs(right).max()))
    worst = int(np.argmin(margins))
    return VerifyReport(
        side=side,
        passed=bool(margins[worst] >= -tol_margin),
        margins=margins,
        worst_margin=float(margins[worst]),
        worst_node=worst + 1,
        tol_margin=tol_margin,
    )


def nonexistence_threshold(lambda1: float, zeta_inf: float, a: float) -> float:
    """mu1 = lambda1 / (zeta_inf * a): no positive solution below this lambda."""
    if lambda1 <= 0 or zeta_inf <= 0 or a <= 0:
        raise ValueError("lambda1, zeta_inf and a must all be positive")
    return lambda1 / (zeta_inf * a)


def empirical_mu2(
    spec: ProblemSpec,
    op: ComposedOperator,
    eig: EigenPair,
    e: Field,
    r: float,
    lam_max: float = 150.0,
    step: float = 0.25,
) -> float | None:
    """Smallest lambda >= 1 (grid search) at which both verifications pass.

    Returns None when no lambda up to lam_max passes.  The existence proof
    guarantees such a threshold exists but gives no formula, so it is
    located empirically.
    """
    basis = TentBasis(spec)
    lam = 1.0
    while lam <= lam_max + 1e-12:
        trial = dataclasses.replace(spec, lam=lam)
        trial_op = dataclasses.replace(op, spec=trial)
        pair = build_pair(trial, eig, e, r)
        sub = verify_weak_inequality(pair.phi, trial_op, "sub", basis)
        sup = verify_weak_inequality(pair.xi, trial_op, "super", basis)
        if sub.passed and sup.passed:
            return lam
        lam += step
    return None
