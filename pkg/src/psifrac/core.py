"""Domain types: fractional orders, kernel functions, grids, and problem data.

Everything here is an immutable value object; instances can be shared freely
between threads or processes.  Function catalogs (the kernel-generating map,
the Kirchhoff coefficient, the reaction nonlinearity) are closed enums with
fixed analytic members so that the hypotheses placed on them can be checked
by tests instead of being assumed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Field",
    "FractionalOrder",
    "PsiKind",
    "PsiFunction",
    "Grid",
    "KirchhoffKind",
    "KirchhoffFn",
    "NonlinearityKind",
    "Nonlinearity",
    "ProblemSpec",
    "validate_spec",
]

# A field is a plain float vector with one value per grid node.
Field = np.ndarray


@dataclass(frozen=True)
class FractionalOrder:
    """Order/type pair (alpha, beta) of the fractional derivative.

    alpha must lie in (1/2, 1] and beta in [0, 1].  The two derived
    integral exponents g1 = beta*(1-alpha) and g2 = (1-beta)*(1-alpha)
    then lie in [0, 1/2) and sum to 1-alpha.
    """

    alpha: float
    beta: float = 0.5

    @property
    def g1(self) -> float:
        """Exponent of the outer (post-derivative) integral."""
        return self.beta * (1.0 - self.alpha)

    @property
    def g2(self) -> float:
        """Exponent of the inner (pre-derivative) integral."""
        return (1.0 - self.beta) * (1.0 - self.alpha)

    def violations(self) -> list[str]:
        out = []
        if not 0.5 < self.alpha <= 1.0:
            out.append(f"alpha must exceed 1/2 and be at most 1 (got {self.alpha})")
        if not 0.0 <= self.beta <= 1.0:
            out.append(f"beta must lie in [0, 1] (got {self.beta})")
        return out


class PsiKind(enum.Enum):
    IDENTITY = "identity"
    EXP_MINUS_ONE = "exp_minus_one"
    SQUARE = "square"
    LOG1P = "log1p"


@dataclass(frozen=True)
class PsiFunction:
    """Kernel-generating map psi: strictly increasing on (0, T], psi(0) finite.

    The catalog members and their derivatives:

    ==============  ================  ==============
    kind            psi(x)            psi'(x)
    ==============  ================  ==============
    identity        x                 1
    exp_minus_one   exp(k x) - 1      k exp(k x)
    square          x^2               2 x
    log1p           log(1 + x)        1 / (1 + x)
    ==============  ================  ==============

    Note psi' may vanish at x = 0 (square); downstream quadrature works in
    the transformed variable u = psi(x) and never divides by psi'.
    """

    kind: PsiKind = PsiKind.IDENTITY
    k: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is PsiKind.IDENTITY:
            return x.copy()
        if self.kind is PsiKind.EXP_MINUS_ONE:
            return np.expm1(self.k * x)
        if self.kind is PsiKind.SQUARE:
            return x * x
        return np.log1p(x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is PsiKind.IDENTITY:
            return np.ones_like(x)
        if self.kind is PsiKind.EXP_MINUS_ONE:
            return self.k * np.exp(self.k * x)
        if self.kind is PsiKind.SQUARE:
            return 2.0 * x
        return 1.0 / (1.0 + x)

    def violations(self) -> list[str]:
        out = []
        if self.kind is PsiKind.EXP_MINUS_ONE and self.k <= 0:
            out.append(f"psi_k must be positive for exp_minus_one (got {self.k})")
        return out

    @classmethod
    def from_name(cls, name: str, k: float = 1.0) -> "PsiFunction":
        try:
            kind = PsiKind(name)
        except ValueError:
            names = ", ".join(m.value for m in PsiKind)
            raise ValueError(f"unknown psi kind {name!r}; expected one of {names}") from None
        return cls(kind, k)


@dataclass(frozen=True)
class Grid:
    """Uniform node set on [0, T] together with its psi-transform.

    x holds the n uniform nodes, u the transformed values psi(x_i); the
    boundary index set is always {0, n-1}.
    """

    T: float
    n: int
    x: np.ndarray = field(repr=False, compare=False)
    u: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def make(cls, T: float, n: int, psi: PsiFunction) -> "Grid":
        x = np.linspace(0.0, float(T), int(n))
        g = cls(float(T), int(n), x, psi(x))
        g.x.setflags(write=False)
        g.u.setflags(write=False)
        return g

    @property
    def boundary(self) -> tuple[int, int]:
        return (0, self.n - 1)

    @property
    def interior(self) -> slice:
        return slice(1, self.n - 1)

    def violations(self) -> list[str]:
        out = []
        if self.T <= 0:
            out.append(f"T must be positive (got {self.T})")
        if self.n < 8:
            out.append(f"grid_n must be at least 8 (got {self.n})")
        if len(self.x) != self.n or len(self.u) != self.n:
            out.append("node arrays must have length grid_n")
            return out
        if self.n >= 2:
            if not np.all(np.diff(self.x) > 0):
                out.append("nodes must be strictly increasing")
            if not np.all(np.diff(self.u) > 0):
                out.append("transformed nodes must be strictly increasing (psi not increasing?)")
        return out


class KirchhoffKind(enum.Enum):
    CONSTANT = "constant"
    AFFINE = "affine"
    SATURATING = "saturating"


@dataclass(frozen=True)
class KirchhoffFn:
    """Nonlocal coefficient M with hard bounds zeta0 <= M(t) <= zeta_inf.

    The affine member a0 + b0*t is capped at zeta_inf so the upper bound
    is enforced rather than assumed; the saturating member is
    zeta0 + (zeta_inf - zeta0) * t/(t + scale).
    """

    kind: KirchhoffKind = KirchhoffKind.CONSTANT
    zeta0: float = 1.0
    zeta_inf: float = 1.0
    b0: float = 1.0
    scale: float = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is KirchhoffKind.CONSTANT:
            out = np.full_like(t, self.zeta0)
        elif self.kind is KirchhoffKind.AFFINE:
            out = np.minimum(self.zeta0 + self.b0 * t, self.zeta_inf)
        else:
            out = self.zeta0 + (self.zeta_inf - self.zeta0) * t / (t + self.scale)
        return float(out) if out.ndim == 0 else out

    def violations(self) -> list[str]:
        out = []
        if self.zeta0 <= 0:
            out.append(f"zeta0 must be positive (got {self.zeta0})")
        if self.zeta_inf < self.zeta0:
            out.append(f"zeta_inf must be at least zeta0 (got {self.zeta_inf} < {self.zeta0})")
        if self.kind is KirchhoffKind.AFFINE and self.b0 < 0:
            out.append(f"affine slope must be nonnegative (got {self.b0})")
        if self.kind is KirchhoffKind.SATURATING and self.scale <= 0:
            out.append(f"saturating scale must be positive (got {self.scale})")
        return out

    @classmethod
    def from_name(cls, name: str, zeta0: float, zeta_inf: float) -> "KirchhoffFn":
        try:
            kind = KirchhoffKind(name)
        except ValueError:
            names = ", ".join(m.value for m in KirchhoffKind)
            raise ValueError(f"unknown m kind {name!r}; expected one of {names}") from None
        return cls(kind, zeta0, zeta_inf)


class NonlinearityKind(enum.Enum):
    SQRT = "sqrt"
    LOG1P = "log1p"
    SATURATING_LINEAR = "saturating_linear"
    ZERO = "zero"


@dataclass(frozen=True)
class Nonlinearity:
    """Reaction term h: continuous, nondecreasing, sublinear at infinity.

    Catalog: sqrt(s), log(1+s), c*s/(1+s) and 0; each satisfies
    h(s)/s -> 0 analytically.  `shift` subtracts a constant so that
    h(0) < 0 variants can be explored; it defaults to 0.
    """

    kind: NonlinearityKind = NonlinearityKind.SQRT
    c: float = 1.0
    shift: float = 0.0

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind is NonlinearityKind.SQRT:
            out = np.sqrt(np.maximum(s, 0.0))
        elif self.kind is NonlinearityKind.LOG1P:
            out = np.log1p(np.maximum(s, 0.0))
        elif self.kind is NonlinearityKind.SATURATING_LINEAR:
            out = self.c * s / (1.0 + s)
        else:
            out = np.zeros_like(s)
        out = out - self.shift
        return float(out) if out.ndim == 0 else out

    def violations(self) -> list[str]:
        out = []
        if self.kind is NonlinearityKind.SATURATING_LINEAR and self.c <= 0:
            out.append(f"saturating_linear coefficient must be positive (got {self.c})")
        if self.shift < 0:
            out.append(f"nonlinearity shift must be nonnegative (got {self.shift})")
        return out

    @classmethod
    def from_name(cls, name: str, c: float = 1.0) -> "Nonlinearity":
        try:
            kind = NonlinearityKind(name)
        except ValueError:
            names = ", ".join(m.value for m in NonlinearityKind)
            raise ValueError(f"unknown h kind {name!r}; expected one of {names}") from None
        return cls(kind, c)


@dataclass(frozen=True)
class ProblemSpec:
    """All data of the boundary-value problem on (0, T)."""

    order: FractionalOrder
    psi: PsiFunction
    grid: Grid
    m: KirchhoffFn
    h: Nonlinearity
    nu: float
    lam: float

    def violations(self) -> list[str]:
        out = []
        if not 0.0 < self.nu < 1.0:
            out.append(f"nu must lie in (0,1) (got {self.nu})")
        if self.lam <= 0:
            out.append(f"lambda must be positive (got {self.lam})")
        return out


def validate_spec(spec: ProblemSpec) -> list[str]:
    """Collect every invariant violation in the problem data.

    Returns an empty list iff the spec is admissible.  Reports and never
    raises, so a CLI can surface all problems at once.
    """
    out = []
    out += spec.order.violations()
    out += spec.psi.violations()
    out += spec.grid.violations()
    out += spec.m.violations()
    out += spec.h.violations()
    out += spec.violations()
    # cross-field consistency: the grid must carry this psi's transform
    if not spec.grid.violations():
        expect = spec.psi(spec.grid.x)
        if not np.allclose(expect, spec.grid.u, rtol=1e-13, atol=1e-15):
            out.append("grid.u does not match psi(grid.x); rebuild the grid with this psi")
    return out


def make_spec(
    alpha: float = 0.75,
    beta: float = 0.5,
    psi: str = "identity",
    psi_k: float = 1.0,
    nu: float = 0.5,
    lam: float = 1.0,
    T: float = 1.0,
    grid_n: int = 129,
    h: str = "sqrt",
    m: str = "constant",
    zeta0: float = 1.0,
    zeta_inf: float = 1.0,
) -> ProblemSpec:
    """Convenience constructor used by the CLI and tests."""
    psif = PsiFunction.from_name(psi, psi_k)
    return ProblemSpec(
        order=FractionalOrder(alpha, beta),
        psi=psif,
        grid=Grid.make(T, grid_n, psif),
        m=KirchhoffFn.from_name(m, zeta0, zeta_inf),
        h=Nonlinearity.from_name(h),
        nu=nu,
        lam=lam,
    )


def sublinearity_witness(h: Nonlinearity, s_lo: float = 1.0, s_hi: float = 1e6) -> float:
    """Ratio of h(s)/s at s_hi to h(s)/s at s_lo; small for sublinear h."""
    lo = h(s_lo) / s_lo
    hi = h(s_hi) / s_hi
    if lo == 0.0:
        return 0.0
    return abs(hi / lo)
