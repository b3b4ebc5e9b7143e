"""Polynomial part P_n of the eigenfunctions.

Every eigenfunction factors as psi(y) = (y^2+1)^(b1 - 1/2) P_n(y) with b1 =
(1 - lambda)/2.  P_n solves

    (y^2 + 1) P'' + (2 - 2 lambda) y P' + n (2 lambda - n - 1) P = 0,

which covers both band-edge cases (lambda = n + 1/2 -+ s) and the bound
case (lambda = n + 1/2 + s).  The primary construction is the two-term
coefficient recurrence of this ODE, which is unconditionally well defined
here; the Jacobi identification P_n^(nu,nu)(-iy) with nu = -lambda is kept
only as an independent cross-check, because standard Jacobi normalizations
can degenerate at the negative parameter values this problem produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConstructionError, JacobiDegeneracyError, RegimeError, RootFindingError
from .potential import Regime, classify_regime
from .spectrum import Edge


@dataclass(frozen=True, eq=False)
class PolySpec:
    """Monic polynomial of exact degree n with definite parity.

    coeffs holds ascending powers of y (real after stripping the global
    i^n phase of the Jacobi form); entries of parity opposite to n are
    exactly zero.  The roots are the moving poles of the momentum function.
    """

    n: int
    coeffs: np.ndarray
    lam: float
    s: float
    edge: Edge

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        self.coeffs.setflags(write=False)

    def __call__(self, y):
        return npoly.polyval(y, self.coeffs)

    def derivative(self, order: int = 1) -> np.ndarray:
        return npoly.polyder(self.coeffs, order)


def lambda_for(s: float, n: int, edge: Edge) -> float:
    """lambda of level (n, edge) in the regime implied by s."""
    regime = classify_regime(s)
    if regime is Regime.BOUND_STATES:
        if edge is not Edge.NOT_APPLICABLE:
            raise RegimeError("bound levels carry no edge tag")
        return n + 0.5 + s
    if regime is Regime.BANDS or regime is Regime.FREE_PARTICLE:
        if edge is Edge.LOWER:
            return n + 0.5 - s
        if edge is Edge.UPPER:
            return n + 0.5 + s
        raise RegimeError("band levels need edge=LOWER or edge=UPPER")
    raise RegimeError(f"unsupported coupling s = {s}")


def build_poly(s: float, n: int, edge: Edge = Edge.NOT_APPLICABLE) -> PolySpec:
    """Construct P_n by the downward two-term recurrence, monic.

    Substituting sum(c_k y^k) into the ODE links c_k to c_{k+2}:

        c_k = -(k+2)(k+1) c_{k+2} / [(k - n)(k - (2 lambda - 1 - n))]

    The pivot vanishes only at k = n (that is the eigenvalue condition,
    where the recurrence starts) so the construction cannot break down for
    admissible (s, n, edge); the guard stays for defense.
    """
    if n < 0:
        raise ValueError("degree n must be non-negative")
    lam = lambda_for(s, n, edge)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    for k in range(n - 2, -1, -2):
        pivot = (k - n) * (k - (2.0 * lam - 1.0 - n))
        if pivot == 0.0:
            raise ConstructionError(
                f"zero pivot at k={k} for s={s}, n={n}, edge={edge.value}"
            )
        coeffs[k] = -(k + 2) * (k + 1) * coeffs[k + 2] / pivot
    return PolySpec(n=n, coeffs=coeffs, lam=lam, s=s, edge=edge)


def jacobi_parameters(s: float, n: int, regime: Regime, edge: Edge) -> tuple[float, float]:
    """Symmetric Jacobi parameters (nu, nu) of the eigen-polynomial:

        band upper edge / bound level : nu = -n - s - 1/2
        band lower edge               : nu = -n + s - 1/2
    """
    if regime is Regime.BOUND_STATES:
        if edge is not Edge.NOT_APPLICABLE:
            raise RegimeError("bound levels carry no edge tag")
        nu = -n - s - 0.5
    elif regime in (Regime.BANDS, Regime.FREE_PARTICLE):
        if edge is Edge.UPPER:
            nu = -n - s - 0.5
        elif edge is Edge.LOWER:
            nu = -n + s - 0.5
        else:
            raise RegimeError("band levels need edge=LOWER or edge=UPPER")
    else:
        raise RegimeError(f"unsupported regime {regime}")
    return (nu, nu)


def jacobi_eval(n: int, alpha: float, beta: float, t):
    """Jacobi polynomial P_n^(alpha,beta)(t) by the degree recurrence.

    Valid for general real parameters and complex argument.  Used only to
    cross-check build_poly via P_n(-iy); raises JacobiDegeneracyError when
    a recurrence denominator vanishes (exceptional negative parameters),
    in which case the cross-check is skipped.
    """
    if n < 0:
        raise ValueError("degree n must be non-negative")
    if n == 0:
        return np.ones_like(t) if isinstance(t, np.ndarray) else 1.0
    pkm1 = np.ones_like(t) if isinstance(t, np.ndarray) else 1.0
    pk = (alpha + 1.0) + (alpha + beta + 2.0) * (t - 1.0) / 2.0
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + alpha + beta) * (2.0 * k + alpha + beta - 2.0)
        if c1 == 0.0:
            raise JacobiDegeneracyError(
                f"degenerate Jacobi recurrence at degree {k} for "
                f"alpha={alpha}, beta={beta}"
            )
        c2 = (2.0 * k + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        c3 = ((2.0 * k + alpha + beta - 1.0) * (2.0 * k + alpha + beta)
              * (2.0 * k + alpha + beta - 2.0))
        c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + alpha + beta)
        pk, pkm1 = ((c2 + c3 * t) * pk - c4 * pkm1) / c1, pk
    return pk


def phase_stripped_jacobi(n: int, nu: float, y):
    """i^n P_n^(nu,nu)(-iy), real for real y with symmetric parameters."""
    val = (1j**n) * jacobi_eval(n, nu, nu, -1j * np.asarray(y, dtype=complex))
    return val.real if isinstance(val, np.ndarray) else complex(val).real


def real_roots(poly: PolySpec, imag_tol: float = 1e-8, polish_steps: int = 1) -> list[float]:
    """All real roots of P_n, ascending, via companion-matrix eigenvalues
    plus a Newton polish.  For valid eigen-polynomials every moving pole is
    real, so the count equals n."""
    if poly.n == 0:
        return []
    if poly.n == 1:
        return [0.0]
    roots = np.roots(poly.coeffs[::-1])
    dcoef = poly.derivative()
    out = []
    for r in roots:
        for _ in range(polish_steps):
            d = npoly.polyval(r, dcoef)
            if d != 0:
                r = r - npoly.polyval(r, poly.coeffs) / d
        if not np.isfinite(r):
            raise RootFindingError(f"non-finite root for degree-{poly.n} polynomial")
        if abs(r.imag) <= imag_tol * (1.0 + abs(r.real)):
            out.append(float(r.real))
    out.sort()
    residuals = [abs(poly(r)) for r in out]
    scale = max(1.0, float(np.abs(poly.coeffs).max()))
    if any(res > 1e-6 * scale for res in residuals):
        raise RootFindingError(f"root polish did not converge: residuals {residuals}")
    return out


def ode_residual(poly: PolySpec, ys=None) -> float:
    """Max absolute residual of the defining ODE on a Chebyshev grid,
    normalized by nothing (caller compares against max |P| on the grid)."""
    if ys is None:
        ys = 5.0 * np.cos(np.pi * (np.arange(64) + 0.5) / 64.0)
    ys = np.asarray(ys, dtype=float)
    p = poly(ys)
    p1 = npoly.polyval(ys, poly.derivative(1))
    p2 = npoly.polyval(ys, poly.derivative(2)) if poly.n >= 2 else np.zeros_like(ys)
    lam, n = poly.lam, poly.n
    res = (ys**2 + 1.0) * p2 + (2.0 - 2.0 * lam) * ys * p1 + n * (2.0 * lam - n - 1.0) * p
    return float(np.abs(res).max())


def poly_scale(poly: PolySpec, ys=None) -> float:
    """max |P| on the residual grid, the natural residual normalization."""
    if ys is None:
        ys = 5.0 * np.cos(np.pi * (np.arange(64) + 0.5) / 64.0)
    return float(np.abs(poly(np.asarray(ys, dtype=float))).max())
