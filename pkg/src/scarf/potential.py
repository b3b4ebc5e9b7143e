"""The Scarf potential: parameters, coupling regimes, and coordinate maps.

V(x) = -(1/4 - s^2) pi^2 / (2 m a^2 sin^2(pi x / a))

with period a and dimensionless coupling s (hbar = 1 throughout).  For
s > 1/2 the coefficient is negative, so V is an array of repulsive
inverse-square walls confining a particle to one cell (discrete levels).
For 0 < s < 1/2 the wells are attractive dips and the spectrum organizes
into bands.  At s = 1/2 the potential vanishes identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import SingularityError

# Lattice points are detected within this fraction of the period.
LATTICE_TOL = 1e-12


class Regime(Enum):
    """Coupling regime, a total function of s."""

    BOUND_STATES = "bound_states"   # s > 1/2
    BANDS = "bands"                 # 0 < s < 1/2
    FREE_PARTICLE = "free_particle" # s = 1/2 exactly
    UNSUPPORTED = "unsupported"     # s <= 0 or non-finite


@dataclass(frozen=True)
class PotentialParams:
    """Physical configuration of the potential.

    Attributes:
        s: dimensionless coupling, must be > 0 (s = 1/2 is the valid
           degenerate case where V vanishes).
        a: potential period (length), > 0.
        m: particle mass, > 0.
        v0: derived well-depth coefficient (1/4 - s^2) pi^2 / (2 m a^2),
            stored so the bound-level formula can be written in terms of
            the well depth alone.
    """

    s: float
    a: float = 1.0
    m: float = 1.0
    v0: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise ValueError(f"coupling s must be a positive finite real, got {self.s}")
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"period a must be a positive finite real, got {self.a}")
        if not (math.isfinite(self.m) and self.m > 0.0):
            raise ValueError(f"mass m must be a positive finite real, got {self.m}")
        v0 = (0.25 - self.s * self.s) * math.pi**2 / (2.0 * self.m * self.a**2)
        object.__setattr__(self, "v0", v0)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.s)

    def well_depth_coupling(self) -> float:
        """Recover s from the stored v0; must agree with self.s to 1e-12."""
        return math.sqrt(0.25 - 2.0 * self.m * self.v0 * self.a**2 / math.pi**2)


def classify_regime(s: float) -> Regime:
    """Classify the coupling. Total: every float gets exactly one tag."""
    if not isinstance(s, (int, float)) or not math.isfinite(s) or s <= 0.0:
        return Regime.UNSUPPORTED
    if s > 0.5:
        return Regime.BOUND_STATES
    if s < 0.5:
        return Regime.BANDS
    return Regime.FREE_PARTICLE


def reduce_to_cell(x, a: float):
    """Map x to the fundamental cell [0, a) so trig evaluation is periodic
    bit-for-bit regardless of which cell x lies in."""
    return x - a * np.floor(x / a)


def is_lattice_point(x, a: float) -> bool | np.ndarray:
    """True where x is within LATTICE_TOL * a of an integer multiple of a."""
    r = reduce_to_cell(x, a)
    return np.minimum(r, a - r) <= LATTICE_TOL * a


def evaluate_potential(params: PotentialParams, x):
    """Evaluate V(x). Accepts a scalar or an ndarray.

    Raises SingularityError if any point is within LATTICE_TOL * a of a
    lattice point: the potential diverges there and callers that need
    grids must offset, never clamp.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    if np.any(is_lattice_point(x, params.a)):
        raise SingularityError("potential diverges at lattice points x = k*a")
    r = reduce_to_cell(x, params.a)
    sn = np.sin(np.pi * r / params.a)
    val = -(0.25 - params.s**2) * np.pi**2 / (2.0 * params.m * params.a**2 * sn * sn)
    return float(val) if val.ndim == 0 else val


def cot_map(x, a: float):
    """y = cot(pi x / a), the change of variable that rationalizes the
    momentum function.  Strictly decreasing on each open cell."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    if np.any(is_lattice_point(x, a)):
        raise SingularityError("cot(pi x / a) diverges at lattice points")
    r = reduce_to_cell(x, a)
    z = np.pi * r / a
    val = np.cos(z) / np.sin(z)
    return float(val) if val.ndim == 0 else val


def inverse_cot_map(y: float, cell_index: int, a: float) -> float:
    """The unique x in (cell_index * a, (cell_index + 1) * a) with
    cot(pi x / a) = y.  atan2(1, y) is arccot with range (0, pi)."""
    if not math.isfinite(y):
        raise ValueError("y must be finite")
    return (cell_index + math.atan2(1.0, y) / math.pi) * a
