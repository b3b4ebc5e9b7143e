"""Residue algebra of the quantum momentum function and closed-form energies.

After the cot change of variable the momentum function chi(y) is rational
with fixed simple poles at y = +i and y = -i (residues b1, b1'), n moving
poles on the real axis (the wavefunction nodes, residue +1 each), and a
residue d1 at infinity.  The sum rule

    b1 + b1' + n = d1

is the exact quantization condition.  Parity forces b1 = b1', the fixed
residues come in the pair (1 +- lambda)/2, and d1 solves
d1^2 - d1 + (1/4 - s^2) = 0, i.e. d1 = (1 +- 2s)/2.  Enumerating the
admissible combinations yields the band-edge and bound-level energies

    E = pi^2 lambda^2 / (2 m a^2),   lambda = n + 1/2 -+ s  (band edges)
                                     lambda = n + 1/2 + s   (bound levels)

where lambda^2 = 2 m E a^2 / pi^2 is the dimensionless energy parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateRegimeError, RegimeError
from .potential import PotentialParams, Regime, classify_regime

# |n - round(n)| below this counts as an integer degree.  Loose enough for
# lambdas recovered from numerical oracles, far below the level spacing.
N_INTEGER_TOL = 1e-9


class Edge(Enum):
    LOWER = "lower"
    UPPER = "upper"
    NOT_APPLICABLE = "none"


@dataclass(frozen=True)
class ResidueSet:
    """One row of the residue-combination table.

    n_value is d1 - b1 - b1' for the given lambda; the combination is
    valid only when that is a non-negative integer (the polynomial degree).
    The analytic part of chi is a constant forced to zero by parity; it is
    recorded here once rather than per row.
    """

    set_id: int
    b1: float
    b1_prime: float
    d1: float
    n_value: float
    lam: float
    valid: bool
    rejection_reason: str | None = None

    analytic_part: float = 0.0  # parity forces C = d0 = 0

    def __post_init__(self):
        if self.b1 != self.b1_prime:
            raise ValueError("parity requires b1 == b1'")


@dataclass(frozen=True)
class SpectrumLine:
    """A single eigenlevel: band edge or bound level.

    energy is pi^2 lam^2 / (2 m a^2) exactly (units hbar^2/(m a^2), hbar=1)
    and is strictly positive in the bound and band regimes.  The free
    particle limit s = 1/2 is the one exception: its lowest lower edge
    folds down to lambda = 0, E = 0.
    """

    n: int
    regime: Regime
    edge: Edge
    lam: float
    energy: float
    nu1: float
    nu2: float
    b1: float
    d1: float


def fixed_pole_residue_candidates(lam: float) -> tuple[float, float]:
    """Both residue candidates (1 - lam)/2, (1 + lam)/2 at the fixed pole
    y = +i.  The identical pair applies at y = -i."""
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError(f"lambda must be positive and real, got {lam}")
    return ((1.0 - lam) / 2.0, (1.0 + lam) / 2.0)


def infinity_residue_candidates(s: float) -> tuple[float, float]:
    """Roots (1 - 2s)/2, (1 + 2s)/2 of d1^2 - d1 + (1/4 - s^2) = 0."""
    if not (math.isfinite(s) and s > 0.0):
        raise ValueError(f"s must be positive, got {s}")
    return ((1.0 - 2.0 * s) / 2.0, (1.0 + 2.0 * s) / 2.0)


def admissible_d1(s: float) -> list[float]:
    """Residues at infinity compatible with a finite wavefunction at the
    lattice points: both candidates for bands, only (1 - 2s)/2 for the
    bound regime (the boundary exponent 1/2 - d1 + ... must keep psi from
    diverging as y -> infinity)."""
    regime = classify_regime(s)
    if regime is Regime.FREE_PARTICLE:
        raise DegenerateRegimeError(
            "s = 1/2: residue branches coincide; use the free-particle limit"
        )
    if regime is Regime.UNSUPPORTED:
        raise RegimeError(f"no residue analysis for s = {s}")
    lo, hi = infinity_residue_candidates(s)
    if regime is Regime.BANDS:
        return [lo, hi]
    return [lo]


def enumerate_residue_sets(s: float, lam: float) -> list[ResidueSet]:
    """All (b1, d1) combinations with b1 = b1', each scored by whether
    n = d1 - 2 b1 is a non-negative integer.

    In the band regime this reproduces the four-row table: rows 1 and 2
    carry b1 = (1 - lambda)/2 against d1 = (1 -+ 2s)/2, rows 3 and 4 carry
    b1 = (1 + lambda)/2 and always fail (n < 0).  The bound regime admits a
    single d1, hence two rows.
    """
    b1_candidates = fixed_pole_residue_candidates(lam)
    d1_values = admissible_d1(s)
    sets = []
    set_id = 0
    for b1 in b1_candidates:
        for d1 in d1_values:
            set_id += 1
            n_value = d1 - 2.0 * b1
            n_rounded = round(n_value)
            if n_value < -N_INTEGER_TOL:
                valid, reason = False, "n negative"
            elif abs(n_value - n_rounded) > N_INTEGER_TOL or n_rounded < 0:
                valid, reason = False, "n not a non-negative integer"
            else:
                valid, reason = True, None
            sets.append(
                ResidueSet(
                    set_id=set_id,
                    b1=b1,
                    b1_prime=b1,
                    d1=d1,
                    n_value=n_value,
                    lam=lam,
                    valid=valid,
                    rejection_reason=reason,
                )
            )
    return sets


def _line(params: PotentialParams, n: int, lam: float, regime: Regime,
          edge: Edge, nu: float, d1: float) -> SpectrumLine:
    energy = math.pi**2 * lam**2 / (2.0 * params.m * params.a**2)
    return SpectrumLine(
        n=n, regime=regime, edge=edge, lam=lam, energy=energy,
        nu1=nu, nu2=nu, b1=(1.0 - lam) / 2.0, d1=d1,
    )


def band_edge_energies(params: PotentialParams, n: int) -> tuple[SpectrumLine, SpectrumLine]:
    """Lower and upper edges of the n-th band:

        E-  : lambda = n + 1/2 - s   (d1 = (1 + 2s)/2, nu = -n + s - 1/2)
        E+  : lambda = n + 1/2 + s   (d1 = (1 - 2s)/2, nu = -n - s - 1/2)
    """
    _check_level_index(n)
    if params.regime is not Regime.BANDS:
        raise RegimeError(f"band edges require 0 < s < 1/2, got s = {params.s}")
    s = params.s
    lower = _line(params, n, n + 0.5 - s, Regime.BANDS, Edge.LOWER,
                  -n + s - 0.5, (1.0 + 2.0 * s) / 2.0)
    upper = _line(params, n, n + 0.5 + s, Regime.BANDS, Edge.UPPER,
                  -n - s - 0.5, (1.0 - 2.0 * s) / 2.0)
    return lower, upper


def bound_energy(params: PotentialParams, n: int) -> SpectrumLine:
    """Bound level n:  lambda = n + 1/2 + s, nu = -n - s - 1/2.

    Equivalent well-depth form: E = (pi^2/2ma^2)(1/2 + n + sqrt(1/4 -
    2 m v0 a^2 / pi^2))^2 with the stored v0.
    """
    _check_level_index(n)
    if params.regime is not Regime.BOUND_STATES:
        raise RegimeError(f"bound levels require s > 1/2, got s = {params.s}")
    s = params.s
    return _line(params, n, n + 0.5 + s, Regime.BOUND_STATES, Edge.NOT_APPLICABLE,
                 -n - s - 0.5, (1.0 - 2.0 * s) / 2.0)


def free_particle_edges(params: PotentialParams, n: int) -> tuple[SpectrumLine, SpectrumLine]:
    """s = 1/2 limit of the band edges: lambda = n and n + 1, so adjacent
    bands touch (E+_n = E-_{n+1}) and every gap closes."""
    _check_level_index(n)
    if params.regime is not Regime.FREE_PARTICLE:
        raise RegimeError(f"free-particle path requires s = 1/2, got s = {params.s}")
    lower = _line(params, n, float(n), Regime.FREE_PARTICLE, Edge.LOWER, float(-n), 1.0)
    upper = _line(params, n, float(n + 1), Regime.FREE_PARTICLE, Edge.UPPER, float(-(n + 1)), 0.0)
    return lower, upper


def lambda_of_energy(params: PotentialParams, energy: float) -> float:
    """Inverse of the energy map: lambda = sqrt(2 m E) a / pi.

    E <= 0 is rejected: lambda would be imaginary and the quantization
    condition has no solution there.
    """
    if not (math.isfinite(energy) and energy > 0.0):
        raise ValueError(f"energy must be positive, got {energy}")
    return math.sqrt(2.0 * params.m * energy) * params.a / math.pi


def spectrum_lines(params: PotentialParams, n_max: int) -> list[SpectrumLine]:
    """All closed-form levels with n = 0..n_max, ordered by energy.

    Bound regime: one line per n.  Band and free-particle regimes: both
    edges per n.
    """
    regime = params.regime
    if regime is Regime.BOUND_STATES:
        return [bound_energy(params, n) for n in range(n_max + 1)]
    if regime is Regime.BANDS:
        lines = []
        for n in range(n_max + 1):
            lines.extend(band_edge_energies(params, n))
        return sorted(lines, key=lambda ln: ln.energy)
    if regime is Regime.FREE_PARTICLE:
        lines = []
        for n in range(n_max + 1):
            lines.extend(free_particle_edges(params, n))
        return sorted(lines, key=lambda ln: (ln.energy, ln.edge.value))
    raise RegimeError(f"unsupported coupling s = {params.s}")


def _check_level_index(n: int) -> None:
    if not isinstance(n, (int,)) or isinstance(n, bool) or n < 0:
        raise ValueError(f"level index n must be a non-negative integer, got {n!r}")
