"""Closed-form normalized correlations g^{jk} for the three source families.

The forms below hold for balanced efficiencies (eta1 = eta2 = eta) and are
written in terms of the per-arm mean detected count and the mode factor

    G_k(mu) = prod_{i=1..k} (i + mu)/mu,

which collects the multimode thermal excess.  The same expressions with
eta = 0 give a multimode thermal beam split on a balanced splitter, and
additionally sending mu to infinity (G_k -> 1) gives a coherent beam.
Orders up to j + k = 4 are covered; anything else must go to the exact
enumeration in :mod:`photoncorr.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnsupportedOrderError

SUPPORTED_ORDERS = frozenset({(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)})

MAX_G_FACTOR_ORDER = 6


@dataclass(frozen=True)
class TheoryPoint:
    """Evaluation point: per-arm detected mean, mode count, balanced efficiency."""

    mean_detected: float
    modes: float
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.mean_detected) and self.mean_detected > 0):
            raise ValueError(f"mean_detected must be > 0, got {self.mean_detected}")
        if not (math.isfinite(self.modes) and self.modes > 0):
            raise ValueError(f"modes must be > 0, got {self.modes}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")


def g_factor(k: int, mu: float) -> float:
    """Mode factor prod_{i=1..k} (i + mu)/mu; decreasing in mu, -> 1 as mu grows."""
    if not (math.isfinite(mu) and mu > 0):
        raise ValueError(f"mu must be > 0, got {mu}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > MAX_G_FACTOR_ORDER:
        raise UnsupportedOrderError(f"g_factor supported up to k={MAX_G_FACTOR_ORDER}, got {k}")
    out = 1.0
    for i in range(1, k + 1):
        out *= (i + mu) / mu
    return out


def twb_g(j: int, k: int, point: TheoryPoint) -> float:
    """Normalized correlation of a multimode twin beam at balanced efficiency.

    Symmetric in (j, k); supported orders are those with j + k <= 4.
    """
    if (j, k) not in SUPPORTED_ORDERS:
        raise UnsupportedOrderError(
            f"no closed form for order ({j}, {k}); use the enumeration oracle"
        )
    m = point.mean_detected
    eta = point.eta
    g1 = g_factor(1, point.modes)
    if (j, k) == (1, 1):
        return g1 + eta / m
    g2 = g_factor(2, point.modes)
    if (j, k) in ((2, 1), (1, 2)):
        return g2 + g1 * (1.0 + 2.0 * eta) / m + eta / m**2
    g3 = g_factor(3, point.modes)
    if (j, k) == (2, 2):
        return (
            g3
            + 2.0 * g2 * (1.0 + 2.0 * eta) / m
            + g1 * (1.0 + 4.0 * eta + 2.0 * eta**2) / m**2
            + eta / m**3
        )
    # (3, 1) and (1, 3)
    return g3 + 3.0 * g2 * (1.0 + eta) / m + g1 * (1.0 + 6.0 * eta) / m**2 + eta / m**3


def thermal_g(j: int, k: int, mean_detected: float, mu: float) -> float:
    """Normalized correlation of a multimode thermal beam split in two.

    Same closed forms with the efficiency terms dropped; mean_detected is the
    thermal state's own per-arm detected mean.
    """
    return twb_g(j, k, TheoryPoint(mean_detected=mean_detected, modes=mu, eta=0.0))


def coherent_g(j: int, k: int, mean_detected: float) -> float:
    """Normalized correlation of a split coherent beam (independent Poisson arms)."""
    if (j, k) not in SUPPORTED_ORDERS:
        raise UnsupportedOrderError(
            f"no closed form for order ({j}, {k}); use the enumeration oracle"
        )
    if not (math.isfinite(mean_detected) and mean_detected > 0):
        raise ValueError(f"mean_detected must be > 0, got {mean_detected}")
    m = mean_detected
    if (j, k) == (1, 1):
        return 1.0
    if (j, k) in ((2, 1), (1, 2)):
        return 1.0 + 1.0 / m
    if (j, k) == (2, 2):
        return 1.0 + 2.0 / m + 1.0 / m**2
    return 1.0 + 3.0 / m + 1.0 / m**2
