"""Binomial (Bernoulli) photodetection channel.

Each photon reaching a detector is registered independently with
probability eta, so the count m given n incident photons is
Binomial(n, eta).  Two identities carry all the moment bookkeeping:

* raw conditional moments expand over Stirling numbers of the second
  kind, E[m^p | n] = sum_r S(p, r) eta^r n_(r), with n_(r) the falling
  factorial, and
* falling-factorial moments simply scale, E[m_(r)] = eta^r E[n_(r)],
  which is what makes normalized factorial-moment correlations
  insensitive to the detection efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrderError

MAX_MOMENT_ORDER = 12


def _build_stirling_table(pmax: int) -> tuple[tuple[int, ...], ...]:
    # S(p, h) = h S(p-1, h) + S(p-1, h-1), S(0, 0) = 1
    table = [[0] * (pmax + 1) for _ in range(pmax + 1)]
    table[0][0] = 1
    for p in range(1, pmax + 1):
        for h in range(1, p + 1):
            table[p][h] = h * table[p - 1][h] + table[p - 1][h - 1]
    return tuple(tuple(row) for row in table)


_STIRLING2 = _build_stirling_table(MAX_MOMENT_ORDER)


@dataclass(frozen=True)
class DetectionSpec:
    """Overall quantum efficiencies of the two detection chains."""

    eta1: float
    eta2: float

    def __post_init__(self):
        for name, eta in (("eta1", self.eta1), ("eta2", self.eta2)):
            if not (math.isfinite(eta) and 0.0 <= eta <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {eta}")

    @property
    def balanced(self) -> bool:
        return self.eta1 == self.eta2


def stirling2(p: int, h: int) -> int:
    """Stirling number of the second kind S(p, h), exact for p <= 12."""
    if p < 0 or h < 0:
        raise ValueError(f"indices must be nonnegative, got p={p}, h={h}")
    if p > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(
            f"exact Stirling values tabulated up to p={MAX_MOMENT_ORDER}, got {p}"
        )
    if h > p:
        return 0
    return _STIRLING2[p][h]


def falling_factorial(x, r: int):
    """x (x-1) ... (x-r+1); r = 0 gives 1.  Works on scalars and arrays."""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    out = np.ones_like(np.asarray(x, dtype=float))
    for i in range(r):
        out = out * (np.asarray(x, dtype=float) - i)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def conditional_power_moment(n: int, eta: float, j: int) -> float:
    """E[m^j | n] for m ~ Binomial(n, eta)."""
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if j < 1:
        raise ValueError(f"j must be positive, got {j}")
    if j > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(f"moment order limited to {MAX_MOMENT_ORDER}, got {j}")
    total = 0.0
    for r in range(1, j + 1):
        total += _STIRLING2[j][r] * eta**r * falling_factorial(n, r)
    return total


def conditional_power_moment_array(ns: np.ndarray, eta: float, j: int) -> np.ndarray:
    """Vectorized E[m^j | n] over an array of photon numbers."""
    if j > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(f"moment order limited to {MAX_MOMENT_ORDER}, got {j}")
    ns = np.asarray(ns, dtype=float)
    total = np.zeros_like(ns)
    for r in range(1, j + 1):
        total += _STIRLING2[j][r] * eta**r * falling_factorial(ns, r)
    return total


def detected_factorial_moment(photon_fm: float, eta: float, r: int) -> float:
    """Map a photon falling-factorial moment through the loss channel.

    E[m_(r)] = eta^r E[n_(r)], exact for binomial detection.
    """
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    return eta**r * photon_fm
