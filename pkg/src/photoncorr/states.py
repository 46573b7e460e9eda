"""Photon-number distributions of the supported source families.

Before any detection loss, the total photon number per pulse follows

* a negative binomial with shape ``modes`` and the given mean, for a
  twin-beam or a multimode thermal source (each of the ``modes`` field
  modes carries the same average population),
* a Poisson law for a coherent source.

All probability evaluation happens in log space so that pulse energies
of hundreds of photons stay representable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import UnsupportedOrderError

MAX_FACTORIAL_MOMENT_ORDER = 8


class SourceKind(enum.Enum):
    TWIN_BEAM = "twb"
    MULTIMODE_THERMAL = "thermal"
    COHERENT = "coherent"


@dataclass(frozen=True)
class SourceSpec:
    """Bipartite optical source before detection.

    mean_photons is the average total photon number per pulse summed over
    all modes.  modes may be any positive real; fitted mode numbers are
    rarely integers.  transmittance is the beam-splitter split used for the
    classical (thermal/coherent) bipartite states and is ignored for a
    twin beam, whose two arms share the photon number exactly.
    """

    kind: SourceKind
    mean_photons: float
    modes: float = 1.0
    transmittance: float = 0.5

    def __post_init__(self):
        if not math.isfinite(self.mean_photons) or self.mean_photons < 0:
            raise ValueError(f"mean_photons must be finite and >= 0, got {self.mean_photons}")
        if not math.isfinite(self.modes) or self.modes <= 0:
            raise ValueError(f"modes must be finite and > 0, got {self.modes}")
        if not 0 < self.transmittance < 1:
            raise ValueError(f"transmittance must lie in (0, 1), got {self.transmittance}")


def _check_nb_params(mu: float, mean: float) -> None:
    if not (math.isfinite(mu) and mu > 0):
        raise ValueError(f"modes must be finite and > 0, got {mu}")
    if not (math.isfinite(mean) and mean >= 0):
        raise ValueError(f"mean must be finite and >= 0, got {mean}")


def nb_log_pmf(n: np.ndarray, mu: float, mean: float) -> np.ndarray:
    """Log of the negative-binomial pmf with shape mu and the given mean.

    Vectorized over ``n``.  Requires mean > 0; the mean = 0 vacuum case is
    handled by the callers.
    """
    n = np.asarray(n, dtype=float)
    return (
        gammaln(n + mu)
        - gammaln(n + 1.0)
        - gammaln(mu)
        - mu * math.log1p(mean / mu)
        - n * math.log1p(mu / mean)
    )


def nb_pmf(n: int, mu: float, mean: float) -> float:
    """Probability of counting n photons in a mu-mode thermal-statistics beam.

    Evaluates Gamma(n+mu)/(n! Gamma(mu)) (1+mean/mu)^-mu (1+mu/mean)^-n in
    log space.  mean = 0 degenerates to the vacuum: 1 at n = 0, else 0.
    """
    _check_nb_params(mu, mean)
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    if mean == 0.0:
        return 1.0 if n == 0 else 0.0
    return float(np.exp(nb_log_pmf(np.array([n]), mu, mean))[0])


def _poisson_log_pmf(n: np.ndarray, mean: float) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return n * math.log(mean) - mean - gammaln(n + 1.0)


def pmf_array(spec: SourceSpec, n_max: int) -> np.ndarray:
    """Total-beam photon-number pmf evaluated on 0..n_max inclusive."""
    ns = np.arange(n_max + 1)
    if spec.mean_photons == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    if spec.kind is SourceKind.COHERENT:
        return np.exp(_poisson_log_pmf(ns, spec.mean_photons))
    return np.exp(nb_log_pmf(ns, spec.modes, spec.mean_photons))


def pmf(spec: SourceSpec, n: int) -> float:
    """Total-beam photon-number probability for a single n."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return float(pmf_array(spec, n)[n])


def photon_factorial_moment(spec: SourceSpec, order: int) -> float:
    """Falling-factorial moment E[n(n-1)...(n-order+1)] of the total beam.

    Negative-binomial beams give prod_{i<order}(modes+i) * (mean/modes)^order;
    a coherent beam gives mean^order.  Order 0 returns 1.
    """
    if order < 0 or order != int(order):
        raise ValueError(f"order must be a nonnegative integer, got {order}")
    if order == 0:
        return 1.0
    if order > MAX_FACTORIAL_MOMENT_ORDER:
        raise UnsupportedOrderError(
            f"factorial moments supported up to order {MAX_FACTORIAL_MOMENT_ORDER}, got {order}"
        )
    if spec.kind is SourceKind.COHERENT:
        return spec.mean_photons**order
    out = 1.0
    for i in range(order):
        out *= (spec.modes + i) * (spec.mean_photons / spec.modes)
    return out


def truncation_cutoff(spec: SourceSpec, tail_mass: float) -> int:
    """Smallest N whose upper pmf tail (n > N) does not exceed tail_mass.

    Accumulates the pmf with compensated summation; the boundary case where
    the remaining tail equals tail_mass exactly counts as reached.
    """
    if not (0 < tail_mass < 1):
        raise ValueError(f"tail_mass must lie in (0, 1), got {tail_mass}")
    if spec.mean_photons == 0.0:
        return 0
    chunk = 256
    total = 0.0
    comp = 0.0  # Kahan correction
    start = 0
    while start < 50_000_000:
        probs = pmf_chunk(spec, start, chunk)
        for i, p in enumerate(probs):
            y = p - comp
            t = total + y
            comp = (t - total) - y
            total = t
            if 1.0 - total <= tail_mass:
                return start + i
        start += chunk
    raise RuntimeError("pmf accumulation did not reach the requested tail mass")


def pmf_chunk(spec: SourceSpec, start: int, size: int) -> np.ndarray:
    """Total-beam pmf on the index window [start, start + size)."""
    ns = np.arange(start, start + size)
    if spec.mean_photons == 0.0:
        out = np.zeros(size)
        if start == 0:
            out[0] = 1.0
        return out
    if spec.kind is SourceKind.COHERENT:
        return np.exp(_poisson_log_pmf(ns, spec.mean_photons))
    return np.exp(nb_log_pmf(ns, spec.modes, spec.mean_photons))
