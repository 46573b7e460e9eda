"""Exact joint detected-count moments by truncated enumeration.

This is the ground-truth engine: for any source and any pair of detector
efficiencies it evaluates E[m1^j m2^k] (raw) and E[m1_(j) m2_(k)]
(falling-factorial) by summing the photon-number distribution against the
conditional detection moments, with no sampling noise.

Conditioning structure per source family:

* twin beam: both arms share the same total photon number n, so the
  joint moment is sum_n p(n) E[m1^j | n] E[m2^k | n];
* multimode thermal: one beam split binomially at the given
  transmittance, which turns every joint falling-factorial moment into a
  single-beam one, E[m1_(r) m2_(s)] = (t e1)^r ((1-t) e2)^s E[n_(r+s)];
* coherent: the two arms are independent Poisson variables.

Truncation is governed by ``tail``: the sum runs past the plain
probability-mass cutoff until the highest-order weighted integrand has
decayed below ``tail`` relative to its running total, so reported moments
are accurate to ~tail in relative terms even for heavy-tailed single-mode
inputs.  Term sums use exact compensated summation (math.fsum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .detection import DetectionSpec, conditional_power_moment_array, falling_factorial, stirling2
from .errors import EstimationError, UnsupportedOrderError
from .states import SourceKind, SourceSpec, pmf_array, pmf_chunk

MAX_ORACLE_ORDER = 6
_MAX_WEIGHT = 2 * MAX_ORACLE_ORDER
_CHUNK = 256


def _check_order(j: int, k: int) -> None:
    if j < 0 or k < 0:
        raise ValueError(f"orders must be nonnegative, got ({j}, {k})")
    if j > MAX_ORACLE_ORDER or k > MAX_ORACLE_ORDER:
        raise UnsupportedOrderError(
            f"oracle supports orders up to {MAX_ORACLE_ORDER} per arm, got ({j}, {k})"
        )


def _weighted_cutoff(source: SourceSpec, tail: float, weight: int) -> int:
    """Index past which p(n) n^weight contributes < tail of its running sum."""
    if source.mean_photons == 0.0:
        return 0
    total = 0.0
    start = 0
    quiet_chunks = 0
    while start < 20_000_000:
        ns = np.arange(start, start + _CHUNK, dtype=float)
        terms = pmf_chunk(source, start, _CHUNK) * ns**weight
        total += float(terms.sum())
        if start > source.mean_photons:
            decaying = terms[-1] <= terms[0]
            small = float(terms.max()) <= tail * total
            quiet_chunks = quiet_chunks + 1 if (decaying and small) else 0
            if quiet_chunks >= 2:
                return start + _CHUNK - 1
        start += _CHUNK
    raise RuntimeError("moment enumeration failed to converge")


class ExactMoments:
    """Joint detected-count moments of one source/detection pair.

    Exposes the moment-source interface consumed by the criteria and
    estimator layers: ``raw(j, k)`` for E[m1^j m2^k] and
    ``factorial(j, k)`` for E[m1_(j) m2_(k)].  Instances precompute the
    truncated photon-number distribution once and reuse it.
    """

    def __init__(self, source: SourceSpec, detection: DetectionSpec, tail: float = 1e-12):
        if not (0 < tail < 1):
            raise ValueError(f"tail must lie in (0, 1), got {tail}")
        self.source = source
        self.detection = detection
        self.tail = tail
        if source.kind is SourceKind.COHERENT:
            self._ns = None
            self._probs = None
        else:
            cutoff = _weighted_cutoff(source, tail, _MAX_WEIGHT)
            self._ns = np.arange(cutoff + 1, dtype=float)
            self._probs = pmf_array(source, cutoff)
        self._phi_cache: dict[int, float] = {}
        self._raw_cache: dict[tuple[int, int], float] = {}

    # -- arm intensities ------------------------------------------------

    @property
    def _arm_rates(self) -> tuple[float, float]:
        """Mean detected count scale of each arm."""
        src, det = self.source, self.detection
        if src.kind is SourceKind.TWIN_BEAM:
            return src.mean_photons * det.eta1, src.mean_photons * det.eta2
        t = src.transmittance
        return src.mean_photons * t * det.eta1, src.mean_photons * (1.0 - t) * det.eta2

    @property
    def mean1(self) -> float:
        return self.raw(1, 0)

    @property
    def mean2(self) -> float:
        return self.raw(0, 1)

    # -- single-beam truncated factorial moments ------------------------

    def _phi(self, q: int) -> float:
        """sum_n p(n) n_(q) over the truncated support."""
        if q not in self._phi_cache:
            self._phi_cache[q] = math.fsum(self._probs * falling_factorial(self._ns, q))
        return self._phi_cache[q]

    # -- joint moments ---------------------------------------------------

    def raw(self, j: int, k: int) -> float:
        """E[m1^j m2^k]."""
        _check_order(j, k)
        key = (j, k)
        if key in self._raw_cache:
            return self._raw_cache[key]
        src, det = self.source, self.detection
        if src.kind is SourceKind.TWIN_BEAM:
            c1 = (
                conditional_power_moment_array(self._ns, det.eta1, j)
                if j
                else np.ones_like(self._ns)
            )
            c2 = (
                conditional_power_moment_array(self._ns, det.eta2, k)
                if k
                else np.ones_like(self._ns)
            )
            value = math.fsum(self._probs * c1 * c2)
        elif src.kind is SourceKind.MULTIMODE_THERMAL:
            a = src.transmittance * det.eta1
            b = (1.0 - src.transmittance) * det.eta2
            parts = []
            for r in range(0 if j == 0 else 1, j + 1):
                for s in range(0 if k == 0 else 1, k + 1):
                    coeff = stirling2(j, r) * stirling2(k, s) * a**r * b**s
                    parts.append(coeff * self._phi(r + s))
            value = math.fsum(parts)
        else:
            lam1, lam2 = self._arm_rates
            value = _poisson_raw_moment(lam1, j) * _poisson_raw_moment(lam2, k)
        self._raw_cache[key] = value
        return value

    def factorial(self, j: int, k: int) -> float:
        """E[m1_(j) m2_(k)] (joint falling-factorial moment)."""
        _check_order(j, k)
        src, det = self.source, self.detection
        if src.kind is SourceKind.TWIN_BEAM:
            w = falling_factorial(self._ns, j) * falling_factorial(self._ns, k)
            return det.eta1**j * det.eta2**k * math.fsum(self._probs * w)
        if src.kind is SourceKind.MULTIMODE_THERMAL:
            a = src.transmittance * det.eta1
            b = (1.0 - src.transmittance) * det.eta2
            return a**j * b**k * self._phi(j + k)
        lam1, lam2 = self._arm_rates
        return lam1**j * lam2**k


def _poisson_raw_moment(lam: float, p: int) -> float:
    if p == 0:
        return 1.0
    return math.fsum(stirling2(p, r) * lam**r for r in range(1, p + 1))


@lru_cache(maxsize=128)
def _cached_moments(source: SourceSpec, detection: DetectionSpec, tail: float) -> ExactMoments:
    return ExactMoments(source, detection, tail)


def exact_joint_moment(
    source: SourceSpec, detection: DetectionSpec, j: int, k: int, tail: float = 1e-12
) -> float:
    """E[m1^j m2^k] under the given source and detection efficiencies."""
    return _cached_moments(source, detection, tail).raw(j, k)


def exact_factorial_joint_moment(
    source: SourceSpec, detection: DetectionSpec, j: int, k: int, tail: float = 1e-12
) -> float:
    """E[m1_(j) m2_(k)] under the given source and detection efficiencies."""
    return _cached_moments(source, detection, tail).factorial(j, k)


def exact_g(
    source: SourceSpec, detection: DetectionSpec, j: int, k: int, tail: float = 1e-12
) -> float:
    """Normalized correlation E[m1^j m2^k] / (E[m1]^j E[m2]^k)."""
    ms = _cached_moments(source, detection, tail)
    mean1, mean2 = ms.mean1, ms.mean2
    if mean1 == 0.0 or mean2 == 0.0:
        raise EstimationError("normalized correlation undefined: an arm mean is zero")
    return ms.raw(j, k) / (mean1**j * mean2**k)


def exact_normally_ordered_g(
    source: SourceSpec, detection: DetectionSpec, j: int, k: int, tail: float = 1e-12
) -> float:
    """Factorial-moment correlation; independent of the efficiencies when nonzero."""
    ms = _cached_moments(source, detection, tail)
    mean1, mean2 = ms.mean1, ms.mean2
    if mean1 == 0.0 or mean2 == 0.0:
        raise EstimationError("normalized correlation undefined: an arm mean is zero")
    return ms.factorial(j, k) / (mean1**j * mean2**k)


@dataclass(frozen=True)
class JointMomentTable:
    """Matrix of E[m1^j m2^k] for 0 <= j <= max_j, 0 <= k <= max_k."""

    max_j: int
    max_k: int
    values: np.ndarray
    tail_mass: float


def joint_moment_table(
    source: SourceSpec,
    detection: DetectionSpec,
    max_j: int,
    max_k: int,
    tail: float = 1e-12,
) -> JointMomentTable:
    """Tabulate raw joint moments up to (max_j, max_k) inclusive."""
    _check_order(max_j, max_k)
    ms = _cached_moments(source, detection, tail)
    values = np.empty((max_j + 1, max_k + 1))
    for j in range(max_j + 1):
        for k in range(max_k + 1):
            values[j, k] = ms.raw(j, k)
    return JointMomentTable(max_j=max_j, max_k=max_k, values=values, tail_mass=tail)
