"""Curvature-parametrized trigonometry.

For a signed curvature ``K`` the kernel functions are circular when ``K > 0``
and hyperbolic when ``K < 0``::

    sin_k(K, z) = sin(z*sqrt(K))       cos_k(K, z) = cos(z*sqrt(K))     K > 0
    sin_k(K, z) = sinh(z*sqrt(-K))     cos_k(K, z) = cosh(z*sqrt(-K))   K < 0

``K = 0`` is the flat limit: ``sin_k -> 0``, ``cos_k -> 1`` and the rescaled
``chord(K, z) = sin_k(K, z)/sqrt(|K|)`` tends to ``z``.

All functions accept a plain float or a :class:`Curvature` for ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Curvature",
    "KDomainError",
    "CHORD_SERIES_THRESHOLD",
    "sgn",
    "sin_k",
    "cos_k",
    "tan_k",
    "cot_k",
    "chord",
    "d_sin_k",
    "d_cos_k",
]

# |K| z**2 below this uses the Taylor branch of chord()
CHORD_SERIES_THRESHOLD = 1e-6


class KDomainError(ValueError):
    """Raised at a pole of tan_k or a zero of sin_k for cot_k."""

    def __init__(self, func: str, K: float, z: float):
        self.func = func
        self.K = K
        self.z = z
        super().__init__(f"{func}(K={K!r}, z={z!r}) is undefined at this argument")


@dataclass(frozen=True)
class Curvature:
    """Signed Gaussian curvature of the ambient surface."""

    k: float

    def __post_init__(self):
        if not math.isfinite(self.k):
            raise ValueError(f"curvature must be finite, got {self.k!r}")

    def __float__(self) -> float:
        return float(self.k)

    @property
    def sign(self) -> int:
        return sgn(self.k)

    @property
    def radius(self) -> float:
        """R = 1/sqrt(|K|); infinite in the flat case."""
        if self.k == 0:
            return math.inf
        return 1.0 / math.sqrt(abs(self.k))


def sgn(K) -> int:
    """Sign of the curvature with sgn(0) = 0."""
    K = float(K)
    return (K > 0) - (K < 0)


def sin_k(K, z: float) -> float:
    K = float(K)
    if K > 0:
        return math.sin(z * math.sqrt(K))
    if K < 0:
        return math.sinh(z * math.sqrt(-K))
    return 0.0


def cos_k(K, z: float) -> float:
    K = float(K)
    if K > 0:
        return math.cos(z * math.sqrt(K))
    if K < 0:
        return math.cosh(z * math.sqrt(-K))
    return 1.0


def tan_k(K, z: float) -> float:
    K = float(K)
    c = cos_k(K, z)
    # cos(x) never hits 0.0 exactly in floating point, so test the distance
    # of x to the nearest pole instead
    if K > 0:
        x = z * math.sqrt(K)
        if abs(math.remainder(x - math.pi / 2, math.pi)) < 1e-12:
            raise KDomainError("tan_k", K, z)
    return sin_k(K, z) / c


def cot_k(K, z: float) -> float:
    K = float(K)
    if K > 0:
        x = z * math.sqrt(K)
        if abs(math.remainder(x, math.pi)) < 1e-12:
            raise KDomainError("cot_k", K, z)
    elif z == 0 or K == 0:
        raise KDomainError("cot_k", K, z)
    return cos_k(K, z) / sin_k(K, z)


def chord(K, z: float) -> float:
    """sin_k(K, z)/sqrt(|K|), continuous through K = 0.

    Uses ``z - K z**3/6 + K**2 z**5/120`` when ``|K| z**2`` is below
    :data:`CHORD_SERIES_THRESHOLD`; the truncation error there is below
    ``z * 1e-18 / 5040``.
    """
    K = float(K)
    kz2 = K * z * z
    if abs(kz2) < CHORD_SERIES_THRESHOLD:
        return z * (1.0 - kz2 / 6.0 + kz2 * kz2 / 120.0)
    return sin_k(K, z) / math.sqrt(abs(K))


def d_sin_k(K, z: float) -> float:
    """d/dz sin_k(K, z) = sqrt(|K|) cos_k(K, z)."""
    K = float(K)
    return math.sqrt(abs(K)) * cos_k(K, z)


def d_cos_k(K, z: float) -> float:
    """d/dz cos_k(K, z) = -sgn(K) sqrt(|K|) sin_k(K, z)."""
    K = float(K)
    return -sgn(K) * math.sqrt(abs(K)) * sin_k(K, z)
