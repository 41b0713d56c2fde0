"""Closed-form analysis of the rigid system and its quantum counterpart.

Substituting ``u = 2*zeta`` (K > 0) or ``u = pi - 2*zeta`` (K < 0) turns the
rigid equation of motion into the planar pendulum ``u'' = -v**2 |K| sin(u)``
about the stable equilibrium, so the small-oscillation frequency is
``v*sqrt(|K|)`` and the exact period is an elliptic integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .model import PendulumParams, RigidState

__all__ = [
    "SpectrumError",
    "Equilibrium",
    "SpectrumResult",
    "first_integral",
    "separatrix_value",
    "classify",
    "equilibria",
    "stable_center",
    "small_osc_frequency",
    "ellipk_agm",
    "period_exact",
    "amplitude",
    "measure_period",
    "quantum_levels",
    "schrodinger_spectrum",
]


class SpectrumError(RuntimeError):
    """Eigensolver failure or an unusable discretization."""


@dataclass(frozen=True)
class Equilibrium:
    zeta: float
    stability: str
    rate: float  # oscillation frequency (stable) or growth rate (unstable)


@dataclass
class SpectrumResult:
    levels: np.ndarray
    method: str
    hbar: float
    grid_n: Optional[int] = None
    domain: Optional[tuple] = None
    vectors: Optional[np.ndarray] = None


def _curvature(p) -> float:
    return p.curvature if isinstance(p, PendulumParams) else float(p)


def first_integral(p, v, s):
    """2 zeta_dot**2 - K v**2 cos(2 zeta); vectorizes over array states.

    ``p`` may be a :class:`PendulumParams` or the curvature itself.
    """
    K = _curvature(p)
    return 2.0 * np.square(s.zeta_dot) - K * np.square(v) * np.cos(2.0 * np.asarray(s.zeta))


def separatrix_value(K: float, v: float) -> float:
    """First integral at the unstable equilibrium with zero velocity: |K| v**2."""
    return abs(K) * v * v


def classify(K: float, v: float, fi, rtol: float = 1e-12):
    """'libration', 'separatrix' or 'circulation' for first-integral values."""
    sep = separatrix_value(K, v)
    fi = np.asarray(fi, dtype=float)
    tol = rtol * max(sep, 1e-300)
    out = np.where(fi < sep - tol, "libration", np.where(fi > sep + tol, "circulation", "separatrix"))
    return out if out.ndim else str(out)


def _eom_slope(K, v, zeta):
    # d/dzeta of -v^2 K sin(zeta) cos(zeta)
    return -v * v * K * math.cos(2.0 * zeta)


def equilibria(K: float, v: float = 1.0) -> list[Equilibrium]:
    """Equilibria at zeta = 0 and pi/2, classified by the restoring-force slope."""
    if K == 0 or v == 0:
        raise ValueError("equilibria need K != 0 and v != 0")
    out = []
    for zeta in (0.0, math.pi / 2):
        slope = _eom_slope(K, v, zeta)
        out.append(
            Equilibrium(zeta, "stable" if slope < 0 else "unstable", math.sqrt(abs(slope)))
        )
    return out


def stable_center(K: float) -> float:
    """zeta of the stable equilibrium: 0 for K > 0, pi/2 for K < 0."""
    if K == 0:
        raise ValueError("no isolated equilibrium for K = 0")
    return 0.0 if K > 0 else math.pi / 2


def small_osc_frequency(K: float, v: float) -> float:
    """v*sqrt(|K|), shared by u and zeta about the stable equilibrium."""
    if K == 0:
        raise ValueError("small_osc_frequency needs K != 0")
    return abs(v) * math.sqrt(abs(K))


def ellipk_agm(k: float, tol: float = 1e-15) -> float:
    """Complete elliptic integral of the first kind, modulus ``k`` (m = k**2).

    ``K(k) = pi / (2 AGM(1, sqrt(1 - k**2)))``.
    """
    if not 0.0 <= abs(k) < 1.0:
        raise ValueError(f"modulus must satisfy |k| < 1, got {k!r}")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def period_exact(K: float, v: float, u0: float) -> float:
    """Exact period of the oscillation with amplitude ``u0`` in the u-variable.

    ``T = 4 K(sin(u0/2)) / (v sqrt(|K|))``, valid for 0 < u0 < pi.
    """
    if not 0.0 < u0 < math.pi:
        raise ValueError(f"amplitude u0 must lie in (0, pi), got {u0!r}")
    omega = small_osc_frequency(K, v)
    if omega == 0:
        raise ValueError("period_exact needs v != 0")
    return 4.0 * ellipk_agm(math.sin(0.5 * u0)) / omega


def amplitude(K: float, v: float, s: RigidState) -> float:
    """u-amplitude of the libration through state ``s``.

    Uses ``first_integral = -|K| v**2 cos(u0)`` at the turning point.
    Raises ValueError when the state is on or beyond the separatrix.
    """
    fi = float(first_integral(K, v, s))
    c = -fi / (abs(K) * v * v)
    if c <= -1.0:
        raise ValueError("state is not librating (on or outside the separatrix)")
    return math.acos(min(1.0, c))


def measure_period(t, x, x_dot=None, center: float = 0.0) -> float:
    """Mean interval between upward crossings of ``x = center``.

    With ``x_dot`` each crossing is located on the cubic Hermite interpolant
    of the bracketing samples; otherwise linearly.
    """
    t = np.asarray(t, dtype=float)
    d = np.asarray(x, dtype=float) - center
    idx = np.nonzero((d[:-1] < 0) & (d[1:] >= 0))[0]
    if len(idx) < 2:
        raise ValueError("fewer than two upward crossings; integrate longer")
    crossings = []
    for i in idx:
        h = t[i + 1] - t[i]
        s = d[i] / (d[i] - d[i + 1])
        if x_dot is not None:
            y0, y1 = d[i], d[i + 1]
            m0, m1 = h * x_dot[i], h * x_dot[i + 1]
            for _ in range(8):
                s2, s3 = s * s, s * s * s
                val = (
                    (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0
                    + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1
                )
                der = (
                    (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0
                    + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * m1
                )
                if der == 0:
                    break
                s -= val / der
        crossings.append(t[i] + s * h)
    return float(np.mean(np.diff(crossings)))


def quantum_levels(p: PendulumParams, v: float, hbar: float, n_max: int) -> SpectrumResult:
    """Harmonic levels E_n = hbar v sqrt(|K|) (n + 1/2), n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    omega = small_osc_frequency(p.curvature, v)
    n = np.arange(n_max + 1)
    return SpectrumResult(hbar * omega * (n + 0.5), "closed_form", hbar)


def schrodinger_spectrum(
    p: PendulumParams,
    v: float,
    hbar: float,
    grid_n: int,
    n_levels: int,
    *,
    return_vectors: bool = False,
) -> SpectrumResult:
    """Lowest eigenvalues of -hbar^2/(2 m_red) psi'' + 1/2 m_red v^2 K sin^2(zeta) psi.

    Second-order central differences on the periodic grid
    ``zeta_j = -pi + 2 pi j / grid_n``.  Eigenvectors, when returned, are
    normalized so that ``h * sum(psi**2) = 1``.  The potential has period pi,
    so the periodic domain holds two wells (at 0 and +-pi) and deep-well
    levels come in nearly degenerate pairs.
    """
    K = p.curvature
    if K <= 0:
        raise ValueError("schrodinger_spectrum is implemented for K > 0 only")
    if grid_n < 200:
        raise SpectrumError(f"grid_n must be >= 200, got {grid_n}")
    if not 1 <= n_levels <= grid_n:
        raise ValueError(f"n_levels must lie in [1, grid_n], got {n_levels}")
    if hbar <= 0:
        raise ValueError("hbar must be > 0")
    m = p.reduced_mass
    h = 2.0 * math.pi / grid_n
    zeta = -math.pi + h * np.arange(grid_n)
    pot = 0.5 * m * v * v * K * np.sin(zeta) ** 2
    kin = hbar * hbar / (2.0 * m * h * h)

    A = np.zeros((grid_n, grid_n))
    i = np.arange(grid_n)
    A[i, i] = 2.0 * kin + pot
    A[i, (i + 1) % grid_n] = -kin
    A[(i + 1) % grid_n, i] = -kin
    subset = [0, n_levels - 1]
    try:
        if return_vectors:
            w, vec = scipy.linalg.eigh(A, subset_by_index=subset)
        else:
            w, vec = scipy.linalg.eigh(A, subset_by_index=subset, eigvals_only=True), None
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectrumError(f"eigensolver failed: {exc}") from exc
    if vec is not None:
        vec = vec / math.sqrt(h)
    return SpectrumResult(
        np.asarray(w), "finite_difference", hbar, grid_n, (-math.pi, math.pi), vec
    )
