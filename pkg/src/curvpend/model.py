"""Physical model of a pendulum dragged along a geodesic.

The pivot moves along a geodesic of a surface of constant curvature ``K``
and ``zeta`` is the angle between the rod and the pivot's direction of
motion.  With ``m_red = m * sin_k(K, rho)**2 / |K|`` the rigid system has

    L = 1/2 m_red zeta_dot**2 - 1/2 m v**2 sgn(K) sin_k(K, rho)**2 sin(zeta)**2
    H = 1/2 m_red zeta_dot**2 + 1/2 m v**2 sgn(K) sin_k(K, rho)**2 sin(zeta)**2

and Euler-Lagrange gives ``zeta_ddot = -v**2 K sin(zeta) cos(zeta)``, with
circular trig in ``zeta`` and no dependence on ``rho``.

Notes
-----
Some printed forms of the equation of motion apply ``sin_k``/``cos_k`` to the
angle ``zeta``.  That form does not follow from the Lagrangian above (the
``oracle`` module demonstrates the mismatch) and is not used here.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

from .ktrig import chord, cos_k, cot_k, sgn, sin_k

__all__ = [
    "FlatCurvatureError",
    "PendulumParams",
    "ConstantSpeed",
    "PiecewiseAccel",
    "SinusoidalAccel",
    "PivotMotion",
    "RigidState",
    "ElasticState",
    "EmbeddedPoint",
    "kinetic_energy",
    "potential_energy",
    "lagrangian",
    "flat_lagrangian",
    "momentum",
    "hamiltonian",
    "elastic_lagrangian",
    "elastic_energy",
    "eom_rigid",
    "eom_accelerated",
    "eom_elastic",
    "embed",
    "quadric_residual",
    "geodesic_distance",
]


class FlatCurvatureError(ValueError):
    """The operation needs K != 0 (use flat_lagrangian for the flat case)."""


def _require_curved(K: float, what: str) -> None:
    if K == 0:
        raise FlatCurvatureError(f"{what} is undefined for K = 0")


@dataclass(frozen=True)
class PendulumParams:
    """mass, rod length, curvature and (elastic rod only) spring constant."""

    mass: float
    rod_length: float
    curvature: float
    spring_k: float = 0.0
    reduced_mass: float = field(init=False, repr=False)

    def __post_init__(self):
        K = float(self.curvature)
        object.__setattr__(self, "curvature", K)
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be > 0, got {self.mass!r}")
        if not (self.rod_length > 0 and math.isfinite(self.rod_length)):
            raise ValueError(f"rod_length must be > 0, got {self.rod_length!r}")
        if not math.isfinite(K):
            raise ValueError(f"curvature must be finite, got {K!r}")
        if K > 0 and self.rod_length * math.sqrt(K) >= math.pi:
            raise ValueError(
                f"rod_length*sqrt(K) = {self.rod_length * math.sqrt(K)!r} must be < pi"
            )
        if not self.spring_k >= 0:
            raise ValueError(f"spring_k must be >= 0, got {self.spring_k!r}")
        # m * sin_k(rho)^2/|K| == m * chord(rho)^2, which stays finite at K=0
        object.__setattr__(
            self, "reduced_mass", self.mass * chord(K, self.rod_length) ** 2
        )


# -- pivot motion profiles --------------------------------------------------


@dataclass(frozen=True)
class ConstantSpeed:
    v: float

    def speed(self, t: float) -> float:
        return self.v

    def accel(self, t: float) -> float:
        return 0.0

    def position(self, t: float) -> float:
        return self.v * t


@dataclass(frozen=True)
class PiecewiseAccel:
    """Piecewise-constant acceleration.

    ``breakpoints`` is a sequence of ``(t_i, a_i)``: the acceleration is
    ``a_i`` on ``[t_i, t_{i+1})`` and 0 before the first breakpoint.
    """

    v0: float
    breakpoints: tuple = ()

    def __post_init__(self):
        bp = tuple((float(t), float(a)) for t, a in self.breakpoints)
        times = [t for t, _ in bp]
        if any(t < 0 for t in times) or times != sorted(times):
            raise ValueError("breakpoint times must be >= 0 and sorted")
        object.__setattr__(self, "breakpoints", bp)
        # speed and arclength at each breakpoint
        v_at, x_at = [], []
        v = self.v0
        x = self.v0 * times[0] if bp else 0.0
        for i, (t, a) in enumerate(bp):
            v_at.append(v)
            x_at.append(x)
            if i + 1 < len(bp):
                dt = bp[i + 1][0] - t
                x += v * dt + 0.5 * a * dt * dt
                v += a * dt
        object.__setattr__(self, "_times", times)
        object.__setattr__(self, "_v_at", v_at)
        object.__setattr__(self, "_x_at", x_at)

    def _segment(self, t: float) -> int:
        return bisect.bisect_right(self._times, t) - 1

    def accel(self, t: float) -> float:
        i = self._segment(t)
        return 0.0 if i < 0 else self.breakpoints[i][1]

    def speed(self, t: float) -> float:
        i = self._segment(t)
        if i < 0:
            return self.v0
        t_i, a_i = self.breakpoints[i]
        return self._v_at[i] + a_i * (t - t_i)

    def position(self, t: float) -> float:
        i = self._segment(t)
        if i < 0:
            return self.v0 * t
        t_i, a_i = self.breakpoints[i]
        d = t - t_i
        return self._x_at[i] + self._v_at[i] * d + 0.5 * a_i * d * d


@dataclass(frozen=True)
class SinusoidalAccel:
    """a(t) = amplitude * sin(omega t), v(0) = v0."""

    amplitude: float
    omega: float
    v0: float

    def __post_init__(self):
        if self.omega == 0:
            raise ValueError("omega must be nonzero")

    def accel(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t)

    def speed(self, t: float) -> float:
        return self.v0 + self.amplitude * (1.0 - math.cos(self.omega * t)) / self.omega

    def position(self, t: float) -> float:
        w = self.omega
        return self.v0 * t + self.amplitude * (t - math.sin(w * t) / w) / w


PivotMotion = Union[ConstantSpeed, PiecewiseAccel, SinusoidalAccel]


# -- states -------------------------------------------------------------------


class RigidState(NamedTuple):
    zeta: float
    zeta_dot: float


class ElasticState(NamedTuple):
    zeta: float
    l: float
    zeta_dot: float
    l_dot: float


class EmbeddedPoint(NamedTuple):
    """Ambient coordinates: R^3 for K > 0, Minkowski L^3 for K < 0."""

    x: float
    y: float
    z: float


# -- rigid energies -----------------------------------------------------------


def kinetic_energy(p: PendulumParams, v_pivot: float, s: RigidState) -> float:
    _require_curved(p.curvature, "kinetic_energy")
    return 0.5 * p.mass * s.zeta_dot**2 * chord(p.curvature, p.rod_length) ** 2


def potential_energy(p: PendulumParams, v_pivot: float, s: RigidState) -> float:
    """-1/2 m v^2 sgn(K) sin_k(rho)^2 sin(zeta)^2."""
    K = p.curvature
    _require_curved(K, "potential_energy")
    return (
        -0.5
        * p.mass
        * v_pivot**2
        * sgn(K)
        * sin_k(K, p.rod_length) ** 2
        * math.sin(s.zeta) ** 2
    )


def lagrangian(p: PendulumParams, v_pivot: float, s: RigidState) -> float:
    # the potential enters L with the sign it was printed with, so L = T + V
    return kinetic_energy(p, v_pivot, s) + potential_energy(p, v_pivot, s)


def flat_lagrangian(p: PendulumParams, s: RigidState) -> float:
    """K -> 0 limit of the rigid Lagrangian: 1/2 m zeta_dot^2 rho^2."""
    return 0.5 * p.mass * s.zeta_dot**2 * p.rod_length**2


def momentum(p: PendulumParams, s: RigidState) -> float:
    _require_curved(p.curvature, "momentum")
    return p.reduced_mass * s.zeta_dot


def hamiltonian(p: PendulumParams, v_pivot: float, s: RigidState) -> float:
    return kinetic_energy(p, v_pivot, s) - potential_energy(p, v_pivot, s)


# -- elastic energies ---------------------------------------------------------


def _check_elastic(p: PendulumParams, s: ElasticState) -> float:
    K = p.curvature
    _require_curved(K, "elastic model")
    r = p.rod_length + s.l
    if r <= 0 or (K > 0 and r * math.sqrt(K) >= math.pi):
        raise ValueError(f"stretched rod length {r!r} outside the valid range")
    return r


def elastic_lagrangian(p: PendulumParams, v_pivot: float, s: ElasticState) -> float:
    """Lagrangian of the elastic-rod pendulum.

    Kinetic term uses zeta_dot**2 and the curvature potential uses circular
    sin(zeta)**2, so that l = 0 recovers the rigid Lagrangian.
    """
    K = p.curvature
    r = _check_elastic(p, s)
    m = p.mass
    return (
        0.5 * m * s.zeta_dot**2 * chord(K, r) ** 2
        - 0.5 * m * v_pivot**2 * sgn(K) * sin_k(K, r) ** 2 * math.sin(s.zeta) ** 2
        + 0.5 * m * s.l_dot**2
        - 0.5 * p.spring_k * s.l**2
    )


def elastic_energy(p: PendulumParams, v_pivot: float, s: ElasticState) -> float:
    """Total energy T_zeta + T_l + V_curvature + V_spring (conserved for constant v)."""
    K = p.curvature
    r = _check_elastic(p, s)
    m = p.mass
    return (
        0.5 * m * s.zeta_dot**2 * chord(K, r) ** 2
        + 0.5 * m * v_pivot**2 * sgn(K) * sin_k(K, r) ** 2 * math.sin(s.zeta) ** 2
        + 0.5 * m * s.l_dot**2
        + 0.5 * p.spring_k * s.l**2
    )


# -- equations of motion -----------------------------------------------------


def eom_rigid(p: PendulumParams, v_pivot: float, s: RigidState) -> float:
    """Angular acceleration -v^2 K sin(zeta) cos(zeta); independent of rho and m."""
    z = s.zeta
    # operation order is mirrored by the compiled kernels; keep them in sync
    return -(v_pivot * v_pivot) * p.curvature * math.sin(z) * math.cos(z)


def eom_accelerated(
    p: PendulumParams, motion: PivotMotion, t: float, s: RigidState
) -> float:
    """Rigid pendulum whose pivot speed follows ``motion``.

    Adds the projected pivot acceleration
    ``sqrt(|K|) a(t) cot_k(K, rho) sin(zeta)`` to the constant-speed term.
    """
    K = p.curvature
    _require_curved(K, "eom_accelerated")
    v = motion.speed(t)
    a = motion.accel(t)
    z = s.zeta
    rigid = -(v * v) * K * math.sin(z) * math.cos(z)
    return rigid + math.sqrt(abs(K)) * a * cot_k(K, p.rod_length) * math.sin(z)


def eom_elastic(p: PendulumParams, v_pivot: float, s: ElasticState) -> tuple[float, float]:
    """(zeta_ddot, l_ddot) of the elastic-rod pendulum at constant pivot speed."""
    K = p.curvature
    r = _check_elastic(p, s)
    rk = math.sqrt(abs(K))
    sr = sin_k(K, r)
    cr = cos_k(K, r)
    z = s.zeta
    v2 = v_pivot * v_pivot
    zeta_dd = -2.0 * rk * cot_k(K, r) * s.l_dot * s.zeta_dot - v2 * K * math.sin(z) * math.cos(z)
    l_dd = (
        s.zeta_dot**2 * sr * cr / rk
        - v2 * sgn(K) * rk * sr * cr * math.sin(z) ** 2
        - (p.spring_k / p.mass) * s.l
    )
    return zeta_dd, l_dd


# -- embedding ----------------------------------------------------------------


def embed(
    p: PendulumParams,
    pivot_arclength: float,
    s: Union[RigidState, ElasticState],
) -> tuple[EmbeddedPoint, EmbeddedPoint]:
    """Ambient coordinates of (pivot, mass).

    The pivot sits on the reference geodesic (the equator ``phi = pi/2`` of
    the sphere, or ``alpha = 0`` on the hyperboloid) at the given arclength.
    The rod leaves the pivot along the unit tangent ``w`` at angle ``zeta``
    counterclockwise from the pivot velocity, and the mass is the geodesic
    point ``cos_k(K, r) P + chord(K, r) w`` at distance ``r`` (``rho`` or
    ``rho + l``).
    """
    K = p.curvature
    _require_curved(K, "embed")
    r = p.rod_length + (s.l if isinstance(s, ElasticState) else 0.0)
    R = 1.0 / math.sqrt(abs(K))
    u = pivot_arclength / R
    cz, sz = math.cos(s.zeta), math.sin(s.zeta)
    if K > 0:
        # theta = u on the equator; velocity e_theta, second tangent +z
        pivot = (R * math.cos(u), R * math.sin(u), 0.0)
        tangent = (-math.sin(u), math.cos(u), 0.0)
        normal_dir = (0.0, 0.0, 1.0)
    else:
        # beta = u on alpha = 0; velocity e_beta, second tangent e_alpha
        pivot = (R * math.sinh(u), 0.0, R * math.cosh(u))
        tangent = (math.cosh(u), 0.0, math.sinh(u))
        normal_dir = (0.0, 1.0, 0.0)
    w = [cz * a + sz * b for a, b in zip(tangent, normal_dir)]
    c, ch = cos_k(K, r), chord(K, r)
    mass = [c * pi + ch * wi for pi, wi in zip(pivot, w)]
    return EmbeddedPoint(*pivot), EmbeddedPoint(*mass)


def quadric_residual(K: float, q: EmbeddedPoint) -> float:
    """x^2+y^2+z^2-R^2 (sphere) or x^2+y^2-z^2+R^2 (hyperboloid)."""
    _require_curved(K, "quadric_residual")
    R2 = 1.0 / abs(K)
    if K > 0:
        return q.x**2 + q.y**2 + q.z**2 - R2
    return q.x**2 + q.y**2 - q.z**2 + R2


def geodesic_distance(K: float, a: Sequence[float], b: Sequence[float]) -> float:
    """Intrinsic distance between two points of the model surface.

    Uses the half-chord forms ``2R asin(|a-b|/2R)`` and
    ``2R asinh(|a-b|_L/2R)``, which stay accurate for nearby points.
    """
    _require_curved(K, "geodesic_distance")
    R = 1.0 / math.sqrt(abs(K))
    dx, dy, dz = (a[0] - b[0]), (a[1] - b[1]), (a[2] - b[2])
    if K > 0:
        c = math.sqrt(dx * dx + dy * dy + dz * dz)
        return 2.0 * R * math.asin(min(1.0, c / (2.0 * R)))
    c2 = dx * dx + dy * dy - dz * dz
    return 2.0 * R * math.asinh(math.sqrt(max(c2, 0.0)) / (2.0 * R))
