"""Time integration of the rigid, accelerated-pivot and elastic systems.

Fixed-step runs go through the kernels selected in :mod:`curvpend.kernels`;
the adaptive Dormand-Prince driver is pure Python.  Diagnostics (energy and
first integral) are evaluated on stored samples only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .analysis import first_integral
from .ktrig import sgn, sin_k
from .model import (
    ConstantSpeed,
    ElasticState,
    PendulumParams,
    PivotMotion,
    RigidState,
    embed as _embed,
    eom_accelerated,
    eom_elastic,
    eom_rigid,
)

__all__ = [
    "IntegrationError",
    "IntegratorSpec",
    "Trajectory",
    "step_rk4",
    "step_leapfrog",
    "step_adaptive",
    "simulate_rigid",
    "simulate_elastic",
]

METHODS = ("rk4", "leapfrog", "adaptive")


class IntegrationError(RuntimeError):
    """Non-finite state or step-size underflow."""


@dataclass(frozen=True)
class IntegratorSpec:
    """Integrator choice and step control.

    ``dt`` is the step for fixed-step methods and the output spacing for
    ``adaptive``.  Samples are stored every ``sample_stride`` steps.
    """

    method: str = "rk4"
    dt: float = 1e-3
    t_end: float = 10.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    sample_stride: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be > 0, got {self.t_end!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be > 0")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride!r}")

    @property
    def n_steps(self) -> int:
        return max(1, int(math.ceil(self.t_end / self.dt - 1e-9)))


@dataclass
class Trajectory:
    """Sampled solution.

    ``y`` holds one state per row: ``(zeta, zeta_dot)`` for the rigid
    system, ``(zeta, l, zeta_dot, l_dot)`` for the elastic one.  ``energy``
    is the Hamiltonian (rigid) or total energy (elastic).  ``error`` is set
    when the run was aborted; the samples up to the abort are kept.
    """

    kind: str
    t: np.ndarray
    y: np.ndarray
    energy: np.ndarray
    first_integral: np.ndarray
    embedded: Optional[np.ndarray] = None
    error: Optional[str] = None
    backend: str = ""

    def __len__(self):
        return len(self.t)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def zeta(self) -> np.ndarray:
        return self.y[:, 0]

    @property
    def zeta_dot(self) -> np.ndarray:
        return self.y[:, 1] if self.kind == "rigid" else self.y[:, 2]

    @property
    def l(self) -> np.ndarray:
        self._require_elastic()
        return self.y[:, 1]

    @property
    def l_dot(self) -> np.ndarray:
        self._require_elastic()
        return self.y[:, 3]

    def _require_elastic(self):
        if self.kind != "elastic":
            raise AttributeError("only elastic trajectories carry an elongation")

    def state(self, i: int):
        row = self.y[i]
        return RigidState(*row) if self.kind == "rigid" else ElasticState(*row)


# -- single steps -------------------------------------------------------------


def _check_finite(y, t):
    if not np.all(np.isfinite(y)):
        raise IntegrationError(f"non-finite state at t={t!r}: {y!r}")


def step_rk4(rhs: Callable, t: float, y, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of y' = rhs(t, y)."""
    y = np.asarray(y, dtype=float)
    half = 0.5 * dt
    k1 = np.asarray(rhs(t, y))
    k2 = np.asarray(rhs(t + half, y + half * k1))
    k3 = np.asarray(rhs(t + half, y + half * k2))
    k4 = np.asarray(rhs(t + dt, y + dt * k3))
    y_new = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_finite(y_new, t + dt)
    return y_new


def step_leapfrog(accel: Callable, t: float, y, dt: float) -> np.ndarray:
    """One position-Verlet step of q'' = accel(q).

    ``y`` is ``[q..., q_dot...]``.  Drift half a step, kick with the force at
    the midpoint, drift again.  Symmetric, hence time-reversible.
    """
    y = np.asarray(y, dtype=float)
    n = y.size // 2
    q, qd = y[:n], y[n:]
    half = 0.5 * dt
    qh = q + half * qd
    qd_new = qd + dt * np.asarray(accel(qh))
    q_new = qh + half * qd_new
    y_new = np.concatenate([q_new, qd_new])
    _check_finite(y_new, t + dt)
    return y_new


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_DP_E = _DP_B5 - _DP_B4


def step_adaptive(
    rhs: Callable,
    t: float,
    y,
    dt: float,
    rel_tol: float,
    abs_tol: float,
    dt_max: float = math.inf,
    dt_min: Optional[float] = None,
) -> tuple[float, np.ndarray, float]:
    """One accepted Dormand-Prince 5(4) step, starting from trial size ``dt``.

    Rejected trials are retried with a smaller step.  Returns
    ``(t_new, y_new, dt_next)``.  Raises :class:`IntegrationError` when the
    step would fall below ``dt_min`` (default ``1e-14 * max(1, |t|)``).
    """
    y = np.asarray(y, dtype=float)
    if dt_min is None:
        dt_min = 1e-14 * max(1.0, abs(t))
    h = min(dt, dt_max)
    while True:
        if h < dt_min:
            raise IntegrationError(f"step size underflow at t={t!r} (h={h!r})")
        k = np.empty((7, y.size))
        k[0] = rhs(t, y)
        for i in range(1, 7):
            yi = y + h * np.dot(_DP_A[i], k[:i])
            k[i] = rhs(t + _DP_C[i] * h, yi)
        y_new = y + h * (_DP_B5 @ k)
        err_vec = h * (_DP_E @ k)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if not np.all(np.isfinite(y_new)) or not math.isfinite(err):
            h *= 0.25
            continue
        if err <= 1.0:
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            return t + h, y_new, h * factor
        h *= max(0.2, 0.9 * err ** -0.2)


def _run_adaptive(rhs, y0, spec: IntegratorSpec):
    # output times are multiples of dt*stride; steps are clipped to land on them
    interval = spec.dt * spec.sample_stride
    n_out = max(1, int(math.ceil(spec.t_end / interval - 1e-9)))
    ts = [0.0]
    ys = [np.asarray(y0, dtype=float)]
    t, y, h = 0.0, ys[0], spec.dt
    error = None
    try:
        for j in range(1, n_out + 1):
            t_target = j * interval
            while t < t_target:
                remaining = t_target - t
                if remaining <= 1e-12 * max(1.0, t_target):
                    break
                t_new, y, h_next = step_adaptive(
                    rhs, t, y, h, spec.rel_tol, spec.abs_tol, dt_max=remaining
                )
                # keep the controller's proposal unless clipping shrank the step
                h = h_next if t_new - t < remaining else max(h, h_next)
                t = t_new
            t = t_target
            ts.append(t)
            ys.append(y)
    except (IntegrationError, ValueError, ZeroDivisionError) as exc:
        error = str(exc)
    return np.asarray(ts), np.vstack(ys), error


# -- diagnostics ----------------------------------------------------------------


def _rigid_diagnostics(p: PendulumParams, v: np.ndarray, y: np.ndarray):
    K = p.curvature
    zeta, zd = y[:, 0], y[:, 1]
    pot = 0.5 * p.mass * v**2 * sgn(K) * sin_k(K, p.rod_length) ** 2 * np.sin(zeta) ** 2
    H = 0.5 * p.reduced_mass * zd**2 + pot
    return H, first_integral(p, v, RigidState(zeta, zd))


def _elastic_diagnostics(p: PendulumParams, v: float, y: np.ndarray):
    K = p.curvature
    zeta, l, zd, ld = y.T
    r = p.rod_length + l
    rk = math.sqrt(abs(K))
    sr = np.sin(r * rk) if K > 0 else np.sinh(r * rk)
    E = (
        0.5 * p.mass * zd**2 * (sr / rk) ** 2
        + 0.5 * p.mass * v**2 * sgn(K) * sr**2 * np.sin(zeta) ** 2
        + 0.5 * p.mass * ld**2
        + 0.5 * p.spring_k * l**2
    )
    return E, first_integral(p, v, RigidState(zeta, zd))


def _embed_rows(p, arclength, y, kind):
    out = np.empty((len(y), 6))
    make = RigidState if kind == "rigid" else ElasticState
    for i, (s, row) in enumerate(zip(arclength, y)):
        pivot, mass = _embed(p, float(s), make(*row))
        out[i, :3] = pivot
        out[i, 3:] = mass
    return out


def _pivot_position(motion, t: np.ndarray) -> np.ndarray:
    return np.array([motion.position(float(ti)) for ti in t])


# -- drivers ----------------------------------------------------------------------


def simulate_rigid(
    p: PendulumParams,
    motion: PivotMotion,
    s0: RigidState,
    spec: IntegratorSpec,
    *,
    embed: bool = False,
    backend: Optional[str] = None,
) -> Trajectory:
    """Integrate the rigid pendulum; constant speed or accelerated pivot.

    Leapfrog needs a :class:`ConstantSpeed` pivot, since the accelerated
    equation is non-autonomous.
    """
    kern = kernels.get(backend)
    constant = isinstance(motion, ConstantSpeed)
    if spec.method == "leapfrog" and not constant:
        raise ValueError("leapfrog requires a ConstantSpeed pivot motion")
    if not constant and p.curvature == 0:
        raise ValueError("an accelerated pivot needs K != 0")

    error = None
    if spec.method == "adaptive":
        if constant:
            v = motion.v

            def rhs(t, y):
                return (y[1], eom_rigid(p, v, RigidState(y[0], y[1])))

        else:

            def rhs(t, y):
                return (y[1], eom_accelerated(p, motion, t, RigidState(y[0], y[1])))

        t, y, error = _run_adaptive(rhs, tuple(s0), spec)
    else:
        n, stride = spec.n_steps, int(spec.sample_stride)
        if spec.method == "leapfrog":
            steps, y, ok = kern.rigid_leapfrog(s0[0], s0[1], motion.v, p.curvature, spec.dt, n, stride)
        elif constant:
            steps, y, ok = kern.rigid_rk4(s0[0], s0[1], motion.v, p.curvature, spec.dt, n, stride)
        else:

            def accel(t, z, zd):
                return eom_accelerated(p, motion, t, RigidState(z, zd))

            steps, y, ok = kern.rigid_rk4_general(accel, s0[0], s0[1], spec.dt, n, stride)
        t = steps * spec.dt
        if not ok:
            error = f"non-finite state after t={t[-1]!r}"

    v_t = np.array([motion.speed(float(ti)) for ti in t])
    H, fi = _rigid_diagnostics(p, v_t, y)
    emb = _embed_rows(p, _pivot_position(motion, t), y, "rigid") if embed else None
    return Trajectory("rigid", t, y, H, fi, emb, error, kern.BACKEND)


def simulate_elastic(
    p: PendulumParams,
    v: float,
    s0: ElasticState,
    spec: IntegratorSpec,
    *,
    embed: bool = False,
    backend: Optional[str] = None,
) -> Trajectory:
    """Integrate the elastic-rod pendulum at constant pivot speed ``v``.

    Only rk4 and adaptive are accepted: the zeta equation has a
    velocity-dependent term, so the leapfrog splitting does not apply.
    """
    kern = kernels.get(backend)
    if spec.method == "leapfrog":
        raise ValueError("leapfrog is not valid for the elastic system")
    if p.curvature == 0:
        raise ValueError("the elastic model needs K != 0")
    s0 = ElasticState(*s0)
    eom_elastic(p, v, s0)  # validates the initial rod length

    error = None
    if spec.method == "adaptive":

        def rhs(t, y):
            zdd, ldd = eom_elastic(p, v, ElasticState(*y))
            return (y[2], y[3], zdd, ldd)

        t, y, error = _run_adaptive(rhs, tuple(s0), spec)
    else:
        steps, y, ok = kern.elastic_rk4(
            *s0, v, p.curvature, p.rod_length, p.spring_k / p.mass,
            spec.dt, spec.n_steps, int(spec.sample_stride),
        )
        t = steps * spec.dt
        if not ok:
            error = f"integration aborted after t={t[-1]!r}: invalid rod length or non-finite state"

    E, fi = _elastic_diagnostics(p, v, y)
    emb = _embed_rows(p, v * t, y, "elastic") if embed else None
    return Trajectory("elastic", t, y, E, fi, emb, error, kern.BACKEND)
