"""Finite-difference Euler-Lagrange solver used to check closed-form EOMs.

Given only a Lagrangian ``L(q, q_dot, t)``, :func:`el_acceleration` builds

    M = d2L/dq_dot2,   b = dL/dq - (d2L/dq_dot dq) q_dot - d2L/dq_dot dt

by central differences and solves ``M q_ddot = b``.  Nothing here knows the
closed forms in :mod:`curvpend.model`, so agreement is an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ktrig import cos_k, sin_k
from .model import (
    ElasticState,
    PendulumParams,
    RigidState,
    elastic_lagrangian,
    eom_elastic,
    eom_rigid,
    lagrangian,
)

__all__ = [
    "OracleError",
    "LagrangianFn",
    "VerifyReport",
    "el_acceleration",
    "verify_eom",
    "rigid_lagrangian_fn",
    "elastic_lagrangian_fn",
    "standard_checks",
    "format_reports",
    "VERIFY_K",
]

DEFAULT_STEP = 1e-3
MAX_CONDITION = 1e10
VERIFY_K = (0.25, 1.0, 4.0, -0.25, -1.0, -4.0)


class OracleError(ArithmeticError):
    """Singular mass matrix or non-finite Lagrangian evaluation."""


@dataclass(frozen=True)
class LagrangianFn:
    fn: Callable[[np.ndarray, np.ndarray, float], float]
    dim: int
    name: str = "L"

    def __call__(self, q, q_dot, t=0.0) -> float:
        val = self.fn(q, q_dot, t)
        if not math.isfinite(val):
            raise OracleError(f"{self.name} is not finite at q={q!r}, q_dot={q_dot!r}, t={t!r}")
        return val


def _steps(x, base):
    return base * np.maximum(1.0, np.abs(x))


def _partial(f, x, i, h):
    e = np.zeros_like(x)
    e[i] = h
    return (f(x + e) - f(x - e)) / (2.0 * h)


def _mixed(f, x, y, i, j, hx, hy):
    """d2 f(x, y) / dx_i dy_j by the four-point stencil."""
    ex = np.zeros_like(x)
    ey = np.zeros_like(y)
    ex[i] = hx
    ey[j] = hy
    return (
        f(x + ex, y + ey) - f(x + ex, y - ey) - f(x - ex, y + ey) + f(x - ex, y - ey)
    ) / (4.0 * hx * hy)


def _el_system(L, q, qd, t, base):
    n = q.size
    hq = _steps(q, base)
    hv = _steps(qd, base)
    ht = base * max(1.0, abs(t))
    M = np.empty((n, n))
    C = np.empty((n, n))
    dLdq = np.empty(n)
    dLdvdt = np.empty(n)
    for i in range(n):
        dLdq[i] = _partial(lambda x: L(x, qd, t), q, i, hq[i])
        for j in range(n):
            M[i, j] = _mixed(lambda a, b: L(q, a + b - qd, t), qd, qd, i, j, hv[i], hv[j])
            C[i, j] = _mixed(lambda a, b: L(b, a, t), qd, q, i, j, hv[i], hq[j])
        tt = np.array([t])
        dLdvdt[i] = _mixed(lambda a, b: L(q, a, b[0]), qd, tt, i, 0, hv[i], ht)
    return M, dLdq - C @ qd - dLdvdt


def _solve(M, b):
    if not np.all(np.isfinite(M)) or not np.all(np.isfinite(b)):
        raise OracleError("non-finite finite-difference derivatives")
    cond = np.linalg.cond(M)
    if not cond < MAX_CONDITION:
        raise OracleError(f"mass matrix is singular (condition number {cond:.3g})")
    return np.linalg.solve(M, b)


def el_acceleration(
    L,
    q,
    q_dot,
    t: float = 0.0,
    *,
    step: float = DEFAULT_STEP,
    richardson: bool = True,
) -> np.ndarray:
    """Accelerations solving the Euler-Lagrange equations of ``L``.

    Per-coordinate step ``step * max(1, |x|)``.  With ``richardson`` the
    results at ``step`` and ``step/2`` are combined as ``(4 a_{h/2} - a_h)/3``,
    cancelling the O(h^2) term of the central differences.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    qd = np.atleast_1d(np.asarray(q_dot, dtype=float))
    a = _solve(*_el_system(L, q, qd, t, step))
    if richardson:
        a_half = _solve(*_el_system(L, q, qd, t, 0.5 * step))
        a = (4.0 * a_half - a) / 3.0
    return a


@dataclass
class VerifyReport:
    name: str
    n_samples: int
    tol: float
    max_deviation: float
    worst_state: Optional[tuple] = None
    expect_fail: bool = False
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol

    @property
    def ok(self) -> bool:
        """True when the outcome is the expected one (pass, or fail for a control)."""
        return self.passed != self.expect_fail

    def format(self) -> str:
        if self.expect_fail:
            status = "EXPECTED-FAIL" if not self.passed else "UNEXPECTED-PASS"
        else:
            status = "PASS" if self.passed else "FAIL"
        line = (
            f"{status:15s} {self.name}: max_rel_dev={self.max_deviation:.3e} "
            f"tol={self.tol:.1e} n={self.n_samples}"
        )
        if self.worst_state is not None:
            q, qd, t = self.worst_state
            fmt = lambda xs: "(" + ", ".join(f"{x:.6g}" for x in xs) + ")"
            line += f" worst q={fmt(q)} q_dot={fmt(qd)} t={t:.6g}"
        return line


def verify_eom(
    L: LagrangianFn,
    closed_form_rhs: Callable,
    sampler: Callable,
    n_samples: int,
    tol: float,
    *,
    seed: int = 0,
    name: Optional[str] = None,
    expect_fail: bool = False,
    **el_kwargs,
) -> VerifyReport:
    """Compare ``closed_form_rhs(q, q_dot, t)`` with :func:`el_acceleration`.

    ``sampler(rng)`` returns ``(q, q_dot, t)``.  The deviation of a sample is
    ``max|a_fd - a_cf| / max|a_cf|`` (absolute when the closed form is zero).
    """
    rng = np.random.default_rng(seed)
    worst, worst_state = 0.0, None
    for _ in range(n_samples):
        q, qd, t = sampler(rng)
        ref = np.atleast_1d(np.asarray(closed_form_rhs(q, qd, t), dtype=float))
        got = el_acceleration(L, q, qd, t, **el_kwargs)
        scale = float(np.max(np.abs(ref)))
        dev = float(np.max(np.abs(got - ref)))
        if scale > 0:
            dev /= scale
        if not dev <= worst:
            worst = dev
            worst_state = (
                tuple(float(x) for x in np.atleast_1d(q)),
                tuple(float(x) for x in np.atleast_1d(qd)),
                float(t),
            )
    return VerifyReport(name or L.name, n_samples, tol, worst, worst_state, expect_fail)


# -- the pendulum Lagrangians ---------------------------------------------------


def rigid_lagrangian_fn(p: PendulumParams, v: float) -> LagrangianFn:
    return LagrangianFn(
        lambda q, qd, t: lagrangian(p, v, RigidState(q[0], qd[0])), 1, f"rigid(K={p.curvature:g})"
    )


def elastic_lagrangian_fn(p: PendulumParams, v: float) -> LagrangianFn:
    return LagrangianFn(
        lambda q, qd, t: elastic_lagrangian(p, v, ElasticState(q[0], q[1], qd[0], qd[1])),
        2,
        f"elastic(K={p.curvature:g})",
    )


def _params_for(K: float, spring_k: float = 3.0) -> PendulumParams:
    # rho*sqrt|K| = 0.7 keeps K > 0 well inside rho*sqrt(K) < pi
    return PendulumParams(1.3, 0.7 / math.sqrt(abs(K)), K, spring_k=spring_k)


def _rigid_sampler(rng):
    return (
        np.array([rng.uniform(-math.pi, math.pi)]),
        np.array([rng.uniform(-2.0, 2.0)]),
        0.0,
    )


def _elastic_sampler_for(p: PendulumParams):
    def sample(rng):
        q = np.array([rng.uniform(-math.pi, math.pi), rng.uniform(-0.3, 0.3) * p.rod_length])
        qd = np.array([rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)])
        return q, qd, 0.0

    return sample


def _kform_rhs(K, v):
    # zeta'' = -v^2 K sin_k(zeta) cos_k(zeta): curvature trig applied to the angle
    return lambda q, qd, t: -v * v * K * sin_k(K, q[0]) * cos_k(K, q[0])


def standard_checks(
    n_samples: int = 200, tol: float = 1e-6, v: float = 1.1, seed: int = 0,
    curvatures=VERIFY_K,
) -> list[VerifyReport]:
    """Rigid and elastic EOMs against the oracle for each K, plus one control.

    The control feeds the curvature-trig form of the rigid equation for
    K = -1 and is expected to fail.
    """
    reports = []
    for K in curvatures:
        p = _params_for(K)
        reports.append(
            verify_eom(
                rigid_lagrangian_fn(p, v),
                lambda q, qd, t, p=p: eom_rigid(p, v, RigidState(q[0], qd[0])),
                _rigid_sampler, n_samples, tol, seed=seed,
            )
        )
    for K in curvatures:
        p = _params_for(K)
        reports.append(
            verify_eom(
                elastic_lagrangian_fn(p, v),
                lambda q, qd, t, p=p: eom_elastic(p, v, ElasticState(q[0], q[1], qd[0], qd[1])),
                _elastic_sampler_for(p), n_samples, tol, seed=seed,
            )
        )
    K = -1.0
    p = _params_for(K)
    control = verify_eom(
        rigid_lagrangian_fn(p, v),
        _kform_rhs(K, v),
        lambda rng: (np.array([math.pi / 4]), np.array([0.0]), 0.0),
        1, 0.1, name="control: sin_k(zeta)cos_k(zeta) form (K=-1)", expect_fail=True,
    )
    reports.append(control)
    return reports


def format_reports(reports) -> str:
    lines = [r.format() for r in reports]
    ok = all(r.ok for r in reports)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines)
