import math

import numpy as np
import pytest

from curvpend.model import PendulumParams
from curvpend.oracle import (
    _el_system,
    elastic_lagrangian_fn,
    LagrangianFn,
    OracleError,
    VerifyReport,
    _mixed,
    el_acceleration,
    format_reports,
    rigid_lagrangian_fn,
    standard_checks,
    verify_eom,
)


def test_free_particle():
    L = LagrangianFn(lambda q, qd, t: 0.5 * float(qd @ qd), 2)
    a = el_acceleration(L, [0.3, -1.0], [2.0, 0.5])
    assert np.max(np.abs(a)) < 1e-9


def test_harmonic_oscillator():
    L = LagrangianFn(lambda q, qd, t: 0.5 * qd[0] ** 2 - 0.5 * q[0] ** 2, 1)
    assert el_acceleration(L, [1.0], [0.0])[0] == pytest.approx(-1.0, abs=1e-7)


def test_time_dependent_lagrangian():
    # L = 1/2 m(t) qd^2 with m = 1 + t: (m qd)' = 0, so qdd = -qd / m
    L = LagrangianFn(lambda q, qd, t: 0.5 * (1 + t) * qd[0] ** 2, 1)
    assert el_acceleration(L, [0.0], [2.0], t=1.0)[0] == pytest.approx(-1.0, rel=1e-8)


def test_rigid_pendulum_value():
    L = rigid_lagrangian_fn(PendulumParams(1.0, 1.0, 1.0), 1.0)
    assert el_acceleration(L, [math.pi / 4], [0.0])[0] == pytest.approx(-0.5, rel=1e-8)


def test_second_order_without_richardson():
    L = LagrangianFn(lambda q, qd, t: 0.5 * qd[0] ** 2 + math.cos(3 * q[0]) * qd[0] ** 2, 1)
    ref = el_acceleration(L, [0.4], [1.1], step=1e-3)[0]
    errs = [abs(el_acceleration(L, [0.4], [1.1], step=h, richardson=False)[0] - ref) for h in (4e-2, 2e-2)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)


def test_mixed_partial_symmetry():
    f = lambda x, y: math.sin(x[0] * y[1]) + x[1] ** 2 * math.exp(y[0])
    x, y = np.array([0.3, 0.7]), np.array([-0.2, 1.1])
    a = _mixed(f, x, y, 0, 1, 1e-4, 1e-4)
    b = _mixed(lambda y_, x_: f(x_, y_), y, x, 1, 0, 1e-4, 1e-4)
    assert abs(a - b) < 1e-10


def test_singular_mass_matrix():
    L = LagrangianFn(lambda q, qd, t: qd[0] - q[0] ** 2, 1)
    with pytest.raises(OracleError, match="singular"):
        el_acceleration(L, [1.0], [1.0])


def test_non_finite_lagrangian():
    L = LagrangianFn(lambda q, qd, t: math.inf, 1)
    with pytest.raises(OracleError):
        el_acceleration(L, [0.0], [0.0])


def test_verify_report_statuses():
    assert VerifyReport("a", 1, 1e-6, 1e-7).format().startswith("PASS")
    assert VerifyReport("a", 1, 1e-6, 1e-5).format().startswith("FAIL")
    r = VerifyReport("c", 1, 0.1, 0.5, expect_fail=True)
    assert r.ok and r.format().startswith("EXPECTED-FAIL")
    r = VerifyReport("c", 1, 0.1, 0.0, expect_fail=True)
    assert not r.ok and r.format().startswith("UNEXPECTED-PASS")


def test_verify_eom_detects_wrong_rhs():
    p = PendulumParams(1.0, 1.0, 1.0)
    L = rigid_lagrangian_fn(p, 1.0)
    sampler = lambda rng: (np.array([rng.uniform(0.2, 1.2)]), np.array([0.0]), 0.0)
    wrong = verify_eom(L, lambda q, qd, t: -math.sin(q[0]), sampler, 10, 1e-6)
    assert not wrong.passed
    assert wrong.worst_state is not None


def test_standard_checks_all_ok():
    reports = standard_checks(n_samples=30)
    assert len(reports) == 13
    assert all(r.ok for r in reports)
    control = reports[-1]
    assert control.expect_fail and not control.passed
    text = format_reports(reports)
    assert text.splitlines()[-1] == "overall: PASS"


def test_elastic_mass_matrix_symmetric():
    p = PendulumParams(1.3, 0.7, -1.0, spring_k=3.0)
    L = elastic_lagrangian_fn(p, 1.1)
    M, _ = _el_system(L, np.array([0.4, 0.05]), np.array([0.9, -0.3]), 0.0, 1e-3)
    assert abs(M[0, 1] - M[1, 0]) < 1e-10
