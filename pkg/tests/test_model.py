import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvpend.analysis import first_integral
from curvpend.model import (
    ConstantSpeed,
    ElasticState,
    EmbeddedPoint,
    FlatCurvatureError,
    PendulumParams,
    PiecewiseAccel,
    RigidState,
    SinusoidalAccel,
    elastic_energy,
    elastic_lagrangian,
    embed,
    eom_accelerated,
    eom_elastic,
    eom_rigid,
    flat_lagrangian,
    geodesic_distance,
    hamiltonian,
    kinetic_energy,
    lagrangian,
    momentum,
    potential_energy,
    quadric_residual,
)

SINH1_SQ = 1.3810978455418157
HALF_PI = math.pi / 2
UNIT = PendulumParams(1.0, HALF_PI, 1.0)  # m = 1, K = 1, rho = pi/2, m_red = 1


def test_params_validation():
    with pytest.raises(ValueError, match="mass"):
        PendulumParams(0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="rod_length"):
        PendulumParams(1.0, -1.0, 1.0)
    with pytest.raises(ValueError, match="pi"):
        PendulumParams(1.0, math.pi, 1.0)
    with pytest.raises(ValueError, match="spring_k"):
        PendulumParams(1.0, 1.0, 1.0, spring_k=-1.0)
    assert PendulumParams(1.0, 10.0, -1.0).reduced_mass == pytest.approx(math.sinh(10.0) ** 2)
    assert PendulumParams(2.0, 3.0, 0.0).reduced_mass == 18.0


def test_kinetic_energy():
    assert kinetic_energy(UNIT, 1.0, RigidState(0.3, 2.0)) == pytest.approx(2.0, rel=1e-15)
    p = PendulumParams(2.0, 1.0, -1.0)
    assert kinetic_energy(p, 1.0, RigidState(0.0, 1.0)) == pytest.approx(SINH1_SQ, rel=1e-14)
    assert kinetic_energy(p, 5.0, RigidState(1.0, 0.0)) == 0.0


def test_potential_energy():
    assert potential_energy(UNIT, 1.0, RigidState(0.0, 0.0)) == 0.0
    assert potential_energy(UNIT, 1.0, RigidState(HALF_PI, 0.0)) == pytest.approx(-0.5, rel=1e-15)
    p = PendulumParams(1.0, 1.0, -1.0)
    assert potential_energy(p, 2.0, RigidState(math.pi / 4, 0.0)) == pytest.approx(SINH1_SQ, rel=1e-14)


def test_lagrangian_examples():
    assert lagrangian(UNIT, 1.0, RigidState(0.0, 0.0)) == 0.0
    assert lagrangian(UNIT, 1.0, RigidState(HALF_PI, 0.0)) == pytest.approx(-0.5, rel=1e-15)
    s = RigidState(math.pi / 4, 1.0)
    assert lagrangian(UNIT, 1.0, s) == pytest.approx(0.25, rel=1e-14)
    assert lagrangian(UNIT, 1.0, s) == pytest.approx(
        kinetic_energy(UNIT, 1.0, s) + potential_energy(UNIT, 1.0, s), rel=1e-15
    )


def test_flat_lagrangian():
    assert flat_lagrangian(PendulumParams(1.0, 2.0, 0.0), RigidState(0.0, 1.0)) == 2.0
    assert flat_lagrangian(PendulumParams(3.0, 1.0, 0.0), RigidState(0.0, 2.0)) == 6.0
    s = RigidState(math.pi / 3, 1.0)
    near = lagrangian(PendulumParams(1.0, 1.0, 1e-10), 1.0, s)
    assert abs(near - flat_lagrangian(PendulumParams(1.0, 1.0, 0.0), s)) < 1e-8


def test_momentum_and_hamiltonian():
    assert momentum(UNIT, RigidState(0.0, 3.0)) == pytest.approx(3.0, rel=1e-15)
    assert hamiltonian(UNIT, 1.0, RigidState(HALF_PI, 0.0)) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize(
    "op", [kinetic_energy, potential_energy, lagrangian, hamiltonian]
)
def test_flat_curvature_errors(op):
    with pytest.raises(FlatCurvatureError):
        op(PendulumParams(1.0, 1.0, 0.0), 1.0, RigidState(0.1, 0.1))


def test_eom_rigid_examples():
    assert eom_rigid(UNIT, 1.0, RigidState(0.0, 5.0)) == 0.0
    assert eom_rigid(UNIT, 2.0, RigidState(math.pi / 4, 0.0)) == pytest.approx(-2.0, rel=1e-15)
    p = PendulumParams(1.0, 1.0, -1.0)
    assert eom_rigid(p, 1.0, RigidState(math.pi / 4, 0.0)) == pytest.approx(0.5, rel=1e-15)
    assert eom_rigid(PendulumParams(1.0, 1.0, 0.0), 3.0, RigidState(1.0, 0.0)) == 0.0
    assert eom_rigid(UNIT, -2.0, RigidState(0.4, 0.0)) == eom_rigid(UNIT, 2.0, RigidState(0.4, 0.0))


@pytest.mark.parametrize("K", [-4.0, -0.25, 0.25, 1.0])
def test_eom_rigid_independent_of_rho_and_mass(K):
    s = RigidState(0.77, -1.3)
    out = {eom_rigid(PendulumParams(m, rho, K), 1.7, s) for rho in (0.1, 1.0, 2.0) for m in (0.5, 3.0)}
    assert len(out) == 1


def test_first_integral_affine_in_hamiltonian():
    rng = np.random.default_rng(7)
    for K in (-4.0, -1.0, -0.25, 0.25, 1.0, 4.0):
        p = PendulumParams(1.3, 0.7 / math.sqrt(abs(K)), K)
        v = 1.4
        const = p.reduced_mass * K * v * v / 4
        for _ in range(50):
            s = RigidState(rng.uniform(-4, 4), rng.uniform(-3, 3))
            H = hamiltonian(p, v, s)
            rhs = p.reduced_mass / 4 * first_integral(p, v, s) + const
            assert abs(H - rhs) <= 1e-12 * max(1.0, abs(H))


# -- pivot motion -----------------------------------------------------------------

MOTIONS = [
    ConstantSpeed(1.5),
    PiecewiseAccel(0.5, [(0.0, 1.0), (1.0, -2.0), (2.5, 0.25)]),
    PiecewiseAccel(1.0, [(0.5, 3.0)]),
    SinusoidalAccel(0.3, 2.0, 1.0),
]


@pytest.mark.parametrize("motion", MOTIONS, ids=lambda m: type(m).__name__)
def test_accel_is_derivative_of_speed(motion):
    h = 1e-6
    # avoid breakpoints, where the piecewise acceleration jumps
    for t in np.linspace(0.05, 4.0, 37) + 0.013:
        fd = (motion.speed(t + h) - motion.speed(t - h)) / (2 * h)
        assert fd == pytest.approx(motion.accel(t), abs=1e-7)
        fd_x = (motion.position(t + h) - motion.position(t - h)) / (2 * h)
        assert fd_x == pytest.approx(motion.speed(t), abs=1e-7)


def test_piecewise_values():
    m = PiecewiseAccel(0.5, [(0.0, 1.0), (1.0, -2.0)])
    assert m.speed(0.0) == 0.5 and m.speed(1.0) == 1.5 and m.speed(2.0) == -0.5
    assert m.position(1.0) == pytest.approx(1.0)
    assert PiecewiseAccel(2.0, [(1.0, 1.0)]).accel(0.5) == 0.0
    with pytest.raises(ValueError):
        PiecewiseAccel(0.0, [(2.0, 1.0), (1.0, 0.0)])


# -- accelerated pivot ------------------------------------------------------------


def test_eom_accelerated_reduces_to_rigid():
    p = PendulumParams(1.0, 0.8, -2.0)
    motion = PiecewiseAccel(1.3, [(0.0, 0.0)])
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = RigidState(rng.uniform(-4, 4), rng.uniform(-2, 2))
        t = rng.uniform(0, 10)
        assert eom_accelerated(p, motion, t, s) == eom_rigid(p, 1.3, s)


def test_eom_accelerated_examples():
    p = PendulumParams(1.0, math.pi / 4, 1.0)
    push = PiecewiseAccel(0.0, [(0.0, 2.0)])
    assert eom_accelerated(p, push, 0.0, RigidState(HALF_PI, 0.0)) == pytest.approx(2.0, rel=1e-15)
    assert eom_accelerated(p, SinusoidalAccel(1.0, 1.0, 2.0), 0.7, RigidState(0.0, 1.0)) == 0.0


@pytest.mark.parametrize("rho", [0.3, 0.9, 2.1])
@pytest.mark.parametrize("zeta", [0.4, 1.1, 2.5])
def test_eom_accelerated_matches_geometric_projection(rho, zeta):
    # right spherical triangle pivot-mass-foot on the unit sphere (R = 1):
    # mass height h, foot distance d, angle mu at the mass
    K, a = 1.0, 1.7
    h = math.asin(math.sin(rho) * math.sin(zeta))
    d = math.acos(math.cos(rho) / math.cos(h))
    cos_mu = math.sin(zeta) * math.cos(h)
    # cos(d) = cos(rho)/cos(h) holds for signed d, so no branch for cos(zeta) < 0
    projected = a * math.cos(d) * cos_mu / math.sin(rho)
    p = PendulumParams(1.0, rho, K)
    motion = PiecewiseAccel(0.0, [(0.0, a)])
    assert eom_accelerated(p, motion, 0.0, RigidState(zeta, 0.0)) == pytest.approx(projected, rel=1e-12)


def test_eom_accelerated_needs_curvature():
    with pytest.raises(FlatCurvatureError):
        eom_accelerated(PendulumParams(1.0, 1.0, 0.0), ConstantSpeed(1.0), 0.0, RigidState(0.1, 0.0))


# -- elastic ------------------------------------------------------------------------


def test_eom_elastic_reduces_to_rigid():
    rng = np.random.default_rng(3)
    for K in (-1.0, 0.5, 2.0):
        p = PendulumParams(1.2, 0.9 / math.sqrt(abs(K)), K, spring_k=rng.uniform(0, 50))
        for _ in range(20):
            z, zd = rng.uniform(-3, 3), rng.uniform(-2, 2)
            zdd, _ = eom_elastic(p, 0.8, ElasticState(z, 0.0, zd, 0.0))
            assert zdd == pytest.approx(eom_rigid(p, 0.8, RigidState(z, zd)), rel=1e-14, abs=1e-15)


def test_eom_elastic_centrifugal_example():
    p = PendulumParams(1.0, math.pi / 4, 1.0, spring_k=0.0)
    zdd, ldd = eom_elastic(p, 0.0, ElasticState(0.0, 0.0, 1.0, 0.0))
    assert zdd == 0.0
    assert ldd == pytest.approx(0.5, rel=1e-15)


def test_eom_elastic_spring_term():
    p = PendulumParams(2.0, 1.0, -1.0, spring_k=8.0)
    _, ldd = eom_elastic(p, 0.0, ElasticState(0.0, 0.1, 0.0, 0.0))
    assert ldd == pytest.approx(-0.4, rel=1e-14)


def test_elastic_lagrangian_and_energy_reduce_at_zero_elongation():
    p = PendulumParams(1.3, 0.8, -0.7, spring_k=5.0)
    s = ElasticState(0.6, 0.0, -0.4, 0.0)
    r = RigidState(0.6, -0.4)
    assert elastic_lagrangian(p, 1.1, s) == pytest.approx(lagrangian(p, 1.1, r), rel=1e-14)
    assert elastic_energy(p, 1.1, s) == pytest.approx(hamiltonian(p, 1.1, r), rel=1e-14)


def test_eom_elastic_rejects_invalid_rod():
    p = PendulumParams(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        eom_elastic(p, 1.0, ElasticState(0.0, -1.5, 0.0, 0.0))
    with pytest.raises(ValueError):
        eom_elastic(p, 1.0, ElasticState(0.0, math.pi, 0.0, 0.0))


# -- embedding ----------------------------------------------------------------------


def test_embed_short_rod_collapses_to_pivot():
    p = PendulumParams(1.0, 1e-9, 1.0)
    pivot, mass = embed(p, 0.3, RigidState(1.0, 0.0))
    assert np.allclose(pivot, mass, atol=1e-8)


def test_embed_pole_example():
    p = PendulumParams(1.0, HALF_PI, 1.0)
    pivot, mass = embed(p, 0.0, RigidState(HALF_PI, 0.0))
    assert np.allclose(pivot, (1.0, 0.0, 0.0), atol=1e-15)
    # rotation-matrix oracle: turn the pivot by rho = pi/2 about pivot x w,
    # where w is the second tangent (zeta = pi/2 from the velocity e_y)
    w = np.array([0.0, 0.0, 1.0])
    axis = np.cross(pivot, w)
    Kx = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    rot = np.eye(3) + Kx + Kx @ Kx
    assert np.allclose(mass, rot @ np.asarray(pivot), atol=1e-15)
    assert np.allclose(mass, (0.0, 0.0, 1.0), atol=1e-15)


def _spec_distance(K, a, b):
    R2 = 1.0 / abs(K)
    if K > 0:
        return math.sqrt(R2) * math.acos(max(-1.0, min(1.0, np.dot(a, b) / R2)))
    lor = a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
    return math.sqrt(R2) * math.acosh(max(1.0, -lor / R2))


@settings(max_examples=100, deadline=None)
@given(
    K=st.sampled_from([-4.0, -1.0, -0.25, 0.25, 1.0, 4.0]),
    frac=st.floats(0.05, 0.95),
    arclength=st.floats(-3.0, 3.0),
    zeta=st.floats(-7.0, 7.0),
)
def test_embed_invariants(K, frac, arclength, zeta):
    R = 1.0 / math.sqrt(abs(K))
    rho = frac * (math.pi * R if K > 0 else 3.0 * R)
    p = PendulumParams(1.0, rho, K)
    pivot, mass = embed(p, arclength * R, RigidState(zeta, 0.0))
    for q in (pivot, mass):
        assert isinstance(q, EmbeddedPoint)
        assert abs(quadric_residual(K, q)) <= 1e-9 * R * R
    assert abs(geodesic_distance(K, pivot, mass) - rho) <= 1e-9
    assert abs(_spec_distance(K, pivot, mass) - rho) <= 1e-9


def test_embed_pivot_tracks_arclength():
    for K in (1.0, -1.0):
        p = PendulumParams(1.0, 0.5, K)
        a, _ = embed(p, 0.0, RigidState(0.0, 0.0))
        b, _ = embed(p, 1.3, RigidState(0.0, 0.0))
        assert geodesic_distance(K, a, b) == pytest.approx(1.3, rel=1e-12)


def test_embed_elastic_uses_stretched_length():
    p = PendulumParams(1.0, 0.5, -1.0)
    pivot, mass = embed(p, 0.2, ElasticState(0.9, 0.25, 0.0, 0.0))
    assert geodesic_distance(-1.0, pivot, mass) == pytest.approx(0.75, rel=1e-12)


def test_embed_orientation_counterclockwise():
    # small positive zeta turns the rod from the velocity towards the second tangent
    p = PendulumParams(1.0, 0.1, 1.0)
    _, m = embed(p, 0.0, RigidState(0.2, 0.0))
    assert m.y > 0 and m.z > 0
    p = PendulumParams(1.0, 0.1, -1.0)
    _, m = embed(p, 0.0, RigidState(0.2, 0.0))
    assert m.x > 0 and m.y > 0


def test_embed_needs_curvature():
    with pytest.raises(FlatCurvatureError):
        embed(PendulumParams(1.0, 1.0, 0.0), 0.0, RigidState(0.0, 0.0))
