# cython: language_level=3
"""Compiled integration kernels.

Same signatures, sampling rules and floating-point operation order as
``_pykernels``; see that module for the contract.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sinh, cosh, sqrt, isfinite, M_PI

cnp.import_array()

BACKEND = "cython"


cdef inline Py_ssize_t _n_samples(Py_ssize_t n_steps, Py_ssize_t stride):
    return n_steps // stride + 2


def rigid_leapfrog(double zeta0, double zdot0, double v, double K, double dt,
                   Py_ssize_t n_steps, Py_ssize_t stride):
    cdef double mc = -(v * v) * K
    cdef double half = 0.5 * dt
    cdef double z = zeta0, zd = zdot0, zh, z_new, zd_new
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.empty(_n_samples(n_steps, stride), dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Y = np.empty((_n_samples(n_steps, stride), 2))
    cdef Py_ssize_t i = 0, k = 1
    cdef bint ok = True
    steps[0] = 0
    Y[0, 0] = z
    Y[0, 1] = zd
    for i in range(1, n_steps + 1):
        zh = z + half * zd
        zd_new = zd + dt * (mc * sin(zh) * cos(zh))
        z_new = zh + half * zd_new
        if not (isfinite(z_new) and isfinite(zd_new)):
            ok = False
            i -= 1
            break
        z = z_new
        zd = zd_new
        if i % stride == 0:
            steps[k] = i
            Y[k, 0] = z
            Y[k, 1] = zd
            k += 1
    if n_steps == 0:
        i = 0
    if steps[k - 1] != i:
        steps[k] = i
        Y[k, 0] = z
        Y[k, 1] = zd
        k += 1
    return steps[:k].copy(), Y[:k].copy(), ok


def rigid_rk4(double zeta0, double zdot0, double v, double K, double dt,
              Py_ssize_t n_steps, Py_ssize_t stride):
    cdef double mc = -(v * v) * K
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double z = zeta0, zd = zdot0
    cdef double k1z, k1v, z2, k2z, k2v, z3, k3z, k3v, z4, k4z, k4v, z_new, zd_new
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.empty(_n_samples(n_steps, stride), dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Y = np.empty((_n_samples(n_steps, stride), 2))
    cdef Py_ssize_t i = 0, k = 1
    cdef bint ok = True
    steps[0] = 0
    Y[0, 0] = z
    Y[0, 1] = zd
    for i in range(1, n_steps + 1):
        k1z = zd
        k1v = mc * sin(z) * cos(z)
        z2 = z + half * k1z
        k2z = zd + half * k1v
        k2v = mc * sin(z2) * cos(z2)
        z3 = z + half * k2z
        k3z = zd + half * k2v
        k3v = mc * sin(z3) * cos(z3)
        z4 = z + dt * k3z
        k4z = zd + dt * k3v
        k4v = mc * sin(z4) * cos(z4)
        z_new = z + sixth * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        zd_new = zd + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (isfinite(z_new) and isfinite(zd_new)):
            ok = False
            i -= 1
            break
        z = z_new
        zd = zd_new
        if i % stride == 0:
            steps[k] = i
            Y[k, 0] = z
            Y[k, 1] = zd
            k += 1
    if n_steps == 0:
        i = 0
    if steps[k - 1] != i:
        steps[k] = i
        Y[k, 0] = z
        Y[k, 1] = zd
        k += 1
    return steps[:k].copy(), Y[:k].copy(), ok


def rigid_rk4_general(accel, double zeta0, double zdot0, double dt,
                      Py_ssize_t n_steps, Py_ssize_t stride):
    # calls back into Python for every stage; no speedup worth a C copy
    from ._pykernels import rigid_rk4_general as _impl
    return _impl(accel, zeta0, zdot0, dt, n_steps, stride)


cdef inline bint _elastic_rhs(double z, double l, double zd, double ld,
                              double v2, double K, double rho, double spring_over_m,
                              double* zdd, double* ldd) nogil:
    cdef double r = rho + l
    cdef double rk, sr, cr, sg, sz
    if K > 0:
        rk = sqrt(K)
        if not (0.0 < r * rk and r * rk < M_PI):
            return False
        sr = sin(r * rk)
        cr = cos(r * rk)
        sg = 1.0
    else:
        rk = sqrt(-K)
        if not r > 0.0:
            return False
        sr = sinh(r * rk)
        cr = cosh(r * rk)
        sg = -1.0
    sz = sin(z)
    zdd[0] = -2.0 * rk * (cr / sr) * ld * zd - v2 * K * sz * cos(z)
    ldd[0] = zd * zd * sr * cr / rk - v2 * sg * rk * sr * cr * (sz * sz) - spring_over_m * l
    return True


def elastic_rk4(double zeta0, double l0, double zdot0, double ldot0, double v,
                double K, double rho, double spring_over_m, double dt,
                Py_ssize_t n_steps, Py_ssize_t stride):
    cdef double v2 = v * v
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double z = zeta0, l = l0, zd = zdot0, ld = ldot0
    cdef double a1z, a1l, a2z, a2l, a3z, a3l, a4z, a4l, anz, anl
    cdef double y2z, y2l, y2zd, y2ld, y3z, y3l, y3zd, y3ld, y4z, y4l, y4zd, y4ld
    cdef double nz, nl, nzd, nld
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.empty(_n_samples(n_steps, stride), dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Y = np.empty((_n_samples(n_steps, stride), 4))
    cdef Py_ssize_t i = 0, k = 1
    cdef bint ok = True
    steps[0] = 0
    Y[0, 0] = z
    Y[0, 1] = l
    Y[0, 2] = zd
    Y[0, 3] = ld
    if not _elastic_rhs(z, l, zd, ld, v2, K, rho, spring_over_m, &a1z, &a1l):
        return steps[:1].copy(), Y[:1].copy(), False
    for i in range(1, n_steps + 1):
        y2z = z + half * zd
        y2l = l + half * ld
        y2zd = zd + half * a1z
        y2ld = ld + half * a1l
        if not _elastic_rhs(y2z, y2l, y2zd, y2ld, v2, K, rho, spring_over_m, &a2z, &a2l):
            ok = False
            break
        y3z = z + half * y2zd
        y3l = l + half * y2ld
        y3zd = zd + half * a2z
        y3ld = ld + half * a2l
        if not _elastic_rhs(y3z, y3l, y3zd, y3ld, v2, K, rho, spring_over_m, &a3z, &a3l):
            ok = False
            break
        y4z = z + dt * y3zd
        y4l = l + dt * y3ld
        y4zd = zd + dt * a3z
        y4ld = ld + dt * a3l
        if not _elastic_rhs(y4z, y4l, y4zd, y4ld, v2, K, rho, spring_over_m, &a4z, &a4l):
            ok = False
            break
        nz = z + sixth * (zd + 2.0 * y2zd + 2.0 * y3zd + y4zd)
        nl = l + sixth * (ld + 2.0 * y2ld + 2.0 * y3ld + y4ld)
        nzd = zd + sixth * (a1z + 2.0 * a2z + 2.0 * a3z + a4z)
        nld = ld + sixth * (a1l + 2.0 * a2l + 2.0 * a3l + a4l)
        if not (isfinite(nz) and isfinite(nl) and isfinite(nzd) and isfinite(nld)):
            ok = False
            break
        if not _elastic_rhs(nz, nl, nzd, nld, v2, K, rho, spring_over_m, &anz, &anl):
            ok = False
            break
        z = nz
        l = nl
        zd = nzd
        ld = nld
        a1z = anz
        a1l = anl
        if i % stride == 0:
            steps[k] = i
            Y[k, 0] = z
            Y[k, 1] = l
            Y[k, 2] = zd
            Y[k, 3] = ld
            k += 1
    if n_steps == 0:
        i = 0
    if not ok:
        i -= 1
    if steps[k - 1] != i:
        steps[k] = i
        Y[k, 0] = z
        Y[k, 1] = l
        Y[k, 2] = zd
        Y[k, 3] = ld
        k += 1
    return steps[:k].copy(), Y[:k].copy(), ok
