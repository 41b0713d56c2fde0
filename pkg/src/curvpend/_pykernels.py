"""Pure-Python integration kernels.

Reference implementation of the compiled kernels in ``_ckernels.pyx``.  The
floating-point operation order here is the contract: the compiled versions
repeat it exactly so both backends produce bit-identical rigid trajectories.

Every kernel returns ``(steps, Y, ok)``: the integer step index of each
stored sample, the ``(n_samples, dim)`` state array, and ``False`` if the
run stopped early on a non-finite value or an invalid rod length.  Samples
are taken every ``stride`` steps, plus the last step reached.
"""

import math

import numpy as np

BACKEND = "python"


def _collect(steps, rows, dim):
    return np.asarray(steps, dtype=np.int64), np.asarray(rows, dtype=float).reshape(-1, dim)


def rigid_leapfrog(zeta0, zdot0, v, K, dt, n_steps, stride):
    sin, cos, isfinite = math.sin, math.cos, math.isfinite
    mc = -(v * v) * K
    half = 0.5 * dt
    z, zd = float(zeta0), float(zdot0)
    steps, rows = [0], [(z, zd)]
    ok = True
    i = 0
    try:
        for i in range(1, n_steps + 1):
            zh = z + half * zd
            zd_new = zd + dt * (mc * sin(zh) * cos(zh))
            z_new = zh + half * zd_new
            if not (isfinite(z_new) and isfinite(zd_new)):
                ok = False
                i -= 1
                break
            z, zd = z_new, zd_new
            if i % stride == 0:
                steps.append(i)
                rows.append((z, zd))
    except (ValueError, OverflowError):
        # math.sin(inf) raises where libm returns nan
        ok = False
        i -= 1
    if steps[-1] != i:
        steps.append(i)
        rows.append((z, zd))
    return (*_collect(steps, rows, 2), ok)


def rigid_rk4(zeta0, zdot0, v, K, dt, n_steps, stride):
    sin, cos, isfinite = math.sin, math.cos, math.isfinite
    mc = -(v * v) * K
    half = 0.5 * dt
    sixth = dt / 6.0
    z, zd = float(zeta0), float(zdot0)
    steps, rows = [0], [(z, zd)]
    ok = True
    i = 0
    try:
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
            z, zd = z_new, zd_new
            if i % stride == 0:
                steps.append(i)
                rows.append((z, zd))
    except (ValueError, OverflowError):
        # math.sin(inf) raises where libm returns nan
        ok = False
        i -= 1
    if steps[-1] != i:
        steps.append(i)
        rows.append((z, zd))
    return (*_collect(steps, rows, 2), ok)


def rigid_rk4_general(accel, zeta0, zdot0, dt, n_steps, stride):
    """RK4 for zeta_ddot = accel(t, zeta, zeta_dot), t_i = i*dt.

    Same arithmetic as :func:`rigid_rk4`; with an accel that reduces to
    ``-(v*v)*K*sin(z)*cos(z)`` the two produce identical bits.
    """
    isfinite = math.isfinite
    half = 0.5 * dt
    sixth = dt / 6.0
    z, zd = float(zeta0), float(zdot0)
    steps, rows = [0], [(z, zd)]
    ok = True
    i = 0
    try:
        for i in range(1, n_steps + 1):
            t = (i - 1) * dt
            th = t + half
            k1z = zd
            k1v = accel(t, z, zd)
            z2 = z + half * k1z
            k2z = zd + half * k1v
            k2v = accel(th, z2, k2z)
            z3 = z + half * k2z
            k3z = zd + half * k2v
            k3v = accel(th, z3, k3z)
            z4 = z + dt * k3z
            k4z = zd + dt * k3v
            k4v = accel(t + dt, z4, k4z)
            z_new = z + sixth * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            zd_new = zd + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            if not (isfinite(z_new) and isfinite(zd_new)):
                ok = False
                i -= 1
                break
            z, zd = z_new, zd_new
            if i % stride == 0:
                steps.append(i)
                rows.append((z, zd))
    except (ValueError, OverflowError):
        # math.sin(inf) raises where libm returns nan
        ok = False
        i -= 1
    if steps[-1] != i:
        steps.append(i)
        rows.append((z, zd))
    return (*_collect(steps, rows, 2), ok)


def _elastic_rhs(z, l, zd, ld, v2, K, rho, spring_over_m):
    # returns None at an invalid rod length (pole of cot_k or r <= 0)
    r = rho + l
    if K > 0:
        rk = math.sqrt(K)
        if not (0.0 < r * rk < math.pi):
            return None
        sr = math.sin(r * rk)
        cr = math.cos(r * rk)
        sg = 1.0
    else:
        rk = math.sqrt(-K)
        if not r > 0.0:
            return None
        try:
            sr = math.sinh(r * rk)
            cr = math.cosh(r * rk)
        except OverflowError:
            # libm returns inf here; the compiled kernel then aborts on nan
            return math.nan, math.nan
        sg = -1.0
    sz = math.sin(z)
    zdd = -2.0 * rk * (cr / sr) * ld * zd - v2 * K * sz * math.cos(z)
    ldd = zd * zd * sr * cr / rk - v2 * sg * rk * sr * cr * (sz * sz) - spring_over_m * l
    return zdd, ldd


def elastic_rk4(zeta0, l0, zdot0, ldot0, v, K, rho, spring_over_m, dt, n_steps, stride):
    isfinite = math.isfinite
    rhs = _elastic_rhs
    v2 = v * v
    half = 0.5 * dt
    sixth = dt / 6.0
    y = (float(zeta0), float(l0), float(zdot0), float(ldot0))
    steps, rows = [0], [y]
    a1 = rhs(*y, v2, K, rho, spring_over_m)
    if a1 is None:
        return (*_collect(steps, rows, 4), False)
    ok = True
    i = 0
    for i in range(1, n_steps + 1):
        z, l, zd, ld = y
        y2 = (z + half * zd, l + half * ld, zd + half * a1[0], ld + half * a1[1])
        a2 = rhs(*y2, v2, K, rho, spring_over_m)
        if a2 is None:
            ok = False
            break
        y3 = (z + half * y2[2], l + half * y2[3], zd + half * a2[0], ld + half * a2[1])
        a3 = rhs(*y3, v2, K, rho, spring_over_m)
        if a3 is None:
            ok = False
            break
        y4 = (z + dt * y3[2], l + dt * y3[3], zd + dt * a3[0], ld + dt * a3[1])
        a4 = rhs(*y4, v2, K, rho, spring_over_m)
        if a4 is None:
            ok = False
            break
        y_new = (
            z + sixth * (zd + 2.0 * y2[2] + 2.0 * y3[2] + y4[2]),
            l + sixth * (ld + 2.0 * y2[3] + 2.0 * y3[3] + y4[3]),
            zd + sixth * (a1[0] + 2.0 * a2[0] + 2.0 * a3[0] + a4[0]),
            ld + sixth * (a1[1] + 2.0 * a2[1] + 2.0 * a3[1] + a4[1]),
        )
        a_new = rhs(*y_new, v2, K, rho, spring_over_m)
        if a_new is None or not all(isfinite(c) for c in y_new):
            ok = False
            break
        y, a1 = y_new, a_new
        if i % stride == 0:
            steps.append(i)
            rows.append(y)
    if not ok:
        i -= 1
    if steps[-1] != i:
        steps.append(i)
        rows.append(y)
    return (*_collect(steps, rows, 4), ok)
