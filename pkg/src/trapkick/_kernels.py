"""Hot numeric kernels: fly-by ODE stepper and Monte-Carlo event loop.

Both kernels exist twice: a numba-jitted build and a pure-numpy/python build.
Selection: numba is used when importable unless TRAPKICK_DISABLE_NUMBA is set
to 1/true/yes/on.  Both builds are always importable individually (as
*_numpy / *_jit) so tests and benchmarks can compare them; the module-level
names `flyby_rk45` and `mc_events` point at the active build.

Everything here works on plain float64 scalars/arrays in the caller's
nondimensional (ODE) or SI (MC) units; all unit handling stays outside.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("TRAPKICK_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _flag not in {"1", "true", "yes", "on"}

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


# ---------------------------------------------------------------------------
# Fly-by integrator (Dormand-Prince 5(4), local error control)
#
# Nondimensional setup: lengths in units of the impact parameter b, time in
# units of the fly-by time tau = b/v, velocities in units of b/tau.  The
# projectile moves undeflected along x-hat through (T, 1, 0); the target sits
# in an isotropic harmonic well of scaled frequency s = omega*tau and feels
# the Coulomb force with scaled strength kappa = lambda*tau^2/(m*b^3)
# (signed: positive = repulsive).  State vector:
#   y = [X, Y, Z, UX, UY, UZ, W]   with W the accumulated Coulomb work,
# so mode-energy bookkeeping can be audited after the fact.
# ---------------------------------------------------------------------------

def _flyby_rk45_impl(y0, t0, t1, s, kappa, rtol, atol, h0, max_steps):
    s2 = s * s

    def rhs(t, y, out):
        dx = y[0] - t
        dy = y[1] - 1.0
        dz = y[2]
        r2 = dx * dx + dy * dy + dz * dz
        inv_r3 = kappa / (r2 * math.sqrt(r2))
        fx = dx * inv_r3
        fy = dy * inv_r3
        fz = dz * inv_r3
        out[0] = y[3]
        out[1] = y[4]
        out[2] = y[5]
        out[3] = -s2 * y[0] + fx
        out[4] = -s2 * y[1] + fy
        out[5] = -s2 * y[2] + fz
        out[6] = fx * y[3] + fy * y[4] + fz * y[5]

    n = 7
    y = y0.copy()
    ynew = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    ytmp = np.empty(n)

    t = t0
    span = t1 - t0
    h = h0 if h0 > 0.0 else span * 1e-6
    hmin = span * 1e-14
    nsteps = 0
    nrejected = 0
    status = STATUS_MAX_STEPS

    rhs(t, y, k1)  # FSAL seed
    while nsteps < max_steps:
        if t >= t1:
            status = STATUS_OK
            break
        if h < hmin:
            status = STATUS_STEP_UNDERFLOW
            break
        if t + h > t1:
            h = t1 - t

        for i in range(n):
            ytmp[i] = y[i] + h * 0.2 * k1[i]
        rhs(t + 0.2 * h, ytmp, k2)
        for i in range(n):
            ytmp[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i])
        rhs(t + 0.3 * h, ytmp, k3)
        for i in range(n):
            ytmp[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i])
        rhs(t + 0.8 * h, ytmp, k4)
        for i in range(n):
            ytmp[i] = y[i] + h * (
                19372.0 / 6561.0 * k1[i]
                - 25360.0 / 2187.0 * k2[i]
                + 64448.0 / 6561.0 * k3[i]
                - 212.0 / 729.0 * k4[i]
            )
        rhs(t + 8.0 / 9.0 * h, ytmp, k5)
        for i in range(n):
            ytmp[i] = y[i] + h * (
                9017.0 / 3168.0 * k1[i]
                - 355.0 / 33.0 * k2[i]
                + 46732.0 / 5247.0 * k3[i]
                + 49.0 / 176.0 * k4[i]
                - 5103.0 / 18656.0 * k5[i]
            )
        rhs(t + h, ytmp, k6)
        for i in range(n):
            ynew[i] = y[i] + h * (
                35.0 / 384.0 * k1[i]
                + 500.0 / 1113.0 * k3[i]
                + 125.0 / 192.0 * k4[i]
                - 2187.0 / 6784.0 * k5[i]
                + 11.0 / 84.0 * k6[i]
            )
        rhs(t + h, ynew, k7)

        # 5th-minus-4th order error estimate, weighted rms norm
        err = 0.0
        for i in range(n):
            e = h * (
                71.0 / 57600.0 * k1[i]
                - 71.0 / 16695.0 * k3[i]
                + 71.0 / 1920.0 * k4[i]
                - 17253.0 / 339200.0 * k5[i]
                + 22.0 / 525.0 * k6[i]
                - 1.0 / 40.0 * k7[i]
            )
            ay = abs(y[i])
            an = abs(ynew[i])
            scale = atol[i] + rtol * (ay if ay > an else an)
            r = e / scale
            err += r * r
        err = math.sqrt(err / n)

        if err <= 1.0:
            t = t + h
            for i in range(n):
                y[i] = ynew[i]
                k1[i] = k7[i]  # FSAL
            nsteps += 1
        else:
            nrejected += 1

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err**-0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
        h = h * fac

    return y, nsteps, nrejected, status


# ---------------------------------------------------------------------------
# Monte-Carlo event loop
#
# Per event i: a projectile with speed vmag[i] crosses a disk of radius b_cut
# oriented perpendicular to its velocity.  The impact radius is
# b = b_cut*sqrt(u_disk[i]) (uniform over the disk), the kick is
# dp = lam/(b*v), and the event is kinematically vetoed when the projectile
# is too slow to deliver that kick (dp > c_kin*v).  Weight: each event stands
# for a crossing rate n*pi*b_cut^2*v/N, passed in as w_pref*b_cut^2*v.
#
# b_cut_fixed > 0 uses that radius for every event; otherwise the per-event
# rule b_cut = lam/(max(v, v_floor)*dp_floor) is applied, i.e. the radius at
# which this projectile's kick falls to the histogram floor dp_floor.
#
# dpz is the kick projected on the monitored z-axis: the impulse points along
# the impact vector, uniform in azimuth phi around the velocity, so
# dpz = dp*sin(phi)*sqrt(1 - vhatz^2).
# ---------------------------------------------------------------------------

def _mc_events_loop_impl(vmag, vhatz, u_disk, phi, lam, dp_floor, c_kin, v_floor,
                         b_cut_fixed, w_pref, dp_out, dpz_out, w_out):
    n = vmag.shape[0]
    for i in range(n):
        v = vmag[i]
        if b_cut_fixed > 0.0:
            bc = b_cut_fixed
        else:
            vv = v if v > v_floor else v_floor
            bc = lam / (vv * dp_floor)
        b = bc * math.sqrt(u_disk[i])
        dp = lam / (b * v)
        if dp > c_kin * v or b == 0.0:
            dp_out[i] = 0.0
            dpz_out[i] = 0.0
            w_out[i] = 0.0
            continue
        sz2 = 1.0 - vhatz[i] * vhatz[i]
        sz = math.sqrt(sz2) if sz2 > 0.0 else 0.0
        dp_out[i] = dp
        dpz_out[i] = dp * math.sin(phi[i]) * sz
        w_out[i] = w_pref * bc * bc * v


def _mc_events_numpy(vmag, vhatz, u_disk, phi, lam, dp_floor, c_kin, v_floor,
                     b_cut_fixed, w_pref, dp_out, dpz_out, w_out):
    # Same arithmetic (and operation order) as the loop build, vectorized.
    if b_cut_fixed > 0.0:
        bc = np.full_like(vmag, b_cut_fixed)
    else:
        bc = lam / (np.maximum(vmag, v_floor) * dp_floor)
    b = bc * np.sqrt(u_disk)
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = lam / (b * vmag)
    ok = (dp <= c_kin * vmag) & (b > 0.0)
    sz = np.sqrt(np.maximum(1.0 - vhatz * vhatz, 0.0))
    np.copyto(dp_out, dp)
    np.copyto(dpz_out, dp * np.sin(phi) * sz)
    np.copyto(w_out, w_pref * bc * bc * vmag)
    dp_out[~ok] = 0.0
    dpz_out[~ok] = 0.0
    w_out[~ok] = 0.0


# ---------------------------------------------------------------------------
# Build selection
# ---------------------------------------------------------------------------

flyby_rk45_numpy = _flyby_rk45_impl
mc_events_numpy = _mc_events_numpy
mc_events_loop_python = _mc_events_loop_impl  # reference loop, test use only

NUMBA_ENABLED = False
flyby_rk45_jit = None
mc_events_jit = None

if NUMBA_REQUESTED:
    try:
        from numba import njit

        flyby_rk45_jit = njit(cache=True)(_flyby_rk45_impl)
        mc_events_jit = njit(cache=True)(_mc_events_loop_impl)
        NUMBA_ENABLED = True
    except ImportError:
        pass

flyby_rk45 = flyby_rk45_jit if NUMBA_ENABLED else flyby_rk45_numpy
mc_events = mc_events_jit if NUMBA_ENABLED else mc_events_numpy

ACTIVE_KERNEL_PATH = "numba" if NUMBA_ENABLED else "numpy"


def warmup():
    """Trigger JIT compilation with tiny inputs (no-op on the numpy path)."""
    if not NUMBA_ENABLED:
        return
    y0 = np.zeros(7)
    atol = np.full(7, 1e-12)
    flyby_rk45(y0, -1.0, 1.0, 1.0, 1e-6, 1e-6, atol, 0.0, 10_000)
    one = np.ones(4)
    out = np.empty(4)
    mc_events(one, 0.5 * one, 0.5 * one, one, 1e-30, 1e-28, 1e-30, 1.0, -1.0, 1.0,
              out.copy(), out.copy(), out.copy())
