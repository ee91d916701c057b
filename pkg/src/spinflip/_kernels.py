"""Compiled scalar kernels for chirp evaluation and LLG integration.

Private module.  The chirp is evaluated in a reorganized closed form that is
stable at the pulse edges, where the naive expression is an indeterminate
0/0 * inf product: the square root is factored through the exactly known
positive factor u^2 (1-u)^2 and the cot-theta pole is absorbed into a
sin(x)/x ratio.  The right half of the pulse maps onto the left through the
exact antisymmetry of the design, so the formula is only ever evaluated on
u in [0, 1/2] where it is well conditioned.

All kernels are ``nogil`` so independent protocol runs can execute in
parallel on threads.
"""

import math

from numba import njit


@njit(cache=True, nogil=True)
def chirp_scalar(c, t_f, ff, t):
    """Instantaneous drive frequency at time ``t`` (units 1/t_0).

    ``c = h * t_f`` is the pulse area of the design, ``ff`` an optional
    feed-forward coefficient adding ``ff * cos(theta_ref(t))``.
    """
    u = t / t_f
    if u < 0.0:
        u = 0.0
    elif u > 1.0:
        u = 1.0
    sign = 1.0
    if u > 0.5:
        sign = -1.0
        u = 1.0 - u
    q = c - math.pi
    if q < 0.0:
        q = 0.0
    kappa = 30.0 * q / c
    b = u * (1.0 - u)
    amp = math.sqrt(2.0 - kappa * b * b)
    # psi = pi - theta_ref = c*u*g(u); g stays within O(1) of 1 on [0, 1/2]
    g = 1.0 - (q / c) * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    psi = c * u * g
    if psi != 0.0:
        sinc_psi = math.sin(psi) / psi
    else:
        sinc_psi = 1.0
    cos_psi = math.cos(psi)
    root_kappa = math.sqrt(kappa)
    omega = (
        -(root_kappa / t_f)
        * (2.0 * (1.0 - 2.0 * u) / amp + cos_psi * (1.0 - u) * amp / (g * sinc_psi))
        - ff * cos_psi
    )
    return sign * omega


@njit(cache=True, nogil=True)
def chirp_fill(c, t_f, ff, times, out):
    for i in range(times.shape[0]):
        out[i] = chirp_scalar(c, t_f, ff, times[i])


@njit(cache=True, nogil=True, inline="always")
def _llg_terms(px, py, pz, hx, hy, hz, alpha):
    # precession torque s x H
    tx = py * hz - pz * hy
    ty = pz * hx - px * hz
    tz = px * hy - py * hx
    if alpha != 0.0:
        # damping torque -alpha * s x (s x H)
        ux = py * tz - pz * ty
        uy = pz * tx - px * tz
        uz = px * ty - py * tx
        return tx - alpha * ux, ty - alpha * uy, tz - alpha * uz
    return tx, ty, tz


@njit(cache=True, nogil=True)
def rk4_pulse(
    s,
    t_f,
    n_steps,
    renorm_every,
    hx,
    hy,
    d,
    alpha,
    c,
    ff,
    use_const_omega,
    const_omega,
    rec_steps,
    rec_out,
):
    """Fixed-step RK4 over one pulse; ``s`` is advanced in place.

    ``(hx, hy)`` is the transverse drive vector, already rotated by the
    composite phase.  ``rec_steps`` lists the step indices (0..n_steps) at
    which the state is stored into ``rec_out``.  Returns
    ``(status, bad_step, max_drift)`` where status 1 flags a non-finite
    state first seen after step ``bad_step`` and ``max_drift`` is the
    largest ``|1 - |s||`` observed before renormalization.
    """
    dt = t_f / n_steps
    sx = s[0]
    sy = s[1]
    sz = s[2]
    max_drift = 0.0
    n_rec = rec_steps.shape[0]
    j = 0
    if n_rec > 0 and rec_steps[0] == 0:
        rec_out[0, 0] = sx
        rec_out[0, 1] = sy
        rec_out[0, 2] = sz
        j = 1
    if use_const_omega:
        w0 = const_omega
    else:
        w0 = chirp_scalar(c, t_f, ff, 0.0)
    for i in range(n_steps):
        t0 = i * dt
        if use_const_omega:
            wm = const_omega
            w1 = const_omega
        else:
            wm = chirp_scalar(c, t_f, ff, t0 + 0.5 * dt)
            if i == n_steps - 1:
                w1 = chirp_scalar(c, t_f, ff, t_f)
            else:
                w1 = chirp_scalar(c, t_f, ff, t0 + dt)

        k1x, k1y, k1z = _llg_terms(sx, sy, sz, hx, hy, 2.0 * d * sz + w0, alpha)
        px = sx + 0.5 * dt * k1x
        py = sy + 0.5 * dt * k1y
        pz = sz + 0.5 * dt * k1z
        k2x, k2y, k2z = _llg_terms(px, py, pz, hx, hy, 2.0 * d * pz + wm, alpha)
        px = sx + 0.5 * dt * k2x
        py = sy + 0.5 * dt * k2y
        pz = sz + 0.5 * dt * k2z
        k3x, k3y, k3z = _llg_terms(px, py, pz, hx, hy, 2.0 * d * pz + wm, alpha)
        px = sx + dt * k3x
        py = sy + dt * k3y
        pz = sz + dt * k3z
        k4x, k4y, k4z = _llg_terms(px, py, pz, hx, hy, 2.0 * d * pz + w1, alpha)

        sx = sx + dt / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x)
        sy = sy + dt / 6.0 * (k1y + 2.0 * (k2y + k3y) + k4y)
        sz = sz + dt / 6.0 * (k1z + 2.0 * (k2z + k3z) + k4z)

        norm = math.sqrt(sx * sx + sy * sy + sz * sz)
        if not math.isfinite(norm):
            s[0] = sx
            s[1] = sy
            s[2] = sz
            return 1, i, max_drift
        drift = abs(1.0 - norm)
        if drift > max_drift:
            max_drift = drift
        if (i + 1) % renorm_every == 0:
            inv = 1.0 / norm
            sx *= inv
            sy *= inv
            sz *= inv
        if j < n_rec and rec_steps[j] == i + 1:
            rec_out[j, 0] = sx
            rec_out[j, 1] = sy
            rec_out[j, 2] = sz
            j += 1
        w0 = w1
    norm = math.sqrt(sx * sx + sy * sy + sz * sz)
    inv = 1.0 / norm
    s[0] = sx * inv
    s[1] = sy * inv
    s[2] = sz * inv
    return 0, -1, max_drift
