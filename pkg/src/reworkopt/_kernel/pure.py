"""Pure-Python kernel: counter-based RNG and the per-event shop-floor math.

This module is the reference implementation; the compiled twin in
``_core.pyx`` mirrors it statement by statement.  Every arithmetic
expression here is a contract: evaluation order must not change, or the
two backends stop being bit-identical.

RNG scheme: splitmix64-style hash of (key, counter).  Each uniform draw
consumes one counter tick; derived draws consume a deterministic (data
independent per attempt) number of ticks, so identical (key, ctr) inputs
give identical outputs on both backends.
"""

import math

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TWO_PI = 6.283185307179586
_INV_2_53 = 2.0 ** -53


def mix64(z):
    """splitmix64 finalizer on a 64-bit integer."""
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def u01(key, ctr):
    """Uniform double in the open interval (0, 1)."""
    z = mix64((key + ((ctr + 1) * _GOLDEN)) & _M64)
    return ((z >> 11) + 0.5) * _INV_2_53


def normal(key, ctr, mu, sigma):
    """Gaussian draw via Box-Muller (cosine branch only, 2 ticks).

    Returns (value, new_ctr).
    """
    u1 = u01(key, ctr)
    u2 = u01(key, ctr + 1)
    z = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
    return mu + sigma * z, ctr + 2


def clamped_normal(key, ctr, mu, sigma):
    """Gaussian draw truncated below at zero (wear increments cannot be
    negative)."""
    x, ctr = normal(key, ctr, mu, sigma)
    if x < 0.0:
        x = 0.0
    return x, ctr


def gamma(key, ctr, shape, scale):
    """Gamma draw, Marsaglia-Tsang squeeze method.

    shape == 0 returns 0 without consuming ticks (a zero-length exposure
    window draws nothing).  shape < 1 is boosted through Gamma(shape+1)
    and one extra uniform.
    """
    if shape <= 0.0:
        return 0.0, ctr
    if shape < 1.0:
        g, ctr = gamma(key, ctr, shape + 1.0, scale)
        u = u01(key, ctr)
        ctr += 1
        return g * math.pow(u, 1.0 / shape), ctr
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x, ctr = normal(key, ctr, 0.0, 1.0)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = u01(key, ctr)
        ctr += 1
        if u < 1.0 - 0.0331 * (x * x) * (x * x):
            return d * v * scale, ctr
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v * scale, ctr


def truncated_normal(key, ctr, mu, sigma, lo, hi):
    """Gaussian draw rejected outside [lo, hi].

    sigma == 0 degenerates to mu clamped into the interval.
    """
    if sigma == 0.0:
        if mu < lo:
            return lo, ctr
        if mu > hi:
            return hi, ctr
        return mu, ctr
    while True:
        x, ctr = normal(key, ctr, mu, sigma)
        if lo <= x <= hi:
            return x, ctr


def job_step(jkey, jctr, ekey, ectr, det, kind, w, dt, o,
             eta, alpha, beta, mu_m, sig_m, mu_p, sig_p,
             ups0, a, b0, gam, sl, xi,
             mu_q, sig_q, q_lo, q_hi, noise_sigma):
    """One processing event on a machine: environment wear, processing
    time, quality outcome, induced wear.

    kind 0 is a real job, kind 1 an idle placeholder (wear and time only,
    no quality outcome).  det != 0 replaces every draw by its mean and
    leaves both counters untouched.

    Order of operations is the contract: the environment increment for
    the exposure window dt lands on the wear *before* the processing time
    and the quality characteristic are computed; the input-induced and
    processing-induced increments land after.

    Returns (p, d, q, ups, eps, dv, du_m, du_p, w_after, jctr, ectr)
    where q is 1/0 for real jobs and -1 for idle placeholders.
    """
    if det:
        dv = alpha * dt * beta
    else:
        dv, ectr = gamma(ekey, ectr, alpha * dt, beta)
    w1 = w + dv
    p = o * (1.0 + eta * w1)

    if kind:
        if det:
            du_p = p * mu_p
            if du_p < 0.0:
                du_p = 0.0
        else:
            du_p, jctr = clamped_normal(jkey, jctr, p * mu_p, sig_p)
        w3 = (w1 + 0.0) + du_p
        return p, 0.0, -1, 0.0, 0.0, dv, 0.0, du_p, w3, jctr, ectr

    if det:
        ups = mu_q
        if ups < q_lo:
            ups = q_lo
        elif ups > q_hi:
            ups = q_hi
        eps = 0.0
    else:
        ups, jctr = truncated_normal(jkey, jctr, mu_q, sig_q, q_lo, q_hi)
        eps, jctr = normal(jkey, jctr, 0.0, noise_sigma)

    d = ups0 + a * w1 + b0 * eps + w1 * gam * eps
    q = 1 if abs(d - sl) < xi else 0

    delta = abs(ups - sl)
    if delta < xi:
        du_m = 0.0
    else:
        if det:
            du_m = delta * mu_m
            if du_m < 0.0:
                du_m = 0.0
        else:
            du_m, jctr = clamped_normal(jkey, jctr, delta * mu_m, sig_m)
    if det:
        du_p = p * mu_p
        if du_p < 0.0:
            du_p = 0.0
    else:
        du_p, jctr = clamped_normal(jkey, jctr, p * mu_p, sig_p)

    w3 = (w1 + du_m) + du_p
    return p, d, q, ups, eps, dv, du_m, du_p, w3, jctr, ectr
