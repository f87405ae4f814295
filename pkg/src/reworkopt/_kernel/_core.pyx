# cython: language_level=3, cdivision=True
"""Compiled kernel: statement-level twin of ``pure.py``.

Bit-identity with the pure backend is a hard requirement.  Every
expression keeps the reference evaluation order, and the build passes
-ffp-contract=off so the compiler cannot fuse multiply-adds.  Do not
reorder or "simplify" arithmetic here without updating pure.py in
lockstep and re-running the parity suite.
"""

from libc.math cimport cos, fabs, log, pow, sqrt

cdef double _TWO_PI = 6.283185307179586
cdef double _INV_2_53 = 2.0 ** -53
cdef unsigned long long _GOLDEN = 0x9E3779B97F4A7C15U
cdef unsigned long long _M64 = 0xFFFFFFFFFFFFFFFFU


cdef inline unsigned long long _mix64(unsigned long long z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9U
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBU
    return z ^ (z >> 31)


cdef inline double _u01(unsigned long long key, unsigned long long ctr) noexcept nogil:
    cdef unsigned long long z = _mix64(key + (ctr + 1) * _GOLDEN)
    return ((z >> 11) + 0.5) * _INV_2_53


cdef inline double _normal(unsigned long long key, unsigned long long *ctr,
                           double mu, double sigma) noexcept nogil:
    cdef double u1 = _u01(key, ctr[0])
    cdef double u2 = _u01(key, ctr[0] + 1)
    cdef double z = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
    ctr[0] = ctr[0] + 2
    return mu + sigma * z


cdef inline double _clamped_normal(unsigned long long key, unsigned long long *ctr,
                                   double mu, double sigma) noexcept nogil:
    cdef double x = _normal(key, ctr, mu, sigma)
    if x < 0.0:
        x = 0.0
    return x


cdef double _gamma(unsigned long long key, unsigned long long *ctr,
                   double shape, double scale) noexcept nogil:
    cdef double g, u, d, c, x, v
    if shape <= 0.0:
        return 0.0
    if shape < 1.0:
        g = _gamma(key, ctr, shape + 1.0, scale)
        u = _u01(key, ctr[0])
        ctr[0] = ctr[0] + 1
        return g * pow(u, 1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / sqrt(9.0 * d)
    while True:
        x = _normal(key, ctr, 0.0, 1.0)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = _u01(key, ctr[0])
        ctr[0] = ctr[0] + 1
        if u < 1.0 - 0.0331 * (x * x) * (x * x):
            return d * v * scale
        if log(u) < 0.5 * x * x + d * (1.0 - v + log(v)):
            return d * v * scale


cdef double _truncated_normal(unsigned long long key, unsigned long long *ctr,
                              double mu, double sigma, double lo, double hi) noexcept nogil:
    cdef double x
    if sigma == 0.0:
        if mu < lo:
            return lo
        if mu > hi:
            return hi
        return mu
    while True:
        x = _normal(key, ctr, mu, sigma)
        if lo <= x <= hi:
            return x


def mix64(z):
    """splitmix64 finalizer on a 64-bit integer."""
    return _mix64(<unsigned long long> (z & 0xFFFFFFFFFFFFFFFF))


def u01(key, ctr):
    """Uniform double in the open interval (0, 1)."""
    return _u01(<unsigned long long> key, <unsigned long long> ctr)


def normal(key, ctr, double mu, double sigma):
    cdef unsigned long long c = <unsigned long long> ctr
    cdef double x = _normal(<unsigned long long> key, &c, mu, sigma)
    return x, c


def clamped_normal(key, ctr, double mu, double sigma):
    cdef unsigned long long c = <unsigned long long> ctr
    cdef double x = _clamped_normal(<unsigned long long> key, &c, mu, sigma)
    return x, c


def gamma(key, ctr, double shape, double scale):
    cdef unsigned long long c = <unsigned long long> ctr
    cdef double x = _gamma(<unsigned long long> key, &c, shape, scale)
    return x, c


def truncated_normal(key, ctr, double mu, double sigma, double lo, double hi):
    cdef unsigned long long c = <unsigned long long> ctr
    cdef double x = _truncated_normal(<unsigned long long> key, &c, mu, sigma, lo, hi)
    return x, c


def job_step(jkey, jctr, ekey, ectr, int det, int kind, double w, double dt,
             double o, double eta, double alpha, double beta, double mu_m,
             double sig_m, double mu_p, double sig_p, double ups0, double a,
             double b0, double gam, double sl, double xi, double mu_q,
             double sig_q, double q_lo, double q_hi, double noise_sigma):
    """One processing event on a machine; see pure.job_step for the contract."""
    cdef unsigned long long jk = <unsigned long long> jkey
    cdef unsigned long long jc = <unsigned long long> jctr
    cdef unsigned long long ek = <unsigned long long> ekey
    cdef unsigned long long ec = <unsigned long long> ectr
    cdef double dv, w1, p, du_p, du_m, w3, ups, eps, d, delta
    cdef int q

    if det:
        dv = alpha * dt * beta
    else:
        dv = _gamma(ek, &ec, alpha * dt, beta)
    w1 = w + dv
    p = o * (1.0 + eta * w1)

    if kind:
        if det:
            du_p = p * mu_p
            if du_p < 0.0:
                du_p = 0.0
        else:
            du_p = _clamped_normal(jk, &jc, p * mu_p, sig_p)
        w3 = (w1 + 0.0) + du_p
        return p, 0.0, -1, 0.0, 0.0, dv, 0.0, du_p, w3, jc, ec

    if det:
        ups = mu_q
        if ups < q_lo:
            ups = q_lo
        elif ups > q_hi:
            ups = q_hi
        eps = 0.0
    else:
        ups = _truncated_normal(jk, &jc, mu_q, sig_q, q_lo, q_hi)
        eps = _normal(jk, &jc, 0.0, noise_sigma)

    d = ups0 + a * w1 + b0 * eps + w1 * gam * eps
    q = 1 if fabs(d - sl) < xi else 0

    delta = fabs(ups - sl)
    if delta < xi:
        du_m = 0.0
    else:
        if det:
            du_m = delta * mu_m
            if du_m < 0.0:
                du_m = 0.0
        else:
            du_m = _clamped_normal(jk, &jc, delta * mu_m, sig_m)
    if det:
        du_p = p * mu_p
        if du_p < 0.0:
            du_p = 0.0
    else:
        du_p = _clamped_normal(jk, &jc, p * mu_p, sig_p)

    w3 = (w1 + du_m) + du_p
    return p, d, q, ups, eps, dv, du_m, du_p, w3, jc, ec
