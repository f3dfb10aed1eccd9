# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled EMA fold kernel.

Mirrors movingt._fold_py.run_fold operation for operation (same IEEE
expression order, no fast-math) so both backends agree to a few ulp.
"""

from libc.math cimport exp, fabs, isnan, lgamma, log, log1p, pow

cdef double NU_GAUSSIAN = 1.0e6
cdef double PI = 3.141592653589793
cdef double HALF_LOG_PI = 0.5 * log(PI)
cdef double HALF_LOG_2PI = 0.5 * log(2.0 * PI)
cdef double LOG_2 = log(2.0)


cdef inline double _log_abs_moment(double nu, double p) noexcept:
    if nu >= NU_GAUSSIAN:
        return (0.5 * p * LOG_2 + lgamma(0.5 * (p + 1.0))
                - HALF_LOG_PI) / p
    return (0.5 * p * log(nu) + lgamma(0.5 * (p + 1.0))
            + lgamma(0.5 * (nu - p)) - HALF_LOG_PI - lgamma(0.5 * nu)) / p


cdef inline double _t_log_pdf(double nu, double sigma, double z) noexcept:
    if nu >= NU_GAUSSIAN:
        return -HALF_LOG_2PI - log(sigma) - 0.5 * z * z
    return (lgamma(0.5 * (nu + 1.0)) - lgamma(0.5 * nu)
            - 0.5 * log(nu * PI) - log(sigma)
            - 0.5 * (nu + 1.0) * log1p(z * z / nu))


cdef inline double _interp_ln_nu(double r, double[::1] ratio_asc,
                                 double[::1] ln_nu_asc) noexcept:
    cdef Py_ssize_t n = ratio_asc.shape[0]
    cdef Py_ssize_t lo, hi, mid, i
    cdef double r0, y0
    if r <= ratio_asc[0]:
        return ln_nu_asc[0]
    if r >= ratio_asc[n - 1]:
        return ln_nu_asc[n - 1]
    lo = 0
    hi = n
    while lo < hi:
        mid = (lo + hi) >> 1
        if ratio_asc[mid] <= r:
            lo = mid + 1
        else:
            hi = mid
    i = lo
    r0 = ratio_asc[i - 1]
    y0 = ln_nu_asc[i - 1]
    return y0 + (ln_nu_asc[i] - y0) * (r - r0) / (ratio_asc[i] - r0)


def run_fold(double[::1] xs, Py_ssize_t t_start,
             double mu, double m_sigma, double m1, double m2,
             double eta1, double eta2, double eta3,
             double p_sigma, double p1, double p2,
             double nu_fixed, double nu_adjust, double nu_cap, double floor,
             double[::1] ratio_asc, double[::1] ln_nu_asc,
             double[::1] out_mu, double[::1] out_sigma,
             double[::1] out_nu, double[::1] out_logd):
    """Fold the estimate-then-update step over xs[t_start:]."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t t, idx
    cdef bint adaptive = isnan(nu_fixed)
    cdef bint fixed_gauss = 0
    cdef double nu_t = 0.0, ln_m = 0.0, c_logpdf = 0.0
    cdef double x, r, mf, sigma_t, z, logd, d

    if not adaptive:
        nu_t = nu_fixed
        ln_m = _log_abs_moment(nu_t, p_sigma)
        if nu_t >= NU_GAUSSIAN:
            fixed_gauss = 1
        else:
            c_logpdf = (lgamma(0.5 * (nu_t + 1.0)) - lgamma(0.5 * nu_t)
                        - 0.5 * log(nu_t * PI))

    for t in range(t_start, n):
        x = xs[t]
        if adaptive:
            r = exp(log(m1 if m1 > floor else floor) / p1
                    - log(m2 if m2 > floor else floor) / p2)
            nu_t = exp(_interp_ln_nu(r, ratio_asc, ln_nu_asc)) + nu_adjust
            if nu_t > nu_cap:
                nu_t = nu_cap
            ln_m = _log_abs_moment(nu_t, p_sigma)

        mf = m_sigma if m_sigma > floor else floor
        sigma_t = exp(log(mf) / p_sigma - ln_m)
        z = (x - mu) / sigma_t
        if adaptive:
            logd = _t_log_pdf(nu_t, sigma_t, z)
        elif fixed_gauss:
            logd = -HALF_LOG_2PI - log(sigma_t) - 0.5 * z * z
        else:
            logd = (c_logpdf - log(sigma_t)
                    - 0.5 * (nu_t + 1.0) * log1p(z * z / nu_t))

        idx = t - t_start
        out_mu[idx] = mu
        out_sigma[idx] = sigma_t
        out_nu[idx] = nu_t
        out_logd[idx] = logd

        d = fabs(x - mu)
        m_sigma = m_sigma + eta2 * (pow(d, p_sigma) - m_sigma)
        if adaptive:
            m1 = m1 + eta3 * (pow(d, p1) - m1)
            m2 = m2 + eta3 * (pow(d, p2) - m2)
        mu = mu + eta1 * (x - mu)

    return mu, m_sigma, m1, m2
