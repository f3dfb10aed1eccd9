"""Pure-Python twin of the compiled EMA fold kernel.

Selected automatically when the extension is unavailable (or when
MOVINGT_PURE_PYTHON is set).  `step_once` is also the reference
implementation behind `adaptive.step`; the compiled kernel mirrors its
arithmetic operation for operation, so the two backends agree to within
a few ulp per step.
"""

from __future__ import annotations

import math
from bisect import bisect_right

NU_GAUSSIAN = 1.0e6
_HALF_LOG_PI = 0.5 * math.log(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

BACKEND = "python"


def _log_abs_moment(nu: float, p: float) -> float:
    # ln M(nu, p); caller guarantees 0 < p < nu
    if nu >= NU_GAUSSIAN:
        return (0.5 * p * math.log(2.0) + math.lgamma(0.5 * (p + 1.0))
                - _HALF_LOG_PI) / p
    return (0.5 * p * math.log(nu) + math.lgamma(0.5 * (p + 1.0))
            + math.lgamma(0.5 * (nu - p)) - _HALF_LOG_PI
            - math.lgamma(0.5 * nu)) / p


def _t_log_pdf(nu: float, sigma: float, z: float) -> float:
    if nu >= NU_GAUSSIAN:
        return -_HALF_LOG_2PI - math.log(sigma) - 0.5 * z * z
    return (math.lgamma(0.5 * (nu + 1.0)) - math.lgamma(0.5 * nu)
            - 0.5 * math.log(nu * math.pi) - math.log(sigma)
            - 0.5 * (nu + 1.0) * math.log1p(z * z / nu))


def _interp_ln_nu(r, ratio_asc, ln_nu_asc):
    # piecewise-linear inverse lookup, clamped at the table ends
    if r <= ratio_asc[0]:
        return ln_nu_asc[0]
    last = len(ratio_asc) - 1
    if r >= ratio_asc[last]:
        return ln_nu_asc[last]
    i = bisect_right(ratio_asc, r)
    r0 = ratio_asc[i - 1]
    y0 = ln_nu_asc[i - 1]
    return y0 + (ln_nu_asc[i] - y0) * (r - r0) / (ratio_asc[i] - r0)


def step_once(x, mu, m_sigma, m1, m2,
              eta1, eta2, eta3, p_sigma, p1, p2,
              nu_fixed, nu_adjust, nu_cap, floor,
              ratio_asc, ln_nu_asc):
    """One estimate-then-update step.

    Returns (mu_t, sigma_t, nu_t, log_density_placeholderless state...):
    (mu_t, sigma_t, nu_t, log_density, mu, m_sigma, m1, m2) where the
    trailing four are the post-update state.  The estimate is formed from
    the incoming state before x is ingested.
    """
    if math.isnan(nu_fixed):
        r = math.exp(math.log(m1 if m1 > floor else floor) / p1
                     - math.log(m2 if m2 > floor else floor) / p2)
        nu_t = math.exp(_interp_ln_nu(r, ratio_asc, ln_nu_asc)) + nu_adjust
        if nu_t > nu_cap:
            nu_t = nu_cap
    else:
        nu_t = nu_fixed

    mf = m_sigma if m_sigma > floor else floor
    sigma_t = math.exp(math.log(mf) / p_sigma - _log_abs_moment(nu_t, p_sigma))
    z = (x - mu) / sigma_t
    log_density = _t_log_pdf(nu_t, sigma_t, z)

    d = abs(x - mu)
    m_sigma = m_sigma + eta2 * (d ** p_sigma - m_sigma)
    if math.isnan(nu_fixed):
        m1 = m1 + eta3 * (d ** p1 - m1)
        m2 = m2 + eta3 * (d ** p2 - m2)
    new_mu = mu + eta1 * (x - mu)

    return mu, sigma_t, nu_t, log_density, new_mu, m_sigma, m1, m2


def run_fold(xs, t_start, mu, m_sigma, m1, m2,
             eta1, eta2, eta3, p_sigma, p1, p2,
             nu_fixed, nu_adjust, nu_cap, floor,
             ratio_asc, ln_nu_asc,
             out_mu, out_sigma, out_nu, out_logd):
    """Fold `step_once` over xs[t_start:], filling the output arrays."""
    ratio_list = [float(v) for v in ratio_asc]
    ln_nu_list = [float(v) for v in ln_nu_asc]
    n = len(xs)
    for t in range(t_start, n):
        (mu_t, sigma_t, nu_t, logd,
         mu, m_sigma, m1, m2) = step_once(
            float(xs[t]), mu, m_sigma, m1, m2,
            eta1, eta2, eta3, p_sigma, p1, p2,
            nu_fixed, nu_adjust, nu_cap, floor,
            ratio_list, ln_nu_list)
        idx = t - t_start
        out_mu[idx] = mu_t
        out_sigma[idx] = sigma_t
        out_nu[idx] = nu_t
        out_logd[idx] = logd
    return mu, m_sigma, m1, m2
