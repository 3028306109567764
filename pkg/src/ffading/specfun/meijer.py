"""The two Meijer-G instances used by the fading analysis.

meijer_g_mgf  : G^{1,2}_{2,1}[z | (1-ms, 1); (m)], the single-branch MGF up
                to the Gamma(m)Gamma(ms) normalization.  Computed through the
                equivalent Tricomi-U form, whose parameter mapping is pinned
                by the Laplace-quadrature cross-checks in the test suite:
                    MGF(t) = G(m+ms)/G(ms) * U(m, 1-ms, 1/z),  z = m/(ms*gb*t).

meijer_g_ber  : G^{1,3}_{3,2}[z | (1/2, 1-ms, 1); (m, 0)], the coherent-binary
                BER kernel.  The ascending residue series over the poles of
                the Gamma(m - s) factor is factorially divergent (its leading
                term is exactly the high-SNR BER asymptote), so the value is
                computed from the defining Mellin-Barnes integral on the
                vertical line Re s in (0, m), where the integrand decays like
                exp(-3 pi |Im s| / 2) and trapezoid sampling converges
                spectrally for every z > 0, including integer parameters
                where pole-series approaches degenerate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import loggamma

from ..estimate import DEFAULT_OPTIONS, Estimate, SeriesOptions
from .tricomi import tricomi_u


def mgf_ratio(m: float, m_s: float, gamma_bar: float, t: float,
              opts: SeriesOptions = DEFAULT_OPTIONS) -> Estimate:
    """Single-branch MGF E[exp(-t*snr)] = G(m+ms)/G(ms) U(m, 1-ms, ms*gb*t/m)."""
    if t == 0.0:
        return Estimate(1.0, 0.0, 1, True, "trivial")
    u = tricomi_u(m, 1.0 - m_s, m_s * gamma_bar * t / m, opts)
    scale = math.exp(math.lgamma(m + m_s) - math.lgamma(m_s))
    return Estimate(scale * u.value, scale * u.err_bound, u.terms_used,
                    u.converged, u.method)


def meijer_g_mgf(m: float, m_s: float, z: float,
                 opts: SeriesOptions = DEFAULT_OPTIONS) -> Estimate:
    """G^{1,2}_{2,1}[z] = Gamma(m) Gamma(m+ms) U(m, 1-ms, 1/z), z > 0.

    Overflows with the Gamma prefactors themselves once ms is so large that
    Gamma(ms) is not representable; the normalized form is mgf_ratio.
    """
    if not (m > 0 and m_s > 0 and z > 0):
        raise ValueError("meijer_g_mgf requires m, m_s, z > 0")
    u = tricomi_u(m, 1.0 - m_s, 1.0 / z, opts)
    logpref = math.lgamma(m) + math.lgamma(m + m_s)
    val = math.exp(logpref) * u.value
    return Estimate(val, math.exp(logpref) * u.err_bound, u.terms_used,
                    u.converged, "tricomi:" + u.method)


def _mb_line_sum(m: float, m_s: float, z: float, h: float, half_width: float,
                 s0: float) -> tuple[float, int]:
    t = np.arange(0.0, half_width, h)
    s = s0 + 1j * t
    lg = (loggamma(m - s) + loggamma(0.5 + s) + loggamma(m_s + s)
          + loggamma(s) - loggamma(1.0 + s) + s * math.log(z))
    scale = float(np.max(lg.real))
    vals = np.exp(lg - scale)
    vals[0] *= 0.5
    # conjugate symmetry: full-line integral = 2 Re(sum over t >= 0)
    return 2.0 * h * float(np.sum(vals.real)) * math.exp(scale) / (2.0 * math.pi), len(t)


def meijer_g_ber(m: float, m_s: float, z: float,
                 opts: SeriesOptions = DEFAULT_OPTIONS) -> Estimate:
    """G^{1,3}_{3,2}[z | (1/2, 1-ms, 1); (m, 0)] for m, m_s, z > 0."""
    if not (m > 0 and m_s > 0 and z > 0):
        raise ValueError("meijer_g_ber requires m, m_s, z > 0")
    s0 = m - min(0.5, 0.5 * m)
    half_width = 16.0 + 0.25 * (m + m_s)
    h = 0.1
    prev, n_prev = _mb_line_sum(m, m_s, z, h, half_width, s0)
    total_nodes = n_prev
    for _ in range(4):
        h *= 0.5
        cur, n_cur = _mb_line_sum(m, m_s, z, h, half_width, s0)
        total_nodes += n_cur
        diff = abs(cur - prev)
        if diff <= max(opts.rel_tol, 1e-13) * max(abs(cur), opts.abs_tol):
            return Estimate(cur, diff, total_nodes, True, "mellin-barnes")
        prev = cur
    return Estimate(prev, abs(cur - prev), total_nodes, False, "mellin-barnes")
