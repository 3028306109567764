"""Gauss 2F1 and Kummer 1F1 for real arguments, with controlled truncation.

The series carry their own first-omitted-term error bounds; arguments
outside the primary convergence disc are mapped back in with the Pfaff
(x -> x/(x-1)) and 1-x connection formulas, which are exact for the
univariate functions.
"""

from __future__ import annotations

import math

from ..estimate import DEFAULT_OPTIONS, Estimate, SeriesOptions
from .gammabeta import KahanSum, log_gamma_signed

_SERIES_CUT = 0.65


def _is_nonpositive_int(x: float, tol: float = 1e-12) -> bool:
    return x <= tol and abs(x - round(x)) < tol


def _hyp_series(num: tuple, den: tuple, x: float, opts: SeriesOptions):
    """Generic pFq-style series sum_{k} prod(num)_k / prod(den)_k x^k / k!.

    Returns (value, err_bound, terms, converged, peak).  Terminates on two
    consecutive negligible terms; err_bound extrapolates the tail from the
    observed term ratio.  Negative denominator parameters create a resurgent
    hump past k ~ -q, so early exit is blocked until all of them are passed.
    """
    acc = KahanSum()
    term = 1.0
    acc.add(term)
    peak = 1.0
    small_streak = 0
    last = 1.0
    ratio = 0.0
    max_terms = int(min(opts.max_order * 8, opts.max_total_terms))
    min_k = 2
    for q in den:
        if q < -0.5:
            min_k = max(min_k, int(math.ceil(-q)) + 10)
    k = 0
    while k < max_terms:
        f = x / (k + 1.0)
        for p in num:
            f *= p + k
        for q in den:
            f /= q + k
        term *= f
        acc.add(term)
        peak = max(peak, abs(term))
        ratio = abs(term / last) if last != 0.0 else 0.0
        last = term
        k += 1
        tol = opts.rel_tol * max(abs(acc.total), opts.abs_tol)
        if abs(term) < tol and k >= min_k:
            small_streak += 1
            if small_streak >= 2:
                r = min(ratio, 0.95)
                err = abs(term) * (r / (1.0 - r) if r > 0 else 1.0) + abs(term)
                return acc.total, err, k + 1, True, peak
        else:
            small_streak = 0
    r = min(ratio, 0.99)
    err = abs(last) / max(1.0 - r, 1e-2)
    return acc.total, err, k + 1, False, peak


def gauss_2f1(a: float, b: float, c: float, x: float,
              opts: SeriesOptions = DEFAULT_OPTIONS) -> Estimate:
    """Gauss hypergeometric 2F1(a, b; c; x) for real parameters, x < 1."""
    if _is_nonpositive_int(c):
        raise ValueError(f"2F1 pole: c = {c} is a non-positive integer")
    if x >= 1.0:
        raise ValueError(f"2F1 requires x < 1, got {x}")
    if x == 0.0:
        return Estimate(1.0, 0.0, 1, True, "series")

    # Negative-a or -b polynomial case terminates on its own; otherwise pick a
    # region strategy.
    if abs(x) <= _SERIES_CUT or _is_nonpositive_int(a) or _is_nonpositive_int(b):
        v, e, n, ok, _ = _hyp_series((a, b), (c,), x, opts)
        return Estimate(v, e, n, ok, "series")

    if x < 0.0:
        # Pfaff: (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)); transform on the smaller
        # of a, b for a better-conditioned series.
        if abs(a) > abs(b):
            a, b = b, a
        xp = x / (x - 1.0)
        v, e, n, ok, _ = _hyp_series((a, c - b), (c,), xp, opts)
        scale = (1.0 - x) ** (-a)
        return Estimate(scale * v, scale * e, n, ok, "pfaff")

    # x in (cut, 1): connection through 1-x; degenerate c-a-b handled by a
    # symmetric epsilon detour.
    s = c - a - b
    if abs(s - round(s)) < 1e-8:
        eps = 1e-7
        lo = gauss_2f1(a + eps, b, c, x, opts)
        hi = gauss_2f1(a - eps, b, c, x, opts)
        v = 0.5 * (lo.value + hi.value)
        spread = abs(lo.value - hi.value)
        return Estimate(v, spread + lo.err_bound + hi.err_bound,
                        lo.terms_used + hi.terms_used,
                        lo.converged and hi.converged, "connection-eps")
    y = 1.0 - x
    lg_c, _ = log_gamma_signed(c)
    lg_s, sg_s = log_gamma_signed(s)
    lg_ca, sg_ca = log_gamma_signed(c - a)
    lg_cb, sg_cb = log_gamma_signed(c - b)
    lg_ms, sg_ms = log_gamma_signed(-s)
    lg_a, sg_a = log_gamma_signed(a)
    lg_b, sg_b = log_gamma_signed(b)
    c1 = sg_s * sg_ca * sg_cb * math.exp(lg_c + lg_s - lg_ca - lg_cb)
    c2 = sg_ms * sg_a * sg_b * math.exp(lg_c + lg_ms - lg_a - lg_b)
    v1, e1, n1, ok1, _ = _hyp_series((a, b), (a + b - c + 1.0,), y, opts)
    v2, e2, n2, ok2, _ = _hyp_series((c - a, c - b), (s + 1.0,), y, opts)
    val = c1 * v1 + c2 * y ** s * v2
    err = abs(c1) * e1 + abs(c2) * y ** s * e2
    return Estimate(val, err, n1 + n2, ok1 and ok2, "connection")


def kummer_m(a: float, b: float, z: float,
             opts: SeriesOptions = DEFAULT_OPTIONS) -> Estimate:
    """Confluent hypergeometric 1F1(a; b; z), convergent for all finite z.

    Negative z is routed through the Kummer transform
    M(a, b, z) = e^z M(b - a, b, -z) so the summed series has positive
    argument and no catastrophic alternation.
    """
    if _is_nonpositive_int(b):
        raise ValueError(f"1F1 pole: b = {b} is a non-positive integer")
    if z == 0.0:
        return Estimate(1.0, 0.0, 1, True, "series")
    if z < 0.0 and not _is_nonpositive_int(a):
        v, e, n, ok, _ = _hyp_series((b - a,), (b,), -z, opts)
        scale = math.exp(z)
        return Estimate(scale * v, scale * e, n, ok, "kummer-transform")
    v, e, n, ok, _ = _hyp_series((a,), (b,), z, opts)
    return Estimate(v, e, n, ok, "series")
