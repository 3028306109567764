"""Gamma-family primitives: log-gamma, beta, Gaussian Q, signed log products.

Scalar entry points are backed by the C library (math.lgamma / math.erfc,
relative error a few ulp); the signed-log helpers are what the series
kernels build their Pochhammer products from.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, gammasgn


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Euler beta function B(a, b) for a, b > 0, computed in the log domain."""
    if not (a > 0 and b > 0):
        raise ValueError(f"beta requires positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def gaussian_q(x: float) -> float:
    """Standard normal tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def gaussian_q_vec(x):
    from scipy.special import erfc

    return 0.5 * erfc(np.asarray(x) / math.sqrt(2.0))


def log_gamma_signed(x: float) -> tuple[float, float]:
    """(log|Gamma(x)|, sign) for any non-pole real x."""
    if x > 0:
        return math.lgamma(x), 1.0
    if x == math.floor(x):
        raise ValueError(f"Gamma pole at x = {x}")
    return float(gammaln(x)), float(gammasgn(x))


def log_poch(a: float, k: int) -> tuple[float, float]:
    """(log|(a)_k|, sign) of the rising factorial (a)_k.

    Handles negative and zero a; sign is 0.0 when the product vanishes
    (a a non-positive integer with k past the zero).
    """
    if k == 0:
        return 0.0, 1.0
    if a > 0:
        return math.lgamma(a + k) - math.lgamma(a), 1.0
    logmag = 0.0
    sign = 1.0
    for j in range(k):
        f = a + j
        if f == 0.0:
            return -math.inf, 0.0
        logmag += math.log(abs(f))
        if f < 0:
            sign = -sign
    return logmag, sign


def signed_logsumexp(logmag, sign):
    """Sum of sign_i * exp(logmag_i) returned as (log|sum|, sign).

    Compensated accumulation on the rescaled mantissas keeps the result
    accurate when entries span many orders of magnitude.
    """
    logmag = np.asarray(logmag, dtype=float)
    sign = np.asarray(sign, dtype=float)
    live = sign != 0.0
    if not np.any(live):
        return -math.inf, 0.0
    lm = logmag[live]
    sg = sign[live]
    m = float(np.max(lm))
    if m == -math.inf:
        return -math.inf, 0.0
    # Kahan-compensated dot of signs with rescaled magnitudes
    total = 0.0
    comp = 0.0
    for v in sg * np.exp(lm - m):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    if total == 0.0:
        return -math.inf, 0.0
    return m + math.log(abs(total)), math.copysign(1.0, total)


class KahanSum:
    """Compensated scalar accumulator."""

    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, v: float) -> float:
        y = v - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t
        return self.total
