"""U(a, b, z) for complex z off the negative real axis (|arg z| < pi).

Needed by the Laplace-inversion evaluator of sum distributions, where the
per-branch transform is a U function sampled along a Talbot contour.  Two
branches:

* small |z|: complex Kummer decomposition; the 1F1 series is summed on
  -z via the Kummer transform whenever Re z < 0 so the dominant terms do
  not alternate;
* otherwise: the Laplace integral rotated onto the ray arg(u) = -arg(z),
  which makes the exponential factor real, evaluated by scaled generalized
  Gauss-Laguerre.  Accuracy degrades only as the ray approaches the
  (1+u) branch point, i.e. |arg z| -> pi, which callers keep away from.
"""

from __future__ import annotations

import math

import numpy as np

from .gammabeta import log_gamma_signed
from .tricomi import _ggl_rule, _INT_EPS, _PERTURB

_KUMMER_ZMAX = 4.0
_MAXIT = 700


def _kummer_series_vec(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """1F1(a; b; z) on a complex array, |z| small enough for direct use.

    For b < 0 the terms pass through a near-zero denominator at k ~ -b and
    resurge afterwards, so early termination is only allowed past that hump.
    """
    z = np.asarray(z, dtype=complex)
    neg = z.real < 0.0
    w = np.where(neg, -z, z)
    A = np.where(neg, b - a, a)
    term = np.ones_like(w)
    total = np.ones_like(w)
    min_k = 5 if b >= -0.5 else int(math.ceil(-b)) + 10
    for k in range(_MAXIT):
        term = term * (A + k) * w / ((b + k) * (k + 1.0))
        total += term
        if k >= min_k and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return np.where(neg, np.exp(z) * total, total)


def _u_kummer_vec(a: float, b: float, z: np.ndarray) -> np.ndarray:
    lg1, s1 = log_gamma_signed(1.0 - b)
    lgab, sab = log_gamma_signed(a - b + 1.0)
    lgb1, sb1 = log_gamma_signed(b - 1.0)
    c1 = s1 * sab * math.exp(lg1 - lgab)
    m1 = _kummer_series_vec(a, b, z)
    m2 = _kummer_series_vec(a - b + 1.0, 2.0 - b, z)
    log_t2 = lgb1 - math.lgamma(a) + (1.0 - b) * np.log(z.astype(complex))
    t2 = sb1 * np.exp(log_t2) * m2
    return c1 * m1 + t2


_EPS_COMPLEX = 1e-4   # plain-average detour width (moderate |z|)
_EPS_RICH = 3e-3      # Richardson detour width (|z| <= 1)


def _avg_detour(a: float, b: float, z: np.ndarray, eps: float) -> np.ndarray:
    lo = _u_kummer_vec(a, round(b) - eps, z)
    hi = _u_kummer_vec(a, round(b) + eps, z)
    return 0.5 * (lo + hi)


def _u_kummer_vec_safe(a: float, b: float, z: np.ndarray) -> np.ndarray:
    if abs(b - round(b)) >= _INT_EPS:
        return _u_kummer_vec(a, b, z)
    # integer b: detour around the removable decomposition singularity.
    # Small |z| tolerates the wide Richardson pair (bias O(eps^4), roundoff
    # O(eps_mach/eps^2)); larger |z| amplifies the detour through the series
    # hump at k ~ -b, where the narrow plain average measures best.
    out = np.empty_like(z)
    small = np.abs(z) <= 1.0
    if np.any(small):
        a1 = _avg_detour(a, b, z[small], _EPS_RICH)
        a2 = _avg_detour(a, b, z[small], 2.0 * _EPS_RICH)
        out[small] = (4.0 * a1 - a2) / 3.0
    if np.any(~small):
        out[~small] = _avg_detour(a, b, z[~small], _EPS_COMPLEX)
    return out


def _u_ggl_rot_vec(a: float, b: float, z: np.ndarray, n: int = 128) -> np.ndarray:
    """Rotated-ray Laplace integral by scaled generalized Gauss-Laguerre.

    The ray angle is clamped to +-pi/2: along the imaginary axis
    |1 + e^{i alpha} u| >= 1, so the algebraic factor never dips toward its
    branch point (which would spike the integrand for large a+1-b), at the
    cost of a mild residual oscillation exp(-i |z| sin(arg z + alpha) u).
    """
    z = np.asarray(z, dtype=complex)
    tau, logw = _ggl_rule(a, n)
    absz = np.abs(z)
    argz = np.angle(z)
    alpha = -np.sign(argz) * np.minimum(np.abs(argz), 0.5 * np.pi)
    zeta = z * np.exp(1j * alpha)          # Re zeta > 0 by construction
    rate = zeta.real
    nu = max(a + 1.0 - b, 0.0)
    # node scale: linear decay rate plus the width 1/sqrt(nu) of the
    # |1 + i u|^{-nu} factor when the ray is (near) the imaginary axis
    zeff = (rate + nu * np.maximum(np.cos(alpha), 0.0)
            + math.sqrt(nu) * np.abs(np.sin(alpha)))
    zeff = np.maximum(zeff, np.maximum(rate, 0.25 * absz))
    t = tau[None, :]
    ray = np.exp(1j * alpha)
    lh = (logw[None, :]
          + t * (1.0 - zeta[:, None] / zeff[:, None])
          + (b - a - 1.0) * np.log(1.0 + ray[:, None] * t / zeff[:, None]))
    m = np.max(lh.real, axis=1, keepdims=True)
    s = np.sum(np.exp(lh - m), axis=1)
    log_pref = 1j * alpha * a - a * np.log(zeff) - math.lgamma(a)
    return np.exp(log_pref + m[:, 0]) * s


def u_complex_vec(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """U(a, b, z) over a complex array, |arg z| < ~2.8."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    # near-integer b narrows the safe Kummer window: the epsilon detour
    # around the decomposition poles costs ~1e-8 of headroom.  Large |b|
    # widens it: for |z| well below |b| the z^{1-b} term is negligible and
    # the decomposition is cancellation-free (the ms -> inf regime).
    base = 1.0 if abs(b - round(b)) < _INT_EPS else _KUMMER_ZMAX
    cut = min(max(base, 0.3 * abs(b - 1.0)), 250.0)
    small = np.abs(z) <= cut
    if np.any(small):
        out[small] = _u_kummer_vec_safe(a, b, z[small])
    if np.any(~small):
        out[~small] = _u_ggl_rot_vec(a, b, z[~small])
    return out
