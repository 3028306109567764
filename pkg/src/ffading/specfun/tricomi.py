"""Tricomi's confluent hypergeometric function U(a, b, z) for a > 0, z > 0.

Three cooperating strategies:

* Kummer decomposition
      U = G(1-b)/G(a-b+1) M(a,b,z) + G(b-1)/G(a) z^{1-b} M(a-b+1,2-b,z)
  cheap and accurate while the two terms do not cancel badly.  Integer b is
  a removable singularity of the decomposition and is handled by averaging
  the two one-sided perturbations b +/- eps.
* Laplace integral  U = G(a)^{-1} int_0^inf e^{-zu} u^{a-1} (1+u)^{b-a-1} du
  on log-spaced panels (Gauss-Jacobi absorbing the u^{a-1} endpoint), valid
  for every z > 0; the reference fallback.
* A generalized Gauss-Laguerre form of the same integral, scaled by the
  effective decay rate z + (a+1-b), used on vectorized hot paths for
  moderate-to-large z.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, roots_genlaguerre, roots_jacobi, roots_legendre

from ..estimate import DEFAULT_OPTIONS, Estimate, SeriesOptions
from .gammabeta import log_gamma_signed
from .hyp import kummer_m

_INT_EPS = 1e-9      # integer-b detection
_PERTURB = 1e-6      # one-sided perturbation size and agreement threshold
_KUMMER_ZMAX = 4.0   # beyond this the decomposition loses too many digits
_LOSS_LIMIT = 1e4    # max tolerated cancellation amplification


def _u_kummer_raw(a: float, b: float, z: float, opts: SeriesOptions):
    """Kummer decomposition at non-integer b.  Returns (value, err, terms, loss)."""
    m1 = kummer_m(a, b, z, opts)
    m2 = kummer_m(a - b + 1.0, 2.0 - b, z, opts)
    lg1 = math.lgamma(1.0 - b) if b < 1.0 else log_gamma_signed(1.0 - b)[0]
    s1 = 1.0 if b < 1.0 else log_gamma_signed(1.0 - b)[1]
    lgab, sgab = log_gamma_signed(a - b + 1.0)
    c1 = s1 * sgab * math.exp(lg1 - lgab)
    lgb1, sgb1 = log_gamma_signed(b - 1.0)
    # t2 assembled in the log domain: z^{1-b} can over/underflow on its own
    log_t2 = lgb1 - math.lgamma(a) + (1.0 - b) * math.log(z)
    t1 = c1 * m1.value
    if log_t2 > 700.0:
        raise OverflowError("Kummer decomposition term overflow")
    t2 = sgb1 * math.exp(log_t2) * m2.value
    val = t1 + t2
    scale = max(abs(t1), abs(t2), 1e-300)
    loss = scale / max(abs(val), 1e-300)
    err = (m1.err_bound * abs(c1) + m2.err_bound * abs(t2 / max(m2.value, 1e-300))
           + scale * 1e-16)
    return val, err, m1.terms_used + m2.terms_used, loss


def _u_kummer(a: float, b: float, z: float, opts: SeriesOptions):
    """Kummer route with the integer-b epsilon detour.

    Returns (value, err, terms, ok); ok=False asks for the Laplace fallback.
    """
    if abs(b - round(b)) < _INT_EPS:
        lo = _u_kummer_raw(a, round(b) - _PERTURB, z, opts)
        hi = _u_kummer_raw(a, round(b) + _PERTURB, z, opts)
        val = 0.5 * (lo[0] + hi[0])
        spread = abs(lo[0] - hi[0]) / max(abs(val), 1e-300)
        ok = spread < _PERTURB and max(lo[3], hi[3]) < _LOSS_LIMIT
        return val, abs(lo[0] - hi[0]) + lo[1] + hi[1], lo[2] + hi[2], ok
    val, err, terms, loss = _u_kummer_raw(a, b, z, opts)
    return val, err, terms, loss < _LOSS_LIMIT


def _panel_nodes(a: float, b: float, z: float, n: int):
    """Log-spaced quadrature panels for the Laplace integrand on (0, T]."""
    t_total = (45.0 + 2.0 * a) / z
    u1 = min(1.0, 1.0 / z) / 64.0
    edges = [0.0, u1]
    u = u1
    while u < t_total:
        u *= 3.2
        edges.append(min(u, t_total))
    xj, wj = roots_jacobi(n, 0.0, a - 1.0)
    xl, wl = roots_legendre(n)
    nodes, weights = [], []
    # first panel: weight u^{a-1} absorbed exactly
    h = edges[1]
    nodes.append(h * (xj + 1.0) / 2.0)
    weights.append(wj * (h / 2.0) ** a)
    for lo, hi in zip(edges[1:-1], edges[2:]):
        mid, half = (hi + lo) / 2.0, (hi - lo) / 2.0
        un = mid + half * xl
        nodes.append(un)
        weights.append(wl * half * un ** (a - 1.0))
    return np.concatenate(nodes), np.concatenate(weights)


def _u_laplace_panels(a: float, b: float, z: float, n: int = 24) -> float:
    u, w = _panel_nodes(a, b, z, n)
    logf = -z * u + (b - a - 1.0) * np.log1p(u)
    m = np.max(logf)
    total = float(np.dot(w, np.exp(logf - m)))
    return math.exp(m - math.lgamma(a)) * total


_GGL_CACHE: dict = {}


def _ggl_rule(a: float, n: int):
    key = (round(a, 12), n)
    if key not in _GGL_CACHE:
        x, w = roots_genlaguerre(n, a - 1.0)
        _GGL_CACHE[key] = (x, np.log(w))
    return _GGL_CACHE[key]


def _u_ggl_vec(a: float, b: float, z: np.ndarray, n: int = 128) -> np.ndarray:
    """Vectorized U for real z >= moderate, via scaled Gauss-Laguerre."""
    z = np.asarray(z, dtype=float)
    tau, logw = _ggl_rule(a, n)
    zeff = z + (a + 1.0 - b)
    t = tau[None, :]
    lh = (logw[None, :] + t * (1.0 - z[:, None] / zeff[:, None])
          + (b - a - 1.0) * np.log1p(t / zeff[:, None]))
    m = np.max(lh, axis=1, keepdims=True)
    s = np.sum(np.exp(lh - m), axis=1)
    return np.exp(m[:, 0] - a * np.log(zeff) - math.lgamma(a)) * s


def tricomi_u(a: float, b: float, z: float,
              opts: SeriesOptions = DEFAULT_OPTIONS,
              strategy: str = "auto") -> Estimate:
    """U(a, b, z) for a > 0, z > 0, real b.

    strategy: "auto" picks the Kummer decomposition at small z with the
    Laplace integral as fallback and workhorse; "kummer" / "laplace" force
    one route (the forced Kummer route still applies the integer-b detour).
    """
    if not (a > 0 and z > 0):
        raise ValueError(f"tricomi_u requires a > 0 and z > 0, got a={a}, z={z}")
    if strategy not in ("auto", "kummer", "laplace"):
        raise ValueError(f"unknown strategy {strategy!r}")

    if strategy == "kummer" or (strategy == "auto" and z <= _KUMMER_ZMAX):
        try:
            val, err, terms, ok = _u_kummer(a, b, z, opts)
        except (OverflowError, ValueError):
            ok = False
            val = err = math.nan
            terms = 0
        if ok:
            return Estimate(val, err, terms, True, "kummer")
        if strategy == "kummer":
            return Estimate(val, math.inf if math.isnan(err) else err,
                            terms, False, "kummer")

    v1 = _u_laplace_panels(a, b, z, n=24)
    v2 = _u_laplace_panels(a, b, z, n=34)
    err = abs(v1 - v2)
    ok = err <= max(opts.rel_tol * 100, 1e-10) * max(abs(v2), opts.abs_tol) + opts.abs_tol
    return Estimate(v2, err, 58, ok, "laplace")


def u_real_vec(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """U(a, b, z) over an array of positive z; hot path for MGF sweeps.

    Small z -> Kummer decomposition per element, large z -> scaled
    Gauss-Laguerre; both branches validated against tricomi_u in tests.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z <= _KUMMER_ZMAX
    if np.any(small):
        for i in np.nonzero(small)[0]:
            out[i] = tricomi_u(a, b, float(z[i])).value
    if np.any(~small):
        out[~small] = _u_ggl_vec(a, b, z[~small])
    return out
