"""Single-branch Fisher-Snedecor F composite fading distribution.

The instantaneous SNR on a branch has density

    f(g) = m^m (ms*gb)^ms g^(m-1) / [ B(m, ms) (m*g + ms*gb)^(m+ms) ],

with fading-severity shape m, shadowing shape ms and scale gb.  gb is the
scale parameter exactly as it appears in the density; the actual mean is
gb * ms/(ms - 1) for ms > 1 (see moment()), and no silent re-scaling is
applied anywhere.  Equivalently snr = (ms*gb/m) * G1/G2 with independent
G1 ~ Gamma(m), G2 ~ Gamma(ms), which gives the exact sampler and the
incomplete-beta CDF used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .estimate import DEFAULT_OPTIONS, SeriesOptions
from .specfun import mgf_ratio
from .specfun.tricomi import u_real_vec


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class BranchParams:
    """Per-branch fading triple; gamma_bar is linear (dB only at interfaces)."""

    m: float
    m_s: float
    gamma_bar: float

    def __post_init__(self):
        if not (self.m > 0 and self.m_s > 0 and self.gamma_bar > 0):
            raise ValueError(f"branch parameters must be positive, got {self}")


_LAMBDA = {"bpsk": 1.0, "bfsk": 0.5, "bfsk_min_corr": 0.715}


@dataclass(frozen=True)
class Modulation:
    """Coherent binary modulation constant lambda (BPSK=1, BFSK=0.5, ...)."""

    lam: float
    label: str = "custom"

    def __post_init__(self):
        if self.label in _LAMBDA and self.lam != _LAMBDA[self.label]:
            raise ValueError(f"{self.label} requires lambda={_LAMBDA[self.label]}")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    @classmethod
    def bpsk(cls) -> "Modulation":
        return cls(1.0, "bpsk")

    @classmethod
    def bfsk(cls) -> "Modulation":
        return cls(0.5, "bfsk")

    @classmethod
    def bfsk_min_corr(cls) -> "Modulation":
        return cls(0.715, "bfsk_min_corr")

    @classmethod
    def from_label(cls, label: str) -> "Modulation":
        if label not in _LAMBDA:
            raise ValueError(f"unknown modulation label {label!r}")
        return cls(_LAMBDA[label], label)


def pdf(p: BranchParams, gamma):
    """Density of the branch SNR; vectorized over gamma.

    At gamma = 0: 0 for m > 1, the finite limit 1/(B(1,ms)*ms*gb)... for
    m = 1, and +inf for m < 1 (returned as inf, the caller-visible flag).
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be >= 0")
    m, ms, gb = p.m, p.m_s, p.gamma_bar
    logc = (m * math.log(m) + ms * math.log(ms * gb)
            - (math.lgamma(m) + math.lgamma(ms) - math.lgamma(m + ms)))
    with np.errstate(divide="ignore", invalid="ignore"):
        logpdf = logc + (m - 1.0) * np.log(g) - (m + ms) * np.log(m * g + ms * gb)
        out = np.exp(logpdf)
    if m > 1:
        out = np.where(g == 0.0, 0.0, out)
    elif m == 1:
        out = np.where(g == 0.0, math.exp(logc - (1.0 + ms) * math.log(ms * gb)), out)
    else:
        out = np.where(g == 0.0, math.inf, out)
    return out if out.ndim else float(out)


def cdf(p: BranchParams, gamma):
    """CDF of the branch SNR, exact for all gamma.

    With w = G1/(G1+G2) ~ Beta(m, ms) and snr = (ms*gb/m) G1/G2, the event
    snr <= g is w <= zg/(1+zg) for zg = m*g/(ms*gb), so the CDF is the
    regularized incomplete beta I_{zg/(1+zg)}(m, ms).  This equals the
    hypergeometric form used for the sum distribution (asserted in tests).
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be >= 0")
    zg = p.m * g / (p.m_s * p.gamma_bar)
    out = betainc(p.m, p.m_s, zg / (1.0 + zg))
    return out if out.ndim else float(out)


def mgf(p: BranchParams, t: float, opts: SeriesOptions = DEFAULT_OPTIONS) -> float:
    """E[exp(-t*snr)] for t >= 0; 1 at t = 0, strictly decreasing in t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return mgf_ratio(p.m, p.m_s, p.gamma_bar, t, opts).value


def mgf_vec(p: BranchParams, t) -> np.ndarray:
    """Vectorized MGF over an array of t >= 0 (hot path for BER sweeps)."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    zero = t == 0.0
    out[zero] = 1.0
    if np.any(~zero):
        z = p.m_s * p.gamma_bar * t[~zero] / p.m
        scale = math.exp(math.lgamma(p.m + p.m_s) - math.lgamma(p.m_s))
        out[~zero] = scale * u_real_vec(p.m, 1.0 - p.m_s, z)
    return out


def moment(p: BranchParams, k: int) -> float:
    """E[snr^k] = (ms*gb/m)^k B(m+k, ms-k)/B(m, ms) for ms > k, else inf."""
    if k < 1 or k != int(k):
        raise ValueError("k must be a positive integer")
    if p.m_s <= k:
        return math.inf
    lognum = math.lgamma(p.m + k) + math.lgamma(p.m_s - k)
    logden = math.lgamma(p.m) + math.lgamma(p.m_s)
    return (p.m_s * p.gamma_bar / p.m) ** k * math.exp(lognum - logden)


def sample(p: BranchParams, rng: np.random.Generator, size=None):
    """Exact draws snr = (ms*gb/m) * Gamma(m)/Gamma(ms); deterministic per rng."""
    g1 = rng.gamma(p.m, size=size)
    g2 = rng.gamma(p.m_s, size=size)
    return (p.m_s * p.gamma_bar / p.m) * g1 / g2
