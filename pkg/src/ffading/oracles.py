"""Independent ground-truth machinery: seeded Monte Carlo, adaptive
quadrature, and grid convolution used to validate every closed form.

Reproducibility contract: a fixed (seed, n_chunks) pair yields bit-identical
estimates.  Chunk c draws from PCG64 seeded with splitmix64(seed + c*PHI64),
and reductions always run in chunk order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
from scipy.stats import norm

from . import channel
from .channel import BranchParams, Modulation
from .estimate import Estimate
from .specfun import gaussian_q_vec

_PHI64 = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One round of the SplitMix64 mixer; the documented substream derivation."""
    x = (x + _PHI64) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(splitmix64((seed + chunk * _PHI64) & _MASK64)))


@dataclass(frozen=True)
class SimConfig:
    seed: int = 12345
    n_trials: int = 1_000_000
    n_chunks: int = 8
    confidence: float = 0.95

    def __post_init__(self):
        if self.n_trials < 1 or self.n_chunks < 1:
            raise ValueError("n_trials and n_chunks must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must be in (0, 1)")

    def chunk_sizes(self) -> list[int]:
        base = self.n_trials // self.n_chunks
        sizes = [base] * self.n_chunks
        sizes[-1] += self.n_trials - base * self.n_chunks
        return [s for s in sizes if s > 0]


class SumSimulation:
    """Sorted sample store for the combined SNR, with ECDF/histogram queries."""

    def __init__(self, samples: np.ndarray):
        self.samples = np.sort(samples)
        self.n = len(samples)

    def ecdf(self, gamma) -> np.ndarray:
        idx = np.searchsorted(self.samples, np.asarray(gamma, dtype=float), side="right")
        return idx / self.n

    def histogram(self, bins) -> tuple[np.ndarray, np.ndarray]:
        counts, edges = np.histogram(self.samples, bins=bins)
        widths = np.diff(edges)
        return counts / (self.n * widths), edges

    def mean(self) -> float:
        return float(np.mean(self.samples))


def simulate_sum(ch, cfg: SimConfig) -> SumSimulation:
    """n_trials draws of the branch-SNR sum, chunked deterministic substreams."""
    parts = []
    for c, size in enumerate(cfg.chunk_sizes()):
        rng = chunk_rng(cfg.seed, c)
        total = np.zeros(size)
        for br in ch.branches:
            total += channel.sample(br, rng, size=size)
        parts.append(total)
    return SumSimulation(np.concatenate(parts))


@dataclass
class BerSimResult:
    value: float
    ci_low: float
    ci_high: float
    n_trials: int
    std_error: float


def simulate_ber(ch, mod: Modulation, cfg: SimConfig) -> BerSimResult:
    """Mean of Q(sqrt(2*lambda*sum-SNR)) with a delta-method CI."""
    z = norm.ppf(0.5 + cfg.confidence / 2.0)
    total = 0.0
    total_sq = 0.0
    n = 0
    for c, size in enumerate(cfg.chunk_sizes()):
        rng = chunk_rng(cfg.seed, c)
        s = np.zeros(size)
        for br in ch.branches:
            s += channel.sample(br, rng, size=size)
        q = gaussian_q_vec(np.sqrt(2.0 * mod.lam * s))
        total += float(np.sum(q))
        total_sq += float(np.sum(q * q))
        n += size
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    se = math.sqrt(var / n)
    return BerSimResult(mean, mean - z * se, mean + z * se, n, se)


def adaptive_quadrature(f, a: float, b: float, tol: float = 1e-10) -> Estimate:
    """Integral of a piecewise-smooth f over [a, b], b possibly inf.

    Semi-infinite ranges use the tail substitution gamma = a + u/(1-u).
    """
    if math.isinf(b):
        def g(u):
            w = 1.0 - u
            return f(a + u / w) / (w * w)
        val, err = scipy.integrate.quad(g, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
    else:
        val, err = scipy.integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=200)
    return Estimate(val, err, 0, err <= max(tol, 10 * tol * abs(val)) * 10, "quad")


def numeric_convolution(pdfs, gamma_max: float, n_grid: int = 2001,
                        tol: float = 1e-6, max_refine: int = 6):
    """Iterated trapezoid convolution of branch densities on a uniform grid.

    Returns (grid, density, err) where err is the step-halving stagnation
    estimate on the returned grid.  Supports up to 4 densities.
    """
    if len(pdfs) > 4:
        raise ValueError("numeric_convolution supports at most 4 densities")

    def density_on(n: int) -> tuple[np.ndarray, np.ndarray]:
        g = np.linspace(0.0, gamma_max, n)
        h = g[1] - g[0]
        vals = [np.asarray(p(g), dtype=float) for p in pdfs]
        cur = vals[0]
        for nxt in vals[1:]:
            full = np.convolve(cur, nxt)[: n] * h
            full -= 0.5 * h * (cur[0] * nxt[: n] + nxt[0] * cur[: n])
            cur = full
        return g, cur

    n = n_grid
    grid0, dens0 = density_on(n)
    err = math.inf
    for _ in range(max_refine):
        n = 2 * n - 1
        grid1, dens1 = density_on(n)
        on_coarse = dens1[:: 2]
        err = float(np.max(np.abs(on_coarse - dens0)))
        grid0, dens0 = grid0, on_coarse
        if err < tol:
            return grid0, dens0, err
    return grid0, dens0, err


def ks_distance(sorted_samples: np.ndarray, cdf_at_samples: np.ndarray) -> float:
    """Exact Kolmogorov-Smirnov distance between an ECDF and a continuous CDF."""
    n = len(sorted_samples)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf_at_samples)
    d_minus = np.max(cdf_at_samples - (i - 1) / n)
    return float(max(d_plus, d_minus))
