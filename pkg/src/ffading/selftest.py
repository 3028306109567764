"""Built-in validation suite: every module's key invariants, re-checkable
from a fresh install via `ffading selftest`.

quick: reduced grids and trial counts, finishes well under a minute.
full : acceptance-scale grids (10^6-sample KS runs and the rest).

The report is a plain dict (JSON-serializable) and contains no wall-clock
data, so two runs with the same seed produce byte-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import channel, metrics, oracles, sumdist
from .channel import BranchParams, Modulation, db_to_linear
from .oracles import SimConfig
from .specfun import gauss_2f1, lauricella_fb
from .sumdist import SumChannel

KS_CRIT_1E6 = 1.63e-3  # alpha = 0.01 critical value at n = 10^6, 1.63/sqrt(n)


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float  # fraction of tolerance left unused, 1.0 = perfect
    detail: str


def _result(name: str, observed: float, tol: float, detail: str = "") -> CheckResult:
    margin = 1.0 - observed / tol
    return CheckResult(name, bool(observed <= tol), float(f"{margin:.6g}"),
                       detail or f"observed={observed:.6g} tol={tol:.6g}")


# --- individual checks -----------------------------------------------------

def check_pdf_normalization(quick: bool) -> CheckResult:
    sets = [(1.0, 1.0, 1.0), (2.5, 1.5, 10.0)] if quick else [
        (0.5, 1.25, 1.0), (1.0, 1.0, 10.0), (1.5, 1.25, 100.0),
        (2.5, 1.5, 1.0), (2.5, 50.0, 10.0)]
    worst = 0.0
    for m, ms, gb in sets:
        p = BranchParams(m, ms, gb)
        q = oracles.adaptive_quadrature(lambda g: channel.pdf(p, g), 0.0, math.inf, 1e-10)
        worst = max(worst, abs(q.value - 1.0))
    return _result("pdf_normalization", worst, 1e-8)


def check_cdf_matches_pdf_integral(quick: bool) -> CheckResult:
    p = BranchParams(2.5, 1.5, 1.0)
    grid = np.linspace(0.05, 50.0, 20 if quick else 80)
    worst = 0.0
    for g in grid:
        q = oracles.adaptive_quadrature(lambda x: channel.pdf(p, x), 0.0, float(g), 1e-10)
        worst = max(worst, abs(q.value - channel.cdf(p, g)))
    return _result("cdf_equals_pdf_integral", worst, 1e-7)


def check_mgf_vs_laplace(quick: bool) -> CheckResult:
    p = BranchParams(2.5, 1.5, 10.0)
    worst = 0.0
    for t in (0.1, 1.0, 10.0):
        q = oracles.adaptive_quadrature(
            lambda g: math.exp(-t * g) * channel.pdf(p, g), 0.0, math.inf, 1e-12)
        worst = max(worst, abs(q.value - channel.mgf(p, t)) / q.value)
    return _result("mgf_equals_laplace_of_pdf", worst, 1e-6)


def check_rayleigh_limit() -> CheckResult:
    """m=1, ms->inf reduces to Rayleigh: CDF matches 1 - exp(-g/gb)."""
    gb = 4.0
    p = BranchParams(1.0, 1e5, gb)
    worst = 0.0
    for g in (0.5, 2.0, 8.0):
        worst = max(worst, abs(channel.cdf(p, g) - (1.0 - math.exp(-g / gb))))
    return _result("rayleigh_limit_cdf", worst, 1e-3)


def check_rayleigh_ber(mod: Modulation) -> CheckResult:
    """BPSK-over-Rayleigh benchmark; fails loudly if lambda is tampered."""
    gb = 4.0
    ch = SumChannel((BranchParams(1.0, 1e5, gb),))
    ber = metrics.ber_quadrature(ch, mod).value
    ray = 0.5 * (1.0 - math.sqrt(gb / (1.0 + gb)))
    return _result("rayleigh_bpsk_ber", abs(ber - ray), 1e-3)


def check_nakagami_mgf() -> CheckResult:
    m, gb = 2.0, 5.0
    p = BranchParams(m, 1e5, gb)
    worst = 0.0
    for t in (0.2, 1.0, 5.0):
        worst = max(worst, abs(channel.mgf(p, t) - (1.0 + gb * t / m) ** (-m)))
    return _result("nakagami_limit_mgf", worst, 1e-3)


def check_pfaff_univariate(quick: bool, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    n = 15 if quick else 50
    worst = 0.0
    for _ in range(n):
        a = rng.uniform(0.2, 4.0)
        b = rng.uniform(0.2, 4.0)
        x = rng.uniform(-5.0, 0.9)
        direct = gauss_2f1(a, b, b, x).value
        worst = max(worst, abs(direct - (1.0 - x) ** (-a)) / abs(direct))
    return _result("2f1_identity_ab_b", worst, 1e-10)


def check_lauricella_univariate(quick: bool, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    n = 20 if quick else 100
    worst = 0.0
    for _ in range(n):
        a = rng.uniform(0.3, 4.0)
        b = rng.uniform(0.3, 4.0)
        c = rng.uniform(0.5, 6.0)
        x = rng.uniform(-0.88, 0.88)
        fb = lauricella_fb([a], [b], c, [x]).value
        f21 = gauss_2f1(a, b, c, x).value
        worst = max(worst, abs(fb - f21) / abs(f21))
    return _result("lauricella_n1_equals_2f1", worst, 1e-10)


def check_sum_pdf_vs_convolution(quick: bool) -> CheckResult:
    ch = SumChannel((BranchParams(1.0, 1.0, 1.0),) * 2)
    # exact convolution of two (1+g)^-2 densities:
    # 2g/((2+g)^2 (1+g)) + 4 log(1+g)/(2+g)^3
    exact = {
        1.0: 0.21379958230517708,
        5.0: 0.054908759602270807,
        20.0: 0.0050791558654823062,
    }
    worst = 0.0
    for g, v in exact.items():
        worst = max(worst, abs(sumdist.pdf_sum(ch, g).value - v) / v)
    return _result("sum_pdf_matches_convolution", worst, 1e-5)


def check_sum_cdf_ks(quick: bool, seed: int) -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, db_to_linear(10.0)),) * 2)
    n = 200_000 if quick else 1_000_000
    sim = oracles.simulate_sum(ch, SimConfig(seed=seed, n_trials=n))
    grid = np.geomspace(sim.samples[0] * 0.99, sim.samples[-1] * 1.01, 800)
    Fg, _ = sumdist.cdf_sum_grid(ch, grid)
    F = np.interp(np.log(sim.samples), np.log(grid), Fg)
    ks = oracles.ks_distance(sim.samples, F)
    return _result("sum_cdf_ks", ks, 1.63 / math.sqrt(n))


def check_mgf_product_consistency(quick: bool) -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, 10.0), BranchParams(1.5, 1.25, 5.0)))
    worst = 0.0
    for t in ((1.0,) if quick else (0.1, 1.0, 10.0)):
        lap = oracles.adaptive_quadrature(
            lambda g: math.exp(-t * g) * sumdist.pdf_sum(ch, g).value,
            0.0, math.inf, 1e-11)
        prod = sumdist.mgf_sum(ch, t)
        worst = max(worst, abs(lap.value - prod) / prod)
    return _result("laplace_of_sum_pdf_equals_mgf_product", worst, 1e-5)


def check_ber_dual_path(quick: bool) -> CheckResult:
    combos = [(1.0, 1.0, 0.0, 1.0), (2.5, 1.5, 15.0, 1.0),
              (0.5, 5.0, 10.0, 0.5), (2.5, 50.0, 30.0, 0.715)]
    if not quick:
        combos += [(1.0, 2.0, 0.0, 1.0), (1.5, 1.25, 20.0, 1.0),
                   (3.5, 4.0, 15.0, 1.0), (1.0, 0.5, 5.0, 0.5),
                   (2.0, 10.0, 25.0, 0.715), (0.5, 0.5, 0.0, 1.0),
                   (1.5, 5.0, 40.0, 1.0), (2.5, 1.5, 45.0, 1.0)]
    worst = 0.0
    for m, ms, gb_db, lam in combos:
        ch = SumChannel((BranchParams(m, ms, db_to_linear(gb_db)),))
        q = metrics.ber_quadrature(ch, Modulation(lam)).value
        c = metrics.ber_closed_form(ch, Modulation(lam)).value
        worst = max(worst, abs(q - c) / c)
    return _result("ber_closed_form_vs_quadrature_L1", worst, 1e-8)


def check_op_asymptote() -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, db_to_linear(45.0)),))
    exact = metrics.outage_probability(ch, 1.0).value
    asym = metrics.outage_probability_asymptotic(ch, 1.0)
    return _result("op_asymptote_45db", abs(asym / exact - 1.0), 0.05)


def check_ber_asymptote() -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, db_to_linear(45.0)),))
    exact = metrics.ber_quadrature(ch, Modulation.bpsk()).value
    asym = metrics.ber_asymptotic(ch, Modulation.bpsk())
    return _result("ber_asymptote_45db", abs(asym / exact - 1.0), 0.10)


def check_sampler_determinism(seed: int) -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, 10.0), BranchParams(1.0, 1.0, 1.0)))
    a = oracles.simulate_sum(ch, SimConfig(seed=seed, n_trials=10_000)).samples
    b = oracles.simulate_sum(ch, SimConfig(seed=seed, n_trials=10_000)).samples
    identical = bool(np.array_equal(a, b))
    return CheckResult("sampler_determinism", identical,
                       1.0 if identical else 0.0, "bit-identical resample")


def check_moment_vs_mc(quick: bool, seed: int) -> CheckResult:
    p = BranchParams(2.5, 1.5, 10.0)
    n = 10 ** 6 if quick else 10 ** 7
    sim = oracles.simulate_sum(SumChannel((p,)), SimConfig(seed=seed, n_trials=n))
    rel = abs(sim.mean() - channel.moment(p, 1)) / channel.moment(p, 1)
    return _result("first_moment_vs_mc", rel, 0.02 if quick else 0.005)


def check_diversity_slope(quick: bool) -> CheckResult:
    ch = SumChannel((BranchParams(2.5, 1.5, 1.0),) * 2)
    slope = metrics.diversity_gain_empirical(ch, 35.0, 50.0, gamma_th=1.0,
                                             n=4 if quick else 6)
    return _result("diversity_slope_iid", abs(slope / 5.0 - 1.0), 0.05)


def run_selftest(level: str = "quick", seed: int = 12345) -> dict:
    quick = level == "quick"
    checks = [
        check_pdf_normalization(quick),
        check_cdf_matches_pdf_integral(quick),
        check_mgf_vs_laplace(quick),
        check_rayleigh_limit(),
        check_rayleigh_ber(Modulation.bpsk()),
        check_nakagami_mgf(),
        check_pfaff_univariate(quick, seed),
        check_lauricella_univariate(quick, seed + 1),
        check_sum_pdf_vs_convolution(quick),
        check_sum_cdf_ks(quick, seed + 2),
        check_mgf_product_consistency(quick),
        check_ber_dual_path(quick),
        check_op_asymptote(),
        check_ber_asymptote(),
        check_sampler_determinism(seed + 3),
        check_moment_vs_mc(quick, seed + 4),
        check_diversity_slope(quick),
    ]
    return {
        "level": level,
        "seed": seed,
        "all_pass": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
