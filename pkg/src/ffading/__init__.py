"""Fisher-Snedecor F composite fading: sums of branch SNRs and MRC metrics.

Closed-form and Monte Carlo evaluation of the single-branch and combined
SNR statistics (PDF/CDF/MGF), outage probability, outage capacity and
average BER of coherent binary modulation over L-branch maximal-ratio
combining, with every closed form cross-validated against independent
oracles.
"""

from .channel import BranchParams, Modulation, db_to_linear, linear_to_db
from .estimate import Estimate, SeriesOptions
from .metrics import (
    BerResult,
    CapacitySpec,
    ber_asymptotic,
    ber_closed_form,
    ber_quadrature,
    diversity_gain,
    diversity_gain_empirical,
    outage_capacity,
    outage_probability,
    outage_probability_asymptotic,
)
from .oracles import SimConfig, adaptive_quadrature, ks_distance, numeric_convolution, simulate_ber, simulate_sum
from .sumdist import SumChannel, cdf_sum, cdf_sum_grid, cdf_sum_iid, mgf_sum, pdf_sum, pdf_sum_iid

__version__ = "0.1.0"

__all__ = [
    "BerResult",
    "BranchParams",
    "CapacitySpec",
    "Estimate",
    "Modulation",
    "SeriesOptions",
    "SimConfig",
    "SumChannel",
    "adaptive_quadrature",
    "ber_asymptotic",
    "ber_closed_form",
    "ber_quadrature",
    "cdf_sum",
    "cdf_sum_grid",
    "cdf_sum_iid",
    "db_to_linear",
    "diversity_gain",
    "diversity_gain_empirical",
    "ks_distance",
    "linear_to_db",
    "mgf_sum",
    "numeric_convolution",
    "outage_capacity",
    "outage_probability",
    "outage_probability_asymptotic",
    "pdf_sum",
    "pdf_sum_iid",
    "simulate_ber",
    "simulate_sum",
    "__version__",
]
