"""Real-valued special-function kernel for the fading analysis.

Pure functions, no global mutable state; every series/quadrature result is
returned as an Estimate carrying its truncation diagnostics.
"""

from ..estimate import DEFAULT_OPTIONS, Estimate, SeriesOptions
from .gammabeta import beta, gaussian_q, gaussian_q_vec, log_gamma, log_poch
from .hyp import gauss_2f1, kummer_m
from .lauricella import TransformedFB, lauricella_fb, transform_fb
from .meijer import meijer_g_ber, meijer_g_mgf, mgf_ratio
from .tricomi import tricomi_u, u_real_vec

__all__ = [
    "DEFAULT_OPTIONS",
    "Estimate",
    "SeriesOptions",
    "TransformedFB",
    "beta",
    "gauss_2f1",
    "gaussian_q",
    "gaussian_q_vec",
    "kummer_m",
    "lauricella_fb",
    "log_gamma",
    "log_poch",
    "meijer_g_ber",
    "meijer_g_mgf",
    "mgf_ratio",
    "transform_fb",
    "tricomi_u",
    "u_real_vec",
]
