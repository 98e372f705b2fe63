"""CESA / CESA-PERL approximate adder toolkit.

Bit-exact models of the carry-estimating adders with an exact ripple oracle,
ER/MED/MRED error metrics, a unit-gate cost model, and two application
benchmarks (Gaussian image smoothing and fixed-point K-means clustering).
"""

from .adder import (AddResult, AdderConfig, BlockOperands, CarrySignals,
                    Variant, Word, add_approx, add_exact, block_sum, ceu,
                    estimate_block_carry, exact_carry_at, perl, su)
from .clustering import (ClusteringResult, default_dataset, kmeans,
                         load_points_csv)
from .cost import (CostEstimate, area_estimate, delay_estimate,
                   delay_reduction_vs_exact)
from .image import (GrayImage, QualityReport, add_noise, convolve_approx,
                    default_test_image, gaussian_kernel_int, psnr, read_pgm,
                    ssim, write_pgm)
from .metrics import (BoundaryStats, ErrorReport, EvalMode,
                      boundary_mismatch_stats, error_distance,
                      error_report_from_json, evaluate_exhaustive,
                      evaluate_monte_carlo, relative_error_distance)
from .verification import InvariantResult, run_invariant_suite

__version__ = "0.1.0"

__all__ = [
    "AddResult", "AdderConfig", "BlockOperands", "BoundaryStats",
    "CarrySignals", "ClusteringResult", "CostEstimate", "ErrorReport",
    "EvalMode", "GrayImage", "InvariantResult", "QualityReport", "Variant",
    "Word", "add_approx", "add_exact", "add_noise", "area_estimate",
    "block_sum", "boundary_mismatch_stats", "ceu", "convolve_approx",
    "default_dataset", "default_test_image", "delay_estimate",
    "delay_reduction_vs_exact", "error_distance", "error_report_from_json",
    "estimate_block_carry", "evaluate_exhaustive", "evaluate_monte_carlo",
    "exact_carry_at", "gaussian_kernel_int", "kmeans", "load_points_csv",
    "perl", "psnr", "read_pgm", "relative_error_distance",
    "run_invariant_suite", "ssim", "su", "write_pgm",
]
