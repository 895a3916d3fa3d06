"""Application pipelines: Gaussian filter, alpha blending and the MAC neuron."""
from .blend import alpha_to_int, blend
from .gaussian import gaussian_filter
from .image import ImageU8, QualityReport, pgm_read, pgm_write, psnr
from .mac import mac_dotproduct
from .trace import SignalTrace, trace_report

__all__ = ["ImageU8", "QualityReport", "SignalTrace", "alpha_to_int", "blend", "gaussian_filter",
           "mac_dotproduct", "pgm_read", "pgm_write", "psnr", "trace_report"]
