"""Find the 6-tap orthonormal wavelet that best compresses a class of slow-wave signals."""

__version__ = "0.1.0"

from .filterbank import FilterPair, PollenPoint, Wavelet, filter_pair, pollen_filter, qmf, standard_filter
from .transform import DwtCoeffs, dwt, idwt
from .compress import CompressionResult, compress_and_measure, prd, threshold_top_m
from .scales import center_frequency, select_levels
from .cascade import WaveletShape, correlate_shapes, wavelet_shape
from .matcher import GridSpec, PrdSurface, aggregate, locate_minimum, prd_surface

__all__ = [
    "FilterPair", "PollenPoint", "Wavelet", "filter_pair", "pollen_filter", "qmf", "standard_filter",
    "DwtCoeffs", "dwt", "idwt",
    "CompressionResult", "compress_and_measure", "prd", "threshold_top_m",
    "center_frequency", "select_levels",
    "WaveletShape", "correlate_shapes", "wavelet_shape",
    "GridSpec", "PrdSurface", "aggregate", "locate_minimum", "prd_surface",
]
