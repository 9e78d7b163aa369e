"""Top-M coefficient retention and percent root-mean-square difference."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DistortionError, InvalidParameterError, ShapeError
from .filterbank import FilterPair, filter_pair
from .transform import DwtCoeffs, dwt, idwt

__all__ = [
    "CompressionResult",
    "retained_count",
    "top_m_mask",
    "threshold_top_m",
    "prd",
    "compress_and_measure",
    "compress_coeffs",
    "DEFAULT_CR_SET",
    "CSV_HEADER",
]

DEFAULT_CR_SET = (3.0, 5.0, 7.0, 10.0)
CSV_HEADER = "cr_requested,cr_actual,M,prd_percent"


def check_cr(cr: float) -> float:
    cr = float(cr)
    if not math.isfinite(cr) or cr < 1.0:
        raise InvalidParameterError(f"compression ratio must be finite and >= 1, got {cr}")
    return cr


def retained_count(n: int, cr: float) -> int:
    """M = max(1, floor(N / cr))."""
    return max(1, int(math.floor(n / check_cr(cr))))


@dataclass(frozen=True)
class CompressionResult:
    cr_requested: float
    kept: int
    n: int
    prd_percent: float

    @property
    def cr_actual(self) -> float:
        return self.n / self.kept

    def csv_row(self) -> str:
        return f"{self.cr_requested!r},{self.cr_actual!r},{self.kept},{self.prd_percent!r}"


def top_m_mask(values, m: int) -> np.ndarray:
    """
    Boolean mask keeping the ``m`` largest-magnitude entries.

    Equal magnitudes are ordered by position, lower index first.
    """
    v = np.abs(np.asarray(values, dtype=float))
    order = np.argsort(-v, kind="stable")
    mask = np.zeros(len(v), dtype=bool)
    mask[order[:m]] = True
    return mask


def threshold_top_m(c: DwtCoeffs, cr: float) -> tuple[DwtCoeffs, int]:
    """
    Hard-threshold ``c`` to its M largest-magnitude coefficients.

    Returns the thresholded coefficients and M.  Ties are broken on the flat
    layout ``[a_J0, d_J0, ..., d_1]`` so coarser coefficients win.
    """
    flat = c.flat()
    m = retained_count(len(flat), cr)
    kept = np.where(top_m_mask(flat, m), flat, 0.0)
    return DwtCoeffs.from_flat(kept, c.levels), m


def prd(x, x_rec) -> float:
    """Percent root-mean-square difference of ``x_rec`` against ``x``."""
    x = np.asarray(x, dtype=float)
    x_rec = np.asarray(x_rec, dtype=float)
    if x.shape != x_rec.shape:
        raise ShapeError(f"length mismatch: {x.shape} vs {x_rec.shape}")
    energy = float(x @ x)
    if energy == 0.0:
        raise DistortionError("PRD is undefined for a zero-energy reference signal")
    diff = x - x_rec
    return math.sqrt(float(diff @ diff) / energy) * 100.0


def compress_coeffs(x: np.ndarray, c: DwtCoeffs, f: FilterPair, cr: float) -> CompressionResult:
    """Threshold precomputed coefficients of ``x`` and measure the distortion."""
    kept, m = threshold_top_m(c, cr)
    return CompressionResult(float(cr), m, len(x), prd(x, idwt(kept, f)))


def compress_and_measure(x, wavelet, levels: int, cr: float) -> CompressionResult:
    """dwt -> keep top M -> idwt -> PRD."""
    f = filter_pair(wavelet)
    x = np.asarray(x, dtype=float)
    return compress_coeffs(x, dwt(x, f, levels), f, cr)
