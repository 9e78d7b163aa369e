"""
Number of decomposition scales from wavelet center frequency.

Level j analyses the pseudo-frequency f_psi / (2**j * T_s).  The chosen
J0 is the level whose pseudo-frequency lies closest to the dominant
frequency of the signal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cascade import DEFAULT_DEPTH, wavelet_shape
from .errors import InvalidParameterError, NumericalError
from .filterbank import Wavelet, parse_wavelet

__all__ = [
    "SPECIES_FC_CPM",
    "DEFAULT_SAMPLE_PERIOD",
    "ScaleSelection",
    "center_frequency",
    "pseudo_frequencies",
    "select_levels",
    "scale_selection",
    "species_fc_cpm",
    "levels_for",
]

# dominant slow-wave frequency in cycles per minute; canine is the middle
# of the 4-6 cpm band
SPECIES_FC_CPM = {"canine": 5.0, "human": 3.0}
DEFAULT_SAMPLE_PERIOD = 0.1


def center_frequency(w, depth: int = DEFAULT_DEPTH, oversample: int = 1) -> float:
    """
    Frequency of the largest Fourier magnitude of the wavelet.

    The cascade shape covers its whole support [0, L - 1] and the
    mean-removed samples are transformed with a DFT whose window is the
    support itself (``oversample=1``), giving bins at multiples of
    1 / (L - 1) cycles per unit.  Larger ``oversample`` values
    zero-pad the DFT and, with parabolic peak interpolation, approach the
    peak of the continuous spectrum instead.

    Returns cycles per unit of the filter's sample period.
    """
    if isinstance(w, str):
        w = parse_wavelet(w)
    if isinstance(w, Wavelet) and w.point is None and oversample == 1:
        return _named_center_frequency(w.name, depth)
    return _center_frequency(w, depth, oversample)


@lru_cache(maxsize=None)
def _named_center_frequency(name: str, depth: int) -> float:
    return _center_frequency(Wavelet(name), depth, 1)


def _center_frequency(w, depth: int, oversample: int) -> float:
    shape = wavelet_shape(w, depth)
    psi = shape.samples - shape.samples.mean()
    n_fft = len(psi) * int(oversample)
    spectrum = np.abs(np.fft.rfft(psi, n_fft))
    if not np.any(spectrum[1:] > 0):
        raise NumericalError("wavelet spectrum is identically zero")
    k = 1 + int(np.argmax(spectrum[1:]))
    offset = 0.0
    if oversample > 1 and 1 <= k < len(spectrum) - 1:
        lo, mid, hi = spectrum[k - 1], spectrum[k], spectrum[k + 1]
        denom = lo - 2 * mid + hi
        if denom != 0:
            offset = 0.5 * (lo - hi) / denom
    return (k + offset) / (n_fft * shape.grid_step)


def pseudo_frequencies(f_psi: float, sample_period: float, max_level: int) -> np.ndarray:
    """Pseudo-frequency in Hz for levels 1..max_level."""
    j = np.arange(1, max_level + 1)
    return f_psi / (2.0 ** j * sample_period)


def select_levels(f_psi: float, sample_period: float, f_c: float, max_level: int) -> int:
    """Level in 1..max_level whose pseudo-frequency is closest to ``f_c`` (Hz)."""
    if not (f_psi > 0 and sample_period > 0 and f_c > 0):
        raise InvalidParameterError("center frequency, sample period and f_c must be positive")
    if max_level < 1:
        raise InvalidParameterError(f"max_level must be >= 1, got {max_level}")
    gap = np.abs(pseudo_frequencies(f_psi, sample_period, max_level) - f_c)
    return 1 + int(np.argmin(gap))  # argmin returns the first, i.e. smaller j


@dataclass(frozen=True)
class ScaleSelection:
    wavelet: str
    center_frequency: float
    dominant_frequency: float
    sample_period: float
    chosen_levels: int
    pseudo_frequencies: tuple

    def report_lines(self) -> list[str]:
        lines = [
            f"wavelet: {self.wavelet}",
            f"center frequency: {self.center_frequency:.4f}",
            f"dominant frequency: {self.dominant_frequency * 60:.4f} cpm",
            "level,f_pseudo_cpm",
        ]
        for j, f in enumerate(self.pseudo_frequencies, start=1):
            mark = " *" if j == self.chosen_levels else ""
            lines.append(f"{j},{f * 60:.4f}{mark}")
        lines.append(f"J0={self.chosen_levels}")
        return lines


def scale_selection(w, f_c_cpm: float, sample_period: float = DEFAULT_SAMPLE_PERIOD,
                    max_level: int = 12) -> ScaleSelection:
    if isinstance(w, str):
        w = parse_wavelet(w)
    f_psi = center_frequency(w)
    f_c = f_c_cpm / 60.0
    return ScaleSelection(
        wavelet=w.label,
        center_frequency=f_psi,
        dominant_frequency=f_c,
        sample_period=sample_period,
        chosen_levels=select_levels(f_psi, sample_period, f_c, max_level),
        pseudo_frequencies=tuple(float(v) for v in pseudo_frequencies(f_psi, sample_period, max_level)),
    )


def species_fc_cpm(species: str) -> float:
    try:
        return SPECIES_FC_CPM[species]
    except KeyError:
        raise InvalidParameterError(f"unknown species {species!r}") from None


def levels_for(w, f_c_hz: float, sample_period: float, max_level: int) -> int:
    """J0 for a wavelet from its own center frequency."""
    return select_levels(center_frequency(w), sample_period, f_c_hz, max_level)

