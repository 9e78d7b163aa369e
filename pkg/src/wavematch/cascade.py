"""Cascade-algorithm wavelet shapes and shift-invariant shape correlation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NumericalError
from .filterbank import filter_pair

__all__ = ["WaveletShape", "wavelet_shape", "resample", "correlate_shapes"]

DEFAULT_DEPTH = 10


@dataclass(eq=False)
class WaveletShape:
    """
    Piecewise-constant approximation of psi: ``samples[k]`` is the value on
    the cell [k, k + 1) * grid_step, and the cells tile the support [0, L - 1].
    """

    samples: np.ndarray
    grid_step: float
    label: str = ""

    @property
    def t(self) -> np.ndarray:
        """Cell midpoints."""
        return (np.arange(len(self.samples)) + 0.5) * self.grid_step

    @property
    def support(self) -> float:
        return len(self.samples) * self.grid_step

    def norm(self) -> float:
        return float(np.sqrt(self.samples @ self.samples * self.grid_step))


def _upsample(f: np.ndarray, factor: int) -> np.ndarray:
    out = np.zeros((len(f) - 1) * factor + 1)
    out[::factor] = f
    return out


def wavelet_shape(w, depth: int = DEFAULT_DEPTH) -> WaveletShape:
    """
    Approximate the wavelet function psi by ``depth`` cascade iterations.

    psi is sampled at spacing 2**-depth as the product
    g(z^(2^(depth-1))) * h(z^(2^(depth-2))) * ... * h(z), scaled by
    2**(depth/2), then normalized to unit L2 norm.
    """
    depth = int(depth)
    if depth < 1:
        raise InvalidParameterError(f"cascade depth must be >= 1, got {depth}")
    f = filter_pair(w)
    psi = _upsample(f.g, 2 ** (depth - 1))
    for j in range(depth - 1):
        psi = np.convolve(psi, _upsample(f.h, 2 ** j))
    n = (len(f) - 1) * 2 ** depth
    samples = np.zeros(n)
    samples[:len(psi)] = psi * 2.0 ** (depth / 2)
    step = 2.0 ** -depth
    energy = samples @ samples * step
    if not energy > 0:
        raise NumericalError("cascade produced a zero-energy wavelet")
    label = getattr(w, "label", str(w))
    return WaveletShape(samples / np.sqrt(energy), step, label)


def resample(shape: WaveletShape, step: float) -> WaveletShape:
    """Linear interpolation of ``shape`` onto a grid with spacing ``step``."""
    if step == shape.grid_step:
        return shape
    n = int(round(shape.support / step))
    t = (np.arange(n) + 0.5) * step
    return WaveletShape(np.interp(t, shape.t, shape.samples), step, shape.label)


def correlate_shapes(u: WaveletShape, v: WaveletShape) -> float:
    """
    Pearson correlation of two shapes, maximized over integer shifts and sign.

    Both shapes are zero-padded into a common window of len(u) + len(v) - 1
    samples, so means and variances do not depend on the shift.  Flipping
    the sign of one shape negates r, so the result is the largest |r|.
    """
    step = min(u.grid_step, v.grid_step)
    x = resample(u, step).samples
    y = resample(v, step).samples
    n = len(x) + len(y) - 1
    mx, my = x.sum() / n, y.sum() / n
    vx = x @ x / n - mx * mx
    vy = y @ y / n - my * my
    if vx <= 0 or vy <= 0:
        raise NumericalError("zero-variance shape")
    cross = np.correlate(x, y, mode="full")
    r = (cross / n - mx * my) / np.sqrt(vx * vy)
    return float(min(np.max(np.abs(r)), 1.0))
