"""
Same-length periodic discrete wavelet transform (pyramid algorithm).

Analysis at each level, with N the current length and circular indexing::

    a[n] = sum_k h[k] x[(2n + k) mod N]
    d[n] = sum_k g[k] x[(2n + k) mod N]

Synthesis is the transpose of that orthogonal map.  Filters longer than
the current level length wrap around, so every level down to a single
approximation coefficient is valid.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import PlanError, ShapeError
from .filterbank import FilterPair

__all__ = ["DwtCoeffs", "dwt", "idwt", "max_levels", "check_signal", "coeff_csv_rows"]


def max_levels(n: int) -> int:
    """J such that n == 2**J; raises ShapeError otherwise."""
    if n < 2 or n & (n - 1):
        raise ShapeError(f"signal length must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def check_signal(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ShapeError(f"signal must be one-dimensional, got shape {x.shape}")
    max_levels(len(x))
    if not np.all(np.isfinite(x)):
        raise ShapeError("signal contains non-finite samples")
    return x


@dataclass(eq=False)
class DwtCoeffs:
    """
    Output of a ``levels``-level transform.

    ``details[j - 1]`` holds d_j (length N / 2**j) and ``approx`` holds
    a_J0.  The flat layout is ``[a_J0, d_J0, ..., d_1]``.
    """

    details: list
    approx: np.ndarray

    @property
    def levels(self) -> int:
        return len(self.details)

    def __len__(self) -> int:
        return len(self.approx) + sum(len(d) for d in self.details)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.approx, *self.details[::-1]])

    @classmethod
    def from_flat(cls, v, levels: int) -> "DwtCoeffs":
        v = np.asarray(v, dtype=float)
        n = len(v)
        j_max = max_levels(n)
        if not 1 <= levels <= j_max:
            raise PlanError(f"levels must be in [1, {j_max}], got {levels}")
        approx_len = n >> levels
        approx = v[:approx_len].copy()
        details = []
        stop = n
        for j in range(1, levels + 1):
            m = n >> j
            details.append(v[stop - m:stop].copy())
            stop -= m
        return cls(details, approx)

    def energy(self) -> float:
        return float(self.flat() @ self.flat())


@lru_cache(maxsize=256)
def _index_table(n: int, taps: int) -> np.ndarray:
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n
    idx.setflags(write=False)
    return idx


def _analysis_step(x: np.ndarray, f: FilterPair):
    windows = x[_index_table(len(x), len(f))]
    return windows @ f.h, windows @ f.g


def _synthesis_step(a: np.ndarray, d: np.ndarray, f: FilterPair) -> np.ndarray:
    n = 2 * len(a)
    idx = _index_table(n, len(f))
    contrib = np.outer(a, f.h) + np.outer(d, f.g)
    return np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=n)


def dwt(x, f: FilterPair, levels: int) -> DwtCoeffs:
    """
    Forward transform of ``x`` over ``levels`` scales.

    Parameters
    ----------
    x : array_like
        Signal of length N = 2**J.
    f : FilterPair
        Orthonormal analysis filters.
    levels : int
        Number of scales J0 with 1 <= J0 <= J.
    """
    x = check_signal(x)
    j_max = max_levels(len(x))
    if not 1 <= int(levels) <= j_max:
        raise PlanError(f"levels must be in [1, {j_max}] for N={len(x)}, got {levels}")
    details = []
    a = x
    for _ in range(int(levels)):
        a, d = _analysis_step(a, f)
        details.append(d)
    return DwtCoeffs(details, a)


def idwt(c: DwtCoeffs, f: FilterPair) -> np.ndarray:
    """Inverse of :func:`dwt`."""
    a = np.asarray(c.approx, dtype=float)
    for j in range(c.levels, 0, -1):
        d = np.asarray(c.details[j - 1], dtype=float)
        if len(d) != len(a):
            raise ShapeError(
                f"detail level {j} has length {len(d)}, expected {len(a)}")
        a = _synthesis_step(a, d, f)
    return a


def coeff_csv_rows(c: DwtCoeffs) -> Iterable[str]:
    """CSV lines ``level,index,value``; level 0 is the approximation."""
    yield "level,index,value"
    for i, v in enumerate(c.approx):
        yield f"0,{i},{float(v)!r}"
    for j in range(c.levels, 0, -1):
        for i, v in enumerate(c.details[j - 1]):
            yield f"{j},{i},{float(v)!r}"
