"""
Orthonormal FIR filter pairs.

Four standard wavelets (Haar, Daubechies-2, Daubechies-3, Coiflet-1) are
kept at their native lengths.  Every 6-tap orthonormal low-pass filter is
reached by the two-angle Pollen closed form

    h0 = [(1 + cos a + sin a)(1 - cos b - sin b) + 2 sin b cos a] / 4
    h1 = [(1 - cos a + sin a)(1 + cos b - sin b) - 2 sin b cos a] / 4
    h2 = [1 + cos(a - b) + sin(a - b)] / 2
    h3 = [1 + cos(a - b) - sin(a - b)] / 2
    h4 = 1 - h0 - h2
    h5 = 1 - h1 - h3

which sums to 2; the returned filters are scaled by 1/sqrt(2) so that
sum(h) = sqrt(2) and sum(h**2) = 1.  The diagonal a == b gives Haar in taps
2 and 3, and (0.4333 pi, -0.25 pi) lies next to Daubechies-3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "PollenPoint",
    "Wavelet",
    "FilterPair",
    "NAMED_WAVELETS",
    "qmf",
    "pollen_filter",
    "standard_filter",
    "filter_pair",
    "parse_wavelet",
    "filter_csv_rows",
]

SQRT2 = math.sqrt(2.0)
NAMED_WAVELETS = ("haar", "db2", "db3", "coif1")

_ALIASES = {
    "haar": "haar",
    "db1": "haar",
    "db2": "db2",
    "daubechies2": "db2",
    "daubechies-2": "db2",
    "db3": "db3",
    "daubechies3": "db3",
    "daubechies-3": "db3",
    "coif1": "coif1",
    "coiflet1": "coif1",
    "coiflet-1": "coif1",
}


def _wrap_angle(x: float) -> float:
    """Wrap an angle into [-pi, pi]; values already inside are unchanged."""
    if -math.pi <= x <= math.pi:
        return x
    return (x + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class PollenPoint:
    """A point (a, b) of the Pollen parameterization plane, in radians."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParameterError(f"non-finite Pollen point ({self.a}, {self.b})")
        object.__setattr__(self, "a", _wrap_angle(a))
        object.__setattr__(self, "b", _wrap_angle(b))

    @classmethod
    def from_pi_units(cls, a: float, b: float) -> "PollenPoint":
        """Build a point from coordinates expressed as multiples of pi."""
        return cls(a * math.pi, b * math.pi)


@dataclass(frozen=True)
class Wavelet:
    """Either a named standard wavelet or a point on the Pollen plane."""

    name: str
    point: PollenPoint | None = None

    def __post_init__(self):
        if self.name == "pollen":
            if self.point is None:
                raise InvalidParameterError("a Pollen wavelet needs a plane point")
        elif self.name not in NAMED_WAVELETS:
            raise InvalidParameterError(f"unknown wavelet {self.name!r}")

    @classmethod
    def pollen(cls, a: float, b: float) -> "Wavelet":
        return cls("pollen", PollenPoint(a, b))

    @property
    def label(self) -> str:
        if self.point is None:
            return self.name
        return f"pollen({self.point.a:.6f},{self.point.b:.6f})"


@dataclass(frozen=True, eq=False)
class FilterPair:
    """Low-pass ``h`` and high-pass ``g`` analysis filters of equal length."""

    h: np.ndarray
    g: np.ndarray = field(default=None)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        g = qmf(h) if self.g is None else np.asarray(self.g, dtype=float)
        if h.shape != g.shape:
            raise InvalidParameterError("h and g must have the same length")
        h.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    def __len__(self) -> int:
        return len(self.h)

    def violations(self, tol: float = 1e-12) -> list[str]:
        """Return a description of every orthonormality condition that fails."""
        h, g = self.h, self.g
        out = []
        if len(h) not in (2, 4, 6):
            out.append(f"length {len(h)} not in (2, 4, 6)")
        if abs(h.sum() - SQRT2) > tol:
            out.append(f"sum(h) - sqrt(2) = {h.sum() - SQRT2:.3e}")
        if abs(h @ h - 1.0) > tol:
            out.append(f"sum(h^2) - 1 = {h @ h - 1.0:.3e}")
        for shift in range(2, len(h), 2):
            s = h[:-shift] @ h[shift:]
            if abs(s) > tol:
                out.append(f"sum(h_k h_k+{shift}) = {s:.3e}")
        if abs(g.sum()) > tol:
            out.append(f"sum(g) = {g.sum():.3e}")
        if np.max(np.abs(g - qmf(h))) > tol:
            out.append("g is not the quadrature mirror of h")
        return out

    def is_orthonormal(self, tol: float = 1e-12) -> bool:
        return not self.violations(tol)


def qmf(h) -> np.ndarray:
    """
    High-pass quadrature mirror of a low-pass filter.

    ``g[k] = (-1)**k * h[L - 1 - k]``.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 1 or len(h) == 0 or len(h) % 2:
        raise InvalidParameterError(f"qmf needs a nonempty even-length filter, got {h.shape}")
    g = h[::-1].copy()
    g[1::2] *= -1.0
    return g


def pollen_filter(p: Union[PollenPoint, tuple]) -> FilterPair:
    """6-tap orthonormal filter pair for a Pollen plane point."""
    if not isinstance(p, PollenPoint):
        p = PollenPoint(*p)
    a, b = p.a, p.b
    ca, sa, cb, sb = math.cos(a), math.sin(a), math.cos(b), math.sin(b)
    cd, sd = math.cos(a - b), math.sin(a - b)
    h0 = ((1 + ca + sa) * (1 - cb - sb) + 2 * sb * ca) / 4
    h1 = ((1 - ca + sa) * (1 + cb - sb) - 2 * sb * ca) / 4
    h2 = (1 + cd + sd) / 2
    h3 = (1 + cd - sd) / 2
    h = np.array([h0, h1, h2, h3, 1 - h0 - h2, 1 - h1 - h3]) / SQRT2
    return FilterPair(h)


def _standard_lowpass(name: str) -> np.ndarray:
    if name == "haar":
        return np.array([1.0, 1.0]) / SQRT2
    if name == "db2":
        s3 = math.sqrt(3.0)
        return np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * SQRT2)
    if name == "db3":
        r = math.sqrt(10.0)
        q = math.sqrt(5 + 2 * r)
        taps = [1 + r + q, 5 + r + 3 * q, 10 - 2 * r + 2 * q,
                10 - 2 * r - 2 * q, 5 + r - 3 * q, 1 + r - q]
        return np.array(taps) * SQRT2 / 32
    if name == "coif1":
        s7 = math.sqrt(7.0)
        taps = [1 - s7, 5 + s7, 14 + 2 * s7, 14 - 2 * s7, 1 - s7, -3 + s7]
        return np.array(taps) * SQRT2 / 32
    raise InvalidParameterError(f"unknown wavelet {name!r}")


def standard_filter(w: Union[Wavelet, str]) -> FilterPair:
    """Filter pair of a named wavelet, at its native length."""
    name = w.name if isinstance(w, Wavelet) else _ALIASES.get(str(w).lower(), str(w))
    return FilterPair(_standard_lowpass(name))


def filter_pair(w: Union[Wavelet, str, PollenPoint]) -> FilterPair:
    """Resolve any wavelet description to its filter pair."""
    if isinstance(w, FilterPair):
        return w
    if isinstance(w, PollenPoint):
        return pollen_filter(w)
    if isinstance(w, str):
        w = parse_wavelet(w)
    if w.name == "pollen":
        return pollen_filter(w.point)
    return standard_filter(w)


def parse_wavelet(text: str) -> Wavelet:
    """
    Parse a wavelet name.

    Accepts the named wavelets (``haar``, ``db2``, ``db3``, ``coif1`` and a
    few spelled-out aliases) and ``pollen:A,B`` with angles in radians, or
    ``pollen-pi:A,B`` with angles given as multiples of pi.
    """
    t = text.strip().lower()
    if t in _ALIASES:
        return Wavelet(_ALIASES[t])
    for prefix, scale in (("pollen-pi:", math.pi), ("pollen:", 1.0)):
        if t.startswith(prefix):
            try:
                a, b = (float(v) * scale for v in t[len(prefix):].split(","))
            except ValueError:
                raise InvalidParameterError(f"cannot parse Pollen point from {text!r}") from None
            return Wavelet.pollen(a, b)
    raise InvalidParameterError(f"unknown wavelet {text!r}")


def filter_csv_rows(f: FilterPair) -> Iterable[str]:
    """CSV lines ``k,h_k,g_k`` (with header) for test-vector exchange."""
    yield "k,h_k,g_k"
    for k, (hk, gk) in enumerate(zip(f.h, f.g)):
        yield f"{k},{float(hk)!r},{float(gk)!r}"
