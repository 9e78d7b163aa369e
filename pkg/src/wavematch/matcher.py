"""
PRD surfaces over the Pollen plane, their minima, and the averaged optimum.

Each grid point (a, b) is turned into a 6-tap filter, J0 is chosen from
that wavelet's own center frequency (or fixed), the signal is compressed
at every requested ratio and the PRD is recorded.  Grid points are
independent, so rows are farmed out to worker processes and reassembled in
order; the result does not depend on the worker count.
"""
from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .cascade import correlate_shapes, wavelet_shape
from .compress import compress_coeffs
from .errors import InvalidParameterError, NoMinimumError, WavematchError
from .filterbank import NAMED_WAVELETS, PollenPoint, Wavelet, filter_pair
from .scales import DEFAULT_SAMPLE_PERIOD, center_frequency, select_levels
from .transform import check_signal, dwt, max_levels

__all__ = [
    "GridSpec",
    "Minimum",
    "PrdSurface",
    "MatchResult",
    "WORKERS_ENV",
    "REFERENCE_OPTIMA",
    "worker_count",
    "point_prd",
    "standard_prd",
    "prd_surfaces",
    "prd_surface",
    "locate_minimum",
    "aggregate",
    "correlation_report",
    "table_units_check",
    "match_recordings",
]

WORKERS_ENV = "WAVEMATCH_WORKERS"

# published optima (a*, b*) per compression ratio; the unit (radians or
# multiples of pi) is settled by table_units_check
REFERENCE_OPTIMA = {
    "canine": {3: (0.4329, -0.2608), 5: (0.4323, -0.2638), 7: (0.4323, -0.2700), 10: (0.4293, -0.2736)},
    "human": {3: (0.3976, -0.2335), 5: (0.4293, -0.2550), 7: (0.4276, -0.2551), 10: (0.4279, -0.2600)},
}


def worker_count(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, int(workers))


@dataclass(frozen=True)
class GridSpec:
    a_range: tuple = (-math.pi, math.pi)
    b_range: tuple = (-math.pi, math.pi)
    resolution: int = 129

    def __post_init__(self):
        if int(self.resolution) < 1:
            raise InvalidParameterError(f"grid resolution must be >= 1, got {self.resolution}")
        for lo, hi in (self.a_range, self.b_range):
            if not (-math.pi <= lo <= hi <= math.pi):
                raise InvalidParameterError(f"grid range ({lo}, {hi}) must lie within [-pi, pi]")
            if self.resolution > 1 and lo == hi:
                raise InvalidParameterError("grid ranges must be non-degenerate")

    @classmethod
    def at(cls, a: float, b: float) -> "GridSpec":
        """A single-point grid."""
        return cls((a, a), (b, b), 1)

    @property
    def a_values(self) -> np.ndarray:
        return np.linspace(self.a_range[0], self.a_range[1], self.resolution)

    @property
    def b_values(self) -> np.ndarray:
        return np.linspace(self.b_range[0], self.b_range[1], self.resolution)

    @property
    def steps(self) -> tuple:
        n = max(self.resolution - 1, 1)
        return ((self.a_range[1] - self.a_range[0]) / n, (self.b_range[1] - self.b_range[0]) / n)

    def to_dict(self) -> dict:
        return {"a_range": list(self.a_range), "b_range": list(self.b_range),
                "resolution": self.resolution}


@dataclass(frozen=True, order=True)
class Minimum:
    prd_percent: float
    a: float
    b: float

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "prd_percent": self.prd_percent}


@lru_cache(maxsize=65536)
def _pollen_levels(a: float, b: float, f_c: float, sample_period: float, max_level: int) -> int:
    return select_levels(center_frequency(PollenPoint(a, b)), sample_period, f_c, max_level)


def point_prd(signals: Sequence[np.ndarray], wavelet, crs: Sequence[float], f_c: float,
              sample_period: float = DEFAULT_SAMPLE_PERIOD,
              levels: Optional[int] = None) -> np.ndarray:
    """
    Mean PRD over ``signals`` for one wavelet at each ratio in ``crs``.

    With ``levels=None`` J0 comes from the wavelet's center frequency.
    Numerical failures give NaN rather than raising.
    """
    out = np.zeros(len(crs))
    try:
        f = filter_pair(wavelet)
        for x in signals:
            j_max = max_levels(len(x))
            if levels is not None:
                j0 = levels
            elif isinstance(wavelet, PollenPoint):
                j0 = _pollen_levels(wavelet.a, wavelet.b, f_c, sample_period, j_max)
            else:
                j0 = select_levels(center_frequency(wavelet), sample_period, f_c, j_max)
            c = dwt(x, f, j0)
            for i, cr in enumerate(crs):
                out[i] += compress_coeffs(x, c, f, cr).prd_percent
    except (WavematchError, FloatingPointError, ValueError):
        return np.full(len(crs), np.nan)
    return out / len(signals)


def standard_prd(signals, wavelet, cr, f_c, sample_period=DEFAULT_SAMPLE_PERIOD, levels=None) -> float:
    return float(point_prd(signals, wavelet, [cr], f_c, sample_period, levels)[0])


def _rows_task(args):
    signals, a_vals, b_vals, crs, f_c, sample_period, levels = args
    block = np.empty((len(a_vals), len(b_vals), len(crs)))
    for i, a in enumerate(a_vals):
        for j, b in enumerate(b_vals):
            block[i, j] = point_prd(signals, PollenPoint(a, b), crs, f_c, sample_period, levels)
    return block


@dataclass(eq=False)
class PrdSurface:
    """
    PRD (percent) on a grid; ``values[i, j]`` belongs to (a_values[i], b_values[j]).
    """

    grid: GridSpec
    values: np.ndarray
    cr: float
    levels_policy: str = "per-point"
    objective: Optional[Callable[[float, float], float]] = field(default=None, repr=False)
    refined: Optional[Minimum] = None

    @property
    def minimum(self) -> Minimum:
        return _grid_minimum(self)

    def csv_lines(self):
        yield "a,b,prd_percent"
        for i, a in enumerate(self.grid.a_values):
            for j, b in enumerate(self.grid.b_values):
                yield f"{float(a)!r},{float(b)!r},{float(self.values[i, j])!r}"

    def summary(self) -> dict:
        out = {"cr": self.cr, "grid": self.grid.to_dict(), "levels_policy": self.levels_policy,
               "minimum": self.minimum.to_dict()}
        if self.refined is not None:
            out["refined_minimum"] = self.refined.to_dict()
        return out


def _as_signal_list(x) -> list:
    if isinstance(x, np.ndarray) and x.ndim == 1:
        return [check_signal(x)]
    return [check_signal(s) for s in x]


def _policy_name(levels: Optional[int]) -> str:
    return "per-point" if levels is None else f"fixed:{int(levels)}"


def prd_surfaces(x, grid: GridSpec, crs: Sequence[float], f_c: float,
                 sample_period: float = DEFAULT_SAMPLE_PERIOD, levels: Optional[int] = None,
                 workers: Optional[int] = None) -> dict:
    """
    PRD surfaces for several compression ratios from one pass over the grid.

    ``x`` is one signal or a group of equal-role signals whose PRDs are
    averaged.  ``f_c`` is the dominant frequency in Hz.  Returns a dict
    mapping each ratio to its :class:`PrdSurface`.
    """
    signals = _as_signal_list(x)
    crs = [float(c) for c in crs]
    a_vals, b_vals = grid.a_values, grid.b_values
    n_workers = min(worker_count(workers), len(a_vals))
    chunks = np.array_split(np.arange(len(a_vals)), n_workers)
    tasks = [(signals, a_vals[idx], b_vals, crs, f_c, sample_period, levels) for idx in chunks]
    if n_workers == 1:
        blocks = [_rows_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(n_workers) as pool:
            blocks = list(pool.map(_rows_task, tasks))
    cube = np.concatenate(blocks, axis=0)

    def objective(a, b, _cr=None):
        return float(point_prd(signals, PollenPoint(a, b), [_cr], f_c, sample_period, levels)[0])

    out = {}
    for k, cr in enumerate(crs):
        out[cr] = PrdSurface(grid, cube[:, :, k].copy(), cr, _policy_name(levels),
                             objective=lambda a, b, _cr=cr: objective(a, b, _cr))
    return out


def prd_surface(x, grid: GridSpec, cr: float, f_c: float, sample_period: float = DEFAULT_SAMPLE_PERIOD,
                levels: Optional[int] = None, workers: Optional[int] = None) -> PrdSurface:
    """PRD surface at a single compression ratio."""
    return prd_surfaces(x, grid, [cr], f_c, sample_period, levels, workers)[float(cr)]


def _better(cand: Minimum, best: Optional[Minimum]) -> bool:
    if not math.isfinite(cand.prd_percent):
        return False
    if best is None or cand.prd_percent < best.prd_percent:
        return True
    return cand.prd_percent == best.prd_percent and (cand.a, cand.b) < (best.a, best.b)


def _grid_minimum(s: PrdSurface) -> Minimum:
    v = np.asarray(s.values, dtype=float)
    if not np.any(np.isfinite(v)):
        raise NoMinimumError("surface has no finite value")
    i, j = np.unravel_index(np.nanargmin(v), v.shape)  # first in row-major order
    return Minimum(float(v[i, j]), float(s.grid.a_values[i]), float(s.grid.b_values[j]))


def locate_minimum(s: PrdSurface, refine: bool = False,
                   objective: Optional[Callable[[float, float], float]] = None,
                   rounds: int = 3, points: int = 9, shrink: float = 4.0) -> Minimum:
    """
    Global grid minimum, optionally refined by nested local grids.

    Each refinement round evaluates a ``points`` x ``points`` grid spanning
    plus/minus the current half-width around the incumbent, starting at one
    grid step and shrinking by ``shrink`` per round.  Candidates replace the
    incumbent only when strictly better, or equal with smaller (a, b).
    """
    best = _grid_minimum(s)
    if not refine:
        return best
    fn = objective or s.objective
    if fn is None:
        raise InvalidParameterError("refinement needs an objective function")
    (a_lo, a_hi), (b_lo, b_hi) = s.grid.a_range, s.grid.b_range
    wa, wb = s.grid.steps
    for _ in range(rounds):
        a_c, b_c = best.a, best.b
        a_pts = np.clip(np.linspace(a_c - wa, a_c + wa, points), a_lo, a_hi)
        b_pts = np.clip(np.linspace(b_c - wb, b_c + wb, points), b_lo, b_hi)
        for a in a_pts:
            for b in b_pts:
                cand = Minimum(float(fn(float(a), float(b))), float(a), float(b))
                if _better(cand, best):
                    best = cand
        wa, wb = wa / shrink, wb / shrink
    s.refined = best
    return best


def aggregate(minima) -> tuple:
    """Component-wise arithmetic mean of (a, b) minima."""
    pts = np.array([(m.a, m.b) if isinstance(m, Minimum) else tuple(m)[:2] for m in minima], dtype=float)
    if len(pts) == 0:
        raise InvalidParameterError("cannot aggregate an empty list of minima")
    spread = pts.max(axis=0) - pts.min(axis=0)
    if np.any(spread > math.pi):
        warnings.warn("minima differ by more than pi; the plain mean ignores angle wrap-around",
                      RuntimeWarning, stacklevel=2)
    a, b = pts.mean(axis=0)
    return float(a), float(b)


def correlation_report(w, depth: int = 10) -> dict:
    """Shape correlation of ``w`` against each named wavelet."""
    shape = wavelet_shape(w, depth)
    return {name: correlate_shapes(shape, wavelet_shape(Wavelet(name), depth))
            for name in NAMED_WAVELETS}


def table_units_check(cr: int = 3, depth: int = 10) -> dict:
    """
    Decide whether the published optima are radians or multiples of pi.

    Both readings of the canine and human optima at ``cr`` are correlated
    with Daubechies-3; the reading with the larger minimum correlation wins.
    """
    db3 = wavelet_shape(Wavelet("db3"), depth)
    scores = {}
    for unit, scale in (("radians", 1.0), ("pi-normalized", math.pi)):
        scores[unit] = {
            species: correlate_shapes(wavelet_shape(Wavelet.pollen(a * scale, b * scale), depth), db3)
            for species, (a, b) in ((s, REFERENCE_OPTIMA[s][cr]) for s in ("canine", "human"))
        }
    chosen = max(scores, key=lambda u: min(scores[u].values()))
    return {"cr": cr, "interpretation": chosen, "correlation_vs_db3": scores}


@dataclass(eq=False)
class MatchResult:
    cr: float
    per_recording_minima: list
    optimum: tuple
    recording_ids: list = field(default_factory=list)
    standard_prd: dict = field(default_factory=dict)
    correlation_vs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "cr": self.cr,
            "per_recording_minima": [
                {"recording": rid, **m.to_dict()}
                for rid, m in zip(self.recording_ids, self.per_recording_minima)
            ],
            "optimum": {"a": self.optimum[0], "b": self.optimum[1],
                        "a_over_pi": self.optimum[0] / math.pi,
                        "b_over_pi": self.optimum[1] / math.pi},
            "standard_prd": self.standard_prd,
            "correlation_vs": self.correlation_vs,
        }


def match_recordings(recordings: dict, crs: Sequence[float], f_c: float,
                     grid: Optional[GridSpec] = None, refine: bool = True,
                     sample_period: float = DEFAULT_SAMPLE_PERIOD, levels: Optional[int] = None,
                     workers: Optional[int] = None, depth: int = 10):
    """
    Run the full matching procedure.

    ``recordings`` maps an id to one signal or a list of signals (averaged
    into one surface).  Returns ``(results, surfaces)`` where ``results`` is
    one :class:`MatchResult` per ratio and ``surfaces[rid][cr]`` holds each
    recording's surface.
    """
    grid = grid or GridSpec()
    crs = [float(c) for c in crs]
    surfaces = {}
    minima = {cr: [] for cr in crs}
    std = {cr: {} for cr in crs}
    for rid, sig in recordings.items():
        signals = _as_signal_list(sig)
        surf = prd_surfaces(signals, grid, crs, f_c, sample_period, levels, workers)
        surfaces[rid] = surf
        for cr in crs:
            minima[cr].append(locate_minimum(surf[cr], refine=refine))
            std[cr][rid] = {name: standard_prd(signals, Wavelet(name), cr, f_c, sample_period, levels)
                            for name in NAMED_WAVELETS}
    results = []
    for cr in crs:
        opt = aggregate(minima[cr])
        results.append(MatchResult(
            cr=cr,
            per_recording_minima=minima[cr],
            optimum=opt,
            recording_ids=list(recordings),
            standard_prd=std[cr],
            correlation_vs=correlation_report(PollenPoint(*opt), depth),
        ))
    return results, surfaces


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"
