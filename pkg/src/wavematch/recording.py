"""Multichannel CSV recordings, segment cutting and synthetic slow-wave signals."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameterError, RecordingParseError

__all__ = [
    "RecordingFile",
    "SyntheticSpec",
    "PRESETS",
    "load_recording",
    "write_recording",
    "parse_segment",
    "center_trim",
    "synthesize",
    "synthetic_recording",
]

log = logging.getLogger(__name__)

SAMPLE_RATE_HZ = 10.0


@dataclass
class RecordingFile:
    """Channel-synchronized samples sharing one sample period."""

    channels: dict
    sample_period: float = 1.0 / SAMPLE_RATE_HZ
    subject: str = ""
    species: Optional[str] = None
    segment: Optional[tuple] = None

    def __post_init__(self):
        if not self.sample_period > 0:
            raise InvalidParameterError(f"sample period must be positive, got {self.sample_period}")
        lengths = {len(v) for v in self.channels.values()}
        if len(lengths) > 1:
            raise InvalidParameterError(f"channels differ in length: {sorted(lengths)}")

    @property
    def n_samples(self) -> int:
        return len(next(iter(self.channels.values()))) if self.channels else 0

    def select(self, names: Optional[Sequence[str]]) -> "RecordingFile":
        if not names:
            return self
        missing = [n for n in names if n not in self.channels]
        if missing:
            raise InvalidParameterError(f"unknown channels {missing}; have {list(self.channels)}")
        return RecordingFile({n: self.channels[n] for n in names}, self.sample_period,
                             self.subject, self.species, self.segment)

    def cut(self, start: int, stop: int) -> "RecordingFile":
        """Samples ``start:stop`` of every channel."""
        n = self.n_samples
        if not 0 <= start < stop <= n:
            raise InvalidParameterError(f"segment {start}:{stop} outside 0:{n}")
        return RecordingFile({k: v[start:stop] for k, v in self.channels.items()},
                             self.sample_period, self.subject, self.species, (start, stop))


def load_recording(path, sample_period: float = 1.0 / SAMPLE_RATE_HZ, fmt: str = "csv",
                   species: Optional[str] = None) -> RecordingFile:
    """
    Read a CSV with one header row of channel names and one row per sample.

    Raises RecordingParseError naming the offending line and column for
    empty files, ragged rows, and non-numeric or non-finite cells.
    """
    if fmt != "csv":
        raise InvalidParameterError(f"unsupported recording format {fmt!r}")
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise RecordingParseError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if len(set(header)) != len(header):
        raise RecordingParseError(f"{path}: line 1: duplicate channel names")
    data = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != len(header):
            raise RecordingParseError(
                f"{path}: line {line}: expected {len(header)} fields, got {len(row)}")
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise RecordingParseError(
                    f"{path}: line {line}, column {header[j]!r}: not a number: {cell!r}") from None
            if not math.isfinite(value):
                raise RecordingParseError(
                    f"{path}: line {line}, column {header[j]!r}: non-finite value {cell!r}")
            data[i, j] = value
    if len(data) == 0:
        raise RecordingParseError(f"{path}: no sample rows")
    channels = {name: data[:, j].copy() for j, name in enumerate(header)}
    return RecordingFile(channels, sample_period, subject=path.stem, species=species)


def write_recording(path, rec: RecordingFile) -> None:
    names = list(rec.channels)
    cols = np.column_stack([rec.channels[n] for n in names])
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in cols:
            w.writerow([repr(float(v)) for v in row])


def parse_segment(text: str) -> tuple:
    """Parse ``start:end`` sample bounds."""
    try:
        start, stop = (int(v) for v in text.split(":"))
    except ValueError:
        raise InvalidParameterError(f"segment must be start:end in samples, got {text!r}") from None
    return start, stop


def center_trim(x) -> tuple:
    """
    Center window of the largest power-of-two length.

    Returns ``(trimmed, start, stop)``; e.g. 6000 samples keep 952:5048.
    """
    x = np.asarray(x)
    n = len(x)
    if n < 2:
        raise InvalidParameterError(f"need at least 2 samples, got {n}")
    m = 1 << (n.bit_length() - 1)
    start = (n - m) // 2
    if m != n:
        log.info("center-trimmed %d samples to %d:%d", n, start, start + m)
    return x[start:start + m], start, start + m


@dataclass(frozen=True)
class SyntheticSpec:
    """
    Slow-wave test signal: a fundamental at ``dominant_cpm``, harmonics at
    integer multiples with relative amplitudes ``harmonics``, and white
    noise with RMS ``noise_level`` times the clean-signal RMS.
    """

    dominant_cpm: float = 5.0
    harmonics: tuple = (0.35, 0.12)
    noise_level: float = 0.1
    duration_s: float = 410.0
    seed: int = 0
    sample_rate_hz: float = SAMPLE_RATE_HZ

    def __post_init__(self):
        if not self.dominant_cpm > 0:
            raise InvalidParameterError("dominant_cpm must be positive")
        if not self.duration_s > 0 or self.noise_level < 0:
            raise InvalidParameterError("duration must be positive and noise_level non-negative")
        if int(self.duration_s * self.sample_rate_hz) < 2:
            raise InvalidParameterError("duration too short for a single sample pair")


PRESETS = {
    "canine": SyntheticSpec(dominant_cpm=5.0),
    "human": SyntheticSpec(dominant_cpm=3.0),
}


def synthesize(spec: SyntheticSpec) -> np.ndarray:
    """Deterministic samples for ``spec``; the seed fixes phases and noise."""
    rng = np.random.default_rng(spec.seed)
    n = int(round(spec.duration_s * spec.sample_rate_hz))
    t = np.arange(n) / spec.sample_rate_hz
    f0 = spec.dominant_cpm / 60.0
    phases = rng.uniform(0.0, 2 * np.pi, size=1 + len(spec.harmonics))
    x = np.sin(2 * np.pi * f0 * t + phases[0])
    for k, amp in enumerate(spec.harmonics, start=2):
        x += amp * np.sin(2 * np.pi * k * f0 * t + phases[k - 1])
    if spec.noise_level > 0:
        rms = np.sqrt(np.mean(x * x))
        x += spec.noise_level * rms * rng.standard_normal(n)
    return x


def synthetic_recording(spec: SyntheticSpec, channels: int = 1, subject: str = "") -> RecordingFile:
    """``channels`` independent realizations (seeds seed, seed+1, ...)."""
    data = {}
    for c in range(channels):
        data[f"ch{c + 1}"] = synthesize(replace(spec, seed=spec.seed + c))
    return RecordingFile(data, 1.0 / spec.sample_rate_hz, subject=subject)

