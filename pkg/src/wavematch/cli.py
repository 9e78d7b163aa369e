"""
Command-line front end.

Subcommands: gen, scales, compress, surface, match, wavefun.  Options may
also come from a ``key=value`` file given with ``--config``; command-line
flags take precedence.  The number of worker processes is read from
WAVEMATCH_WORKERS unless ``--workers`` is given.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .cascade import wavelet_shape
from .compress import CSV_HEADER, DEFAULT_CR_SET, compress_coeffs
from .errors import InvalidParameterError, WavematchError
from .filterbank import NAMED_WAVELETS, filter_pair, parse_wavelet
from .matcher import (GridSpec, dumps, locate_minimum, match_recordings, prd_surfaces,
                      table_units_check)
from .recording import (PRESETS, center_trim, load_recording, parse_segment,
                        synthetic_recording, write_recording)
from .scales import DEFAULT_SAMPLE_PERIOD, center_frequency, scale_selection, select_levels, species_fc_cpm
from .transform import coeff_csv_rows, dwt, max_levels

log = logging.getLogger("wavematch")


def _cr_list(text: str) -> list:
    try:
        crs = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad compression ratio list {text!r}") from None
    if not crs or any(not math.isfinite(c) or c < 1 for c in crs):
        raise argparse.ArgumentTypeError("compression ratios must be finite and >= 1")
    return crs


def _float_list(text: str) -> tuple:
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _name_list(text: str) -> list:
    return [v.strip() for v in str(text).split(",") if v.strip()]


def _cr_tag(cr: float) -> str:
    return f"{cr:g}"


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment, keys use - or _."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}: line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise InvalidParameterError(f"not a boolean: {text!r}")


def _add_fc(p):
    p.add_argument("--species", choices=sorted(PRESETS), default="canine")
    p.add_argument("--fc-cpm", type=float, default=None,
                   help="dominant frequency in cycles per minute (default from --species)")
    p.add_argument("--sample-period", type=float, default=DEFAULT_SAMPLE_PERIOD,
                   help="seconds per sample (default 0.1)")


def _add_input(p, many=False):
    if many:
        p.add_argument("inputs", nargs="*", help="recording CSV files")
    else:
        p.add_argument("input", help="recording CSV file")
    p.add_argument("--channels", type=_name_list, default=None, help="comma-separated channel names")
    p.add_argument("--segment", default=None, help="start:end sample bounds applied before trimming")


def _add_surface_opts(p):
    p.add_argument("--cr", type=_cr_list, default=list(DEFAULT_CR_SET))
    p.add_argument("--grid", type=int, default=129, help="points per axis over [-pi, pi]")
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--levels", type=int, default=None, help="fixed J0 instead of per-wavelet selection")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out-dir", default=".")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavematch", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None, help="key=value option file")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write synthetic slow-wave recordings")
    p.add_argument("--species", choices=sorted(PRESETS), default="canine")
    p.add_argument("--dominant-cpm", type=float, default=None)
    p.add_argument("--harmonics", type=_float_list, default=None)
    p.add_argument("--noise", type=float, default=None)
    p.add_argument("--duration", type=float, default=None, help="seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1, help="number of recording files")
    p.add_argument("--n-channels", type=int, default=1)
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("scales", help="report the number of decomposition scales")
    p.add_argument("--wavelet", type=_name_list, default=list(NAMED_WAVELETS))
    p.add_argument("--max-level", type=int, default=12)
    _add_fc(p)

    p = sub.add_parser("compress", help="compress channels and report PRD")
    _add_input(p)
    p.add_argument("--wavelet", default="db3")
    p.add_argument("--cr", type=_cr_list, default=list(DEFAULT_CR_SET))
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--dump-coeffs", default=None, help="directory for level,index,value CSVs")
    _add_fc(p)

    p = sub.add_parser("surface", help="PRD surfaces over the Pollen plane")
    _add_input(p)
    _add_surface_opts(p)
    _add_fc(p)

    p = sub.add_parser("match", help="per-recording minima and averaged optimum")
    _add_input(p, many=True)
    _add_surface_opts(p)
    _add_fc(p)
    p.add_argument("--per", choices=("channel", "subject"), default="channel",
                   help="one minimum per channel or per recording file")
    p.add_argument("--synthetic", type=int, default=0,
                   help="use this many seeded synthetic recordings instead of files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--export", choices=("first", "all"), default="first",
                   help="which recordings' surfaces to write")

    p = sub.add_parser("wavefun", help="cascade approximation of a wavelet")
    p.add_argument("--wavelet", default="db3")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--out", default=None)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    # --config may appear anywhere; config values become subcommand defaults
    argv_list = list(sys.argv[1:] if argv is None else argv)
    config_path = None
    for i, tok in enumerate(argv_list):
        if tok == "--config" and i + 1 < len(argv_list):
            config_path = argv_list[i + 1]
        elif tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
    if config_path:
        cfg = read_config(config_path)
        for action in parser._subparsers._group_actions:
            for subparser in action.choices.values():
                known = {a.dest for a in subparser._actions}
                subparser.set_defaults(**{k: v for k, v in cfg.items() if k in known})
    args = parser.parse_args(argv_list)
    if hasattr(args, "refine"):
        args.refine = _bool(args.refine)
    return args


def _fc_cpm(args) -> float:
    return args.fc_cpm if args.fc_cpm is not None else species_fc_cpm(args.species)


def _load_channels(path, args) -> tuple:
    """Channel name -> power-of-two signal, after segment cut and center trim."""
    rec = load_recording(path, args.sample_period).select(args.channels)
    if args.segment:
        rec = rec.cut(*parse_segment(args.segment))
    out = {}
    for name, x in rec.channels.items():
        trimmed, start, stop = center_trim(x)
        if len(trimmed) != len(x):
            log.info("%s:%s trimmed to samples %d:%d", rec.subject, name, start, stop)
        out[name] = np.ascontiguousarray(trimmed)
    return rec.subject, out


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="\n") as fh:
        fh.write(text)


def cmd_gen(args) -> int:
    base = PRESETS[args.species]
    overrides = {k: v for k, v in (("dominant_cpm", args.dominant_cpm), ("harmonics", args.harmonics),
                                   ("noise_level", args.noise), ("duration_s", args.duration))
                 if v is not None}
    spec = replace(base, seed=args.seed, **overrides)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        s = replace(spec, seed=args.seed + i * args.n_channels)
        rec = synthetic_recording(s, args.n_channels, subject=f"synth_{i + 1:02d}")
        path = out_dir / f"synth_{i + 1:02d}.csv"
        write_recording(path, rec)
        print(path)
    return 0


def cmd_scales(args) -> int:
    fc = _fc_cpm(args)
    for name in args.wavelet:
        sel = scale_selection(parse_wavelet(name), fc, args.sample_period, args.max_level)
        print("\n".join(sel.report_lines()))
        print()
    return 0


def cmd_compress(args) -> int:
    wavelet = parse_wavelet(args.wavelet)
    f = filter_pair(wavelet)
    f_c = _fc_cpm(args) / 60.0
    subject, channels = _load_channels(args.input, args)
    lines = []
    for name, x in channels.items():
        j0 = args.levels or select_levels(center_frequency(wavelet), args.sample_period, f_c,
                                          max_levels(len(x)))
        c = dwt(x, f, j0)
        lines.append(f"# {subject}:{name} wavelet={wavelet.label} J0={j0} N={len(x)}")
        lines.append(CSV_HEADER)
        for cr in args.cr:
            lines.append(compress_coeffs(x, c, f, cr).csv_row())
        if args.dump_coeffs:
            _write(Path(args.dump_coeffs) / f"coeffs_{subject}_{name}.csv",
                   "\n".join(coeff_csv_rows(c)) + "\n")
    print("\n".join(lines))
    return 0


def _grid(args) -> GridSpec:
    if args.grid < 1:
        raise InvalidParameterError("--grid must be >= 1")
    return GridSpec(resolution=args.grid)


def _export_surface(out_dir: Path, stem: str, surface) -> None:
    _write(out_dir / f"{stem}.csv", "\n".join(surface.csv_lines()) + "\n")
    _write(out_dir / f"{stem}.json", dumps(surface.summary()))


def cmd_surface(args) -> int:
    f_c = _fc_cpm(args) / 60.0
    subject, channels = _load_channels(args.input, args)
    grid = _grid(args)
    pending = []
    for name, x in channels.items():
        surfs = prd_surfaces(x, grid, args.cr, f_c, args.sample_period, args.levels, args.workers)
        for cr, s in surfs.items():
            m = locate_minimum(s, refine=args.refine)
            print(f"{subject}:{name} cr={_cr_tag(cr)} min a={m.a:.6f} b={m.b:.6f} prd={m.prd_percent:.6f}")
            pending.append((f"surface_{subject}_{name}_cr{_cr_tag(cr)}", s))
    out_dir = Path(args.out_dir)
    for stem, s in pending:
        _export_surface(out_dir, stem, s)
    return 0


def _match_inputs(args) -> dict:
    recordings = {}
    if args.synthetic:
        base = PRESETS[args.species]
        for i in range(args.synthetic):
            x = synthetic_recording(replace(base, seed=args.seed + i)).channels["ch1"]
            recordings[f"synth_{i + 1:02d}"] = center_trim(x)[0]
        return recordings
    if not args.inputs:
        raise InvalidParameterError("match needs input files or --synthetic N")
    for path in args.inputs:
        subject, channels = _load_channels(path, args)
        if args.per == "subject":
            recordings[subject] = list(channels.values())
        else:
            for name, x in channels.items():
                recordings[f"{subject}:{name}"] = x
    return recordings


def _summary_text(results, fc_cpm, units) -> str:
    lines = [f"dominant frequency: {fc_cpm:g} cpm", ""]
    for r in results:
        a, b = r.optimum
        lines.append(f"CR {_cr_tag(r.cr)}: optimum a*={a:.4f} b*={b:.4f} "
                     f"(a*/pi={a / math.pi:.4f}, b*/pi={b / math.pi:.4f})")
        for rid, m in zip(r.recording_ids, r.per_recording_minima):
            best_std = min(r.standard_prd[rid].items(), key=lambda kv: kv[1])
            lines.append(f"  {rid}: a={m.a:.4f} b={m.b:.4f} prd={m.prd_percent:.4f}% "
                         f"(best standard {best_std[0]} {best_std[1]:.4f}%)")
        corr = ", ".join(f"{k} {v:.4f}" for k, v in r.correlation_vs.items())
        lines.append(f"  shape correlation: {corr}")
    lines.append("")
    lines.append(f"published optima units: {units['interpretation']}")
    return "\n".join(lines) + "\n"


def cmd_match(args) -> int:
    fc_cpm = _fc_cpm(args)
    recordings = _match_inputs(args)
    grid = _grid(args)
    results, surfaces = match_recordings(recordings, args.cr, fc_cpm / 60.0, grid, args.refine,
                                         args.sample_period, args.levels, args.workers)
    units = table_units_check()
    report = {
        "angle_units": "radians",
        "cr_set": [float(c) for c in args.cr],
        "f_c_cpm": fc_cpm,
        "grid": grid.to_dict(),
        "refine": bool(args.refine),
        "levels_policy": "per-point" if args.levels is None else f"fixed:{args.levels}",
        "per": args.per,
        "reports": [r.to_dict() for r in results],
        "table_units": units,
    }
    out_dir = Path(args.out_dir)
    exported = list(surfaces) if args.export == "all" else list(surfaces)[:1]
    for rid in exported:
        for cr, s in surfaces[rid].items():
            stem = f"surface_cr{_cr_tag(cr)}" if args.export == "first" else \
                f"surface_{rid.replace(':', '_')}_cr{_cr_tag(cr)}"
            _export_surface(out_dir, stem, s)
    _write(out_dir / "match.json", dumps(report))
    summary = _summary_text(results, fc_cpm, units)
    _write(out_dir / "summary.txt", summary)
    sys.stdout.write(summary)
    return 0


def cmd_wavefun(args) -> int:
    shape = wavelet_shape(parse_wavelet(args.wavelet), args.depth)
    text = "t,psi\n" + "".join(f"{float(t)!r},{float(v)!r}\n" for t, v in zip(shape.t, shape.samples))
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "scales": cmd_scales,
    "compress": cmd_compress,
    "surface": cmd_surface,
    "match": cmd_match,
    "wavefun": cmd_wavefun,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except WavematchError as exc:
        print(f"wavematch: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (WavematchError, OSError) as exc:
        print(f"wavematch: error: {exc}", file=sys.stderr)
        return 1

