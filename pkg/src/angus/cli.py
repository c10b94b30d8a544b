"""Command-line front end.

Verbs: process (single file), sweep (alpha x k grid), control (alpha_c
smoothing or profile transplant), analyze (metrics to CSV), normalize
(RMS level), serve (live session with the control socket).
"""
from __future__ import annotations

import argparse
import sys

from .batch import (DEFAULT_ALPHA_CS, Manifest, SweepGrid, run_analysis,
                    run_angus_sweep, run_control_sweep)
from .control import (ControlParams, extract_pulse_model, interpolate_model,
                      resynthesize, transplant_profile)
from .engine import AngusParams, ModulatorSpec
from .io import dbfs_to_rms, load_wav, normalize_rms, save_wav, trim_center
from .pipeline import DEFAULT_BLOCK_SIZE, process_stream


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="angus",
        description="Real-time vocal roughness: transformation, smoothing, analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("process", help="transform one file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--fcut-mult", type=float, default=4.0)
    p.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)
    p.add_argument("--trim-center", type=float, default=None, metavar="SECONDS",
                   help="keep only the middle SECONDS of the input first")

    p = sub.add_parser("sweep", help="transform files over an alpha x k grid")
    p.add_argument("--inputs", required=True, nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--grid", default=None,
                   help="e.g. 'alpha=0.25,0.5,0.75,1.0;k=2,3,4,5;h=1.0'")
    p.add_argument("--manifest", default=None)
    p.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)

    p = sub.add_parser("control", help="smooth by alpha_c or transplant a profile")
    p.add_argument("--inputs", required=True, nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--alpha-c", type=float, nargs="+", default=list(DEFAULT_ALPHA_CS))
    p.add_argument("--profile-from", default=None, metavar="WAV",
                   help="graft this file's jitter/shimmer profile instead of smoothing")
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("analyze", help="measure files, write a CSV report")
    p.add_argument("--inputs", required=True, nargs="+")
    p.add_argument("--csv", required=True)
    p.add_argument("--manifest", default=None,
                   help="join sweep parameters onto the rows")

    p = sub.add_parser("normalize", help="set a file's RMS level")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--target-dbfs", type=float, default=-20.0)

    p = sub.add_parser("serve", help="run the live engine with a control socket")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--in", dest="input", required=True, metavar="DEV|WAV")
    p.add_argument("--out", dest="output", required=True, metavar="DEV|WAV")
    p.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)
    p.add_argument("--sample-rate", type=int, default=44100)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--realtime", action="store_true",
                   help="pace file streaming at real time")
    p.add_argument("--ui", default=None, metavar="DIR",
                   help="serve this directory as the control panel")
    return parser


def parse_grid(text: str | None) -> SweepGrid:
    """'alpha=0.25,0.5;k=2,3;h=1.0' -> SweepGrid (missing parts keep defaults)."""
    if not text:
        return SweepGrid()
    kwargs = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        name, _, values = part.partition("=")
        name = name.strip().lower()
        items = [v for v in values.split(",") if v.strip()]
        if name == "alpha":
            kwargs["alphas"] = tuple(float(v) for v in items)
        elif name == "k":
            kwargs["ks"] = tuple(int(v) for v in items)
        elif name == "h":
            kwargs["h"] = float(values)
        elif name == "alpha_c":
            kwargs["alpha_cs"] = tuple(float(v) for v in items)
        else:
            raise ValueError(f"unknown grid axis {name!r}")
    return SweepGrid(**kwargs)


def _report_failures(manifest: Manifest) -> int:
    for failure in manifest.failures:
        print(f"error: {failure['source']} {failure['params']}: {failure['error']}",
              file=sys.stderr)
    return 1 if manifest.failures else 0


# ---------------------------------------------------------------------------
# Verb implementations
# ---------------------------------------------------------------------------

def _cmd_process(args) -> int:
    signal = load_wav(args.input)
    if args.trim_center is not None:
        signal = trim_center(signal, args.trim_center)
    params = AngusParams(alpha=args.alpha, fcut_multiplier=args.fcut_mult,
                         modulators=(ModulatorSpec(k=args.k, h=args.h),))
    save_wav(process_stream(signal, params, args.block), args.output)
    return 0


def _cmd_sweep(args) -> int:
    manifest = run_angus_sweep(args.inputs, parse_grid(args.grid),
                               args.out_dir, args.block)
    if args.manifest:
        manifest.write(args.manifest)
    print(f"wrote {len(manifest.outputs)} files to {args.out_dir}")
    return _report_failures(manifest)


def _cmd_control(args) -> int:
    import os

    if args.profile_from is None:
        manifest = run_control_sweep(args.inputs, tuple(args.alpha_c), args.out_dir)
        if args.manifest:
            manifest.write(args.manifest)
        print(f"wrote {len(manifest.outputs)} files to {args.out_dir}")
        return _report_failures(manifest)

    os.makedirs(args.out_dir, exist_ok=True)
    profile = extract_pulse_model(load_wav(args.profile_from))
    manifest = Manifest()
    for path in args.inputs:
        meta = {"profile_from": args.profile_from}
        out_path = os.path.join(
            args.out_dir,
            os.path.splitext(os.path.basename(path))[0] + "_xsyn.wav")
        try:
            signal = load_wav(path)
            grafted = transplant_profile(extract_pulse_model(signal), profile)
            save_wav(resynthesize(grafted, signal), out_path)
            manifest.add_ok(path, "control", meta, out_path)
        except Exception as exc:
            manifest.add_error(path, "control", meta, exc)
    if args.manifest:
        manifest.write(args.manifest)
    print(f"wrote {len(manifest.outputs)} files to {args.out_dir}")
    return _report_failures(manifest)


def _cmd_analyze(args) -> int:
    manifest = Manifest.read(args.manifest) if args.manifest else None
    rows = run_analysis(args.inputs, args.csv, manifest)
    bad = [r for r in rows if "error" in r]
    for row in bad:
        print(f"error: {row['file']}: {row['error']}", file=sys.stderr)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 1 if bad else 0


def _cmd_normalize(args) -> int:
    block = load_wav(args.input)
    save_wav(normalize_rms(block, dbfs_to_rms(args.target_dbfs)), args.output)
    return 0


def _cmd_serve(args) -> int:
    from .server import StreamConfig, run_server, start_stream

    config = StreamConfig(input=args.input, output=args.output,
                          sample_rate=args.sample_rate, block_size=args.block,
                          realtime_pacing=args.realtime)
    initial = AngusParams(alpha=args.alpha,
                          modulators=(ModulatorSpec(k=args.k, h=args.h),))
    session = start_stream(config, initial)
    print(f"stream running ({'file' if config.file_mode else 'device'} mode); "
          f"control socket on ws://127.0.0.1:{args.port}/ws")
    run_server(session, args.port, ui_dir=args.ui)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "process": _cmd_process,
        "sweep": _cmd_sweep,
        "control": _cmd_control,
        "analyze": _cmd_analyze,
        "normalize": _cmd_normalize,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
