"""Batch front end: parameter sweeps, analysis reports, manifests.

Sweeps reproduce the stimulus grids (alpha x k for the roughness
transformation, alpha_c for the smoothing resynthesis); every emitted
file is recorded in a manifest with its parameters and content digest,
and per-file failures never abort a batch.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field

from .control import ControlParams, extract_pulse_model, interpolate_model, resynthesize
from .engine import ALPHA_MAX, AngusParams, ModulatorSpec
from .io import load_wav, save_wav
from .pipeline import DEFAULT_BLOCK_SIZE, process_stream

DEFAULT_ALPHAS = (0.25, 0.5, 0.75, 1.0)
DEFAULT_KS = (2, 3, 4, 5)
DEFAULT_ALPHA_CS = (0.25, 0.5, 0.75, 1.0)

CSV_COLUMNS = ("file", "algorithm", "alpha", "k", "alpha_c",
               "n_pulses", "mean_f0_hz", "local_jitter_pct", "local_shimmer_pct")


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple = DEFAULT_ALPHAS
    ks: tuple = DEFAULT_KS
    h: float = 1.0
    alpha_cs: tuple = DEFAULT_ALPHA_CS

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "ks", tuple(self.ks))
        object.__setattr__(self, "alpha_cs", tuple(self.alpha_cs))
        for a in self.alphas:
            if not (0.0 <= a <= ALPHA_MAX):
                raise ValueError(f"alpha {a} outside [0, {ALPHA_MAX}]")
        for k in self.ks:
            if int(k) != k or k < 2:
                raise ValueError(f"k {k} must be an integer >= 2")
        if not (0.0 <= self.h <= 1.0):
            raise ValueError(f"h {self.h} outside [0, 1]")
        for ac in self.alpha_cs:
            if not (0.0 <= ac <= 1.0):
                raise ValueError(f"alpha_c {ac} outside [0, 1]")


@dataclass
class Manifest:
    """One record per attempted output; sorted, line-delimited JSON on disk."""
    records: list = field(default_factory=list)

    def add_ok(self, source, algorithm, params: dict, output) -> None:
        self.records.append({
            "source": str(source), "algorithm": algorithm, "params": params,
            "output": str(output), "digest": sha256_file(output), "status": "ok",
        })

    def add_error(self, source, algorithm, params: dict, error: Exception) -> None:
        self.records.append({
            "source": str(source), "algorithm": algorithm, "params": params,
            "output": None, "digest": None, "status": "error",
            "error": f"{type(error).__name__}: {error}",
        })

    @property
    def outputs(self) -> list:
        return [r["output"] for r in self.records if r["status"] == "ok"]

    @property
    def failures(self) -> list:
        return [r for r in self.records if r["status"] == "error"]

    def sorted_records(self) -> list:
        return sorted(self.records, key=lambda r: (r["source"], str(r["output"])))

    def write(self, path) -> None:
        with open(path, "w") as f:
            for record in self.sorted_records():
                f.write(json.dumps(record, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> "Manifest":
        with open(path) as f:
            return cls([json.loads(line) for line in f if line.strip()])


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _stem(path) -> str:
    return os.path.splitext(os.path.basename(str(path)))[0]


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def run_angus_sweep(inputs, grid: SweepGrid, out_dir,
                    block_size: int = DEFAULT_BLOCK_SIZE) -> Manifest:
    """One output per input x alpha x k; failures recorded, batch continues."""
    os.makedirs(out_dir, exist_ok=True)
    manifest = Manifest()
    for path in inputs:
        try:
            signal = load_wav(path)
        except Exception as exc:
            for alpha in grid.alphas:
                for k in grid.ks:
                    manifest.add_error(path, "angus",
                                       {"alpha": alpha, "k": k, "h": grid.h}, exc)
            continue
        for alpha in grid.alphas:
            for k in grid.ks:
                params_dict = {"alpha": alpha, "k": k, "h": grid.h}
                out_path = os.path.join(
                    out_dir, f"{_stem(path)}_angus_a{alpha:.2f}_k{k}.wav")
                try:
                    params = AngusParams(
                        alpha=alpha, modulators=(ModulatorSpec(k=k, h=grid.h),))
                    result = process_stream(signal, params, block_size)
                    save_wav(result, out_path)
                    manifest.add_ok(path, "angus", params_dict, out_path)
                except Exception as exc:
                    manifest.add_error(path, "angus", params_dict, exc)
    return manifest


def run_control_sweep(inputs, alpha_cs, out_dir) -> Manifest:
    """One output per input x alpha_c via model extraction and resynthesis."""
    os.makedirs(out_dir, exist_ok=True)
    manifest = Manifest()
    for path in inputs:
        try:
            signal = load_wav(path)
            model = extract_pulse_model(signal)
        except Exception as exc:
            for alpha_c in alpha_cs:
                manifest.add_error(path, "control", {"alpha_c": alpha_c}, exc)
            continue
        for alpha_c in alpha_cs:
            params_dict = {"alpha_c": alpha_c}
            out_path = os.path.join(
                out_dir, f"{_stem(path)}_control_ac{alpha_c:.2f}.wav")
            try:
                smoothed = interpolate_model(model, ControlParams(alpha_c=alpha_c))
                result = resynthesize(smoothed, signal)
                save_wav(result, out_path)
                manifest.add_ok(path, "control", params_dict, out_path)
            except Exception as exc:
                manifest.add_error(path, "control", params_dict, exc)
    return manifest


# ---------------------------------------------------------------------------
# Analysis reports
# ---------------------------------------------------------------------------

def run_analysis(inputs, csv_path, manifest: Manifest | None = None) -> list:
    """Measure each file and write one CSV row per input.

    If a manifest is given, rows inherit the generating algorithm and
    parameters of matching outputs. Failed measurements become rows with
    empty metric cells (and are reported by the CLI); the batch continues.
    """
    from .analysis import analyze  # imported here to keep module load light

    by_output = {}
    if manifest is not None:
        by_output = {r["output"]: r for r in manifest.records if r["status"] == "ok"}

    rows = []
    for path in inputs:
        meta = by_output.get(str(path), {})
        params = meta.get("params", {})
        row = {
            "file": str(path),
            "algorithm": meta.get("algorithm", ""),
            "alpha": params.get("alpha", ""),
            "k": params.get("k", ""),
            "alpha_c": params.get("alpha_c", ""),
            "n_pulses": "", "mean_f0_hz": "",
            "local_jitter_pct": "", "local_shimmer_pct": "",
        }
        try:
            report = analyze(load_wav(path))
            row.update({
                "n_pulses": report.n_pulses,
                "mean_f0_hz": f"{report.mean_f0:.3f}",
                "local_jitter_pct": f"{report.local_jitter_pct:.4f}",
                "local_shimmer_pct": f"{report.local_shimmer_pct:.4f}",
            })
        except Exception as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)

    with open(csv_path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return rows
