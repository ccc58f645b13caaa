"""Experiment orchestration: configs, draw scheduling, CSV/manifest output.

Draw schedule: every experiment re-opens the byte file and draws from
offset 0 (1D: interval widths/values; 2D: wave angles/phases).  All CSV
output is written with repr() floats in a fixed row order, so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np
import scipy

import homoglab
from homoglab import bytestream, fem2d, metrics, upscale
from homoglab.coeff1d import PiecewiseConstantCoeff1D, Rhs1D, build_coeff_1d, max_draws_1d
from homoglab.coeff2d import ConstantCoeff2D, MingyueCoeff, RandomSinesCoeff
from homoglab.errors import HomoglabError
from homoglab.oned import EffectiveField1D, ExtensionSpec1D, correct_1d, errors_1d, solve_exact_1d

DESK_DEFAULTS_1D = {
    "cases": ["a2f1"],
    "extensions": [{"kind": "c"}],
    "eps_bars": [0.016, 0.008, 0.004, 0.002],
    "n_sol": 1_000_000,
}
PAPER_SCALE_1D = {"n_sol": 64_000_000}

DESK_DEFAULTS_2D = {
    "coefficient": {"kind": "random-sines", "n_sin": 64, "contrast": 1.0e4},
    "n_list": [8, 16, 32, 64, 128],
    "k": 2,
    "n_ref": 1024,
    "n_c": None,  # per-grid default via default_cell_grid
    "n_cs": None,
    "f_const": 10.0,
    "save_cell_store": False,
    "save_tensor_field": False,
    "compare_coarse_cells": False,
}
PAPER_SCALE_2D = {"n_ref": 4096}


def _merge_config(defaults: dict, config: dict | None, paper_scale: bool, paper: dict):
    merged = dict(defaults)
    if paper_scale:
        merged.update(paper)
    if config:
        merged.update({k: v for k, v in config.items() if v is not None})
    return merged


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, (float, np.floating)) else str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _manifest(out_dir: Path, config: dict, byte_path: Path, timings: dict) -> None:
    payload = {
        "config": config,
        "byte_file": str(byte_path),
        "byte_sha256": hashlib.sha256(byte_path.read_bytes()).hexdigest(),
        "versions": {
            "homoglab": homoglab.__version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "kernel_backend": homoglab.KERNEL_BACKEND,
        },
        "run_stats": {k: round(float(v), 6) for k, v in timings.items()},
    }
    (out_dir / "manifest.json").write_text(json.dumps(payload, indent=2) + "\n")


def build_2d_coeff(spec: dict, byte_path: Path):
    kind = spec.get("kind", "random-sines")
    if kind == "constant":
        return ConstantCoeff2D(float(spec.get("value", 1.0)))
    if kind == "mingyue":
        return MingyueCoeff()
    if kind == "random-sines":
        rng = bytestream.open_stream(byte_path)
        n_sin = int(spec.get("n_sin", 64))
        bytestream.validate_budget(rng, 2 * n_sin)
        return RandomSinesCoeff.from_stream(
            n_sin, rng, float(spec.get("contrast", 1.0e4))
        )
    raise ValueError(f"unknown 2D coefficient kind {kind!r}")


def run1d(config: dict | None, byte_path, out_dir, paper_scale=False, log=print):
    """1D sweep: for each case, extension and averaging size, compare the
    averaged and corrected solutions against the fine-scale one."""
    cfg = _merge_config(DESK_DEFAULTS_1D, config, paper_scale, PAPER_SCALE_1D)
    byte_path = Path(byte_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_sol = int(cfg["n_sol"])
    timings = {}
    rows = []
    for case_pair in cfg["cases"]:
        coeff_case, rhs_case = case_pair[:-2], case_pair[-2:]
        t0 = time.perf_counter()
        if coeff_case == "unit":
            # Smoke configuration: coefficient identically 1, no draws.
            coeff = PiecewiseConstantCoeff1D(np.array([0.25, 0.75]), np.array([1.0]))
        else:
            rng = bytestream.open_stream(byte_path)
            bytestream.validate_budget(rng, max_draws_1d(coeff_case))
            coeff = build_coeff_1d(coeff_case, rng)
        rhs = Rhs1D(rhs_case)
        fine = solve_exact_1d(coeff, rhs, 0.0, 0.0, n_sol)
        for ext in cfg["extensions"]:
            for eps_bar in cfg["eps_bars"]:
                spec = ExtensionSpec1D(ext["kind"], float(eps_bar), int(ext.get("k", 1)))
                try:
                    field = EffectiveField1D.build(coeff, spec)
                    avg = solve_exact_1d(field.averaged, rhs, 0.0, 0.0, n_sol)
                    corrected = correct_1d(avg, field)
                    e2, einf = errors_1d(avg.u, fine.u)
                    e2h, einfh = errors_1d(corrected, fine.u)
                except HomoglabError as exc:
                    log(f"run1d {case_pair} {spec.label()} eps={eps_bar}: {exc}")
                    continue
                rows.append(
                    (case_pair, eps_bar, spec.label(), spec.k, n_sol, e2, einf, e2h, einfh)
                )
        timings[case_pair] = time.perf_counter() - t0
    _write_csv(
        out_dir / "curves1d.csv",
        ["case", "epsbar", "extension", "k", "N_sol", "E2", "Einf", "E2hat", "Einfhat"],
        rows,
    )
    _manifest(out_dir, cfg, byte_path, timings)
    return rows


def _center_samples(coeff, n: int) -> np.ndarray:
    t = (np.arange(n) + 0.5) / n
    return coeff(t[:, None], t[None, :])


def run2d_curves(config: dict | None, byte_path, paper_scale=False, threads=1, log=print):
    """Compute the 2D error curves; returns (curve records, contrast rows,
    per-grid artifacts, timings)."""
    cfg = _merge_config(DESK_DEFAULTS_2D, config, paper_scale, PAPER_SCALE_2D)
    byte_path = Path(byte_path)
    coeff = build_2d_coeff(cfg["coefficient"], byte_path)
    n_ref = int(cfg["n_ref"])
    f_const = float(cfg["f_const"])
    k = int(cfg["k"])
    meta = cfg["coefficient"].get("kind", "random-sines")
    if meta == "random-sines":
        meta = f"nsin{cfg['coefficient'].get('n_sin', 64)}"

    timings = {}
    t0 = time.perf_counter()
    u_ref = fem2d.solve_dirichlet(n_ref, _center_samples(coeff, n_ref), 0.0,
                                  _center_samples(coeff, n_ref), f_const)
    timings["u_ref"] = time.perf_counter() - t0
    t_ref = np.linspace(0.0, 1.0, n_ref + 1)
    q1, q2 = t_ref[:, None], t_ref[None, :]

    records = []
    contrast_rows = []
    artifacts = {}
    for n in cfg["n_list"]:
        n = int(n)
        h = 1.0 / n
        t0 = time.perf_counter()
        tag = f"{meta};Nc=?;Nref={n_ref}"
        try:
            if n != n_ref:
                direct = fem2d.solve_dirichlet(
                    n, _center_samples(coeff, n), 0.0, _center_samples(coeff, n), f_const
                )
                e2, einf = metrics.relative_errors(
                    metrics.restrict_to_reference(direct, n_ref), u_ref
                )
                records.append(metrics.CurveRecord(h, "c1", "L2", e2, tag))
                records.append(metrics.CurveRecord(h, "c1", "Linf", einf, tag))

            n_c = cfg["n_c"] or upscale.default_cell_grid(coeff.oscillation_count, n, k)
            ucfg = upscale.UpscaleConfig(n=n, k=k, n_c=n_c, n_cs=cfg["n_cs"] or min(n_c, 128))
            tag = f"{meta};Nc={n_c};Nref={n_ref}"
            field = upscale.upscale_field(coeff, ucfg, threads=threads)
            contrast_rows.append((h, ucfg.eps_bar, field.contrast()))

            u_h = upscale.solve_macro(field, "h", f_const)
            hat_h = upscale.correct_2d(u_h, u_h, field, q1, q2)
            e2, einf = metrics.relative_errors(hat_h, u_ref)
            records.append(metrics.CurveRecord(h, "c2", "L2", e2, tag))
            records.append(metrics.CurveRecord(h, "c2", "Linf", einf, tag))

            u_h4 = upscale.solve_macro(field, "h4", f_const)
            hat_h4 = upscale.correct_2d(u_h4, u_h4[::4, ::4], field, q1, q2)
            e2, einf = metrics.relative_errors(hat_h4, u_ref)
            records.append(metrics.CurveRecord(h, "c3", "L2", e2, tag))
            records.append(metrics.CurveRecord(h, "c3", "Linf", einf, tag))
            artifacts[n] = field

            if cfg["compare_coarse_cells"] and n_c >= 32:
                coarse_cfg = upscale.UpscaleConfig(
                    n=n, k=k, n_c=n_c // 2, n_cs=min(n_c // 2, int(ucfg.n_cs))
                )
                coarse = upscale.upscale_field(coeff, coarse_cfg, threads=threads)
                denom = np.linalg.norm(np.stack([field.a11, field.a12, field.a22]))
                diff = np.linalg.norm(
                    np.stack([field.a11 - coarse.a11, field.a12 - coarse.a12,
                              field.a22 - coarse.a22])
                )
                u_h_c = upscale.solve_macro(coarse, "h", f_const)
                timings[f"tensor_reldiff_n{n}"] = diff / denom
                timings[f"macro_reldiff_n{n}"] = float(
                    np.max(np.abs(u_h_c - u_h)) / np.max(np.abs(u_h))
                )
        except HomoglabError as exc:
            log(f"run2d n={n}: {exc}")
            records.append(metrics.CurveRecord(h, "c2", "L2", float("nan"), f"{tag};failed"))
        timings[f"n={n}"] = time.perf_counter() - t0
    return records, contrast_rows, artifacts, timings, cfg


def run2d(config: dict | None, byte_path, out_dir, paper_scale=False, threads=1, log=print):
    """Full 2D experiment with CSV and manifest output."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records, contrast_rows, artifacts, timings, cfg = run2d_curves(
        config, byte_path, paper_scale, threads, log
    )
    _write_csv(
        out_dir / "curves.csv",
        ["experiment", "h", "curve", "norm", "value", "meta"],
        [("run2d", r.h, r.curve, r.norm, r.value, r.meta) for r in records],
    )
    _write_csv(out_dir / "contrast.csv", ["h", "epsbar", "CA"], contrast_rows)
    if cfg["save_cell_store"]:
        for n, field in artifacts.items():
            upscale.save_cell_store(field, out_dir / f"cells_n{n}.bin")
    if cfg["save_tensor_field"]:
        for n, field in artifacts.items():
            _write_csv(
                out_dir / f"tensors_n{n}.csv",
                ["i1", "i2", "A11", "A12", "A22"],
                upscale.tensor_field_csv_rows(field),
            )
    _manifest(out_dir, cfg, Path(byte_path), timings)
    return records, contrast_rows


def cellprobe(window_csv, out_store=None, log=print):
    """Solve both cell problems for one window given as a CSV of samples."""
    samples = np.loadtxt(window_csv, delimiter=",", ndmin=2)
    w1, w2 = fem2d.solve_cell_pair(samples)
    tensor = fem2d.averaged_tensor(samples, w1, w2)
    lo = float(samples.size / np.sum(1.0 / samples))
    hi = float(samples.mean())
    eigs = tensor.eigenvalues()
    sym = tensor.sym
    log(f"A11={float(sym[0, 0])!r} A12={float(sym[0, 1])!r} A22={float(sym[1, 1])!r}")
    log(f"asymmetry={float(tensor.asymmetry)!r}")
    log(f"eigenvalues={float(eigs[0])!r},{float(eigs[1])!r} bounds=[{lo!r},{hi!r}]")
    if out_store is not None:
        np.savez(out_store, w1=w1, w2=w2, samples=samples)
    return tensor, w1, w2
