"""Command-line interface.

Subcommands: run1d, run2d, cellprobe, dump-coeff.  Experiments are driven
by a JSON config file (see harness.DESK_DEFAULTS_*) with flag overrides;
every run directory receives the CSV outputs plus a manifest.json echoing
the config and the byte-file checksum.

Draw schedule: each experiment re-opens the byte file and consumes pairs
from offset 0; 1D runs draw interval widths and values alternately, 2D
random-sines runs draw wave angles and phases alternately.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from homoglab import bytestream, harness
from homoglab.coeff1d import CASE_EPS, build_coeff_1d, max_draws_1d
from homoglab.errors import HomoglabError


def _common_flags(sub):
    sub.add_argument("--config", type=Path, help="JSON experiment config")
    sub.add_argument(
        "--random-bytes",
        type=Path,
        default=None,
        help="byte file feeding the random sequence (default: shipped fixture)",
    )
    sub.add_argument("--out-dir", type=Path, default=Path("out"))
    sub.add_argument("--threads", type=int, default=1, help="workers for cell sweeps")
    sub.add_argument(
        "--paper-scale",
        action="store_true",
        help="use publication-scale grid defaults (hours, not CI)",
    )


def _load_config(path: Path | None) -> dict | None:
    return json.loads(path.read_text()) if path else None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="homoglab", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("run1d", "run2d"):
        _common_flags(subs.add_parser(name))

    probe = subs.add_parser("cellprobe", help="solve one cell window from a CSV")
    probe.add_argument("window_csv", type=Path)
    probe.add_argument("--out-store", type=Path, default=None)

    dump = subs.add_parser("dump-coeff", help="sample a coefficient to CSV")
    dump.add_argument("--dim", type=int, choices=(1, 2), default=1)
    dump.add_argument("--case", default="a2", choices=sorted(CASE_EPS))
    dump.add_argument("--kind", default="random-sines", choices=("random-sines", "mingyue"))
    dump.add_argument("--n-sin", type=int, default=64)
    dump.add_argument("--resolution", type=int, default=2048)
    dump.add_argument("--random-bytes", type=Path, default=None)
    dump.add_argument("--out", type=Path, default=Path("coeff.csv"))

    args = parser.parse_args(argv)
    try:
        if args.command in ("run1d", "run2d"):
            byte_path = args.random_bytes or bytestream.default_byte_path()
            runner = harness.run1d if args.command == "run1d" else harness.run2d
            kwargs = {"paper_scale": args.paper_scale}
            if args.command == "run2d":
                kwargs["threads"] = args.threads
            runner(_load_config(args.config), byte_path, args.out_dir, **kwargs)
        elif args.command == "cellprobe":
            harness.cellprobe(args.window_csv, args.out_store)
        else:
            _dump_coeff(args)
    except (HomoglabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _dump_coeff(args) -> None:
    byte_path = args.random_bytes or bytestream.default_byte_path()
    with open(args.out, "w", newline="") as fh:
        if args.dim == 1:
            rng = bytestream.open_stream(byte_path)
            bytestream.validate_budget(rng, max_draws_1d(args.case))
            coeff = build_coeff_1d(args.case, rng)
            xs = np.linspace(0.0, 1.0, args.resolution + 1)
            fh.write("x,value\n")
            for x, v in zip(xs, coeff(xs)):
                fh.write(f"{float(x)!r},{float(v)!r}\n")
        else:
            coeff = harness.build_2d_coeff(
                {"kind": args.kind, "n_sin": args.n_sin}, byte_path
            )
            xs = (np.arange(args.resolution) + 0.5) / args.resolution
            vals = coeff(xs[:, None], xs[None, :])
            fh.write("x,y,value\n")
            for i, x in enumerate(xs):
                for j, y in enumerate(xs):
                    fh.write(f"{float(x)!r},{float(y)!r},{float(vals[i, j])!r}\n")


if __name__ == "__main__":
    sys.exit(main())
