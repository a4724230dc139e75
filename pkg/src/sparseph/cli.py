"""Command-line interface.

    sparseph filtrate INPUT.csv --out DIR
        edge_weights.csv, filtration.csv, betti_curve.csv, betti_curve.json,
        betti_plot.svg, manifest.json
    sparseph compare GROUP1.csv GROUP2.csv --out DIR
        replicate_curves.json, auc.csv, result.json, jackknife_plot.svg,
        manifest.json
    sparseph simulate --study {1,2} --seed S --out DIR
        group1.csv, group2.csv, manifest.json
    sparseph bench --p 548
        timing report on stdout, no files
"""
from __future__ import annotations

import argparse
import csv
import json
import shutil
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

from . import __version__
from .data import DataMatrix, Mode, load_csv, network_weights, write_csv, _fmt
from .errors import SparsePHError
from .filtration import betti_curve, build_filtration, default_domain_max
from .inference import compare_groups_with_curves
from .plot import step_plot_svg
from .sim import RNG_NAME, SimConfig, Stream, simulate_study1, simulate_study2

SCHEMA_VERSION = 1


@dataclass
class RunManifest:
    command: str
    inputs: List[str] = field(default_factory=list)
    mode: Optional[str] = None
    domain_max: Optional[float] = None
    seed: Optional[int] = None
    tool_version: str = __version__
    duration_s: float = 0.0
    outputs: List[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


class _Staging:
    """Collect outputs in a scratch directory and move them into place only on success."""

    def __init__(self, out: Path):
        self.out = out
        self.names: List[str] = []

    def __enter__(self):
        self.out.mkdir(parents=True, exist_ok=True)
        self.tmp = Path(tempfile.mkdtemp(prefix=".staging-", dir=self.out))
        return self

    def path(self, name: str) -> Path:
        self.names.append(name)
        return self.tmp / name

    def __exit__(self, exc_type, exc, tb):
        try:
            if exc_type is None:
                for name in self.names:
                    (self.tmp / name).replace(self.out / name)
        finally:
            shutil.rmtree(self.tmp, ignore_errors=True)
        return False


def _domain_arg(args, mode, weights_max):
    if args.domain_max is not None:
        return args.domain_max
    return 1.0 if mode is Mode.CORRELATION else weights_max


def cmd_filtrate(args) -> int:
    t0 = time.perf_counter()
    mode = Mode.parse(args.mode)
    X = load_csv(args.input, has_header=args.header)
    w = network_weights(X, mode)
    f = build_filtration(w)
    dom = _domain_arg(args, mode, default_domain_max(w, mode))
    curve = betti_curve(f, dom)
    with _Staging(Path(args.out)) as st:
        write_csv(st.path("edge_weights.csv"), w.weights, header=list(X.col_labels))
        with st.path("filtration.csv").open("w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["level", "lambda"])
            for i, v in enumerate(f.level_values()):
                wr.writerow([i, _fmt(v)])
        curve.to_csv(st.path("betti_curve.csv"))
        st.path("betti_curve.json").write_text(curve.to_json() + "\n", encoding="utf-8")
        st.path("betti_plot.svg").write_text(
            step_plot_svg([(curve, "group1")], title=f"beta0 plot ({mode.value})", legend=[Path(args.input).name]),
            encoding="utf-8",
        )
        manifest = RunManifest(
            "filtrate",
            [str(args.input)],
            mode.value,
            dom,
            outputs=list(st.names),
            extra={"n": X.n, "p": X.p, "levels": f.levels},
        )
        manifest.duration_s = time.perf_counter() - t0
        st.path("manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")
    print(f"wrote {len(st.names)} files to {args.out}; {f.levels} filtration levels")
    return 0


def cmd_compare(args) -> int:
    t0 = time.perf_counter()
    mode = Mode.parse(args.mode)
    X = load_csv(args.input1, has_header=args.header)
    Y = load_csv(args.input2, has_header=args.header)
    result, cx, cy = compare_groups_with_curves(X, Y, mode, args.domain_max)
    dom = result.auc_group1.domain_max
    with _Staging(Path(args.out)) as st:
        curves = {
            "domain_max": dom,
            "group1": [[[l, b] for l, b in c.breakpoints] for c in cx],
            "group2": [[[l, b] for l, b in c.breakpoints] for c in cy],
        }
        st.path("replicate_curves.json").write_text(json.dumps(curves) + "\n", encoding="utf-8")
        with st.path("auc.csv").open("w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["group", "removed_subject", "auc"])
            for label, sample in (("group1", result.auc_group1), ("group2", result.auc_group2)):
                for i, a in enumerate(sample.areas, start=1):
                    wr.writerow([label, i, _fmt(a)])
        st.path("result.json").write_text(result.to_json() + "\n", encoding="utf-8")
        series = [(c, "group1") for c in cx] + [(c, "group2") for c in cy]
        st.path("jackknife_plot.svg").write_text(
            step_plot_svg(
                series,
                title="leave-one-out beta0 plots",
                legend=[Path(args.input1).name, Path(args.input2).name],
                stroke_width=0.8,
            ),
            encoding="utf-8",
        )
        manifest = RunManifest(
            "compare",
            [str(args.input1), str(args.input2)],
            mode.value,
            dom,
            outputs=list(st.names),
            extra={"n": X.n, "m": Y.n, "p": X.p},
        )
        manifest.duration_s = time.perf_counter() - t0
        st.path("manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")
    print(result.summary())
    return 0


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    cfg = SimConfig(
        n=args.n, m=args.m, p=args.p, noise_sd=args.noise_sd,
        dependency_coefficient=args.dependency, seed=args.seed,
    )
    X, Y = (simulate_study1 if args.study == 1 else simulate_study2)(cfg)
    with _Staging(Path(args.out)) as st:
        write_csv(st.path("group1.csv"), X.values)
        write_csv(st.path("group2.csv"), Y.values)
        manifest = RunManifest(
            "simulate",
            seed=cfg.seed,
            outputs=list(st.names),
            extra={"study": args.study, "config": cfg.to_dict(), "rng": RNG_NAME},
        )
        manifest.duration_s = time.perf_counter() - t0
        st.path("manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")
    print(f"study {args.study}: wrote {X.n}x{X.p} and {Y.n}x{Y.p} matrices to {args.out}")
    return 0


def run_bench(p: int, n: int = 54, seed: int = 0) -> dict:
    """Time normalize -> weights -> filtration -> Betti curve on N(0,1) data."""
    if p < 2:
        raise SparsePHError(f"bench needs p >= 2, got {p}")
    X = DataMatrix(Stream(seed).normal((n, p)))
    t0 = time.perf_counter()
    w = network_weights(X)
    f = build_filtration(w)
    curve = betti_curve(f)
    elapsed = time.perf_counter() - t0
    return {"p": p, "n": n, "seed": seed, "levels": f.levels, "beta0_at_0": int(curve.betti[0]), "seconds": elapsed}


def cmd_bench(args) -> int:
    report = run_bench(args.p, args.n, args.seed)
    print(" ".join(f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}" for k, v in report.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparseph", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=[m.value for m in Mode], default="correlation")
        p.add_argument("--domain-max", type=float, default=None,
                       help="integration/plot upper limit (default 1 for correlation, max weight for covariance)")
        p.add_argument("--header", action="store_true", help="first CSV row holds node labels")
        p.add_argument("--out", required=True)

    p = sub.add_parser("filtrate", help="Betti curve of one group",
                       description="Writes edge_weights.csv, filtration.csv, betti_curve.csv, "
                                   "betti_curve.json, betti_plot.svg, manifest.json.")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_filtrate)

    p = sub.add_parser("compare", help="jackknife + rank-sum comparison of two groups",
                       description="Writes replicate_curves.json, auc.csv, result.json, "
                                   "jackknife_plot.svg, manifest.json.")
    p.add_argument("input1")
    p.add_argument("input2")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="generate simulation study data",
                       description="Writes group1.csv, group2.csv, manifest.json.")
    p.add_argument("--study", type=int, choices=[1, 2], required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--noise-sd", type=float, default=0.05)
    p.add_argument("--dependency", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time the filtration pipeline on random data")
    p.add_argument("--p", type=int, default=548)
    p.add_argument("--n", type=int, default=54)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SparsePHError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
