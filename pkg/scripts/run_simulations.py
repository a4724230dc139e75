"""Repeat both simulation studies over many seeds and tabulate p-values.

    python scripts/run_simulations.py --seeds 100
"""
import argparse
import time

import numpy as np

from sparseph import SimConfig, compare_groups, simulate_study1, simulate_study2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--mode", default="correlation")
    args = ap.parse_args()

    for name, study, alpha in (("study 1 (null)", simulate_study1, 0.05), ("study 2 (planted)", simulate_study2, 0.001)):
        t0 = time.perf_counter()
        ps = np.array([compare_groups(*study(SimConfig(seed=s)), mode=args.mode).p_value for s in range(args.seeds)])
        print(
            f"{name}: median p {np.median(ps):.3g}, "
            f"p < {alpha} in {(ps < alpha).sum()}/{args.seeds} seeds, {time.perf_counter() - t0:.1f}s"
        )


if __name__ == "__main__":
    main()
