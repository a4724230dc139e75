"""Time the filtration pipeline at the node counts used in the imaging study."""
import sys

from sparseph.cli import run_bench

sizes = [int(a) for a in sys.argv[1:]] or [100, 548, 1856]
for p in sizes:
    r = run_bench(p)
    print(f"p={p:5d}  levels={r['levels']:8d}  {r['seconds']:.3f}s")
