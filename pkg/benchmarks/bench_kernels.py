"""Time the compiled and pure-Python graph kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

from plab import kernels
from plab.ball_graph import ProductShape

CASES = [
    ("scan", ((2, 2), (2, 2), (2, 2))),
    ("scan", ((2, 2), (2, 1), (1, 2))),
    ("max_clique", ((2, 2), (2, 2), (2, 2))),
    ("max_clique", ((2, 2), (2, 2), (1, 1), (1, 1))),
    ("homs", ((1, 1), (1, 1))),
    ("homs", ((1, 0), (1, 0), (1, 0))),
]


def _job(mod, kind, adj, n):
    if kind == "scan":
        return lambda: mod.scan_clique_extensions(adj, 2**n - 1)
    if kind == "max_clique":
        return lambda: mod.max_clique(adj)
    return lambda: mod.count_injective_homomorphisms(adj)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = sorted(kernels.BACKENDS)
    print(f"{'kernel':<11} {'shape':<34} {'verts':>5}  " + "  ".join(f"{n:>10}" for n in names)
          + ("     speedup" if len(names) == 2 else ""))
    for kind, comps in CASES:
        shape = ProductShape.of(*comps)
        adj = shape.conormal_bitsets
        times = []
        for name in names:
            fn = _job(kernels.get_backend(name), kind, adj, shape.n)
            times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)))
        row = f"{kind:<11} {str(comps):<34} {shape.num_vertices:>5}  " + "  ".join(f"{t:>9.4f}s" for t in times)
        if len(names) == 2:
            row += f"  {times[names.index('python')] / times[names.index('cython')]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
