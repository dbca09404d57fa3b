"""Compare the numba and pure-numpy enumeration kernels.

    python benchmarks/bench_kernels.py --plain 9 10 --signed 7 8 --repeat 3

Each row reports the best wall time over ``--repeat`` runs (after one warm-up
call that triggers JIT compilation) and checks that both backends produce the
same histogram.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from parity_descents import kernels


def best_time(kind: str, n: int, backend: str, repeat: int, jobs: int) -> tuple[float, np.ndarray]:
    kernels.histogram(kind, min(n, 4), backend=backend)  # warm-up / JIT
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernels.histogram(kind, n, backend=backend, jobs=jobs)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--plain", type=int, nargs="*", default=[8, 9, 10])
    ap.add_argument("--signed", type=int, nargs="*", default=[6, 7, 8])
    ap.add_argument("--andre", type=int, nargs="*", default=[8, 9])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)

    if not kernels.numba_available():
        print("numba is not installed; only the numpy backend can run")
        return 1

    print(f"{'kernel':<8} {'n':>3} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  agree")
    for kind, ns in (("plain", args.plain), ("signed", args.signed), ("andre", args.andre)):
        for n in ns:
            t_nb, h_nb = best_time(kind, n, "numba", args.repeat, args.jobs)
            t_np, h_np = best_time(kind, n, "numpy", args.repeat, args.jobs)
            agree = np.array_equal(h_nb, h_np)
            print(f"{kind:<8} {n:>3} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>8.1f}  {agree}")
            if not agree:
                return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
