"""Time each table kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py --dims 5 7 11 13 --repeat 20

numba timings exclude the first (compiling) call.
"""
import argparse
import timeit

from meanking import _kernels


def cases(d):
    mub = _kernels.mub_table(d)
    lines = _kernels.line_table(d)
    points = _kernels.point_table(mub)
    psi = lines[1].copy()
    return {
        "mub_table": lambda: _kernels.mub_table(d),
        "line_table": lambda: _kernels.line_table(d),
        "incidence_table": lambda: _kernels.incidence_table(d),
        "point_table": lambda: _kernels.point_table(mub),
        "overlap_probabilities": lambda: _kernels.overlap_probabilities(points, lines),
        "branch_probabilities": lambda: _kernels.branch_probabilities(psi, mub[2], lines),
    }


def bench(d, repeat):
    rows = {}
    for backend in ("numba", "numpy"):
        _kernels.set_backend(backend)
        for name, fn in cases(d).items():
            fn()  # warm-up (and JIT compile)
            best = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.setdefault(name, {})[backend] = best
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[5, 7, 11, 13])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'d':>3}  {'kernel':<22} {'numba [us]':>11} {'numpy [us]':>11} {'speedup':>8}")
    for d in args.dims:
        for name, t in bench(d, args.repeat).items():
            print(f"{d:>3}  {name:<22} {t['numba'] * 1e6:>11.1f} {t['numpy'] * 1e6:>11.1f} "
                  f"{t['numpy'] / t['numba']:>7.2f}x")


if __name__ == "__main__":
    main()
