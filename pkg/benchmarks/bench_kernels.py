"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--points 20000] [--order 60] [--repeat 5]

Prints one row per kernel with the best-of-``repeat`` wall time for each
backend, the speed-up, and the largest difference between the two
(relative for entries above 1, absolute below).
"""

import argparse
import timeit

import numpy as np

from quietzone import _backend


def cases(points, order, rng):
    r = rng.uniform(0.05, 4.0, points)
    t = rng.uniform(0.0, 2 * np.pi, points)
    xs, ys = r * np.cos(t), r * np.sin(t)
    c = rng.normal(size=2 * order + 1) + 1j * rng.normal(size=2 * order + 1)
    z = rng.uniform(0.01, 60.0, points)
    # damp high orders so the outgoing sum stays finite near the centre
    c_out = c / (1.0 + np.abs(np.arange(-order, order + 1))) ** 8
    return {
        "j_table": lambda m: m.j_table(order, z),
        "jy_table": lambda m: m.jy_table(order, z)[1],
        "regular_sum": lambda m: m.regular_sum(xs, ys, 0.0, 0.0, 2.0, c),
        "outgoing_sum": lambda m: m.outgoing_sum(xs, ys, 0.0, 0.0, 2.0, c_out),
    }


def rel_diff(a, b):
    """Largest ``|a - b| / max(|a|, 1)`` over entries finite in both."""
    a, b = np.asarray(a), np.asarray(b)
    ok = np.isfinite(a) & np.isfinite(b)
    return float((np.abs(a[ok] - b[ok]) / np.maximum(np.abs(a[ok]), 1.0)).max())


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=20000)
    p.add_argument("--order", type=int, default=60)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    names = _backend.available()
    mods = {n: _backend.load(n) for n in names}
    if "cython" not in mods:
        print("compiled kernels not built; only the fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"points={args.points} order={args.order} repeat={args.repeat}")
    print(f"{'kernel':14s}" + "".join(f"{n + ' [s]':>14s}" for n in names) + f"{'speed-up':>10s}{'max diff':>11s}")
    for label, fn in cases(args.points, args.order, rng).items():
        times = {n: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) for n, m in mods.items()}
        row = f"{label:14s}" + "".join(f"{times[n]:14.4f}" for n in names)
        if len(mods) == 2:
            speed = times["python"] / times["cython"]
            diff = rel_diff(fn(mods["cython"]), fn(mods["python"]))
            row += f"{speed:10.1f}x{diff:11.1e}"
        print(row)


if __name__ == "__main__":
    main()
