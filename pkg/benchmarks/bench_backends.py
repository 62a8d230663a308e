"""Time the bulk RNG kernels on the numba and numpy backends.

Both backends emit bit-identical streams, so the only question is speed.
This script imports the two backend modules side by side, checks equality
on every benchmarked draw, and reports best-of-N wall times. To run a full
simulation on a specific backend instead, set ERASURELAB_BACKEND before
starting Python; the package binds one backend at import time.

Usage: python benchmarks/bench_backends.py [--sizes 4096,1048576] [--repeats 5]
"""

import argparse
import time

import numpy as np

from erasurelab.kernels import backend_numpy

try:
    from erasurelab.kernels import backend_numba
except ImportError:
    backend_numba = None


KERNELS = ("uniforms", "rademacher", "gaussian")


def draw(backend, kernel: str, seed: int, size: int) -> np.ndarray:
    if kernel == "uniforms":
        return backend.uniforms(seed, 0, size)
    if kernel == "rademacher":
        return backend.rademacher(seed, size)
    return backend.gaussian(seed, size)


def best_time(backend, kernel: str, seed: int, size: int, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        draw(backend, kernel, seed, size)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4096,65536,1048576")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=20260818)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    if backend_numba is None:
        print("numba backend not importable; timing numpy alone")
    else:
        for kernel in KERNELS:
            draw(backend_numba, kernel, args.seed, 64)  # trigger JIT before timing

    header = f"{'kernel':<12} {'size':>9} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for kernel in KERNELS:
        for size in sizes:
            t_np = best_time(backend_numpy, kernel, args.seed, size, args.repeats)
            if backend_numba is None:
                print(f"{kernel:<12} {size:>9} {t_np * 1e3:>12.3f} {'n/a':>12} {'n/a':>8}")
                continue
            t_nb = best_time(backend_numba, kernel, args.seed, size, args.repeats)
            same = np.array_equal(
                draw(backend_numpy, kernel, args.seed, size),
                draw(backend_numba, kernel, args.seed, size),
            )
            if not same:
                raise SystemExit(f"backend mismatch on {kernel} at size {size}")
            print(
                f"{kernel:<12} {size:>9} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
                f"{t_np / t_nb:>7.1f}x"
            )
    if backend_numba is not None:
        print("all draws bit-identical across backends")


if __name__ == "__main__":
    main()
