"""Time the numba kernels against their numpy fallbacks.

Usage::

    python3 benchmarks/bench_kernels.py [--size 10000] [--repeat 5]

Both backends are called directly, so the ``SLOCC224_DISABLE_NUMBA`` flag does
not matter here.  Results are checked for agreement before timing.
"""
import argparse
import timeit

import numpy as np

from slocc224 import _kernels as k


def cases(size, rng):
    def c(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    t222, t223, m4 = c(size, 2, 2, 2), c(size, 2, 2, 3), c(size, 4, 4)
    x = c(4, 4)
    return [
        ("hdet222", f"{size} stacks", lambda: k.hdet222_numpy(t222), lambda: k.hdet222_numba(t222)),
        ("hdet223", f"{size} stacks", lambda: k.hdet223_numpy(t223), lambda: k.hdet223_numba(t223)),
        ("det_batch", f"{size} 4x4", lambda: k.det_batch_numpy(m4), lambda: k.det_batch_numba(m4)),
        ("pauli_twirl", "one 4x4", lambda: k.pauli_twirl_numpy(x), lambda: k.pauli_twirl_numba(x, k.PAULI_PAIRS)),
    ]


def best(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if not k.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':<12} {'input':<14} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for name, what, f_np, f_nb in cases(args.size, np.random.default_rng(args.seed)):
        a, b = f_np(), f_nb()  # also triggers compilation
        scale = max(1.0, float(np.max(np.abs(a))))
        assert np.allclose(a, b, rtol=1e-10, atol=1e-10 * scale), name
        t_np, t_nb = best(f_np, args.repeat), best(f_nb, args.repeat)
        print(f"{name:<12} {what:<14} {t_np * 1e3:>10.3f}ms {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
