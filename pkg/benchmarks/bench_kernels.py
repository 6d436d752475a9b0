"""Time the numba and numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from ionotto import _kernels
from ionotto.model import ModelParams, build_h1, field_operator


def bench(label, fn, repeat, number):
    fn()  # warm-up (JIT compile, caches)
    best = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
    print(f"{label:<34s} {best * 1e6:12.1f} us")
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(1)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    a = (a + a.conj().T) / 2
    p = ModelParams(j=5, b=10, omega=1, k=0.1, kbt_h=3.5)
    z = field_operator()
    h0 = build_h1(p) - np.diag(p.b * z)

    cases = [
        ("jacobi 8x8", lambda f: (lambda: f(a)), "jacobi_eigh", 200),
        ("ramp propagator, 2000 slices", lambda f: (lambda: f(h0, z, 10.0, 5.0, 1000.0, 2000)),
         "ramp_propagator", 1),
    ]
    print(f"active backend: {_kernels.BACKEND}")
    for name, make, kernel, number in cases:
        t_np = bench(f"{name} [numpy]", make(getattr(_kernels, kernel + "_numpy")),
                     args.repeat, number)
        jit = getattr(_kernels, kernel + "_jit")
        if jit is None:
            print(f"{name} [numba]: unavailable")
            continue
        t_jit = bench(f"{name} [numba]", make(jit), args.repeat, number)
        print(f"{'':<34s} speed-up x{t_np / t_jit:.0f}")


if __name__ == "__main__":
    main()
