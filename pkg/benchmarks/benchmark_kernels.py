"""Compare the compiled kernel core against the NumPy fallback.

Run as: python benchmarks/benchmark_kernels.py
"""

import time

import numpy as np

from bbsb import _kernels


def time_call(fn, *args, repeat=5, number=20):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def main():
    rng = np.random.default_rng(0)
    v_short = rng.uniform(0.05, 0.95, 8)
    v_long = rng.uniform(0.05, 0.95, 40)
    support = np.arange(0, 101, dtype=np.int64)

    cases = [
        ("chain_loglik (8 sticks, kappa=100)",
         "chain_loglik", (v_short, 100, 1.0, 1.0)),
        ("chain_loglik (40 sticks, kappa=100)",
         "chain_loglik", (v_long, 100, 1.0, 1.0)),
        ("kappa scan {0..100} (8 sticks)",
         "kappa_support_logliks", (v_short, support, 1.0, 1.0)),
        ("kappa scan {0..100} (40 sticks)",
         "kappa_support_logliks", (v_long, support, 1.0, 1.0)),
        ("step2_logweights (kappa=100)",
         "step2_logweights", (0.3, 100, 1.0, 1.0, 12.0, 30.0)),
        ("pair_logweights (kappa=100)",
         "pair_logweights", (0.3, 0.4, 100, 1.0, 1.0)),
    ]

    backends = {name: _kernels.get_backend(name)
                for name in _kernels.AVAILABLE_BACKENDS}
    print(f"available backends: {', '.join(backends)}")
    header = f"{'kernel':<40}" + "".join(f"{b:>14}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, fn_name, args in cases:
        times = {b: time_call(getattr(mod, fn_name), *args)
                 for b, mod in backends.items()}
        row = f"{label:<40}"
        for b in backends:
            row += f"{times[b] * 1e6:>12.1f}us"
        if "cython" in times and "python" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)

    # agreement sanity
    for label, fn_name, args in cases:
        results = [np.asarray(getattr(mod, fn_name)(*args))
                   for mod in backends.values()]
        for got in results[1:]:
            np.testing.assert_allclose(got, results[0], atol=1e-9)
    print("backend agreement verified (atol 1e-9)")


if __name__ == "__main__":
    main()
