"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from cxorder import kernels
from cxorder.fracop import cos_series
from cxorder.solvers import AbelSpec, OscillatorSpec, abel_ode, gen_oscillator_ode


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def rk_case(ode, y0, dy0, t0, t1, h):
    n = int(round((t1 - t0) / h))
    damping, stiffness, forcing = ode.kernel_args()

    def run(backend):
        return kernels.rk4_power_law(ode.order, damping, stiffness, forcing, y0, dy0, t0, h, n,
                                     n // 255 or 1, backend=backend)
    return run


def series_case(n_points):
    s = cos_series(60)
    w = np.linspace(0.1, 20.0, n_points).astype(np.complex128)

    def run(backend):
        return kernels.series_sum(s.coeffs, s.coeffs_lo, w, backend=backend)
    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    abel = abel_ode(AbelSpec(3.1, 0.8, 0.7, 0.5))
    osc = gen_oscillator_ode(OscillatorSpec(-1.21, 7.1, -1.5, 3.5))
    cases = [
        ("rk4 abel, 20k steps", rk_case(abel, 0.5, 0, 0.0, 2.0, 1e-4)),
        ("rk4 oscillator, 99.5k steps", rk_case(osc, 0.1, 0.2, 0.05, 10.0, 1e-4)),
        ("series_sum, 1k points", series_case(1_000)),
        ("series_sum, 20k points", series_case(20_000)),
    ]
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends) +
          ("     speedup" if len(backends) > 1 else ""))
    for name, run in cases:
        ref = None
        times = []
        for b in backends:
            out = run(b)
            if ref is None:
                ref = out
            else:
                a, c = np.asarray(ref[0]), np.asarray(out[0])
                diff = float(np.max(np.abs(a - c)) / max(np.max(np.abs(a)), 1e-300))
                if not diff < 1e-12:
                    print(f"  warning: backends disagree on {name} (rel {diff:.2e})")
            times.append(best_of(lambda: run(b), args.repeat))
        line = f"{name:32s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(times) > 1:
            line += f"{times[1] / times[0]:11.1f}x"
        print(line)
    print(f"active backend: {kernels.BACKEND}")


if __name__ == "__main__":
    main()
