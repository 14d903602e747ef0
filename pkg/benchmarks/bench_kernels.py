"""Compare the compiled kernel backend against the pure Python fallback.

Times the three kernel-bound workloads (mixture quantile inversion,
vectorized Lambert W, adaptive log-moment quadrature) plus one
end-to-end optimum search, on each available backend.  Run from the
repository root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from pricebound import _backend, lambert_w, log_expectation, optimal_revenue
from pricebound.dsl import build

_MIX = "mix(0.3*lognormal(0.1,0.8), 0.3*pareto(2.2,0.7), 0.2*uniform(0.4,1.9), 0.2*exponential(1.1))"


def _bench(fn, repeat: int = 7) -> float:
    fn()  # warm up caches and lazy imports
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    d = build(_MIX)
    u = np.linspace(1.0 / 4097.0, 4096.0 / 4097.0, 4096)
    x = np.linspace(-np.exp(-1.0), 100.0, 10**6)
    return [
        ("mixture quantile, 4096 pts", lambda: d._quantile(u)),
        ("lambert W, 1e6 pts", lambda: lambert_w(x)),
        ("log-moment quadrature", lambda: log_expectation(d)),
        ("optimal revenue search", lambda: optimal_revenue(d)),
    ]


def main() -> None:
    backends = _backend.available_backends()
    if "compiled" not in backends:
        print("note: compiled backend unavailable; timing the python backend only")
    times: dict = {}
    for name in backends:
        _backend.use(name)
        for label, fn in workloads():
            times[(name, label)] = _bench(fn)
    _backend.use(backends[0])

    width = max(len(label) for label, _ in workloads())
    header = f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, _ in workloads():
        row = f"{label:<{width}}  "
        for b in backends:
            row += f"{times[(b, label)] * 1e3:>10.2f}ms"
        if len(backends) > 1:
            row += f"{times[('python', label)] / times[('compiled', label)]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
