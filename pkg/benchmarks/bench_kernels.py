"""Compare the pure-Python and compiled search kernels.

Both backends walk the identical tree (same value orders, same
propagation queue), so node and propagation counts must match exactly;
only the wall time should differ.  Run from the repo root:

    python3 benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dendrotile.hexgrid import Region, canonical_bases
from dendrotile.kernel import available_backends
from dendrotile.ruleset import builtin_ruleset
from dendrotile.solver import SolverConfig, count_solutions, solve_region, \
    solve_torus

REPEATS = 3


def best_of(fn):
    best = None
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return out, best


def workloads():
    st12 = builtin_ruleset("st12")
    hextoo6 = builtin_ruleset("hextoo6")

    def region(rs, radius, seed):
        def run(backend):
            cfg = SolverConfig(seed=seed, backend=backend)
            return solve_region(Region.hex(radius), rs, cfg)
        return run

    def scan(rs, max_det):
        def run(backend):
            cfg = SolverConfig(backend=backend)
            return [solve_torus(b, rs, cfg).outcome
                    for b in canonical_bases(max_det)]
        return run

    def count(rs, radius):
        def run(backend):
            cfg = SolverConfig(backend=backend, node_limit=10 ** 15)
            return count_solutions(Region.hex(radius), rs, cfg)
        return run

    yield "st12 region r8 seed0", region(st12, 8, 0)
    yield "st12 region r12 seed1", region(st12, 12, 1)
    yield "hextoo6 region r10 seed0", region(hextoo6, 10, 0)
    yield "st12 torus scan det<=9", scan(st12, 9)
    yield "hextoo6 torus scan det<=16", scan(hextoo6, 16)
    yield "st12 count r1", count(st12, 1)


def main() -> None:
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if backends == ["py"]:
        print("compiled kernel not built; timing the fallback only")
    width = max(len(name) for name, _ in workloads())
    header = f"{'workload':<{width}}  " + "".join(f"{b:>10}" for b in backends)
    print(header)
    print("-" * len(header))
    for name, make in workloads():
        times = []
        results = []
        for b in backends:
            out, dt = best_of(lambda b=b: make(b))
            results.append(out)
            times.append(dt)
        row = f"{name:<{width}}  " + "".join(f"{t * 1e3:9.1f}ms" for t in times)
        if len(backends) == 2:
            row += f"  x{times[0] / max(times[1], 1e-9):.1f}"
        print(row)
        if len(results) == 2:
            a, b = results
            same = a.canonical_bytes() == b.canonical_bytes() \
                if hasattr(a, "canonical_bytes") else a == b
            if not same:
                print(f"  MISMATCH between backends on {name}")
                sys.exit(1)
    print("all backend pairs agreed")


if __name__ == "__main__":
    main()
