"""Timing comparison of the compiled and pure-Python integration kernels.

Runs each RK4 entry point and the 4x4 Jacobi eigensolver through both
backends on identical inputs and prints per-call timings.  Usage:

    python benchmarks/bench_kernels.py [steps]
"""

from __future__ import annotations

import math
import sys
import time

from spinpair._kernels import _pykernels

try:
    from spinpair._kernels import _cykernels
except ImportError:
    _cykernels = None

# two-term drive tuples: (a1, b1, p1, a2, b2, p2, offset)
_FIELD = (2.0, 50.0, math.pi / 50, 0.0, 0.0, 0.0, 0.0)
_COUPLING = (1.0, 50.0, math.pi / 50, 0.0, 0.0, 0.0, 0.0)
_DIAG = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3)
_ZERO = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

_BLOCK = _FIELD + _COUPLING + _DIAG
_FULL = _FIELD + _ZERO + _COUPLING + _ZERO + _DIAG
_IC2 = (4.0, 10.0, math.pi / 50, 0.1, 0.0, 1.0) + _ZERO


def _time(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def _bench(name: str, pyfn, cyfn, args) -> None:
    py = _time(pyfn, *args)
    if cyfn is None:
        print(f"{name:20s} python {py * 1e3:9.2f} ms   (no compiled backend)")
        return
    cy = _time(cyfn, *args)
    print(
        f"{name:20s} python {py * 1e3:9.2f} ms   compiled {cy * 1e3:9.2f} ms"
        f"   speedup {py / cy:6.1f}x"
    )


def main() -> None:
    steps = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    cy = _cykernels
    print(f"steps per integration call: {steps}")
    _bench(
        "rk4_block_profiles",
        _pykernels.rk4_block_profiles,
        None if cy is None else cy.rk4_block_profiles,
        (_BLOCK, 1.0 + 0.0j, 0.0j, 0.0, 10.0, steps),
    )
    _bench(
        "rk4_full_profiles",
        _pykernels.rk4_full_profiles,
        None if cy is None else cy.rk4_full_profiles,
        (_FULL, 0.5 + 0.0j, 0.5 + 0.0j, 0.5 + 0.0j, 0.5 + 0.0j, 0.0, 10.0, steps),
    )
    _bench(
        "rk4_block_ic2",
        _pykernels.rk4_block_ic2,
        None if cy is None else cy.rk4_block_ic2,
        (_IC2, 1.0 + 0.0j, 0.0j, 0.0, 0.3, steps),
    )
    matrix = (
        2.0, 0.3, 0.1, 0.0,
        0.3, 1.0, 0.2, 0.4,
        0.1, 0.2, -1.0, 0.6,
        0.0, 0.4, 0.6, 0.5,
    )
    n = 20_000
    t0 = time.perf_counter()
    for _ in range(n):
        _pykernels.jacobi_eigh4(matrix)
    py = (time.perf_counter() - t0) / n
    if cy is None:
        print(f"{'jacobi_eigh4':20s} python {py * 1e6:9.2f} us   (no compiled backend)")
    else:
        t0 = time.perf_counter()
        for _ in range(n):
            cy.jacobi_eigh4(matrix)
        cyt = (time.perf_counter() - t0) / n
        print(
            f"{'jacobi_eigh4':20s} python {py * 1e6:9.2f} us   compiled"
            f" {cyt * 1e6:9.2f} us   speedup {py / cyt:6.1f}x"
        )


if __name__ == "__main__":
    main()
