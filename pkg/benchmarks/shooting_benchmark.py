"""Benchmark the shooting kernel: numba @njit vs pure-Python fallback.

The kernel integrates the cell ODE once per trial energy; a spectrum scan
evaluates it hundreds to thousands of times, so this loop dominates
oracle runtime.  Run:

    python benchmarks/shooting_benchmark.py

Setting SCARF_NO_NUMBA=1 in the environment makes the package itself use
the fallback path everywhere; this script always times both.
"""

import math
import time

from scarf import PotentialParams, ShootingConfig
from scarf.kernels import NUMBA_ENABLED, shoot_halfcell_py, _shoot_halfcell_jit
from scarf.oracle import frobenius_exponent, frobenius_start

N_ENERGIES = 60
REPEATS = 3


def workload(kernel, params, cfg):
    """One mini-scan: matching values on an energy sweep."""
    delta = cfg.resolve_delta(params.a)
    mu = frobenius_exponent(params.s, cfg.exponent)
    pot_coeff = -(0.25 - params.s**2) * math.pi**2 / params.a**2
    omega = math.pi / params.a
    acc = 0.0
    steps = 0
    for i in range(N_ENERGIES):
        energy = 0.5 + i * (120.0 / N_ENERGIES)
        u0, v0 = frobenius_start(params, energy, mu, delta, cfg.series_order)
        u, v, runmax, nstep, status = kernel(
            pot_coeff, 2.0 * params.m * energy, omega, delta, u0, v0,
            params.a / 2.0, cfg.rtol, 1e-280, cfg.max_steps,
        )
        assert status == 0
        acc += v / runmax
        steps += nstep
    return acc, steps


def time_kernel(kernel, params, cfg):
    best = math.inf
    value = None
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        value, steps = workload(kernel, params, cfg)
        best = min(best, time.perf_counter() - t0)
    return best, value, steps


def main():
    params = PotentialParams(s=2.0)
    cfg = ShootingConfig()

    t_py, val_py, steps = time_kernel(shoot_halfcell_py, params, cfg)
    print(f"pure python : {t_py:.3f}s for {N_ENERGIES} integrations "
          f"({steps} RK steps), checksum {val_py:.6e}")

    if _shoot_halfcell_jit is None:
        print("numba       : not available (install numba or unset SCARF_NO_NUMBA)")
        return

    _shoot_halfcell_jit(-37.0, 60.0, math.pi, 1e-3, 1e-7, 2.5e-4, 0.5,
                        1e-13, 1e-280, 10000)  # compile outside the timing
    t_jit, val_jit, _ = time_kernel(_shoot_halfcell_jit, params, cfg)
    print(f"numba @njit : {t_jit:.3f}s, checksum {val_jit:.6e}")
    print(f"speedup     : {t_py / t_jit:.1f}x  "
          f"(package currently uses {'numba' if NUMBA_ENABLED else 'pure python'})")


if __name__ == "__main__":
    main()
