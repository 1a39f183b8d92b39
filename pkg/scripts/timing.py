"""Wall-clock comparison of manifold and dense propagation, and per-state optimizer cost."""

import time

import numpy as np

from chargeq.dynamics import FieldSpec, ManifoldEngine, ModelParams
from chargeq.measures import localizable_information
from chargeq.oracle import oracle_reduced_states
from chargeq.qstate import random_density_matrix


def best_of(fn, repeats=5):
    out = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def main() -> None:
    for nbar in (10.0, 20.0):
        for steps in (101, 251):
            p = ModelParams(0.5, FieldSpec.coherent(nbar), 1, 0, 1, 0)
            taus = np.linspace(0, 25, steps)
            ManifoldEngine(p).reduced_states(taus)  # compile
            tm = best_of(lambda: ManifoldEngine(p).reduced_states(taus))
            td = best_of(lambda: oracle_reduced_states(p, taus))
            print(f"nbar={nbar:<5} points={steps}: manifold {tm * 1e3:7.2f} ms  "
                  f"dense {td * 1e3:7.2f} ms  ratio {td / tm:5.1f}x")

    rng = np.random.default_rng(1)
    states = [random_density_matrix(4, rng) for _ in range(200)]
    localizable_information(states[0])
    t0 = time.perf_counter()
    for rho in states:
        localizable_information(rho)
    print(f"optimizer: {(time.perf_counter() - t0) / len(states) * 1e3:.2f} ms per state")


if __name__ == "__main__":
    main()
