"""Manifold engine against the dense oracle for every figure regime, plus cutoff stability."""

import itertools

import numpy as np

from chargeq.dynamics import FieldSpec, ModelParams, closed_form_frequencies
from chargeq.oracle import deviation_report, oracle_reduced_states

INITIALS = {"ee": (1, 0, 1, 0), "gg": (0, 1, 0, 1)}


def main() -> None:
    uniform = np.linspace(0, 25, 101)
    scattered = np.sort(np.random.default_rng(0).uniform(0, 25, 101))
    for delta, nbar, ini in itertools.product((0.5, 1.0), (10.0, 20.0), INITIALS):
        p = ModelParams(delta, FieldSpec.coherent(nbar), *INITIALS[ini])
        a = deviation_report(p, uniform)
        b = deviation_report(p, scattered)
        drift = np.abs(oracle_reduced_states(p, uniform[::10], 2)
                       - oracle_reduced_states(p, uniform[::10], 12)).max()
        print(f"delta={delta:<4} nbar={nbar:<5} {ini}: uniform {a.max_deviation:.2e}  "
              f"scattered {b.max_deviation:.2e}  cutoff+10 drift {drift:.1e}  "
              f"(n_max {a.manifold_cutoff})")

    print("\nclosed-form frequencies vs block eigenvalues")
    for n, delta in itertools.product((0, 5, 10, 20), (0.0, 0.5, 1.0)):
        cf = closed_form_frequencies(n, delta)
        print(f"n={n:<3} delta={delta:<4} discrepancy {cf.max_discrepancy:.1e}  "
              f"arccos argument {cf.arccos_argument:+.4f}")


if __name__ == "__main__":
    main()
