"""Brute-force reference evolution on the full truncated space 2 x 2 x Fock.

Deliberately independent of :mod:`chargeq.dynamics`' propagation code: the
Hamiltonian is assembled from Pauli and ladder operators with Kronecker
products and exponentiated through one dense eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qstate import normalize, qubit_dm_from_amplitudes

MAX_CUTOFF = 4096
AGREEMENT_TOL = 1e-8
CONVENTION_TOL = 1e-4

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]])  # |g><e| with |e> = (1, 0)
I2 = np.eye(2)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)


def excitation_operator(n_max: int) -> np.ndarray:
    If = np.eye(n_max + 1)
    proj_e = np.diag([1.0, 0.0])
    num = np.diag(np.arange(n_max + 1, dtype=float))
    return (
        np.kron(np.kron(proj_e, I2), If)
        + np.kron(np.kron(I2, proj_e), If)
        + np.kron(np.kron(I2, I2), num)
    )


@dataclass(frozen=True)
class DenseHamiltonian:
    matrix: np.ndarray = field(repr=False)
    n_max: int
    delta: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_full_hamiltonian(delta: float, n_max: int) -> DenseHamiltonian:
    """(delta/2) sum_j sz_j + sum_j (a^dag s-_j + a s+_j) with photons truncated at n_max."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > MAX_CUTOFF:
        raise ValueError(f"n_max={n_max} exceeds the {MAX_CUTOFF} memory guard")
    If = np.eye(n_max + 1)
    a = annihilation(n_max)
    sz = [np.kron(np.kron(SIGMA_Z, I2), If), np.kron(np.kron(I2, SIGMA_Z), If)]
    sm = [np.kron(np.kron(SIGMA_MINUS, I2), If), np.kron(np.kron(I2, SIGMA_MINUS), If)]
    field_a = np.kron(np.kron(I2, I2), a)
    h = 0.5 * delta * (sz[0] + sz[1])
    for s in sm:
        hop = field_a.T @ s
        h = h + hop + hop.T
    return DenseHamiltonian(matrix=h, n_max=n_max, delta=float(delta))


class DenseEvolver:
    """One eigendecomposition of H, reused for every time point."""

    def __init__(self, ham: DenseHamiltonian):
        self.ham = ham
        self.eigvals, self.eigvecs = np.linalg.eigh(ham.matrix)

    def evolve(self, psi0: np.ndarray, tau: float) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex)
        if psi0.shape != (self.ham.dim,):
            raise ValueError(f"state of shape {psi0.shape} does not match H of dim {self.ham.dim}")
        c = self.eigvecs.conj().T @ psi0
        return self.eigvecs @ (np.exp(-1j * self.eigvals * tau) * c)

    def evolve_many(self, psi0: np.ndarray, taus: Sequence[float]) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex)
        c = self.eigvecs.conj().T @ psi0
        taus = np.asarray(taus, dtype=float)
        ph = np.exp(-1j * np.outer(taus, self.eigvals)) * c[None, :]
        return ph @ self.eigvecs.T


def evolve_dense(ham: DenseHamiltonian, psi0: np.ndarray, tau: float) -> np.ndarray:
    return DenseEvolver(ham).evolve(psi0, tau)


def initial_state(qubit_a: np.ndarray, qubit_b: np.ndarray, field_amps: np.ndarray,
                  n_max: int) -> np.ndarray:
    """Normalized product state, field amplitudes zero-padded to the cutoff."""
    f = np.zeros(n_max + 1, dtype=complex)
    f[: len(field_amps)] = field_amps
    return normalize(np.kron(np.kron(qubit_a, qubit_b), f))


def oracle_reduced_states(params, taus: Sequence[float], extra_cutoff: int = 2,
                          qubit_order: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """rho_ab(tau) on the dense space with cutoff = field cutoff + ``extra_cutoff``.

    ``qubit_order`` permutes the two-qubit basis of the output; anything but
    the identity is a deliberately wrong convention used as a negative control.
    """
    w = params.field.weights()
    n_max = len(w) - 1 + extra_cutoff
    psi0 = initial_state(
        np.array([params.a1, params.b1], dtype=complex),
        np.array([params.a2, params.b2], dtype=complex),
        w,
        n_max,
    )
    ev = DenseEvolver(build_full_hamiltonian(params.delta, n_max))
    states = ev.evolve_many(psi0, taus).reshape(-1, 4, n_max + 1)
    rho = qubit_dm_from_amplitudes(states)
    order = list(qubit_order)
    return rho[:, order][:, :, order]


@dataclass
class DeviationReport:
    max_deviation: float
    argmax_tau: float
    manifold_cutoff: int
    oracle_cutoff: int
    n_points: int
    convention_mismatch: bool

    @property
    def passed(self) -> bool:
        return self.max_deviation < AGREEMENT_TOL

    def to_text(self) -> str:
        status = "PASS" if self.passed else ("CONVENTION MISMATCH" if self.convention_mismatch else "FAIL")
        return "\n".join(
            [
                f"status: {status}",
                f"max_deviation: {self.max_deviation:.3e}",
                f"argmax_tau: {self.argmax_tau:.6g}",
                f"tolerance: {AGREEMENT_TOL:.1e}",
                f"manifold_cutoff: {self.manifold_cutoff}",
                f"oracle_cutoff: {self.oracle_cutoff}",
                f"points: {self.n_points}",
            ]
        ) + "\n"


def deviation_report(params, taus: Sequence[float], extra_cutoff: int = 2,
                     qubit_order: Sequence[int] = (0, 1, 2, 3)) -> DeviationReport:
    """Compare manifold and dense engines elementwise over a time grid."""
    from .dynamics import ManifoldEngine

    if extra_cutoff < 2:
        raise ValueError("oracle cutoff must exceed the field cutoff by at least 2")
    taus = np.asarray(taus, dtype=float)
    eng = ManifoldEngine(params)
    rho_m = eng.reduced_states(taus)
    rho_o = oracle_reduced_states(params, taus, extra_cutoff, qubit_order)
    dev = np.abs(rho_m - rho_o).reshape(len(taus), -1).max(axis=1)
    k = int(np.argmax(dev))
    worst = float(dev[k])
    return DeviationReport(
        max_deviation=worst,
        argmax_tau=float(taus[k]),
        manifold_cutoff=eng.n_max,
        oracle_cutoff=eng.n_max + extra_cutoff,
        n_points=len(taus),
        convention_mismatch=worst > CONVENTION_TOL,
    )
