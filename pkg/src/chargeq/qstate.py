"""Density-matrix algebra for two qubits, optionally coupled to a truncated field.

Basis ordering is fixed everywhere as |ee>, |eg>, |ge>, |gg>, i.e. the
kron ordering of qubit a then qubit b with |e> = (1, 0) and |g> = (0, 1).
Joint qubit-field vectors are laid out as qubit-a (x) qubit-b (x) Fock.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
NORM_TOL = 1e-10

E = np.array([1.0, 0.0], dtype=complex)
G = np.array([0.0, 1.0], dtype=complex)
BASIS_LABELS = ("ee", "eg", "ge", "gg")


class StateError(ValueError):
    """Raised when an array is not a valid quantum state."""


class LayoutError(StateError):
    """Raised when a vector's length does not match the declared layout."""


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigensystem(m: np.ndarray) -> Spectrum:
    """Eigen-decompose a Hermitian matrix, eigenvalues in descending order.

    Raises
    ------
    StateError
        If ``m`` is not square or deviates from Hermiticity by more than 1e-12.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateError(f"expected a square matrix, got shape {m.shape}")
    if hermiticity_error(m) > HERMITIAN_TOL:
        raise StateError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(m)
    return Spectrum(vals[::-1].copy(), vecs[:, ::-1].copy())


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return ``rho`` as complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise StateError(f"density matrix must be 2x2 or 4x4, got shape {rho.shape}")
    if hermiticity_error(rho) > HERMITIAN_TOL:
        raise StateError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise StateError(f"density matrix trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -NEGATIVE_EIG_TOL:
        raise StateError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise StateError("cannot normalize the zero vector")
    return psi / nrm


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def qubit_ket(a: complex, b: complex) -> np.ndarray:
    """Single-qubit state ``a|e> + b|g>``."""
    return np.array([a, b], dtype=complex)


def partial_trace_field(psi: np.ndarray, n_max: int) -> np.ndarray:
    """Reduce a qubit-qubit-field pure state to the two-qubit density matrix.

    ``psi`` must have length ``4 * (n_max + 1)``.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] != 4 * (n_max + 1):
        raise LayoutError(
            f"state of length {psi.shape} does not match 2x2x{n_max + 1} layout"
        )
    if abs(np.vdot(psi, psi).real - 1.0) > NORM_TOL:
        raise StateError("global state is not normalized")
    return qubit_dm_from_amplitudes(psi.reshape(4, n_max + 1))


def qubit_dm_from_amplitudes(amps: np.ndarray) -> np.ndarray:
    """rho_ab from a (4, n_fock) amplitude array, or a stack (..., 4, n_fock)."""
    rho = amps @ np.swapaxes(amps.conj(), -1, -2)
    # symmetrize so Hermiticity holds to machine precision
    return 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))


def marginal(rho: np.ndarray, which: str) -> np.ndarray:
    """Reduced state of qubit ``'a'`` or ``'b'`` from a 4x4 density matrix."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if which == "a":
        return np.einsum("ijkj->ik", r)
    if which == "b":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"which must be 'a' or 'b', got {which!r}")


def partial_transpose(rho: np.ndarray, subsystem: str = "b") -> np.ndarray:
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if subsystem == "a":
        return r.transpose(2, 1, 0, 3).reshape(4, 4)
    if subsystem == "b":
        return r.transpose(0, 3, 2, 1).reshape(4, 4)
    raise ValueError(f"subsystem must be 'a' or 'b', got {subsystem!r}")


def clamp_eigenvalues(vals: np.ndarray) -> np.ndarray:
    """Zero out round-off negatives; anything below -1e-10 is a corrupted state."""
    vals = np.asarray(vals, dtype=float)
    if vals.size and vals.min() < -NEGATIVE_EIG_TOL:
        raise StateError(f"negative eigenvalue {vals.min():.3e} below tolerance")
    return np.where(vals < 0.0, 0.0, vals)


def shannon_entropy(p: np.ndarray, base: float = 2.0) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)) / np.log(base))


def von_neumann_entropy(rho: np.ndarray, log_base: float = 2.0) -> float:
    """-tr(rho log rho), in bits unless ``log_base`` says otherwise."""
    rho = np.asarray(rho, dtype=complex)
    vals = clamp_eigenvalues(np.linalg.eigvalsh(rho))
    return max(shannon_entropy(vals, log_base), 0.0)


def swap_qubits(rho: np.ndarray) -> np.ndarray:
    """Exchange the roles of qubit a and qubit b."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    return r.transpose(1, 0, 3, 2).reshape(4, 4)


# fixtures shared by tests, scripts and the acceptance suite


def bell_state() -> np.ndarray:
    """(|ee> + |gg>)/sqrt(2) as a density matrix."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return ket_to_dm(psi)


def werner_state(p: float) -> np.ndarray:
    return p * bell_state() + (1 - p) * np.eye(4) / 4


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Half Haar-random pure states, half Wishart-style mixed states."""
    if rng.random() < 0.5:
        return ket_to_dm(random_pure_state(dim, rng))
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
