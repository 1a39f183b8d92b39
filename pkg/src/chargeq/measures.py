"""Correlation and information-deficit measures of a two-qubit state.

Information content of a d-dimensional state is ``I(s) = log2(d) - S(s)``.
Localizable information is computed in the zero-way setting: the best
complete local product-basis dephasing, which gives a lower bound on the
supremum over all LOCC protocols.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._simplex import dephased_entropy_bits, nelder_mead
from .qstate import (
    NEGATIVE_EIG_TOL,
    clamp_eigenvalues,
    marginal,
    partial_transpose,
    shannon_entropy,
    validate_density_matrix,
    von_neumann_entropy,
)



@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start Nelder-Mead over the four Bloch angles of two local bases."""

    grid_size: int = 8  # coarse (theta_a, theta_b) grid, phi = 0
    grid_starts: int = 16
    random_starts: int = 4
    tolerance: float = 1e-6  # on the entropy
    xtol: float = 1e-5  # on the angles
    step: float = 0.25  # initial simplex edge, radians
    max_evals: int = 20_000
    seed: int = 12345


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        # canonicalize to theta in [0, pi], phi in [0, 2pi); same projector pair
        th = self.theta % (2 * math.pi)
        ph = self.phi
        if th > math.pi:
            th, ph = 2 * math.pi - th, ph + math.pi
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph % (2 * math.pi))

    def matrix(self) -> np.ndarray:
        """Columns are the two basis vectors in the {|e>, |g>} basis."""
        return basis_matrix(self.theta, self.phi)

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        u = self.matrix()
        return np.outer(u[:, 0], u[:, 0].conj()), np.outer(u[:, 1], u[:, 1].conj())


def basis_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ep = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s / ep], [ep * s, c]], dtype=complex)


def _basis_from_vector(v: np.ndarray) -> MeasurementBasis:
    """Basis whose first element is ``v`` up to phase."""
    v = v / np.linalg.norm(v)
    theta = 2 * math.acos(min(abs(v[0]), 1.0))
    phi = float(np.angle(v[1]) - np.angle(v[0])) if abs(v[1]) > 0 else 0.0
    return MeasurementBasis(theta, phi)


@dataclass
class CorrelationRecord:
    tau: float
    T_c: float = float("nan")
    Q_c: float = float("nan")
    C_c: float = float("nan")
    I_Lo: float = float("nan")
    I_loz: float = float("nan")
    Q_def: float = float("nan")
    C_def: float = float("nan")
    S_ab: float = float("nan")
    S_a: float = float("nan")
    S_b: float = float("nan")
    trace_error: float = float("nan")
    min_eigenvalue: float = float("nan")
    optimizer_evals: int = 0
    converged: bool = True
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and self.converged

    def as_dict(self) -> dict:
        return asdict(self)


def information(rho: np.ndarray) -> float:
    return math.log2(rho.shape[0]) - von_neumann_entropy(rho)


def total_correlation(rho: np.ndarray) -> float:
    """Quantum mutual information S(a) + S(b) - S(ab), in bits."""
    rho = validate_density_matrix(rho)
    return (
        von_neumann_entropy(marginal(rho, "a"))
        + von_neumann_entropy(marginal(rho, "b"))
        - von_neumann_entropy(rho)
    )


def negativity(rho: np.ndarray) -> float:
    """Sum of |eigenvalues| of the partial transpose, minus one."""
    rho = validate_density_matrix(rho)
    vals = np.linalg.eigvalsh(partial_transpose(rho, "b"))
    vals = np.where((vals < 0) & (vals >= -NEGATIVE_EIG_TOL), 0.0, vals)
    return float(min(max(np.sum(np.abs(vals)) - 1.0, 0.0), 1.0))


def classical_correlation(rho: np.ndarray) -> float:
    """Total correlation minus negativity."""
    return total_correlation(rho) - negativity(rho)


def local_information(rho: np.ndarray) -> float:
    rho = validate_density_matrix(rho)
    return information(marginal(rho, "a")) + information(marginal(rho, "b"))


def dephase(rho: np.ndarray, basis_a: MeasurementBasis, basis_b: MeasurementBasis) -> np.ndarray:
    """Apply the complete local dephasing sum_ij (P_i x Q_j) rho (P_i x Q_j)."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for p in basis_a.projectors():
        for q in basis_b.projectors():
            k = np.kron(p, q)
            out += k @ rho @ k
    return out


PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def correlation_tensor(rho: np.ndarray) -> np.ndarray:
    """Real 4x4 array T[m, n] = tr(rho sigma_m x sigma_n), sigma_0 = identity."""
    rho = np.asarray(rho, dtype=complex)
    return np.array(
        [[np.trace(rho @ np.kron(sm, sn)).real for sn in PAULI] for sm in PAULI]
    )


def dephased_entropy(rho: np.ndarray, x) -> float:
    """Entropy after dephasing in the product basis with angles (th_a, ph_a, th_b, ph_b).

    The dephased state is diagonal in that basis, so its entropy is the
    Shannon entropy of the four outcome probabilities.
    """
    return float(dephased_entropy_bits(np.asarray(x, dtype=float), correlation_tensor(rho)))


@dataclass(frozen=True)
class LocalizationResult:
    I_loz: float
    min_entropy: float
    basis_a: MeasurementBasis
    basis_b: MeasurementBasis
    evals: int
    converged: bool


def _start_points(rho: np.ndarray, t: np.ndarray, opt: OptimizerConfig) -> list[np.ndarray]:
    thetas = np.linspace(0.0, math.pi, opt.grid_size)
    grid = [np.array([ta, 0.0, tb, 0.0]) for ta in thetas for tb in thetas]
    scores = [dephased_entropy_bits(x, t) for x in grid]
    order = np.argsort(scores, kind="stable")[: opt.grid_starts]
    starts = [grid[i] for i in order]
    rng = np.random.default_rng(opt.seed)
    for _ in range(opt.random_starts):
        starts.append(rng.uniform([0, 0, 0, 0], [math.pi, 2 * math.pi, math.pi, 2 * math.pi]))
    # marginal eigenbases: their dephased entropy is <= S(a) + S(b)
    ba = _basis_from_vector(np.linalg.eigh(marginal(rho, "a"))[1][:, -1])
    bb = _basis_from_vector(np.linalg.eigh(marginal(rho, "b"))[1][:, -1])
    starts.insert(0, np.array([ba.theta, ba.phi, bb.theta, bb.phi]))
    return starts


def localizable_information(rho: np.ndarray, opt: OptimizerConfig | None = None) -> LocalizationResult:
    """Maximal local information after an optimal local product-basis dephasing.

    ``I_loz = 2 - min_{bases} S(dephase(rho))``, with the minimum found by
    multi-start Nelder-Mead over (th_a, ph_a, th_b, ph_b).  If the
    evaluation cap is hit, the best value found so far is returned with
    ``converged=False``.
    """
    opt = opt or OptimizerConfig()
    rho = validate_density_matrix(rho)
    t = correlation_tensor(rho)
    starts = _start_points(rho, t, opt)
    evals = opt.grid_size**2
    best_x, best_f = starts[0], float(dephased_entropy_bits(starts[0], t))
    evals += 1
    converged = True
    for x0 in starts:
        budget = opt.max_evals - evals
        if budget <= 0:
            converged = False
            break
        x, fx, nfev, ok = nelder_mead(x0, t, opt.step, opt.xtol, opt.tolerance, budget)
        evals += nfev
        if fx < best_f:
            best_f, best_x = float(fx), x
        if not ok:
            converged = False
    best_f = max(best_f, 0.0)
    return LocalizationResult(
        I_loz=2.0 - best_f,
        min_entropy=best_f,
        basis_a=MeasurementBasis(best_x[0], best_x[1]),
        basis_b=MeasurementBasis(best_x[2], best_x[3]),
        evals=evals,
        converged=converged,
    )


def quantum_deficit(rho: np.ndarray, opt: OptimizerConfig | None = None) -> float:
    """Information content minus localizable information."""
    return information(validate_density_matrix(rho)) - localizable_information(rho, opt).I_loz


def classical_deficit(rho: np.ndarray, opt: OptimizerConfig | None = None) -> float:
    """Localizable information minus the information held by the marginals."""
    return localizable_information(rho, opt).I_loz - local_information(rho)


def evaluate_all(rho: np.ndarray, tau: float = 0.0, opt: OptimizerConfig | None = None,
                 deficits: bool = True) -> CorrelationRecord:
    """All correlation and deficit quantities of one state.

    Component failures are recorded in ``errors`` instead of raised, so a
    sweep over a time grid is never aborted by a single bad point.
    """
    rec = CorrelationRecord(tau=float(tau))
    rho = np.asarray(rho, dtype=complex)
    rec.trace_error = float(abs(np.trace(rho).real - 1.0))
    try:
        vals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        rec.min_eigenvalue = float(vals[0])
        rho = validate_density_matrix(rho)
        rec.S_ab = shannon_entropy(clamp_eigenvalues(vals))
        rec.S_a = von_neumann_entropy(marginal(rho, "a"))
        rec.S_b = von_neumann_entropy(marginal(rho, "b"))
        rec.T_c = rec.S_a + rec.S_b - rec.S_ab
        rec.Q_c = negativity(rho)
        rec.C_c = rec.T_c - rec.Q_c
        rec.I_Lo = (1.0 - rec.S_a) + (1.0 - rec.S_b)
    except ValueError as exc:
        rec.errors.append(f"state: {exc}")
        return rec
    if not deficits:
        return rec
    try:
        loc = localizable_information(rho, opt)
    except ValueError as exc:
        rec.errors.append(f"optimizer: {exc}")
        return rec
    rec.I_loz = loc.I_loz
    rec.Q_def = (2.0 - rec.S_ab) - rec.I_loz
    rec.C_def = rec.I_loz - rec.I_Lo
    rec.optimizer_evals = loc.evals
    rec.converged = loc.converged
    return rec
