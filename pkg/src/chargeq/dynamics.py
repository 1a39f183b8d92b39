"""Exact two-qubit Tavis-Cummings evolution, one excitation manifold at a time.

Energies are in units of the qubit-resonator coupling and time is the
dimensionless ``tau = coupling * t``.  In the frame rotating at the
resonator frequency the Hamiltonian is

    H = (delta/2) (sz_a + sz_b) + sum_j (a^dag s-_j + a s+_j),

which conserves the total excitation number.  Manifold ``n`` is spanned by
|ee,n>, |eg,n+1>, |ge,n+1>, |gg,n+2> and its block is

    [[ delta, gamma, gamma,   0   ],
     [ gamma,   0,     0,   beta  ],
     [ gamma,   0,     0,   beta  ],
     [   0,   beta,  beta, -delta ]]

with gamma = sqrt(n+1), beta = sqrt(n+2).  Manifolds n = -1 and n = -2 lose
the levels with negative photon number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from ._kernels import PHOTON_OFFSET, manifold_amplitudes, manifold_reduced_states
from .qstate import (
    Spectrum,
    StateError,
    hermitian_eigensystem,
    partial_trace_field,
)

MAX_CUTOFF = 4096


class CutoffError(ValueError):
    """The Fock cutoff is too small for the requested field state."""


@dataclass(frozen=True)
class FieldSpec:
    """Initial resonator state: coherent with mean photon number, or a Fock state.

    ``n_max`` optionally pins the photon cutoff of a coherent field; by
    default it is the smallest cutoff returned by :func:`coherent_weights`.
    A pinned cutoff is rejected when the photon-number mass beyond it exceeds
    ``truncation_epsilon``.
    """

    kind: str = "coherent"
    nbar: float = 0.0
    n: int = 0
    truncation_epsilon: float = 1e-12
    n_max: int | None = None

    def __post_init__(self):
        if self.kind not in ("coherent", "fock"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "coherent" and self.nbar < 0:
            raise ValueError("nbar must be non-negative")
        if self.kind == "fock" and self.n < 0:
            raise ValueError("Fock photon number must be non-negative")

    @classmethod
    def coherent(cls, nbar: float, epsilon: float = 1e-12, n_max: int | None = None):
        return cls(kind="coherent", nbar=float(nbar), truncation_epsilon=epsilon, n_max=n_max)

    @classmethod
    def fock(cls, n: int):
        return cls(kind="fock", n=int(n))

    def weights(self) -> np.ndarray:
        """Normalized photon-number amplitudes w_0..w_{n_max}."""
        if self.kind == "fock":
            w = np.zeros(self.n + 1)
            w[self.n] = 1.0
            return w
        n_max, w = coherent_weights(self.nbar, self.truncation_epsilon)
        if self.n_max is not None:
            if self.n_max < n_max:
                tail = poisson_tail(self.nbar, self.n_max)
                if tail > self.truncation_epsilon:
                    raise CutoffError(
                        f"cutoff n_max={self.n_max} discards Poisson mass {tail:.3e} "
                        f"> {self.truncation_epsilon:.1e}; use n_max >= {n_max}"
                    )
            w = _log_poisson_amplitudes(self.nbar, self.n_max)
        return w / np.linalg.norm(w)


def _log_poisson_amplitudes(nbar: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if nbar == 0:
        return (n == 0).astype(float)
    logw = 0.5 * (-nbar + n * math.log(nbar) - gammaln(n + 1))
    return np.exp(logw)


def poisson_tail(nbar: float, n_max: int) -> float:
    """Poisson probability of more than ``n_max`` photons."""
    from scipy.stats import poisson

    return float(poisson.sf(n_max, nbar)) if nbar > 0 else 0.0


def coherent_weights(nbar: float, epsilon: float = 1e-12) -> tuple[int, np.ndarray]:
    """Smallest cutoff at which the truncated coherent state is ``epsilon``-close.

    The discarded amplitudes must have 2-norm below ``epsilon``, i.e. the
    Poisson tail beyond ``n_max`` is below ``epsilon**2`` (and so a fortiori
    below ``epsilon``).  Returns ``(n_max, w)`` with real, unnormalized
    coherent-state amplitudes ``w_n = exp(-nbar/2) nbar^(n/2) / sqrt(n!)`` for ``n = 0..n_max``.
    """
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if nbar == 0:
        return 0, np.ones(1)
    from scipy.stats import poisson

    hi = min(int(nbar + 60 * math.sqrt(nbar) + 200), MAX_CUTOFF + 1)
    tails = poisson.sf(np.arange(hi + 1), nbar)
    below = np.flatnonzero(tails < epsilon**2)
    if below.size == 0 or below[0] > MAX_CUTOFF:
        raise CutoffError(f"epsilon={epsilon} needs more than {MAX_CUTOFF} photons")
    n_max = int(below[0])
    return n_max, _log_poisson_amplitudes(nbar, n_max)


@dataclass(frozen=True)
class ModelParams:
    delta: float
    field: FieldSpec
    a1: complex = 1.0
    b1: complex = 0.0
    a2: complex = 1.0
    b2: complex = 0.0
    lambda_coupling: float = 1.0

    def __post_init__(self):
        for a, b in ((self.a1, self.b1), (self.a2, self.b2)):
            if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-10:
                raise StateError("qubit amplitudes must satisfy |a|^2 + |b|^2 = 1")
        if self.lambda_coupling != 1.0:
            raise ValueError("energies are measured in units of the coupling")

    @property
    def qubit_amplitudes(self) -> np.ndarray:
        """Product amplitudes on |ee>, |eg>, |ge>, |gg>."""
        return np.kron([self.a1, self.b1], [self.a2, self.b2]).astype(complex)

    def swapped(self) -> "ModelParams":
        return ModelParams(self.delta, self.field, self.a2, self.b2, self.a1, self.b1)


# slot -> (qubit basis index, photon offset relative to the manifold index)
_SLOTS = tuple(enumerate(PHOTON_OFFSET))


@dataclass(frozen=True)
class ManifoldBlock:
    n: int
    delta: float
    gamma: float
    beta: float
    slots: tuple[int, ...]  # which of the four slots survive truncation
    h_block: np.ndarray = field(repr=False)
    spectrum: Spectrum = field(repr=False)


def _full_block(n: int, delta: float) -> np.ndarray:
    g = math.sqrt(max(n + 1, 0))
    b = math.sqrt(max(n + 2, 0))
    return np.array(
        [
            [delta, g, g, 0.0],
            [g, 0.0, 0.0, b],
            [g, 0.0, 0.0, b],
            [0.0, b, b, -delta],
        ]
    )


def _surviving_slots(n: int) -> tuple[int, ...]:
    return tuple(s for s, (_, off) in enumerate(_SLOTS) if n + off >= 0)


def build_block(n: int, delta: float) -> ManifoldBlock:
    """Hamiltonian block of the manifold whose |ee> component holds ``n`` photons."""
    if n < -2:
        raise ValueError(f"manifold index must be >= -2, got {n}")
    slots = _surviving_slots(n)
    h = _full_block(n, delta)[np.ix_(slots, slots)]
    return ManifoldBlock(
        n=n,
        delta=float(delta),
        gamma=math.sqrt(max(n + 1, 0)),
        beta=math.sqrt(max(n + 2, 0)),
        slots=slots,
        h_block=h,
        spectrum=hermitian_eigensystem(h),
    )


def block_propagator(block: ManifoldBlock, tau: float) -> np.ndarray:
    """exp(-i H_block tau) from the block's spectral decomposition."""
    vals, vecs = block.spectrum
    return (vecs * np.exp(-1j * vals * tau)) @ vecs.conj().T


@dataclass(frozen=True)
class ClosedFormFrequencies:
    n: int
    delta: float
    kappa: float
    theta: tuple[float, float, float]
    mu: tuple[float, float, float]
    alpha: tuple[float, float, float]
    arccos_argument: float
    argument_in_range: bool
    matches_block: bool
    max_discrepancy: float


def closed_form_frequencies(n: int, delta: float) -> ClosedFormFrequencies:
    """Trigonometric roots of the symmetric-subspace cubic.

    mu_i = (2/3) kappa cos(theta_i) with kappa = sqrt(3 (delta^2 + 2(beta^2 + gamma^2))),
    theta_1 = arccos(-27 delta / kappa^3) / 3, theta_{i+1} = theta_i + 2 pi / 3.

    ``matches_block`` records whether every mu_i is an eigenvalue of
    ``build_block(n, delta)`` within 1e-8; ``max_discrepancy`` is the largest
    distance from a mu_i to the nearest block eigenvalue.  An out-of-range
    arccos argument is reported, not raised.
    """
    if n < 0:
        raise ValueError("closed-form frequencies need n >= 0")
    gamma2, beta2 = n + 1.0, n + 2.0
    kappa = math.sqrt(3.0 * (delta**2 + 2.0 * (beta2 + gamma2)))
    arg = -27.0 * delta / kappa**3
    in_range = abs(arg) <= 1.0
    th1 = math.acos(min(max(arg, -1.0), 1.0)) / 3.0
    theta = (th1, th1 + 2 * math.pi / 3, th1 + 4 * math.pi / 3)
    mu = tuple((2.0 / 3.0) * kappa * math.cos(t) for t in theta)
    m1, m2, m3 = mu
    m12, m13, m23 = m1 - m2, m1 - m3, m2 - m3
    alpha = (1.0 / (m12 * m13), 1.0 / (m12 * m23), 1.0 / (m13 * m23))
    eig = build_block(n, delta).spectrum.eigenvalues
    disc = max(float(np.min(np.abs(eig - m))) for m in mu)
    return ClosedFormFrequencies(
        n=n,
        delta=float(delta),
        kappa=kappa,
        theta=theta,
        mu=mu,
        alpha=alpha,
        arccos_argument=arg,
        argument_in_range=in_range,
        matches_block=in_range and disc < 1e-8,
        max_discrepancy=disc,
    )


class ManifoldEngine:
    """Precomputed block decompositions for one parameter set.

    All blocks are padded to 4x4 and stacked; padding rows are decoupled
    and carry zero amplitude.  Each time point then costs one 4x4 rotation
    per manifold.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        w = params.field.weights()
        self.n_max = len(w) - 1
        self.manifolds = np.arange(-2, self.n_max + 1)
        # field dimension of the evolved state: highest level is |gg, n_max+2>
        self.n_fock = self.n_max + 3
        qa = params.qubit_amplitudes

        m = len(self.manifolds)
        h = np.zeros((m, 4, 4))
        c0 = np.zeros((m, 4), dtype=complex)
        wpad = np.concatenate([w, np.zeros(3)])
        # stacked blocks; levels with negative photon number stay zero rows
        # and columns, so they decouple and carry no amplitude
        for s, (q, off) in enumerate(_SLOTS):
            photons = self.manifolds + off
            ok = photons >= 0
            h[:, s, s] = {0: params.delta, 3: -params.delta}.get(s, 0.0) * ok
            c0[ok, s] = qa[q] * wpad[photons[ok]]
        gamma = np.sqrt(np.clip(self.manifolds + 1, 0, None))
        beta = np.sqrt(np.clip(self.manifolds + 2, 0, None))
        for s in (1, 2):
            h[:, 0, s] = h[:, s, 0] = gamma
            h[:, s, 3] = h[:, 3, s] = beta
        self.blocks_h = h
        self.eigvals, self.eigvecs = np.linalg.eigh(h)
        # amplitudes of the initial state in each block's eigenbasis
        self.c0_eig = np.einsum("kji,kj->ki", self.eigvecs.conj(), c0)

    def amplitudes(self, taus: Sequence[float]) -> np.ndarray:
        """Evolved amplitudes with shape (len(taus), 4, n_fock)."""
        taus = np.ascontiguousarray(taus, dtype=float).reshape(-1)
        return manifold_amplitudes(self.eigvals, self.eigvecs, self.c0_eig, taus, self.n_fock)

    def reduced_states(self, taus: Sequence[float]) -> np.ndarray:
        """rho_ab for every tau, field traced out inside the propagation loop."""
        taus = np.ascontiguousarray(taus, dtype=float).reshape(-1)
        return manifold_reduced_states(self.eigvals, self.eigvecs, self.c0_eig, taus, self.n_fock)


def propagate(params: ModelParams, tau: float) -> np.ndarray:
    """Global qubit-qubit-field state at ``tau``, length ``4 * (n_max + 3)``."""
    eng = ManifoldEngine(params)
    return eng.amplitudes([tau])[0].reshape(-1)


def state_cutoff(params: ModelParams) -> int:
    """Photon cutoff of the vectors returned by :func:`propagate`."""
    return len(params.field.weights()) + 1


def reduced_density_series(params: ModelParams, taus: Sequence[float]) -> list[np.ndarray]:
    """rho_ab(tau) for each tau, through the explicit field partial trace."""
    taus = np.asarray(taus, dtype=float)
    if taus.size and not np.all(np.isfinite(taus)):
        raise ValueError("time grid must be finite")
    if np.any(np.diff(taus) < 0):
        raise ValueError("time grid must be ascending")
    eng = ManifoldEngine(params)
    amps = eng.amplitudes(taus)
    return [partial_trace_field(a.reshape(-1), eng.n_fock - 1) for a in amps]


def excitation_number(psi: np.ndarray, n_max: int) -> float:
    """<N_exc> = <number of excited qubits + photon number>."""
    amps = np.abs(np.asarray(psi).reshape(4, n_max + 1)) ** 2
    qubit_exc = np.array([2, 1, 1, 0])[:, None]
    photons = np.arange(n_max + 1)[None, :]
    return float(np.sum(amps * (qubit_exc + photons)))
