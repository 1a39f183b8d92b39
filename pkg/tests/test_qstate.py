import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from chargeq.qstate import (
    LayoutError,
    StateError,
    bell_state,
    hermitian_eigensystem,
    ket_to_dm,
    marginal,
    partial_trace_field,
    partial_transpose,
    random_density_matrix,
    random_pure_state,
    validate_density_matrix,
    von_neumann_entropy,
)

from conftest import random_states

E, G = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)


def fock(n, dim):
    v = np.zeros(dim, dtype=complex)
    v[n] = 1
    return v


def dm(v):
    return ket_to_dm(v)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestPartialTraceField:
    def test_product_with_fock(self):
        psi = np.kron(np.kron(G, G), fock(5, 8))
        assert_allclose(partial_trace_field(psi, 7), dm(np.kron(G, G)), atol=1e-15)

    def test_orthogonal_field_components_kill_coherence(self):
        psi = (np.kron(np.kron(E, E), fock(0, 3)) + np.kron(np.kron(G, G), fock(2, 3))) / math.sqrt(2)
        expected = 0.5 * (dm(np.kron(E, E)) + dm(np.kron(G, G)))
        assert_allclose(partial_trace_field(psi, 2), expected, atol=1e-15)

    def test_field_factors_out(self):
        bell = (np.kron(E, E) + np.kron(G, G)) / math.sqrt(2)
        psi = np.kron(bell, fock(0, 4))
        assert_allclose(partial_trace_field(psi, 3), dm(bell), atol=1e-15)

    def test_layout_mismatch(self):
        with pytest.raises(LayoutError):
            partial_trace_field(np.ones(10) / math.sqrt(10), 3)

    @given(seeds, st.integers(min_value=0, max_value=12))
    def test_marginal_of_random_product(self, seed, n_max):
        r = np.random.default_rng(seed)
        pa, pb = random_pure_state(2, r), random_pure_state(2, r)
        phi = random_pure_state(n_max + 1, r)
        rho = partial_trace_field(np.kron(np.kron(pa, pb), phi), n_max)
        assert np.max(np.abs(marginal(rho, "a") - dm(pa))) < 1e-12
        assert np.max(np.abs(marginal(rho, "b") - dm(pb))) < 1e-12


class TestMarginal:
    def test_bell(self):
        assert_allclose(marginal(bell_state(), "a"), np.eye(2) / 2, atol=1e-15)
        assert_allclose(marginal(bell_state(), "b"), np.eye(2) / 2, atol=1e-15)

    def test_product(self, rng):
        ra, rb = random_density_matrix(2, rng), random_density_matrix(2, rng)
        assert_allclose(marginal(np.kron(ra, rb), "a"), ra, atol=1e-15)
        assert_allclose(marginal(np.kron(ra, rb), "b"), rb, atol=1e-15)

    def test_symmetric_mixture(self):
        rho = 0.5 * (dm(np.kron(E, E)) + dm(np.kron(G, G)))
        assert_allclose(marginal(rho, "a"), np.eye(2) / 2)

    def test_bad_label(self):
        with pytest.raises(ValueError):
            marginal(bell_state(), "c")


class TestPartialTranspose:
    def test_bell_spectrum(self):
        vals = np.sort(np.linalg.eigvalsh(partial_transpose(bell_state())))
        assert_allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)

    def test_bell_matrix(self):
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = expected[1, 2] = expected[2, 1] = 0.5
        assert_allclose(partial_transpose(bell_state(), "b"), expected, atol=1e-15)

    def test_product_keeps_spectrum(self, rng):
        rho = np.kron(random_density_matrix(2, rng), random_density_matrix(2, rng))
        assert_allclose(np.linalg.eigvalsh(partial_transpose(rho)), np.linalg.eigvalsh(rho), atol=1e-12)

    def test_identity_fixed(self):
        assert_allclose(partial_transpose(np.eye(4) / 4), np.eye(4) / 4)

    @given(seeds, st.sampled_from("ab"))
    def test_involution(self, seed, which):
        rho = random_density_matrix(4, np.random.default_rng(seed))
        twice = partial_transpose(partial_transpose(rho, which), which)
        assert np.max(np.abs(twice - rho)) <= 1e-15

    @given(seeds)
    def test_either_subsystem_same_spectrum(self, seed):
        rho = random_density_matrix(4, np.random.default_rng(seed))
        va = np.sort(np.linalg.eigvalsh(partial_transpose(rho, "a")))
        vb = np.sort(np.linalg.eigvalsh(partial_transpose(rho, "b")))
        assert np.max(np.abs(va - vb)) < 1e-10


class TestEntropy:
    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-15)

    def test_pure(self):
        assert von_neumann_entropy(dm(E)) == 0.0

    def test_biased_qubit(self):
        expected = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))
        assert von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(expected, abs=1e-14)
        assert von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(0.46900, abs=1e-4)

    def test_base_override(self):
        assert von_neumann_entropy(np.eye(2) / 2, log_base=math.e) == pytest.approx(math.log(2))

    def test_roundoff_negatives_clamped(self):
        assert von_neumann_entropy(np.diag([1 + 5e-11, -5e-11])) == pytest.approx(0.0, abs=1e-9)

    def test_corrupted_state_rejected(self):
        with pytest.raises(StateError):
            von_neumann_entropy(np.diag([1.001, -0.001]))

    def test_bounds_and_subadditivity(self):
        for rho in random_states(1000):
            s_ab = von_neumann_entropy(rho)
            s_a = von_neumann_entropy(marginal(rho, "a"))
            s_b = von_neumann_entropy(marginal(rho, "b"))
            assert -1e-12 <= s_ab <= 2 + 1e-12
            assert s_ab <= s_a + s_b + 1e-9


class TestEigensystem:
    def test_identity(self):
        assert_allclose(hermitian_eigensystem(np.eye(2)).eigenvalues, [1, 1])

    def test_diagonal(self):
        vals, vecs = hermitian_eigensystem(np.diag([1.0, 3.0]))
        assert_allclose(vals, [3, 1])
        assert_allclose(np.abs(vecs), [[0, 1], [1, 0]])

    def test_pauli_x(self):
        vals, vecs = hermitian_eigensystem(np.array([[0, 1], [1, 0]]))
        assert_allclose(vals, [1, -1])
        assert_allclose(np.abs(vecs), np.full((2, 2), 1 / math.sqrt(2)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(StateError):
            hermitian_eigensystem(np.array([[0, 1], [0, 0]]))

    @given(seeds, st.integers(min_value=1, max_value=8))
    def test_reconstruction(self, seed, dim):
        r = np.random.default_rng(seed)
        m = r.normal(size=(dim, dim)) + 1j * r.normal(size=(dim, dim))
        m = m + m.conj().T
        vals, vecs = hermitian_eigensystem(m)
        assert np.all(np.diff(vals) <= 0)
        assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - m)) < 1e-10
        assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(dim))) < 1e-12


class TestValidation:
    def test_accepts_random(self, rng):
        validate_density_matrix(random_density_matrix(4, rng))

    @pytest.mark.parametrize(
        "bad",
        [
            np.diag([0.5, 0.6]),
            np.array([[0.5, 0.1], [0.0, 0.5]]),
            np.diag([1.2, -0.2]),
            np.eye(3) / 3,
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(StateError):
            validate_density_matrix(bad)
