import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy.optimize import minimize

from chargeq._simplex import dephased_entropy_bits
from chargeq.measures import (
    CorrelationRecord,
    MeasurementBasis,
    OptimizerConfig,
    basis_matrix,
    classical_correlation,
    classical_deficit,
    correlation_tensor,
    dephase,
    dephased_entropy,
    evaluate_all,
    information,
    local_information,
    localizable_information,
    negativity,
    quantum_deficit,
    total_correlation,
)
from chargeq.qstate import (
    bell_state,
    ket_to_dm,
    marginal,
    random_density_matrix,
    random_unitary,
    validate_density_matrix,
    von_neumann_entropy,
    werner_state,
)

from conftest import random_states

Z = MeasurementBasis(0.0, 0.0)
X = MeasurementBasis(math.pi / 2, 0.0)


def grid_min_entropy(rho, n):
    """Minimum dephased entropy over an n^4 grid of (th_a, ph_a, th_b, ph_b)."""
    th = np.linspace(0, math.pi, n)
    ph = np.linspace(0, 2 * math.pi, n, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    c, s, e = np.cos(tt / 2).ravel(), np.sin(tt / 2).ravel(), np.exp(1j * pp).ravel()
    # u[k, :, i] is basis vector i of grid basis k
    u = np.empty((c.size, 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 1, 0], u[:, 0, 1], u[:, 1, 1] = c, e * s, -s / e, c
    r = rho.reshape(2, 2, 2, 2)
    p = np.einsum("kai,lbj,abcd,kci,ldj->kilj", u.conj(), u.conj(), r, u, u, optimize=True).real
    p = np.clip(p.reshape(c.size, 2, c.size, 2), 1e-300, 1)
    ent = -np.sum(p * np.log2(p), axis=(1, 3))
    return float(ent.min())


class TestBasis:
    def test_canonical_range(self):
        b = MeasurementBasis(5.0, -1.0)
        assert 0 <= b.theta <= math.pi and 0 <= b.phi < 2 * math.pi

    def test_canonical_same_projectors(self):
        raw = basis_matrix(5.0, -1.0)
        b = MeasurementBasis(5.0, -1.0)
        p_raw = {tuple(np.round(np.outer(v, v.conj()).ravel(), 12)) for v in raw.T}
        p_can = {tuple(np.round(p.ravel(), 12)) for p in b.projectors()}
        assert p_raw == p_can

    @given(st.floats(-10, 10), st.floats(-10, 10))
    def test_projectors_complete(self, th, ph):
        p0, p1 = MeasurementBasis(th, ph).projectors()
        assert np.max(np.abs(p0 + p1 - np.eye(2))) < 1e-14
        assert np.max(np.abs(p0 @ p1)) < 1e-14

    @given(st.floats(-10, 10), st.floats(-10, 10))
    def test_unitary(self, th, ph):
        u = basis_matrix(th, ph)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-14


class TestCanonicalStates:
    def test_bell(self):
        rho = bell_state()
        assert total_correlation(rho) == pytest.approx(2, abs=1e-9)
        assert negativity(rho) == pytest.approx(1, abs=1e-9)
        assert classical_correlation(rho) == pytest.approx(1, abs=1e-9)
        assert local_information(rho) == pytest.approx(0, abs=1e-9)
        loc = localizable_information(rho)
        assert loc.I_loz == pytest.approx(1, abs=1e-3)
        assert quantum_deficit(rho) == pytest.approx(1, abs=1e-3)
        assert classical_deficit(rho) == pytest.approx(1, abs=1e-3)

    def test_bell_coarse_grid(self):
        # 64 x 64 grid over (th_a, th_b) at phi = 0
        th = np.linspace(0, math.pi, 64)
        t = correlation_tensor(bell_state())
        ents = [dephased_entropy_bits(np.array([a, 0, b, 0]), t) for a in th for b in th]
        assert min(ents) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("p,expected", [(0.0, 0.0), (1 / 3, 0.0), (0.5, 0.25), (1.0, 1.0)])
    def test_werner_negativity(self, p, expected):
        assert negativity(werner_state(p)) == pytest.approx(expected, abs=1e-9)

    def test_maximally_mixed(self):
        rec = evaluate_all(np.eye(4) / 4)
        for v in (rec.T_c, rec.Q_c, rec.C_c, rec.I_Lo, rec.I_loz, rec.Q_def, rec.C_def):
            assert abs(v) < 1e-6

    def test_product_pure(self):
        rho = ket_to_dm(np.kron([0.6, 0.8], [1, 1j]) / math.sqrt(2))
        rec = evaluate_all(rho)
        assert rec.T_c == pytest.approx(0, abs=1e-9)
        assert rec.I_Lo == pytest.approx(2, abs=1e-9)
        assert rec.I_loz == pytest.approx(2, abs=1e-6)
        assert rec.Q_def == pytest.approx(0, abs=1e-6)
        assert rec.C_def == pytest.approx(0, abs=1e-6)

    def test_classical_mixture(self):
        rho = np.diag([0.5, 0, 0, 0.5]).astype(complex)
        rec = evaluate_all(rho)
        assert rec.T_c == pytest.approx(1, abs=1e-9)
        assert rec.Q_c == pytest.approx(0, abs=1e-9)
        assert rec.Q_def == pytest.approx(0, abs=1e-6)
        assert rec.C_def == pytest.approx(1, abs=1e-6)

    def test_information(self):
        assert information(np.eye(2) / 2) == pytest.approx(0)
        assert information(np.diag([1.0, 0, 0, 0])) == pytest.approx(2)


class TestDephase:
    def test_computational_basis(self):
        out = dephase(bell_state(), Z, Z)
        assert_allclose(out, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)

    def test_mixed_bases_on_bell(self):
        assert_allclose(dephase(bell_state(), Z, X), np.eye(4) / 4, atol=1e-15)

    def test_idempotent(self, rng):
        rho = random_density_matrix(4, rng)
        a, b = MeasurementBasis(0.3, 1.1), MeasurementBasis(2.0, 4.0)
        once = dephase(rho, a, b)
        assert_allclose(dephase(once, a, b), once, atol=1e-14)

    def test_entropy_identity(self):
        # Bloch-form objective equals S of the explicitly dephased state
        r = np.random.default_rng(3)
        for rho in random_states(100, seed=11):
            x = r.uniform([0, 0, 0, 0], [math.pi, 2 * math.pi, math.pi, 2 * math.pi])
            s_direct = von_neumann_entropy(dephase(rho, MeasurementBasis(x[0], x[1]),
                                                   MeasurementBasis(x[2], x[3])))
            assert dephased_entropy(rho, x) == pytest.approx(s_direct, abs=1e-10)

    def test_monotone_and_unital(self):
        r = np.random.default_rng(5)
        for rho in random_states(1000, seed=13):
            x = r.uniform([0, 0, 0, 0], [math.pi, 2 * math.pi, math.pi, 2 * math.pi])
            a, b = MeasurementBasis(x[0], x[1]), MeasurementBasis(x[2], x[3])
            out = dephase(rho, a, b)
            validate_density_matrix(out)
            assert von_neumann_entropy(out) >= von_neumann_entropy(rho) - 1e-9
            assert_allclose(dephase(np.eye(4) / 4, a, b), np.eye(4) / 4, atol=1e-15)


class TestOptimizer:
    def test_matches_scipy_multistart(self):
        r = np.random.default_rng(17)
        for rho in random_states(12, seed=19):
            t = correlation_tensor(rho)
            best = min(
                minimize(dephased_entropy_bits, x0, args=(t,), method="Nelder-Mead",
                         options={"xatol": 1e-9, "fatol": 1e-12, "maxfev": 5000}).fun
                for x0 in r.uniform(0, 2 * math.pi, size=(20, 4))
            )
            assert localizable_information(rho).min_entropy <= best + 1e-6

    def test_against_fine_grid(self):
        # optimizer must do at least as well as a 32^4 angle grid
        for rho in random_states(50, seed=23):
            grid = grid_min_entropy(rho, 32)
            assert localizable_information(rho).min_entropy <= grid + 1e-4

    def test_deterministic(self, rng):
        rho = random_density_matrix(4, rng)
        assert localizable_information(rho) == localizable_information(rho)

    def test_eval_cap_marks_unconverged(self, rng):
        rho = random_density_matrix(4, rng)
        res = localizable_information(rho, OptimizerConfig(max_evals=100))
        assert not res.converged
        assert res.evals <= 100 + 64
        assert 0 <= res.min_entropy <= 2

    def test_reported_bases_achieve_minimum(self, rng):
        rho = random_density_matrix(4, rng)
        res = localizable_information(rho)
        s = von_neumann_entropy(dephase(rho, res.basis_a, res.basis_b))
        assert s == pytest.approx(res.min_entropy, abs=1e-9)


class TestInvariancesAndBounds:
    def test_local_unitary_invariance(self):
        r = np.random.default_rng(29)
        for rho in random_states(20, seed=31):
            u = np.kron(random_unitary(2, r), random_unitary(2, r))
            a, b = evaluate_all(rho), evaluate_all(u @ rho @ u.conj().T)
            for name in ("T_c", "Q_c", "C_c", "I_Lo", "I_loz", "Q_def", "C_def"):
                assert abs(getattr(a, name) - getattr(b, name)) < 1e-5, name

    def test_deficits_nonnegative_and_sum(self):
        for rho in random_states(1000, seed=37):
            rec = evaluate_all(rho)
            assert rec.Q_def >= -1e-6
            assert rec.C_def >= -1e-6
            assert rec.Q_def + rec.C_def == pytest.approx(information(rho) - rec.I_Lo, abs=2e-6)

    def test_pure_state_deficits(self):
        # pure states: min dephased entropy equals the entanglement entropy
        r = np.random.default_rng(41)
        for _ in range(20):
            v = r.normal(size=4) + 1j * r.normal(size=4)
            rho = ket_to_dm(v / np.linalg.norm(v))
            s_a = von_neumann_entropy(marginal(rho, "a"))
            assert localizable_information(rho).min_entropy == pytest.approx(s_a, abs=1e-6)


class TestEvaluateAll:
    def test_identities(self, rng):
        rho = random_density_matrix(4, rng)
        rec = evaluate_all(rho, tau=1.5)
        assert rec.tau == 1.5
        assert rec.C_c == pytest.approx(rec.T_c - rec.Q_c, abs=1e-15)
        assert rec.Q_def == pytest.approx(information(rho) - rec.I_loz, abs=1e-12)
        assert rec.C_def == pytest.approx(rec.I_loz - rec.I_Lo, abs=1e-12)
        assert rec.ok

    def test_bad_state_recorded(self):
        rec = evaluate_all(np.diag([1.2, -0.2, 0, 0]))
        assert not rec.ok
        assert rec.errors and rec.errors[0].startswith("state")
        assert math.isnan(rec.T_c)

    def test_without_deficits(self):
        rec = evaluate_all(bell_state(), deficits=False)
        assert math.isnan(rec.I_loz) and rec.T_c == pytest.approx(2)

    def test_as_dict(self):
        d = CorrelationRecord(tau=0.0).as_dict()
        assert set(d) >= {"T_c", "Q_def", "errors"}
