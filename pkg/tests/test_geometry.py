import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

import liemetric as lm
from liemetric.geometry import _qgt


def random_hermitian(dim, rng):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2.0


def random_povm(dim, n_outcomes, rng):
    parts = []
    for _ in range(n_outcomes):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        parts.append(a @ a.conj().T)
    total = sum(parts)
    w, v = np.linalg.eigh(total)
    whiten = (v / np.sqrt(w)) @ v.conj().T
    return [whiten @ p @ whiten for p in parts]


class TestSld:
    def test_pure_state_identity(self):
        # for pure rho the SLD is 2 d(rho) = -2i [G, rho]
        rng = np.random.default_rng(0)
        psi = lm.PureState(5, lm.random_pure_state(5, rng))
        rho = lm.density(psi)
        g = random_hermitian(5, rng)
        got = lm.sld(rho, g)
        want = -2j * (g @ rho.entries - rho.entries @ g)
        np.testing.assert_allclose(got, want, atol=1e-10)

    def test_maximally_mixed_gives_zero(self):
        rng = np.random.default_rng(1)
        g = random_hermitian(4, rng)
        np.testing.assert_allclose(lm.sld(lm.maximally_mixed(4), g), 0.0, atol=1e-13)

    @pytest.mark.parametrize("rank", [1, 2, 3, 6])
    def test_defining_equation_on_support(self, rank):
        rng = np.random.default_rng(10 + rank)
        rho = lm.random_mixed_state(6, rank, rng)
        g = random_hermitian(6, rng)
        ell = lm.sld(rho, g)
        drho = -1j * (g @ rho.entries - rho.entries @ g)
        residual = 0.5 * (ell @ rho.entries + rho.entries @ ell) - drho
        w, v = np.linalg.eigh(rho.entries)
        support = v[:, w > 1e-12]
        proj = support @ support.conj().T
        assert np.abs(proj @ residual @ proj).max() < 1e-8

    def test_sld_set_reports_support(self):
        rng = np.random.default_rng(3)
        basis = lm.build_full_observable_basis(4)
        rho = lm.random_mixed_state(4, 2, rng)
        sset = lm.sld_set(rho, basis)
        assert sset.support_rank == 2
        assert sset.cutoff_used == pytest.approx(1e-12)
        for op in sset.operators:
            assert np.abs(op - op.conj().T).max() < 1e-10

    def test_rejects_negative_cutoff(self):
        with pytest.raises(lm.ValidationError):
            lm.sld(lm.maximally_mixed(2), np.eye(2), support_cutoff=-1.0)


class TestQfim:
    def test_maximally_mixed_is_zero(self, gellmann3):
        q = lm.qfim(lm.maximally_mixed(3), gellmann3)
        np.testing.assert_allclose(q.matrix, 0.0, atol=1e-13)

    @pytest.mark.parametrize("d,n", [(2, 2), (2, 4), (3, 3), (4, 2)])
    def test_css_spectrum(self, d, n):
        basis = lm.build_collective_symmetric(d, n)
        amps = np.zeros(d)
        amps[0] = 1.0
        q = lm.qfim_pure(lm.css(d, n, amps), basis)
        lam = np.sort(q.eigenvalues)[::-1]
        active, null = 2 * (d - 1), (d - 1) ** 2
        np.testing.assert_allclose(lam[:active], n, atol=1e-8)
        np.testing.assert_allclose(lam[active:], 0.0, atol=1e-8)
        assert active + null == basis.dim_g

    @pytest.mark.parametrize("seed", range(4))
    def test_pure_matches_general(self, seed, qutrit_half):
        rng = np.random.default_rng(seed)
        psi = lm.PureState(3, lm.random_pure_state(3, rng))
        f_pure = lm.qfim_pure(psi, qutrit_half)
        f_general = lm.qfim(lm.density(psi), qutrit_half)
        rel = np.linalg.norm(f_pure.matrix - f_general.matrix) / np.linalg.norm(
            f_pure.matrix
        )
        assert rel < 1e-8

    @pytest.mark.parametrize("seed", [0, 1])
    def test_finite_difference_fidelity_hessian(self, seed, qutrit_half):
        # independent oracle: the QFIM is -4x the Hessian of the sqrt
        # fidelity A(theta) = Tr sqrt(sqrt(rho) rho(theta) sqrt(rho)) at 0
        rng = np.random.default_rng(100 + seed)
        base = lm.random_mixed_state(3, 3, rng)
        rho = lm.DensityMatrix(3, 0.85 * base.entries + 0.15 * np.eye(3) / 3)
        f_sld = lm.qfim(rho, qutrit_half).matrix
        f_fd = fd_fidelity_hessian_qfim(rho, qutrit_half, h=1e-3)
        rel = np.linalg.norm(f_sld - f_fd) / np.linalg.norm(f_sld)
        assert rel < 1e-5

    def test_commuting_direction_gives_zero_row(self, gellmann3):
        # rho diagonal: the diagonal generators commute with it, so their
        # rows and columns vanish in both F and U
        rho = lm.DensityMatrix(3, np.diag([0.5, 0.3, 0.2]).astype(complex))
        f, u = _qgt(rho, gellmann3, 1e-12)
        for idx in (6, 7):
            assert np.abs(f[idx, :]).max() < 1e-10
            assert np.abs(f[:, idx]).max() < 1e-10
            assert np.abs(u[idx, :]).max() < 1e-10

    def test_spectrum_cached_descending(self, qutrit_half):
        rng = np.random.default_rng(4)
        rho = lm.random_mixed_state(3, 2, rng)
        q = lm.qfim(rho, qutrit_half)
        assert all(a >= b for a, b in zip(q.eigenvalues, q.eigenvalues[1:]))
        np.testing.assert_allclose(
            q.eigenvectors.T @ q.eigenvectors, np.eye(q.dim_g), atol=1e-12
        )
        recon = q.eigenvectors @ np.diag(q.eigenvalues) @ q.eigenvectors.T
        np.testing.assert_allclose(recon, q.matrix, atol=1e-10)


def fd_fidelity_hessian_qfim(rho, basis, h):
    def sqrt_fid(r2):
        s = scipy.linalg.sqrtm(rho.entries)
        return float(np.real(np.trace(scipy.linalg.sqrtm(s @ r2 @ s))))

    def rotated(theta):
        total = sum(t * g for t, g in zip(theta, basis.generators))
        u = scipy.linalg.expm(-1j * total)
        return u @ rho.entries @ u.conj().T

    k = basis.dim_g
    out = np.zeros((k, k))
    for m in range(k):
        for n in range(m, k):
            tm = np.zeros(k)
            if m == n:
                tm[m] = h
                d2 = (sqrt_fid(rotated(tm)) - 2.0 + sqrt_fid(rotated(-tm))) / h**2
            else:
                tpp = np.zeros(k)
                tpm = np.zeros(k)
                tpp[m] = tpp[n] = h
                tpm[m], tpm[n] = h, -h
                d2 = (
                    sqrt_fid(rotated(tpp))
                    - sqrt_fid(rotated(tpm))
                    - sqrt_fid(rotated(-tpm))
                    + sqrt_fid(rotated(-tpp))
                ) / (4 * h**2)
            out[m, n] = out[n, m] = -4.0 * d2
    return out


class TestUct:
    def test_maximally_mixed_is_zero(self, gellmann3):
        u = lm.uct(lm.maximally_mixed(3), gellmann3)
        np.testing.assert_allclose(u.matrix, 0.0, atol=1e-13)

    def test_qubit_ground_state_value(self):
        # |0> with halved Pauli basis: F = diag(1, 1, 0) and U_xy = 1
        # (hand computation: U_xy = 4 Im <(sx/2)(sy/2)> = <sz> = 1)
        basis = lm.build_full_observable_basis(2)
        rho = lm.density(lm.PureState(2, np.array([1, 0], dtype=complex)))
        f, u = _qgt(rho, basis, 1e-12)
        np.testing.assert_allclose(f, np.diag([1.0, 1.0, 0.0]), atol=1e-12)
        expected_u = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=float)
        np.testing.assert_allclose(u, expected_u, atol=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_antisymmetric(self, seed, qutrit_half):
        rng = np.random.default_rng(seed)
        rho = lm.random_mixed_state(3, 3, rng)
        u = lm.uct(rho, qutrit_half)
        np.testing.assert_allclose(u.matrix, -u.matrix.T, atol=1e-12)

    def test_uct_pure_matches_general(self, g2_n4):
        rng = np.random.default_rng(11)
        psi = lm.PureState(g2_n4.hilbert_dim, lm.random_pure_state(g2_n4.hilbert_dim, rng))
        u_pure = lm.uct_pure(psi, g2_n4)
        u_gen = lm.uct(lm.density(psi), g2_n4)
        np.testing.assert_allclose(u_pure.matrix, u_gen.matrix, atol=1e-9)


class TestPseudoInverse:
    def test_identity(self):
        np.testing.assert_allclose(lm.pseudo_inverse(np.eye(4)), np.eye(4), atol=1e-14)

    def test_diagonal_with_kernel(self):
        got = lm.pseudo_inverse(np.diag([4.0, 0.0]))
        np.testing.assert_allclose(got, np.diag([0.25, 0.0]), atol=1e-14)

    def test_random_rank_two_penrose_identities(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((3, 2))
        m = a @ a.T
        m_plus = lm.pseudo_inverse(m)
        lam_max = np.linalg.eigvalsh(m)[-1]
        assert np.abs(m @ m_plus @ m - m).max() < 1e-8 * lam_max
        assert np.abs(m_plus @ m @ m_plus - m_plus).max() < 1e-8

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(min_value=-100, max_value=100), min_size=2, max_size=6))
    def test_penrose_identities_property(self, diag):
        rng = np.random.default_rng(abs(hash(tuple(diag))) % 2**31)
        k = len(diag)
        q, _ = np.linalg.qr(rng.standard_normal((k, k)))
        m = q @ np.diag(diag) @ q.T
        m = (m + m.T) / 2.0
        m_plus = lm.pseudo_inverse(m)
        scale = max(np.abs(diag)) if any(diag) else 1.0
        assert np.abs(m @ m_plus @ m - m).max() < 1e-8 * max(scale, 1.0)


class TestIncompatibility:
    def test_qubit_pure_is_maximal(self):
        basis = lm.build_full_observable_basis(2)
        rho = lm.density(lm.PureState(2, np.array([1, 0], dtype=complex)))
        result = lm.incompatibility(rho, basis)
        assert result.gamma == pytest.approx(1.0, abs=1e-10)
        assert result.rank_cutoff == pytest.approx(1e-10)

    def test_small_admixture_well_defined(self):
        rng = np.random.default_rng(6)
        basis = lm.build_full_observable_basis(4)
        psi = lm.random_pure_state(4, rng)
        eps = 1e-3
        rho = lm.DensityMatrix(
            4, (1 - eps) * np.eye(4) / 4 + eps * np.outer(psi, psi.conj())
        )
        result = lm.incompatibility(rho, basis)
        assert 0.0 <= result.gamma <= 1.0 + 1e-8

    def test_zero_qfim_is_undefined(self, gellmann3):
        with pytest.raises(lm.UndefinedIncompatibilityError):
            lm.incompatibility(lm.maximally_mixed(3), gellmann3)

    def test_gamma_zero_iff_uct_vanishes(self, gellmann3):
        # the imaginary pair operators close among themselves (a real
        # orthogonal subalgebra); real states then have exactly zero
        # curvature while the information matrix stays nonzero
        gens = gellmann3.generators
        so3 = lm.LieBasis("so3_qutrit", 3, (gens[1], gens[3], gens[5]), 2.0)
        assert lm.verify_basis(so3).closure_ok
        rho = lm.DensityMatrix(3, np.diag([0.5, 0.3, 0.2]).astype(complex))
        f, u = _qgt(rho, so3, 1e-12)
        assert np.abs(u).max() < 1e-12
        assert np.abs(f).max() > 0.1
        assert lm.incompatibility(rho, so3).gamma == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("rank", [1, 2, 6])
    def test_pairs_and_bounds(self, rank, g2_n4):
        rng = np.random.default_rng(20 + rank)
        dim = g2_n4.hilbert_dim
        rho = lm.random_mixed_state(dim, min(rank, dim), rng)
        result = lm.incompatibility(rho, g2_n4)
        eigs = np.asarray(result.raised_eigenvalues)
        np.testing.assert_allclose(eigs, -eigs[::-1], atol=1e-8)
        assert np.abs(eigs).max() <= 1.0 + 1e-8
        assert result.gamma == pytest.approx(np.abs(eigs).max(), abs=1e-12)


class TestCfim:
    def test_commuting_povm_gives_zero(self):
        # an abelian basis commuting with rho carries no information
        sz_half = lm.LieBasis("sz_half", 2, (np.diag([0.5, -0.5]).astype(complex),), 0.5)
        rho = lm.DensityMatrix(2, np.diag([0.7, 0.3]).astype(complex))
        povm = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
        np.testing.assert_allclose(lm.cfim(rho, sz_half, povm), 0.0, atol=1e-14)
        np.testing.assert_allclose(lm.qfim(rho, sz_half).matrix, 0.0, atol=1e-13)

    def test_single_qubit_phase_estimation(self):
        # |+> with generator sigma_z/2: the y-eigenbasis POVM saturates the
        # quantum bound at theta=0 (the z-basis carries nothing there)
        sz_half = lm.LieBasis("sz_half", 2, (np.diag([0.5, -0.5]).astype(complex),), 0.5)
        plus = lm.density(lm.PureState(2, np.array([1, 1]) / math.sqrt(2)))
        yp = np.array([1, 1j]) / math.sqrt(2)
        ym = np.array([1, -1j]) / math.sqrt(2)
        povm_y = [np.outer(yp, yp.conj()), np.outer(ym, ym.conj())]
        i_y = lm.cfim(plus, sz_half, povm_y)
        q = lm.qfim(plus, sz_half)
        assert i_y[0, 0] == pytest.approx(1.0, abs=1e-10)
        assert q.matrix[0, 0] == pytest.approx(1.0, abs=1e-10)
        povm_z = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
        assert lm.cfim(plus, sz_half, povm_z)[0, 0] == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_bounded_by_qfim(self, seed, qutrit_half):
        rng = np.random.default_rng(30 + seed)
        rho = lm.random_mixed_state(3, int(rng.integers(1, 4)), rng)
        povm = random_povm(3, 4, rng)
        i_mat = lm.cfim(rho, qutrit_half, povm)
        f_mat = lm.qfim(rho, qutrit_half).matrix
        assert np.linalg.eigvalsh(f_mat - i_mat).min() > -1e-8
        np.testing.assert_allclose(i_mat, i_mat.T, atol=1e-12)
        assert np.linalg.eigvalsh(i_mat).min() > -1e-12

    def test_incomplete_povm_rejected(self, qutrit_half):
        with pytest.raises(lm.ValidationError):
            lm.cfim(lm.maximally_mixed(3), qutrit_half, [np.eye(3) * 0.5])


class TestPrecisionBound:
    def test_heisenberg_value(self):
        assert lm.precision_bound(400.0) == pytest.approx(1.0 / 400.0)

    def test_zero_information_is_infinite(self):
        assert lm.precision_bound(0.0) == math.inf

    def test_arithmetic(self):
        assert lm.precision_bound(20.0, trials=100, duration=2.0) == pytest.approx(1 / 8000)

    def test_rejects_negative(self):
        with pytest.raises(lm.ValidationError):
            lm.precision_bound(-1.0)


class TestTraceFastPath:
    @pytest.mark.parametrize("dim", [3, 5, 8])
    def test_vectorized_matches_streamed(self, dim):
        rng = np.random.default_rng(dim)
        psi = lm.PureState(dim, lm.random_pure_state(dim, rng))
        streamed = lm.trace_qfim_pure(psi, lm.iter_full_observable_generators(dim))
        vectorized = lm.full_observable_qfim_trace(psi)
        assert vectorized == pytest.approx(streamed, rel=1e-12)

    def test_matches_full_qfim_trace(self, g2_n4):
        rng = np.random.default_rng(9)
        psi = lm.PureState(g2_n4.hilbert_dim, lm.random_pure_state(g2_n4.hilbert_dim, rng))
        fast = lm.trace_qfim_pure(psi, g2_n4.generators)
        assert fast == pytest.approx(lm.qfim_pure(psi, g2_n4).trace(), rel=1e-12)

    @pytest.mark.parametrize("dim", [4, 7])
    def test_pure_state_identity(self, dim):
        # any pure state saturates the su(D) trace at 2(D-1)
        rng = np.random.default_rng(40 + dim)
        psi = lm.PureState(dim, lm.random_pure_state(dim, rng))
        assert lm.full_observable_qfim_trace(psi) == pytest.approx(
            2.0 * (dim - 1), rel=1e-10
        )
