import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import liemetric as lm
from liemetric._linalg import expi
from liemetric.geometry import _qgt


def unit_vector(values):
    v = np.array(values, dtype=complex)
    return v / np.linalg.norm(v)


class TestCss:
    def test_single_mode(self):
        psi = lm.css(3, 5, [0, 0, 1])
        index = lm.SymmetricIndex.build(3, 5)
        expected = np.zeros(index.dim)
        expected[index.index_of((0, 0, 5))] = 1.0
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    def test_binomial_d2(self):
        psi = lm.css(2, 2, unit_vector([1, 1]))
        index = lm.SymmetricIndex.build(2, 2)
        got = {occ: psi.amplitudes[i] for i, occ in enumerate(index.occupations)}
        assert got[(2, 0)] == pytest.approx(0.5)
        assert got[(1, 1)] == pytest.approx(1 / math.sqrt(2))
        assert got[(0, 2)] == pytest.approx(0.5)

    def test_multinomial_d3(self):
        psi = lm.css(3, 4, unit_vector([1, 1, 1]))
        index = lm.SymmetricIndex.build(3, 4)
        for i, occ in enumerate(index.occupations):
            coeff = math.sqrt(
                math.factorial(4) / math.prod(math.factorial(k) for k in occ)
            )
            assert psi.amplitudes[i] == pytest.approx(coeff / 9.0, rel=1e-12)
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-13)

    def test_rejects_unnormalized(self):
        with pytest.raises(lm.NormalizationError):
            lm.css(3, 2, [1.0, 1.0, 0.0])

    @settings(max_examples=25, deadline=None)
    @given(
        st.integers(min_value=2, max_value=4),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    def test_norm_one_property(self, d, n, seed):
        rng = np.random.default_rng(seed)
        single = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        single /= np.linalg.norm(single)
        psi = lm.css(d, n, single)
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)


class TestNoon:
    def test_explicit_d3_n2(self):
        psi = lm.noon(3, 2, [1, 0, 0], [0, 1, 0])
        index = lm.SymmetricIndex.build(3, 2)
        expected = np.zeros(index.dim)
        expected[index.index_of((2, 0, 0))] = 1 / math.sqrt(2)
        expected[index.index_of((0, 2, 0))] = 1 / math.sqrt(2)
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    def test_n1_equals_css_of_superposition(self):
        got = lm.noon(3, 1, [1, 0, 0], [0, 0, 1])
        want = lm.css(3, 1, unit_vector([1, 0, 1]))
        np.testing.assert_allclose(got.amplitudes, want.amplitudes, atol=1e-14)

    def test_rejects_nonorthogonal(self):
        with pytest.raises(lm.OrthogonalityError):
            lm.noon(3, 2, [1, 0, 0], unit_vector([1, 1, 0]))

    def test_acceptance_state_norm(self):
        psi = lm.noon(3, 10, [1, 0, 0], [0, 0, 1])
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-13)


class TestGhzBalanced:
    def test_explicit_d3_n2(self):
        psi = lm.ghz_balanced(3, 2)
        index = lm.SymmetricIndex.build(3, 2)
        expected = np.zeros(index.dim)
        for occ in ((2, 0, 0), (0, 2, 0), (0, 0, 2)):
            expected[index.index_of(occ)] = 1 / math.sqrt(3)
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_all_collective_means_vanish_d3(self, n):
        basis = lm.build_su3_collective(n)
        psi = lm.ghz_balanced(3, n)
        for g in basis.generators:
            assert abs(psi.expectation(g)) < 1e-10

    def test_d2_n3_spin_means_vanish(self):
        basis = lm.build_collective_symmetric(2, 3)
        psi = lm.ghz_balanced(2, 3)
        for g in basis.generators:
            assert abs(psi.expectation(g)) < 1e-10


class TestInitialExampleState:
    def test_single_particle(self):
        psi = lm.initial_example_state(1)
        sx, sy, sz = lm.build_spin1_dipole(1).generators
        assert psi.expectation(sx) == pytest.approx(1.0, abs=1e-12)
        assert abs(psi.expectation(sy)) < 1e-12
        assert abs(psi.expectation(sz)) < 1e-12

    def test_n10_means(self):
        psi = lm.initial_example_state(10)
        sx, sy, sz = lm.build_spin1_dipole(10).generators
        assert psi.expectation(sx) == pytest.approx(10.0, abs=1e-9)
        assert abs(psi.expectation(sy)) < 1e-9
        assert abs(psi.expectation(sz)) < 1e-9

    @pytest.mark.parametrize("n", [2, 6])
    def test_standard_quantum_limit(self, n):
        basis = lm.build_spin1_dipole(n)
        q = lm.qfim_pure(lm.initial_example_state(n), basis)
        lam = np.sort(q.eigenvalues)
        np.testing.assert_allclose(lam, [0.0, 2 * n, 2 * n], atol=1e-9)

    def test_equals_rotated_css(self):
        # the collective rotation of a product state is the product of
        # rotated single-particle states
        n = 4
        got = lm.initial_example_state(n)
        sy1 = lm.build_spin1_dipole(1).generators[1]
        single = expi(sy1, -math.pi / 2) @ np.array([0, 0, 1], dtype=complex)
        want = lm.css(3, n, single)
        np.testing.assert_allclose(got.amplitudes, want.amplitudes, atol=1e-13)


class TestDensityAndMix:
    def test_outer_product_idempotent(self):
        rng = np.random.default_rng(0)
        psi = lm.PureState(4, lm.random_pure_state(4, rng))
        rho = lm.density(psi)
        np.testing.assert_allclose(rho.entries @ rho.entries, rho.entries, atol=1e-13)
        assert rho.purity() == pytest.approx(1.0, abs=1e-13)

    def test_equal_mixture_purity(self):
        e0 = lm.PureState(2, np.array([1, 0], dtype=complex))
        e1 = lm.PureState(2, np.array([0, 1], dtype=complex))
        rho = lm.mix([(0.5, lm.density(e0)), (0.5, lm.density(e1))])
        assert rho.purity() == pytest.approx(0.5, abs=1e-13)

    def test_mix_rejects_bad_weights(self):
        e0 = lm.density(lm.PureState(2, np.array([1, 0], dtype=complex)))
        with pytest.raises(lm.NormalizationError):
            lm.mix([(0.7, e0), (0.7, e0)])

    def test_density_matrix_validation(self):
        with pytest.raises(lm.ValidationError):
            lm.DensityMatrix(2, np.array([[0.5, 0.5], [0.4, 0.5]]))
        with pytest.raises(lm.ValidationError):
            lm.DensityMatrix(2, np.array([[0.9, 0], [0, 0.9]]))
        with pytest.raises(lm.ValidationError):
            lm.DensityMatrix(2, np.array([[1.5, 0], [0, -0.5]]))


class TestUhlmannDistance:
    def test_identical_states(self):
        rng = np.random.default_rng(1)
        rho = lm.random_mixed_state(4, 3, rng)
        assert lm.uhlmann_distance_sq(rho, rho) == pytest.approx(0.0, abs=1e-9)

    def test_orthogonal_pure(self):
        a = lm.density(lm.PureState(2, np.array([1, 0], dtype=complex)))
        b = lm.density(lm.PureState(2, np.array([0, 1], dtype=complex)))
        assert lm.uhlmann_distance_sq(a, b) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seed", [3, 4])
    def test_pure_overlap_formula(self, seed):
        rng = np.random.default_rng(seed)
        u = lm.random_pure_state(5, rng)
        v = lm.random_pure_state(5, rng)
        overlap = abs(np.vdot(u, v))
        d2 = lm.uhlmann_distance_sq(
            lm.density(lm.PureState(5, u)), lm.density(lm.PureState(5, v))
        )
        assert d2 == pytest.approx(1.0 - overlap, abs=1e-10)

    @pytest.mark.parametrize("seed", [7, 8])
    def test_symmetric(self, seed):
        rng = np.random.default_rng(seed)
        rho = lm.random_mixed_state(5, 3, rng)
        sigma = lm.random_mixed_state(5, 5, rng)
        assert lm.uhlmann_distance_sq(rho, sigma) == pytest.approx(
            lm.uhlmann_distance_sq(sigma, rho), abs=1e-9
        )

    def test_dimension_mismatch(self):
        with pytest.raises(lm.ValidationError):
            lm.uhlmann_distance_sq(lm.maximally_mixed(2), lm.maximally_mixed(3))

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_small_unitary_expansion(self, rank):
        # Delta^2(rho, U rho U+) = n.F.n eps^2/8 + higher order
        basis = lm.build_full_observable_basis(3)
        rng = np.random.default_rng(10 + rank)
        rho = lm.random_mixed_state(3, rank, rng)
        f, _ = _qgt(rho, basis, 1e-12)
        n = rng.standard_normal(basis.dim_g)
        n /= np.linalg.norm(n)
        h = np.tensordot(n, basis.stacked(), axes=1)
        eps = 1e-3
        d2 = lm.uhlmann_distance_sq(rho, lm.conjugate(rho, expi(h, eps)))
        predicted = n @ f @ n * eps**2 / 8.0
        assert d2 == pytest.approx(predicted, rel=1e-2)


class TestFixedMeanSquareIdentities:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_single_qudit_sum_of_squared_means(self, d):
        # pure qudit states have sum_mu <sigma_mu>^2 = 2(d-1)/d over the
        # unhalved orthonormal basis
        basis = lm.build_gellmann(d)
        rng = np.random.default_rng(d)
        for _ in range(5):
            psi = lm.PureState(d, lm.random_pure_state(d, rng))
            total = sum(psi.expectation(g) ** 2 for g in basis.generators)
            assert total == pytest.approx(2.0 * (d - 1) / d, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 4])
    def test_ghz_minimizes_first_moments(self, n):
        basis = lm.build_su3_collective(n)
        psi = lm.ghz_balanced(3, n)
        total = sum(psi.expectation(g) ** 2 for g in basis.generators)
        assert total == pytest.approx(0.0, abs=1e-12)


def test_pure_state_json_roundtrip():
    from liemetric import io as lio

    psi = lm.noon(3, 4, [1, 0, 0], [0, 1, 0])
    back = lio.pure_state_from_jsonable(lio.pure_state_to_jsonable(psi))
    np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)


def test_density_json_roundtrip():
    from liemetric import io as lio

    rng = np.random.default_rng(2)
    rho = lm.random_mixed_state(4, 2, rng)
    back = lio.density_from_jsonable(lio.density_to_jsonable(rho))
    np.testing.assert_array_equal(back.entries, rho.entries)
