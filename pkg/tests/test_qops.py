import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bounded_floats, noise_vectors
from pairsim.errors import InvalidNoiseError, LayoutError
from pairsim.qops import (
    HilbertLayout,
    NoiseVector,
    annihilation,
    embed,
    embed_product,
    noise_eigenbasis,
    noise_operator,
    noise_rotation_angle,
    pauli,
)

PLUS = np.array([1, 0], dtype=complex)
MINUS = np.array([0, 1], dtype=complex)


class TestPauli:
    def test_z_is_diagonal(self):
        assert np.array_equal(pauli("z"), np.diag([1, -1]).astype(complex))

    def test_x_squares_to_identity(self):
        assert np.array_equal(pauli("x") @ pauli("x"), np.eye(2))

    def test_ladder_action(self):
        assert np.array_equal(pauli("plus") @ MINUS, PLUS)
        assert np.array_equal(pauli("plus") @ PLUS, np.zeros(2))
        assert np.array_equal(pauli("minus") @ PLUS, MINUS)

    def test_plus_minus_from_xy(self):
        assert np.allclose(pauli("plus"), (pauli("x") + 1j * pauli("y")) / 2)
        assert np.allclose(pauli("minus"), (pauli("x") - 1j * pauli("y")) / 2)

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            pauli("w")


class TestAnnihilation:
    def test_two_level_truncation(self):
        assert np.array_equal(annihilation(2), np.array([[0, 1], [0, 0]]))

    def test_number_operator(self):
        a = annihilation(3)
        assert np.allclose(a.conj().T @ a, np.diag([0, 1, 2]))

    def test_commutator_truncation_artifact(self):
        # [a, a+] = I on the lower levels (up to sqrt(n)**2 rounding); the
        # truncation defect sits in the top diagonal entry only.
        a = annihilation(4)
        comm = a @ a.conj().T - a.conj().T @ a
        assert np.max(np.abs(comm[:3, :3] - np.eye(3))) <= 1e-15
        assert comm[3, 3] == pytest.approx(-3.0, abs=1e-14)

    @given(st.integers(min_value=2, max_value=12))
    def test_superdiagonal_amplitudes(self, dim):
        a = annihilation(dim)
        for n in range(dim - 1):
            assert a[n, n + 1] == pytest.approx(np.sqrt(n + 1))

    def test_dim_below_two_rejected(self):
        with pytest.raises(LayoutError):
            annihilation(1)


class TestEmbed:
    def test_first_factor(self):
        layout = HilbertLayout(2)
        assert np.array_equal(
            embed(pauli("z"), 0, layout), np.kron(pauli("z"), np.eye(2))
        )

    def test_identity_embeds_to_identity(self):
        layout = HilbertLayout(2, (3,))
        assert np.array_equal(embed(np.eye(2), 1, layout), np.eye(12))

    def test_independent_flips(self):
        layout = HilbertLayout(2)
        both = embed(pauli("x"), 0, layout) @ embed(pauli("x"), 1, layout)
        state = np.kron(PLUS, PLUS)
        assert np.allclose(both @ state, np.kron(MINUS, MINUS))

    @given(
        st.lists(bounded_floats(), min_size=8, max_size=8),
        st.lists(bounded_floats(), min_size=8, max_size=8),
        st.integers(min_value=0, max_value=2),
    )
    @settings(max_examples=40)
    def test_homomorphism(self, re, im, factor):
        mat_a = np.array(re[:4]).reshape(2, 2) + 1j * np.array(im[:4]).reshape(2, 2)
        mat_b = np.array(re[4:]).reshape(2, 2) + 1j * np.array(im[4:]).reshape(2, 2)
        layout = HilbertLayout(3)
        left = embed(mat_a @ mat_b, factor, layout)
        right = embed(mat_a, factor, layout) @ embed(mat_b, factor, layout)
        assert np.allclose(left, right, atol=1e-12)

    def test_disjoint_factors_commute(self, rng):
        layout = HilbertLayout(2, (3,))
        a = embed(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), 0, layout)
        b = embed(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)), 2, layout)
        assert np.allclose(a @ b, b @ a, atol=1e-12)

    def test_embed_product_matches_single_embeds(self, rng):
        layout = HilbertLayout(1, (3,))
        q = rng.normal(size=(2, 2))
        m = rng.normal(size=(3, 3))
        assert np.allclose(
            embed_product({0: q, 1: m}, layout),
            embed(q, 0, layout) @ embed(m, 1, layout),
            atol=1e-12,
        )

    def test_dimension_mismatch(self):
        layout = HilbertLayout(1, (3,))
        with pytest.raises(LayoutError):
            embed(np.eye(2), 1, layout)

    def test_index_out_of_range(self):
        with pytest.raises(LayoutError):
            embed(np.eye(2), 5, HilbertLayout(2))


class TestLayout:
    def test_total_dimension(self):
        assert HilbertLayout(3, (4, 5)).dim == 8 * 20

    def test_mode_factor_indexing(self):
        layout = HilbertLayout(2, (2, 3))
        assert layout.mode_factor(0) == 2
        assert layout.mode_factor(1) == 3
        with pytest.raises(LayoutError):
            layout.mode_factor(2)

    def test_bad_mode_dim(self):
        with pytest.raises(LayoutError):
            HilbertLayout(1, (1,))


class TestNoiseOperator:
    def test_pure_dephasing_is_z(self):
        assert np.array_equal(noise_operator(NoiseVector(0, 0, 1)), pauli("z"))

    def test_three_four_five_eigenvalues(self):
        evals = np.linalg.eigvalsh(noise_operator(NoiseVector(3, 0, 4)))
        assert np.allclose(sorted(evals), [-5, 5])

    def test_trace_and_determinant(self):
        s = noise_operator(NoiseVector(1, 1, 1))
        assert abs(np.trace(s)) == 0.0
        assert np.linalg.det(s) == pytest.approx(-3.0)

    @given(noise_vectors())
    @settings(max_examples=60)
    def test_hermitian_traceless(self, nv):
        s = noise_operator(nv)
        assert np.max(np.abs(s - s.conj().T)) == 0.0
        assert abs(np.trace(s)) <= 1e-14

    def test_zero_vector_rejected(self):
        with pytest.raises(InvalidNoiseError):
            NoiseVector(0, 0, 0)

    def test_nan_rejected(self):
        with pytest.raises(InvalidNoiseError):
            NoiseVector(np.nan, 0, 1)


class TestNoiseEigenbasis:
    def test_dephasing_rotation_is_identity(self):
        rotation, a = noise_eigenbasis(NoiseVector(0, 0, 1))
        assert np.array_equal(rotation, np.eye(2))
        assert a == 1.0

    def test_x_noise_rotation_is_hadamard(self):
        rotation, a = noise_eigenbasis(NoiseVector(1, 0, 0))
        hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.allclose(rotation, hadamard, atol=1e-15)
        assert a == pytest.approx(1.0)

    def test_diagonal_plus_transverse(self):
        # independent eigen-decomposition oracle for the (1, 0, 1) direction
        nv = NoiseVector(1, 0, 1)
        rotation, a = noise_eigenbasis(nv)
        assert a == pytest.approx(np.sqrt(2), abs=1e-14)
        s = noise_operator(nv)
        residual = s @ rotation[:, 0] - np.sqrt(2) * rotation[:, 0]
        assert np.linalg.norm(residual) <= 1e-12

    @given(noise_vectors())
    @settings(max_examples=60)
    def test_unitary_and_diagonalizing(self, nv):
        rotation, a = noise_eigenbasis(nv)
        assert np.max(np.abs(rotation.conj().T @ rotation - np.eye(2))) <= 1e-12
        diag = rotation.conj().T @ noise_operator(nv) @ rotation
        assert np.max(np.abs(diag - np.diag([a, -a]))) <= 1e-12
        assert a == pytest.approx(nv.magnitude, abs=1e-12)

    @given(noise_vectors())
    @settings(max_examples=60)
    def test_phase_convention(self, nv):
        rotation, _ = noise_eigenbasis(nv)
        for col in range(2):
            v = rotation[:, col]
            first = v[0] if abs(v[0]) > 1e-12 else v[1]
            assert abs(first.imag) <= 1e-12
            assert first.real > 0

    def test_rotation_maps_plus_to_upper_eigenstate(self):
        nv = NoiseVector(0.4, -0.8, 0.3)
        rotation, a = noise_eigenbasis(nv)
        v = rotation @ PLUS
        assert np.linalg.norm(noise_operator(nv) @ v - a * v) <= 1e-12


class TestRotationAngle:
    def test_angle_for_in_plane_noise(self):
        theta = noise_rotation_angle(NoiseVector(1, 0, 1))
        assert theta == pytest.approx(np.pi / 4)

    def test_angle_reproduces_eigenbasis_up_to_column_phase(self):
        nv = NoiseVector(0.7, 0, 0.4)
        theta = noise_rotation_angle(nv)
        ry = np.array(
            [
                [np.cos(theta / 2), -np.sin(theta / 2)],
                [np.sin(theta / 2), np.cos(theta / 2)],
            ]
        )
        rotation, _ = noise_eigenbasis(nv)
        # columns may differ by a sign only
        for col in range(2):
            overlap = abs(np.vdot(ry[:, col], rotation[:, col]))
            assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_none_for_complex_direction(self):
        assert noise_rotation_angle(NoiseVector(1, 0.5, 1)) is None
