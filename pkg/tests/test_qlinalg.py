import numpy as np
import pytest

from helpers import bell_state, random_density, random_hermitian, random_state, random_unitary
from spinensemble.qlinalg import (
    DIM_CAP,
    PAULI_X,
    PAULI_Z,
    BipartitionSpec,
    ValidationError,
    as_matrix,
    density_matrix,
    embed_single_spin,
    frobenius_distance,
    hermitian,
    hermitian_eigenvalues,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    state_vector,
    tensor_product,
    unitary,
)

CUT_12 = BipartitionSpec((1,), (2,))


class TestValidators:
    def test_as_matrix_rejects_non_square(self):
        with pytest.raises(ValidationError, match="square"):
            as_matrix(np.zeros((2, 3)))

    def test_as_matrix_rejects_non_finite(self):
        with pytest.raises(ValidationError, match="finite"):
            as_matrix([[1.0, np.nan], [0.0, 1.0]])

    def test_hermitian_accepts_paulis(self):
        hermitian(PAULI_X)
        hermitian(PAULI_Z)

    def test_hermitian_rejects_perturbed(self):
        bad = PAULI_X + np.array([[0, 1e-9], [0, 0]])
        with pytest.raises(ValidationError, match="Hermitian"):
            hermitian(bad)

    def test_unitary_accepts_hadamard(self):
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        unitary(h)

    def test_unitary_rejects_scaled_identity(self):
        with pytest.raises(ValidationError, match="unitary"):
            unitary(1.001 * np.eye(3))

    def test_state_vector_norm_check(self):
        state_vector(bell_state())
        with pytest.raises(ValidationError, match="normalized"):
            state_vector([1.0, 1.0])

    def test_density_matrix_accepts_diagonal_mixture(self):
        density_matrix(np.diag([0.25, 0.75]).astype(complex))

    def test_density_matrix_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            density_matrix(np.eye(2, dtype=complex))

    def test_density_matrix_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError, match="negative eigenvalue"):
            density_matrix(np.diag([1.5, -0.5]).astype(complex))

    def test_dimension_cap(self):
        with pytest.raises(ValidationError, match="cap"):
            maximally_mixed(DIM_CAP + 1)
        with pytest.raises(ValidationError, match="cap"):
            state_vector(np.zeros(DIM_CAP + 1))
        with pytest.raises(ValidationError, match="cap"):
            tensor_product(np.eye(64), np.eye(128))

    def test_maximally_mixed_is_a_density_matrix(self):
        for dim in (1, 2, 4, 8):
            rho = density_matrix(maximally_mixed(dim))
            np.testing.assert_allclose(np.trace(rho), 1.0, atol=1e-14)


class TestBipartitionSpec:
    def test_parse_simple_cut(self):
        part = BipartitionSpec.parse("1|2", 2)
        assert part.left == (1,) and part.right == (2,)
        assert part.n_spins == 2

    def test_parse_comma_lists(self):
        part = BipartitionSpec.parse("1,3|2", 3)
        assert part.left == (1, 3) and part.right == (2,)

    def test_parse_digit_run(self):
        part = BipartitionSpec.parse("13|2", 3)
        assert part.left == (1, 3) and part.right == (2,)

    def test_sides_are_sorted(self):
        part = BipartitionSpec((3, 1), (2,))
        assert part.left == (1, 3)
        assert str(part) == "13|2"

    def test_str_uses_commas_beyond_nine_spins(self):
        left = tuple(range(1, 10))
        part = BipartitionSpec(left, (10,))
        assert str(part) == "1,2,3,4,5,6,7,8,9|10"

    def test_round_trip_through_str(self):
        part = BipartitionSpec((2,), (1, 3, 4))
        assert BipartitionSpec.parse(str(part), 4) == part

    @pytest.mark.parametrize(
        "text,n",
        [
            ("12", 2),          # no cut marker
            ("1|1", 2),         # overlap
            ("1|3", 2),         # gap
            ("|12", 2),         # empty side
            ("1|2", 3),         # wrong spin count
            ("a|b", 2),         # not indices
        ],
    )
    def test_parse_rejects_malformed(self, text, n):
        with pytest.raises(ValidationError):
            BipartitionSpec.parse(text, n)


class TestTensorProduct:
    def test_identity_times_identity(self):
        np.testing.assert_array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_projector_placement(self):
        """|0><0| (x) |1><1| lands on basis index 1 = |01>."""
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        np.testing.assert_array_equal(tensor_product(p0, p1), np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_index_formula_entry(self):
        # entry ((0*2+0),(1*2+0)) = X[0,1] * Z[0,0] = 1
        assert tensor_product(PAULI_X, PAULI_Z)[0, 2] == 1.0

    def test_index_formula_random(self):
        rng = np.random.default_rng(11)
        a = random_hermitian(rng, 3)
        b = random_hermitian(rng, 2)
        t = tensor_product(a, b)
        for i in range(3):
            for j in range(3):
                for k in range(2):
                    for l in range(2):
                        np.testing.assert_allclose(
                            t[i * 2 + k, j * 2 + l], a[i, j] * b[k, l], rtol=1e-14
                        )

    def test_associativity(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            a, b, c = (random_hermitian(rng, int(rng.integers(2, 4))) for _ in range(3))
            lhs = tensor_product(tensor_product(a, b), c)
            rhs = tensor_product(a, tensor_product(b, c))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestEmbedSingleSpin:
    def test_single_spin_space_is_identity_embedding(self):
        np.testing.assert_array_equal(embed_single_spin(PAULI_X, 1, 1), PAULI_X)

    def test_first_spin_is_most_significant(self):
        np.testing.assert_array_equal(
            embed_single_spin(PAULI_Z, 1, 2), np.diag([1, 1, -1, -1]).astype(complex)
        )
        np.testing.assert_array_equal(
            embed_single_spin(PAULI_Z, 2, 2), np.diag([1, -1, 1, -1]).astype(complex)
        )

    def test_out_of_range_spin(self):
        with pytest.raises(ValidationError, match="out of range"):
            embed_single_spin(PAULI_X, 3, 2)


class TestHermitianEigenvalues:
    def test_diagonal_case(self):
        np.testing.assert_allclose(
            hermitian_eigenvalues(np.diag([0.9, 0.1]).astype(complex)), [0.1, 0.9]
        )

    def test_pauli_spectrum(self):
        np.testing.assert_allclose(hermitian_eigenvalues(PAULI_X), [-1.0, 1.0], atol=1e-14)

    def test_maximally_mixed_spectrum(self):
        np.testing.assert_allclose(hermitian_eigenvalues(maximally_mixed(8)), np.full(8, 1 / 8))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            hermitian_eigenvalues(np.array([[0, 1], [2, 0]], dtype=complex))

    def test_random_spectrum_properties(self):
        """Sum of eigenvalues = trace; each one kills the characteristic polynomial."""
        rng = np.random.default_rng(21)
        for _ in range(20):
            a = random_hermitian(rng, 4)
            eigs = hermitian_eigenvalues(a)
            assert np.all(np.diff(eigs) >= 0)
            np.testing.assert_allclose(eigs.sum(), np.trace(a).real, atol=1e-9)
            for lam in eigs:
                assert abs(np.linalg.det(a - lam * np.eye(4))) < 1e-8

    def test_conjugation_invariance(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            dim = int(rng.integers(2, 9))
            a = random_hermitian(rng, dim)
            u = random_unitary(rng, dim)
            np.testing.assert_allclose(
                hermitian_eigenvalues(u @ a @ u.conj().T),
                hermitian_eigenvalues(a),
                atol=1e-9,
            )


class TestPartialTrace:
    def test_product_state_factorization(self):
        rng = np.random.default_rng(31)
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 2)
        joint = tensor_product(rho_a, rho_b)
        np.testing.assert_allclose(partial_trace(joint, CUT_12, "left"), rho_a, atol=1e-12)
        np.testing.assert_allclose(partial_trace(joint, CUT_12, "right"), rho_b, atol=1e-12)

    def test_bell_reduces_to_maximally_mixed(self):
        rho = np.outer(bell_state(), bell_state().conj())
        np.testing.assert_allclose(partial_trace(rho, CUT_12, "left"), np.eye(2) / 2, atol=1e-12)

    def test_diagonal_big_endian_sums(self):
        """Tracing out spin 2 adds adjacent pairs of the diagonal."""
        rho = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
        np.testing.assert_allclose(
            partial_trace(rho, CUT_12, "left"), np.diag([0.3, 0.7]), atol=1e-14
        )

    def test_three_spin_middle_cut(self):
        rng = np.random.default_rng(32)
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 4)
        part = BipartitionSpec((2,), (1, 3))
        # rho_b lives on spins 1 and 3 jointly: build rho on (1,2,3) by
        # embedding rho_b's two factors is not possible for entangled rho_b,
        # so check with a separable rho_b = sigma (x) tau instead.
        sigma = random_density(rng, 2)
        tau = random_density(rng, 2)
        joint = tensor_product(tensor_product(sigma, rho_a), tau)
        np.testing.assert_allclose(partial_trace(joint, part, "left"), rho_a, atol=1e-12)
        np.testing.assert_allclose(
            partial_trace(joint, part, "right"), tensor_product(sigma, tau), atol=1e-12
        )

    def test_trace_and_hermiticity_preserved(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            rho = random_density(rng, 8)
            part = BipartitionSpec((1, 3), (2,))
            reduced = partial_trace(rho, part, "left")
            np.testing.assert_allclose(np.trace(reduced), 1.0, atol=1e-10)
            np.testing.assert_allclose(reduced, reduced.conj().T, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="does not match dimension"):
            partial_trace(np.eye(8) / 8, CUT_12, "left")

    def test_bad_keep_side(self):
        with pytest.raises(ValidationError, match="keep"):
            partial_trace(np.eye(4) / 4, CUT_12, "middle")


class TestPartialTranspose:
    def test_product_case(self):
        rng = np.random.default_rng(41)
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 2)
        joint = tensor_product(rho_a, rho_b)
        expected = tensor_product(rho_a, rho_b.T)
        np.testing.assert_allclose(partial_transpose(joint, CUT_12), expected, atol=1e-14)
        np.testing.assert_allclose(
            hermitian_eigenvalues(partial_transpose(joint, CUT_12)),
            hermitian_eigenvalues(joint),
            atol=1e-10,
        )

    def test_diagonal_invariance(self):
        rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
        np.testing.assert_array_equal(partial_transpose(rho, CUT_12), rho)

    def test_bell_minimum_eigenvalue(self):
        rho = np.outer(bell_state(), bell_state().conj())
        eigs = hermitian_eigenvalues(partial_transpose(rho, CUT_12))
        np.testing.assert_allclose(eigs[0], -0.5, atol=1e-12)

    def test_involution(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            rho = random_density(rng, 4)
            np.testing.assert_array_equal(
                partial_transpose(partial_transpose(rho, CUT_12), CUT_12), rho
            )

    def test_trace_and_hermiticity_preserved(self):
        rng = np.random.default_rng(43)
        part = BipartitionSpec((2,), (1, 3))
        for _ in range(10):
            rho = random_density(rng, 8)
            pt = partial_transpose(rho, part)
            np.testing.assert_allclose(np.trace(pt), 1.0, atol=1e-12)
            np.testing.assert_allclose(pt, pt.conj().T, atol=1e-12)


class TestFrobeniusDistance:
    def test_identical_inputs(self):
        assert frobenius_distance(maximally_mixed(4), maximally_mixed(4)) == 0.0

    def test_pure_state_distance_to_mixed(self):
        """d(pure, I/K) = sqrt(1 - 1/K), a consequence of purity 1."""
        rng = np.random.default_rng(51)
        for dim in (2, 4, 8):
            psi = random_state(rng, dim)
            rho = np.outer(psi, psi.conj())
            np.testing.assert_allclose(
                frobenius_distance(rho, maximally_mixed(dim)),
                np.sqrt(1 - 1 / dim),
                atol=1e-12,
            )

    def test_matches_entrywise_sum(self):
        rng = np.random.default_rng(52)
        a = random_hermitian(rng, 5)
        b = random_hermitian(rng, 5)
        brute = np.sqrt(sum(abs(a[i, j] - b[i, j]) ** 2 for i in range(5) for j in range(5)))
        np.testing.assert_allclose(frobenius_distance(a, b), brute, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="mismatch"):
            frobenius_distance(np.eye(2), np.eye(4))
