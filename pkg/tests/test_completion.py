"""Completion theory for (N-1) x N partial Hadamard matrices: kernel vector,
modulus profile, explicit row completion, and the two grid criteria."""

import math

import numpy as np
import pytest

from _helpers import drop_last_row, exact_randomized_fourier, take_rows
from hadperm.completion import (
    complete_row,
    gram_criterion,
    kernel_vector,
    modulus_profile,
    weighted_criterion,
)
from hadperm.errors import NotCompletable, NotHadamard
from hadperm.submagic import check_grid, complete_last, grid_from_hadamard
from hadperm.torus import TorusMatrix, fourier, is_partial_hadamard, minor_det

W3 = np.exp(2j * np.pi / 3)


def f3_top2():
    return take_rows(fourier([3]), 2)


def ones_row():
    return TorusMatrix.from_complex(np.array([[1.0, 1.0]], dtype=complex))


def perturb(h, i, j, angle=0.05):
    a = h.to_complex().copy()
    a[i, j] *= np.exp(1j * angle)
    return TorusMatrix.from_complex(a)


class TestKernelVector:
    def test_f3_exact_values(self):
        data = kernel_vector(f3_top2())
        expected = np.array([-1j * math.sqrt(3), W3 - 1, 1 - W3**2])
        assert np.abs(data.z - expected).max() <= 1e-12
        assert np.abs(data.moduli - math.sqrt(3)).max() <= 1e-12

    def test_two_column_case(self):
        data = kernel_vector(ones_row())
        assert np.abs(data.z - np.array([-1.0, 1.0])).max() <= 1e-14

    def test_f4_moduli(self):
        data = kernel_vector(take_rows(fourier([4]), 3))
        assert np.abs(data.moduli - 4.0).max() <= 1e-10

    def test_orthogonal_to_all_rows(self):
        rng = np.random.default_rng(71)
        for n in range(3, 9):
            h = drop_last_row(exact_randomized_fourier(n, rng))
            data = kernel_vector(h)
            residual = np.abs(h.to_complex() @ data.z.conj()).max()
            assert residual <= 1e-8 * n ** (n / 2.0)

    def test_moduli_match_independent_determinants(self):
        rng = np.random.default_rng(73)
        h = drop_last_row(exact_randomized_fourier(5, rng))
        data = kernel_vector(h)
        for j in range(1, 6):
            assert data.moduli[j - 1] == pytest.approx(abs(minor_det(h, j)))

    def test_requires_partial_hadamard(self):
        bad = TorusMatrix.from_complex(np.ones((2, 3), dtype=complex))
        with pytest.raises(NotHadamard):
            kernel_vector(bad)

    def test_requires_shape(self):
        with pytest.raises(ValueError):
            kernel_vector(fourier([3]))


class TestModulusProfile:
    def test_f3(self):
        profile = modulus_profile(f3_top2())
        assert profile.constant and profile.hadamard_value
        assert np.abs(np.array(profile.moduli) - math.sqrt(3)).max() <= 1e-12

    def test_two_column_case(self):
        profile = modulus_profile(ones_row())
        # N^(N/2-1) = 2^0 = 1
        assert profile.moduli == (1.0, 1.0)
        assert profile.constant and profile.hadamard_value

    def test_f4(self):
        profile = modulus_profile(take_rows(fourier([4]), 3))
        assert profile.constant and profile.hadamard_value
        assert np.abs(np.array(profile.moduli) - 4.0).max() <= 1e-10

    def test_perturbed_profile_not_constant(self):
        profile = modulus_profile(perturb(f3_top2(), 1, 1), tol=1e-8)
        assert not profile.constant
        assert not profile.hadamard_value

    def test_constant_implies_hadamard_value_on_positives(self):
        # for genuine partial Hadamard inputs the common modulus, when it
        # exists, can only be N^(N/2-1)
        rng = np.random.default_rng(97)
        for n in (3, 4, 5, 6):
            for _ in range(5):
                h = drop_last_row(exact_randomized_fourier(n, rng))
                profile = modulus_profile(h, tol=1e-8)
                assert profile.constant and profile.hadamard_value


class TestCompleteRow:
    def test_f3_appended_row(self):
        completed = complete_row(f3_top2())
        expected = -1j * np.array([1, W3**2, W3])
        assert np.abs(completed.to_complex()[2] - expected).max() <= 1e-12
        a = completed.to_complex()
        assert np.abs(a @ a.conj().T - 3 * np.eye(3)).max() <= 1e-12

    def test_two_column_case(self):
        completed = complete_row(ones_row())
        assert np.array_equal(
            completed.to_complex(), np.array([[1, 1], [-1, 1]], dtype=complex)
        )

    def test_f4_completion(self):
        h = take_rows(fourier([4]), 3)
        completed = complete_row(h)
        a = completed.to_complex()
        assert np.abs(a @ a.conj().T - 4 * np.eye(4)).max() <= 1e-9
        # the appended row is a unit phase times the deleted Fourier row
        ratio = a[3] / fourier([4]).to_complex()[3]
        assert np.abs(ratio - ratio[0]).max() <= 1e-9
        assert abs(abs(ratio[0]) - 1.0) <= 1e-9

    def test_original_rows_bit_exact(self):
        h = f3_top2()
        completed = complete_row(h)
        assert completed.entries[:2] == h.entries
        assert not completed.is_exact

    def test_unit_rows_when_profile_is_hadamard(self):
        rng = np.random.default_rng(79)
        for n in (3, 5, 7):
            h = drop_last_row(exact_randomized_fourier(n, rng))
            completed = complete_row(h)
            assert is_partial_hadamard(completed, tol=1e-9).ok

    def test_perturbed_not_completable(self):
        with pytest.raises(NotCompletable) as err:
            complete_row(perturb(f3_top2(), 1, 2), tol=1e-8)
        assert err.value.witness is not None
        assert not err.value.witness.constant


class TestGramCriterion:
    def test_f3(self):
        # G - I = (1/3) * all-ones, a projection
        assert gram_criterion(f3_top2())

    def test_two_column_case(self):
        # N - 2 = 0, and G = (1/2) * all-ones is itself a projection
        assert gram_criterion(ones_row())

    def test_f4(self):
        assert gram_criterion(take_rows(fourier([4]), 3))

    def test_perturbed_fails(self):
        assert not gram_criterion(perturb(f3_top2(), 1, 1), tol=1e-8)


class TestWeightedCriterion:
    def test_f3(self):
        result = weighted_criterion(f3_top2())
        assert result.passes
        assert result.c == pytest.approx(9.0, abs=1e-10)

    def test_two_column_case(self):
        result = weighted_criterion(ones_row())
        assert result.passes
        assert result.c == pytest.approx(2.0, abs=1e-12)

    def test_f4(self):
        result = weighted_criterion(take_rows(fourier([4]), 3))
        assert result.passes
        assert result.c == pytest.approx(64.0, abs=1e-8)

    def test_perturbed_fails(self):
        assert not weighted_criterion(perturb(f3_top2(), 0, 2), tol=1e-8).passes


class TestCriteriaBridge:
    def test_border_completion_iff_gram(self):
        rng = np.random.default_rng(83)
        for n in (3, 4, 5):
            for _ in range(10):
                h = drop_last_row(exact_randomized_fourier(n, rng))
                instances = [(h, True), (perturb(h, 0, int(rng.integers(n))), False)]
                for matrix, expected in instances:
                    gram = gram_criterion(matrix, tol=1e-8)
                    grid = grid_from_hadamard(matrix, tol=0.1)
                    try:
                        complete_last(grid, tol=1e-8)
                        border = True
                    except NotCompletable:
                        border = False
                    assert gram == border == expected

    def test_positive_completion_certifies_magic(self):
        rng = np.random.default_rng(89)
        h = drop_last_row(exact_randomized_fourier(5, rng))
        full = complete_last(grid_from_hadamard(h), tol=1e-9)
        assert check_grid(full, 1e-8).magic
