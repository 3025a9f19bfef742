import numpy as np
import pytest

from railyard.errors import RootFindingError, SingularPointError
from railyard.rational import PoleSum, match_roots, nonreal_pairs, polynomial_roots, track_roots


def test_from_terms_merges_and_drops():
    F = PoleSum.from_terms(1.0, [(1.0, 2.0), (1.0, 3.0), (2.0, 0.0)])
    np.testing.assert_array_equal(F.poles, [1.0])
    np.testing.assert_array_equal(F.residues, [5.0])
    assert F.poles.dtype == float


def test_evaluation_and_derivatives():
    F = PoleSum.from_terms(0.5, [(2.0, 1.0), (-1.0, 3.0)])
    z = 0.25
    assert F(z) == pytest.approx(0.5 + 1 / (z - 2) + 3 / (z + 1))
    assert F.derivative(z) == pytest.approx(-1 / (z - 2) ** 2 - 3 / (z + 1) ** 2)
    assert F.derivative(z, 2) == pytest.approx(2 / (z - 2) ** 3 + 6 / (z + 1) ** 3)
    assert F.residue_at(-1.0) == 3.0
    assert F.residue_at(5.0) == 0.0


def test_evaluation_at_a_pole():
    F = PoleSum.from_terms(0.0, [(2.0, 1.0)])
    with pytest.raises(SingularPointError):
        F(2.0)
    with pytest.raises(ZeroDivisionError):
        F.derivative(np.array([0.0, 2.0]))


def test_sum_and_scaling():
    F = PoleSum.from_terms(1.0, [(1.0, 1.0)])
    G = PoleSum.from_terms(2.0, [(1.0, -1.0), (3.0, 2.0)])
    H = F + G.scaled(2.0)
    assert H.const == 5.0
    np.testing.assert_allclose(H.poles, [1.0, 3.0])
    np.testing.assert_allclose(H.residues, [-1.0, 4.0])
    assert (F + PoleSum.zero())(0.5) == pytest.approx(F(0.5))


def test_numerator_clears_denominators():
    F = PoleSum.from_terms(1.0, [(2.0, 1.0)])
    # (1 + 1/(z-2) - 3)(z - 2) = -2z + 5
    np.testing.assert_allclose(F.numerator(3.0), [5.0, -2.0])


def test_solve_level_set():
    F = PoleSum.from_terms(1.0, [(2.0, 1.0)])
    np.testing.assert_allclose(F.solve(3.0), [2.5])
    G = PoleSum.from_terms(0.0, [(1.0, 1.0), (-1.0, 1.0)])
    roots = np.sort_complex(G.solve(1.0))
    # 2z / (z^2 - 1) = 1
    np.testing.assert_allclose(roots, [1 - np.sqrt(2), 1 + np.sqrt(2)], atol=1e-12)


def test_polynomial_roots():
    np.testing.assert_allclose(np.sort(polynomial_roots([2.0, -3.0, 1.0]).real), [1.0, 2.0])
    assert polynomial_roots([4.0, 0.0, 0.0]).size == 0


def test_match_roots_follows_labels():
    previous = np.array([1.0 + 0j, -1.0, 3.0])
    current = np.array([3.1 + 0j, 0.9, -1.2])
    np.testing.assert_array_equal(match_roots(previous, current), [0.9, -1.2, 3.1])
    with pytest.raises(RootFindingError):
        match_roots(previous, current[:2])


def test_track_roots_along_a_path():
    def roots_at(w):
        return np.roots([1.0, 0.0, -w])

    path = np.exp(1j * np.linspace(0.0, np.pi, 50))
    end = track_roots(roots_at, path, np.array([1.0 + 0j, -1.0]))
    # sqrt(w) rotates by half the angle of w
    np.testing.assert_allclose(end, [1j, -1j], atol=1e-12)


def test_nonreal_pairs():
    assert nonreal_pairs(np.array([1j, -1j, 2.0])) == 1
    assert nonreal_pairs(np.array([1.0, 2.0])) == 0
