import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framescale.exceptions import InvalidDimension
from framescale.fmap import f_dim, f_of_frame, f_of_vector
from framescale.frame import Frame, apply_scaling, frame_operator, gaussian_frame, ScalingWeights
from framescale.programs import solve_p1


@pytest.mark.parametrize("n, d", [(2, 2), (3, 5), (5, 14), (10, 54)])
def test_f_dim(n, d):
    assert f_dim(n) == d


def test_f_dim_invalid():
    with pytest.raises(InvalidDimension):
        f_dim(1)
    with pytest.raises(InvalidDimension):
        f_of_vector([1.0])


@pytest.mark.parametrize("x, expected", [
    ([1.0, 0.0], [1.0, 0.0]),
    ([np.sqrt(2) / 2, np.sqrt(2) / 2], [0.0, 0.5]),
    ([1.0, 1.0, 1.0], [0.0, 0.0, 1.0, 1.0, 1.0]),
    # row order: x1^2-x2^2, x1^2-x3^2, x1^2-x4^2, x1x2, x1x3, x1x4, x2x3, x2x4, x3x4
    ([1.0, 2.0, 3.0, 4.0], [-3.0, -8.0, -15.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0]),
])
def test_f_of_vector(x, expected):
    np.testing.assert_allclose(f_of_vector(x), expected, atol=1e-15)


def test_f_of_frame_examples(mb):
    np.testing.assert_allclose(f_of_frame(Frame(np.eye(2))).entries, [[1.0, -1.0], [0.0, 0.0]])
    r3 = np.sqrt(3) / 4
    np.testing.assert_allclose(f_of_frame(mb).entries, [[-1.0, 0.5, 0.5], [0.0, r3, -r3]],
                               atol=1e-15)
    h = np.sqrt(2) / 2
    np.testing.assert_allclose(f_of_frame(Frame.from_columns([[1, 0], [h, h]])).entries,
                               [[1.0, 0.0], [0.0, 0.5]], atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=6), st.floats(-5, 5))
def test_homogeneity(x, alpha):
    x = np.array(x)
    np.testing.assert_allclose(f_of_vector(alpha * x), alpha ** 2 * f_of_vector(x),
                               rtol=1e-12, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_fu_encodes_scaled_operator(seed, n):
    # F(Phi)u lists S11-Sjj then the upper off-diagonal of S = Phi diag(u) Phi^T,
    # so F(Phi)u = 0 exactly when S is a multiple of I
    rng = np.random.default_rng(seed)
    f = Frame(rng.standard_normal((n, n + 3)))
    u = rng.random(n + 3)
    s = f.matrix @ np.diag(u) @ f.matrix.T
    expected = [s[0, 0] - s[j, j] for j in range(1, n)]
    expected += [s[k, j] for k in range(n - 1) for j in range(k + 1, n)]
    np.testing.assert_allclose(f_of_frame(f).entries @ u, expected, atol=1e-12)


def test_kernel_vector_gives_multiple_of_identity(mb):
    u = np.full(3, 1 / 3)
    assert np.max(np.abs(f_of_frame(mb).entries @ u)) <= 1e-15
    s = frame_operator(apply_scaling(mb, ScalingWeights(u)))
    np.testing.assert_allclose(s, np.trace(s) / 2 * np.eye(2), atol=1e-10)
    # conversely a non-kernel weighting is not tight
    v = np.array([0.5, 0.25, 0.25])
    assert np.max(np.abs(f_of_frame(mb).entries @ v)) > 0.1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3))
def test_column_scaling_invariance(seed, n):
    rng = np.random.default_rng(seed)
    f = gaussian_frame(n, 3 * n, seed, unit_norm=False)
    c = rng.uniform(0.2, 5.0, f.m)
    g = Frame(f.matrix * c)
    np.testing.assert_allclose(f_of_frame(g).entries, f_of_frame(f).entries * c ** 2,
                               rtol=1e-12, atol=1e-12)
    assert solve_p1(f_of_frame(f)).scalable == solve_p1(f_of_frame(g)).scalable


def test_permutation_equivariance():
    f = gaussian_frame(3, 8, seed=5)
    perm = np.random.default_rng(0).permutation(8)
    np.testing.assert_array_equal(f_of_frame(Frame(f.matrix[:, perm])).entries,
                                  f_of_frame(f).entries[:, perm])
