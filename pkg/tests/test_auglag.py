import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framescale.auglag import (AugLagOptions, AugLagState, build_l_and_b, dual_update,
                               lagrangian_value_and_grad, primal_update, project_nonneg,
                               solve_auglag, write_trace_csv)
from framescale.exceptions import Inconclusive
from framescale.fmap import f_of_frame
from framescale.frame import Frame, apply_scaling, gaussian_frame, is_tight


@pytest.fixture
def lb2(identity2):
    return build_l_and_b(f_of_frame(identity2))


def test_primal_update_examples(lb2):
    l_mat, b = lb2
    # (I + L^T L) u = L^T b with L^T L = 2I, L^T b = (1, 1)
    np.testing.assert_allclose(primal_update(l_mat, b, np.zeros(3), 2.0), [1 / 3, 1 / 3],
                               atol=1e-12)
    np.testing.assert_allclose(primal_update(l_mat, b, np.zeros(3), 1e8), [0.5, 0.5], atol=1e-7)
    np.testing.assert_allclose(primal_update(l_mat, b, 5.0 * b, 5.0), [0, 0], atol=1e-15)
    with pytest.raises(ValueError):
        primal_update(l_mat, b, np.zeros(3), 0.0)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=20))
def test_projection(v):
    p = project_nonneg(v)
    assert np.all(p >= 0)
    np.testing.assert_array_equal(project_nonneg(p), p)
    v = np.array(v)
    np.testing.assert_array_equal(p[v >= 0], v[v >= 0])


def test_dual_update_formulas(lb2):
    l_mat, b = lb2
    u = np.array([0.2, 0.4])
    r = l_mat @ u - b
    mu0 = np.array([0.1, -0.2, 0.3])
    st_ = AugLagState(u, mu0, lam=2.0, eta=0.5)
    mu, lam = dual_update(st_, l_mat, b, "classical")
    np.testing.assert_allclose(mu, mu0 + 2.0 * r)
    assert lam == 3.0
    mu, lam = dual_update(st_, l_mat, b, "paper-literal")
    np.testing.assert_allclose(mu, mu0 - 0.5 * r)
    assert lam == pytest.approx(2.0 - 0.25 * r @ r)
    st_.lam = 1e8
    assert dual_update(st_, l_mat, b, "classical")[1] == 1e8
    st_.lam = 1e-8
    assert dual_update(st_, l_mat, b, "paper-literal")[1] == 1e-8
    with pytest.raises(ValueError):
        dual_update(st_, l_mat, b, "newton")


def test_lagrangian_value(lb2):
    l_mat, b = lb2
    val, grad = lagrangian_value_and_grad(np.zeros(2), np.zeros(3), 3.0, l_mat, b)
    assert val == pytest.approx(1.5)
    np.testing.assert_allclose(grad, -3.0 * l_mat.T @ b)


def test_primal_update_is_stationary():
    rng = np.random.default_rng(0)
    for _ in range(20):
        l_mat, b = build_l_and_b(f_of_frame(gaussian_frame(3, 7, int(rng.integers(1 << 30)))))
        mu, lam = rng.normal(size=l_mat.shape[0]), float(rng.uniform(0.1, 10))
        u = primal_update(l_mat, b, mu, lam)
        # the update minimises lam/2 * L(u)
        _, grad = lagrangian_value_and_grad(u, mu, lam, l_mat, b)
        assert np.max(np.abs(grad / lam)) <= 1e-10 * (1 + np.max(np.abs(mu)))


def test_gradient_finite_differences():
    rng = np.random.default_rng(1)
    l_mat, b = build_l_and_b(f_of_frame(gaussian_frame(2, 5, 3)))
    h = 1e-6
    for _ in range(100):
        u, mu = rng.normal(size=5), rng.normal(size=3)
        lam = float(rng.uniform(0.1, 5))
        _, grad = lagrangian_value_and_grad(u, mu, lam, l_mat, b)
        fd = np.empty(5)
        for i in range(5):
            e = np.zeros(5)
            e[i] = h
            fd[i] = (lagrangian_value_and_grad(u + e, mu, lam, l_mat, b)[0]
                     - lagrangian_value_and_grad(u - e, mu, lam, l_mat, b)[0]) / (2 * h)
        np.testing.assert_allclose(grad / lam, fd / lam, rtol=1e-6, atol=1e-6)


@pytest.mark.parametrize("name", ["identity2", "mb", "e1e2e1"])
def test_classical_converges(name, request):
    f = request.getfixturevalue(name)
    rep = solve_auglag(f_of_frame(f), AugLagOptions(res_tol=1e-9, max_iters=10_000,
                                                    check_primal=True))
    assert rep.details["lagrangian_residual"] <= 1e-9
    assert rep.details["iterations"] <= 10_000
    assert is_tight(apply_scaling(f, rep.weights), tol=1e-5)


def test_classical_known_weights(identity2, mb):
    rep = solve_auglag(f_of_frame(identity2), AugLagOptions(res_tol=1e-10))
    np.testing.assert_allclose(rep.weights.u, [0.5, 0.5], atol=1e-5)
    rep = solve_auglag(f_of_frame(mb), AugLagOptions(res_tol=1e-10))
    np.testing.assert_allclose(rep.weights.u, [1 / 3] * 3, atol=1e-5)


def test_classical_random_frames():
    from framescale.programs import solve_p1
    done = 0
    for seed in range(30):
        fm = f_of_frame(gaussian_frame(2, 8, seed))
        if not solve_p1(fm).scalable:
            continue
        rep = solve_auglag(fm, AugLagOptions(res_tol=1e-9))
        assert rep.residual <= 1e-8
        done += 1
    assert done >= 10


def test_literal_mode_is_inconclusive_or_correct(mb, identity2, e1e2e1):
    for f in (mb, identity2, e1e2e1):
        try:
            rep = solve_auglag(f_of_frame(f), AugLagOptions(update_mode="paper-literal",
                                                            max_iters=2000))
        except Inconclusive as exc:
            assert exc.report.status == "inconclusive"
        else:
            assert is_tight(apply_scaling(f, rep.weights), tol=1e-5)


def test_not_scalable_stalls(not_scalable):
    with pytest.raises(Inconclusive) as info:
        solve_auglag(f_of_frame(not_scalable), AugLagOptions(max_iters=500))
    assert info.value.report.details["lagrangian_residual"] > 0.1


def test_trace_csv(mb, tmp_path):
    rep = solve_auglag(f_of_frame(mb), AugLagOptions(record_trace=True))
    path = tmp_path / "trace.csv"
    write_trace_csv(rep.details["trace"], path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["iter", "residual", "lambda", "objective"]
    assert len(rows) - 1 == rep.details["iterations"]
    assert [int(r[0]) for r in rows[1:]] == list(range(1, len(rows)))


def test_stall_window_stops_early(not_scalable):
    with pytest.raises(Inconclusive) as info:
        solve_auglag(f_of_frame(not_scalable), AugLagOptions(stall_window=300))
    details = info.value.report.details
    assert details["stalled"] and details["iterations"] < 2000
    with pytest.raises(Inconclusive) as info:
        solve_auglag(f_of_frame(not_scalable), AugLagOptions(stall_window=None, max_iters=700))
    assert info.value.report.details["iterations"] == 700
