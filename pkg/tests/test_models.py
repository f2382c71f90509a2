import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wcopt.models import (
    ModelKind,
    Regularizer,
    model_value,
    prox_scalar,
    proxlinear_canonical,
    step,
    step_guarded,
    step_proxlinear,
    step_proxpoint,
    step_subgradient,
)
from wcopt.rng import Rng, sample_unit_sphere

ALL_KINDS = [
    ModelKind.subgradient(),
    ModelKind.prox_linear(),
    ModelKind.prox_point(),
    ModelKind.guarded(1.0),
]


def _random_sample(rng, d=5):
    a = (0.3 + 2.0 * rng.uniform()) * sample_unit_sphere(d, rng)
    b = 4.0 * rng.uniform() - 2.0
    return a, float(b)


# -- subgradient step --------------------------------------------------------


def test_subgradient_step_plain():
    res = step_subgradient(np.array([3.0, 0.0]), (np.array([1.0, 0.0]), 4.0), 0.5)
    assert np.allclose(res.x_next, [0.0, 0.0])


def test_subgradient_step_kink_fixed_point():
    x = np.array([2.0, 0.0])  # residual exactly 0 -> g = 0
    res = step_subgradient(x, (np.array([1.0, 0.0]), 4.0), 3.0)
    assert np.array_equal(res.x_next, x)
    assert res.model_decrease == 0.0


def test_subgradient_step_ridge_closed_form():
    res = step_subgradient(
        np.array([3.0, 0.0]), (np.array([1.0, 0.0]), 4.0), 1.0, Regularizer(1.0)
    )
    assert np.allclose(res.x_next, [-1.5, 0.0])


def test_subgradient_step_rejects_nonfinite():
    with pytest.raises(ValueError):
        step_subgradient(np.array([np.nan, 0.0]), (np.array([1.0, 0.0]), 4.0), 0.5)


# -- prox-linear step --------------------------------------------------------


def test_proxlinear_zero_residual_fixed_point():
    x = np.array([2.0, 0.0])
    res = step_proxlinear(x, (np.array([1.0, 0.0]), 4.0), 0.7)
    assert np.array_equal(res.x_next, x)


def test_proxlinear_zero_direction_fixed_point():
    x = np.array([0.0, 1.0])  # <a, x> = 0, linearized model constant
    res = step_proxlinear(x, (np.array([1.0, 0.0]), 4.0), 0.7)
    assert np.array_equal(res.x_next, x)


def test_canonical_unit_offset():
    # min |1 + <a, y>| + 0.5||y||^2 with a = e1: multiplier 1, boundary clamp
    y = proxlinear_canonical(np.zeros(2), np.array([1.0, 0.0]), 1.0)
    assert np.allclose(y, [-1.0, 0.0])
    obj = abs(1.0 + y[0]) + 0.5 * float(y @ y)
    grid = oracles.grid_min_canonical(np.zeros(2), np.array([1.0, 0.0]), 1.0)
    assert obj == pytest.approx(0.5, abs=1e-12)
    assert obj <= grid + 1e-9


def test_canonical_interior_multiplier():
    y = proxlinear_canonical(np.zeros(2), np.array([1.0, 0.0]), 0.3)
    assert np.allclose(y, [-0.3, 0.0])
    obj = abs(0.3 + y[0]) + 0.5 * float(y @ y)
    grid = oracles.grid_min_canonical(np.zeros(2), np.array([1.0, 0.0]), 0.3)
    assert obj <= grid + 1e-9


def test_proxlinear_grid_oracle_fuzz():
    rng = Rng(17)
    for _ in range(200):
        a, b = _random_sample(rng)
        x = 2.0 * rng.uniform() * sample_unit_sphere(5, rng)
        alpha = 10.0 ** (2.0 * rng.uniform() - 1.5)
        res = step_proxlinear(x, (a, b), alpha)
        obj = oracles.proxlinear_model_objective(res.x_next, x, a, b, alpha)
        grid = oracles.grid_min_proxlinear(x, a, b, alpha, points=20001)
        assert obj <= grid + 1e-6


# -- scalar prox reduction ---------------------------------------------------


def test_prox_scalar_zero_residual():
    assert prox_scalar(2.0, 4.0, 1.0) == 0.0


def test_prox_scalar_negative_b_matches_grid():
    w = prox_scalar(0.7, -1.3, 0.5)
    w_grid, v_grid = oracles.grid_argmin_prox_scalar(0.7, -1.3, 0.5)
    assert oracles.psi_scalar(w, 0.7, -1.3, 0.5) <= v_grid + 1e-4


def test_prox_scalar_heavy_penalty():
    w = prox_scalar(0.0, 1.0, 100.0)
    assert abs(w) < 0.05
    _, v_grid = oracles.grid_argmin_prox_scalar(0.0, 1.0, 100.0)
    assert oracles.psi_scalar(w, 0.0, 1.0, 100.0) <= v_grid + 1e-4


def test_prox_scalar_invalid_penalty():
    with pytest.raises(ValueError):
        prox_scalar(1.0, 1.0, 0.0)


@settings(max_examples=300, deadline=None)
@given(
    u0=st.floats(-2.0, 2.0),
    b=st.floats(-4.0, 4.0),
    penalty=st.floats(0.05, 50.0),
)
def test_prox_scalar_never_beaten_by_grid(u0, b, penalty):
    w = prox_scalar(u0, b, penalty)
    _, v_grid = oracles.grid_argmin_prox_scalar(u0, b, penalty, points=20001)
    assert oracles.psi_scalar(w, u0, b, penalty) <= v_grid + 1e-9


# -- proximal-point steps ----------------------------------------------------


def test_proxpoint_zero_residual_fixed_point():
    x = np.array([2.0, 0.0])
    res = step_proxpoint(x, (np.array([1.0, 0.0]), 4.0), 0.5, 2.0)
    assert np.array_equal(res.x_next, x)


def test_proxpoint_grid_oracle():
    rng = Rng(23)
    a, b = _random_sample(rng)
    x = sample_unit_sphere(5, rng)
    alpha, lam = 0.1, 2.0 * float(a @ a)
    res = step_proxpoint(x, (a, b), alpha, lam)

    def total(y):
        return abs(float(a @ y) ** 2 - b) + 0.5 * (lam + 1.0 / alpha) * float(
            (y - x) @ (y - x)
        )

    an2 = float(a @ a)
    ts = np.linspace(-3.0, 3.0, 10_000)
    grid_best = min(total(x + (t / an2) * a) for t in ts)
    assert total(res.x_next) <= grid_best + 1e-6


def test_proxpoint_vanishing_stepsize():
    rng = Rng(29)
    a, b = _random_sample(rng)
    x = sample_unit_sphere(5, rng)
    res = step_proxpoint(x, (a, b), 1e-8, 2.0 * float(a @ a))
    assert np.linalg.norm(res.x_next - x) <= 1e-6


def test_guarded_inactive_constraint_matches_proxpoint():
    rng = Rng(31)
    a, b = _random_sample(rng)
    x = sample_unit_sphere(5, rng)
    lam = 2.0 * float(a @ a)
    unconstrained = step_proxpoint(x, (a, b), 0.05, lam)
    guarded = step_guarded(x, (a, b), 0.05, lam, epsilon=10.0)
    assert np.allclose(unconstrained.x_next, guarded.x_next, atol=1e-12)


def test_guarded_degenerate_ball():
    rng = Rng(37)
    a, b = _random_sample(rng)
    x = sample_unit_sphere(5, rng)
    res = step_guarded(x, (a, b), 1.0, 2.0 * float(a @ a), epsilon=1e-12)
    assert np.linalg.norm(res.x_next - x) <= 1e-10


def test_guarded_grid_oracle_and_ball():
    rng = Rng(41)
    for _ in range(50):
        a, b = _random_sample(rng)
        x = sample_unit_sphere(5, rng)
        lam = 2.0 * float(a @ a)
        eps = 0.05
        res = step_guarded(x, (a, b), 1.0, lam, epsilon=eps)
        assert np.linalg.norm(res.x_next - x) <= eps + 1e-12

        an = math.sqrt(float(a @ a))
        penalty = (lam + 1.0) / (an * an)
        u0 = float(a @ x)
        _, v_grid = oracles.grid_argmin_prox_scalar(
            u0, b, penalty, lo=-eps * an, hi=eps * an, points=20001, w_max=eps * an
        )
        w = float(a @ (res.x_next - x))
        assert oracles.psi_scalar(w, u0, b, penalty) <= v_grid + 1e-4


# -- model values and conditions ---------------------------------------------


def test_model_value_at_center_matches_function():
    rng = Rng(43)
    for _ in range(1000):
        a, b = _random_sample(rng)
        x = 2.0 * rng.uniform() * sample_unit_sphere(5, rng)
        f_x = abs(float(a @ x) ** 2 - b)
        for kind in ALL_KINDS:
            assert abs(model_value(kind, x, x, (a, b)) - f_x) <= 1e-12


def test_model_value_proxlinear_zero_residual():
    x = np.array([2.0, 0.0])
    assert model_value(ModelKind.prox_linear(), x, x, (np.array([1.0, 0.0]), 4.0)) == 0.0


def test_model_value_guarded_outside_ball():
    x = np.zeros(2)
    y = np.array([3.0, 0.0])
    val = model_value(ModelKind.guarded(1.0), x, y, (np.array([1.0, 0.0]), 4.0))
    assert val == math.inf


def test_model_convexity_midpoint():
    rng = Rng(47)
    for _ in range(1000):
        a, b = _random_sample(rng)
        x = sample_unit_sphere(5, rng)
        y1 = x + 0.3 * rng.uniform() * sample_unit_sphere(5, rng)
        y2 = x + 0.3 * rng.uniform() * sample_unit_sphere(5, rng)
        mid = 0.5 * (y1 + y2)
        for kind in ALL_KINDS:
            m1 = model_value(kind, x, y1, (a, b))
            m2 = model_value(kind, x, y2, (a, b))
            mm = model_value(kind, x, mid, (a, b))
            assert 0.5 * (m1 + m2) - mm >= -1e-9


def test_model_lower_bound_with_claim_constant():
    rng = Rng(53)
    for _ in range(1000):
        a, b = _random_sample(rng)
        delta = 2.0 * float(a @ a)
        x = sample_unit_sphere(5, rng)
        y = x + 0.1 * rng.uniform() * sample_unit_sphere(5, rng)
        f_y = abs(float(a @ y) ** 2 - b)
        d2 = float((y - x) @ (y - x))
        for kind in ALL_KINDS:
            m = model_value(kind, x, y, (a, b))
            assert f_y >= m - 0.5 * delta * d2 - 1e-9


def test_step_optimality_fuzz():
    rng = Rng(59)
    for _ in range(40):
        a, b = _random_sample(rng)
        x = sample_unit_sphere(5, rng)
        alpha = 0.3
        lam = 2.0 * float(a @ a)
        for kind in ALL_KINDS:
            res = step(kind, x, (a, b), alpha, lambda_s=lam)

            def reg_model(y):
                return model_value(kind, x, y, (a, b), lambda_s=lam) + float(
                    (y - x) @ (y - x)
                ) / (2 * alpha)

            base = reg_model(res.x_next)
            for _ in range(100):
                u = 0.01 * rng.uniform() * sample_unit_sphere(5, rng)
                assert reg_model(res.x_next + u) >= base - 1e-9


def test_step_norm_monotone_in_alpha():
    rng = Rng(61)
    alphas = np.logspace(-3, 2, 30)
    for _ in range(20):
        a, b = _random_sample(rng)
        x = sample_unit_sphere(5, rng)
        lam = 2.0 * float(a @ a)
        for kind in ALL_KINDS:
            moves = [
                np.linalg.norm(step(kind, x, (a, b), al, lambda_s=lam).x_next - x)
                for al in alphas
            ]
            assert np.all(np.diff(moves) >= -1e-9)


def test_model_decrease_nonnegative():
    rng = Rng(67)
    for _ in range(200):
        a, b = _random_sample(rng)
        x = 2.0 * rng.uniform() * sample_unit_sphere(5, rng)
        alpha = 10.0 ** (2.0 * rng.uniform() - 1.0)
        for kind in ALL_KINDS:
            assert step(kind, x, (a, b), alpha).model_decrease >= -1e-9
