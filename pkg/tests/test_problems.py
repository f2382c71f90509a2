import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wcopt import DesignSpec, NoiseSpec, PhaseRetrievalInstance, generate_instance
from wcopt.problems import (
    objective,
    residual_and_grad,
    subgradient,
    weak_convexity_constant,
)
from wcopt.rng import Rng, sample_unit_sphere


def _single_sample_instance(a, b):
    a = np.asarray(a, dtype=float)
    return PhaseRetrievalInstance(
        A=a[np.newaxis, :],
        b=np.array([float(b)]),
        x_star=np.zeros(len(a)),
        design=DesignSpec(),
        noise=NoiseSpec(),
        seed=0,
    )


# -- generation --------------------------------------------------------------


def test_kappa_one_singular_values():
    inst = generate_instance(500, 50, DesignSpec("UR", 1.0), seed=1)
    sv = np.linalg.svd(inst.A, compute_uv=False)
    assert np.all(np.abs(sv - 1.0) <= 1e-10)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kappa_ur_exact(seed):
    inst = generate_instance(500, 50, DesignSpec("UR", 10.0), seed=seed)
    sv = np.linalg.svd(inst.A, compute_uv=False)
    assert abs(sv.max() / sv.min() - 10.0) <= 1e-8


def test_kappa_ru_row_norm_irregularity():
    # RU controls row-norm spread: ||a_i|| = r_i since U's rows sit inside an
    # orthonormal frame only column-wise; the singular-value ratio of A is
    # bounded by kappa but generally below it.
    inst = generate_instance(500, 50, DesignSpec("RU", 10.0), seed=2)
    norms = np.linalg.norm(inst.A, axis=1)
    assert norms.max() / norms.min() > 5.0
    sv = np.linalg.svd(inst.A, compute_uv=False)
    assert sv.max() / sv.min() <= 10.0 + 1e-8


def test_noiseless_interpolates():
    for seed in (0, 5):
        inst = generate_instance(60, 10, DesignSpec("UR", 3.0), seed=seed)
        assert objective(inst, inst.x_star) <= 1e-12
        assert objective(inst, -inst.x_star) <= 1e-12


def test_laplace_noise_perturbs_observations():
    clean = generate_instance(60, 10, seed=3)
    noisy = generate_instance(60, 10, noise=NoiseSpec.laplace(1.0), seed=3)
    assert np.array_equal(clean.A, noisy.A)
    assert not np.allclose(clean.b, noisy.b)


def test_corruption_fraction():
    clean = generate_instance(2000, 10, seed=4)
    corrupted = generate_instance(2000, 10, noise=NoiseSpec.corrupted(0.1, 25.0), seed=4)
    changed = np.mean(clean.b != corrupted.b)
    assert 0.05 < changed < 0.15
    all_corrupt = generate_instance(200, 10, noise=NoiseSpec.corrupted(1.0, 25.0), seed=4)
    clean200 = generate_instance(200, 10, seed=4)
    assert np.all(all_corrupt.b != clean200.b)


def test_generate_invalid_shape():
    with pytest.raises(ValueError):
        generate_instance(5, 10)


def test_generation_deterministic():
    a = generate_instance(40, 6, DesignSpec("RU", 2.0), NoiseSpec.laplace(0.5), seed=9)
    b = generate_instance(40, 6, DesignSpec("RU", 2.0), NoiseSpec.laplace(0.5), seed=9)
    assert np.array_equal(a.A, b.A) and np.array_equal(a.b, b.b)


# -- oracles -----------------------------------------------------------------


def test_objective_direct():
    inst = _single_sample_instance([1.0, 0.0], 4.0)
    assert objective(inst, np.array([3.0, 0.0])) == 5.0


def test_objective_dimension_mismatch():
    inst = _single_sample_instance([1.0, 0.0], 4.0)
    with pytest.raises(ValueError):
        objective(inst, np.zeros(3))


def test_residual_and_grad_direct():
    inst = _single_sample_instance([1.0, 0.0], 4.0)
    c, grad = residual_and_grad(inst, 0, np.array([3.0, 0.0]))
    assert c == 5.0
    assert np.array_equal(grad, [6.0, 0.0])
    c0, grad0 = residual_and_grad(inst, 0, np.zeros(2))
    assert c0 == -4.0
    assert np.array_equal(grad0, [0.0, 0.0])


def test_residual_grad_finite_differences():
    inst = generate_instance(20, 5, seed=8)
    rng = Rng(21)
    x = 1.5 * sample_unit_sphere(5, rng)
    h = 1e-6
    for i in (0, 7, 19):
        _, grad = residual_and_grad(inst, i, x)
        fd = np.empty(5)
        for j in range(5):
            e = np.zeros(5)
            e[j] = h
            cp, _ = residual_and_grad(inst, i, x + e)
            cm, _ = residual_and_grad(inst, i, x - e)
            fd[j] = (cp - cm) / (2 * h)
        denom = max(1.0, np.linalg.norm(grad))
        assert np.linalg.norm(fd - grad) / denom < 1e-6


def test_index_out_of_range():
    inst = _single_sample_instance([1.0, 0.0], 4.0)
    with pytest.raises(IndexError):
        residual_and_grad(inst, 1, np.zeros(2))
    with pytest.raises(IndexError):
        subgradient(inst, -2, np.zeros(2))


def test_subgradient_signs():
    inst = _single_sample_instance([1.0, 0.0], 4.0)
    assert np.array_equal(subgradient(inst, 0, np.array([3.0, 0.0])), [6.0, 0.0])
    # residual exactly zero: the kink tie-break picks 0
    assert np.array_equal(subgradient(inst, 0, np.array([2.0, 0.0])), [0.0, 0.0])
    assert np.array_equal(subgradient(inst, 0, np.array([1.0, 0.0])), [-2.0, 0.0])


def test_weak_convexity_constant_values():
    assert weak_convexity_constant(_single_sample_instance([1.0, 0.0], 1.0), 0) == 2.0
    assert weak_convexity_constant(_single_sample_instance([3.0, 4.0], 1.0), 0) == 50.0


def test_weak_convexity_midpoint_probe():
    inst = generate_instance(30, 10, DesignSpec("UR", 4.0), seed=13)
    rng = Rng(77)
    for _ in range(1000):
        i = int(rng.integers(inst.n))
        lam = weak_convexity_constant(inst, i)
        x0 = 2.0 * rng.uniform() * sample_unit_sphere(10, rng)
        y1 = x0 + 0.2 * sample_unit_sphere(10, rng)
        y2 = x0 + 0.2 * sample_unit_sphere(10, rng)
        mid = 0.5 * (y1 + y2)

        def reg_f(y):
            c, _ = residual_and_grad(inst, i, y)
            return abs(c) + 0.5 * lam * float((y - x0) @ (y - x0))

        assert 0.5 * (reg_f(y1) + reg_f(y2)) - reg_f(mid) >= -1e-9


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    scale=st.floats(0.0, 2.0),
)
def test_subgradient_weak_convexity_inequality(seed, scale):
    inst = generate_instance(15, 4, seed=3)
    rng = Rng(seed)
    x = scale * sample_unit_sphere(4, rng)
    y = x + 0.1 * rng.uniform() * sample_unit_sphere(4, rng)
    i = int(rng.integers(inst.n))
    g = subgradient(inst, i, x)
    lam = weak_convexity_constant(inst, i)
    cx, _ = residual_and_grad(inst, i, x)
    cy, _ = residual_and_grad(inst, i, y)
    lhs = abs(cy)
    rhs = abs(cx) + g @ (y - x) - 0.5 * lam * float((y - x) @ (y - x))
    assert lhs >= rhs - 1e-9
