"""Robust phase-retrieval instances and their per-sample oracles.

The objective is f(x) = (1/n) sum_i |<a_i, x>^2 - b_i|, the exact-penalty
form of the quadratic measurement system b_i = <a_i, x*>^2.  Each sample i
contributes f_i(x) = |c_i(x)| with residual c_i(x) = <a_i, x>^2 - b_i and
gradient grad c_i(x) = 2 <a_i, x> a_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import Rng, sample_laplace, sample_orthogonal, sample_unit_sphere

__all__ = [
    "NoiseSpec",
    "DesignSpec",
    "PhaseRetrievalInstance",
    "generate_instance",
    "objective",
    "residual_and_grad",
    "subgradient",
    "weak_convexity_constant",
]


@dataclass(frozen=True)
class NoiseSpec:
    """Observation noise: none, additive Laplace, or gross corruption."""

    kind: str = "none"  # 'none' | 'laplace' | 'corrupt'
    scale: float = 0.0  # Laplace scale sigma
    p: float = 0.0  # corruption fraction
    var: float = 0.0  # corruption replacement variance

    def __post_init__(self):
        if self.kind not in ("none", "laplace", "corrupt"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "laplace" and self.scale <= 0:
            raise ValueError("Laplace scale must be positive")
        if self.kind == "corrupt":
            if not 0.0 <= self.p <= 1.0:
                raise ValueError("corruption fraction must lie in [0, 1]")
            if self.var <= 0:
                raise ValueError("corruption variance must be positive")

    @classmethod
    def noiseless(cls):
        return cls("none")

    @classmethod
    def laplace(cls, scale):
        return cls("laplace", scale=float(scale))

    @classmethod
    def corrupted(cls, p, var=25.0):
        return cls("corrupt", p=float(p), var=float(var))


@dataclass(frozen=True)
class DesignSpec:
    """Design matrix family.

    'UR': A = U R with R diagonal d x d, diag linearly spaced in [1, kappa];
    controls the condition number of A exactly.
    'RU': A = R U with R diagonal n x n, diag linearly spaced in [1, kappa];
    makes the row norms ||a_i|| irregular (vary by roughly a factor kappa).
    """

    kind: str = "UR"  # 'UR' | 'RU'
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in ("UR", "RU"):
            raise ValueError(f"unknown design kind {self.kind!r}")
        if self.kappa < 1.0:
            raise ValueError("kappa must be >= 1")


@dataclass(frozen=True)
class PhaseRetrievalInstance:
    A: np.ndarray  # n x d, rows are measurement vectors a_i
    b: np.ndarray  # n observations
    x_star: np.ndarray  # planted signal, unit norm
    design: DesignSpec
    noise: NoiseSpec
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "x_star", np.asarray(self.x_star, dtype=float))
        n, d = self.A.shape
        if n < 1 or d < 1 or self.b.shape != (n,) or self.x_star.shape != (d,):
            raise ValueError("inconsistent instance shapes")

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def d(self):
        return self.A.shape[1]

    def sample(self, i):
        """(a_i, b_i) pair for sample index i."""
        i = self._check_index(i)
        return self.A[i], self.b[i]

    def _check_index(self, i):
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexError(f"sample index {i} out of range [0, {self.n})")
        return i


def _linspaced_diag(kappa, m):
    # r_j = 1 + (kappa - 1)(j - 1)/(m - 1); a single entry degenerates to kappa
    if m == 1:
        return np.array([kappa])
    return np.linspace(1.0, kappa, m)


def generate_instance(n, d, design=DesignSpec(), noise=NoiseSpec(), seed=0):
    """Draw a seeded robust phase-retrieval instance.

    x* is uniform on the unit sphere, A follows the design spec, and
    b_i = <a_i, x*>^2 plus noise (Laplace additive, or independent
    Bernoulli(p) replacement by a Normal(0, var) draw).
    """
    n, d = int(n), int(d)
    if d < 1 or n < d:
        raise ValueError(f"need n >= d >= 1, got n={n}, d={d}")
    rng = Rng(seed)
    x_star = sample_unit_sphere(d, rng.derive(0))
    u = sample_orthogonal(n, d, rng.derive(1))
    if design.kind == "UR":
        A = u * _linspaced_diag(design.kappa, d)[np.newaxis, :]
    else:
        A = u * _linspaced_diag(design.kappa, n)[:, np.newaxis]
    b = (A @ x_star) ** 2
    noise_rng = rng.derive(2)
    if noise.kind == "laplace":
        b = b + sample_laplace(noise.scale, noise_rng, size=n)
    elif noise.kind == "corrupt":
        mask = noise_rng.uniform(n) < noise.p
        replacements = np.sqrt(noise.var) * noise_rng.standard_normal(n)
        b = np.where(mask, replacements, b)
    return PhaseRetrievalInstance(A, b, x_star, design, noise, int(seed))


def objective(inst, x):
    """Full empirical objective (1/n) sum_i |<a_i, x>^2 - b_i|."""
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.d,):
        raise ValueError(f"expected x of shape ({inst.d},), got {x.shape}")
    return float(np.mean(np.abs((inst.A @ x) ** 2 - inst.b)))


def residual_and_grad(inst, i, x):
    """Residual c_i(x) = <a_i,x>^2 - b_i and its gradient 2 <a_i,x> a_i."""
    a, b = inst.sample(i)
    x = np.asarray(x, dtype=float)
    u = float(a @ x)
    return u * u - b, 2.0 * u * a


def subgradient(inst, i, x):
    """Chosen Frechet subgradient sign(c_i(x)) * grad c_i(x).

    sign(0) = 0 at the kink: 0 is a valid subgradient of |.| there and the
    choice is deterministic.
    """
    c, grad = residual_and_grad(inst, i, x)
    return np.sign(c) * grad


def weak_convexity_constant(inst, i):
    """Weak-convexity constant of f_i: 2 ||a_i||^2.

    h(t) = |t| is 1-Lipschitz and grad c_i is 2||a_i||^2-Lipschitz, so the
    product bound gives lambda_i = 2 ||a_i||^2.
    """
    a, _ = inst.sample(i)
    return 2.0 * float(a @ a)
