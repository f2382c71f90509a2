"""Deterministic seeded sampling.

All randomness in the library flows through :class:`Rng`, a thin wrapper
around numpy's counter-based Philox generator keyed by a SeedSequence.
Identical seeds produce identical streams on every platform (numpy pins the
bit-stream of Philox and of its ziggurat Gaussian sampler), and child
streams obtained via :meth:`Rng.derive` are statistically independent of
each other and of the parent.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Rng",
    "sample_unit_sphere",
    "sample_orthogonal",
    "sample_laplace",
    "laplace_inverse_cdf",
]


class Rng:
    """Reproducible random stream with splittable derivation.

    Parameters
    ----------
    seed : int
        64-bit master seed.
    """

    def __init__(self, seed, _seq=None):
        self.seed = int(seed)
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self._seq = _seq if _seq is not None else np.random.SeedSequence(self.seed)
        self._gen = np.random.Generator(np.random.Philox(self._seq))

    def derive(self, index):
        """Child stream `index`; reproducible and independent of the parent."""
        index = int(index)
        if index < 0:
            raise ValueError("derivation index must be nonnegative")
        child = np.random.SeedSequence(
            entropy=self._seq.entropy, spawn_key=self._seq.spawn_key + (index,)
        )
        return Rng(self.seed, _seq=child)

    # -- raw draws -----------------------------------------------------------

    def uniform(self, size=None):
        return self._gen.random(size)

    def standard_normal(self, size=None):
        # numpy's ziggurat sampler; pinned by the Generator API stream policy.
        return self._gen.standard_normal(size)

    def integers(self, high, size=None):
        """Uniform integers in [0, high)."""
        return self._gen.integers(0, high, size=size)

    def __repr__(self):
        return f"Rng(seed={self.seed}, spawn_key={self._seq.spawn_key})"


def laplace_inverse_cdf(u, scale):
    """Inverse CDF of the mean-zero Laplace(scale) distribution at u in (0,1)."""
    q = np.asarray(u) - 0.5
    return -scale * np.sign(q) * np.log1p(-2.0 * np.abs(q))


def sample_laplace(scale, rng, size=None):
    """Mean-zero Laplace draw(s) with the given scale, via inverse-CDF sampling.

    Variance is 2 * scale**2.
    """
    if scale <= 0:
        raise ValueError(f"Laplace scale must be positive, got {scale}")
    return laplace_inverse_cdf(rng.uniform(size), scale)


def sample_unit_sphere(d, rng):
    """Uniform draw from the unit sphere in R^d (normalized Gaussian)."""
    d = int(d)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    while True:
        g = rng.standard_normal(d)
        nrm = np.linalg.norm(g)
        if nrm > 0:  # zero draw has probability 0; guard anyway
            return g / nrm


def sample_orthogonal(n, d, rng):
    """Uniform (Haar) n x d matrix with orthonormal columns, n >= d.

    QR of an i.i.d. standard Gaussian matrix, with the sign of each diagonal
    entry of R forced positive; plain QR is not Haar-uniform without the
    sign correction.
    """
    n, d = int(n), int(d)
    if d < 1 or n < d:
        raise ValueError(f"need n >= d >= 1, got n={n}, d={d}")
    g = rng.standard_normal((n, d))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs
