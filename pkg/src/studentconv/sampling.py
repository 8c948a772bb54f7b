"""Exact samplers built on the stochastic sum representations.

Randomness comes from numpy's counter-based Philox bit generator, so a
batch is reproducible bit-for-bit from (seed, spec digest).  Parallel
use should split streams deterministically, e.g. via
``np.random.SeedSequence(seed).spawn(n)`` handed to separate sampler
calls, or ``Philox(seed).jumped(i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixing import GaussStudentParams, StudentPairParams

__all__ = [
    "SampleBatch",
    "MixingDraws",
    "sample_uniform_sphere",
    "sample_k",
    "sample_n",
    "sample_z",
    "sample_y",
]


@dataclass(frozen=True)
class SampleBatch:
    """i.i.d. draws of a d-dimensional law, tagged for reproducibility."""

    dimension: int
    points: np.ndarray  # shape (count, dimension)
    seed: int
    spec_digest: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dimension:
            raise ValueError(f"points must have shape (count, {self.dimension})")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.points, axis=1)


@dataclass(frozen=True)
class MixingDraws:
    """i.i.d. draws of a nonnegative integer mixing variable."""

    values: np.ndarray
    seed: int

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or np.any(vals < 0):
            raise ValueError("values must be a 1-d array of nonnegative integers")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _check_count(count: int) -> None:
    if count < 1 or count != int(count):
        raise ValueError(f"count must be a positive integer, got {count}")


def _sphere(rng: np.random.Generator, d: int, count: int) -> np.ndarray:
    x = rng.standard_normal((count, d))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    # a zero norm has probability zero; guard against denormal flushes
    norms[norms == 0.0] = 1.0
    return x / norms


def sample_uniform_sphere(d: int, count: int, seed: int) -> SampleBatch:
    """Unit vectors uniform on the sphere in R^d (signs +-1 for d = 1)."""
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    _check_count(count)
    pts = _sphere(_rng(seed), d, count)
    return SampleBatch(dimension=d, points=pts, seed=seed, spec_digest=f"sphere:d={d}")


def _draw_k(rng: np.random.Generator, p: GaussStudentParams, count: int) -> np.ndarray:
    # a ~ Gamma(nu, rate gamma^2); K | a ~ NB(d/2, a/(1+a)) drawn through the
    # Gamma-Poisson mixture with scale (1-p)/p = 1/a.
    a = rng.gamma(p.nu, 1.0 / (p.gamma * p.gamma), size=count)
    a = np.maximum(a, np.finfo(float).tiny)
    lam = rng.gamma(p.d / 2.0, 1.0 / a)
    return rng.poisson(np.minimum(lam, 1e15))


def _draw_n(rng: np.random.Generator, p: StudentPairParams, count: int) -> np.ndarray:
    # t ~ Beta(mu, nu); N | t ~ NB(d/2, t(1-t)) through the Gamma-Poisson mixture
    t = rng.beta(p.mu, p.nu, size=count)
    pp = np.clip(t * (1.0 - t), np.finfo(float).tiny, 0.25)
    lam = rng.gamma(p.d / 2.0, (1.0 - pp) / pp)
    return rng.poisson(np.minimum(lam, 1e15))


def sample_k(p: GaussStudentParams, count: int, seed: int) -> MixingDraws:
    """Draws of the mixing variable K with P(K = k) = alpha_k."""
    _check_count(count)
    if p.gamma == 0.0:
        raise ValueError("sampling requires gamma > 0")
    return MixingDraws(values=_draw_k(_rng(seed), p, count), seed=seed)


def sample_n(p: StudentPairParams, count: int, seed: int) -> MixingDraws:
    """Draws of the mixing variable N with P(N = n) = c_n."""
    _check_count(count)
    return MixingDraws(values=_draw_n(_rng(seed), p, count), seed=seed)


def sample_z(
    p: GaussStudentParams,
    count: int,
    seed: int,
    method: str = "gaussian-scale-mixture",
) -> SampleBatch:
    """Draws of Z = X + T (Gaussian scale sigma plus Student with 2*nu df).

    ``method='gaussian-scale-mixture'`` uses Z = sigma N1 + N2/sqrt(2a)
    with a ~ Gamma(nu, 1); ``method='radial-compound'`` draws the radius
    sigma * chi(2K + d) with K from the mixing law and an independent
    uniform direction.  The two agree in distribution.
    """
    _check_count(count)
    if p.gamma == 0.0 or not math.isfinite(p.sigma):
        raise ValueError("sampling requires gamma > 0 (finite sigma)")
    rng = _rng(seed)
    d = p.d
    if method == "gaussian-scale-mixture":
        a = rng.gamma(p.nu, 1.0, size=count)
        a = np.maximum(a, np.finfo(float).tiny)
        n1 = rng.standard_normal((count, d))
        n2 = rng.standard_normal((count, d))
        pts = p.sigma * n1 + n2 / np.sqrt(2.0 * a)[:, None]
    elif method == "radial-compound":
        k = _draw_k(rng, p, count)
        radius = p.sigma * np.sqrt(2.0 * rng.gamma(k + d / 2.0, 1.0))
        pts = radius[:, None] * _sphere(rng, d, count)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SampleBatch(
        dimension=d, points=pts, seed=seed, spec_digest=f"{p.digest()}:{method}"
    )


def sample_y(
    p: StudentPairParams,
    count: int,
    seed: int,
    method: str = "subordination",
) -> SampleBatch:
    """Draws of Y = T1 + T2 (independent Students with 2*nu and 2*mu df).

    ``method='subordination'`` draws each Student as N/sqrt(2G) with
    G ~ Gamma(half-df, 1); ``method='radial-compound'`` draws the radius
    of a (2N + d)-dimensional Student with 2*(nu+mu) df, N from the
    mixing law, times a uniform direction.
    """
    _check_count(count)
    rng = _rng(seed)
    d = p.d
    if method == "subordination":
        g1 = np.maximum(rng.gamma(p.nu, 1.0, size=count), np.finfo(float).tiny)
        g2 = np.maximum(rng.gamma(p.mu, 1.0, size=count), np.finfo(float).tiny)
        t1 = rng.standard_normal((count, d)) / np.sqrt(2.0 * g1)[:, None]
        t2 = rng.standard_normal((count, d)) / np.sqrt(2.0 * g2)[:, None]
        pts = t1 + t2
    elif method == "radial-compound":
        n = _draw_n(rng, p, count)
        chi2 = rng.gamma(n + d / 2.0, 1.0)
        g = np.maximum(rng.gamma(p.eta, 1.0, size=count), np.finfo(float).tiny)
        radius = np.sqrt(chi2 / g)
        pts = radius[:, None] * _sphere(rng, d, count)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SampleBatch(
        dimension=d, points=pts, seed=seed, spec_digest=f"{p.digest()}:{method}"
    )
