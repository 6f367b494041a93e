"""Independent numerical checks: quadrature, Monte Carlo and 1-D grid search.

None of this module knows about the closed-form costs; it only integrates
or minimises whatever callable it is handed.

Monte Carlo draws come from numpy's Philox4x64 counter-based bit generator
(:data:`RNG_ALGORITHM`).  Samples are generated in fixed-size chunks in
index order, so an estimate depends only on ``(f, prior, noise_variance,
n_samples, seed)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special
from scipy.stats import norm

from .core import GaussianPrior

RNG_ALGORITHM = "numpy.random.Philox(4x64-10)"
MC_CHUNK = 1_000_000

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    rng: str = RNG_ALGORITHM


@lru_cache(maxsize=16)
def gauss_hermite_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalised weights for expectations under N(0, 1)."""
    if order < 2:
        raise ValueError(f"quadrature order must be >= 2, got {order}")
    # scipy switches to an asymptotic scheme for large orders, where
    # numpy's hermegauss overflows (around 370 nodes)
    nodes, weights = special.roots_hermitenorm(order)
    weights = weights / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_hermite_expectation(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    prior: GaussianPrior,
    noise_variance: float,
    order: int = 201,
) -> float:
    """Tensor-product Gauss-Hermite estimate of E[f(m, w)].

    m ~ prior and w ~ N(0, noise_variance) are independent.  ``f`` must
    accept broadcastable arrays.  With ``noise_variance == 0`` the w axis
    collapses to the single node w = 0.
    """
    z, wt = gauss_hermite_rule(order)
    m = prior.mean + prior.std * z
    if noise_variance == 0:
        return float(np.sum(wt * f(m, np.zeros_like(m))))
    w = math.sqrt(noise_variance) * z
    vals = np.asarray(f(m[:, None], w[None, :]), dtype=float)
    vals = np.broadcast_to(vals, (order, order))
    return float(wt @ vals @ wt)


def mc_expectation(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    prior: GaussianPrior,
    noise_variance: float,
    n_samples: int,
    seed: int,
) -> McEstimate:
    """Seeded Monte Carlo estimate of E[f(m, w)] with its standard error."""
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    rng = np.random.Generator(np.random.Philox(seed))
    sigma_w = math.sqrt(noise_variance)
    count, mean, m2 = 0, 0.0, 0.0
    remaining = n_samples
    while remaining:
        n = min(remaining, MC_CHUNK)
        remaining -= n
        ms = prior.mean + prior.std * rng.standard_normal(n)
        ws = sigma_w * rng.standard_normal(n)
        vals = np.broadcast_to(np.asarray(f(ms, ws), dtype=float), (n,))
        c_mean = float(vals.mean())
        c_m2 = float(np.sum((vals - c_mean) ** 2))
        # Chan et al. pairwise combination of running moments
        delta = c_mean - mean
        total = count + n
        mean += delta * n / total
        m2 += c_m2 + delta ** 2 * count * n / total
        count = total
    std = math.sqrt(m2 / (count - 1))
    return McEstimate(mean=mean, std_error=std / math.sqrt(count), n_samples=count, seed=seed)


def golden_section(g: Callable[[float], float], a: float, b: float, rel_tol: float, max_iter: int = 500):
    """Shrink [a, b] around a minimum of a unimodal ``g``; ties move left."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(max_iter):
        if b - a <= rel_tol * max(abs(a), abs(b)) or b - a <= 1e-300:
            break
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
    return (c, gc) if gc <= gd else (d, gd)


def grid_minimize_1d(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    n_grid: int = 2048,
    refine_tol: float = 1e-12,
    spacing: str = "linear",
) -> tuple[float, float]:
    """Coarse scan of [lo, hi] followed by golden-section refinement.

    ``spacing="log"`` places the grid geometrically between
    ``hi * 1e-10`` and ``hi`` (plus ``lo`` itself); it needs ``lo >= 0``.
    The smallest x wins among equal grid values, and the returned value is
    never worse than the best grid value.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if n_grid < 3:
        raise ValueError(f"need n_grid >= 3, got {n_grid}")
    if refine_tol <= 0:
        raise ValueError("refine_tol must be positive")
    if spacing == "linear":
        xs = np.linspace(lo, hi, n_grid)
    elif spacing == "log":
        if lo < 0:
            raise ValueError("log spacing requires lo >= 0")
        start = max(lo, hi * 1e-10)
        xs = np.concatenate(([lo], np.geomspace(start, hi, n_grid - 1)))
        xs = np.unique(xs)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    gs = np.array([g(float(x)) for x in xs])
    i = int(np.argmin(gs))
    x_best, g_best = float(xs[i]), float(gs[i])
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, len(xs) - 1)])
    x_ref, g_ref = golden_section(g, a, b, refine_tol)
    if g_ref < g_best:
        return x_ref, g_ref
    return x_best, g_best


def w2_quantile_coupling(p: GaussianPrior, q: GaussianPrior) -> float:
    """W2 between scalar Gaussians via the monotone (quantile) coupling.

    Integrates (F_p^{-1}(t) - F_q^{-1}(t))**2 over t in (0, 1) numerically.
    """
    def integrand(t):
        return (norm.ppf(t, p.mean, p.std) - norm.ppf(t, q.mean, q.std)) ** 2

    val, _ = integrate.quad(integrand, 0.0, 1.0, limit=200, epsabs=1e-13, epsrel=1e-12)
    return math.sqrt(val)
