"""Affine Nash equilibria: simultaneous best responses, no commitment."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    AffineDecoder,
    AffineEncoder,
    EquilibriumResult,
    GameParams,
    Hard,
    Kind,
    SingularMatrix,
    Soft,
    UnconstrainedGame,
    WrongConstraintMode,
    affine_cost_decoder,
    affine_cost_encoder,
    decoder_best_response,
)

COND_LIMIT = 1e12


def _soft_lambda(params: GameParams) -> float:
    if not isinstance(params.constraint, Soft):
        raise WrongConstraintMode("soft Nash solver needs a soft power constraint")
    lam = params.constraint.lam
    if lam == 0:
        raise UnconstrainedGame("lam = 0: the affine Nash fixed point is not characterised without a power penalty")
    return lam


def solve_soft(params: GameParams) -> EquilibriumResult:
    """Unique affine Nash equilibrium under a soft power penalty.

    The policies depend only on the decoder's prior and the channel; the
    encoder's prior enters the encoder's cost alone.
    """
    lam = _soft_lambda(params)
    var_d, mu_d = params.prior_d.variance, params.prior_d.mean
    nv = params.noise_variance
    if lam >= var_d / nv:
        enc = AffineEncoder(0.0, 0.0)
        dec = AffineDecoder(0.0, mu_d)
        kind = Kind.NON_INFORMATIVE
    else:
        gamma = math.sqrt(math.sqrt(nv / (lam * var_d)) - nv / var_d)
        enc = AffineEncoder(gamma, -mu_d * gamma + 0.0)
        dec = AffineDecoder(gamma * math.sqrt(var_d * lam / nv), mu_d)
        kind = Kind.INFORMATIVE
    return EquilibriumResult(kind, enc, dec,
                             affine_cost_encoder(params, enc, dec),
                             affine_cost_decoder(params, enc, dec))


def nash_soft_costs(params: GameParams) -> tuple[float, float]:
    lam = _soft_lambda(params)
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    nv, gap = params.noise_variance, params.mean_gap_sq
    if lam >= var_d / nv:
        return var_e + gap, var_d
    root = math.sqrt(lam * var_d * nv)
    return root * (var_e + var_d + gap) / var_d - lam * nv, root


@dataclass(frozen=True)
class NashHardSolution:
    equilibrium: EquilibriumResult
    kkt_multiplier: float

    def to_dict(self) -> dict:
        return {**self.equilibrium.to_dict(), "kkt_multiplier": self.kkt_multiplier}


def solve_hard(params: GameParams) -> NashHardSolution:
    """Informative affine Nash equilibrium with the power budget binding."""
    if not isinstance(params.constraint, Hard):
        raise WrongConstraintMode("hard Nash solver needs a hard power constraint")
    mu_d = params.prior_d.mean
    s = params.prior_e.variance + params.mean_gap_sq
    a = math.sqrt(params.constraint.p_bar / s)
    enc = AffineEncoder(a, -a * mu_d + 0.0)
    dec = decoder_best_response(params, enc)
    # L = mu_d analytically; the best-response formula reproduces it up to rounding
    dec = AffineDecoder(dec.k, mu_d)
    nu = dec.k / a - dec.k ** 2
    eq = EquilibriumResult(Kind.INFORMATIVE, enc, dec,
                           affine_cost_encoder(params, enc, dec),
                           affine_cost_decoder(params, enc, dec))
    return NashHardSolution(eq, nu)


def nash_hard_costs(params: GameParams) -> tuple[float, float]:
    if not isinstance(params.constraint, Hard):
        raise WrongConstraintMode("hard Nash costs need a hard power constraint")
    var_d, nv = params.prior_d.variance, params.noise_variance
    p = params.constraint.p_bar
    s = params.prior_e.variance + params.mean_gap_sq
    denom = p * var_d / s + nv
    cost_e = (p * var_d ** 2 / s + s * nv) * nv / denom ** 2
    cost_d = var_d * nv / denom
    return cost_e, cost_d


# --- multidimensional soft game -------------------------------------------


@dataclass(frozen=True)
class MatrixGame:
    sigma_d: np.ndarray
    sigma_w: np.ndarray
    lam: float

    def __post_init__(self):
        sd = np.atleast_2d(np.asarray(self.sigma_d, dtype=float))
        sw = np.atleast_2d(np.asarray(self.sigma_w, dtype=float))
        object.__setattr__(self, "sigma_d", sd)
        object.__setattr__(self, "sigma_w", sw)
        n = sd.shape[0]
        for name, mat in (("sigma_d", sd), ("sigma_w", sw)):
            if mat.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {mat.shape}")
            if not np.allclose(mat, mat.T, rtol=0, atol=1e-12 * max(1.0, np.abs(mat).max())):
                raise ValueError(f"{name} must be symmetric")
            if np.linalg.eigvalsh(mat).min() <= 0:
                raise ValueError(f"{name} must be positive definite")
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")

    @property
    def dimension(self) -> int:
        return self.sigma_d.shape[0]


def _solve(mat: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    if np.linalg.cond(mat) > COND_LIMIT:
        raise SingularMatrix(f"{what} is numerically singular (condition number > {COND_LIMIT:g})")
    return np.linalg.solve(mat, rhs)


def decoder_gain_transpose(game: MatrixGame, a: np.ndarray) -> np.ndarray:
    """F = (A Sd A^T + Sw)^{-1} A Sd; the decoder's gain matrix is F^T."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return _solve(a @ game.sigma_d @ a.T + game.sigma_w, a @ game.sigma_d, "A Sd A^T + Sw")


def multidim_t_map(game: MatrixGame, a: np.ndarray) -> np.ndarray:
    """Encoder best response to the decoder that best-responds to ``a``.

    With decoder gain K = F^T the encoder minimises
    ||m - L - K x||^2 + lam ||x||^2 pointwise, giving
    A = (K^T K + lam I)^{-1} K^T = (F F^T + lam I)^{-1} F.
    For n = 1 this is K / (K^2 + lam).
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = game.dimension
    if a.shape != (n, n):
        raise ValueError(f"encoder matrix must be {n}x{n}, got {a.shape}")
    f = decoder_gain_transpose(game, a)
    return _solve(f @ f.T + game.lam * np.eye(n), f, "F F^T + lam I")


def multidim_fixed_point(
    game: MatrixGame,
    a0: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    damping: float = 0.5,
) -> tuple[np.ndarray, float, bool]:
    """Damped iteration a <- (1 - damping) a + damping T(a).

    Returns the last iterate, its residual ||a - T(a)||_F and whether the
    residual reached ``tol``.  Non-convergence is reported, not raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    a = np.atleast_2d(np.asarray(a0, dtype=float)).copy()
    residual = math.inf
    for _ in range(max_iter):
        t = multidim_t_map(game, a)
        residual = float(np.linalg.norm(a - t))
        if residual <= tol:
            return a, residual, True
        a = (1 - damping) * a + damping * t
    t = multidim_t_map(game, a)
    residual = float(np.linalg.norm(a - t))
    return a, residual, residual <= tol


def multidim_intercept(a: np.ndarray, mu_d: np.ndarray) -> np.ndarray:
    """Encoder offset C = -A mu_d, so the decoder's offset is its prior mean."""
    return -np.atleast_2d(a) @ np.asarray(mu_d, dtype=float)
