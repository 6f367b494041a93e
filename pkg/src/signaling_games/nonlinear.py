"""Sign-quantizer encoders versus the best affine commitment.

The quantizer sends x = level * sgn(m).  Its cost integrand jumps at
m = 0, which ruins Gauss-Hermite convergence in the m direction, so the
m-integral is done exactly on each half-line with truncated-normal moments
and only the smooth noise direction uses quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm

from .core import GameParams, GaussianPrior, Hard, NonZeroDecoderMean, PowerViolation, Soft
from . import stackelberg
from .oracle import gauss_hermite_rule

DEFAULT_ORDER = 201

Decoder = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuantizerEncoder:
    level: float

    def __post_init__(self):
        if not (math.isfinite(self.level) and self.level > 0):
            raise ValueError(f"quantizer level must be > 0, got {self.level}")

    def __call__(self, m):
        # np.sign(0) == 0; a null event under any Gaussian prior
        return self.level * np.sign(m)


@dataclass(frozen=True)
class QuantizerComparison:
    affine_cost: float
    quantizer_cost: float
    quantizer_wins: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _check_zero_mean(params: GameParams) -> None:
    if params.prior_d.mean != 0:
        raise NonZeroDecoderMean(f"tanh decoder needs mu_d = 0, got {params.prior_d.mean}")


def quantizer_decoder_best_response(params: GameParams, q: QuantizerEncoder) -> Decoder:
    """E_d[m | y] against the quantizer when the decoder's prior is N(0, var_d)."""
    _check_zero_mean(params)
    scale = math.sqrt(2.0 / math.pi) * params.prior_d.std
    gain = q.level / params.noise_variance

    def decode(y):
        return scale * np.tanh(gain * np.asarray(y, dtype=float))

    return decode


def _half_line_moments(prior: GaussianPrior, sign: int) -> tuple[float, float, float]:
    """P(sign*m > 0), E[m; sign*m > 0], E[m^2; sign*m > 0]."""
    mu, sd = prior.mean, prior.std
    alpha = sign * mu / sd
    p = float(norm.cdf(alpha))
    dens = float(norm.pdf(alpha))
    m1 = mu * p + sign * sd * dens
    m2 = (mu ** 2 + prior.variance) * p + sign * mu * sd * dens
    return p, m1, m2


def quantizer_squared_error(
    prior: GaussianPrior,
    noise_variance: float,
    q: QuantizerEncoder,
    decoder: Decoder,
    order: int = DEFAULT_ORDER,
) -> float:
    """E[(m - decoder(q(m) + w))**2] with m ~ prior and w ~ N(0, noise_variance)."""
    z, wt = gauss_hermite_rule(order)
    w = math.sqrt(noise_variance) * z
    total = 0.0
    for sign in (1, -1):
        p, m1, m2 = _half_line_moments(prior, sign)
        u = decoder(sign * q.level + w)
        total += m2 - 2.0 * m1 * float(wt @ u) + p * float(wt @ (u * u))
    return float(total)


def quantizer_encoder_cost(params: GameParams, q: QuantizerEncoder, order: int = DEFAULT_ORDER) -> float:
    _check_zero_mean(params)
    penalty = 0.0
    if isinstance(params.constraint, Hard):
        if q.level ** 2 > params.constraint.p_bar:
            raise PowerViolation(f"level**2 = {q.level ** 2} exceeds the budget {params.constraint.p_bar}")
    else:
        penalty = params.constraint.lam * q.level ** 2
    decoder = quantizer_decoder_best_response(params, q)
    return quantizer_squared_error(params.prior_e, params.noise_variance, q, decoder, order) + penalty


def quantizer_decoder_cost(params: GameParams, q: QuantizerEncoder, decoder: Decoder | None = None,
                           order: int = DEFAULT_ORDER) -> float:
    """Decoder-prior squared error; defaults to the tanh best response."""
    if decoder is None:
        decoder = quantizer_decoder_best_response(params, q)
    return quantizer_squared_error(params.prior_d, params.noise_variance, q, decoder, order)


def compare_quantizer_vs_affine(params: GameParams, q: QuantizerEncoder) -> QuantizerComparison:
    quant = quantizer_encoder_cost(params, q)
    if isinstance(params.constraint, Soft):
        affine = stackelberg.solve_soft(params).cost_e
    else:
        affine = stackelberg.solve_hard(params).cost_e
    return QuantizerComparison(float(affine), float(quant), bool(quant < affine))
