"""Noiseless, unconstrained signaling (cheap talk).

The decoder sees x directly and both players pay (m - u)**2.  Priors are
assumed mutually absolutely continuous; Gaussians with positive variance
always are, so nothing is checked here.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .core import AffineDecoder, AffineEncoder, EquilibriumResult, GaussianPrior, Kind
from .oracle import McEstimate, mc_expectation

Policy = Callable[[np.ndarray], np.ndarray]


def fully_informative_equilibrium() -> tuple[AffineEncoder, AffineDecoder]:
    """Identity encoder and identity decoder: u = x = m, zero cost for everyone."""
    return AffineEncoder(1.0, 0.0), AffineDecoder(1.0, 0.0)


def babbling_equilibrium(prior_d: GaussianPrior) -> tuple[AffineEncoder, AffineDecoder]:
    """Constant encoder x = 0 and constant decoder u = mu_d."""
    return AffineEncoder(0.0, 0.0), AffineDecoder(0.0, prior_d.mean)


def cheap_talk_cost(prior: GaussianPrior, encoder: Policy, decoder: Policy) -> float:
    """Exact E[(m - decoder(encoder(m)))**2] for affine policies under ``prior``."""
    if not (isinstance(encoder, AffineEncoder) and isinstance(decoder, AffineDecoder)):
        raise TypeError("closed form needs affine policies; use mc_cheap_talk_cost otherwise")
    slope = 1.0 - decoder.k * encoder.a
    offset = decoder.k * encoder.c + decoder.l
    return (slope * prior.mean - offset) ** 2 + slope ** 2 * prior.variance


def mc_cheap_talk_cost(prior: GaussianPrior, encoder: Policy, decoder: Policy,
                       n_samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    return mc_expectation(lambda m, w: (m - decoder(encoder(m))) ** 2, prior, 0.0, n_samples, seed)


def fully_informative_result(prior_e: GaussianPrior, prior_d: GaussianPrior) -> EquilibriumResult:
    enc, dec = fully_informative_equilibrium()
    return EquilibriumResult(Kind.INFORMATIVE, enc, dec,
                             cheap_talk_cost(prior_e, enc, dec), cheap_talk_cost(prior_d, enc, dec))


def babbling_result(prior_e: GaussianPrior, prior_d: GaussianPrior) -> EquilibriumResult:
    enc, dec = babbling_equilibrium(prior_d)
    return EquilibriumResult(Kind.NON_INFORMATIVE, enc, dec,
                             cheap_talk_cost(prior_e, enc, dec), cheap_talk_cost(prior_d, enc, dec))
