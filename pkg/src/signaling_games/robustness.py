"""Prior-perturbation sweeps of the affine Stackelberg encoder cost.

Only the affine class is probed: the encoder's cost at its best affine
commitment is tracked as one prior is pushed towards the other.  Priors
are perturbed additively in (mean, standard deviation), so for identical
base priors the W2 distance is exactly epsilon * |direction|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .core import (
    GameParams,
    GaussianPrior,
    Hard,
    InvalidPerturbation,
    PowerConstraint,
    Soft,
    w2_gaussian,
)
from . import stackelberg


class Which(str, enum.Enum):
    ENCODER = "encoder"
    DECODER = "decoder"


@dataclass(frozen=True)
class PerturbationSweep:
    base: GameParams
    d_mean: float
    d_sigma: float
    epsilons: tuple[float, ...]
    which: Which = Which.ENCODER

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "which", Which(self.which))
        if not eps:
            raise ValueError("need at least one epsilon")
        if any(e <= 0 for e in eps):
            raise ValueError("epsilons must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilons must be strictly decreasing")


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    w2: float
    stackelberg_cost_e: float
    team_cost: float
    gap_to_team: float


def team_cost(prior: GaussianPrior, noise_variance: float, constraint: PowerConstraint) -> float:
    """Encoder cost of the team-optimal affine scheme under a common prior."""
    var = prior.variance
    if isinstance(constraint, Hard):
        return var * noise_variance / (constraint.p_bar + noise_variance)
    lam = constraint.lam
    if lam < var / noise_variance:
        return 2.0 * math.sqrt(lam * var * noise_variance) - lam * noise_variance
    return var


def perturbed_params(sweep: PerturbationSweep, eps: float) -> GameParams:
    target = sweep.base.prior_e if sweep.which is Which.ENCODER else sweep.base.prior_d
    std = target.std + eps * sweep.d_sigma
    if std <= 0:
        raise InvalidPerturbation(f"epsilon = {eps} drives the standard deviation to {std}")
    moved = GaussianPrior(target.mean + eps * sweep.d_mean, std ** 2)
    if sweep.which is Which.ENCODER:
        return replace(sweep.base, prior_e=moved)
    return replace(sweep.base, prior_d=moved)


def _reference_prior(sweep: PerturbationSweep) -> GaussianPrior:
    # the prior the perturbed one converges to
    return sweep.base.prior_d if sweep.which is Which.ENCODER else sweep.base.prior_e


def stackelberg_cost_e(params: GameParams) -> float:
    if isinstance(params.constraint, Soft):
        return stackelberg.solve_soft(params).cost_e
    return stackelberg.solve_hard(params).cost_e


def _row(sweep: PerturbationSweep, eps: float, team: float) -> SweepRow:
    params = perturbed_params(sweep, eps) if eps > 0 else sweep.base
    cost = stackelberg_cost_e(params)
    return SweepRow(
        epsilon=eps,
        w2=w2_gaussian(params.prior_e, params.prior_d),
        stackelberg_cost_e=cost,
        team_cost=team,
        gap_to_team=abs(cost - team),
    )


def run_sweep(sweep: PerturbationSweep, include_limit: bool = False) -> list[SweepRow]:
    """One row per epsilon, largest first.

    ``include_limit`` appends the unperturbed epsilon = 0 row, whose gap is
    zero when the base priors coincide.
    """
    base = sweep.base
    team = team_cost(_reference_prior(sweep), base.noise_variance, base.constraint)
    # validate every point before solving any of them
    for eps in sweep.epsilons:
        perturbed_params(sweep, eps)
    rows = [_row(sweep, eps, team) for eps in sweep.epsilons]
    if include_limit:
        rows.append(_row(sweep, 0.0, team))
    return rows
