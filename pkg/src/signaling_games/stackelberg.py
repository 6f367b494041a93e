"""Affine Stackelberg equilibria: the encoder commits, the decoder best-responds.

Against the decoder's conditional-mean response the encoder's cost depends
on its gain only through x = A**2, so both solvers work on the scalar
objective ``f(x)`` and return the canonical non-negative root A = sqrt(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    AffineEncoder,
    EquilibriumResult,
    GameParams,
    Hard,
    Kind,
    Soft,
    WrongConstraintMode,
    affine_cost_decoder,
    affine_cost_encoder,
    compare_with_tolerance,
    decoder_best_response,
)
from .oracle import golden_section, grid_minimize_1d

GRID_POINTS = 2048


@dataclass(frozen=True)
class SoftStackelbergDiagnostics:
    cond_decreasing: bool
    cond_concave: bool
    cond_discriminant: bool
    discriminant: float
    objective_at_zero: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _require(params: GameParams, mode: type) -> None:
    if not isinstance(params.constraint, mode):
        raise WrongConstraintMode(
            f"expected a {mode.__name__.lower()} power constraint, got {type(params.constraint).__name__.lower()}"
        )


def soft_objective(params: GameParams, x: float) -> float:
    """Encoder cost at gain**2 = x after the decoder best-responds and C = -A mu_e."""
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    nv = params.noise_variance
    s = var_e + params.mean_gap_sq
    denom = x * var_d + nv
    return nv ** 2 * (s - var_d) / denom ** 2 + var_d * nv / denom + params.lam * x * var_e


def hard_objective(params: GameParams, x: float) -> float:
    """Encoder squared error at gain**2 = x against the best-responding decoder."""
    var_d, nv = params.prior_d.variance, params.noise_variance
    s = params.prior_e.variance + params.mean_gap_sq
    denom = x * var_d + nv
    return (x * var_d ** 2 * nv + nv ** 2 * s) / denom ** 2


def _equal_cost_quadratic(params: GameParams) -> tuple[float, float, float]:
    """Coefficients of the quadratic in x whose positive roots satisfy f(x) = f(0)."""
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    nv, lam = params.noise_variance, params.lam
    s = var_e + params.mean_gap_sq
    qa = lam * var_d ** 2 * var_e
    qb = 2 * lam * var_e * var_d * nv - var_d ** 2 * s
    qc = var_d ** 2 * nv + lam * var_e * nv ** 2 - 2 * var_d * nv * s
    return qa, qb, qc


def classify_soft(params: GameParams, rtol: float = 1e-12) -> tuple[Kind, SoftStackelbergDiagnostics]:
    _require(params, Soft)
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    nv, lam = params.noise_variance, params.lam
    s = var_e + params.mean_gap_sq

    # objective strictly decreasing at x = 0
    decreasing = compare_with_tolerance(lam * var_e * nv, var_d * (2 * s - var_d), rtol) < 0
    # concave near 0, convex further out
    concave = compare_with_tolerance(3 * s, 2 * var_d, rtol) < 0
    # f(x) = f(0) has a real root
    disc_ok = compare_with_tolerance(4 * lam * var_e * nv * (var_d - s), var_d * s ** 2, rtol) <= 0
    qa, qb, qc = _equal_cost_quadratic(params)

    diag = SoftStackelbergDiagnostics(
        cond_decreasing=decreasing,
        cond_concave=concave,
        cond_discriminant=disc_ok,
        discriminant=qb ** 2 - 4 * qa * qc,
        objective_at_zero=s,
    )
    informative = decreasing or (concave and disc_ok)
    return (Kind.INFORMATIVE if informative else Kind.NON_INFORMATIVE), diag


def soft_search_upper(params: GameParams) -> float:
    """Right end of the search interval for the soft objective."""
    f0 = params.prior_e.variance + params.mean_gap_sq
    lam = params.lam
    if lam > 0:
        # beyond here lam * var_e * x alone exceeds 2 f(0)
        return 2.0 * f0 / (lam * params.prior_e.variance)
    nv, var_d = params.noise_variance, params.prior_d.variance
    return 100.0 * (nv / var_d) * max(1.0, f0 * var_d / (var_d * nv))


def _result(params: GameParams, kind: Kind, a: float, cost_e: float | None = None,
            cost_d: float | None = None) -> EquilibriumResult:
    c = -a * params.prior_e.mean + 0.0  # no negative zero
    enc = AffineEncoder(a, c)
    dec = decoder_best_response(params, enc)
    if cost_e is None:
        cost_e = affine_cost_encoder(params, enc, dec)
    if cost_d is None:
        cost_d = affine_cost_decoder(params, enc, dec)
    return EquilibriumResult(kind, enc, dec, cost_e, cost_d)


def solve_soft(params: GameParams, tol: float = 1e-12, rtol: float = 1e-12) -> EquilibriumResult:
    """Best affine commitment of a soft-constrained encoder.

    When the informative and babbling commitments tie exactly (the real
    root of f(x) = f(0) is a double root) the informative tangent point
    is returned with kind ``BoundaryInformative``.
    """
    _require(params, Soft)
    if tol <= 0:
        raise ValueError("tol must be positive")
    kind, diag = classify_soft(params, rtol)
    if kind is Kind.NON_INFORMATIVE:
        return _result(params, kind, 0.0)

    qa, qb, qc = _equal_cost_quadratic(params)
    if not diag.cond_decreasing and compare_with_tolerance(qb ** 2, 4 * qa * qc, rtol) == 0:
        return _result(params, Kind.BOUNDARY_INFORMATIVE, math.sqrt(-qb / (2 * qa)))

    def g(x):
        return soft_objective(params, x)

    x_star, _ = grid_minimize_1d(g, 0.0, soft_search_upper(params), GRID_POINTS, tol, spacing="log")
    if x_star == 0.0:
        # the dip below f(0) fell between grid points; it lies between the roots
        root = math.sqrt(max(qb ** 2 - 4 * qa * qc, 0.0))
        lo, hi = sorted(((-qb - root) / (2 * qa), (-qb + root) / (2 * qa)))
        x_star, _ = golden_section(g, max(lo, 0.0), hi, tol)
    return _result(params, kind, math.sqrt(x_star))


def classify_hard(params: GameParams, rtol: float = 1e-12) -> Kind:
    _require(params, Hard)
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    s = var_e + params.mean_gap_sq
    lhs = var_e / s - 2 * var_e / var_d
    rhs = params.constraint.p_bar / params.noise_variance
    cmp = compare_with_tolerance(lhs, rhs, rtol)
    if cmp < 0:
        return Kind.INFORMATIVE
    if cmp == 0:
        return Kind.BOUNDARY_INFORMATIVE
    return Kind.NON_INFORMATIVE


def hard_informative_costs(params: GameParams) -> tuple[float, float]:
    """Closed-form encoder and decoder costs when the power budget binds."""
    var_e, var_d = params.prior_e.variance, params.prior_d.variance
    nv, p = params.noise_variance, params.constraint.p_bar
    gap = params.mean_gap_sq
    denom = p * var_d + var_e * nv
    cost_e = (p * var_d ** 2 * var_e * nv + nv ** 2 * var_e ** 3 + nv ** 2 * var_e ** 2 * gap) / denom ** 2
    cost_d = var_e * var_d * nv / denom
    return cost_e, cost_d


def solve_hard(params: GameParams, rtol: float = 1e-12) -> EquilibriumResult:
    _require(params, Hard)
    kind = classify_hard(params, rtol)
    if kind is Kind.NON_INFORMATIVE:
        return _result(params, kind, 0.0,
                       cost_e=params.prior_e.variance + params.mean_gap_sq,
                       cost_d=params.prior_d.variance)
    a = math.sqrt(params.constraint.p_bar / params.prior_e.variance)
    cost_e, cost_d = hard_informative_costs(params)
    return _result(params, kind, a, cost_e=cost_e, cost_d=cost_d)
