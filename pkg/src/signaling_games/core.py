"""Domain types, affine best responses and closed-form affine costs.

Everything here is scalar: a source m, channel input x = A m + C, channel
output y = x + w with w ~ N(0, noise_variance), and decoder action
u = K y + L.  Each player evaluates expectations under its own Gaussian
prior.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union


class SignalingGameError(ValueError):
    """Base class for solver errors raised by this package."""


class DegenerateResponse(SignalingGameError):
    pass


class WrongConstraintMode(SignalingGameError):
    pass


class UnconstrainedGame(SignalingGameError):
    pass


class SingularMatrix(SignalingGameError):
    pass


class NonZeroDecoderMean(SignalingGameError):
    pass


class PowerViolation(SignalingGameError):
    pass


class InvalidPerturbation(SignalingGameError):
    pass


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class GaussianPrior:
    mean: float
    variance: float

    def __post_init__(self):
        if not _finite(self.mean, self.variance):
            raise ValueError(f"prior parameters must be finite, got {self}")
        if self.variance <= 0:
            raise ValueError(f"prior variance must be > 0, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class Soft:
    """Penalty ``lam * x**2`` added to the encoder's cost."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"soft penalty must be finite and >= 0, got {self.lam}")


@dataclass(frozen=True)
class Hard:
    """Encoder power budget ``E_e[x**2] <= p_bar``."""

    p_bar: float

    def __post_init__(self):
        if not math.isfinite(self.p_bar) or self.p_bar <= 0:
            raise ValueError(f"power budget must be finite and > 0, got {self.p_bar}")


PowerConstraint = Union[Soft, Hard]


@dataclass(frozen=True)
class GameParams:
    prior_e: GaussianPrior
    prior_d: GaussianPrior
    noise_variance: float
    constraint: PowerConstraint

    def __post_init__(self):
        if not math.isfinite(self.noise_variance) or self.noise_variance <= 0:
            raise ValueError(f"noise variance must be finite and > 0, got {self.noise_variance}")
        if not isinstance(self.constraint, (Soft, Hard)):
            raise TypeError(f"constraint must be Soft or Hard, got {type(self.constraint).__name__}")

    @property
    def mean_gap_sq(self) -> float:
        """(mu_e - mu_d)**2"""
        return (self.prior_e.mean - self.prior_d.mean) ** 2

    @property
    def lam(self) -> float:
        """Soft penalty; 0 in hard mode so the power term drops out of costs."""
        return self.constraint.lam if isinstance(self.constraint, Soft) else 0.0


@dataclass(frozen=True)
class AffineEncoder:
    a: float
    c: float = 0.0

    def __post_init__(self):
        if not _finite(self.a, self.c):
            raise ValueError(f"encoder coefficients must be finite, got {self}")

    def __call__(self, m):
        return self.a * m + self.c


@dataclass(frozen=True)
class AffineDecoder:
    k: float
    l: float = 0.0  # noqa: E741

    def __post_init__(self):
        if not _finite(self.k, self.l):
            raise ValueError(f"decoder coefficients must be finite, got {self}")

    def __call__(self, y):
        return self.k * y + self.l


class Kind(str, enum.Enum):
    INFORMATIVE = "Informative"
    NON_INFORMATIVE = "NonInformative"
    BOUNDARY_INFORMATIVE = "BoundaryInformative"


@dataclass(frozen=True)
class EquilibriumResult:
    kind: Kind
    encoder: AffineEncoder
    decoder: AffineDecoder
    cost_e: float
    cost_d: float

    def __post_init__(self):
        if (self.kind is Kind.NON_INFORMATIVE) != (self.encoder.a == 0.0):
            raise ValueError(f"kind {self.kind.value} inconsistent with encoder gain {self.encoder.a}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "encoder": {"a": self.encoder.a, "c": self.encoder.c},
            "decoder": {"k": self.decoder.k, "l": self.decoder.l},
            "cost_e": self.cost_e,
            "cost_d": self.cost_d,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EquilibriumResult":
        return cls(
            kind=Kind(d["kind"]),
            encoder=AffineEncoder(float(d["encoder"]["a"]), float(d["encoder"]["c"])),
            decoder=AffineDecoder(float(d["decoder"]["k"]), float(d["decoder"]["l"])),
            cost_e=float(d["cost_e"]),
            cost_d=float(d["cost_d"]),
        )


def compare_with_tolerance(lhs: float, rhs: float, rtol: float = 1e-12) -> int:
    """Three-way comparison that calls the two sides equal within ``rtol``.

    Returns -1 if lhs < rhs, 0 if equal within tolerance, +1 otherwise.
    """
    if abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs)):
        return 0
    return -1 if lhs < rhs else 1


def decoder_best_response(params: GameParams, enc: AffineEncoder) -> AffineDecoder:
    """Conditional mean E_d[m | y] for the affine encoder ``enc``."""
    var_d, mu_d = params.prior_d.variance, params.prior_d.mean
    nv = params.noise_variance
    denom = enc.a ** 2 * var_d + nv
    k = enc.a * var_d / denom
    l = (nv * mu_d - enc.a * enc.c * var_d) / denom  # noqa: E741
    return AffineDecoder(k, l)


def encoder_best_response_soft(dec: AffineDecoder, lam: float) -> AffineEncoder:
    """Pointwise minimiser of (m - K x - L)**2 + lam * x**2 over x."""
    denom = dec.k ** 2 + lam
    if denom == 0.0:
        raise DegenerateResponse("decoder ignores the channel and lam = 0: every encoder is a best response")
    return AffineEncoder(dec.k / denom, -dec.k * dec.l / denom)


def _squared_error(prior: GaussianPrior, noise_variance: float, enc: AffineEncoder, dec: AffineDecoder) -> float:
    # m - u = (1 - K A) m - (K C + L) - K w
    slope = 1.0 - dec.k * enc.a
    offset = dec.k * enc.c + dec.l
    bias = slope * prior.mean - offset
    return bias ** 2 + slope ** 2 * prior.variance + dec.k ** 2 * noise_variance


def encoder_power(prior: GaussianPrior, enc: AffineEncoder) -> float:
    """E[(A m + C)**2] under ``prior``."""
    return (enc.a * prior.mean + enc.c) ** 2 + enc.a ** 2 * prior.variance


def affine_cost_encoder(params: GameParams, enc: AffineEncoder, dec: AffineDecoder) -> float:
    cost = _squared_error(params.prior_e, params.noise_variance, enc, dec)
    if isinstance(params.constraint, Soft):
        cost += params.constraint.lam * encoder_power(params.prior_e, enc)
    return cost


def affine_cost_decoder(params: GameParams, enc: AffineEncoder, dec: AffineDecoder) -> float:
    return _squared_error(params.prior_d, params.noise_variance, enc, dec)


def w2_gaussian(p: GaussianPrior, q: GaussianPrior) -> float:
    """Order-2 Wasserstein distance between two scalar Gaussians."""
    return math.hypot(p.mean - q.mean, p.std - q.std)
