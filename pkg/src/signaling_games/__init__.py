"""Nash and Stackelberg equilibria of scalar Gaussian signaling games with mismatched priors."""

from .core import (
    AffineDecoder,
    AffineEncoder,
    DegenerateResponse,
    EquilibriumResult,
    GameParams,
    GaussianPrior,
    Hard,
    InvalidPerturbation,
    Kind,
    NonZeroDecoderMean,
    PowerViolation,
    SignalingGameError,
    SingularMatrix,
    Soft,
    UnconstrainedGame,
    WrongConstraintMode,
    affine_cost_decoder,
    affine_cost_encoder,
    decoder_best_response,
    encoder_best_response_soft,
    w2_gaussian,
)

__version__ = "0.1.0"
