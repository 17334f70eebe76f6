"""Exception types.  Each carries a short ``code`` used in CLI reports."""


class S3HError(ValueError):
    code = "error"


class GridTooSmallError(S3HError):
    code = "grid-too-small"


class NotOnSphereError(S3HError):
    code = "not-on-sphere"


class NotAdaptedError(S3HError):
    code = "not-adapted"


class ConformalPointError(S3HError):
    code = "conformal-point"


class TransformDegenerateError(S3HError):
    code = "transform-degenerate"

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class FormulaMismatchError(S3HError):
    code = "formula-mismatch"


class ThetaUndefinedError(S3HError):
    code = "theta-undefined"


class ProfileHitsZeroError(S3HError):
    code = "profile-hits-zero"


class SeedInvalidError(S3HError):
    code = "seed-invalid"


class CompatGateError(S3HError):
    code = "compat-gate-failed"


class RenormalizationOverflowError(S3HError):
    code = "renormalization-overflow"


class WenteGateError(S3HError):
    code = "wente-gate-failed"


class ConformalInputError(S3HError):
    code = "conformal-input"


class ZeroLambdaError(S3HError):
    code = "zero-lambda"


class NotOnManifoldError(S3HError):
    code = "not-on-manifold"


class NotTangentError(S3HError):
    code = "not-tangent"


class RankDeficientWarning(UserWarning):
    """Procrustes fit is not unique; the residual is still valid."""


class CSVFormatError(S3HError):
    code = "parse-error"

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class PoleProximityError(S3HError):
    code = "pole-proximity"
