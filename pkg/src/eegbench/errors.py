"""Exception hierarchy shared across the package.

Every error raised on a contract violation derives from :class:`BenchError`
so callers can catch benchmark failures without masking programming errors.
"""


class BenchError(Exception):
    """Base class for all benchmark-domain errors."""


class InvalidInput(BenchError):
    """Malformed argument: wrong shape, non-finite values, bad enum value."""


class DimensionMismatch(BenchError):
    """Operands whose dimensions are incompatible."""


class NotPositiveDefinite(BenchError):
    """A matrix required to be SPD has an eigenvalue at or below the floor."""


class NonConvergence(BenchError):
    """An iterative solver exhausted its iteration budget.

    Carries the last iterate and the residual at the point of failure.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class InvalidBand(BenchError):
    """Filter band edges outside (0, Nyquist) or inverted."""


class SignalTooShort(BenchError):
    """Signal shorter than the padding a zero-phase filter requires."""


class EmptyEpochs(BenchError):
    """Epoching produced no trials (all events out of bounds)."""


class UnsupportedRatio(BenchError):
    """Resampling ratio has no small rational representation."""


class InvalidEmbedding(BenchError):
    """Delay embedding parameters leave no valid sample overlap."""


class DegenerateLabels(BenchError):
    """Label set unusable: single class, or a class with too few trials."""


class InvalidHyper(BenchError):
    """Hyperparameter outside its documented domain."""


class SingularCovariance(BenchError):
    """Unshrunk covariance too ill-conditioned to invert."""


class StratificationImpossible(BenchError):
    """Requested fold count exceeds the size of the smallest class."""


class InsufficientUnits(BenchError):
    """Fewer evaluation units than a protocol needs (e.g. one session)."""


class GridExhausted(BenchError):
    """Every grid candidate failed during the inner search.

    ``causes`` maps each failed candidate (as a dict) to its error.
    """

    def __init__(self, message, causes=None):
        super().__init__(message)
        self.causes = causes or []


class UndefinedMetric(BenchError):
    """Metric undefined on the given data (e.g. AUC with one class)."""


class IncompleteGrid(BenchError):
    """A pipeline/session grid with holes where a full matrix is required."""


class EffectUndefined(BenchError):
    """Effect size undefined because the paired differences have no variance."""


class InvalidConfig(BenchError):
    """Benchmark configuration that fails validation."""


class NotFound(BenchError):
    """Lookup key absent from a registry or catalog."""


class CorruptBundle(BenchError):
    """Stored epoch bundle fails its integrity checks."""


class UnsupportedVersion(BenchError):
    """Stored bundle written with a schema version this build cannot read."""
