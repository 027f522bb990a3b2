"""Exception hierarchy.

Every error raised for bad *data* derives from :class:`DataError`; the CLI
maps those to exit status 2.
"""


class SpecPredError(Exception):
    """Base class for all package errors."""


class DataError(SpecPredError, ValueError):
    """Input data cannot be processed."""


class LoadError(DataError):
    pass


class MissingValuesError(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class DegenerateSpectrum(DataError):
    """Residual power after mean removal is effectively zero."""


class AllSeriesDegenerate(DataError):
    pass


class NoValidPairs(DataError):
    pass


class AllSeriesFailed(DataError):
    pass


class UndefinedDelta(DataError):
    pass


class CalibrationFailed(DataError):
    """Bisection could not bring the measured omega within tolerance.

    ``best_alpha`` and ``best_omega`` hold the closest point visited.
    """

    def __init__(self, message, best_alpha=None, best_omega=None):
        super().__init__(message)
        self.best_alpha = best_alpha
        self.best_omega = best_omega


class DegenerateVariance(DataError):
    pass


class TooFewPoints(DataError):
    pass


class AllXEqual(DataError):
    pass
