"""Exception hierarchy.

Errors are grouped by the CLI exit code they map to: ``DataError`` (2) for
anything wrong with input files or datasets, ``TrainingError`` (3) for solver
and scaling failures.
"""


class GssvmError(Exception):
    """Base class for all package errors."""


class DataError(GssvmError):
    pass


class TrainingError(GssvmError):
    pass


class _LineError(DataError):
    def __init__(self, line, detail=""):
        self.line = line
        msg = f"line {line}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class MalformedLine(_LineError):
    pass


class ZeroLabel(_LineError):
    pass


class NonIncreasingIndex(_LineError):
    pass


class EmptyDataset(DataError):
    pass


class BadK(DataError):
    pass


class LengthMismatch(DataError):
    pass


class IoFailure(DataError):
    pass


class FormatVersionMismatch(DataError):
    pass


class CorruptModel(_LineError):
    pass


class NotSPD(DataError):
    pass


class OneClassOnly(TrainingError):
    pass


class DegenerateNormal(TrainingError):
    pass


class IterationLimit(TrainingError):
    """Raised when SMO hits ``max_iter``; ``alpha`` holds the last iterate."""

    def __init__(self, n_iter, alpha):
        self.n_iter = n_iter
        self.alpha = alpha
        super().__init__(f"no convergence after {n_iter} pair updates")
