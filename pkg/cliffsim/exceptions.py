class CliffsimError(Exception):
    """Base class for every error raised by cliffsim."""

    exit_code = 1


class ConfigError(CliffsimError, ValueError):
    """Bad flags, files or noise specifications."""

    exit_code = 2


class CircuitSyntaxError(ConfigError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = "line {}: {}".format(lineno, message)
        super().__init__(message)


class SizeCapError(ConfigError):
    """A dense oracle or exhaustive census was asked for more qubits than it allows."""


class ToleranceError(CliffsimError, RuntimeError):
    """An internal numerical invariant was violated; this always signals a bug."""

    exit_code = 3


class CutoffExceeded(CliffsimError):
    """Group rank exceeded the enumeration cutoff; callers fall back to uniform output."""

    def __init__(self, rank, cutoff_log2):
        self.rank = rank
        self.cutoff_log2 = cutoff_log2
        super().__init__("group rank {} exceeds cutoff 2^{}".format(rank, cutoff_log2))
