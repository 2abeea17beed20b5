"""
Exception hierarchy of dtncomm.
Every class carries the exit code the command line reports for it, so the CLI can map any failure without
inspecting messages.
"""


class DtnCommError(Exception):
    exit_code = 1


class ConfigError(DtnCommError, ValueError):
    """Invalid or inconsistent pipeline configuration"""

    exit_code = 2


class DataError(DtnCommError, ValueError):
    """Input data that cannot be turned into records, intervals, encounters or graphs"""

    exit_code = 3


class LogReadError(DataError):
    exit_code = 3


class FormatMismatchError(DataError):
    exit_code = 3


class EncounterOverlapError(DataError):
    """Two encounters of the same pair overlap in time - the encounter extraction left an inconsistency"""

    exit_code = 3


class DomainError(DtnCommError, ValueError):
    """An argument outside of the domain of the operation (zero degree, gamma out of range, ...)"""

    exit_code = 3


class NumericalError(DtnCommError, ArithmeticError):
    """Non-finite results, non-convergence or solver breakdown"""

    exit_code = 4


class StageError(DtnCommError):
    def __init__(self, stage, cause):
        """
        Failure of a single pipeline stage
        :param stage: the stage name, e.g. 'encounters'
        :param cause: the original exception
        """
        super().__init__(f'Stage "{stage}" failed: {cause}')
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", DtnCommError.exit_code)
