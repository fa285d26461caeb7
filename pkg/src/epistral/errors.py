"""Exception types raised by the epistral library."""


class EpistralError(Exception):
    """Base class for all protocol errors."""


class DuplicateAccount(EpistralError):
    pass


class UnknownAccount(EpistralError):
    pass


class InsufficientBalance(EpistralError):
    pass


class DimensionMismatch(EpistralError):
    pass


class ClusterMismatch(EpistralError):
    pass


class UnknownContent(EpistralError):
    pass


class ExpiredContent(EpistralError):
    pass


class DuplicateEngagement(EpistralError):
    pass


class DebtCapExceeded(EpistralError):
    pass


class UnknownProposal(EpistralError):
    pass


class ProposalClosed(EpistralError):
    pass


class DuplicateProposal(EpistralError):
    pass


class NoStake(EpistralError):
    pass


class InvalidParameter(EpistralError):
    pass


class TooFewPoints(EpistralError):
    pass


class ParseError(EpistralError):
    """Scenario file is not valid JSON. Carries the decoder's line/column."""


class ValidationError(EpistralError):
    """Scenario or parameter value violates a constraint."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
