"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the categories coarse.
"""


class WeakSeqError(Exception):
    """Base class for all library errors."""


class ParseError(WeakSeqError, ValueError):
    """Malformed group spec, element literal or multiset literal."""


class GroupAxiomError(ParseError):
    """A Cayley table that does not define a group."""


class ContextError(WeakSeqError, ValueError):
    """An element that does not belong to the group it is used with."""


class PreconditionError(WeakSeqError, ValueError):
    """Inputs outside the hypotheses an operation needs."""


class ConstructionError(WeakSeqError):
    """A construction could not produce a verified output.

    ``stage`` names the step that failed so callers can tell a missing
    zero-sum-free subset from an exhausted random search.
    """

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class ZeroSumFreeNotFound(ConstructionError):
    pass


class AttemptsExhausted(ConstructionError):
    pass
