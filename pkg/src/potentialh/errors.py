"""Exception types shared across the package."""


class PotentialError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class ContractViolation(PotentialError, ValueError):
    """An argument breaks a documented precondition."""


class NonGraphic(PotentialError, ValueError):
    pass


class PreconditionSumTooSmall(PotentialError, ValueError):
    pass


class ParseError(PotentialError, ValueError):
    """Malformed graph text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class OrderTooLarge(PotentialError, ValueError):
    pass


class EmptyPattern(PotentialError, ValueError):
    """The pattern graph has no edges."""


class IndexOutOfRange(PotentialError, ValueError):
    pass


class NTooSmall(PotentialError, ValueError):
    pass


class NotPotentially(PotentialError):
    """The graph does not contain the requested split graph."""


class CapExceeded(PotentialError):
    pass


class TimeBudgetExceeded(PotentialError):
    pass


class PreconditionViolated(PotentialError):
    """A hypothesis of the bounded-degree embedding fails; ``which`` names it."""

    def __init__(self, which: str, detail: str = ""):
        super().__init__(f"{which}: {detail}" if detail else which)
        self.which = which


class RepairStalled(PotentialError):
    """No improving switch was found; carries the graph and the missing edge."""

    def __init__(self, message: str, graph=None, missing=None):
        super().__init__(message)
        self.graph = graph
        self.missing = missing


class TraceMismatch(PotentialError, ValueError):
    pass


class SlackInsufficient(PotentialError):
    """A construction needs more room than the current order provides."""


class CliqueShortCircuit(PotentialError):
    """The input was shown potentially ``K_k``-graphic during reduction.

    Not a failure: ``certificate`` records why (``reason`` is ``"yin-li"`` or
    ``"clique-sum"``).
    """

    def __init__(self, reason: str, stage: int, sequence, certificate=None):
        super().__init__(f"potentially K_k-graphic at stage {stage} ({reason})")
        self.reason = reason
        self.stage = stage
        self.sequence = sequence
        self.certificate = certificate
