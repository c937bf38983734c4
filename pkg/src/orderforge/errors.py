"""Exception hierarchy shared by every orderforge module."""

from __future__ import annotations


class OrderForgeError(Exception):
    """Base class for all library errors."""


class InvalidStructure(OrderForgeError, ValueError):
    """A structure, order or map violates its type invariants."""


class SignatureMismatch(OrderForgeError, ValueError):
    pass


class DomainMismatch(OrderForgeError, ValueError):
    pass


class BoundExceeded(OrderForgeError):
    """An exhaustive computation was asked to run beyond its configured size bound."""

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: size {size} exceeds bound {bound} (set ORDERFORGE_MAX_N to override)")
        self.what = what
        self.size = size
        self.bound = bound


class NotAnEmbedding(OrderForgeError, ValueError):
    pass


class UnclassifiableEmbedding(OrderForgeError):
    """A product embedding respects neither the (lex, alex) nor the (alex, lex) pairing."""


class NotInClass(OrderForgeError, ValueError):
    pass


class StageExhausted(OrderForgeError):
    """Generic-permutation growth hit ``max_points`` before the requested extension level."""

    def __init__(self, message: str, stage=None, log=None):
        super().__init__(message)
        self.stage = stage
        self.log = log


class StageTooSmall(OrderForgeError):
    """The stage has no room for a required extension and growth is disabled."""

    def __init__(self, message: str, required=None):
        super().__init__(message)
        self.required = required


class EmptyLevel(OrderForgeError):
    """A König tree level has no admissible interval decomposition."""

    def __init__(self, stage: int, message: str):
        super().__init__(message)
        self.stage = stage
