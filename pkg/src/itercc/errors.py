"""Exception hierarchy shared by all itercc modules."""


class ItersError(Exception):
    """Base class for every error raised by this package."""


# --- coefficient rings ---

class InvalidRingSpecError(ItersError):
    pass


class RingMismatchError(ItersError):
    pass


class NotUnitError(ItersError):
    pass


class NotNilpotentError(ItersError):
    pass


class NotOnePlusNilpotentError(ItersError):
    pass


# --- series ---

class TermOutsideWindowError(ItersError):
    pass


class OutsideWindowError(ItersError):
    pass


class EmptyWindowError(ItersError):
    pass


class InsufficientWindowError(ItersError):
    pass


class ZeroModNilError(ItersError):
    pass


class NotTopNilpotentError(ItersError):
    pass


class NonTerminatingError(ItersError):
    pass


# --- automorphisms ---

class NotAutomorphismError(ItersError):
    pass


# --- symbols ---

class NotSharpError(ItersError):
    pass


class NotFieldError(ItersError):
    pass


class CrossCheckMismatchError(ItersError):
    pass


# --- rational functions / reciprocity / characterization ---

class MissingPointError(ItersError):
    def __init__(self, missing):
        super().__init__(f"points missing from the supplied list: {missing}")
        self.missing = missing


class ExpansionFailureError(ItersError):
    pass


class InvarianceViolation(ItersError):
    """An oracle changed its value under a sampled automorphism.

    Carries the witnessing automorphism and argument tuple so the failure
    can be replayed.
    """

    def __init__(self, message, automorphism=None, arguments=None,
                 value_before=None, value_after=None):
        super().__init__(message)
        self.automorphism = automorphism
        self.arguments = arguments
        self.value_before = value_before
        self.value_after = value_after


class FitMismatchError(ItersError):
    pass


class NotPowerOfTwoError(ItersError):
    pass


class ResidualMismatchError(ItersError):
    pass


# --- expression language ---

class ProgramError(ItersError):
    """Parse or evaluation failure in the command-line expression language."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
