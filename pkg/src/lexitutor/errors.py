"""Exception and warning types shared across the package."""


class LexitutorError(Exception):
    """Base class for all errors raised by this package."""


class InvalidConfig(LexitutorError, ValueError):
    """A configuration value is outside its documented range."""


class InvalidLevel(LexitutorError, ValueError):
    """An unknown proficiency level name was supplied."""


class EmptySeed(LexitutorError, ValueError):
    """The seed text contains no usable tokens after cleaning."""


class ShapeError(LexitutorError, ValueError):
    """Array shapes are inconsistent with the operation's contract."""


class StateError(LexitutorError, RuntimeError):
    """An operation was called outside its valid lifecycle (e.g. backward before forward)."""


class NumericError(LexitutorError, ArithmeticError):
    """Non-finite values reached an operation that requires finite input."""


class FormatError(LexitutorError, ValueError):
    """A checkpoint file does not start with the expected magic bytes."""


class CorruptCheckpoint(LexitutorError, ValueError):
    """A checkpoint's manifest and payload disagree."""


class ClampWarning(UserWarning):
    """A probability was clamped away from zero before taking its log."""
