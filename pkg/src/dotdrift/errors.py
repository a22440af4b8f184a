"""Exception types shared across the package."""


class ChallengeError(Exception):
    """Base class for all challenge generation/serving errors."""


class InvalidSpecError(ChallengeError):
    """A challenge spec violates one of its invariants."""


class LayoutOverflowError(ChallengeError):
    """Requested glyphs do not fit inside the viewport.

    Callers must shrink ``glyph_height_frac`` or enlarge the viewport.
    """


class FormatLimitError(ChallengeError):
    """Input exceeds a hard limit of the output file format."""


class StoreFullError(ChallengeError):
    """The challenge record store refuses new records (back-pressure)."""
