"""Exception classes shared across the package."""


class GradSOSError(Exception):
    """Base class for every error raised by gradsos."""


class ParseError(GradSOSError, ValueError):
    """Malformed polynomial or certificate text.

    ``offset`` is the byte offset of the offending character (or ``None``
    when the problem is not tied to a position).
    """

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class HypothesisViolated(GradSOSError):
    """The gradient ideal is not zero-dimensional / not radical / trivial."""


class NotInShapePosition(GradSOSError):
    """The reduced lex basis is not of the form [w, x2 - v2, ..., xn - vn]."""


class NotNonnegative(GradSOSError):
    """A univariate polynomial takes negative values on the real line."""


class NotNonnegativeOnCriticalCurve(GradSOSError):
    """f restricted to the curve x_i = v_i(x1) goes negative, so f is not >= 0."""


class PrecisionExhausted(GradSOSError):
    """The perturbation-compensation SOS search ran out of its retry budget."""
