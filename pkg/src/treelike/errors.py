"""Exception hierarchy shared by all modules."""


class TreeLikeError(Exception):
    """Base class for every error raised by the package."""


class ParseError(TreeLikeError, ValueError):
    """Malformed textual input.

    ``position`` is the 1-based column (or token index for Gauss codes)
    where the problem was detected, when known.
    """

    def __init__(self, message: str, position: int | None = None, line: int = 1):
        self.position = position
        self.line = line
        if position is not None:
            message = f"{message} (line {line}, column {position})"
        super().__init__(message)


class OddLength(ParseError):
    pass


class BadMultiplicity(ParseError):
    pass


class NotTreeLike(TreeLikeError):
    """The Gauss diagram has interleaving chords."""


class CollidingDirections(TreeLikeError):
    """A direction assignment has two edges pointing at each other."""


class DegenerateLeafCount(TreeLikeError):
    pass


class PathReversing(TreeLikeError):
    pass


class SizeLimit(TreeLikeError):
    pass


class NotVertexCentered(TreeLikeError):
    pass


class RealizationFailed(TreeLikeError):
    def __init__(self, message: str, subtree: str | None = None):
        self.subtree = subtree
        super().__init__(message if subtree is None else f"{message}: {subtree}")


class TangentialCrossing(TreeLikeError):
    pass
