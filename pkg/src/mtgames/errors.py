"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should
raise the most specific type that applies.
"""


class MtgamesError(Exception):
    """Base class for all package-specific errors."""


class GameParseError(MtgamesError):
    """Malformed game file. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SpecError(MtgamesError):
    """Structurally invalid specification (duplicate names, no targets, ...)."""


class SpecParseError(SpecError):
    """Malformed specification text. Carries a position or line when known."""

    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        elif pos is not None:
            message = f"at offset {pos}: {message}"
        super().__init__(message)


class ValidationError(MtgamesError):
    """Input rejected by a semantic validity check."""


class UnboundProposition(ValidationError):
    """A specification proposition does not appear in the game's label table."""


class ModeExclusivityError(ValidationError):
    """Some state carries two mode labels, so the mode assumption fails."""


class NonExhaustiveModes(ValidationError):
    """Strategy extraction needs every relevant state to carry a mode label."""


class BoundExceeded(MtgamesError):
    """A configured resource bound (state count, strategy count) was hit."""
