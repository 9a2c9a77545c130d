"""
errors.py
---------
Every failure the library raises on purpose. Callers (mostly tools/cli.py)
catch these at the boundary and turn them into a message + exit code.
"""


class GraphLarcError(Exception):
    """Base class for all expected errors raised by this project."""


# ---------------- Algebra errors ----------------
class AlgebraMismatchError(GraphLarcError, ValueError):
    """Two operands live in different Lie algebras (kind or size differ)."""


class BasisElementError(GraphLarcError, ValueError):
    """A basis element breaks its tag rules or is illegal for the algebra."""


# ---------------- Graph errors ----------------
class GraphError(GraphLarcError, ValueError):
    """Bad graph input: wrong node range, self-loops where none are allowed, size mismatch."""


# ---------------- Input errors ----------------
class SystemParseError(GraphLarcError, ValueError):
    """A system file could not be parsed. Keeps the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class ConfigError(GraphLarcError, ValueError):
    """An environment setting has a value we cannot use."""


# ---------------- Internal errors ----------------
class SoundnessError(GraphLarcError, RuntimeError):
    """A graphical verdict disagreed with the rank oracle. Always a bug, never user error."""
