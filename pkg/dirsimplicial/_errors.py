"""Exceptions raised across the library.

All of them subclass built-in exceptions, so it's possible to catch them generically (e.g. ``ValueError``).
Messages are formatted with mylogging so they look the same as other library messages."""

from __future__ import annotations

import mylogging


class _FormattedMixin:
    def __init__(self, message: str, caption: str | None = None) -> None:
        self.raw_message = message
        super().__init__(mylogging.return_str(message, caption=caption or type(self).__name__))


class DuplicateVertexInTuple(_FormattedMixin, ValueError):
    """Simplex tuple repeats a vertex."""


class ZeroDimensional(_FormattedMixin, ValueError):
    """Face map applied on a vertex."""


class IndexOutOfRange(_FormattedMixin, IndexError):
    """Face map index outside of the range allowed for the relation."""


class ShapeMismatch(_FormattedMixin, ValueError):
    """Signal or parameter shapes do not chain."""


class NonFiniteLoss(_FormattedMixin, RuntimeError):
    """Loss became nan or inf during training."""


class EmptyCommunity(_FormattedMixin, ValueError):
    """Community with no intra-community edge, no spike can be placed."""


class ParseError(_FormattedMixin, ValueError):
    """Input file is not in the expected format."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None) -> None:
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message, caption="ParseError")


class ConfigValidationError(_FormattedMixin, ValueError):
    """Invalid configuration value. `field` is dotted path like ``training.epochs``."""

    def __init__(self, message: str, field: str | None = None) -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message, caption="Config validation error")
