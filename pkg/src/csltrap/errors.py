from __future__ import annotations


class CslTrapError(Exception):
    """Base class for all errors raised by csltrap."""


class DomainError(CslTrapError, ValueError):
    """An argument lies outside the domain of a physical formula."""


class UnsupportedShapeError(DomainError):
    """The requested quantity is only defined for some body shapes."""


class DegenerateInputError(DomainError):
    """Inputs are valid individually but admit no finite answer."""


class SimulationConfigError(CslTrapError, ValueError):
    """Time step, duration or ensemble settings are unusable."""


class ConfigError(CslTrapError, ValueError):
    """A run configuration file could not be parsed or validated."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line
