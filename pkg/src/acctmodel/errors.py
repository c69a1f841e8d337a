"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Issue:
    """One integrity problem found while building a model.

    ``code`` is one of the stable identifiers such as ``UnknownEntity``,
    ``DuplicateDeclaration``, ``KindConflict``, ``EmptyCausedSet``,
    ``MissingEgo`` or ``EgoUnknown``.
    """

    code: str
    name: str
    message: str
    line: int | None = None
    column: int | None = None

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}: " if self.line is not None else ""
        return f"{where}{self.code}({self.name}): {self.message}"


class ModelError(Exception):
    """Raised by ``build_model`` with every integrity issue found."""

    def __init__(self, issues: list[Issue]):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


class UnknownEntityError(KeyError):
    """A query named an id that is not declared under the expected kind."""

    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class MissingStsError(LookupError):
    """The model declares no ego CPS, so STS-level queries are undefined."""


class CausalityError(Exception):
    """Base class for structural-model query failures."""


class EventNotMappedError(CausalityError):
    pass


class EventNotOccurringError(CausalityError):
    pass


class SearchSpaceTooLargeError(CausalityError):
    pass


class UnknownVariableError(CausalityError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class NoCausalInformationError(CausalityError):
    """Neither explicit facts nor a structural model can supply ``caused``."""
