"""Causal facts: explicit ``caused`` declarations and a boolean structural model.

The structural side is a desk-scale counterfactual oracle. Exogenous boolean
variables feed acyclic equations; some variables stand for events, some for
components. A component is a but-for cause of an event when flipping its
variable alone (an intervention that cuts the variable from its equation)
makes the event variable false. Minimal cause sets generalise that to the
inclusion-minimal sets of component variables whose joint flip does so.
"""

from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from types import MappingProxyType
from typing import TYPE_CHECKING, Mapping, Union

from .errors import (
    EventNotMappedError,
    EventNotOccurringError,
    SearchSpaceTooLargeError,
    UnknownEntityError,
    UnknownVariableError,
)

if TYPE_CHECKING:
    from .model import Model

MAX_VARIABLES = 24
MAX_SEARCH_VARIABLES = 20
RESERVED_WORDS = frozenset({"and", "or", "not"})


# -- boolean expressions ----------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, env: Mapping[str, bool]) -> bool:
        return env[self.name]

    def variables(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True)
class Not:
    operand: Expr

    def eval(self, env: Mapping[str, bool]) -> bool:
        return not self.operand.eval(env)

    def variables(self) -> frozenset[str]:
        return self.operand.variables()


@dataclass(frozen=True)
class And:
    operands: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands")

    def eval(self, env: Mapping[str, bool]) -> bool:
        return all(o.eval(env) for o in self.operands)

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(o.variables() for o in self.operands))


@dataclass(frozen=True)
class Or:
    operands: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("Or needs at least two operands")

    def eval(self, env: Mapping[str, bool]) -> bool:
        return any(o.eval(env) for o in self.operands)

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(o.variables() for o in self.operands))


Expr = Union[Var, Not, And, Or]


def format_expr(expr: Expr) -> str:
    """Render an expression so that parsing it back gives an equal tree."""

    def operand(e: Expr) -> str:
        if isinstance(e, (And, Or)):
            return f"({format_expr(e)})"
        return format_expr(e)

    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Not):
        return f"not {operand(expr.operand)}"
    op = " and " if isinstance(expr, And) else " or "
    return op.join(operand(o) for o in expr.operands)


# -- structural model -------------------------------------------------------


def _frozen(mapping) -> Mapping:
    return MappingProxyType(dict(sorted(dict(mapping).items())))


@dataclass(frozen=True)
class StructuralModel:
    exogenous: Mapping[str, bool] = field(default_factory=dict)
    equations: Mapping[str, Expr] = field(default_factory=dict)
    event_map: Mapping[str, str] = field(default_factory=dict)
    component_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("exogenous", "equations", "event_map", "component_map"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.exogenous) | frozenset(self.equations)

    def problems(self) -> list[tuple[str, str, str]]:
        """Return ``(code, subject, message)`` for every well-formedness failure."""
        found = []
        for v in sorted(set(self.exogenous) & set(self.equations)):
            found.append(("OverlappingDefinition", v, "variable is both exogenous and defined by an equation"))
        for v in sorted(self.variables & RESERVED_WORDS):
            found.append(("ReservedWord", v, "'and', 'or', 'not' cannot name variables"))
        defined = self.variables
        for target, expr in sorted(self.equations.items()):
            for ref in sorted(expr.variables() - defined):
                found.append(("UnknownVariable", ref, f"referenced in the equation of {target} but never defined"))
        for kind, mapping in (("event", self.event_map), ("component", self.component_map)):
            for v in sorted(set(mapping) - defined):
                found.append(("UnknownVariable", v, f"mapped to {kind} {mapping[v]} but never defined"))
            seen: dict[str, str] = {}
            for v, target in sorted(mapping.items()):
                if target in seen:
                    found.append(("DuplicateMapping", target, f"{kind} mapped from both {seen[target]} and {v}"))
                seen[target] = v
        if len(defined) > MAX_VARIABLES:
            found.append(("TooManyVariables", str(len(defined)), f"at most {MAX_VARIABLES} variables are supported"))
        try:
            self._sorter_order()
        except graphlib.CycleError as exc:
            cycle = exc.args[1]
            found.append(("CyclicModel", cycle[0], "equations are cyclic: " + " -> ".join(cycle)))
        return found

    def _sorter_order(self) -> tuple[str, ...]:
        graph = {v: set() for v in self.exogenous}
        for v, expr in self.equations.items():
            graph[v] = set(expr.variables()) & self.variables
        ts = graphlib.TopologicalSorter(graph)
        # static_order is not canonical; re-derive a deterministic order by levels
        ts.prepare()
        order: list[str] = []
        while ts.is_active():
            ready = sorted(ts.get_ready())
            order.extend(ready)
            ts.done(*ready)
        return tuple(order)

    @cached_property
    def order(self) -> tuple[str, ...]:
        return self._sorter_order()

    def event_variable(self, event: str) -> str:
        for v, e in self.event_map.items():
            if e == event:
                return v
        raise EventNotMappedError(f"no structural variable is mapped to event {event!r}")


def evaluate(sm: StructuralModel, overrides: Mapping[str, bool] | None = None) -> dict[str, bool]:
    """Evaluate every variable; overridden variables ignore their equations."""
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - sm.variables)
    if unknown:
        raise UnknownVariableError(f"unknown variable(s): {', '.join(unknown)}")
    env: dict[str, bool] = {}
    for v in sm.order:
        if v in overrides:
            env[v] = bool(overrides[v])
        elif v in sm.exogenous:
            env[v] = sm.exogenous[v]
        else:
            env[v] = sm.equations[v].eval(env)
    return env


def _search_setup(sm: StructuralModel, event: str) -> tuple[str, dict[str, bool], list[str]]:
    target = sm.event_variable(event)
    actual = evaluate(sm)
    if not actual[target]:
        raise EventNotOccurringError(f"event {event!r} ({target}) does not occur in the unintervened model")
    candidates = sorted(sm.component_map, key=lambda v: (sm.component_map[v], v))
    return target, actual, candidates


def _prevents(sm: StructuralModel, target: str, actual: Mapping[str, bool], flip: tuple[str, ...]) -> bool:
    return not evaluate(sm, {v: not actual[v] for v in flip})[target]


def but_for_causes(sm: StructuralModel, event: str) -> frozenset[str]:
    """Components whose single flip makes ``event`` not happen."""
    target, actual, candidates = _search_setup(sm, event)
    return frozenset(sm.component_map[v] for v in candidates if _prevents(sm, target, actual, (v,)))


def minimal_cause_sets(sm: StructuralModel, event: str) -> list[frozenset[str]]:
    """All inclusion-minimal component sets whose joint flip prevents ``event``.

    Subsets are enumerated by increasing size, so a set that works is minimal
    exactly when it contains no set found earlier.
    """
    target, actual, candidates = _search_setup(sm, event)
    if len(candidates) > MAX_SEARCH_VARIABLES:
        raise SearchSpaceTooLargeError(
            f"{len(candidates)} component-mapped variables exceed the limit of {MAX_SEARCH_VARIABLES}"
        )
    found: list[frozenset[str]] = []
    for size in range(1, len(candidates) + 1):
        for combo in combinations(candidates, size):
            s = frozenset(combo)
            if any(m <= s for m in found):
                continue
            if _prevents(sm, target, actual, combo):
                found.append(s)
    result = [frozenset(sm.component_map[v] for v in s) for s in found]
    return sorted(result, key=lambda s: (len(s), sorted(s)))


# -- explicit facts and combined results ------------------------------------


class CauseSource(str, enum.Enum):
    EXPLICIT = "explicit"
    COMPUTED = "computed"


@dataclass(frozen=True)
class CauseResult:
    event: str
    but_for: frozenset[str]
    minimal_sets: tuple[frozenset[str], ...]
    source: CauseSource

    @property
    def causes(self) -> frozenset[str]:
        """The ``caused`` value this result stands for.

        The union of the minimal sets. For declared facts every component is
        its own singleton set; for computed results the union equals the
        but-for set whenever every minimal set is a singleton.
        """
        return frozenset().union(*self.minimal_sets)


def explicit_causes(model: Model, event: str) -> frozenset[str] | None:
    if event not in model.events:
        raise UnknownEntityError("event", event)
    return model.caused_facts.get(event)


def computed_causes(sm: StructuralModel, event: str) -> CauseResult:
    return CauseResult(
        event=event,
        but_for=but_for_causes(sm, event),
        minimal_sets=tuple(minimal_cause_sets(sm, event)),
        source=CauseSource.COMPUTED,
    )


def cause_results(model: Model, event: str) -> list[CauseResult]:
    """Every available cause result for ``event``, explicit first.

    Structural failures (event unmapped or not occurring) simply contribute
    no computed result; an empty list means ``caused`` is unavailable.
    """
    results = []
    explicit = explicit_causes(model, event)
    if explicit is not None:
        singles = tuple(frozenset((c,)) for c in sorted(explicit))
        results.append(CauseResult(event, explicit, singles, CauseSource.EXPLICIT))
    if model.structural is not None:
        try:
            results.append(computed_causes(model.structural, event))
        except (EventNotMappedError, EventNotOccurringError):
            pass
    return results


def resolve_causes(model: Model, event: str) -> frozenset[str] | None:
    """``caused(event)``: explicit facts win, the structural model is the fallback."""
    results = cause_results(model, event)
    return results[0].causes if results else None
