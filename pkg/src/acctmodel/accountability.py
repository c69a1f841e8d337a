"""The three accountability notions and a side-by-side comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .causality import resolve_causes
from .errors import UnknownEntityError
from .model import Model
from .relations import constructed, informed, responsible

HALL, LINDBERG, RACI = "hall", "lindberg", "raci"
NOTIONS = (HALL, LINDBERG, RACI)

# Interfaces each notion consumes beyond the given sets.
REQUIRED_INTERFACES: Mapping[str, tuple[str, ...]] = {
    HALL: ("observation", "has_account"),
    LINDBERG: ("observation", "has_account", "component_configuration", "correction_action"),
    RACI: ("observation", "has_account", "correction_action", "caused"),
}


def hall_accountable(model: Model) -> frozenset[str]:
    return frozenset(c for c in model.components if informed(model, c))


def lindberg_accountable(model: Model, c: str) -> frozenset[str]:
    may_demand = responsible(model, c) | constructed(model, c)
    return informed(model, c) & may_demand


def raci_accountable(model: Model, e: str, causes: Iterable[str]) -> frozenset[str]:
    """Union of ``responsible`` over the components that caused ``e``.

    ``causes`` is the value of ``caused(e)``; pass declared facts or a
    computed result, this function does not look either up.
    """
    if e not in model.events:
        raise UnknownEntityError("event", e)
    out: frozenset[str] = frozenset()
    for c in causes:
        out |= responsible(model, c)
    return out


@dataclass(frozen=True)
class Row:
    """One subject (component or event) of the comparison.

    ``notions`` lists the notions that name at least one principal for the
    subject; for hall that is the set of informed principals.
    """

    subject: str
    subject_kind: str
    notions: tuple[str, ...]
    principals: tuple[str, ...]
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class NotionReport:
    hall: frozenset[str] = frozenset()
    lindberg: Mapping[str, frozenset[str]] = field(default_factory=dict)
    raci: Mapping[str, frozenset[str] | None] = field(default_factory=dict)
    interfaces: Mapping[str, bool] = field(default_factory=dict)
    rows: tuple[Row, ...] = ()

    def to_dict(self) -> dict:
        return {
            "hall": sorted(self.hall),
            "lindberg": {c: sorted(ps) for c, ps in sorted(self.lindberg.items())},
            "raci": {e: None if ps is None else sorted(ps) for e, ps in sorted(self.raci.items())},
            "interfaces": dict(sorted(self.interfaces.items())),
            "requirements": {n: list(REQUIRED_INTERFACES[n]) for n in NOTIONS},
            "rows": [
                {
                    "subject": r.subject,
                    "kind": r.subject_kind,
                    "notions": list(r.notions),
                    "principals": list(r.principals),
                    "flags": list(r.flags),
                }
                for r in self.rows
            ],
        }


def available_interfaces(model: Model) -> dict[str, bool]:
    """Which implementation-specific interfaces the model actually fills."""
    return {
        "observation": bool(model.observations),
        "has_account": bool(model.has_account),
        "component_configuration": bool(model.component_configuration),
        "correction_action": bool(model.correction_action),
        "caused": bool(model.caused_facts) or model.structural is not None,
    }


def compare_notions(model: Model) -> NotionReport:
    """Evaluate all three notions over every component and event.

    Events without any causal information get ``None`` in ``raci`` and a
    ``RACI-UNAVAILABLE`` flag. Other flags: ``HALL-ONLY`` (hall-accountable
    but no lindberg principal) and ``RACI-UNIQ`` (more than one raci
    principal, where the RACI reading expects exactly one).
    """
    hall = hall_accountable(model)
    lindberg = {c: lindberg_accountable(model, c) for c in sorted(model.components)}
    raci: dict[str, frozenset[str] | None] = {}
    for e in sorted(model.events):
        causes = resolve_causes(model, e)
        raci[e] = None if causes is None else raci_accountable(model, e, causes)

    rows = []
    for c in sorted(model.components):
        inf = informed(model, c)
        notions, named, flags = [], set(), []
        if c in hall:
            notions.append(HALL)
            named |= inf
        if lindberg[c]:
            notions.append(LINDBERG)
            named |= lindberg[c]
        elif c in hall:
            flags.append("HALL-ONLY")
        rows.append(Row(c, "component", tuple(notions), tuple(sorted(named)), tuple(flags)))
    for e, ps in raci.items():
        if ps is None:
            rows.append(Row(e, "event", (), (), ("RACI-UNAVAILABLE",)))
            continue
        flags = ("RACI-UNIQ",) if len(ps) > 1 else ()
        rows.append(Row(e, "event", (RACI,) if ps else (), tuple(sorted(ps)), flags))

    return NotionReport(
        hall=hall,
        lindberg=lindberg,
        raci=raci,
        interfaces=available_interfaces(model),
        rows=tuple(rows),
    )
