"""Derived relations: informed, constructed, responsible, missed_by_ego.

Every query returns a frozenset; callers that render results sort them.
"""

from __future__ import annotations

from .errors import MissingStsError, UnknownEntityError
from .model import Model


def _component(model: Model, c: str) -> None:
    if c not in model.components:
        raise UnknownEntityError("component", c)


def informed(model: Model, c: str) -> frozenset[str]:
    """Principals holding an account that records some event about ``c``.

    ``hasAccount`` is a relation, so a principal is informed when it is
    related to the account of any observation about ``c``.
    """
    _component(model, c)
    accounts = {o.account for o in model.observations if o.component == c}
    return frozenset(p for a, p in model.has_account if a in accounts)


def constructed(model: Model, c: str) -> frozenset[str]:
    """The principal that set up ``c``, if any (at most one)."""
    _component(model, c)
    p = model.component_configuration.get(c)
    return frozenset() if p is None else frozenset((p,))


def responsible(model: Model, c: str) -> frozenset[str]:
    """Informed principals that also have a correction action for ``c``."""
    return frozenset(p for p in informed(model, c) if (p, c) in model.correction_action)


def missed_by_ego(model: Model) -> frozenset[str]:
    """Declared events that never appear in the ego CPS's logs."""
    if model.ego is None:
        raise MissingStsError("model has no ego cps")
    return frozenset(model.events) - model.ego.logged_events
