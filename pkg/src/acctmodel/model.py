"""Domain types and the validated, immutable :class:`Model`.

Declarations are small frozen records. The parser produces them (with source
positions) and programmatic callers can construct them directly; either way
:func:`build_model` turns a list of them into a ``Model`` or raises
:class:`~acctmodel.errors.ModelError` carrying every integrity issue at once.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .causality import StructuralModel
from .errors import Issue, ModelError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PrincipalKind(str, enum.Enum):
    PERSON = "person"
    LEGAL_ENTITY = "legal_entity"


class BeingKind(str, enum.Enum):
    HUMAN = "human"
    ANIMAL = "animal"


class EventKind(str, enum.Enum):
    SYSTEM = "system"
    ENVIRONMENT = "environment"


@dataclass(frozen=True, order=True)
class Observation:
    """``(event, component) -> account``: the event was recorded in the account."""

    event: str
    component: str
    account: str


# -- declarations -----------------------------------------------------------

_pos = dict(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ScenarioDecl:
    name: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class ComponentDecl:
    name: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class PrincipalDecl:
    name: str
    kind: PrincipalKind
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class BeingDecl:
    name: str
    kind: BeingKind
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class EventDecl:
    name: str
    kind: EventKind
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class AccountDecl:
    name: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class ActionDecl:
    name: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class CpsBlock:
    name: str
    components: tuple[str, ...] = ()
    principals: tuple[str, ...] = ()
    setups: tuple[tuple[str, str], ...] = ()  # (component, principal)
    logs: tuple[Observation, ...] = ()
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class EgoDecl:
    name: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class ObservationDecl:
    event: str
    component: str
    account: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class HasAccountDecl:
    account: str
    principal: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class CorrectionDecl:
    principal: str
    component: str
    action: str
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class CausedDecl:
    event: str
    components: tuple[str, ...]
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class StsPrincipalsDecl:
    """Overrides the STS principal set (default: every declared principal)."""

    principals: tuple[str, ...]
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class AccountsDecl:
    """Overrides the mechanism's account set (default: every declared account)."""

    accounts: tuple[str, ...]
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class MissedByEgoDecl:
    """A stated ``missedByEgo`` value, checked against the computed one (AM-5)."""

    events: tuple[str, ...]
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


@dataclass(frozen=True)
class StructuralDecl:
    model: StructuralModel
    line: int | None = field(**_pos)
    column: int | None = field(**_pos)


Declaration = Union[
    ScenarioDecl, ComponentDecl, PrincipalDecl, BeingDecl, EventDecl, AccountDecl, ActionDecl,
    CpsBlock, EgoDecl, ObservationDecl, HasAccountDecl, CorrectionDecl, CausedDecl,
    StsPrincipalsDecl, AccountsDecl, MissedByEgoDecl, StructuralDecl,
]


# -- resolved model ---------------------------------------------------------


def _fmap(d) -> Mapping:
    return MappingProxyType(dict(sorted(dict(d).items())))


@dataclass(frozen=True)
class CpsDecl:
    id: str
    components: frozenset[str] = frozenset()
    principals: frozenset[str] = frozenset()
    setups: frozenset[tuple[str, str]] = frozenset()  # (component, principal)
    logs: frozenset[Observation] = frozenset()

    def __post_init__(self):
        for name in ("components", "principals", "setups", "logs"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def logged_components(self) -> frozenset[str]:
        return frozenset(o.component for o in self.logs)

    @property
    def logged_events(self) -> frozenset[str]:
        return frozenset(o.event for o in self.logs)

    @property
    def log_accounts(self) -> frozenset[str]:
        return frozenset(o.account for o in self.logs)


@dataclass(frozen=True)
class StsDecl:
    ego: str
    foreign: tuple[str, ...] = ()
    principals: frozenset[str] = frozenset()
    beings: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "foreign", tuple(self.foreign))
        object.__setattr__(self, "principals", frozenset(self.principals))
        object.__setattr__(self, "beings", frozenset(self.beings))


@dataclass(frozen=True)
class Model:
    """The resolved universe.

    Entity kinds are maps from id to kind (or plain frozensets for untyped
    given sets). ``component_configuration`` and ``correction_action`` are
    functions, ``has_account`` is a relation of ``(account, principal)``
    pairs, ``caused_facts`` is partial. ``accounts`` is the mechanism's
    account set, ``missed_by_ego_declared`` an optional stated value.
    """

    name: str = ""
    components: frozenset[str] = frozenset()
    principals: Mapping[str, PrincipalKind] = field(default_factory=dict)
    beings: Mapping[str, BeingKind] = field(default_factory=dict)
    events: Mapping[str, EventKind] = field(default_factory=dict)
    account_ids: frozenset[str] = frozenset()
    actions: frozenset[str] = frozenset()
    observations: frozenset[Observation] = frozenset()
    component_configuration: Mapping[str, str] = field(default_factory=dict)
    has_account: frozenset[tuple[str, str]] = frozenset()
    correction_action: Mapping[tuple[str, str], str] = field(default_factory=dict)
    caused_facts: Mapping[str, frozenset[str]] = field(default_factory=dict)
    cps: Mapping[str, CpsDecl] = field(default_factory=dict)
    sts: StsDecl | None = None
    accounts: frozenset[str] = frozenset()
    missed_by_ego_declared: frozenset[str] | None = None
    structural: StructuralModel | None = None

    def __post_init__(self):
        for name in ("principals", "beings", "events", "component_configuration",
                     "correction_action", "caused_facts", "cps"):
            object.__setattr__(self, name, _fmap(getattr(self, name)))
        for name in ("components", "account_ids", "actions", "observations", "has_account", "accounts"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def ego(self) -> CpsDecl | None:
        return self.cps[self.sts.ego] if self.sts is not None else None

    def accounts_of(self, principal: str) -> frozenset[str]:
        return frozenset(a for a, p in self.has_account if p == principal)


# -- build ------------------------------------------------------------------

_KINDS = (
    (ComponentDecl, "component"),
    (PrincipalDecl, "principal"),
    (BeingDecl, "being"),
    (EventDecl, "event"),
    (AccountDecl, "account"),
    (ActionDecl, "action"),
    (CpsBlock, "cps"),
)


class _Builder:
    def __init__(self):
        self.issues: list[Issue] = []
        self.kind_of: dict[str, str] = {}

    def issue(self, code: str, name: str, message: str, decl=None) -> None:
        line = getattr(decl, "line", None)
        column = getattr(decl, "column", None)
        self.issues.append(Issue(code, name, message, line, column))

    def declare(self, decl, kind: str) -> bool:
        name = decl.name
        if not IDENT_RE.match(name):
            self.issue("InvalidIdentifier", name, f"{kind} id must match [A-Za-z_][A-Za-z0-9_]*", decl)
            return False
        prior = self.kind_of.get(name)
        if prior is None:
            self.kind_of[name] = kind
            return True
        if prior == kind:
            self.issue("DuplicateDeclaration", name, f"{kind} {name} declared more than once", decl)
        else:
            self.issue("KindConflict", name, f"{name} declared as both {prior} and {kind}", decl)
        return False

    def need(self, name: str, kind: str, where: str, decl) -> bool:
        if self.kind_of.get(name) == kind:
            return True
        self.issue("UnknownEntity", name, f"{kind} {name} used in {where} is not declared", decl)
        return False


def _sort_key(decl) -> tuple:
    # Declaration order must not matter: process in a canonical order so that
    # issues and conflicts are reported identically for any permutation.
    return (type(decl).__name__, repr(decl))


def build_model(declarations: Iterable[Declaration]) -> Model:
    """Resolve declarations into a :class:`Model`.

    Raises ``ModelError`` listing every integrity problem found.
    """
    decls = sorted(declarations, key=_sort_key)
    b = _Builder()

    names: list[ScenarioDecl] = []
    components: set[str] = set()
    principals: dict[str, PrincipalKind] = {}
    beings: dict[str, BeingKind] = {}
    events: dict[str, EventKind] = {}
    account_ids: set[str] = set()
    actions: set[str] = set()
    blocks: list[CpsBlock] = []

    for d in decls:
        if isinstance(d, ScenarioDecl):
            names.append(d)
        for cls, kind in _KINDS:
            if isinstance(d, cls) and b.declare(d, kind):
                if kind == "component":
                    components.add(d.name)
                elif kind == "principal":
                    principals[d.name] = PrincipalKind(d.kind)
                elif kind == "being":
                    beings[d.name] = BeingKind(d.kind)
                elif kind == "event":
                    events[d.name] = EventKind(d.kind)
                elif kind == "account":
                    account_ids.add(d.name)
                elif kind == "action":
                    actions.add(d.name)
                elif kind == "cps":
                    blocks.append(d)

    if len(names) > 1:
        for n in names[1:]:
            b.issue("DuplicateDeclaration", n.name, "more than one scenario header", n)

    observations: set[Observation] = set()
    configuration: dict[str, str] = {}
    config_src: dict[str, object] = {}
    has_account: set[tuple[str, str]] = set()
    correction: dict[tuple[str, str], str] = {}
    caused: dict[str, frozenset[str]] = {}
    cps: dict[str, CpsDecl] = {}

    def check_obs(o: Observation, where: str, decl) -> bool:
        ok = b.need(o.event, "event", where, decl)
        ok &= b.need(o.component, "component", where, decl)
        ok &= b.need(o.account, "account", where, decl)
        return ok

    for blk in blocks:
        where = f"cps {blk.name}"
        comps = {c for c in blk.components if b.need(c, "component", where, blk)}
        princ = {p for p in blk.principals if b.need(p, "principal", where, blk)}
        setups = set()
        for c, p in blk.setups:
            if b.need(c, "component", where, blk) & b.need(p, "principal", where, blk):
                setups.add((c, p))
        logs = {o for o in blk.logs if check_obs(o, where, blk)}
        cps[blk.name] = CpsDecl(blk.name, frozenset(comps), frozenset(princ), frozenset(setups), frozenset(logs))
        observations |= logs
        for c, p in sorted(setups):
            if c in configuration and configuration[c] != p:
                b.issue("ConflictingSetup", c,
                        f"component {c} set up by both {configuration[c]} and {p}", blk)
            else:
                configuration[c] = p
                config_src[c] = blk

    ego_decls = [d for d in decls if isinstance(d, EgoDecl)]
    sts_principals: set[str] | None = None
    am_accounts: set[str] | None = None
    missed: set[str] | None = None
    structural: StructuralModel | None = None

    for d in decls:
        if isinstance(d, ObservationDecl):
            o = Observation(d.event, d.component, d.account)
            if check_obs(o, "observation", d):
                observations.add(o)
        elif isinstance(d, HasAccountDecl):
            if b.need(d.account, "account", "has_account", d) & b.need(d.principal, "principal", "has_account", d):
                has_account.add((d.account, d.principal))
        elif isinstance(d, CorrectionDecl):
            ok = b.need(d.principal, "principal", "correction", d)
            ok &= b.need(d.component, "component", "correction", d)
            ok &= b.need(d.action, "action", "correction", d)
            if ok:
                key = (d.principal, d.component)
                if key in correction and correction[key] != d.action:
                    b.issue("ConflictingCorrection", d.component,
                            f"({d.principal}, {d.component}) mapped to both {correction[key]} and {d.action}", d)
                else:
                    correction[key] = d.action
        elif isinstance(d, CausedDecl):
            if not d.components:
                b.issue("EmptyCausedSet", d.event, "caused set must not be empty", d)
            ok = b.need(d.event, "event", "caused", d)
            comps = [c for c in d.components if b.need(c, "component", "caused", d)]
            if ok and d.components and len(comps) == len(d.components):
                if d.event in caused:
                    b.issue("DuplicateDeclaration", d.event, f"caused {d.event} declared more than once", d)
                else:
                    caused[d.event] = frozenset(comps)
        elif isinstance(d, StsPrincipalsDecl):
            if sts_principals is not None:
                b.issue("DuplicateDeclaration", "sts_principals", "sts_principals given more than once", d)
            sts_principals = {p for p in d.principals if b.need(p, "principal", "sts_principals", d)}
        elif isinstance(d, AccountsDecl):
            if am_accounts is not None:
                b.issue("DuplicateDeclaration", "accounts", "accounts given more than once", d)
            am_accounts = {a for a in d.accounts if b.need(a, "account", "accounts", d)}
        elif isinstance(d, MissedByEgoDecl):
            if missed is not None:
                b.issue("DuplicateDeclaration", "missed_by_ego", "missed_by_ego given more than once", d)
            missed = {e for e in d.events if b.need(e, "event", "missed_by_ego", d)}
        elif isinstance(d, StructuralDecl):
            if structural is not None:
                b.issue("DuplicateDeclaration", "structural", "more than one structural block", d)
                continue
            structural = d.model
            for code, subject, message in structural.problems():
                b.issue(code, subject, message, d)
            for var, e in structural.event_map.items():
                b.need(e, "event", f"structural map {var}", d)
            for var, c in structural.component_map.items():
                b.need(c, "component", f"structural map {var}", d)

    sts = None
    if ego_decls:
        names_given = sorted({e.name for e in ego_decls})
        if len(names_given) > 1:
            for e in ego_decls:
                b.issue("DuplicateDeclaration", e.name, "more than one ego designation", e)
        ego = names_given[0]
        if ego not in cps:
            b.issue("EgoUnknown", ego, f"ego names undeclared cps {ego}", ego_decls[0])
        else:
            sts = StsDecl(
                ego=ego,
                foreign=tuple(sorted(set(cps) - {ego})),
                principals=frozenset(principals if sts_principals is None else sts_principals),
                beings=frozenset(beings),
            )
    elif cps:
        first = min(blocks, key=lambda blk: blk.name)
        b.issue("MissingEgo", first.name, "cps blocks declared but no ego designation", first)

    if b.issues:
        raise ModelError(sorted(b.issues, key=lambda i: (i.line or 0, i.column or 0, i.code, i.name)))

    return Model(
        name=names[0].name if names else "",
        components=frozenset(components),
        principals=principals,
        beings=beings,
        events=events,
        account_ids=frozenset(account_ids),
        actions=frozenset(actions),
        observations=frozenset(observations),
        component_configuration=configuration,
        has_account=frozenset(has_account),
        correction_action=correction,
        caused_facts=caused,
        cps=cps,
        sts=sts,
        accounts=frozenset(account_ids if am_accounts is None else am_accounts),
        missed_by_ego_declared=None if missed is None else frozenset(missed),
        structural=structural,
    )


def declarations_of(model: Model) -> list[Declaration]:
    """Inverse of :func:`build_model`: a declaration list that rebuilds ``model``."""
    out: list[Declaration] = [ScenarioDecl(model.name)]
    out += [ComponentDecl(c) for c in sorted(model.components)]
    out += [PrincipalDecl(p, k) for p, k in model.principals.items()]
    out += [BeingDecl(x, k) for x, k in model.beings.items()]
    out += [EventDecl(e, k) for e, k in model.events.items()]
    out += [AccountDecl(a) for a in sorted(model.account_ids)]
    out += [ActionDecl(a) for a in sorted(model.actions)]
    for cps in model.cps.values():
        out.append(CpsBlock(
            cps.id,
            tuple(sorted(cps.components)),
            tuple(sorted(cps.principals)),
            tuple(sorted(cps.setups)),
            tuple(sorted(cps.logs)),
        ))
    if model.sts is not None:
        out.append(EgoDecl(model.sts.ego))
        if model.sts.principals != frozenset(model.principals):
            out.append(StsPrincipalsDecl(tuple(sorted(model.sts.principals))))
    if model.accounts != model.account_ids:
        out.append(AccountsDecl(tuple(sorted(model.accounts))))
    if model.missed_by_ego_declared is not None:
        out.append(MissedByEgoDecl(tuple(sorted(model.missed_by_ego_declared))))
    logged = set().union(*(c.logs for c in model.cps.values())) if model.cps else set()
    out += [ObservationDecl(o.event, o.component, o.account) for o in sorted(model.observations - logged)]
    out += [HasAccountDecl(a, p) for a, p in sorted(model.has_account)]
    out += [CorrectionDecl(p, c, a) for (p, c), a in model.correction_action.items()]
    out += [CausedDecl(e, tuple(sorted(cs))) for e, cs in model.caused_facts.items()]
    if model.structural is not None:
        out.append(StructuralDecl(model.structural))
    return out
