"""Schema checks for the CPS, STS and accountability-mechanism predicates.

Each predicate is a named rule; a failing predicate yields one
:class:`Violation`. Rule ids are a stable public contract:

=======  =============================================================
CPS-1    system equals the components mentioned in the logs
CPS-2    system, principals and setups are all non-empty
CPS-3    every configuring principal is one of the CPS's principals
CPS-4    system equals the set of configured components
STS-0    an ego CPS is designated and foreign CPS ids are unique
STS-1    the ego is not among the foreign CPSs
STS-2    ego principals are STS principals
STS-3    every foreign CPS's principals are STS principals
AM-1     ego log accounts are mechanism accounts
AM-2     every foreign CPS's log accounts are mechanism accounts
AM-3     every account in hasAccount is a mechanism account
AM-4     hasAccount accounts are a strict subset of mechanism accounts
AM-5     a stated missedByEgo equals the computed one
OBS-1    Observation is functional on (event, component)   [strict only]
=======  =============================================================

Lenient mode relaxes the equalities of CPS-1 and CPS-4 to the inclusion
that keeps their intent (logged components lie inside the system; every
system component is configured) and restricts CPS-3 to setups of the
CPS's own components.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .errors import MissingStsError, UnknownEntityError
from .model import Model
from .relations import missed_by_ego


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class Mode(str, enum.Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class Violation:
    rule: str
    severity: Severity
    subjects: tuple[str, ...]
    message: str

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "severity": self.severity.value,
            "subjects": list(self.subjects),
            "message": self.message,
        }

    def __str__(self) -> str:
        subj = ", ".join(self.subjects)
        return f"{self.severity.value.upper()} {self.rule} [{subj}] {self.message}"


def _err(rule: str, subjects, message: str, owner: str | None = None) -> Violation:
    # the owning cps, when there is one, leads the subject list
    lead = (owner,) if owner is not None else ()
    return Violation(rule, Severity.ERROR, lead + tuple(sorted(subjects)), message)


def _fmt(xs) -> str:
    return "{" + ", ".join(sorted(xs)) + "}"


def check_cps(model: Model, cps: str, mode: Mode = Mode.LENIENT) -> list[Violation]:
    if cps not in model.cps:
        raise UnknownEntityError("cps", cps)
    d = model.cps[cps]
    strict = mode is Mode.STRICT
    out = []

    logged = d.logged_components
    if strict and logged != d.components:
        out.append(_err("CPS-1", (logged ^ d.components),
                        f"{cps}: system {_fmt(d.components)} != components in logs {_fmt(logged)}", cps))
    elif not strict and not logged <= d.components:
        out.append(_err("CPS-1", (logged - d.components),
                        f"{cps}: logged components {_fmt(logged - d.components)} outside system", cps))

    empty = [n for n, s in (("system", d.components), ("principals", d.principals), ("setups", d.setups)) if not s]
    if empty:
        out.append(_err("CPS-2", [], f"{cps}: empty {', '.join(empty)}", cps))

    setups = d.setups if strict else {(c, p) for c, p in d.setups if c in d.components}
    outsiders = {p for _, p in setups} - d.principals
    if outsiders:
        out.append(_err("CPS-3", outsiders,
                        f"{cps}: configuring principals {_fmt(outsiders)} not among its principals", cps))

    configured = {c for c, _ in d.setups}
    if strict and configured != d.components:
        out.append(_err("CPS-4", (configured ^ d.components),
                        f"{cps}: system {_fmt(d.components)} != configured components {_fmt(configured)}", cps))
    elif not strict and not d.components <= configured:
        out.append(_err("CPS-4", (d.components - configured),
                        f"{cps}: components {_fmt(d.components - configured)} have no setup", cps))
    return out


def check_sts(model: Model) -> list[Violation]:
    sts = model.sts
    if sts is None:
        raise MissingStsError("model declares no ego cps")
    out = []
    dupes = [c for c, n in Counter(sts.foreign).items() if n > 1]
    if dupes:
        out.append(_err("STS-0", dupes, f"foreign cps ids repeated: {_fmt(dupes)}"))
    if sts.ego in sts.foreign:
        out.append(_err("STS-1", [sts.ego], f"ego {sts.ego} also listed as a foreign cps"))
    ego = model.cps[sts.ego]
    extra = ego.principals - sts.principals
    if extra:
        out.append(_err("STS-2", extra, f"ego principals {_fmt(extra)} not among STS principals"))
    for f in dict.fromkeys(sts.foreign):
        if f == sts.ego:
            continue
        extra = model.cps[f].principals - sts.principals
        if extra:
            out.append(_err("STS-3", extra, f"{f}: principals {_fmt(extra)} not among STS principals", f))
    return out


def check_am(model: Model) -> list[Violation]:
    out = []
    sts = model.sts
    if sts is not None:
        stray = model.cps[sts.ego].log_accounts - model.accounts
        if stray:
            out.append(_err("AM-1", stray, f"ego log accounts {_fmt(stray)} not among mechanism accounts"))
        for f in dict.fromkeys(sts.foreign):
            if f == sts.ego:
                continue
            stray = model.cps[f].log_accounts - model.accounts
            if stray:
                out.append(_err("AM-2", stray,
                                f"{f}: log accounts {_fmt(stray)} not among mechanism accounts", f))
    known = {a for a, _ in model.has_account}
    stray = known - model.accounts
    if stray:
        out.append(_err("AM-3", stray, f"hasAccount accounts {_fmt(stray)} not among mechanism accounts"))
    # the subset half of the strict-subset predicate is AM-3's job
    if model.accounts <= known:
        out.append(Violation("AM-4", Severity.WARNING, tuple(sorted(known)),
                             "hasAccount covers every mechanism account (predicate demands a strict subset)"))
    if sts is not None and model.missed_by_ego_declared is not None:
        computed = missed_by_ego(model)
        if computed != model.missed_by_ego_declared:
            diff = computed ^ model.missed_by_ego_declared
            out.append(_err("AM-5", diff,
                            f"stated missedByEgo {_fmt(model.missed_by_ego_declared)} != computed {_fmt(computed)}"))
    return out


def check_observation_function(model: Model) -> list[Violation]:
    by_key: dict[tuple[str, str], set[str]] = {}
    for o in model.observations:
        by_key.setdefault((o.event, o.component), set()).add(o.account)
    return [
        _err("OBS-1", [e, c, *accts], f"Observation({e}, {c}) maps to several accounts {_fmt(accts)}")
        for (e, c), accts in by_key.items() if len(accts) > 1
    ]


def _rule_key(rule: str) -> tuple[str, int]:
    prefix, _, num = rule.partition("-")
    return prefix, int(num)


def check_all(model: Model, mode: Mode = Mode.LENIENT) -> list[Violation]:
    """All violations in a stable order (rule id, then subjects)."""
    out: list[Violation] = []
    if model.sts is None:
        out.append(_err("STS-0", [], "no ego cps declared"))
    else:
        for name in dict.fromkeys((model.sts.ego, *model.sts.foreign)):
            out += check_cps(model, name, mode)
        out += check_sts(model)
    out += check_am(model)
    if mode is Mode.STRICT:
        out += check_observation_function(model)
    return sorted(set(out), key=lambda v: (_rule_key(v.rule), v.subjects, v.message))


def has_errors(violations: list[Violation]) -> bool:
    return any(v.severity is Severity.ERROR for v in violations)
