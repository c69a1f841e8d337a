import dataclasses

import pytest
from hypothesis import given, settings

from acctmodel.checks import Mode, Severity, check_all, check_am, check_cps, check_sts, has_errors
from acctmodel.errors import MissingStsError, UnknownEntityError
from acctmodel.model import build_model

from rule_fixtures import RULE_FIXTURES, VALID, load_text, rule_model, text
from strategies import declaration_lists


def rules(violations):
    return [v.rule for v in violations]


def test_example_sts_strict(scenario):
    # the ego logs mention LIDAR only while its system has four components, and
    # CHASSIS is configured by VOLVO outside the system
    found = [(v.rule, v.subjects) for v in check_all(scenario("uber-sts"), Mode.STRICT)]
    assert found == [
        ("CPS-1", ("EGO", "AI", "USONIC", "VIDEO")),
        ("CPS-3", ("EGO", "VOLVO")),
        ("CPS-4", ("EGO", "CHASSIS")),
    ]


def test_example_sts_lenient(scenario):
    assert check_all(scenario("uber-sts"), Mode.LENIENT) == []


def test_example_sts_has_no_sts_violations(scenario):
    assert check_sts(scenario("uber-sts")) == []


def test_minimal_cps_is_clean():
    m = load_text(VALID)
    assert check_cps(m, "EGO", Mode.STRICT) == []
    assert check_all(m, Mode.STRICT) == []


def test_empty_setups_give_cps2_and_cps4():
    m = load_text(text(ego="  components = [C1]\n  principals = [P1]\n  log (E1, C1) -> A1"))
    assert rules(check_cps(m, "EGO", Mode.STRICT)) == ["CPS-2", "CPS-4"]


def test_unknown_cps():
    with pytest.raises(UnknownEntityError):
        check_cps(load_text(VALID), "NOPE")


def test_sts_needs_ego(scenario):
    with pytest.raises(MissingStsError):
        check_sts(scenario("lidar-structural"))
    # no accounts at all: the empty set is not a strict superset of anything
    assert rules(check_all(scenario("lidar-structural"))) == ["AM-4", "STS-0"]


def test_foreign_volvo_outside_sts_principals():
    extra = """\
cps F {
  components = [C2]
  principals = [P2]
  setup C2 by P2
  log (E1, C2) -> A2
}
has_account A1 by P1
sts_principals = [P1]"""
    found = check_sts(load_text(text(extra=extra)))
    assert [(v.rule, v.subjects) for v in found] == [("STS-3", ("F", "P2"))]


def test_ego_listed_as_foreign():
    m = rule_model("STS-1")
    assert rules(check_sts(m)) == ["STS-1"]


def test_repeated_foreign_ids():
    m = load_text(VALID)
    twice = dataclasses.replace(m.sts, foreign=("EGO", "EGO"))
    assert rules(check_sts(dataclasses.replace(m, sts=twice))) == ["STS-0", "STS-1"]


def test_hall_has_no_errors(scenario):
    found = check_am(scenario("uber-hall"))
    assert not has_errors(found)
    assert [(v.rule, v.severity) for v in found] == [("AM-4", Severity.WARNING)]


def test_undeclared_mechanism_account():
    assert rules(check_am(rule_model("AM-3"))) == ["AM-3"]


def test_every_account_known_is_a_warning():
    [v] = check_am(rule_model("AM-4"))
    assert v.rule == "AM-4" and v.severity is Severity.WARNING
    assert not has_errors([v])


def test_declared_missed_by_ego_is_checked():
    assert rules(check_am(rule_model("AM-5"))) == ["AM-5"]
    assert check_am(load_text(VALID)) == []


@pytest.mark.parametrize("rule", sorted(RULE_FIXTURES))
def test_each_rule_has_a_targeted_fixture(rule):
    assert rules(check_all(rule_model(rule), Mode.STRICT)) == [rule]


def test_strict_adds_observation_function_rule(scenario):
    strict = rules(check_all(scenario("uber-hall"), Mode.STRICT))
    assert strict == ["AM-4", "CPS-1", "CPS-3", "CPS-4", "OBS-1"]


def test_violation_rendering():
    [v] = check_all(rule_model("CPS-3"), Mode.STRICT)
    assert v.to_dict()["severity"] == "error"
    assert str(v).startswith("ERROR CPS-3 [EGO, P2]")


@settings(max_examples=300, deadline=None)
@given(declaration_lists(structural=False))
def test_lenient_findings_are_strict_findings(decls):
    m = build_model(decls)
    key = lambda v: (v.rule, v.subjects[:1])  # noqa: E731
    strict = {key(v) for v in check_all(m, Mode.STRICT)}
    assert {key(v) for v in check_all(m, Mode.LENIENT)} <= strict


@settings(max_examples=150, deadline=None)
@given(declaration_lists(structural=False))
def test_check_all_is_deterministic(decls):
    for mode in Mode:
        a = check_all(build_model(decls), mode)
        assert a == check_all(build_model(list(reversed(decls))), mode)
        assert a == sorted(a, key=lambda v: (v.rule.split("-")[0], int(v.rule.split("-")[1]), v.subjects, v.message))


@settings(max_examples=150, deadline=None)
@given(declaration_lists(structural=False))
def test_strict_clean_means_predicates_hold(decls):
    m = build_model(decls)
    if m.sts is None or has_errors(check_all(m, Mode.STRICT)):
        return
    for name in (m.sts.ego, *m.sts.foreign):
        d = m.cps[name]
        assert d.components == {o.component for o in d.logs}
        assert d.components and d.principals and d.setups
        assert {p for _, p in d.setups} <= d.principals
        assert {c for c, _ in d.setups} == d.components
        assert {o.account for o in d.logs} <= m.accounts
    assert m.sts.ego not in m.sts.foreign
    assert {a for a, _ in m.has_account} <= m.accounts
