import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acctmodel import scenario_path
from acctmodel.causality import And, Not, Or, StructuralModel, Var
from acctmodel.dsl import ParseError, ScenarioSyntaxError, UnterminatedBlock, parse_scenario, resolve, serialize
from acctmodel.errors import ModelError
from acctmodel.model import ComponentDecl, Model, ScenarioDecl, StructuralDecl, build_model

from strategies import declaration_lists, expressions

SCENARIOS = ["uber-sts", "uber-hall", "uber-lindberg", "uber-raci", "lidar-structural"]


def count_top_level_statements(text):
    """Independent count: non-blank, non-comment lines at brace depth 0; a block counts once."""
    depth, count = 0, 0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if depth == 0 and line != "{":
            count += 1
        depth += line.count("{") - line.count("}")
    return count


def syntax_errors(text):
    with pytest.raises(ScenarioSyntaxError) as exc:
        parse_scenario(text)
    return exc.value.errors


def test_single_component():
    ast = parse_scenario("component LIDAR")
    assert ast.statements == (ComponentDecl("LIDAR"),)
    assert resolve(ast).components == {"LIDAR"}


def test_statement_count_matches_line_scan():
    text = scenario_path("uber-hall.acct").read_text()
    ast = parse_scenario(text)
    assert len(ast.statements) == count_top_level_statements(text) == 25
    assert ast.scenario_name == "exampleAMhall"


def test_bad_enum_value():
    errs = syntax_errors("principal UBER kind=robot\n")
    assert errs == [ParseError(1, 21, "person|legal_entity", "robot")]


def test_errors_are_collected_across_lines():
    errs = syntax_errors("component\nprincipal P kind=robot\ncomponent OK\nevent E kind=\n")
    assert [e.line for e in errs] == [1, 2, 4]


def test_unterminated_block():
    errs = syntax_errors("component C\ncps S {\n  components = [C]\n")
    assert errs == [UnterminatedBlock(2, 1, "'}'", "end of input")]
    [err] = syntax_errors("structural {\n  exo A = true\n")
    assert isinstance(err, UnterminatedBlock) and err.line == 1


def test_brace_on_next_line():
    ast = parse_scenario("cps S\n{\n  components = []\n}\nego S\n")
    assert ast.statements[0].name == "S"


def test_missing_ego():
    with pytest.raises(ModelError) as exc:
        resolve(parse_scenario("cps S {\n}\n"))
    assert [i.code for i in exc.value.issues] == ["MissingEgo"]


def test_unknown_ego():
    with pytest.raises(ModelError) as exc:
        resolve(parse_scenario("cps S {\n}\nego T\n"))
    assert [(i.code, i.name) for i in exc.value.issues] == [("EgoUnknown", "T")]


def test_no_cps_means_no_sts():
    m = resolve(parse_scenario("component C\n"))
    assert m.sts is None


def test_invalid_utf8_is_one_error():
    errs = syntax_errors(b"component A\ncomponent \xff\n")
    assert len(errs) == 1 and (errs[0].line, errs[0].column) == (2, 11)


def test_crlf_and_comments():
    ast = parse_scenario("# header\r\ncomponent A  # trailing\r\n\r\ncomponent B\r\n")
    assert [d.name for d in ast.statements] == ["A", "B"]


def test_string_escapes_round_trip():
    name = 'a "quoted"\\ name\twith\nnewline'
    m = build_model([ScenarioDecl(name)])
    assert resolve(parse_scenario(serialize(m))).name == name


def test_reserved_word_is_not_a_variable():
    errs = syntax_errors("structural {\n  exo and = true\n}\n")
    assert errs[0].line == 2


def test_variable_redefinition_is_parse_error():
    errs = syntax_errors("structural {\n  exo A = true\n  eq A := A\n}\n")
    assert errs[0].line == 3


def test_expression_precedence():
    ast = parse_scenario("structural {\n  exo A = true\n  exo B = true\n  exo C = false\n  eq D := not A or B and C\n}\n")
    sm = ast.statements[0].model
    assert sm.equations["D"] == Or((Not(Var("A")), And((Var("B"), Var("C")))))


def test_serializer_sorts_identifiers():
    m = build_model([ComponentDecl("Z_COMP"), ComponentDecl("A_COMP")])
    text = serialize(m)
    assert text.index("A_COMP") < text.index("Z_COMP")


def test_empty_model_serializes_to_header():
    assert serialize(Model()) == 'scenario ""\n'


@pytest.mark.parametrize("name", SCENARIOS)
def test_bundled_scenarios_round_trip(scenario, name):
    m = scenario(name)
    text = serialize(m)
    assert resolve(parse_scenario(text)) == m
    assert serialize(resolve(parse_scenario(text))) == text


@settings(max_examples=300, deadline=None)
@given(declaration_lists())
def test_round_trip(decls):
    m = build_model(decls)
    text = serialize(m)
    again = resolve(parse_scenario(text))
    assert again == m
    assert serialize(again) == text


@settings(max_examples=100, deadline=None)
@given(declaration_lists(), st.randoms(use_true_random=False))
def test_serialization_ignores_declaration_order(decls, rng):
    shuffled = list(decls)
    rng.shuffle(shuffled)
    assert serialize(build_model(shuffled)) == serialize(build_model(decls))


@settings(max_examples=200, deadline=None)
@given(expressions([f"V{i}" for i in range(4)], depth=4))
def test_expressions_round_trip(e):
    sm = StructuralModel({f"V{i}": True for i in range(4)}, {"OUT": e})
    m = build_model([StructuralDecl(sm)])
    assert resolve(parse_scenario(serialize(m))).structural.equations["OUT"] == e


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_arbitrary_bytes_never_crash(data):
    try:
        resolve(parse_scenario(data))
    except (ScenarioSyntaxError, ModelError):
        pass


def test_mutated_scenarios_never_crash():
    rng = random.Random(7)
    base = scenario_path("uber-lindberg.acct").read_bytes()
    for _ in range(300):
        data = bytearray(base)
        for _ in range(rng.randint(1, 8)):
            pos = rng.randrange(len(data))
            op = rng.random()
            if op < 0.4:
                data[pos] = rng.randrange(256)
            elif op < 0.7:
                del data[pos]
            else:
                data.insert(pos, rng.choice(b"{}()[]=,\n\"#-> ab"))
        try:
            resolve(parse_scenario(bytes(data)))
        except (ScenarioSyntaxError, ModelError):
            pass
