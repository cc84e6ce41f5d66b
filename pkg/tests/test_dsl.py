import pytest

from dsl.dot import export_dot
from dsl.lexer import SourceSpan, TokenType, tokenize
from dsl.parser import parse
from dsl.serializer import serialize
from simulator.errors import DslError
from simulator.process import GatewayType, NodeType, node_edges
from simulator.process_generator import generate_process
from tests.conftest import ALL_FIXTURES, DATA_DIR, load_fixture

AND_NET = ("process P { start s; end e; task B; task C; gateway and_split G1; gateway and_join G2; "
           "s -> G1; G1 -> B; G1 -> C; B -> G2; C -> G2; G2 -> e; }")


def parse_errors(text):
    with pytest.raises(DslError) as info:
        parse(text)
    return info.value


class TestParse:

    def test_minimal_sequence(self):
        definition = parse("process P { start s; end e; task A; s -> A; A -> e; }")
        assert definition.name == "P"
        assert definition.node_ids == ["s", "e", "A"]
        assert [edge.ref for edge in definition.edges] == ["s->A", "A->e"]

    def test_and_net(self):
        definition = parse(AND_NET)
        incoming, outgoing = node_edges(definition, "G2")
        assert [e.ref for e in incoming] == ["B->G2", "C->G2"]
        assert [e.ref for e in outgoing] == ["G2->e"]
        assert definition.kind("G1").is_(GatewayType.AND_SPLIT)

    def test_missing_semicolon(self):
        error = parse_errors("process P { start s; end e task A; }")
        first = error.errors[0]
        assert first.expected == ";"
        assert first.found == "task"
        assert first.span == SourceSpan(1, 28)
        assert error.code == "PARSE"

    def test_validation_failure_carries_report(self):
        error = parse_errors("process P { start s; end e; task A; s -> A; }")
        assert error.errors == []
        assert error.code == "INVALID"
        assert {("ARITY", "A"), ("ARITY", "e")} <= {(v.code, v.ref) for v in error.report.violations}

    def test_keywords_usable_as_node_ids(self):
        definition = parse("process P { start start; task task; end end; start -> task; task -> end; }")
        assert definition.kind("task").type is NodeType.TASK
        assert definition.start == "start"

    def test_comments_and_crlf(self):
        text = "# leading comment\r\nprocess P { # trailing\r\n start s; end e; task A;\r\n s -> A; A -> e; }\r\n"
        assert parse(text).node_ids == ["s", "e", "A"]

    def test_n_of_m_and_labels(self):
        definition = parse(
            "process P { start s; end e; gateway or_split O; task A; task B; gateway n_of_m(2) J; "
            "s -> O; O -> A [high]; O -> B [  low road ]; A -> J; B -> J; J -> e; }"
        )
        assert definition.kind("J").gateway.n == 2
        assert [definition.edges[i].label for i in definition.outgoing("O")] == ["high", "low road"]

    @pytest.mark.parametrize("text, expected", [
        ("process P { start s; end e; s -> e [] ; }", "label"),
        ("process P { start s; end e; s -> e [open ; }", "]"),
        ("process P { start s; end e; gateway n_of_m N; }", "("),
        ("process P { start s; end e; gateway fork G; }", "gateway kind"),
        ("process P { start s; end e; s => e; }", "token"),
        ("process P { start s; end e; s -> e; } extra", "end of input"),
    ])
    def test_syntax_errors(self, text, expected):
        assert expected in [e.expected for e in parse_errors(text).errors]

    def test_recovery_reports_every_declaration(self):
        error = parse_errors("process P {\n start s;\n end e\n task A;\n A -> e\n}\n")
        assert [e.span.line for e in error.errors] == [4, 6]

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_fixtures_parse(self, name):
        assert load_fixture(name).name


class TestSerialize:

    def test_canonical_text(self):
        text = serialize(parse("process P { start s; end e; task A; s -> A; A -> e; }"))
        assert text == "process P {\n    start s;\n    end e;\n    task A;\n    s -> A;\n    A -> e;\n}\n"

    def test_n_of_m_and_label_syntax(self):
        text = serialize(parse(
            "process P { start s; end e; gateway xor_split G1; task B; task C; gateway n_of_m(2) J; "
            "s -> G1; G1 -> B [high]; G1 -> C; B -> J; C -> J; J -> e; }"
        ))
        assert "gateway n_of_m(2) J;" in text
        assert "G1 -> B [high];" in text

    def test_random_definitions_round_trip(self):
        for seed in range(500):
            definition = generate_process(seed, name=f"P{seed}")
            assert parse(serialize(definition)) == definition, seed

    def test_fixtures_round_trip(self):
        for name in ALL_FIXTURES:
            definition = load_fixture(name)
            assert parse(serialize(definition)) == definition


def _offset(text, span):
    lines = text.split("\n")
    return sum(len(line) + 1 for line in lines[:span.line - 1]) + span.column - 1


class TestErrorSpans:

    @pytest.mark.parametrize("name", ["multi_merge", "exclusive_choice", "discriminator_loop"])
    def test_single_token_deletion(self, name):
        text = (DATA_DIR / f"{name}.wfp").read_text(encoding="utf-8")
        tokens, _ = tokenize(text)
        for token, following in zip(tokens, tokens[1:]):
            if token.type is TokenType.LABEL:
                continue
            start = _offset(text, token.span)
            broken = text[:start] + text[start + len(token.value):]
            shifted = following.span
            if shifted.line == token.span.line:
                shifted = SourceSpan(shifted.line, shifted.column - len(token.value))

            error = parse_errors(broken)
            assert error.errors, f"deleting {token.value!r} at {token.span} went unnoticed"
            first = error.errors[0]
            assert first.span <= shifted
            assert first.span.line <= broken.count("\n") + 1
            assert first.span.column >= 1


class TestExportDot:

    def test_sequence(self):
        dot = export_dot(parse("process P { start s; end e; task A; s -> A; A -> e; }"))
        lines = dot.splitlines()
        assert lines[0] == 'digraph "P" {'
        assert len([line for line in lines if "[shape=" in line]) == 3
        assert len([line for line in lines if "->" in line]) == 2
        assert '"A" [shape=box, label="A"];' in dot
        assert '"e" [shape=doublecircle, label="e"];' in dot

    def test_gateway_tags(self):
        assert 'shape=diamond, label="AND-split", xlabel="G1"' in export_dot(parse(AND_NET))
        assert 'label="AND-join"' in export_dot(parse(AND_NET))
        assert 'label="DISC"' in export_dot(load_fixture("discriminator_loop"))
        assert 'label="2-of-3"' in export_dot(load_fixture("n_of_m_loop"))
        or_dot = export_dot(load_fixture("multi_choice"))
        assert 'label="OR-split"' in or_dot and 'label="OR-join"' in or_dot

    def test_edge_labels_quoted(self):
        dot = export_dot(load_fixture("exclusive_choice"))
        assert '"X" -> "A" [label="approve"];' in dot

    def test_deterministic(self):
        assert export_dot(load_fixture("multi_merge")) == export_dot(load_fixture("multi_merge"))
