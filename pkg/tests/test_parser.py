import pytest
from hypothesis import given

from conftest import raw_global_types
from mpst_iso import load
from mpst_iso.errors import DuplicateLabel, ParseError, SelfCommunication, UnboundRecVar, UnguardedRecursion
from mpst_iso.parser import parse_global, print_global, print_local
from mpst_iso.projection import project
from mpst_iso.syntax import END, Branch, Label, Prefix, Rec, Seq, Sort, Var, msg


def test_end():
    assert parse_global("end") == END
    assert parse_global("  // comment only\n end ") == END


def test_tuple_sort_is_one_payload():
    g = parse_global("P -> I : <PId, DId> ; end")
    assert g == Seq(msg("P", "I", "PId,DId"), END)
    assert g.prefix.payload == Sort("PId,DId")


def test_branch_and_recursion():
    g = parse_global("rec t . A -> B : { more: A -> B : <Int> ; t, stop: end }")
    assert isinstance(g, Rec)
    body = g.body
    assert isinstance(body, Branch) and body.labels == ("more", "stop")
    assert body.arm("more") == Seq(msg("A", "B", "Int"), Var("t"))


def test_ehealth_shape():
    g = load("ehealth")
    assert isinstance(g, Seq) and g.prefix == msg("P", "I", "PId,DId")
    assert isinstance(seq_tail(g, 3), Branch)


def seq_tail(g, n):
    for _ in range(n):
        g = g.cont
    return g


def test_print_global_canonical():
    g = parse_global("A->B:<Int>;B->A:{x:end,y:end}")
    assert print_global(g) == "A -> B : <Int> ; B -> A : {x: end, y: end}"
    assert print_global(parse_global("P -> I : <PId,DId>; end")) == "P -> I : <PId, DId> ; end"


def test_print_local():
    assert print_local(project(load("ehealth"), "I")) == "P?<PId,DId>; R?<Quote>; end"
    assert print_local(project(load("ehealth"), "D")).startswith("R!<RetrRec>; P?<IId,Symptoms>; P ⊕ {")


@given(raw_global_types())
def test_round_trip(g):
    assert parse_global(print_global(g)) == g


@pytest.mark.parametrize(
    "text, exc",
    [
        ("A -> A : <Int> ; end", SelfCommunication),
        ("A -> B : { ok: end, ok: end }", DuplicateLabel),
        ("A -> B : <Int> ; t", UnboundRecVar),
        ("rec t . t", UnguardedRecursion),
        ("rec t . rec s . t", UnguardedRecursion),
        ("A -> B <Int> ; end", ParseError),
        ("A -> B : <Int> end", ParseError),
        ("A -> B : <Int> ;", ParseError),
        ("A -> B : {}", ParseError),
        ("end end", ParseError),
        ("A -> B : <Int> ; end $", ParseError),
        ("", ParseError),
    ],
)
def test_errors(text, exc):
    with pytest.raises(exc) as info:
        parse_global(text)
    span = info.value.span
    assert span is not None
    assert 1 <= span.start_line <= span.end_line
    assert 0 <= span.start_offset <= span.end_offset <= len(text)


def test_error_location():
    text = "A -> B : <Int> ;\nC -> C : <Int> ; end"
    with pytest.raises(SelfCommunication) as info:
        parse_global(text)
    span = info.value.span
    assert (span.start_line, span.start_col) == (2, 1)
    assert text[span.start_offset:span.end_offset] == "C -> C"


def test_parse_error_lists_expected():
    with pytest.raises(ParseError) as info:
        parse_global("A -> B <Int> ; end")
    assert info.value.expected == ["':'"]
    assert "expected ':'" in str(info.value)


def test_rec_var_shadowing_parses():
    g = parse_global("rec t . A -> B : <Int> ; rec t . B -> A : <Int> ; t")
    assert g == Rec("x", Seq(msg("A", "B", "Int"), Rec("y", Seq(msg("B", "A", "Int"), Var("y")))))


def test_print_global_rejects_mixed_branch():
    bad = Branch(((Prefix("A", "B", Label("x")), END), (Prefix("A", "C", Label("y")), END)))
    with pytest.raises(ValueError):
        print_global(bad)
