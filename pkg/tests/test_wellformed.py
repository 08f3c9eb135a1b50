import pytest
from hypothesis import given, strategies as st

from conftest import projectable_types, raw_global_types
from mpst_iso import load
from mpst_iso.combinators import node_at, replace_at
from mpst_iso.syntax import END, Branch, Label, Prefix, Rec, Send, Seq, Sort, Var, msg
from mpst_iso.wellformed import check_formation, check_projectable, is_well_formed


def rules(g):
    return {v.rule for v in check_formation(g)}


@pytest.mark.parametrize("name", ["ehealth", "ehealth_sw", "ehealth_sw_br", "two_prefix", "recursive", "nested_branch", "end"])
def test_corpus_is_well_formed(name):
    assert is_well_formed(load(name))


def test_unprojectable_reports_third_parties():
    failures = check_projectable(load("unprojectable"))
    assert [r for r, _ in failures] == ["C", "D"]
    assert failures[0][1].path == ()
    assert check_formation(load("unprojectable")) == []


def test_each_rule_is_reported():
    assert rules(Seq(Prefix("A", "A", Sort("Int")), END)) == {"Global Prefix"}
    assert rules(Seq(Prefix("A", "B", Label("x")), END)) == {"Exchange Values"}
    assert rules(Seq(Prefix("A", "b-c", Sort("Int")), END)) == {"Participant"}
    assert rules(Branch(((Prefix("A", "B", Sort("Int")), END),))) == {"Labels"}
    assert rules(Branch.of("A", "B", [("x", END), ("x", END)])) == {"Labels"}
    assert rules(Branch(((Prefix("A", "B", Label("x")), END), (Prefix("A", "C", Label("y")), END)))) == {"Branching"}
    assert rules(Seq(msg("A", "B", "Int"), Var("t"))) == {"Recursion"}
    assert rules(Send("B", Sort("Int"), END)) == {"Global type"}


def test_violation_paths():
    g = Seq(msg("A", "B", "Int"), Branch.of("A", "B", [("x", END), ("y", Seq(msg("C", "C", "Int"), END))]))
    (v,) = check_formation(g)
    assert v.rule == "Global Prefix" and v.path == (0, 1)
    assert v.to_json()["path"] == [0, 1]


@given(raw_global_types())
def test_generated_types_satisfy_formation(g):
    assert check_formation(g) == []


MUTATIONS = {
    "Global Prefix": lambda n: Seq(Prefix(n.prefix.sender, n.prefix.sender, n.prefix.payload), n.cont),
    "Exchange Values": lambda n: Seq(Prefix(n.prefix.sender, n.prefix.receiver, Label("oops")), n.cont),
    "Participant": lambda n: Seq(Prefix("not a name", n.prefix.receiver, n.prefix.payload), n.cont),
    "Recursion": lambda n: Seq(n.prefix, Var("free")),
}


@given(projectable_types(), st.sampled_from(sorted(MUTATIONS)), st.data())
def test_mutations_are_caught(g, rule, data):
    paths = [p for p, n in _nodes(g) if isinstance(n, Seq)]
    if not paths:
        return
    path = data.draw(st.sampled_from(paths))
    mutated = replace_at(g, path, MUTATIONS[rule](node_at(g, path)))
    found = check_formation(mutated)
    # an unbound variable is reported where it occurs, below the prefix
    where = path + (0,) if rule == "Recursion" else path
    assert any(v.rule == rule and v.path == where for v in found)
    assert not is_well_formed(mutated)


@given(projectable_types(), st.data())
def test_branch_mutations_are_caught(g, data):
    paths = [p for p, n in _nodes(g) if isinstance(n, Branch)]
    if not paths:
        return
    path = data.draw(st.sampled_from(paths))
    node = node_at(g, path)
    sel, arm = node.arms[0]
    dup = Branch(node.arms + ((sel, arm),))
    assert any(v.rule == "Labels" and v.path == path for v in check_formation(replace_at(g, path, dup)))
    stray = Prefix(sel.receiver, sel.sender, Label("zz"))
    mixed = Branch(node.arms + ((stray, END),))
    assert any(v.rule == "Branching" and v.path == path for v in check_formation(replace_at(g, path, mixed)))


def test_rec_is_checked_inside():
    g = Rec("t", Seq(msg("A", "B", "Int"), Seq(msg("A", "A", "Int"), Var("t"))))
    assert [v.path for v in check_formation(g)] == [(0, 0)]


def _nodes(g, path=()):
    yield path, g
    kids = [g.cont] if isinstance(g, Seq) else [a for _, a in g.arms] if isinstance(g, Branch) else []
    for i, k in enumerate(kids):
        yield from _nodes(k, path + (i,))
