import pytest
from hypothesis import given, strategies as st

from conftest import projectable_types
from mpst_iso import load
from mpst_iso.errors import Unmergeable
from mpst_iso.parser import parse_global, print_local
from mpst_iso.projection import local_to_json, merge, mergeable, project, project_all
from mpst_iso.syntax import END, Offer, Rec, Recv, Select, Send, Sort, Var, participants

EHEALTH = {
    "I": "P?<PId,DId>; R?<Quote>; end",
    "P": "I!<PId,DId>; D!<IId,Symptoms>; D & {Prescr: end, Ref: end}",
    "D": "R!<RetrRec>; P?<IId,Symptoms>; P ⊕ {Prescr: R ⊕ {Prescr: R!<UpRec>; end}, Ref: R ⊕ {Ref: R!<Test>; end}}",
    "R": "D?<RetrRec>; I!<Quote>; D & {Prescr: D?<UpRec>; end, Ref: D?<Test>; end}",
}


@pytest.mark.parametrize("role", sorted(EHEALTH))
def test_ehealth_projections(role):
    assert print_local(project(load("ehealth"), role)) == EHEALTH[role]


def test_project_all_is_keyed_by_participant():
    assert list(project_all(load("ehealth"))) == ["D", "I", "P", "R"]


def test_non_participant_projects_to_end():
    assert project(load("ehealth"), "X") == END


def test_unprojectable_names_the_clash():
    with pytest.raises(Unmergeable) as info:
        project(load("unprojectable"), "C")
    f = info.value.failure
    assert f.participant == "C" and f.path == ()
    assert {f.left, f.right} == {Send("D", Sort("Int"), END), Recv("D", Sort("Int"), END)}
    # the branch endpoints still project
    assert isinstance(project(load("unprojectable"), "A"), Select)


def test_offer_labels_union():
    a = Offer("P", (("x", END),))
    b = Offer("P", (("y", Recv("P", Sort("Int"), END)),))
    assert merge(a, b) == Offer("P", (("x", END), ("y", Recv("P", Sort("Int"), END))))


def test_offer_shared_label_merges_recursively():
    a = Offer("P", (("x", Offer("Q", (("u", END),))),))
    b = Offer("P", (("x", Offer("Q", (("v", END),))),))
    assert merge(a, b) == Offer("P", (("x", Offer("Q", (("u", END), ("v", END)))),))


def test_select_needs_equal_labels():
    assert not mergeable(Select("P", (("x", END),)), Select("P", (("y", END),)))
    assert mergeable(Select("P", (("x", END),)), Select("P", (("x", END),)))


def test_clashes():
    assert not mergeable(END, Send("P", Sort("Int"), END))
    assert not mergeable(Send("P", Sort("Int"), END), Send("Q", Sort("Int"), END))
    assert not mergeable(Send("P", Sort("Int"), END), Send("P", Sort("Bool"), END))
    assert not mergeable(Offer("P", (("x", END),)), Offer("Q", (("x", END),)))


def test_third_party_informed_by_label():
    g = parse_global("A -> B : { l1: A -> C : { go: C -> A : <Int> ; end }, l2: A -> C : { stop: end } }")
    assert print_local(project(g, "C")) == "A & {go: A!<Int>; end, stop: end}"


def test_recursion_projection():
    g = parse_global("rec t . A -> B : <Int> ; t")
    assert project(g, "A") == Rec("t", Send("B", Sort("Int"), Var("t")))
    assert project(g, "C") == END
    # C cannot tell whether the loop continues
    g = parse_global("rec t . A -> B : { more: A -> B : <Int> ; t, stop: B -> C : <Int> ; end }")
    with pytest.raises(Unmergeable):
        project(g, "C")
    g = parse_global("rec t . A -> B : { more: B -> C : { more: t }, stop: B -> C : { stop: end } }")
    assert print_local(project(g, "C")) == "rec t . B & {more: t, stop: end}"


def test_local_to_json():
    data = local_to_json(project(load("ehealth"), "I"))
    assert data == {
        "kind": "recv", "peer": "P", "payload": "PId,DId",
        "cont": {"kind": "recv", "peer": "R", "payload": "Quote", "cont": {"kind": "end"}},
    }


def _local_pool(gs):
    return [project(g, r) for g in gs for r in sorted(participants(g))]


@given(st.lists(projectable_types(3), min_size=1, max_size=3))
def test_merge_laws(gs):
    pool = _local_pool(gs)
    for a in pool:
        assert merge(a, a) == a
        for b in pool:
            assert mergeable(a, b) == mergeable(b, a)
            if mergeable(a, b):
                assert merge(a, b) == merge(b, a)
                for c in pool:
                    if mergeable(merge(a, b), c) and mergeable(b, c) and mergeable(a, merge(b, c)):
                        assert merge(merge(a, b), c) == merge(a, merge(b, c))


@given(projectable_types())
def test_participants_of_projections_are_peers(g):
    ps = participants(g)
    for r, t in project_all(g).items():
        assert _peers(t) <= ps - {r}


def _peers(t):
    if isinstance(t, (Send, Recv)):
        return {t.peer} | _peers(t.cont)
    if isinstance(t, (Select, Offer)):
        return {t.peer}.union(*(_peers(a) for _, a in t.arms))
    if isinstance(t, Rec):
        return _peers(t.body)
    return set()
