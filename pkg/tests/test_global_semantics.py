from itertools import product

import pytest
from hypothesis import given

from conftest import projectable_types, raw_global_types
from mpst_iso import load
from mpst_iso.global_semantics import UnrollBudget, global_steps, trace_set_to_json, traces
from mpst_iso.parser import parse_global
from mpst_iso.syntax import END, Branch, Label, Prefix, Seq, disjoint, msg


def naive_steps(g):
    """Direct reading of the transition rules for recursion-free types, no caching or budgets."""
    out = set()
    if isinstance(g, Seq):
        out.add((g.prefix, g.cont))
        for p, succ in naive_steps(g.cont):
            if disjoint(g.prefix, p):
                out.add((p, Seq(g.prefix, succ)))
    elif isinstance(g, Branch):
        for sel, arm in g.arms:
            out.add((sel, arm))
        per_arm = [naive_steps(arm) for _, arm in g.arms]
        labels = set.intersection(*({p for p, _ in s} for s in per_arm))
        for p in labels:
            if p.pid & g.pid:
                continue
            choices = [[succ for q, succ in s if q == p] for s in per_arm]
            for combo in product(*choices):
                out.add((p, Branch(tuple((sel, c) for (sel, _), c in zip(g.arms, combo)))))
    return out


def naive_traces(g):
    steps = naive_steps(g)
    if not steps:
        return {()}
    return {(p,) + run for p, succ in steps for run in naive_traces(succ)}


def test_two_independent_messages_interleave():
    g = load("two_prefix")
    a, c = msg("A", "B", "Int"), msg("C", "D", "Bool")
    assert traces(g).complete == {(a, c), (c, a)}
    assert traces(g).truncated == frozenset()


def test_dependent_messages_do_not_interleave():
    g = parse_global("A -> B : <Int> ; B -> C : <Int> ; end")
    assert traces(g).complete == {(msg("A", "B", "Int"), msg("B", "C", "Int"))}


def test_branch_permutation():
    g = parse_global("A -> B : { x: C -> D : <Int> ; end, y: C -> D : <Int> ; end }")
    steps = dict(global_steps(g))
    cd = msg("C", "D", "Int")
    assert steps[cd] == parse_global("A -> B : { x: end, y: end }")
    assert Prefix("A", "B", Label("x")) in steps


def test_branch_permutation_needs_every_arm():
    g = parse_global("A -> B : { x: C -> D : <Int> ; end, y: end }")
    assert {p for p, _ in global_steps(g)} == {Prefix("A", "B", Label("x")), Prefix("A", "B", Label("y"))}


def test_end_has_the_empty_trace():
    assert traces(END).complete == {()}
    assert global_steps(END) == set()


def test_ehealth_trace_count():
    ts = traces(load("ehealth"))
    assert len(ts.complete) == 12
    assert all(len(r) == 7 for r in ts.complete)


@pytest.mark.parametrize("k", range(4))
def test_recursion_budget(k):
    ts = traces(load("recursive"), UnrollBudget(k))
    assert ts.complete == frozenset()
    assert ts.truncated == {(msg("A", "B", "Int"),) * k}
    assert len(ts.prefix_closed()) == k + 1


def test_recursion_with_exit():
    g = parse_global("rec t . A -> B : { more: t, stop: end }")
    more, stop = Prefix("A", "B", Label("more")), Prefix("A", "B", Label("stop"))
    ts = traces(g, 2)
    assert ts.complete == {(stop,), (more, stop)}
    assert ts.truncated == {(more, more)}


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        UnrollBudget(-1)
    with pytest.raises(ValueError):
        traces(END, -1)


def test_json_shape():
    data = trace_set_to_json(traces(load("two_prefix")).complete)
    assert data[0][0] == {"from": "A", "to": "B", "payload": "Int", "kind": "value"}
    assert len(data) == 2


@given(raw_global_types(max_depth=3))
def test_matches_naive_oracle(g):
    assert {(p, s) for p, s in global_steps(g, 0)} == naive_steps(g)
    assert traces(g, 0).complete == naive_traces(g)


@given(projectable_types())
def test_deterministic(g):
    assert trace_set_to_json(traces(g).complete) == trace_set_to_json(traces(g).complete)
    prefix_closed = traces(g).prefix_closed()
    assert () in prefix_closed and traces(g).complete <= prefix_closed
