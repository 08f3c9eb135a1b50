"""
Synchronous labelled transition system of global types and trace enumeration.

Transitions follow five rules:

* ``g ; G  --g-->  G``                                            (Inter)
* ``p -> q : {l_i : G_i}  --(p -> q : l_k)-->  G_k``               (SelBra)
* ``g ; G  --g'-->  g ; G'`` when ``G --g'--> G'`` and ``g``, ``g'`` are disjoint   (IPerm)
* ``p -> q : {l_i : G_i}  --g'-->  p -> q : {l_i : G_i'}`` when every arm makes the
  same ``g'`` step and ``g'`` avoids ``p`` and ``q``                  (SBPerm)
* ``rec t . G`` steps as its unfolding                             (Rec)

Recursive types have infinitely many traces, so every derivation is charged
for the ``Rec`` rules it uses and enumeration stops once an ``UnrollBudget``
is spent.  Runs that stop only because the budget ran out are reported as
truncated, never as complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import Branch, Prefix, Rec, Seq, Type, disjoint, payload_key, unfold

GlobalTrace = tuple[Prefix, ...]


@dataclass(frozen=True)
class UnrollBudget:
    """Maximum number of ``Rec`` rule applications along one run."""

    k: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("unroll budget must be non-negative")


def _budget(budget) -> int:
    if isinstance(budget, UnrollBudget):
        return budget.k
    if budget < 0:
        raise ValueError("unroll budget must be non-negative")
    return int(budget)


@lru_cache(maxsize=200_000)
def _steps(g: Type, budget: int) -> tuple[tuple[tuple[Prefix, Type, int], ...], bool]:
    """All ``(label, successor, rec_uses)`` with ``rec_uses <= budget``, and whether the budget cut anything."""
    found: dict[tuple[Prefix, Type], int] = {}
    blocked = False

    def add(p, succ, used):
        prev = found.get((p, succ))
        if prev is None or used < prev:
            found[(p, succ)] = used

    if isinstance(g, Seq):
        add(g.prefix, g.cont, 0)
        inner, blocked = _steps(g.cont, budget)
        for p, succ, used in inner:
            if disjoint(g.prefix, p):
                add(p, Seq(g.prefix, succ), used)
    elif isinstance(g, Branch):
        for p, arm in g.arms:
            add(p, arm, 0)
        common: dict[Prefix, list] | None = None
        for _, arm in g.arms:
            inner, cut = _steps(arm, budget)
            blocked = blocked or cut
            best: dict[Prefix, tuple[Type, int]] = {}
            for p, succ, used in inner:
                if p.pid & g.pid:
                    continue
                if p not in best or used < best[p][1]:
                    best[p] = (succ, used)
            if common is None:
                common = {p: [v] for p, v in best.items()}
            else:
                common = {p: vs + [best[p]] for p, vs in common.items() if p in best}
        for p, per_arm in (common or {}).items():
            used = sum(u for _, u in per_arm)
            if used > budget:
                blocked = True
                continue
            arms = tuple((sel, succ) for (sel, _), (succ, _) in zip(g.arms, per_arm))
            add(p, Branch(arms), used)
    elif isinstance(g, Rec):
        if budget == 0:
            blocked = True
        else:
            inner, blocked = _steps(unfold(g), budget - 1)
            for p, succ, used in inner:
                add(p, succ, used + 1)
    steps = tuple(sorted(((p, s, u) for (p, s), u in found.items()), key=lambda x: (x[0].sort_key(), x[2])))
    return steps, blocked


def global_steps(g: Type, budget=None) -> set[tuple[Prefix, Type]]:
    """Every ``(label, successor)`` derivable from ``g``.

    With ``budget=None`` a generous unfolding allowance of one ``Rec`` per
    binder nesting level is used, which is enough for a single step of any
    guarded type.
    """
    if budget is None:
        from .syntax import walk

        budget = sum(1 for n in walk(g) if isinstance(n, Rec))
    steps, _ = _steps(g, _budget(budget))
    return {(p, s) for p, s, _ in steps}


@dataclass(frozen=True)
class TraceSet:
    """Runs of a type under a budget.

    ``complete`` holds runs ending in a type with no transitions at all;
    ``truncated`` holds runs that stopped because the budget was spent.
    """

    complete: frozenset
    truncated: frozenset

    @property
    def maximal(self) -> frozenset:
        return self.complete

    def prefix_closed(self) -> frozenset:
        out = set()
        for run in self.complete | self.truncated:
            for i in range(len(run) + 1):
                out.add(run[:i])
        return frozenset(out)

    def sorted_complete(self) -> list:
        return sorted(self.complete, key=trace_sort_key)

    def sorted_truncated(self) -> list:
        return sorted(self.truncated, key=trace_sort_key)


def trace_sort_key(run: GlobalTrace) -> tuple:
    return tuple(p.sort_key() for p in run)


@lru_cache(maxsize=100_000)
def _runs(g: Type, budget: int) -> tuple[frozenset, frozenset]:
    steps, blocked = _steps(g, budget)
    if not steps:
        return (frozenset(), frozenset({()})) if blocked else (frozenset({()}), frozenset())
    complete, truncated = set(), set()
    for p, succ, used in steps:
        c, t = _runs(succ, budget - used)
        complete.update((p,) + run for run in c)
        truncated.update((p,) + run for run in t)
    return frozenset(complete), frozenset(truncated)


def traces(g: Type, budget=0) -> TraceSet:
    """Enumerate the maximal event sequences of ``g`` within ``budget`` unfoldings."""
    complete, truncated = _runs(g, _budget(budget))
    return TraceSet(complete, truncated)


def prefix_to_json(p: Prefix) -> dict:
    kind, name = payload_key(p.payload)
    return {"from": p.sender, "to": p.receiver, "payload": name, "kind": kind}


def trace_to_json(run: GlobalTrace) -> list[dict]:
    return [prefix_to_json(p) for p in run]


def trace_set_to_json(runs) -> list[list[dict]]:
    return [trace_to_json(r) for r in sorted(runs, key=trace_sort_key)]
