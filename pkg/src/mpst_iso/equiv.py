"""
Isomorphism checking between global types.

``check_iso`` first compares complete trace sets: a difference is a sound
disproof, since every combinator preserves traces.  Otherwise it runs a
breadth-first search over combinator rewrites from the first type and, on
reaching the second, returns the shortest witness found.  Exhausting the
search bound is reported as inconclusive, never as non-isomorphic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .combinators import RewriteSite, Witness, applicable_sites, apply_site, invert_witness, replay, witness_to_json
from .global_semantics import GlobalTrace, trace_sort_key, trace_to_json, traces
from .local_semantics import config_traces, delta, denotation, identified_traces
from .projection import project_all
from .syntax import Type

ISOMORPHIC = "isomorphic"
UNKNOWN = "unknown"
MISMATCH = "mismatch"

DEFAULT_BOUND = 8
DEFAULT_UNROLL = 2


@dataclass(frozen=True)
class IsoVerdict:
    status: str
    search_bound: int
    budget: int
    witness: Witness = ()
    inverse_witness: Witness = ()
    counterexample: GlobalTrace | None = None
    counterexample_in: str | None = None  # "left" or "right"
    explored: int = 0
    steps: int = 0

    @property
    def isomorphic(self) -> bool:
        return self.status == ISOMORPHIC

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": witness_to_json(self.witness),
            "inverse": witness_to_json(self.inverse_witness),
            "counterexample": trace_to_json(self.counterexample) if self.counterexample is not None else [],
            "bound": self.search_bound,
            "unroll": self.budget,
        }


def _trace_mismatch(g1: Type, g2: Type, budget: int):
    left = traces(g1, budget).complete
    right = traces(g2, budget).complete
    if left == right:
        return None
    diff = sorted(left ^ right, key=trace_sort_key)
    run = diff[0]
    side = "left" if run in left else "right"
    # re-validate: present on exactly one side
    assert (run in left) != (run in right)
    return run, side


def search_witness(g1: Type, g2: Type, search_bound: int = DEFAULT_BOUND) -> tuple[Witness | None, int]:
    """Shortest sequence of rewrites taking ``g1`` to ``g2`` within ``search_bound`` steps."""
    if g1 == g2:
        return (), 1
    parent: dict[Type, tuple[Type, RewriteSite] | None] = {g1: None}
    frontier = deque([(g1, 0)])
    while frontier:
        g, depth = frontier.popleft()
        if depth >= search_bound:
            continue
        for site in applicable_sites(g):
            nxt = apply_site(g, site)
            if nxt in parent:
                continue
            parent[nxt] = (g, site)
            if nxt == g2:
                path = []
                cur = nxt
                while parent[cur] is not None:
                    prev, s = parent[cur]
                    path.append(s)
                    cur = prev
                return tuple(reversed(path)), len(parent)
            frontier.append((nxt, depth + 1))
    return None, len(parent)


def check_iso(g1: Type, g2: Type, search_bound: int = DEFAULT_BOUND, budget: int = DEFAULT_UNROLL) -> IsoVerdict:
    """Decide ``g1 ≅ g2`` up to the search bound, certifying the answer.

    Both types must be projectable; projection errors propagate.
    """
    project_all(g1)
    project_all(g2)
    mismatch = _trace_mismatch(g1, g2, budget)
    if mismatch is not None:
        run, side = mismatch
        return IsoVerdict(MISMATCH, search_bound, budget, counterexample=run, counterexample_in=side)
    witness, explored = search_witness(g1, g2, search_bound)
    if witness is None:
        return IsoVerdict(UNKNOWN, search_bound, budget, explored=explored, steps=search_bound)
    inverse = invert_witness(witness)
    if replay(g1, witness) != g2 or replay(g2, inverse) != g1:
        raise AssertionError("witness failed to replay")
    return IsoVerdict(ISOMORPHIC, search_bound, budget, witness, inverse, explored=explored, steps=len(witness))


def check_lemma1(g: Type, site: RewriteSite, budget: int = 0) -> bool:
    """Rewriting at ``site`` leaves the complete trace set unchanged."""
    return traces(g, budget).complete == traces(apply_site(g, site), budget).complete


def check_theorem1(g: Type, budget: int = 0) -> bool:
    """Identified global traces coincide with the terminated traces of the projected configuration.

    Budgets are charged per global unfolding on one side and per local
    unfolding on the other, so for recursive types equal ``budget`` values
    do not bound the same runs; the comparison is exact for recursion-free types.
    """
    return identified_traces(g, budget) == config_traces(delta(g), budget).complete


def check_theorem2(g1: Type, g2: Type, witness, budget: int = 0) -> bool:
    """Types related by ``witness`` have equal denotations."""
    if replay(g1, witness) != g2:
        raise ValueError("witness does not transform the first type into the second")
    return denotation(g1, budget) == denotation(g2, budget)
