"""
Projection of global types onto participants, with branch merging.

Merging is the congruence generated by combining external choices: two
local types merge when they have the same shape, peer and payload and their
continuations merge, except that two offers from the same peer may carry
different labels, in which case their arms are unioned (arms with a shared
label are merged recursively).
"""

from __future__ import annotations

from functools import reduce

from .errors import ProjectionFailure, Unmergeable
from .syntax import (
    END,
    Branch,
    End,
    Offer,
    Rec,
    Recv,
    Select,
    Send,
    Seq,
    Type,
    Var,
    all_var_names,
    free_vars,
    fresh_var,
    participants,
    substitute,
)


class _Clash(Exception):
    pass


def _merge(a: Type, b: Type) -> Type:
    if a == b:
        return a
    if isinstance(a, Send) and isinstance(b, Send) or isinstance(a, Recv) and isinstance(b, Recv):
        if a.peer != b.peer or a.sort != b.sort:
            raise _Clash
        return type(a)(a.peer, a.sort, _merge(a.cont, b.cont))
    if isinstance(a, Select) and isinstance(b, Select):
        if a.peer != b.peer or {l for l, _ in a.arms} != {l for l, _ in b.arms}:
            raise _Clash
        other = dict(b.arms)
        return Select(a.peer, tuple((l, _merge(t, other[l])) for l, t in a.arms))
    if isinstance(a, Offer) and isinstance(b, Offer):
        if a.peer != b.peer:
            raise _Clash
        other = dict(b.arms)
        arms = [(l, _merge(t, other[l]) if l in other else t) for l, t in a.arms]
        mine = {l for l, _ in a.arms}
        arms += [(l, t) for l, t in b.arms if l not in mine]
        return Offer(a.peer, tuple(arms))
    if isinstance(a, Rec) and isinstance(b, Rec):
        var = a.var
        body_b = b.body
        if b.var != var:
            if var in free_vars(b):
                var = fresh_var(all_var_names(a) | all_var_names(b), a.var)
            body_a = substitute(a.body, a.var, Var(var))
            body_b = substitute(b.body, b.var, Var(var))
        else:
            body_a = a.body
        return Rec(var, _merge(body_a, body_b))
    raise _Clash


def mergeable(t1: Type, t2: Type) -> bool:
    """Whether ``merge(t1, t2)`` is defined."""
    try:
        _merge(t1, t2)
    except _Clash:
        return False
    return True


def merge(t1: Type, t2: Type) -> Type:
    """Merge two local types; raises ``Unmergeable`` when they clash."""
    try:
        return _merge(t1, t2)
    except _Clash:
        raise Unmergeable(ProjectionFailure(t1, t2)) from None


def _project(g: Type, q: str, path: tuple[int, ...]) -> Type:
    if isinstance(g, End):
        return END
    if isinstance(g, Var):
        return g
    if isinstance(g, Seq):
        p = g.prefix
        cont = _project(g.cont, q, path + (0,))
        if q == p.sender:
            return Send(p.receiver, p.payload, cont)
        if q == p.receiver:
            return Recv(p.sender, p.payload, cont)
        return cont
    if isinstance(g, Branch):
        arms = [(p.payload.name, _project(a, q, path + (i,))) for i, (p, a) in enumerate(g.arms)]
        if q == g.sender:
            return Select(g.receiver, tuple(arms))
        if q == g.receiver:
            return Offer(g.sender, tuple(arms))
        try:
            return reduce(_merge, (t for _, t in arms))
        except _Clash:
            pass
        # locate the first pair that clashes, for the report
        for i in range(len(arms)):
            for j in range(i + 1, len(arms)):
                if not mergeable(arms[i][1], arms[j][1]):
                    raise Unmergeable(ProjectionFailure(arms[i][1], arms[j][1], path, q))
        raise Unmergeable(ProjectionFailure(arms[0][1], arms[-1][1], path, q))
    if isinstance(g, Rec):
        body = _project(g.body, q, path + (0,))
        if body == Var(g.var):
            return END
        if g.var not in free_vars(body):
            return body
        return Rec(g.var, body)
    raise TypeError(f"not a global type: {g!r}")


def project(g: Type, q: str) -> Type:
    """The local type of ``q`` in ``g``; raises ``Unmergeable`` when a branch cannot be merged for ``q``."""
    return _project(g, q, ())


def project_all(g: Type) -> dict[str, Type]:
    """Projection onto every participant of ``g``, keyed by participant."""
    return {r: project(g, r) for r in sorted(participants(g))}


def local_to_json(t: Type) -> dict:
    """Structured form of a local type, as emitted by ``mpst project --json``."""
    if isinstance(t, End):
        return {"kind": "end"}
    if isinstance(t, Var):
        return {"kind": "var", "var": t.var}
    if isinstance(t, Rec):
        return {"kind": "rec", "var": t.var, "body": local_to_json(t.body)}
    if isinstance(t, (Send, Recv)):
        kind = "send" if isinstance(t, Send) else "recv"
        return {"kind": kind, "peer": t.peer, "payload": t.sort.name, "cont": local_to_json(t.cont)}
    if isinstance(t, (Select, Offer)):
        kind = "select" if isinstance(t, Select) else "offer"
        return {"kind": kind, "peer": t.peer, "arms": [{"label": l, "cont": local_to_json(a)} for l, a in t.arms]}
    raise TypeError(f"not a local type: {t!r}")
