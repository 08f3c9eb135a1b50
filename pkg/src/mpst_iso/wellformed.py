"""
Formation rules for global types and the projectability predicate.

``check_formation`` reports violations as data, each naming the rule it
breaks: ``Participant``, ``Exchange Values``, ``Labels``, ``Global Prefix``,
``Branching`` or ``Recursion``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ProjectionFailure, Unmergeable
from .syntax import IDENT_RE, Branch, End, Label, Prefix, Rec, Seq, Sort, Type, Var, participants, unguarded_vars

RULES = ("Participant", "Exchange Values", "Labels", "Global Prefix", "Global type", "Branching", "Recursion")


@dataclass(frozen=True)
class Violation:
    rule: str
    path: tuple[int, ...]
    message: str

    def to_json(self) -> dict:
        return {"rule": self.rule, "path": list(self.path), "message": self.message}


def _check_prefix(p: Prefix, path, out: list[Violation], want: type) -> None:
    for who in (p.sender, p.receiver):
        if not isinstance(who, str) or not IDENT_RE.match(who):
            out.append(Violation("Participant", path, f"{who!r} is not a participant identifier"))
    if p.sender == p.receiver:
        out.append(Violation("Global Prefix", path, f"{p.sender} communicates with itself"))
    if want is Sort and not isinstance(p.payload, Sort):
        out.append(Violation("Exchange Values", path, f"prefix {p.sender} -> {p.receiver} must carry a value sort"))
    if want is Label and not isinstance(p.payload, Label):
        out.append(Violation("Labels", path, f"branch arm {p.sender} -> {p.receiver} must carry a label"))
    if not all(IDENT_RE.match(part) for part in p.payload.name.split(",")):
        rule = "Labels" if want is Label else "Exchange Values"
        out.append(Violation(rule, path, f"{p.payload.name!r} is not a valid name"))


def check_formation(g: Type) -> list[Violation]:
    """Every formation-rule violation in ``g``; empty when ``g`` is a well-formed global type."""
    out: list[Violation] = []

    def visit(t: Type, path: tuple[int, ...], bound: frozenset[str]) -> None:
        if isinstance(t, End):
            return
        if isinstance(t, Var):
            if t.var not in bound:
                out.append(Violation("Recursion", path, f"recursion variable {t.var!r} is not bound"))
            return
        if isinstance(t, Rec):
            if t.var in unguarded_vars(t.body):
                out.append(Violation("Recursion", path, f"recursion on {t.var!r} is unguarded"))
            visit(t.body, path + (0,), bound | {t.var})
            return
        if isinstance(t, Seq):
            _check_prefix(t.prefix, path, out, Sort)
            visit(t.cont, path + (0,), bound)
            return
        if isinstance(t, Branch):
            ends = {(p.sender, p.receiver) for p, _ in t.arms}
            if len(ends) > 1:
                out.append(Violation("Branching", path, "branch arms must share one selector and one offerer"))
            seen = set()
            for i, (p, arm) in enumerate(t.arms):
                _check_prefix(p, path, out, Label)
                if p.payload.name in seen:
                    out.append(Violation("Labels", path, f"label {p.payload.name!r} appears twice"))
                seen.add(p.payload.name)
                visit(arm, path + (i,), bound)
            return
        out.append(Violation("Global type", path, f"{type(t).__name__} is not a global type constructor"))

    visit(g, (), frozenset())
    return out


def check_projectable(g: Type) -> list[tuple[str, ProjectionFailure]]:
    """Participants onto which ``g`` fails to project, with the failing merge."""
    from .projection import project

    failures = []
    for r in sorted(participants(g)):
        try:
            project(g, r)
        except Unmergeable as exc:
            failures.append((r, exc.failure))
    return failures


def is_well_formed(g: Type) -> bool:
    """Formation rules hold and ``g`` projects onto every participant."""
    return not check_formation(g) and not check_projectable(g)
