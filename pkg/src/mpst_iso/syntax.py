"""
Abstract syntax for multiparty session types.

Global types describe a whole choreography; local types describe one
participant's view of it.  Both share the recursion forms ``Rec``, ``Var``
and ``End``.  All nodes are immutable.  Equality and hashing go through a
canonical key in which bound recursion variables are replaced by de Bruijn
indices and branch arms are sorted by label, so ``==`` is alpha-equivalence
that ignores arm order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

from .errors import IndexOutOfChain, UnguardedRecursion

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Participant = str
RecVar = str

PREDECLARED_SORTS = ("Bool", "Int", "Nat")


@dataclass(frozen=True, order=True)
class Sort:
    """An opaque value sort exchanged in a communication."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Label:
    """A branch selection label."""

    name: str

    def __str__(self) -> str:
        return self.name


Payload = Union[Sort, Label]


def payload_key(payload: Payload) -> tuple[str, str]:
    return ("label" if isinstance(payload, Label) else "value", payload.name)


@dataclass(frozen=True)
class Prefix:
    """A single communication ``sender -> receiver`` carrying a sort or a label."""

    sender: Participant
    receiver: Participant
    payload: Payload

    @property
    def out(self) -> Participant:
        return self.sender

    @property
    def inp(self) -> Participant:
        return self.receiver

    @property
    def pid(self) -> frozenset[Participant]:
        return frozenset((self.sender, self.receiver))

    @property
    def is_label(self) -> bool:
        return isinstance(self.payload, Label)

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.sender, self.receiver) + payload_key(self.payload)

    def __lt__(self, other: "Prefix") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.is_label:
            return f"{self.sender} -> {self.receiver} : {self.payload.name}"
        return f"{self.sender} -> {self.receiver} : <{self.payload.name}>"


def disjoint(a: Prefix, b: Prefix) -> bool:
    return not (a.pid & b.pid)


class Type:
    """Common base of global and local type nodes."""

    def _key(self, env: tuple[str, ...]) -> tuple:
        raise NotImplementedError

    @cached_property
    def key(self) -> tuple:
        return self._key(())

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Type):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from .parser import print_any

        return print_any(self)


def _var_key(name: str, env: tuple[str, ...]) -> tuple:
    if name in env:
        return ("bvar", env.index(name))
    return ("fvar", name)


# ---------------------------------------------------------------------------
# shared recursion forms


@dataclass(frozen=True, eq=False)
class End(Type):
    def _key(self, env):
        return ("end",)


@dataclass(frozen=True, eq=False)
class Var(Type):
    var: RecVar

    def _key(self, env):
        return _var_key(self.var, env)


@dataclass(frozen=True, eq=False)
class Rec(Type):
    """``rec var . body``; construction rejects unguarded bodies such as ``rec t . t``."""

    var: RecVar
    body: Type

    def __post_init__(self) -> None:
        if self.var in unguarded_vars(self.body):
            raise UnguardedRecursion(f"recursion variable {self.var!r} occurs unguarded")

    def _key(self, env):
        return ("rec", self.body._key((self.var,) + env))


END = End()


# ---------------------------------------------------------------------------
# global types


@dataclass(frozen=True, eq=False)
class Seq(Type):
    """``prefix ; cont`` for a value-exchange prefix."""

    prefix: Prefix
    cont: Type

    def _key(self, env):
        return ("seq", self.prefix.sort_key(), self.cont._key(env))


@dataclass(frozen=True, eq=False)
class Branch(Type):
    """A choice ``p -> q : {l_i : G_i}``.

    Each arm keeps its own selection prefix, so a malformed branch whose arms
    disagree on the endpoints can still be represented and reported by the
    formation checker.
    """

    arms: tuple[tuple[Prefix, Type], ...]

    def __post_init__(self) -> None:
        if not self.arms:
            raise ValueError("a branch needs at least one arm")

    @classmethod
    def of(cls, sender: Participant, receiver: Participant, arms) -> "Branch":
        """Build from ``[(label_name, G), ...]`` with shared endpoints."""
        return cls(tuple((Prefix(sender, receiver, Label(l)), g) for l, g in arms))

    @property
    def sender(self) -> Participant:
        return self.arms[0][0].sender

    @property
    def receiver(self) -> Participant:
        return self.arms[0][0].receiver

    @property
    def pid(self) -> frozenset[Participant]:
        return frozenset().union(*(p.pid for p, _ in self.arms))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.payload.name for p, _ in self.arms)

    def arm(self, label: str) -> Type:
        for p, g in self.arms:
            if p.payload.name == label:
                return g
        raise KeyError(label)

    def _key(self, env):
        return ("branch", tuple(sorted((p.sort_key(), g._key(env)) for p, g in self.arms)))


GlobalType = Union[Seq, Branch, Rec, Var, End]


# ---------------------------------------------------------------------------
# local types


@dataclass(frozen=True, eq=False)
class Send(Type):
    peer: Participant
    sort: Sort
    cont: Type

    def _key(self, env):
        return ("send", self.peer, self.sort.name, self.cont._key(env))


@dataclass(frozen=True, eq=False)
class Recv(Type):
    peer: Participant
    sort: Sort
    cont: Type

    def _key(self, env):
        return ("recv", self.peer, self.sort.name, self.cont._key(env))


@dataclass(frozen=True, eq=False)
class Select(Type):
    peer: Participant
    arms: tuple[tuple[str, Type], ...]

    def _key(self, env):
        return ("select", self.peer, tuple(sorted((l, t._key(env)) for l, t in self.arms)))


@dataclass(frozen=True, eq=False)
class Offer(Type):
    peer: Participant
    arms: tuple[tuple[str, Type], ...]

    def _key(self, env):
        return ("offer", self.peer, tuple(sorted((l, t._key(env)) for l, t in self.arms)))


LocalType = Union[Send, Recv, Select, Offer, Rec, Var, End]


# ---------------------------------------------------------------------------
# generic traversal helpers


def children(t: Type) -> tuple[Type, ...]:
    if isinstance(t, (Seq, Send, Recv)):
        return (t.cont,)
    if isinstance(t, Branch):
        return tuple(g for _, g in t.arms)
    if isinstance(t, (Select, Offer)):
        return tuple(g for _, g in t.arms)
    if isinstance(t, Rec):
        return (t.body,)
    return ()


def unguarded_vars(t: Type) -> frozenset[RecVar]:
    """Variables reachable from the root of ``t`` without crossing a communication."""
    if isinstance(t, Var):
        return frozenset((t.var,))
    if isinstance(t, Rec):
        return unguarded_vars(t.body) - {t.var}
    return frozenset()


def free_vars(t: Type) -> frozenset[RecVar]:
    if isinstance(t, Var):
        return frozenset((t.var,))
    if isinstance(t, Rec):
        return free_vars(t.body) - {t.var}
    return frozenset().union(*(free_vars(c) for c in children(t)))


def all_var_names(t: Type) -> set[str]:
    names: set[str] = set()
    for node in walk(t):
        if isinstance(node, (Var, Rec)):
            names.add(node.var)
    return names


def walk(t: Type) -> Iterator[Type]:
    yield t
    for c in children(t):
        yield from walk(c)


def is_closed(t: Type) -> bool:
    return not free_vars(t)


def fresh_var(avoid: set[str], base: str = "t") -> str:
    if base not in avoid:
        return base
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(t: Type, var: RecVar, replacement: Type) -> Type:
    """Capture-avoiding substitution ``t[replacement / var]``."""
    if isinstance(t, Var):
        return replacement if t.var == var else t
    if isinstance(t, End):
        return t
    if isinstance(t, Rec):
        if t.var == var:
            return t
        if t.var in free_vars(replacement):
            avoid = all_var_names(t) | all_var_names(replacement) | {var}
            new = fresh_var(avoid, t.var)
            body = substitute(t.body, t.var, Var(new))
            return Rec(new, substitute(body, var, replacement))
        return Rec(t.var, substitute(t.body, var, replacement))
    if isinstance(t, Seq):
        return Seq(t.prefix, substitute(t.cont, var, replacement))
    if isinstance(t, Branch):
        return Branch(tuple((p, substitute(g, var, replacement)) for p, g in t.arms))
    if isinstance(t, Send):
        return Send(t.peer, t.sort, substitute(t.cont, var, replacement))
    if isinstance(t, Recv):
        return Recv(t.peer, t.sort, substitute(t.cont, var, replacement))
    if isinstance(t, Select):
        return Select(t.peer, tuple((l, substitute(g, var, replacement)) for l, g in t.arms))
    if isinstance(t, Offer):
        return Offer(t.peer, tuple((l, substitute(g, var, replacement)) for l, g in t.arms))
    raise TypeError(f"not a session type: {t!r}")


def unfold(t: Rec) -> Type:
    """One-step unfolding ``body[rec t . body / t]``."""
    return substitute(t.body, t.var, t)


# ---------------------------------------------------------------------------
# metadata accessors


def participants(g: Type) -> frozenset[Participant]:
    """Every participant named by a prefix or branch selection in ``g``."""
    out: set[Participant] = set()
    for node in walk(g):
        if isinstance(node, Seq):
            out |= node.prefix.pid
        elif isinstance(node, Branch):
            out |= node.pid
    return frozenset(out)


def head_chain(g: Type) -> tuple[list[Prefix], Type]:
    """Split ``g`` into its maximal leading run of value prefixes and the rest."""
    prefixes = []
    while isinstance(g, Seq):
        prefixes.append(g.prefix)
        g = g.cont
    return prefixes, g


def prefix_at(g: Type, j: int) -> Prefix:
    """The ``j``-th (1-based) prefix of the head chain of ``g``."""
    chain, _ = head_chain(g)
    if not 1 <= j <= len(chain):
        raise IndexOutOfChain(f"index {j} outside head chain of length {len(chain)}")
    return chain[j - 1]


def tail_at(g: Type, j: int) -> Type:
    """What remains of ``g`` after its first ``j`` prefixes."""
    chain, _ = head_chain(g)
    if not 0 <= j <= len(chain):
        raise IndexOutOfChain(f"index {j} outside head chain of length {len(chain)}")
    for _ in range(j):
        g = g.cont
    return g


def seq(*items) -> Type:
    """``seq(p1, p2, ..., G)`` builds ``p1 ; p2 ; ... ; G``."""
    *prefixes, last = items
    for p in reversed(prefixes):
        last = Seq(p, last)
    return last


def msg(sender: Participant, receiver: Participant, sort: str) -> Prefix:
    return Prefix(sender, receiver, Sort(sort))
