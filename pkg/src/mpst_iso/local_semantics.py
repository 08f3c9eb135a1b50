"""
Local types as state machines and their synchronous composition.

A configuration maps each participant to its remaining local type.  It
moves when one participant's send is matched by the dual receive of its
peer; both advance together and every other participant stays put.
Executing a configuration records, per participant, the sequence of local
actions it performed (a configuration trace).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .global_semantics import GlobalTrace, traces
from .projection import project_all
from .syntax import End, Label, Offer, Payload, Prefix, Rec, Recv, Select, Send, Type, payload_key, unfold

SEND = "send"
RECEIVE = "receive"


@dataclass(frozen=True, order=True)
class LocalAction:
    """``actor`` sends to or receives from ``peer``."""

    actor: str
    polarity: str
    peer: str
    payload: Payload = field(compare=False)
    _pkey: tuple = field(init=False, repr=False, compare=True)

    def __post_init__(self) -> None:
        if self.actor == self.peer:
            raise ValueError("a local action needs two distinct participants")
        object.__setattr__(self, "_pkey", payload_key(self.payload))

    def dual(self, other: "LocalAction") -> bool:
        return (
            self.polarity == SEND
            and other.polarity == RECEIVE
            and self.peer == other.actor
            and other.peer == self.actor
            and self._pkey == other._pkey
        )

    def __str__(self) -> str:
        mark = "!" if self.polarity == SEND else "?"
        return f"{self.peer}{mark}{self.payload.name}"


def local_steps(t: Type, actor: str, budget: int = 1) -> set[tuple[LocalAction, Type]]:
    """Transitions of the local type ``t`` for participant ``actor``."""
    steps, _ = _local_steps(t, actor, budget)
    return {(a, s) for a, s, _ in steps}


@lru_cache(maxsize=100_000)
def _local_steps(t: Type, actor: str, budget: int):
    if isinstance(t, Send):
        return ((LocalAction(actor, SEND, t.peer, t.sort), t.cont, 0),), False
    if isinstance(t, Recv):
        return ((LocalAction(actor, RECEIVE, t.peer, t.sort), t.cont, 0),), False
    if isinstance(t, Select):
        return tuple((LocalAction(actor, SEND, t.peer, Label(l)), a, 0) for l, a in t.arms), False
    if isinstance(t, Offer):
        return tuple((LocalAction(actor, RECEIVE, t.peer, Label(l)), a, 0) for l, a in t.arms), False
    if isinstance(t, Rec):
        if budget == 0:
            return (), True
        inner, blocked = _local_steps(unfold(t), actor, budget - 1)
        return tuple((a, s, u + 1) for a, s, u in inner), blocked
    return (), False


class Configuration(Mapping):
    """An immutable, hashable map from participants to local types."""

    __slots__ = ("_items", "_hash")

    def __init__(self, types: Mapping[str, Type] | Iterable[tuple[str, Type]]):
        items = dict(types)
        self._items = tuple(sorted(items.items()))
        self._hash = hash(self._items)

    def __getitem__(self, p: str) -> Type:
        for q, t in self._items:
            if q == p:
                return t
        raise KeyError(p)

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Configuration):
            return self._items == other._items
        return NotImplemented

    def replace(self, updates: Mapping[str, Type]) -> "Configuration":
        return Configuration({p: updates.get(p, t) for p, t in self._items})

    @property
    def terminated(self) -> bool:
        return all(isinstance(t, End) for _, t in self._items)

    def __repr__(self) -> str:
        return "Configuration({" + ", ".join(f"{p!r}: {t}" for p, t in self._items) + "})"


class ConfigTrace(Mapping):
    """Per-participant action sequences; participants with no actions are not in the domain."""

    __slots__ = ("_items", "_hash")

    def __init__(self, seqs: Mapping[str, Iterable[LocalAction]] | None = None):
        items = {p: tuple(a) for p, a in (seqs or {}).items()}
        self._items = tuple(sorted((p, a) for p, a in items.items() if a))
        self._hash = hash(self._items)

    def __getitem__(self, p: str) -> tuple[LocalAction, ...]:
        for q, a in self._items:
            if q == p:
                return a
        raise KeyError(p)

    def get(self, p, default=()):
        try:
            return self[p]
        except KeyError:
            return default

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConfigTrace):
            return self._items == other._items
        return NotImplemented

    def __lt__(self, other: "ConfigTrace") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return tuple((p, tuple((str(x), x.polarity) for x in a)) for p, a in self._items)

    def prepend(self, pairs: Iterable[LocalAction]) -> "ConfigTrace":
        seqs = dict(self._items)
        for action in reversed(list(pairs)):
            seqs[action.actor] = (action,) + seqs.get(action.actor, ())
        return ConfigTrace(seqs)

    def append(self, action: LocalAction) -> "ConfigTrace":
        seqs = dict(self._items)
        seqs[action.actor] = seqs.get(action.actor, ()) + (action,)
        return ConfigTrace(seqs)

    def to_json(self) -> dict[str, list[str]]:
        return {p: [str(x) for x in a] for p, a in self._items}

    def __repr__(self) -> str:
        return "ConfigTrace(" + repr(self.to_json()) + ")"


SIGMA_0 = ConfigTrace()


def config_steps(d: Configuration, budget: int = 1):
    """Synchronised moves of ``d`` as ``((send, receive), successor)`` pairs."""
    return {(pair, succ) for pair, succ, _ in _config_steps(d, budget)[0]}


@lru_cache(maxsize=100_000)
def _config_steps(d: Configuration, budget: int):
    blocked = False
    per_actor = {}
    for p in d:
        steps, cut = _local_steps(d[p], p, budget)
        blocked = blocked or cut
        per_actor[p] = steps
    out = []
    for p, steps in per_actor.items():
        for send, t_p, u_p in steps:
            if send.polarity != SEND or send.peer not in per_actor:
                continue
            q = send.peer
            for recv, t_q, u_q in per_actor[q]:
                if not send.dual(recv):
                    continue
                if u_p + u_q > budget:
                    blocked = True
                    continue
                succ = d.replace({p: t_p, q: t_q})
                assert all(succ[r] is d[r] for r in d if r not in (p, q)), "synchronisation touched a third party"
                out.append(((send, recv), succ, u_p + u_q))
    out.sort(key=lambda x: (x[0][0], x[0][1], x[2]))
    return tuple(out), blocked


@dataclass(frozen=True)
class ConfigTraceSet:
    """Executions of a configuration: terminated, budget-truncated and deadlocked."""

    complete: frozenset
    truncated: frozenset
    deadlocked: frozenset


@lru_cache(maxsize=100_000)
def _config_runs(d: Configuration, budget: int):
    steps, blocked = _config_steps(d, budget)
    if not steps:
        if blocked:
            return frozenset(), frozenset({SIGMA_0}), frozenset()
        if d.terminated:
            return frozenset({SIGMA_0}), frozenset(), frozenset()
        return frozenset(), frozenset(), frozenset({SIGMA_0})
    complete, truncated, dead = set(), set(), set()
    for pair, succ, used in steps:
        c, t, x = _config_runs(succ, budget - used)
        complete.update(s.prepend(pair) for s in c)
        truncated.update(s.prepend(pair) for s in t)
        dead.update(s.prepend(pair) for s in x)
    return frozenset(complete), frozenset(truncated), frozenset(dead)


def config_traces(d: Configuration | Mapping[str, Type], budget: int = 0) -> ConfigTraceSet:
    """All configuration traces of ``d`` with at most ``budget`` unfoldings summed over participants."""
    if not isinstance(d, Configuration):
        d = Configuration(d)
    return ConfigTraceSet(*_config_runs(d, int(budget)))


def delta(g: Type) -> Configuration:
    """The configuration of all projections of ``g``."""
    return Configuration(project_all(g))


def denotation(g: Type, budget: int = 0) -> frozenset:
    """Terminated configuration traces of the projected configuration of ``g``."""
    return config_traces(delta(g), budget).complete


def identify(run: GlobalTrace) -> ConfigTrace:
    """Map a global trace to the configuration trace it corresponds to."""
    seqs: dict[str, list[LocalAction]] = {}
    for p in run:
        send, recv = prefix_actions(p)
        seqs.setdefault(p.sender, []).append(send)
        seqs.setdefault(p.receiver, []).append(recv)
    return ConfigTrace(seqs)


def prefix_actions(p: Prefix) -> tuple[LocalAction, LocalAction]:
    return (
        LocalAction(p.sender, SEND, p.receiver, p.payload),
        LocalAction(p.receiver, RECEIVE, p.sender, p.payload),
    )


def identified_traces(g: Type, budget: int = 0) -> frozenset:
    """``identify`` applied to every complete global trace of ``g``."""
    return frozenset(identify(run) for run in traces(g, budget).complete)


def config_trace_set_to_json(sigmas) -> list[dict[str, list[str]]]:
    return [s.to_json() for s in sorted(sigmas)]
