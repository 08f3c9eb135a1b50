"""
Random global types for property testing.

Fully random branchings are rarely projectable, so the generator mixes
plain random construction with shapes biased towards projectability and
towards the combinator guards: arms that differ only in what the branch
endpoints do, arms sharing a hoistable prefix, third parties told of the
choice by label, and nested branchings on disjoint endpoints.  Callers
filter the output with ``is_well_formed``.
"""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .syntax import END, Branch, Prefix, Seq, Sort, Type
from .wellformed import is_well_formed

PARTICIPANTS = ("A", "B", "C", "D")
SORTS = ("Int", "Bool")
LABELS = ("l1", "l2", "l3")
INNER_LABELS = ("m1", "m2", "m3")


def comm_depth(g: Type) -> int:
    """Longest number of communications along any path of ``g``."""
    if isinstance(g, Seq):
        return 1 + comm_depth(g.cont)
    if isinstance(g, Branch):
        return 1 + max(comm_depth(a) for _, a in g.arms)
    return 0


def max_width(g: Type) -> int:
    if isinstance(g, Seq):
        return max_width(g.cont)
    if isinstance(g, Branch):
        return max(len(g.arms), *(max_width(a) for _, a in g.arms))
    return 0


class GlobalTypeGenerator:
    def __init__(self, rng: random.Random, roles: Sequence[str] = PARTICIPANTS, max_depth: int = 4, max_width: int = 3):
        self.rng = rng
        self.roles = tuple(roles)
        self.max_depth = max_depth
        self.max_width = max_width

    def pair(self, avoid: frozenset = frozenset()) -> tuple[str, str] | None:
        pool = [r for r in self.roles if r not in avoid]
        if len(pool) < 2:
            return None
        p, q = self.rng.sample(pool, 2)
        return p, q

    def prefix(self, avoid: frozenset = frozenset()) -> Prefix | None:
        pq = self.pair(avoid)
        if pq is None:
            return None
        return Prefix(pq[0], pq[1], Sort(self.rng.choice(SORTS)))

    def width(self) -> int:
        return self.rng.randint(1, self.max_width)

    def labels(self, n: int, pool=LABELS) -> list[str]:
        return list(pool[:n])

    def endpoint_variant(self, base: Type, p: str, q: str, budget: int) -> Type:
        """``base`` optionally preceded by a message between ``p`` and ``q``."""
        if budget < 1 or self.rng.random() < 0.4:
            return base
        s, r = (p, q) if self.rng.random() < 0.5 else (q, p)
        return Seq(Prefix(s, r, Sort(self.rng.choice(SORTS))), base)

    def gen(self, depth: int) -> Type:
        if depth <= 0:
            return END
        roll = self.rng.random()
        if roll < 0.08:
            return END
        if roll < 0.33:
            pre = self.prefix()
            return Seq(pre, self.gen(depth - 1))
        if roll < 0.45 and depth >= 2:
            a = self.prefix()
            b = self.prefix(a.pid) if self.rng.random() < 0.8 else self.prefix()
            return Seq(a, Seq(b, self.gen(depth - 2)))
        if roll < 0.55:
            return self.random_branch(depth)
        if roll < 0.70:
            return self.endpoint_branch(depth)
        if roll < 0.78:
            return self.informed_branch(depth)
        if roll < 0.90 and depth >= 2:
            return self.contr_branch(depth)
        if depth >= 3:
            return self.nested_branch(depth)
        return self.endpoint_branch(depth)

    def random_branch(self, depth: int) -> Type:
        p, q = self.pair()
        return Branch.of(p, q, [(l, self.gen(depth - 1)) for l in self.labels(self.width())])

    def endpoint_branch(self, depth: int) -> Type:
        p, q = self.pair()
        base = self.gen(depth - 2) if depth >= 2 else END
        return Branch.of(p, q, [(l, self.endpoint_variant(base, p, q, depth - 1)) for l in self.labels(self.width())])

    def informed_branch(self, depth: int) -> Type:
        # the selector forwards its choice to a third party by label
        p, q = self.pair()
        rest = [r for r in self.roles if r not in (p, q)]
        if not rest or depth < 2:
            return self.endpoint_branch(depth)
        r = self.rng.choice(rest)
        base = self.gen(depth - 2)
        n = self.width()
        arms = [(l, Branch.of(p, r, [(m, base)])) for l, m in zip(self.labels(n), INNER_LABELS)]
        return Branch.of(p, q, arms)

    def contr_branch(self, depth: int) -> Type:
        p, q = self.pair()
        g = self.prefix(frozenset((p, q)))
        if g is None:
            return self.endpoint_branch(depth)
        base = self.gen(depth - 3) if depth >= 3 else END
        arms = [(l, Seq(g, self.endpoint_variant(base, p, q, depth - 2))) for l in self.labels(self.width())]
        return Branch.of(p, q, arms)

    def nested_branch(self, depth: int) -> Type:
        p, q = self.pair()
        rs = self.pair(frozenset((p, q)))
        if rs is None:
            return self.endpoint_branch(depth)
        r, s = rs
        base = self.gen(depth - 3)
        n, k = self.width(), self.width()
        if self.rng.random() < 0.5:
            conts = {m: self.endpoint_variant(base, r, s, depth - 2) for m in self.labels(k, INNER_LABELS)}
            return Branch.of(p, q, [(l, Branch.of(r, s, list(conts.items()))) for l in self.labels(n)])
        conts = {l: self.endpoint_variant(base, r, s, depth - 2) for l in self.labels(n)}
        return Branch.of(r, s, [(m, Branch.of(p, q, [(l, conts[m2]) for l in self.labels(n)]))
                                for m, m2 in zip(self.labels(k, INNER_LABELS), self.rng.choices(list(conts), k=k))])


def generate_corpus(n: int, seed: int = 0, max_depth: int = 4, max_width: int = 3,
                    roles: Sequence[str] = PARTICIPANTS) -> list[Type]:
    """``n`` distinct well-formed, projectable, recursion-free global types."""
    return list(_iter_corpus(n, seed, max_depth, max_width, roles))


def _iter_corpus(n, seed, max_depth, max_width, roles) -> Iterator[Type]:
    gen = GlobalTypeGenerator(random.Random(seed), roles, max_depth, max_width)
    seen = set()
    attempts = 0
    while len(seen) < n:
        attempts += 1
        if attempts > 200 * n + 1000:
            raise RuntimeError("generator failed to produce enough projectable types")
        g = gen.gen(gen.rng.randint(1, max_depth))
        if g in seen or comm_depth(g) > max_depth or not is_well_formed(g):
            continue
        seen.add(g)
        yield g
