"""
Invertible rewrites of global types.

Three families, each a total function that returns its input unchanged
when its guard fails:

``SwapPrefix``
    exchange two adjacent value prefixes ``g_{i-1} ; g_i`` of a prefix chain
    whose participants are disjoint.  Self-inverse.
``ContrExp``
    ``Contr`` hoists a value prefix ``g`` shared by every arm of a branch
    above the branch (``p -> q : {l_i : g ; G_i}`` becomes
    ``g ; p -> q : {l_i : G_i}``); ``Exp`` pushes it back into the arms.
    Both require ``g`` to avoid ``p`` and ``q``.
``BranchDistrib``
    exchange the nesting of two branchings on disjoint endpoint pairs.  The
    forward direction needs inner continuations that depend only on the
    inner label; the inverse needs them to depend only on the outer label.

Sites are addressed by paths of child indices from the root: ``0`` is the
continuation of a prefix or the body of a recursion, ``i`` is the ``i``-th
arm of a branch.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfChain
from .syntax import Branch, Rec, Seq, Sort, Type, children, disjoint, head_chain

SWAP = "SwapPrefix"
CONTR_EXP = "ContrExp"
DISTRIB = "BranchDistrib"
FAMILIES = (SWAP, CONTR_EXP, DISTRIB)
FORWARD = "forward"
INVERSE = "inverse"


@dataclass(frozen=True)
class RewriteSite:
    family: str
    path: tuple[int, ...]
    direction: str = FORWARD
    index: int | None = None

    def inverse(self) -> "RewriteSite":
        return replace(self, direction=INVERSE if self.direction == FORWARD else FORWARD)

    def sort_key(self) -> tuple:
        return (FAMILIES.index(self.family), self.path, self.direction != FORWARD, self.index or 0)

    def to_json(self) -> dict:
        out = {"family": self.family, "path": list(self.path), "direction": self.direction}
        if self.index is not None:
            out["index"] = self.index
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RewriteSite":
        if data["family"] not in FAMILIES:
            raise ValueError(f"unknown combinator family {data['family']!r}")
        return cls(data["family"], tuple(data["path"]), data.get("direction", FORWARD), data.get("index"))

    def __str__(self) -> str:
        name = {
            (SWAP, FORWARD): "Swap^l",
            (SWAP, INVERSE): "Swap^r",
            (CONTR_EXP, FORWARD): "Contr",
            (CONTR_EXP, INVERSE): "Exp",
            (DISTRIB, FORWARD): "SwapBr_l",
            (DISTRIB, INVERSE): "SwapBr_r",
        }[(self.family, self.direction)]
        idx = f"[{self.index}]" if self.index is not None else ""
        return f"{name}{idx}@{list(self.path)}"


Witness = tuple[RewriteSite, ...]


def invert_witness(witness: Sequence[RewriteSite]) -> Witness:
    """The witness that undoes ``witness``."""
    return tuple(s.inverse() for s in reversed(witness))


def witness_to_json(witness: Iterable[RewriteSite]) -> list[dict]:
    return [s.to_json() for s in witness]


def witness_from_json(data: Iterable[dict]) -> Witness:
    return tuple(RewriteSite.from_json(d) for d in data)


# ---------------------------------------------------------------------------
# path navigation


def node_at(g: Type, path: Sequence[int]) -> Type:
    for step in path:
        kids = children(g)
        if not 0 <= step < len(kids):
            raise IndexOutOfChain(f"path {list(path)} leaves the type")
        g = kids[step]
    return g


def replace_at(g: Type, path: Sequence[int], new: Type) -> Type:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if isinstance(g, Seq) and step == 0:
        return Seq(g.prefix, replace_at(g.cont, rest, new))
    if isinstance(g, Rec) and step == 0:
        return Rec(g.var, replace_at(g.body, rest, new))
    if isinstance(g, Branch) and 0 <= step < len(g.arms):
        arms = list(g.arms)
        sel, arm = arms[step]
        arms[step] = (sel, replace_at(arm, rest, new))
        return Branch(tuple(arms))
    raise IndexOutOfChain(f"path {list(path)} leaves the type")


# ---------------------------------------------------------------------------
# the rewrites on a single node


def _swap_node(node: Type, i: int) -> Type:
    chain, rest = head_chain(node)
    if i is None or not 2 <= i <= len(chain):
        raise IndexOutOfChain(f"swap index {i} outside head chain of length {len(chain)}")
    if not disjoint(chain[i - 2], chain[i - 1]):
        return node
    chain[i - 2], chain[i - 1] = chain[i - 1], chain[i - 2]
    for p in reversed(chain):
        rest = Seq(p, rest)
    return rest


def _contr_node(node: Type) -> Type:
    if not isinstance(node, Branch):
        return node
    heads = []
    for _, arm in node.arms:
        if not isinstance(arm, Seq):
            return node
        heads.append(arm.prefix)
    g = heads[0]
    if not isinstance(g.payload, Sort) or any(h != g for h in heads):
        return node
    if any(not disjoint(g, sel) for sel, _ in node.arms):
        return node
    return Seq(g, Branch(tuple((sel, arm.cont) for sel, arm in node.arms)))


def _exp_node(node: Type) -> Type:
    if not isinstance(node, Seq) or not isinstance(node.cont, Branch):
        return node
    g, branch = node.prefix, node.cont
    if any(not disjoint(g, sel) for sel, _ in branch.arms):
        return node
    return Branch(tuple((sel, Seq(g, arm)) for sel, arm in branch.arms))


def _nested(node: Type):
    """Split ``node`` into outer and inner branchings on disjoint endpoints, or None."""
    if not isinstance(node, Branch) or len({(s.sender, s.receiver) for s, _ in node.arms}) != 1:
        return None
    inner = [arm for _, arm in node.arms]
    if not all(isinstance(b, Branch) for b in inner):
        return None
    sels = {frozenset(s for s, _ in b.arms) for b in inner}
    if len(sels) != 1:
        return None
    first = inner[0]
    if len({(s.sender, s.receiver) for s, _ in first.arms}) != 1 or first.pid & node.pid:
        return None
    return [s for s, _ in node.arms], [s for s, _ in first.arms], inner


def _distrib_fwd(node: Type) -> Type:
    # p -> q : {l_i : r -> s : {m_j : G_j}}  ==>  r -> s : {m_j : p -> q : {l_i : G_j}}
    parts = _nested(node)
    if parts is None:
        return node
    outer_sels, inner_sels, inner = parts
    keyed = dict(inner[0].arms)
    if any(dict(b.arms) != keyed for b in inner[1:]):
        return node
    return Branch(tuple((m, Branch(tuple((l, keyed[m]) for l in outer_sels))) for m in inner_sels))


def _distrib_inv(node: Type) -> Type:
    # r -> s : {m_j : p -> q : {l_i : G_j}}  ==>  p -> q : {l_i : r -> s : {m_j : G_j}}
    parts = _nested(node)
    if parts is None:
        return node
    outer_sels, inner_sels, inner = parts
    conts = []
    for b in inner:
        arms = [g for _, g in b.arms]
        if any(g != arms[0] for g in arms[1:]):
            return node
        conts.append(arms[0])
    return Branch(tuple((l, Branch(tuple(zip(outer_sels, conts)))) for l in inner_sels))


def swap_prefix(g: Type, site: RewriteSite) -> Type:
    """Exchange prefixes ``index - 1`` and ``index`` of the chain at ``site.path``, if disjoint."""
    return replace_at(g, site.path, _swap_node(node_at(g, site.path), site.index))


def contr(g: Type, site: RewriteSite) -> Type:
    return replace_at(g, site.path, _contr_node(node_at(g, site.path)))


def exp(g: Type, site: RewriteSite) -> Type:
    try:
        node = node_at(g, site.path)
    except IndexOutOfChain:
        return g
    return replace_at(g, site.path, _exp_node(node))


def branch_distrib(g: Type, site: RewriteSite, direction: str | None = None) -> Type:
    """Exchange the nesting of two branchings at ``site.path``.

    ``forward`` needs inner continuations that depend only on the inner label
    and produces a type whose inner continuations depend only on the outer
    label; ``inverse`` goes back.  ``direction`` defaults to ``site.direction``.
    """
    node = node_at(g, site.path)
    flip = _distrib_fwd if (direction or site.direction) == FORWARD else _distrib_inv
    return replace_at(g, site.path, flip(node))


def apply_site(g: Type, site: RewriteSite) -> Type:
    if site.family == SWAP:
        return swap_prefix(g, site)
    if site.family == CONTR_EXP:
        return contr(g, site) if site.direction == FORWARD else exp(g, site)
    if site.family == DISTRIB:
        return branch_distrib(g, site, site.direction)
    raise ValueError(f"unknown combinator family {site.family!r}")


def replay(g: Type, witness: Iterable[RewriteSite]) -> Type:
    for site in witness:
        g = apply_site(g, site)
    return g


# ---------------------------------------------------------------------------
# site enumeration


def _nodes(g: Type, path=(), in_chain=False) -> Iterator[tuple[tuple[int, ...], Type, bool]]:
    yield path, g, in_chain
    if isinstance(g, Seq):
        yield from _nodes(g.cont, path + (0,), True)
    else:
        for i, c in enumerate(children(g)):
            yield from _nodes(c, path + (i,), False)


def applicable_sites(g: Type) -> list[RewriteSite]:
    """Every site whose rewrite changes ``g``, in a fixed order."""
    sites = []
    for path, node, in_chain in _nodes(g):
        if isinstance(node, Seq) and not in_chain:
            chain, _ = head_chain(node)
            for i in range(2, len(chain) + 1):
                if disjoint(chain[i - 2], chain[i - 1]):
                    sites.append(RewriteSite(SWAP, path, FORWARD, i))
        if isinstance(node, Branch):
            if _contr_node(node) is not node:
                sites.append(RewriteSite(CONTR_EXP, path, FORWARD))
            if _distrib_fwd(node) is not node:
                sites.append(RewriteSite(DISTRIB, path, FORWARD))
            if _distrib_inv(node) is not node:
                sites.append(RewriteSite(DISTRIB, path, INVERSE))
        if isinstance(node, Seq) and _exp_node(node) is not node:
            sites.append(RewriteSite(CONTR_EXP, path, INVERSE))
    sites.sort(key=RewriteSite.sort_key)
    return [s for s in sites if apply_site(g, s) != g]
