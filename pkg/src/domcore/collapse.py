"""Iterative node-dominance collapse.

A node ``v`` is dominated by ``w`` when the dominance profile of ``v`` is
contained in that of ``w``.  Three profiles are supported:

* ``one-hop``  - closed neighbourhood ``N[v]``; dominators range over ``N(v)``.
* ``two-hop``  - ``N2[v]``, the union of ``N[u]`` for ``u`` in ``N[v]``;
  dominators range over ``N2[v] - {v}``.
* ``relation`` - the set of maximal simplices (of an explicit relation
  complex) containing ``v``; dominators range over nodes sharing one of them.

:func:`collapse` runs in synchronous iterations: every node dominated in the
residual graph at the start of an iteration is switched off, except that
each class of mutually dominating nodes (identical profiles) keeps exactly
one survivor chosen by the :class:`TieBreakPolicy`.  This is the same
semantics as the message-passing protocol in :mod:`domcore.distributed`.
:func:`random_order_collapse` removes one uniformly chosen dominated node at
a time and backs :func:`stability_analysis`.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import ContractError, InputError
from .graph import Graph, id_key

ONE_HOP = "one-hop"
TWO_HOP = "two-hop"
RELATION = "relation"
VARIANT_KINDS = (ONE_HOP, TWO_HOP, RELATION)


@dataclass(frozen=True)
class DominanceVariant:
    kind: str = ONE_HOP
    # relation only: per node index, sorted internal simplex indices
    relation_lists: tuple | None = None
    # relation only: external simplex ID per internal simplex index
    simplex_ids: tuple = ()

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"unknown dominance variant {self.kind!r}")
        if self.kind == RELATION and self.relation_lists is None:
            raise ContractError("relation variant requires relation lists")

    @classmethod
    def relation(cls, g: Graph, incidences: Iterable[tuple]) -> "DominanceVariant":
        """Build a relation variant from ``(node_id, simplex_id)`` incidences.

        Nodes of ``g`` absent from ``incidences`` get an empty list and can
        never be dominated.
        """
        pairs = list(incidences)
        unknown = sorted({a for a, _ in pairs if not g.has_id(a)}, key=id_key)
        if unknown:
            raise InputError(
                f"{len(unknown)} relation node ID(s) not in graph, e.g. {unknown[:5]}"
            )
        simplex_ext = sorted({s for _, s in pairs}, key=id_key)
        sid = {s: i for i, s in enumerate(simplex_ext)}
        lists = [set() for _ in range(g.node_count)]
        for a, s in pairs:
            lists[g.index(a)].add(sid[s])
        return cls(RELATION, tuple(tuple(sorted(x)) for x in lists), tuple(simplex_ext))

    def label(self) -> str:
        return {ONE_HOP: "1hop", TWO_HOP: "2hop", RELATION: "relation"}[self.kind]


ONE_HOP_VARIANT = DominanceVariant(ONE_HOP)
TWO_HOP_VARIANT = DominanceVariant(TWO_HOP)


@dataclass(frozen=True)
class TieBreakPolicy:
    mode: str = "deterministic"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("deterministic", "seeded"):
            raise ValueError(f"unknown tie-break mode {self.mode!r}")
        if self.mode == "seeded" and self.seed is None:
            raise ContractError("seeded tie-break needs a seed")

    def rng(self):
        return random.Random(self.seed) if self.mode == "seeded" else None

    def loser(self, a: int, b: int, rng) -> int:
        """Node switched off by a handshake between ``a`` and ``b``.

        Callers pass ``a`` with the smaller external ID.  Deterministic mode
        keeps the smaller ID; seeded mode flips one coin per call.
        """
        if rng is None:
            return b
        return a if rng.random() < 0.5 else b


DETERMINISTIC = TieBreakPolicy()


class Removal(NamedTuple):
    node: int
    dominator: int
    iteration: int


@dataclass(frozen=True)
class CollapseResult:
    core: frozenset
    periphery: frozenset
    removal_log: tuple
    variant: DominanceVariant = ONE_HOP_VARIANT
    policy: TieBreakPolicy = DETERMINISTIC
    iterations: int = 0

    def core_ids(self, g: Graph) -> list:
        return g.to_external(self.core)

    def periphery_ids(self, g: Graph) -> list:
        return g.to_external(self.periphery)

    def removal_rows(self, g: Graph) -> list:
        return [(g.ext(r.node), g.ext(r.dominator), r.iteration) for r in self.removal_log]


# -- dominance profiles on a residual graph ---------------------------------


class _OneHop:
    def __init__(self, g: Graph):
        self.adj = [set(a) for a in g.adjacency]

    def profile(self, v):
        return self.adj[v] | {v}

    def contacts(self, v):
        return self.adj[v]

    def covers(self, w, v) -> bool:
        """True iff N[v] is contained in N[w] (w a neighbour of v)."""
        av, aw = self.adj[v], self.adj[w]
        if len(av) > len(aw):
            return False
        return len(av - aw) == 1

    def remove(self, nodes) -> set:
        dirty = set()
        for r in nodes:
            for u in self.adj[r]:
                self.adj[u].discard(r)
                dirty.add(u)
            self.adj[r] = set()
        return dirty - set(nodes)


class _TwoHop:
    def __init__(self, g: Graph):
        self.adj = [set(a) for a in g.adjacency]
        self._cache: dict = {}

    def profile(self, v):
        p = self._cache.get(v)
        if p is None:
            p = {v}
            for u in self.adj[v]:
                p.add(u)
                p |= self.adj[u]
            p = self._cache[v] = frozenset(p)
        return p

    def contacts(self, v):
        return self.profile(v) - {v}

    def covers(self, w, v) -> bool:
        return self.profile(v) <= self.profile(w)

    def remove(self, nodes) -> set:
        dirty = set()
        for r in nodes:
            dirty |= self.profile(r)
        for r in nodes:
            for u in self.adj[r]:
                self.adj[u].discard(r)
            self.adj[r] = set()
        self._cache.clear()
        return dirty - set(nodes)


class _Relation:
    def __init__(self, g: Graph, lists):
        if len(lists) != g.node_count:
            raise ContractError("relation lists must cover every graph node")
        members = defaultdict(set)
        for v, sids in enumerate(lists):
            for s in sids:
                members[s].add(v)
        self.simplex = dict(members)
        self.node_simplices = [set(sids) for sids in lists]
        self.maximal = {s: self._is_maximal(s) for s in self.simplex}
        self._cache: dict = {}

    def _is_maximal(self, s) -> bool:
        verts = self.simplex[s]
        if not verts:
            return False
        pivot = min(verts, key=lambda u: len(self.node_simplices[u]))
        for t in self.node_simplices[pivot]:
            if t == s:
                continue
            other = self.simplex[t]
            if len(other) >= len(verts) and verts <= other:
                # equal residual simplices: smallest index is the representative
                if len(other) > len(verts) or t < s:
                    return False
        return True

    def profile(self, v):
        p = self._cache.get(v)
        if p is None:
            p = self._cache[v] = frozenset(s for s in self.node_simplices[v] if self.maximal[s])
        return p

    def contacts(self, v):
        out = set()
        for s in self.profile(v):
            out |= self.simplex[s]
        out.discard(v)
        return out

    def covers(self, w, v) -> bool:
        pv = self.profile(v)
        return bool(pv) and pv <= self.profile(w)

    def remove(self, nodes) -> set:
        touched = set()
        for r in nodes:
            for s in self.node_simplices[r]:
                self.simplex[s].discard(r)
                touched.add(s)
            self.node_simplices[r] = set()
        recheck = set(touched)
        dirty = set()
        for s in touched:
            for u in self.simplex[s]:
                recheck |= self.node_simplices[u]
                dirty.add(u)
        for s in recheck:
            m = self._is_maximal(s)
            if m != self.maximal[s]:
                self.maximal[s] = m
                dirty |= self.simplex[s]
        self._cache.clear()
        return dirty - set(nodes)


def _make_state(g: Graph, variant: DominanceVariant):
    if variant.kind == ONE_HOP:
        return _OneHop(g)
    if variant.kind == TWO_HOP:
        return _TwoHop(g)
    return _Relation(g, variant.relation_lists)


def variant_profiles(g: Graph, variant: DominanceVariant) -> list:
    """Dominance profile of every node of ``g`` (no removals)."""
    state = _make_state(g, variant)
    return [frozenset(state.profile(v)) for v in range(g.node_count)]


def is_dominated(g: Graph, v: int, w: int, variant: DominanceVariant = ONE_HOP_VARIANT) -> bool:
    """True iff ``v`` is dominated by ``w`` in ``g`` under ``variant``."""
    if v == w:
        raise ContractError("a node cannot dominate itself")
    for x in (v, w):
        if not 0 <= x < g.node_count:
            raise IndexError(f"node index {x} out of range")
    state = _make_state(g, variant)
    if w not in state.contacts(v):
        return False
    return state.covers(w, v)


def resolve_round(dominators: dict, keys, policy: TieBreakPolicy, rng) -> tuple:
    """Decide which dominated nodes switch off in one synchronous round.

    ``dominators`` maps each dominated node to the set of nodes whose profile
    contains its own.  A node with a dominator it does not itself dominate
    switches off unconditionally.  Remaining mutually dominating pairs are
    handshaken in ascending external-ID pair order; a pair is skipped once
    either side has already lost, so each class of equal profiles keeps
    exactly one node.  Returns ``(off, handshakes)`` where ``handshakes``
    counts every mutual pair.
    """
    one_sided = set()
    mutual = []
    for v, ws in dominators.items():
        for w in ws:
            if v in dominators.get(w, ()):
                if keys[v] < keys[w]:
                    mutual.append((v, w))
            else:
                one_sided.add(v)
    mutual.sort(key=lambda p: (keys[p[0]], keys[p[1]]))
    lost = set()
    for a, b in mutual:
        if a in one_sided or b in one_sided or a in lost or b in lost:
            continue
        lost.add(policy.loser(a, b, rng))
    return one_sided | lost, len(mutual)


def _pick_dominator(r, ws, removed, keys):
    survivors = [w for w in ws if w not in removed]
    if not survivors:  # pragma: no cover - excluded by the chain argument
        raise AssertionError(f"node {r} removed without a surviving dominator")
    return min(survivors, key=keys.__getitem__)


def collapse(g: Graph, variant: DominanceVariant = ONE_HOP_VARIANT, policy: TieBreakPolicy = DETERMINISTIC) -> CollapseResult:
    """Collapse dominated nodes until none is left; see the module docstring."""
    keys = g.keys()
    state = _make_state(g, variant)
    rng = policy.rng()
    alive = set(range(g.node_count))
    dirty = set(alive)
    log = []
    iteration = 0
    while dirty:
        dominators = {}
        for v in sorted(dirty, key=keys.__getitem__):
            ws = {w for w in state.contacts(v) if state.covers(w, v)}
            if ws:
                dominators[v] = ws
        if not dominators:
            break
        iteration += 1
        removed, _ = resolve_round(dominators, keys, policy, rng)
        for r in sorted(removed, key=keys.__getitem__):
            log.append(Removal(r, _pick_dominator(r, dominators[r], removed, keys), iteration))
        dirty = state.remove(removed)
        alive -= removed
    periphery = frozenset(r.node for r in log)
    return CollapseResult(frozenset(alive), periphery, tuple(log), variant, policy, iteration)


class _IndexedSet:
    """Set with O(1) add/discard and uniform random choice."""

    def __init__(self):
        self.items = []
        self.pos = {}

    def __len__(self):
        return len(self.items)

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def choice(self, rng):
        return self.items[rng.randrange(len(self.items))]


def random_order_collapse(g: Graph, variant: DominanceVariant = ONE_HOP_VARIANT, seed: int = 0) -> CollapseResult:
    """Remove one uniformly chosen dominated node at a time.

    Each step is logged as its own iteration.  The recorded dominator is the
    smallest-ID node dominating the removed one at that moment.
    """
    keys = g.keys()
    state = _make_state(g, variant)
    rng = random.Random(seed)
    candidates = _IndexedSet()

    def dominators_of(v):
        return [w for w in state.contacts(v) if state.covers(w, v)]

    for v in range(g.node_count):
        if dominators_of(v):
            candidates.add(v)
    alive = set(range(g.node_count))
    log = []
    while candidates:
        v = candidates.choice(rng)
        ws = dominators_of(v)
        if not ws:
            # stale entry: some dominator lost coverage since v was queued
            candidates.discard(v)
            continue
        candidates.discard(v)
        log.append(Removal(v, min(ws, key=keys.__getitem__), len(log) + 1))
        alive.discard(v)
        for u in sorted(state.remove([v])):
            if dominators_of(u):
                candidates.add(u)
            else:
                candidates.discard(u)
    policy = TieBreakPolicy("seeded", seed)
    return CollapseResult(frozenset(alive), frozenset(r.node for r in log), tuple(log), variant, policy, len(log))


@dataclass
class StabilityReport:
    realizations: int
    base_seed: int
    core_sizes: list
    frequency: dict = field(repr=False)
    always_core: frozenset = field(repr=False)
    ever_core: frozenset = field(repr=False)

    @property
    def mean_core_size(self) -> float:
        return sum(self.core_sizes) / len(self.core_sizes)

    @property
    def always_fraction(self) -> float:
        """Share of an average core made of nodes present in every realization."""
        m = self.mean_core_size
        return len(self.always_core) / m if m else 1.0

    @property
    def sometimes_fraction(self) -> float:
        m = self.mean_core_size
        return len(self.ever_core - self.always_core) / m if m else 0.0

    def to_dict(self, g: Graph) -> dict:
        return {
            "realizations": self.realizations,
            "base_seed": self.base_seed,
            "core_sizes": self.core_sizes,
            "always_core_count": len(self.always_core),
            "ever_core_count": len(self.ever_core),
            "always_fraction": self.always_fraction,
            "sometimes_fraction": self.sometimes_fraction,
            "always_core": g.to_external(self.always_core),
            "sometimes_core": g.to_external(self.ever_core - self.always_core),
        }


def stability_analysis(g: Graph, variant: DominanceVariant = ONE_HOP_VARIANT, realizations: int = 100, base_seed: int = 0) -> StabilityReport:
    """Repeat :func:`random_order_collapse` with seeds ``base_seed + i``."""
    if realizations < 2:
        raise ContractError("stability analysis needs at least 2 realizations")
    counts: Counter = Counter()
    sizes = []
    for i in range(realizations):
        res = random_order_collapse(g, variant, base_seed + i)
        counts.update(res.core)
        sizes.append(len(res.core))
    freq = {v: c / realizations for v, c in sorted(counts.items())}
    always = frozenset(v for v, c in counts.items() if c == realizations)
    return StabilityReport(realizations, base_seed, sizes, freq, always, frozenset(counts))
