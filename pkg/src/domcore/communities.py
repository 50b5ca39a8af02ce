"""Candidate community sets from the periphery of a collapse.

Peripheral components are the connected components of the subgraph induced
by the periphery.  Each is extended with the core nodes adjacent to it; for
every core node ``v`` the candidate set ``cs_v`` is the union of the
extended components containing ``v``.  Duplicates and sets contained in
another candidate set are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .collapse import CollapseResult
from .graph import Graph, connected_components, id_key


@dataclass(frozen=True)
class PeripheralComponent:
    id: int
    members: frozenset


@dataclass(frozen=True)
class ExtendedComponent:
    base: int
    members: frozenset


@dataclass(frozen=True)
class CandidateSet:
    anchor: int
    members: frozenset

    def ids(self, g: Graph) -> list:
        return g.to_external(self.members)


def _min_key(g: Graph, nodes):
    return min(g.key(v) for v in nodes)


def peripheral_components(g: Graph, cr: CollapseResult) -> list:
    comps = connected_components(g, cr.periphery)
    comps.sort(key=lambda c: _min_key(g, c))
    return [PeripheralComponent(i, c) for i, c in enumerate(comps)]


def extend_components(g: Graph, cr: CollapseResult, pcs: list) -> list:
    core = cr.core
    out = []
    for pc in pcs:
        attached = {u for v in pc.members for u in g.adjacency[v] if u in core}
        out.append(ExtendedComponent(pc.id, pc.members | attached))
    return out


def interior_core(g: Graph, cr: CollapseResult) -> frozenset:
    """Core nodes with no periphery neighbour; they join no candidate set."""
    periphery = cr.periphery
    return frozenset(
        v for v in cr.core if not any(u in periphery for u in g.adjacency[v])
    )


def maximal_sets(sets: list) -> list:
    """Indices of the sets kept after dropping duplicates and proper subsets.

    ``sets`` is a list of ``(tiebreak, frozenset)``; among equal sets the
    smallest ``tiebreak`` survives.  Containment is only tested against sets
    sharing the member with the shortest posting list.
    """
    postings: dict = {}
    for i, (_, members) in enumerate(sets):
        for v in members:
            postings.setdefault(v, []).append(i)
    order = sorted(range(len(sets)), key=lambda i: (-len(sets[i][1]), sets[i][0]))
    kept = []
    for i in order:
        tb, members = sets[i]
        if not members:
            continue
        pivot = min(members, key=lambda v: len(postings[v]))
        dominated = False
        for j in postings[pivot]:
            if j == i:
                continue
            tb_j, other = sets[j]
            if len(other) < len(members) or not members <= other:
                continue
            if len(other) > len(members) or tb_j < tb:
                dominated = True
                break
        if not dominated:
            kept.append(i)
    return kept


def candidate_sets(g: Graph, cr: CollapseResult, extended: list) -> list:
    """Maximal candidate sets ordered by smallest member ID, then size."""
    by_anchor: dict = {}
    core = cr.core
    for ec in extended:
        for v in ec.members:
            if v in core:
                by_anchor.setdefault(v, set()).update(ec.members)
    anchors = sorted(by_anchor, key=g.key)
    sets = [(g.key(a), frozenset(by_anchor[a])) for a in anchors]
    kept = [CandidateSet(anchors[i], sets[i][1]) for i in maximal_sets(sets)]
    kept.sort(key=lambda cs: (_min_key(g, cs.members), len(cs.members), sorted(g.key(v) for v in cs.members)))
    return kept


def candidate_pipeline(g: Graph, cr: CollapseResult) -> list:
    pcs = peripheral_components(g, cr)
    return candidate_sets(g, cr, extend_components(g, cr, pcs))
