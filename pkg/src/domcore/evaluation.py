"""Community matching, descriptive statistics and shortest-path experiments."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .collapse import CollapseResult
from .errors import ContractError
from .graph import (
    UNREACHABLE,
    Graph,
    betweenness,
    bfs_distances,
    bfs_shortest_paths,
    clustering_coefficients,
)


@dataclass
class CommunitySet:
    name: str
    sets: list
    source: str = "ground-truth"

    def __post_init__(self):
        if self.source not in ("ground-truth", "detected"):
            raise ValueError(f"unknown community source {self.source!r}")
        self.sets = [frozenset(s) for s in self.sets]

    def __len__(self):
        return len(self.sets)

    def resolve(self, g: Graph) -> tuple:
        """Map member IDs to node indices.

        Returns ``(sets, unresolved)``: index sets (empty ones dropped) and
        the number of distinct member IDs that are not graph nodes.
        """
        missing = set()
        out = []
        for s in self.sets:
            idx = set()
            for ext in s:
                if g.has_id(ext):
                    idx.add(g.index(ext))
                else:
                    missing.add(ext)
            if idx:
                out.append(frozenset(idx))
        return out, len(missing)

    def restricted_to(self, g: Graph) -> tuple:
        """Same communities keeping only members that are graph nodes."""
        sets, unresolved = self.resolve(g)
        ext = [frozenset(g.ext(v) for v in s) for s in sets]
        return CommunitySet(self.name, ext, self.source), unresolved


def pair_metrics(detected, target) -> tuple:
    """``(precision, recall, f1)`` of ``detected`` against ``target``."""
    detected = detected if isinstance(detected, (set, frozenset)) else set(detected)
    target = target if isinstance(target, (set, frozenset)) else set(target)
    if not detected or not target:
        raise ContractError("pair_metrics needs two non-empty sets")
    return _metrics(len(detected & target), len(detected), len(target))


def _metrics(overlap: int, n_detected: int, n_target: int) -> tuple:
    # 2pr / (p + r) reduces to one exact-rounded division
    return overlap / n_detected, overlap / n_target, 2 * overlap / (n_detected + n_target)


def _side(targets: list, others: list) -> dict:
    """Per-target maxima of recall, precision and F1 over ``others``.

    Each metric is maximised on its own.  Sets with no shared member score 0
    on every metric, so only overlapping pairs are visited.
    """
    postings: dict = {}
    for j, o in enumerate(others):
        for x in o:
            postings.setdefault(x, []).append(j)
    rec, prec, f1s, contained = [], [], [], 0
    for t in targets:
        overlap = Counter()
        for x in t:
            for j in postings.get(x, ()):
                overlap[j] += 1
        best_p = best_r = best_f = 0.0
        for j, c in overlap.items():
            p, r, f = _metrics(c, len(others[j]), len(t))
            best_p = max(best_p, p)
            best_r = max(best_r, r)
            best_f = max(best_f, f)
        if overlap and max(overlap.values()) == len(t):
            contained += 1
        rec.append(best_r)
        prec.append(best_p)
        f1s.append(best_f)
    n = len(targets)
    return {
        "recall": float(np.mean(rec)) if n else 0.0,
        "precision": float(np.mean(prec)) if n else 0.0,
        "f1": float(np.mean(f1s)) if n else 0.0,
        "containment_fraction": contained / n if n else 0.0,
        "per_target": {"recall": rec, "precision": prec, "f1": f1s},
    }


@dataclass
class EvalReport:
    truth_side: dict
    detected_side: dict
    containment_fraction: float
    n_truth: int
    n_detected: int
    unresolved: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)

    @property
    def average(self) -> dict:
        return {
            m: (self.truth_side[m] + self.detected_side[m]) / 2
            for m in ("recall", "precision", "f1")
        }

    def to_dict(self) -> dict:
        out = {
            "truth_side": self.truth_side,
            "detected_side": self.detected_side,
            "average": self.average,
            "containment_fraction": self.containment_fraction,
            "n_truth": self.n_truth,
            "n_detected": self.n_detected,
            "unresolved": self.unresolved,
        }
        out.update(self.blocks)
        return out


def match_evaluate(detected: CommunitySet, truth: CommunitySet) -> EvalReport:
    """Bidirectional best-match scores between two overlapping covers.

    Truth side: each ground-truth community is the target and every metric is
    maximised over the detected sets.  Detected side: the roles swap.
    """
    d_sets = [s for s in detected.sets if s]
    t_sets = [s for s in truth.sets if s]
    if not d_sets or not t_sets:
        raise ContractError("match_evaluate needs non-empty collections")
    truth_side = _side(t_sets, d_sets)
    det_side = _side(d_sets, t_sets)
    contained = truth_side.pop("containment_fraction")
    det_side.pop("containment_fraction")
    truth_side.pop("per_target")
    det_side.pop("per_target")
    return EvalReport(truth_side, det_side, contained, len(t_sets), len(d_sets))


def community_stats(cs: CommunitySet) -> dict:
    sizes = np.array([len(s) for s in cs.sets], dtype=float)
    return {
        "number": len(cs.sets),
        "average_size": float(sizes.mean()) if len(sizes) else 0.0,
        # population standard deviation
        "std_size": float(sizes.std()) if len(sizes) else 0.0,
    }


def _mean(values) -> float:
    values = list(values)
    return float(sum(values) / len(values)) if values else 0.0


def descriptive_stats(g: Graph, cr: CollapseResult) -> dict:
    """Node/edge counts, mean degrees and mean clustering by region."""
    core, periphery = cr.core, cr.periphery
    e_core = e_per = e_cross = 0
    for u, v in g.edges():
        cu, cv = u in core, v in core
        if cu and cv:
            e_core += 1
        elif cu or cv:
            e_cross += 1
        else:
            e_per += 1
    deg = [len(a) for a in g.adjacency]
    n = g.node_count

    def induced_mean_degree(nodes):
        return _mean(sum(1 for u in g.adjacency[v] if u in nodes) for v in nodes)

    clustering = {
        "entire_network": clustering_coefficients(g).mean,
        "core_wrt_network": clustering_coefficients(g, core, "full").mean,
        "core_wrt_core": clustering_coefficients(g, core, "induced").mean,
        "periphery_wrt_network": clustering_coefficients(g, periphery, "full").mean,
        "periphery_wrt_periphery": clustering_coefficients(g, periphery, "induced").mean,
    }
    return {
        "nodes": {"core": len(core), "periphery": len(periphery), "total": n},
        "edges": {
            "within_core": e_core,
            "within_periphery": e_per,
            "between_core_periphery": e_cross,
            "total": g.edge_count,
        },
        "mean_degree": {
            "entire_network": _mean(deg),
            "core_wrt_network": _mean(deg[v] for v in core),
            "core_wrt_core": induced_mean_degree(core),
            "periphery_wrt_network": _mean(deg[v] for v in periphery),
            "periphery_wrt_periphery": induced_mean_degree(periphery),
        },
        "clustering": clustering,
    }


def membership_profile(g: Graph, cr: CollapseResult, truth: CommunitySet) -> dict:
    """Community-membership counts of core and periphery nodes."""
    sets, unresolved = truth.resolve(g)
    memberships = Counter()
    for s in sets:
        memberships.update(s)
    totals = {"none": 0, "single": 0, "multiple": 0}
    regions = {}
    for name, nodes in (("core", cr.core), ("periphery", cr.periphery)):
        counts = {"none": 0, "single": 0, "multiple": 0}
        multi = []
        for v in nodes:
            m = memberships[v]
            if m == 0:
                counts["none"] += 1
            elif m == 1:
                counts["single"] += 1
            else:
                counts["multiple"] += 1
                multi.append(m)
        size = len(nodes)
        regions[name] = {
            "counts": counts,
            "fractions": {k: (c / size if size else 0.0) for k, c in counts.items()},
            "mean_memberships_multiple": _mean(multi),
        }
        for k, c in counts.items():
            totals[k] += c
    regions["periphery_share"] = {
        k: (regions["periphery"]["counts"][k] / t if t else 0.0) for k, t in totals.items()
    }
    regions["unresolved"] = unresolved
    return regions


def top_nodes(scores, k: int, keys) -> list:
    """Indices of the ``k`` highest scores; ties go to the smaller external ID."""
    order = sorted(range(len(scores)), key=lambda v: (-scores[v], keys[v]))
    return order[:k]


def _one_path(g: Graph, s: int, t: int, keys) -> list:
    dist_t = bfs_distances(g.adjacency, t, g.node_count)
    if dist_t[s] == UNREACHABLE:
        return []
    path = [s]
    v = s
    while v != t:
        d = dist_t[v] - 1
        v = min((w for w in g.adjacency[v] if dist_t[w] == d), key=keys.__getitem__)
        path.append(v)
    return path


def path_share(path: list, members: set) -> float:
    return sum(1 for v in path if v in members) / len(path)


def _all_paths_share(g: Graph, s: int, t: int, sets: dict) -> dict | None:
    ps, pt = bfs_shortest_paths(g, s), bfs_shortest_paths(g, t)
    length = ps.dist[t]
    if length == UNREACHABLE:
        return None
    total = ps.sigma[t]
    on_path = [
        (v, ps.sigma[v] * pt.sigma[v] / total)
        for v in range(g.node_count)
        if ps.dist[v] != UNREACHABLE and pt.dist[v] != UNREACHABLE and ps.dist[v] + pt.dist[v] == length
    ]
    return {
        name: sum(w for v, w in on_path if v in members) / (length + 1)
        for name, members in sets.items()
    }


def shortest_path_share(
    g: Graph,
    cr: CollapseResult,
    pairs: int = 1000,
    seed: int = 0,
    all_paths: bool = False,
    exact_bc_limit: int = 5000,
    bc_pivots: int = 500,
    workers: int = 1,
    max_attempts: int | None = None,
) -> dict:
    """Mean share of shortest-path nodes lying in four equal-sized node sets.

    The sets are the core, the top-betweenness nodes, the top-degree nodes
    and a uniform random sample, all of size ``|core|``.  Pairs are drawn
    uniformly among distinct nodes and disconnected draws are rejected.  One
    shortest path per pair is used (smallest-ID next hop), endpoints included;
    ``all_paths=True`` averages over all shortest paths of the pair instead.
    Betweenness is sampled with ``bc_pivots`` pivots above ``exact_bc_limit``
    nodes.
    """
    n = g.node_count
    if n < 2:
        raise ContractError("shortest_path_share needs at least two nodes")
    if pairs < 1:
        raise ContractError("pairs must be >= 1")
    keys = g.keys()
    rng = random.Random(seed)
    k = len(cr.core)
    if n > exact_bc_limit:
        bc = betweenness(g, k=bc_pivots, seed=seed, workers=workers)
    else:
        bc = betweenness(g, workers=workers)
    degrees = [len(a) for a in g.adjacency]
    sets = {
        "core": set(cr.core),
        "top_bc": set(top_nodes(bc.values, k, keys)),
        "top_degree": set(top_nodes(degrees, k, keys)),
        "random": set(rng.sample(range(n), k)),
    }
    sums = dict.fromkeys(sets, 0.0)
    used = rejected = 0
    limit = max_attempts if max_attempts is not None else 100 * pairs + 1000
    attempts = 0
    while used < pairs and attempts < limit:
        attempts += 1
        s, t = rng.sample(range(n), 2)
        if all_paths:
            shares = _all_paths_share(g, s, t, sets)
            if shares is None:
                rejected += 1
                continue
        else:
            path = _one_path(g, s, t, keys)
            if not path:
                rejected += 1
                continue
            shares = {name: path_share(path, members) for name, members in sets.items()}
        for name in sets:
            sums[name] += shares[name]
        used += 1
    if used == 0:
        raise ContractError("no connected node pair found")
    return {
        "pairs": used,
        "rejected_pairs": rejected,
        "set_size": k,
        "mode": "all-paths" if all_paths else "one-path",
        "betweenness": "exact" if bc.exact else f"sampled({len(bc.pivots)})",
        "mean_share": {name: sums[name] / used for name in sets},
    }


def bc_degree_rows(g: Graph, cr: CollapseResult, bc) -> list:
    """``(id, degree, bc, region)`` rows in external-ID order for plotting."""
    rows = []
    for v in sorted(range(g.node_count), key=g.key):
        region = "core" if v in cr.core else "periphery"
        rows.append((g.ext(v), len(g.adjacency[v]), float(bc[v]), region))
    return rows

