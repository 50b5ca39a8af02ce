"""Undirected simple graphs with dense internal indices.

Nodes carry an external identifier (int or str) and a dense internal index
assigned in first-appearance order.  Adjacency lists are sorted tuples of
internal indices, so neighbourhood containment can be decided with a linear
merge (:func:`sorted_subset`).

Distances are hop counts (number of edges).
"""

from __future__ import annotations

import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import ParseError

UNREACHABLE = -1

# Sources per accumulation block in betweenness.  Fixed so that the float
# reduction order does not depend on the worker count.
_BC_BLOCK = 64


def id_key(ext):
    """Sort key for external IDs: ints numerically, then strings."""
    if isinstance(ext, (int, np.integer)):
        return (0, int(ext))
    return (1, str(ext))


def parse_id(token: str):
    try:
        return int(token)
    except ValueError:
        return token


@dataclass(eq=False)
class Graph:
    adjacency: tuple
    external_ids: tuple
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {ext: i for i, ext in enumerate(self.external_ids)}
        if len(self._index) != len(self.external_ids):
            raise ValueError("external IDs must be unique")
        if len(self.adjacency) != len(self.external_ids):
            raise ValueError("adjacency and external_ids differ in length")

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    def __len__(self):
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self):
        """Yield each edge once as ``(u, v)`` with ``u < v`` (internal indices)."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > u:
                    yield u, v

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def index(self, ext) -> int:
        return self._index[ext]

    def has_id(self, ext) -> bool:
        return ext in self._index

    def ext(self, v: int):
        return self.external_ids[v]

    def key(self, v: int):
        return id_key(self.external_ids[v])

    def keys(self) -> list:
        return [id_key(e) for e in self.external_ids]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        lo, hi = 0, len(nbrs)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbrs[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nbrs) and nbrs[lo] == v

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        """Induced subgraph; nodes keep their relative order and external IDs."""
        keep = sorted(set(nodes))
        remap = {v: i for i, v in enumerate(keep)}
        adjacency = tuple(
            tuple(remap[u] for u in self.adjacency[v] if u in remap) for v in keep
        )
        return Graph(adjacency, tuple(self.external_ids[v] for v in keep))

    def to_external(self, nodes: Iterable[int]) -> list:
        """External IDs of ``nodes`` in canonical (ID) order."""
        return sorted((self.external_ids[v] for v in nodes), key=id_key)


@dataclass(frozen=True)
class NeighborSet:
    owner: int
    members: tuple


@dataclass(frozen=True)
class PathStats:
    source: int
    dist: list
    sigma: list


@dataclass(frozen=True)
class Betweenness:
    values: np.ndarray
    pivots: tuple
    exact: bool
    clamped: bool = False


def build_graph(edge_list: Iterable[Sequence[Hashable]], nodes: Iterable[Hashable] = ()) -> Graph:
    """Build a simple undirected graph from external-ID pairs.

    Self-loops are dropped and duplicate or reversed edges merged.  IDs listed
    in ``nodes`` are indexed first (so isolated nodes survive), then new IDs
    from ``edge_list`` in order of first appearance.
    """
    index: dict = {}
    ids: list = []
    nbrs: list = []

    def intern(ext):
        i = index.get(ext)
        if i is None:
            i = index[ext] = len(ids)
            ids.append(ext)
            nbrs.append(set())
        return i

    for ext in nodes:
        intern(ext)
    for lineno, pair in enumerate(edge_list, 1):
        try:
            a, b = pair
        except (TypeError, ValueError):
            raise ParseError(f"malformed edge {pair!r}", line=lineno) from None
        if not isinstance(a, (int, str)) or not isinstance(b, (int, str)):
            raise ParseError(f"unsupported node ID type in {pair!r}", line=lineno)
        u, v = intern(a), intern(b)
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    return Graph(tuple(tuple(sorted(s)) for s in nbrs), tuple(ids))


def parse_edge_lines(lines: Iterable[str], path=None) -> list:
    """Parse SNAP edge-list lines into external-ID pairs."""
    pairs = []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(
                f"expected two node IDs, got {len(parts)} token(s): {s!r}",
                line=lineno,
                path=path,
            )
        pairs.append((parse_id(parts[0]), parse_id(parts[1])))
    return pairs


def read_edge_list(path, node_list=None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        pairs = parse_edge_lines(fh, path=path)
    nodes = read_node_list(node_list) if node_list is not None else ()
    return build_graph(pairs, nodes)


def read_node_list(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if len(s.split()) != 1:
                raise ParseError(f"expected one node ID: {s!r}", line=lineno, path=path)
            out.append(parse_id(s))
    return out


def canonical_edge_lines(g: Graph) -> list:
    """Edges as ``"a\\tb"`` strings, each oriented and sorted by external ID."""
    keys = g.keys()
    rows = []
    for u, v in g.edges():
        if keys[v] < keys[u]:
            u, v = v, u
        rows.append((keys[u], keys[v], g.ext(u), g.ext(v)))
    rows.sort()
    return [f"{a}\t{b}" for _, _, a, b in rows]


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in canonical_edge_lines(g):
            fh.write(row + "\n")


def drop_isolated(g: Graph) -> Graph:
    return g.subgraph(v for v in range(g.node_count) if g.adjacency[v])


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) on external IDs ``1..n`` (all nodes kept, isolated or not)."""
    rng = random.Random(seed)
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    return build_graph(edges, range(1, n + 1))


def sorted_subset(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff sorted sequence ``a`` is contained in sorted sequence ``b``."""
    if len(a) > len(b):
        return False
    j, nb = 0, len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        if j == nb or b[j] != x:
            return False
        j += 1
    return True


def _check_index(g: Graph, v: int) -> None:
    if not 0 <= v < g.node_count:
        raise IndexError(f"node index {v} out of range for {g.node_count} nodes")


def closed_neighborhood(g: Graph, v: int) -> NeighborSet:
    _check_index(g, v)
    members = sorted(g.adjacency[v] + (v,))
    return NeighborSet(v, tuple(members))


def two_hop_neighborhood(g: Graph, v: int) -> NeighborSet:
    _check_index(g, v)
    reach = {v}
    for u in g.adjacency[v]:
        reach.add(u)
        reach.update(g.adjacency[u])
    return NeighborSet(v, tuple(sorted(reach)))


def bfs_shortest_paths(g: Graph, source: int) -> PathStats:
    _check_index(g, source)
    n = g.node_count
    dist = [UNREACHABLE] * n
    sigma = [0] * n
    dist[source] = 0
    sigma[source] = 1
    queue = deque([source])
    adj = g.adjacency
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
    return PathStats(source, dist, sigma)


def bfs_distances(adj, source: int, n: int) -> list:
    """Plain hop distances over any adjacency mapping/sequence."""
    dist = [UNREACHABLE] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dv
                queue.append(w)
    return dist


def _source_dependency(adj, s: int, n: int) -> list:
    """Brandes single-source dependency ``delta_s(v)`` for every node."""
    dist = [-1] * n
    sigma = [0] * n
    preds: list = [[] for _ in range(n)]
    dist[s] = 0
    sigma[s] = 1
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        sv = sigma[v]
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sv
                preds[w].append(v)
    delta = [0.0] * n
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
    delta[s] = 0.0
    return delta


_WORKER_ADJ = None


def _init_worker(adj):
    global _WORKER_ADJ
    _WORKER_ADJ = adj


def _block_partial(sources, adj=None) -> list:
    adj = _WORKER_ADJ if adj is None else adj
    n = len(adj)
    acc = [0.0] * n
    for s in sources:
        delta = _source_dependency(adj, s, n)
        for i in range(n):
            acc[i] += delta[i]
    return acc


def _accumulate(adj, sources: Sequence[int], workers: int) -> list:
    n = len(adj)
    blocks = [sources[i : i + _BC_BLOCK] for i in range(0, len(sources), _BC_BLOCK)]
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(adj,)) as ex:
            partials = list(ex.map(_block_partial, blocks))
    else:
        partials = [_block_partial(b, adj) for b in blocks]
    total = [0.0] * n
    for part in partials:
        for i in range(n):
            total[i] += part[i]
    return total


def betweenness(g: Graph, k: int | None = None, seed: int | None = None, workers: int = 1) -> Betweenness:
    """Betweenness centrality summed over unordered pairs ``{s, t}``, s,t != v.

    With ``k`` set, ``k`` pivot sources are drawn without replacement using
    ``seed`` and the result is scaled by ``n / k``.  ``k = n`` is exact;
    ``k > n`` is clamped to ``n`` and sets ``clamped``.  Results do not depend on
    ``workers``.
    """
    n = g.node_count
    clamped = False
    if k is None:
        pivots = list(range(n))
        scale = 1.0
        exact = True
    else:
        if k < 1:
            raise ValueError("sampled betweenness needs k >= 1")
        if k > n:
            clamped = True
            k = n
        rng = random.Random(seed)
        pivots = sorted(rng.sample(range(n), k))
        scale = n / k if k else 1.0
        exact = k == n
    total = _accumulate(g.adjacency, pivots, workers)
    values = np.array([t * scale / 2.0 for t in total], dtype=float)
    return Betweenness(values, tuple(pivots), exact, clamped)


@dataclass(frozen=True)
class Clustering:
    coefficients: dict
    mean: float


def local_clustering(adjsets, nodes) -> dict:
    out = {}
    for v in nodes:
        nbrs = adjsets[v]
        d = len(nbrs)
        if d < 2:
            out[v] = 0.0
            continue
        links = 0
        for u in nbrs:
            links += len(nbrs & adjsets[u])
        out[v] = links / (d * (d - 1))
    return out


def clustering_coefficients(g: Graph, node_subset: Iterable[int] | None = None, edge_scope: str = "full") -> Clustering:
    """Local clustering ``2T / (d (d - 1))`` and its mean over ``node_subset``.

    ``edge_scope="induced"`` restricts both triangles and degree to the
    subgraph induced by ``node_subset``.
    """
    if edge_scope not in ("full", "induced"):
        raise ValueError(f"unknown edge_scope {edge_scope!r}")
    nodes = list(range(g.node_count)) if node_subset is None else sorted(set(node_subset))
    if edge_scope == "full":
        adjsets = [set(a) for a in g.adjacency]
    else:
        keep = set(nodes)
        adjsets = {v: {u for u in g.adjacency[v] if u in keep} for v in nodes}
    coeffs = local_clustering(adjsets, nodes)
    mean = float(sum(coeffs.values()) / len(coeffs)) if coeffs else 0.0
    return Clustering(coeffs, mean)


def connected_components(g: Graph, node_subset: Iterable[int] | None = None) -> list:
    """Components of the subgraph induced by ``node_subset`` (default: all).

    Ordered by smallest member index.
    """
    if node_subset is None:
        allowed = None
        order = range(g.node_count)
    else:
        allowed = set(node_subset)
        order = sorted(allowed)
    seen = set()
    comps = []
    adj = g.adjacency
    for s in order:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen and (allowed is None or w in allowed):
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps
