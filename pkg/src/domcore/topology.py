"""Flag complexes and GF(2) Betti numbers for small graphs.

This is a verification oracle: cliques are enumerated explicitly and
boundary ranks come from Gaussian elimination on Python-int bit rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .collapse import ONE_HOP, CollapseResult
from .errors import ContractError, ResourceError
from .graph import Graph, bfs_distances, connected_components

MAX_SIMPLICES = 10**6


@dataclass(frozen=True)
class FlagComplex:
    max_dim: int
    simplices_by_dim: tuple

    def count(self, k: int) -> int:
        return len(self.simplices_by_dim[k]) if k < len(self.simplices_by_dim) else 0

    @property
    def dimension(self) -> int:
        dims = [k for k, s in enumerate(self.simplices_by_dim) if s]
        return max(dims) if dims else -1


@dataclass(frozen=True)
class BettiVector:
    b: tuple
    # true when simplices exist in dimension max_dim, so b[max_dim] is unknown
    truncated_top: bool


def flag_complex(g: Graph, max_dim: int = 2, max_simplices: int = MAX_SIMPLICES) -> FlagComplex:
    """All cliques with at most ``max_dim + 1`` vertices, as sorted index tuples."""
    if max_dim not in (1, 2, 3):
        raise ContractError("max_dim must be 1, 2 or 3")
    higher = [tuple(u for u in g.adjacency[v] if u > v) for v in range(g.node_count)]
    adjsets = [set(a) for a in g.adjacency]
    by_dim = [[] for _ in range(max_dim + 1)]
    total = 0

    def extend(clique, candidates):
        nonlocal total
        by_dim[len(clique) - 1].append(clique)
        total += 1
        if total > max_simplices:
            raise ResourceError(f"flag complex exceeds {max_simplices} simplices")
        if len(clique) == max_dim + 1:
            return
        for i, u in enumerate(candidates):
            extend(clique + (u,), [w for w in candidates[i + 1 :] if w in adjsets[u]])

    for v in range(g.node_count):
        extend((v,), list(higher[v]))
    return FlagComplex(max_dim, tuple(tuple(sorted(s)) for s in by_dim))


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a matrix given as int bitmask rows."""
    pivots = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = row
                break
            row ^= p
    return len(pivots)


def _boundary_rows(fc: FlagComplex, k: int) -> list:
    """Rows of the boundary map from k-simplices to (k-1)-simplices."""
    faces = {s: i for i, s in enumerate(fc.simplices_by_dim[k - 1])}
    rows = []
    for s in fc.simplices_by_dim[k]:
        row = 0
        for i in range(len(s)):
            row |= 1 << faces[s[:i] + s[i + 1 :]]
        rows.append(row)
    return rows


def betti(fc: FlagComplex) -> BettiVector:
    """``b[k] = dim ker d_k - rank d_{k+1}`` for ``k < max_dim``."""
    ranks = [0] * (fc.max_dim + 2)
    for k in range(1, fc.max_dim + 1):
        ranks[k] = gf2_rank(_boundary_rows(fc, k))
    b = tuple(fc.count(k) - ranks[k] - ranks[k + 1] for k in range(fc.max_dim))
    return BettiVector(b, fc.count(fc.max_dim) > 0)


def euler_characteristic(fc: FlagComplex) -> int:
    return sum((-1) ** k * fc.count(k) for k in range(fc.max_dim + 1))


def _require_one_hop(cr: CollapseResult, what: str) -> None:
    if cr.variant.kind != ONE_HOP:
        raise ContractError(
            f"{what} holds for the one-hop collapse only; "
            f"the {cr.variant.kind} collapse does not preserve the flag complex"
        )


@dataclass(frozen=True)
class HomologyVerdict:
    ok: bool
    original: BettiVector
    core: BettiVector


def verify_property4(g: Graph, cr: CollapseResult, max_dim: int = 2) -> HomologyVerdict:
    """Compare Betti numbers of the flag complexes of ``g`` and of its core."""
    _require_one_hop(cr, "homology preservation")
    before = betti(flag_complex(g, max_dim))
    after = betti(flag_complex(g.subgraph(cr.core), max_dim))
    return HomologyVerdict(before.b == after.b, before, after)


def verify_property1(g: Graph, cr: CollapseResult) -> bool:
    """True iff core-to-core hop distances are the same in the core and in ``g``."""
    _require_one_hop(cr, "distance preservation")
    core = sorted(cr.core)
    sub = g.subgraph(core)
    for i, v in enumerate(core):
        full = bfs_distances(g.adjacency, v, g.node_count)
        inner = bfs_distances(sub.adjacency, i, sub.node_count)
        for j, u in enumerate(core):
            if full[u] != inner[j]:
                return False
    return True


def component_count(g: Graph) -> int:
    return len(connected_components(g))
