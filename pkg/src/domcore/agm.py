"""Community-affiliation graph model (AGM) with planted communities.

Nodes are ``0 .. node_count - 1``.  A pair sharing the communities ``C_uv``
is joined with probability ``1 - prod(1 - p_c)`` over ``C_uv``; pairs with no
shared community use the baseline ``epsilon``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .evaluation import CommunitySet
from .graph import Graph, build_graph


@dataclass(frozen=True)
class AgmSpec:
    communities: tuple  # ((members, p_c), ...)
    epsilon: float | str = 0.0
    node_count: int = 0
    seed: int = 0

    def __post_init__(self):
        comms = tuple((tuple(sorted(set(m))), float(p)) for m, p in self.communities)
        object.__setattr__(self, "communities", comms)
        if self.node_count < 0:
            raise ContractError("node_count must be non-negative")
        for members, p in comms:
            if not 0.0 <= p <= 1.0:
                raise ContractError(f"community probability {p} outside [0, 1]")
            for v in members:
                if not (isinstance(v, (int, np.integer)) and 0 <= v < self.node_count):
                    raise ContractError(f"community member {v!r} is not a node index < {self.node_count}")
        if self.epsilon != "auto":
            if not isinstance(self.epsilon, (int, float)) or not 0.0 <= self.epsilon <= 1.0:
                raise ContractError(f"epsilon {self.epsilon!r} is not a probability or 'auto'")

    @classmethod
    def from_dict(cls, data: dict) -> "AgmSpec":
        try:
            comms = tuple((c["members"], c["p"]) for c in data["communities"])
            return cls(comms, data.get("epsilon", 0.0), int(data["node_count"]), int(data.get("seed", 0)))
        except (KeyError, TypeError) as exc:
            raise ContractError(f"malformed AGM spec: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "communities": [{"members": list(m), "p": p} for m, p in self.communities],
        }

    def with_seed(self, seed: int) -> "AgmSpec":
        return dataclasses.replace(self, seed=seed)


@dataclass
class AgmSample:
    graph: Graph
    truth: CommunitySet
    realized_epsilon: float


def _membership(spec: AgmSpec) -> np.ndarray:
    m = np.zeros((spec.node_count, len(spec.communities)), dtype=bool)
    for c, (members, _) in enumerate(spec.communities):
        m[list(members), c] = True
    return m


def community_probabilities(spec: AgmSpec) -> tuple:
    """``(P, shared)``: community-driven edge probabilities and shared-community mask."""
    m = _membership(spec).astype(float)
    p = np.array([pc for _, pc in spec.communities], dtype=float)
    shared = (m @ m.T) > 0
    certain = p >= 1.0
    # log(1 - p_c) summed over shared communities; p_c = 1 handled separately
    logq = np.log1p(-np.where(certain, 0.0, p))
    log_none = m @ (logq[:, None] * m.T) if len(p) else np.zeros((spec.node_count,) * 2)
    prob = 1.0 - np.exp(log_none)
    if certain.any():
        mc = m[:, certain]
        prob[(mc @ mc.T) > 0] = 1.0
    prob[~shared] = 0.0
    np.fill_diagonal(prob, 0.0)
    np.fill_diagonal(shared, False)
    return prob, shared


def resolve_epsilon(spec: AgmSpec) -> float:
    """Baseline probability; ``"auto"`` is ``2 E / (n (n - 1))`` with ``E`` the
    expected number of community-driven edges."""
    if spec.epsilon != "auto":
        return float(spec.epsilon)
    n = spec.node_count
    if n < 2:
        return 0.0
    prob, _ = community_probabilities(spec)
    expected_edges = prob[np.triu_indices(n, 1)].sum()
    return float(2.0 * expected_edges / (n * (n - 1)))


def edge_probabilities(spec: AgmSpec) -> np.ndarray:
    prob, shared = community_probabilities(spec)
    eps = resolve_epsilon(spec)
    out = np.where(shared, prob, eps)
    np.fill_diagonal(out, 0.0)
    return out


def generate(spec: AgmSpec) -> AgmSample:
    n = spec.node_count
    prob = edge_probabilities(spec)
    rng = np.random.default_rng(spec.seed)
    iu, ju = np.triu_indices(n, 1)
    draws = rng.random(len(iu))
    hit = draws < prob[iu, ju]
    edges = list(zip(iu[hit].tolist(), ju[hit].tolist()))
    graph = build_graph(edges, range(n))
    truth = CommunitySet("agm", [set(m) for m, _ in spec.communities])
    return AgmSample(graph, truth, resolve_epsilon(spec))


def edge_frequency(spec: AgmSpec, u: int, v: int, trials: int) -> float:
    """Fraction of samples (seeds ``spec.seed + t``) containing edge ``{u, v}``."""
    hits = 0
    for t in range(trials):
        g = generate(spec.with_seed(spec.seed + t)).graph
        if g.has_edge(g.index(u), g.index(v)):
            hits += 1
    return hits / trials


def property3_test(spec: AgmSpec, trials: int = 500) -> dict:
    """Empirical domination frequencies split by community coverage.

    Over all ordered pairs ``(v, w)`` with ``v`` of degree >= 1, counts how
    often ``N[v]`` is contained in ``N[w]`` when the communities of ``N[v]``
    are all communities of ``w`` (``covered``) and when they are not.
    """
    if trials < 100:
        raise ContractError("property3_test needs at least 100 trials")
    eps = resolve_epsilon(spec)
    min_p = min((p for _, p in spec.communities), default=0.0)
    if eps > min_p / 10:
        raise ContractError(f"epsilon {eps} must be at most min p_c / 10 = {min_p / 10}")
    n = spec.node_count
    member = _membership(spec)
    not_member = (~member).astype(np.int64)
    off_diag = ~np.eye(n, dtype=bool)
    tally = {"covered": [0, 0], "uncovered": [0, 0]}  # [dominated, observations]
    for t in range(trials):
        g = generate(spec.with_seed(spec.seed + t)).graph
        adj = np.zeros((n, n), dtype=bool)
        for a, b in g.edges():
            adj[a, b] = adj[b, a] = True
        closed = adj | np.eye(n, dtype=bool)
        ci = closed.astype(np.int64)
        dominated = (ci @ (1 - ci).T) == 0
        comm_of_nbhd = (ci @ member.astype(np.int64)) > 0
        covered = (comm_of_nbhd.astype(np.int64) @ not_member.T) == 0
        mask = off_diag & adj.any(axis=1)[:, None]
        for name, cond in (("covered", covered), ("uncovered", ~covered)):
            sel = mask & cond
            tally[name][0] += int((dominated & sel).sum())
            tally[name][1] += int(sel.sum())
    freq = {k: (d / o if o else float("nan")) for k, (d, o) in tally.items()}
    ratio = freq["covered"] / freq["uncovered"] if freq["uncovered"] else float("inf")
    return {
        "trials": trials,
        "epsilon": eps,
        "observations": {k: o for k, (_, o) in tally.items()},
        "dominated": {k: d for k, (d, _) in tally.items()},
        "frequency": freq,
        "ratio": ratio,
    }
