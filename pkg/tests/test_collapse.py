import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domcore.collapse import (
    DETERMINISTIC,
    ONE_HOP_VARIANT,
    TWO_HOP_VARIANT,
    DominanceVariant,
    TieBreakPolicy,
    collapse,
    is_dominated,
    random_order_collapse,
    resolve_round,
    stability_analysis,
    variant_profiles,
)
from domcore.errors import ContractError, InputError
from domcore.graph import build_graph, erdos_renyi

from oracles import dominated_pairs, to_nx

SQUARE_EAR = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (1, 6), (5, 6)]


def complete(n):
    return build_graph([(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def cycle(n):
    return build_graph([(i, i % n + 1) for i in range(1, n + 1)])


def random_tree(n, seed):
    rng = random.Random(seed)
    return build_graph([(v, rng.randrange(v)) for v in range(1, n)])


def clique_relation(g):
    cliques = sorted(sorted(c) for c in nx.find_cliques(nx.Graph([(g.ext(u), g.ext(v)) for u, v in g.edges()])))
    return DominanceVariant.relation(g, [(v, i) for i, c in enumerate(cliques) for v in c])


def replay_ok(g, cr):
    """Every logged removal had a live dominator at the start of its iteration."""
    alive = set(range(g.node_count))
    by_iter = {}
    for r in cr.removal_log:
        by_iter.setdefault(r.iteration, []).append(r)
    for it in sorted(by_iter):
        nb = {v: {u for u in g.adjacency[v] if u in alive} | {v} for v in alive}
        removed = {r.node for r in by_iter[it]}
        for r in by_iter[it]:
            if r.dominator in removed or not nb[r.node] <= nb[r.dominator]:
                return False
        alive -= removed
    return alive == set(cr.core)


class TestIsDominated:
    def test_leaf(self):
        g = build_graph([(1, 2), (2, 3)])
        assert is_dominated(g, g.index(1), g.index(2), ONE_HOP_VARIANT)
        assert not is_dominated(g, g.index(2), g.index(1), ONE_HOP_VARIANT)

    def test_same_node(self):
        g = build_graph([(1, 2)])
        with pytest.raises(ContractError):
            is_dominated(g, 0, 0, ONE_HOP_VARIANT)

    def test_two_hop_profile(self):
        g = cycle(4)
        profiles = variant_profiles(g, TWO_HOP_VARIANT)
        assert all(len(p) == 4 for p in profiles)


class TestClassicalCollapses:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_complete(self, n):
        cr = collapse(complete(n))
        assert len(cr.core) == 1
        assert cr.core_ids(complete(n)) == [1]

    @pytest.mark.parametrize("seed", range(30))
    def test_trees(self, seed):
        g = random_tree(2 + seed % 19, seed)
        assert len(collapse(g).core) == 1

    @pytest.mark.parametrize("n", range(4, 13))
    def test_cycles_one_hop(self, n):
        assert len(collapse(cycle(n)).core) == n

    @pytest.mark.parametrize("n", [4, 5])
    def test_small_cycles_two_hop(self, n):
        assert len(collapse(cycle(n), TWO_HOP_VARIANT).core) == 1

    def test_square_with_ear(self):
        g = build_graph(SQUARE_EAR)
        cr = collapse(g)
        assert cr.core_ids(g) == [1, 2, 3, 4]
        assert cr.periphery_ids(g) == [5, 6]
        assert cr.removal_rows(g) == [(5, 1, 1), (6, 1, 1)]

    def test_path_uses_synchronous_iterations(self):
        g = build_graph([(1, 2), (2, 3), (3, 4)])
        cr = collapse(g)
        assert cr.core_ids(g) == [2]
        assert cr.iterations == 2

    def test_empty(self):
        cr = collapse(build_graph([]))
        assert not cr.core and not cr.periphery and cr.iterations == 0


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 25), st.sampled_from([0.1, 0.2, 0.4, 0.7]), st.integers(0, 10**6))
    def test_core_is_fixed_point_and_log_replays(self, n, p, seed):
        g = erdos_renyi(n, p, seed)
        cr = collapse(g)
        assert cr.core | cr.periphery == frozenset(range(n))
        assert not cr.core & cr.periphery
        assert dominated_pairs(g, set(cr.core)) == []
        assert replay_ok(g, cr)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 20), st.sampled_from([0.2, 0.4]), st.integers(0, 10**6), st.integers(0, 99))
    def test_seeded_policy_invariants(self, n, p, seed, coin_seed):
        g = erdos_renyi(n, p, seed)
        cr = collapse(g, ONE_HOP_VARIANT, TieBreakPolicy("seeded", coin_seed))
        assert dominated_pairs(g, set(cr.core)) == []
        assert replay_ok(g, cr)

    def test_seeded_is_reproducible_and_varies(self):
        g = complete(6)
        survivors = {collapse(g, ONE_HOP_VARIANT, TieBreakPolicy("seeded", s)).core_ids(g)[0] for s in range(40)}
        assert len(survivors) > 1
        a = collapse(g, ONE_HOP_VARIANT, TieBreakPolicy("seeded", 3))
        b = collapse(g, ONE_HOP_VARIANT, TieBreakPolicy("seeded", 3))
        assert a.core == b.core and a.removal_log == b.removal_log

    def test_two_hop_fixed_point(self):
        for seed in range(30):
            g = erdos_renyi(15, 0.15, seed)
            cr = collapse(g, TWO_HOP_VARIANT)
            h = g.subgraph(sorted(cr.core))
            profiles = variant_profiles(h, TWO_HOP_VARIANT)
            for v in range(h.node_count):
                for w in profiles[v]:
                    if w != v:
                        assert not set(profiles[v]) <= set(profiles[w])

    def test_resolve_round_keeps_one_per_class(self):
        keys = [(0, i) for i in range(4)]
        doms = {0: {1, 2}, 1: {0, 2}, 2: {0, 1}, 3: {0}}
        off, mutual = resolve_round(doms, keys, DETERMINISTIC, None)
        assert off == {1, 2, 3} and mutual == 3


class TestRelationVariant:
    def test_maximal_cliques_match_one_hop(self):
        for seed in range(40):
            g = erdos_renyi(5 + seed % 16, 0.3, seed)
            assert collapse(g, clique_relation(g)).core == collapse(g).core, seed

    def test_unknown_node(self):
        g = build_graph([(1, 2)])
        with pytest.raises(InputError):
            DominanceVariant.relation(g, [(7, "s")])

    def test_explicit_relation(self):
        # node 3 sits only in simplex A, which node 1 also contains
        g = build_graph([(1, 2), (2, 3), (1, 3)])
        variant = DominanceVariant.relation(g, [(1, "A"), (3, "A"), (1, "B"), (2, "B")])
        cr = collapse(g, variant)
        assert cr.core_ids(g) == [1]
        assert variant.label() == "relation"


class TestStability:
    def test_c4(self):
        g = cycle(4)
        rep = stability_analysis(g, ONE_HOP_VARIANT, 100, 0)
        assert rep.always_core == rep.ever_core == frozenset(range(4))

    def test_k3(self):
        g = complete(3)
        rep = stability_analysis(g, ONE_HOP_VARIANT, 100, 0)
        assert set(rep.core_sizes) == {1}
        assert g.to_external(rep.ever_core) == [1, 2, 3]
        assert not rep.always_core

    def test_needs_two_realizations(self):
        with pytest.raises(ContractError):
            stability_analysis(cycle(4), ONE_HOP_VARIANT, 1, 0)

    def test_random_order_reaches_fixed_point(self):
        for seed in range(20):
            g = erdos_renyi(18, 0.25, seed)
            cr = random_order_collapse(g, ONE_HOP_VARIANT, seed)
            assert dominated_pairs(g, set(cr.core)) == []
            assert cr.iterations == len(cr.periphery)

    def test_report_dict(self):
        g = build_graph(SQUARE_EAR)
        d = stability_analysis(g, ONE_HOP_VARIANT, 10, 5).to_dict(g)
        assert d["realizations"] == 10 and d["base_seed"] == 5
        assert d["always_core"] == [1, 2, 3, 4]
