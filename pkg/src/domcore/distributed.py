"""Round-based simulation of the distributed node-dominance protocol.

Every node only sees its own state and the messages in its inbox.  A round:

1. each active node broadcasts its dominance profile to its contacts
   (two-hop nodes first exchange ``N[v]`` with their neighbours to learn
   ``N2[v]``);
2. each active node tests every received profile against its own and sends
   OFF to the senders it dominates;
3. a node that received OFF from a sender it did not send OFF to turns off;
   mutual OFF pairs are handshaken in ascending external-ID pair order;
4. surviving nodes drop OFF neighbours (and, for relation profiles, OFF
   vertices from their simplices).

The run stops after the first round without OFF messages.  Profiles are
sorted tuples compared with :func:`domcore.graph.sorted_subset`.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .collapse import (
    DETERMINISTIC,
    ONE_HOP,
    ONE_HOP_VARIANT,
    RELATION,
    TWO_HOP,
    CollapseResult,
    DominanceVariant,
    Removal,
    TieBreakPolicy,
    collapse,
)
from .errors import ContractError
from .graph import Graph, sorted_subset

NBR = "neighbor-broadcast"
OFF = "off"
HANDSHAKE = "handshake"


@dataclass
class Message:
    kind: str
    sender: int
    payload: tuple = ()


@dataclass
class NodeState:
    id: int
    known_neighbors: list
    status: str = "active"
    inbox: list = field(default_factory=list)
    # relation profiles: simplex index -> residual member set
    simplices: dict = field(default_factory=dict)
    profile: tuple = ()
    contacts: tuple = ()

    @property
    def active(self) -> bool:
        return self.status == "active"


@dataclass
class SimTrace:
    rounds: int
    messages_by_kind: dict
    final_partition: CollapseResult
    round_removals: list

    def to_dict(self, g: Graph) -> dict:
        return {
            "rounds": self.rounds,
            "messages_by_kind": dict(self.messages_by_kind),
            "round_removals": [
                [[g.ext(v), g.ext(d)] for v, d in rem] for rem in self.round_removals
            ],
            "core": self.final_partition.core_ids(g),
            "periphery": self.final_partition.periphery_ids(g),
        }


def _local_maximal(simplices: dict) -> list:
    """Maximal simplices among a node's own; equal ones keep the lowest index."""
    out = []
    for s, verts in simplices.items():
        if not verts:
            continue
        for t, other in simplices.items():
            if t != s and verts <= other and (len(other) > len(verts) or t < s):
                break
        else:
            out.append(s)
    return sorted(out)


def _refresh(node: NodeState, kind: str, n2: tuple = ()) -> None:
    if kind == ONE_HOP:
        node.profile = tuple(sorted(node.known_neighbors + [node.id]))
        node.contacts = tuple(node.known_neighbors)
    elif kind == TWO_HOP:
        node.profile = n2
        node.contacts = tuple(u for u in n2 if u != node.id)
    else:
        maximal = _local_maximal(node.simplices)
        node.profile = tuple(maximal)
        reach = set()
        for s in maximal:
            reach |= node.simplices[s]
        reach.discard(node.id)
        node.contacts = tuple(sorted(reach))


def _init_nodes(g: Graph, variant: DominanceVariant) -> list:
    nodes = [NodeState(v, list(g.adjacency[v])) for v in range(g.node_count)]
    if variant.kind == RELATION:
        if len(variant.relation_lists) != g.node_count:
            raise ContractError("relation lists must cover every graph node")
        members: dict = {}
        for v, sids in enumerate(variant.relation_lists):
            for s in sids:
                members.setdefault(s, set()).add(v)
        for v, sids in enumerate(variant.relation_lists):
            nodes[v].simplices = {s: set(members[s]) for s in sids}
    return nodes


def simulate(
    g: Graph,
    variant: DominanceVariant = ONE_HOP_VARIANT,
    policy: TieBreakPolicy = DETERMINISTIC,
    delivery: str = "lockstep",
    seed: int | None = None,
) -> SimTrace:
    """Run the protocol to quiescence.

    ``delivery="seeded-shuffle"`` permutes each inbox before it is processed,
    using ``seed``.
    """
    if delivery not in ("lockstep", "seeded-shuffle"):
        raise ValueError(f"unknown delivery mode {delivery!r}")
    shuffler = random.Random(seed) if delivery == "seeded-shuffle" else None
    keys = g.keys()
    coin = policy.rng()
    nodes = _init_nodes(g, variant)
    counts = Counter({NBR: 0, OFF: 0, HANDSHAKE: 0})
    round_removals = []
    log = []
    rounds = 0

    def drain(node):
        msgs = node.inbox
        node.inbox = []
        if shuffler is not None:
            shuffler.shuffle(msgs)
        return msgs

    while True:
        active = [nd for nd in nodes if nd.active]
        if not active:
            break
        rounds += 1

        if variant.kind == TWO_HOP:
            for nd in active:
                closed = tuple(sorted(nd.known_neighbors + [nd.id]))
                for u in nd.known_neighbors:
                    nodes[u].inbox.append(Message(NBR, nd.id, closed))
                    counts[NBR] += 1
            for nd in active:
                reach = set(nd.known_neighbors)
                reach.add(nd.id)
                for msg in drain(nd):
                    reach.update(msg.payload)
                _refresh(nd, TWO_HOP, tuple(sorted(reach)))
        else:
            for nd in active:
                _refresh(nd, variant.kind)

        # broadcast profiles
        for nd in active:
            for u in nd.contacts:
                nodes[u].inbox.append(Message(NBR, nd.id, nd.profile))
                counts[NBR] += 1

        # domination test: OFF to every sender whose profile we contain
        sent_off: dict = {}
        outgoing = []
        for nd in active:
            for msg in drain(nd):
                if msg.payload and sorted_subset(msg.payload, nd.profile):
                    outgoing.append((msg.sender, Message(OFF, nd.id)))
                    sent_off.setdefault(nd.id, set()).add(msg.sender)
                    counts[OFF] += 1
        for target, msg in outgoing:
            nodes[target].inbox.append(msg)

        received: dict = {}
        for nd in active:
            for msg in drain(nd):
                received.setdefault(nd.id, set()).add(msg.sender)
        if not received:
            break

        turned_off = set()
        mutual = []
        for v, senders in received.items():
            mine = sent_off.get(v, set())
            for u in senders:
                if u in mine:
                    if keys[v] < keys[u]:
                        mutual.append((v, u))
                else:
                    turned_off.add(v)
        mutual.sort(key=lambda p: (keys[p[0]], keys[p[1]]))
        counts[HANDSHAKE] += len(mutual)
        lost = set()
        for a, b in mutual:
            if a in turned_off or b in turned_off or a in lost or b in lost:
                continue
            lost.add(policy.loser(a, b, coin))
        turned_off |= lost

        removals = []
        for v in sorted(turned_off, key=keys.__getitem__):
            dom = min((u for u in received[v] if u not in turned_off), key=keys.__getitem__)
            removals.append((v, dom))
            log.append(Removal(v, dom, rounds))
            nodes[v].status = "off"
        round_removals.append(removals)
        for nd in nodes:
            if nd.active:
                nd.known_neighbors = [u for u in nd.known_neighbors if u not in turned_off]
                for verts in nd.simplices.values():
                    verts -= turned_off

    core = frozenset(nd.id for nd in nodes if nd.active)
    periphery = frozenset(nd.id for nd in nodes if not nd.active)
    iterations = len(round_removals)
    result = CollapseResult(core, periphery, tuple(log), variant, policy, iterations)
    return SimTrace(rounds, dict(counts), result, round_removals)


def cross_validate(g: Graph, variant: DominanceVariant = ONE_HOP_VARIANT, policy: TieBreakPolicy = DETERMINISTIC) -> bool:
    """True iff the simulator and :func:`domcore.collapse.collapse` agree on the core."""
    return simulate(g, variant, policy).final_partition.core == collapse(g, variant, policy).core
