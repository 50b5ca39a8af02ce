"""Command-line interface.

Every subcommand accepts the same core flags; JSON reports embed the tool
version and the full resolved configuration (including generated seeds), so
re-running with the embedded config reproduces the report byte for byte.

Exit codes: 0 ok, 1 input error, 2 contract or resource error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from . import __version__
from .agm import AgmSpec, generate, property3_test
from .collapse import ONE_HOP_VARIANT, TWO_HOP_VARIANT, DominanceVariant, TieBreakPolicy, collapse, stability_analysis
from .communities import candidate_sets, extend_components, interior_core, peripheral_components
from .distributed import simulate
from .errors import ContractError, DomcoreError, InputError
from .evaluation import (
    CommunitySet,
    bc_degree_rows,
    community_stats,
    descriptive_stats,
    match_evaluate,
    membership_profile,
    shortest_path_share,
)
from .graph import betweenness, drop_isolated, erdos_renyi, read_edge_list, write_edge_list
from .io import (
    dump_json,
    read_communities,
    read_relations,
    write_communities,
    write_id_list,
    write_json,
    write_removals,
    write_scatter,
)
from .topology import verify_property1, verify_property4

VARIANTS = {"1hop": "one-hop", "2hop": "two-hop", "relation": "relation"}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="SNAP edge list (or AGM spec JSON for generate)")
    parser.add_argument("--nodes", help="optional node-list sidecar (keeps isolated nodes)")
    parser.add_argument("--communities", help="ground-truth community file")
    parser.add_argument("--relations", help="node<TAB>simplex incidence file")
    parser.add_argument("--variant", choices=sorted(VARIANTS), default="1hop")
    parser.add_argument("--policy", choices=["det", "seeded"], default="det")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--realizations", type=int, default=100)
    parser.add_argument("--pairs", type=int, default=1000)
    parser.add_argument("--max-dim", type=int, choices=[1, 2, 3], default=2)
    parser.add_argument("--drop-isolated", choices=["on", "off"], default="on")
    parser.add_argument("--best-k", help="community file restricting the truth set")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", help="output directory (reports go to stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="domcore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"domcore {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collapse", help="core/periphery files, removal log and stats")
    _common(p)
    p = sub.add_parser("communities", help="maximal candidate sets from the periphery")
    _common(p)
    p = sub.add_parser("evaluate", help="match detected communities against ground truth")
    _common(p)
    p.add_argument("detected", nargs="?", help="detected community file (default: candidate sets of --input)")
    p = sub.add_parser("simulate", help="run the distributed protocol simulator")
    _common(p)
    p.add_argument("--delivery", choices=["lockstep", "shuffle"], default="lockstep")
    p = sub.add_parser("verify", help="check distance and homology preservation")
    _common(p)
    p.add_argument("--random", type=int, default=50, help="random graphs to check when --input is absent")
    p = sub.add_parser("generate", help="sample an AGM graph from a JSON spec")
    _common(p)
    p.add_argument("--property3", type=int, metavar="TRIALS", help="also run the domination-frequency test")
    p = sub.add_parser("stability", help="randomized-order collapse realizations")
    _common(p)
    p = sub.add_parser("flowshare", help="share of shortest-path nodes in the core and reference sets")
    _common(p)
    p.add_argument("--all-paths", action="store_true", help="average over all shortest paths of each pair")
    p = sub.add_parser("scatter", help="degree/betweenness/region CSV")
    _common(p)
    p.add_argument("--pivots", type=int, help="sampled betweenness pivots (default: exact)")
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items()}
    return dict(sorted(cfg.items()))


def _report(args, name: str, body: dict) -> None:
    payload = {"tool": {"name": "domcore", "version": __version__}, "config": _config(args)}
    payload.update(body)
    if args.out:
        write_json(Path(args.out) / f"{name}.json", payload)
    else:
        sys.stdout.write(dump_json(payload))


def _ensure_seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
    return args.seed


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(args):
    if not args.input:
        raise InputError("--input is required")
    try:
        g = read_edge_list(args.input, args.nodes)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from None
    if args.drop_isolated == "on":
        g = drop_isolated(g)
    return g


def _variant(args, g) -> DominanceVariant:
    kind = VARIANTS[args.variant]
    if kind == "relation":
        if not args.relations:
            raise InputError("--variant relation needs --relations")
        return DominanceVariant.relation(g, read_relations(args.relations))
    return ONE_HOP_VARIANT if kind == "one-hop" else TWO_HOP_VARIANT


def _policy(args) -> TieBreakPolicy:
    if args.policy == "seeded":
        return TieBreakPolicy("seeded", _ensure_seed(args))
    return TieBreakPolicy()


def _collapse(args):
    g = _load_graph(args)
    variant = _variant(args, g)
    return g, collapse(g, variant, _policy(args))


def cmd_collapse(args) -> int:
    g, cr = _collapse(args)
    out = _out_dir(args)
    write_id_list(out / "core.txt", cr.core_ids(g))
    write_id_list(out / "periphery.txt", cr.periphery_ids(g))
    write_removals(out / "removals.csv", cr.removal_rows(g))
    args.out = str(out)
    _report(args, "stats", {"iterations": cr.iterations, "stats": descriptive_stats(g, cr)})
    return 0


def cmd_communities(args) -> int:
    g, cr = _collapse(args)
    pcs = peripheral_components(g, cr)
    ext = extend_components(g, cr, pcs)
    cs = candidate_sets(g, cr, ext)
    if not cr.periphery:
        print("warning: empty periphery, no candidate sets", file=sys.stderr)
    out = _out_dir(args)
    write_communities(out / "candidates.txt", [c.ids(g) for c in cs])
    args.out = str(out)
    _report(args, "communities", {
        "peripheral_components": len(pcs),
        "non_singleton_components": sum(1 for p in pcs if len(p.members) > 1),
        "candidate_sets": len(cs),
        "interior_core": len(interior_core(g, cr)),
        "core": len(cr.core),
        "periphery": len(cr.periphery),
    })
    return 0


def cmd_evaluate(args) -> int:
    truth_path = args.best_k or args.communities
    if not truth_path:
        raise InputError("evaluate needs --communities or --best-k")
    truth = read_communities(truth_path)
    g = cr = None
    if args.detected:
        detected = read_communities(args.detected, source="detected")
        if args.input:
            g, cr = _collapse(args)
    else:
        g, cr = _collapse(args)
        cs = candidate_sets(g, cr, extend_components(g, cr, peripheral_components(g, cr)))
        detected = CommunitySet("candidates", [c.ids(g) for c in cs], "detected")
    unresolved = {}
    blocks = {}
    if g is not None:
        detected, unresolved["detected"] = detected.restricted_to(g)
        full_truth = truth
        truth, unresolved["truth"] = truth.restricted_to(g)
        blocks["membership_profile"] = membership_profile(g, cr, full_truth)
    blocks["truth_stats"] = community_stats(truth)
    report = match_evaluate(detected, truth)
    report.unresolved = unresolved
    report.blocks = blocks
    _report(args, "evaluation", report.to_dict())
    return 0


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    delivery = "seeded-shuffle" if args.delivery == "shuffle" else "lockstep"
    seed = _ensure_seed(args) if delivery != "lockstep" else args.seed
    trace = simulate(g, _variant(args, g), _policy(args), delivery, seed)
    _report(args, "trace", trace.to_dict(g))
    return 0


def _verdict(g, max_dim) -> dict:
    cr = collapse(g)
    hom = verify_property4(g, cr, max_dim)
    return {
        "nodes": g.node_count,
        "core": len(cr.core),
        "distances_preserved": verify_property1(g, cr),
        "homology_preserved": hom.ok,
        "betti_original": list(hom.original.b),
        "betti_core": list(hom.core.b),
    }


def cmd_verify(args) -> int:
    if args.input:
        g = _load_graph(args)
        results = [_verdict(g, args.max_dim)]
    else:
        seed = _ensure_seed(args)
        results = []
        for i in range(args.random):
            n = 4 + i % 12
            p = (0.2, 0.3, 0.5)[i % 3]
            results.append(_verdict(erdos_renyi(n, p, seed + i), args.max_dim))
    ok = all(r["distances_preserved"] and r["homology_preserved"] for r in results)
    _report(args, "verify", {"all_true": ok, "graphs": results})
    return 0


def cmd_generate(args) -> int:
    if not args.input:
        raise InputError("generate needs --input SPEC.json")
    try:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read AGM spec {args.input}: {exc}") from None
    spec = AgmSpec.from_dict(data)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    else:
        args.seed = spec.seed
    sample = generate(spec)
    out = _out_dir(args)
    write_edge_list(sample.graph, out / "edges.txt")
    write_id_list(out / "nodes.txt", sample.graph.external_ids)
    write_communities(out / "communities.txt", sample.truth.sets)
    body = {
        "spec": spec.to_dict(),
        "realized_epsilon": sample.realized_epsilon,
        "nodes": sample.graph.node_count,
        "edges": sample.graph.edge_count,
    }
    if args.property3:
        body["property3"] = property3_test(spec, args.property3)
    args.out = str(out)
    _report(args, "sample", body)
    return 0


def cmd_stability(args) -> int:
    g = _load_graph(args)
    seed = _ensure_seed(args)
    rep = stability_analysis(g, _variant(args, g), args.realizations, seed)
    _report(args, "stability", rep.to_dict(g))
    return 0


def cmd_flowshare(args) -> int:
    g, cr = _collapse(args)
    seed = _ensure_seed(args)
    res = shortest_path_share(g, cr, args.pairs, seed, all_paths=args.all_paths, workers=args.threads)
    _report(args, "flowshare", res)
    return 0


def cmd_scatter(args) -> int:
    g, cr = _collapse(args)
    if args.pivots:
        bc = betweenness(g, k=args.pivots, seed=_ensure_seed(args), workers=args.threads)
    else:
        bc = betweenness(g, workers=args.threads)
    out = _out_dir(args)
    write_scatter(out / "scatter.csv", bc_degree_rows(g, cr, bc.values))
    args.out = str(out)
    _report(args, "scatter", {"betweenness": "exact" if bc.exact else "sampled", "clamped": bc.clamped})
    return 0


COMMANDS = {
    "collapse": cmd_collapse,
    "communities": cmd_communities,
    "evaluate": cmd_evaluate,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "generate": cmd_generate,
    "stability": cmd_stability,
    "flowshare": cmd_flowshare,
    "scatter": cmd_scatter,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except DomcoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ContractError.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
