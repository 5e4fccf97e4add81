"""Command-line interface.

Subcommands: classify, label, route, cover, radius, plan,
construct-perfect, simulate.  Reports are printed as text by default, or
as schema-stable JSON (--json) / CSV (--csv).  Exit codes: 0 success,
2 input error, 3 infeasible request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .codes import LinearCode, load_code
from .covering import (
    CoveringSet,
    construct_perfect,
    covering_set,
    plan_transmission,
    radius as covering_radius,
    size_bounds,
)
from .efficiency import EfficiencyClass, expected_hamming, network_report
from .labeling import (
    Labeling,
    SpanningTree,
    assign_labels,
    is_super_efficient,
    next_hop,
    parent_label,
    route as tree_route,
    trim_label,
)
from .network import (
    CodedNetwork,
    InfeasibleError,
    Path,
    SocialNetwork,
    load_edge_list,
    parse_probability,
)
from .simulate import (
    ChannelModel,
    estimate_expected_hamming,
    protocol_stats,
    simulate_path,
    simulate_protocol,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3

SEED_ENV = "CODEDNET_SEED"


# ---------------------------------------------------------------------------
# Ingestion


def ingest_network(path: str):
    """Edge-list file -> (SocialNetwork, per-edge probabilities found)."""
    return load_edge_list(path)


def ingest_code(path: str) -> tuple[LinearCode, list[str]]:
    """Code file -> LinearCode plus any advisory warnings."""
    code = load_code(path)
    warnings = []
    if code.min_distance == 1:
        warnings.append("minimum distance is 1: this code cannot correct errors")
    return code, warnings


def _build_csn(net: SocialNetwork, code: LinearCode, file_probs, global_p) -> CodedNetwork:
    probs = {}
    for e in net.edges:
        if e in file_probs:
            probs[e] = file_probs[e]
        elif global_p is not None:
            probs[e] = global_p
        else:
            raise ValueError(f"edge {e[0]!r}-{e[1]!r} has no probability; pass --p")
    return CodedNetwork(net, code, probs)


def _load_csn(args) -> tuple[CodedNetwork, list[str]]:
    net, file_probs = ingest_network(args.network)
    code, warnings = ingest_code(args.code)
    global_p = parse_probability(args.p) if args.p is not None else None
    return _build_csn(net, code, file_probs, global_p), warnings


# ---------------------------------------------------------------------------
# Rendering


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, EfficiencyClass):
        return x.label
    if isinstance(x, Path):
        return list(x.vertices)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    return x


def _prob_fields(value):
    """(float, exact string or None) pair for a probability-like number."""
    if isinstance(value, Fraction):
        return float(value), str(value)
    return float(value), None


def _word_str(word, q: int) -> str:
    sep = "" if q <= 10 else ","
    return sep.join(str(s) for s in word)


def make_report(command: str, inputs: dict, results: dict, warnings=()) -> dict:
    return {
        "tool": "codednet",
        "version": __version__,
        "command": command,
        "inputs": _jsonable(inputs),
        "results": _jsonable(results),
        "warnings": list(warnings),
    }


def _flatten(prefix: str, value, rows: list[tuple[str, str]]):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        rows.append((prefix, ";".join(json.dumps(_jsonable(v)) for v in value)))
    else:
        rows.append((prefix, "" if value is None else str(value)))


def emit(report: dict, args, text_lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    if getattr(args, "csv", False):
        out = io.StringIO()
        writer = csv.writer(out)
        results = report["results"]
        if report["command"] == "classify" and results.get("per_length"):
            writer.writerow(["length", "per_symbol", "expected", "class"])
            for row in results["per_length"]:
                writer.writerow(
                    [row["length"], row["per_symbol"], row["expected"], row["class"]]
                )
        else:
            rows: list[tuple[str, str]] = []
            _flatten("", results, rows)
            writer.writerow(["key", "value"])
            writer.writerows(rows)
        sys.stdout.write(out.getvalue())
        return
    for line in text_lines:
        print(line)
    for w in report["warnings"]:
        print(f"warning: {w}")
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%SZ")
    print(f"# codednet {__version__} | {report['command']} | {stamp}")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_classify(args) -> tuple[dict, list[str], int]:
    csn, warnings = _load_csn(args)
    rep = network_report(csn)
    code = csn.code
    results: dict = {
        "code": {
            "q": code.q,
            "n": code.n,
            "k": code.k,
            "d": code.min_distance,
            "detect": code.detect_capacity,
            "correct": code.correct_capacity,
        },
        "critical_value": rep.critical_value,
        "constant_p": csn.constant_p is not None,
        "network_class": rep.classification,
    }
    lines = [
        f"code: [{code.n},{code.k},{code.min_distance}]_{code.q} "
        f"(detects {code.detect_capacity}, corrects {code.correct_capacity})",
        f"critical value: {rep.critical_value}",
    ]
    if rep.per_length is not None:
        table = []
        for row in rep.per_length:
            per_f, per_x = _prob_fields(row.per_symbol)
            exp_f, exp_x = _prob_fields(row.expected)
            table.append(
                {
                    "length": row.length,
                    "per_symbol": per_f,
                    "per_symbol_exact": per_x,
                    "expected": exp_f,
                    "expected_exact": exp_x,
                    "class": row.classification,
                }
            )
            shown = per_x or f"{per_f:.6g}"
            shown_e = exp_x or f"{exp_f:.6g}"
            lines.append(
                f"  length {row.length}: per-symbol {shown}, expected {shown_e}"
                f" -> {row.classification.label}"
            )
        results["per_length"] = table
    else:
        results["worst_pair"] = list(rep.worst_pair) if rep.worst_pair else None
        if rep.worst_pair:
            lines.append(f"worst pair: {rep.worst_pair[0]} - {rep.worst_pair[1]}")
    results["network_class"] = rep.classification
    lines.append(f"network class: {rep.classification.label}")
    inputs = {"network": args.network, "code": args.code, "p": args.p}
    return make_report("classify", inputs, results, warnings), lines, EXIT_OK


def _parse_tree_arg(text: str) -> list[tuple[str, str]]:
    edges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ">" not in part:
            raise ValueError(f"tree edge {part!r} must look like parent>child")
        parent, _, child = part.partition(">")
        edges.append((parent.strip(), child.strip()))
    if not edges:
        raise ValueError("empty tree specification")
    return edges


def _resolve_labeling(args) -> tuple[Labeling, SocialNetwork, dict]:
    net, file_probs = ingest_network(args.network)
    info: dict = {}
    if args.tree:
        tree = SpanningTree.from_edges(_parse_tree_arg(args.tree), root=args.root)
        for parent, child in tree.edge_list:
            if not net.has_edge(parent, child):
                raise ValueError(f"tree edge {parent!r}-{child!r} is not a network edge")
        if len(tree) != len(net):
            raise ValueError("tree does not span the network")
        info["tree_source"] = "explicit"
    elif args.root:
        tree = SpanningTree.bfs(net, args.root)
        info["tree_source"] = "bfs"
    else:
        if args.code is None or args.p is None:
            raise ValueError("without --tree or --root, pass --code and --p to search for one")
        code, _ = ingest_code(args.code)
        csn = _build_csn(net, code, file_probs, parse_probability(args.p))
        ok, tree = is_super_efficient(csn)
        if not ok or tree is None:
            raise InfeasibleError("network is not super-efficient; no efficient spanning tree")
        info["tree_source"] = "super-efficiency search"
    q = args.q
    if args.code is not None:
        q = ingest_code(args.code)[0].q
    return assign_labels(tree, q), net, info


def _cmd_label(args) -> tuple[dict, list[str], int]:
    lab, net, info = _resolve_labeling(args)
    tree = lab.tree
    results = {
        "root": tree.root,
        "tree_edges": [list(e) for e in tree.edge_list],
        "label_length": lab.length,
        "q": lab.q,
        "labels": {v: _word_str(lab.labels[v], lab.q) for v in sorted(lab.labels)},
        "image": [_word_str(w, lab.q) for w in lab.image()],
        **info,
    }
    lines = [f"root: {tree.root}", f"label length: {lab.length}"]
    for v in tree.bfs_order():
        lines.append(f"  {v}: {_word_str(lab.labels[v], lab.q)}")
    inputs = {"network": args.network, "tree": args.tree, "root": args.root}
    return make_report("label", inputs, results), lines, EXIT_OK


def _cmd_route(args) -> tuple[dict, list[str], int]:
    lab, net, info = _resolve_labeling(args)
    src, dst = args.frm, args.to
    steps = []
    hops = [src]
    target_chain = [trim_label(lab.label(dst))]
    while target_chain[-1]:
        target_chain.append(parent_label(target_chain[-1]))
    while hops[-1] != dst:
        here = hops[-1]
        action = "descend" if trim_label(lab.label(here)) in target_chain else "ascend"
        nxt = next_hop(lab, here, dst)
        steps.append(
            {
                "at": here,
                "label": _word_str(lab.label(here), lab.q),
                "target_label": _word_str(lab.label(dst), lab.q),
                "action": action,
                "next": nxt,
                "next_label": _word_str(lab.label(nxt), lab.q),
            }
        )
        hops.append(nxt)
    results = {"from": src, "to": dst, "hops": hops, "steps": steps, **info}
    lines = [f"route {src} -> {dst}: " + " -> ".join(hops)]
    for s in steps:
        lines.append(
            f"  at {s['at']} [{s['label']}] {s['action']} to {s['next']} [{s['next_label']}]"
        )
    inputs = {"network": args.network, "from": src, "to": dst, "tree": args.tree}
    return make_report("route", inputs, results), lines, EXIT_OK


def _covering_results(cs: CoveringSet) -> dict:
    cov = cs.covering
    return {
        "centers": list(cs.centers),
        "radius_param": cs.radius_param,
        "density": cs.density,
        "dimension": cs.dimension,
        "dimension_exact": cs.dimension_exact,
        "flags": {
            "is_covering": cov.is_covering,
            "is_reachable": cov.is_reachable,
            "is_efficient": cov.is_efficient,
            "is_perfect": cov.is_perfect,
        },
        "members": [sorted(m) for m in cov.members],
    }


def _cmd_cover(args) -> tuple[dict, list[str], int]:
    csn, warnings = _load_csn(args)
    cs = covering_set(csn, args.r)
    inputs = {"network": args.network, "code": args.code, "p": args.p, "r": args.r}
    if cs is None:
        report = make_report("cover", inputs, {"covering": None}, warnings)
        return report, [f"no efficient covering with radius {args.r}"], EXIT_INFEASIBLE
    results = _covering_results(cs)
    lines = [
        f"centers ({len(cs.centers)}): " + " ".join(cs.centers),
        f"density: {cs.density}   dimension: {cs.dimension}"
        + ("" if cs.dimension_exact else " (heuristic)"),
        "flags: covering={is_covering} reachable={is_reachable} "
        "efficient={is_efficient} perfect={is_perfect}".format(**results["flags"]),
    ]
    return make_report("cover", inputs, results, warnings), lines, EXIT_OK


def _cmd_radius(args) -> tuple[dict, list[str], int]:
    csn, warnings = _load_csn(args)
    r = covering_radius(csn)
    diagnostic = None if r > 0 else "no radius admits an efficient covering"
    results = {
        "radius": r,
        "critical_value": csn.critical_value(),
        "diagnostic": diagnostic,
    }
    lines = [f"radius: {r}"] + ([diagnostic] if diagnostic else [])
    inputs = {"network": args.network, "code": args.code, "p": args.p}
    return make_report("radius", inputs, results, warnings), lines, EXIT_OK


def _cmd_plan(args) -> tuple[dict, list[str], int]:
    csn, warnings = _load_csn(args)
    cs = covering_set(csn, args.r)
    inputs = {
        "network": args.network,
        "code": args.code,
        "p": args.p,
        "r": args.r,
        "from": args.frm,
        "to": args.to,
    }
    if cs is None:
        report = make_report("plan", inputs, {"plan": None}, warnings)
        return report, [f"no efficient covering with radius {args.r}"], EXIT_INFEASIBLE
    plan = plan_transmission(cs.covering, args.frm, args.to)
    legs = []
    for member, a, b in plan.leg_endpoints():
        lab = cs.covering.member_labelings[member]
        assert lab is not None
        from .labeling import route as tree_route

        legs.append({"member": member, "route": list(tree_route(lab, a, b).vertices)})
    results = {
        "from": plan.source,
        "to": plan.target,
        "member_sequence": list(plan.member_sequence),
        "handoffs": list(plan.handoffs),
        "correction_points": list(plan.correction_points),
        "legs": legs,
        "centers": list(cs.centers),
    }
    lines = [
        f"members: {' -> '.join(str(m) for m in plan.member_sequence)}",
        f"handoffs: {' '.join(plan.handoffs) if plan.handoffs else '(none)'}",
        f"corrections at: {' '.join(plan.correction_points)}",
    ]
    for leg in legs:
        lines.append(f"  member {leg['member']}: " + " -> ".join(leg["route"]))
    return make_report("plan", inputs, results, warnings), lines, EXIT_OK


def _cmd_construct_perfect(args) -> tuple[dict, list[str], int]:
    code, warnings = ingest_code(args.code)
    p = parse_probability(args.p)
    periphery: list[tuple[str, str]] = []
    if args.periphery:
        with open(args.periphery, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t") if "\t" in line else line.split()
                if len(fields) < 2:
                    raise ValueError(f"{args.periphery}:{lineno}: expected 2 fields")
                periphery.append((fields[0], fields[1]))
    csn, cs = construct_perfect(args.hubs, args.k, periphery, code=code, p=p)
    lower, upper = size_bounds(cs.dimension, cs.radius_param, cs.density)
    edge_rows = sorted(csn.graph.edges)
    results = {
        "vertex_count": len(csn.graph),
        "edge_count": len(edge_rows),
        "edges": [list(e) for e in edge_rows],
        "size_bounds": {"lower": lower, "upper": upper},
        **_covering_results(cs),
    }
    if args.out_edges:
        from .network import format_edge_list

        with open(args.out_edges, "w", encoding="utf-8") as fh:
            fh.write(format_edge_list(csn.graph))
    lines = [
        f"vertices: {len(csn.graph)}   edges: {len(edge_rows)}",
        f"centers: {' '.join(cs.centers)}   density: {cs.density}",
        f"size bounds: {lower} <= {len(csn.graph)} <= {upper}",
    ]
    if not args.json and not args.csv and not args.out_edges:
        lines.append("edge list:")
        lines.extend(f"  {u}\t{v}" for u, v in edge_rows)
    inputs = {
        "hubs": args.hubs,
        "k": args.k,
        "periphery": args.periphery,
        "code": args.code,
        "p": args.p,
    }
    return make_report("construct-perfect", inputs, results, warnings), lines, EXIT_OK


def _trace_payload(trace, q: int) -> dict:
    return {
        "sent": _word_str(trace.sent, q),
        "received": [_word_str(w, q) for w in trace.received],
        "corrections": [[v, c] for v, c in trace.corrections],
        "decoded_message": _word_str(trace.decoded_message, q),
        "final_hamming": trace.final_hamming,
        "success": trace.success,
    }


def _cmd_simulate(args) -> tuple[dict, list[str], int]:
    csn, warnings = _load_csn(args)
    code = csn.code
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, "0"))
    message = (
        code.field.check_word([int(x) for x in args.message.split(",")], code.k)
        if args.message
        else (0,) * code.k
    )
    inputs = {
        "network": args.network,
        "code": args.code,
        "p": args.p,
        "trials": args.trials,
        "seed": seed,
        "message": _word_str(message, code.q),
    }
    traces = []
    if args.path:
        verts = tuple(v.strip() for v in args.path.split(","))
        path = Path(verts)
        path.validate(csn.graph)
        stats = estimate_expected_hamming(csn, path, args.trials, seed)
        analytic = float(expected_hamming(csn, path))
        mode: dict = {"mode": "path", "path": list(verts)}
        channel = ChannelModel(q=code.q, seed=seed)
        for i in range(min(args.trace, args.trials)):
            traces.append(_trace_payload(simulate_path(csn, path, message, channel, i), code.q))
    elif args.plan:
        if args.frm is None or args.to is None or args.r is None:
            raise ValueError("--plan needs --from, --to and --r")
        cs = covering_set(csn, args.r)
        if cs is None:
            report = make_report("simulate", inputs, {"plan": None}, warnings)
            return report, [f"no efficient covering with radius {args.r}"], EXIT_INFEASIBLE
        plan = plan_transmission(cs.covering, args.frm, args.to)
        stats = protocol_stats(
            csn, plan, cs.covering.member_labelings, message, args.trials, seed
        )
        analytic = None
        mode = {
            "mode": "plan",
            "from": args.frm,
            "to": args.to,
            "r": args.r,
            "correction_points": list(plan.correction_points),
        }
        channel = ChannelModel(q=code.q, seed=seed)
        for i in range(min(args.trace, args.trials)):
            traces.append(
                _trace_payload(
                    simulate_protocol(
                        csn, plan, cs.covering.member_labelings, message, channel, i
                    ),
                    code.q,
                )
            )
    else:
        raise ValueError("pass --path or --plan")
    results = {
        **mode,
        "trials": stats.trials,
        "seed": seed,
        "mean_hamming": stats.mean_hamming,
        "std_error": stats.std_error,
        "decode_success_rate": stats.decode_success_rate,
        "analytic_expected": analytic,
        "traces": traces,
    }
    lines = [
        f"trials: {stats.trials}   seed: {seed}",
        f"mean hamming: {stats.mean_hamming:.6f} +/- {stats.std_error:.6f} (std err)",
        f"decode success rate: {stats.decode_success_rate:.6f}",
    ]
    if analytic is not None:
        lines.append(f"analytic expectation: {analytic:.6f}")
    return make_report("simulate", inputs, results, warnings), lines, EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="codednet",
        description="Coded social networks: efficiency, routing, coverings, simulation.",
    )
    ap.add_argument("--version", action="version", version=f"codednet {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def io_args(sp, *, code_required=True):
        sp.add_argument("--network", required=True, help="edge-list file")
        sp.add_argument("--code", required=code_required, help="code specification file")
        sp.add_argument("--p", help="global edge error probability (ratio like 3/4, or decimal)")
        sp.add_argument("--json", action="store_true", help="machine-readable JSON report")
        sp.add_argument("--csv", action="store_true", help="CSV report")

    sp = sub.add_parser("classify", help="classify the network's efficiency")
    io_args(sp)
    sp.set_defaults(func=_cmd_classify)

    for name, helptext in (("label", "emit the spanning-tree label table"),
                           ("route", "route between two vertices via labels")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--network", required=True)
        sp.add_argument("--code", help="code file (supplies q; needed for tree search)")
        sp.add_argument("--p", help="edge error probability for the tree search")
        sp.add_argument("--q", type=int, default=2, help="label field order when no code given")
        sp.add_argument("--tree", help="explicit tree as parent>child pairs: 6>4,4>3,...")
        sp.add_argument("--root", help="root vertex (BFS tree when --tree absent)")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--csv", action="store_true")
        if name == "route":
            sp.add_argument("--from", dest="frm", required=True)
            sp.add_argument("--to", required=True)
            sp.set_defaults(func=_cmd_route)
        else:
            sp.set_defaults(func=_cmd_label)

    sp = sub.add_parser("cover", help="find a covering set of a given radius")
    io_args(sp)
    sp.add_argument("--r", type=int, required=True, help="ball radius")
    sp.set_defaults(func=_cmd_cover)

    sp = sub.add_parser("radius", help="largest radius admitting a covering set")
    io_args(sp)
    sp.set_defaults(func=_cmd_radius)

    sp = sub.add_parser("plan", help="plan a covering-based transmission")
    io_args(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--from", dest="frm", required=True)
    sp.add_argument("--to", required=True)
    sp.set_defaults(func=_cmd_plan)

    sp = sub.add_parser("construct-perfect", help="build a perfect hub-and-chain network")
    sp.add_argument("--hubs", type=int, required=True, help="number of hub vertices")
    sp.add_argument("--k", type=int, required=True, help="ball radius of the covering")
    sp.add_argument("--periphery", help="edge-list file of extra vertices to attach")
    sp.add_argument("--code", required=True)
    sp.add_argument("--p", required=True)
    sp.add_argument("--out-edges", help="write the edge list to this file")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=_cmd_construct_perfect)

    sp = sub.add_parser("simulate", help="Monte Carlo simulation of a path or plan")
    io_args(sp)
    sp.add_argument("--path", help="comma-separated vertex sequence")
    sp.add_argument("--plan", action="store_true", help="simulate a covering-based plan")
    sp.add_argument("--from", dest="frm")
    sp.add_argument("--to")
    sp.add_argument("--r", type=int)
    sp.add_argument("--message", help="comma-separated message symbols (default: zero)")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, help=f"PRNG seed (default: ${SEED_ENV} or 0)")
    sp.add_argument("--trace", type=int, default=0, help="include the first K full traces")
    sp.set_defaults(func=_cmd_simulate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, lines, status = args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(report, args, lines)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
