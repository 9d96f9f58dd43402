"""Command-line entry point: ``pebblemotion <subcommand>``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

import numpy as np

from .bench import loglog_slope, run_bench, write_csv
from .contraction import contract, prepare_occupancy
from .decision import decide, decide_split
from .decomposition import GraphAnalysis
from .equivalence import tree_classes
from .generate import MODELS, generate_instance
from .graph import ErrorCode, PebbleError, PmgInstance, PpgInstance, dump_instance, parse_record, validate_instance
from .oracle import DEFAULT_CAP, oracle_orbit, oracle_search
from .reduction import reduce_instance

EXIT_FEASIBLE, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 already; keep the diagnostic terse
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> PmgInstance:
    return validate_instance(_read(path))


def _emit(obj: Any) -> None:
    print(json.dumps(obj))


def _seed(args: argparse.Namespace) -> int:
    env = os.environ.get("PEBBLE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise PebbleError(ErrorCode.BAD_PARAMS, f"PEBBLE_SEED={env!r} is not an integer") from None
    return args.seed


def cmd_check(args: argparse.Namespace) -> int:
    text = _read(args.path)
    try:
        report = decide(validate_instance(text))
    except PebbleError as exc:
        if exc.code is not ErrorCode.DISCONNECTED:
            raise
        n, edges, start, goal = parse_record(text)
        report = decide_split(n, edges, start, goal)
    if args.report == "json":
        _emit(report.to_json())
    else:
        verdict = "feasible" if report.feasible else "infeasible"
        print(f"{verdict} ({report.rule.value})")
    return EXIT_FEASIBLE if report.feasible else EXIT_INFEASIBLE


def cmd_reduce(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    r = reduce_instance(inst)
    _emit(
        {
            "start": r.new_start.positions.tolist(),
            "pi": r.pi.image.tolist(),
            "goal": inst.goal.positions.tolist(),
            "spanning_tree": inst.graph.edges[r.spanning_tree].tolist(),
            "queue_ops": r.queue_ops,
        }
    )
    return 0


def cmd_contract(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    a = GraphAnalysis(inst.graph)
    r = reduce_instance(inst, a)
    ppg = prepare_occupancy(PpgInstance(inst.graph, r.new_start, r.pi), a)
    c = contract(ppg, a)
    _emit(
        {
            "n": c.tree.n,
            "edges": c.tree.edge_list(),
            "start": c.start.positions.tolist(),
            "groups": [list(grp) for grp in c.pebble_groups],
            "prepared_start": ppg.start.positions.tolist(),
        }
    )
    return 0


def cmd_classes(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    if inst.graph.is_tree():
        classes = tree_classes(inst.graph, inst.start)
    else:
        # classes of the start configuration: decide the start against itself
        report = decide(PmgInstance(inst.graph, inst.start, inst.start))
        classes = report.classes
        if classes is None:
            raise PebbleError(ErrorCode.NOT_APPLICABLE, f"no class structure under rule {report.rule.value}")
    _emit({"classes": [list(c) for c in classes.classes]})
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    a = GraphAnalysis(inst.graph)
    d = a.decomposition
    g = inst.graph
    _emit(
        {
            "class": a.tag.value,
            "bipartite": a.graph_class.bipartite,
            "bridges": g.edges[d.bridge_flags].tolist(),
            "mtec": d.mtec_id.tolist(),
            "mtec_sizes": d.mtec_sizes.tolist(),
            "n_m": d.n_m,
            "articulation": np.flatnonzero(d.articulation).tolist(),
            "blocks": d.bicomp_id.tolist(),
        }
    )
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    res = oracle_search(inst, args.cap)
    orbit = len(oracle_orbit(inst.graph, inst.start, args.cap))
    _emit({"feasible": res.reachable, "orbit_size": orbit, "expansions": res.expansions})
    return EXIT_FEASIBLE if res.reachable else EXIT_INFEASIBLE


def cmd_gen(args: argparse.Namespace) -> int:
    inst = generate_instance(args.n, args.p, args.model, _seed(args))
    text = dump_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _sizes(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PebbleError(ErrorCode.BAD_PARAMS, f"bad size list {text!r}") from None


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _sizes(args.sizes)
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        records = run_bench(sizes, args.per_size, args.model, _seed(args), args.fill)
        write_csv(records, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if len(set(sizes)) >= 2:
        print(f"slope {loglog_slope(records):.3f}", file=sys.stderr if fh is sys.stdout else sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pebblemotion", description="Feasibility of labeled pebble motion on graphs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("check", help="decide an instance file (exit 0 feasible, 1 infeasible, 2 invalid)")
    sp.add_argument("path")
    sp.add_argument("--report", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_check)

    for name, func, text in (
        ("reduce", cmd_reduce, "move the start onto the goal's vertex set"),
        ("contract", cmd_contract, "contract 2-edge-connected components into a tree instance"),
        ("classes", cmd_classes, "exchange classes of the start configuration"),
        ("decompose", cmd_decompose, "bridges, MTECs, blocks and graph class"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("path")
        sp.set_defaults(func=func)

    sp = sub.add_parser("oracle", help="exhaustive search (small instances)")
    sp.add_argument("path")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="write a random instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--model", choices=MODELS, default="random_connected")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="time decide over growing instances")
    sp.add_argument("--sizes", default="10000,30000,100000,300000,1000000")
    sp.add_argument("--per-size", type=int, default=5)
    sp.add_argument("--model", choices=MODELS, default="random_connected")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fill", type=float, default=0.5, help="pebbles as a fraction of vertices")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PebbleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
