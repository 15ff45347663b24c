"""Command-line interface: instance generation, spanner runs, exact solves,
ILP export, and the benchmark harness."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .bench import (
    ALGO_BUDGETS,
    ExperimentPlan,
    make_solver,
    read_rows_csv,
    run_plan,
    summarize,
    summary_to_csv,
)
from .core import (
    BudgetMode,
    ErrorBudget,
    build_path_table,
    parse_graph_text,
    terminal_pairs,
    verify_spanner,
    write_graph_text,
    WeightedGraph,
)
from .exact import SizeCapExceeded, SizeCaps, build_ilp, emit_lp, exact_optimum
from .generate import (
    GeneratorSpec,
    Model,
    TerminalScheme,
    TerminalSelection,
    generate,
    generate_terminals,
    parse_terminals_text,
    write_terminals_text,
)
from .multilevel import MultiLevelInstance, multilevel_naive, multilevel_roundup
from .pairwise import PairwiseAlgo, PairwiseParams, advertised_budget, pairwise_spanner_run
from .subsetwise import subsetwise_2w_run


def _load_graph(path: str) -> WeightedGraph:
    return parse_graph_text(Path(path).read_text(encoding="utf-8"))


def _load_terminals(path: str):
    return parse_terminals_text(Path(path).read_text(encoding="utf-8"))


def _edges_graph(g: WeightedGraph, edges) -> WeightedGraph:
    picked = tuple((u, v, g.weight(u, v)) for u, v in sorted(edges))
    return WeightedGraph(g.n, picked)


def _cmd_gen(args) -> int:
    spec = GeneratorSpec(Model(args.model), args.n, args.seed,
                         weight_range=(args.weight_lo, args.weight_hi))
    g = generate(spec)
    sets = generate_terminals(args.n, TerminalSelection(TerminalScheme(args.tsm),
                                                        args.levels, args.seed))
    if args.out:
        Path(f"{args.out}.graph").write_text(write_graph_text(g), encoding="utf-8")
        Path(f"{args.out}.terminals").write_text(write_terminals_text(sets), encoding="utf-8")
        print(f"wrote {args.out}.graph ({g.n} vertices, {len(g.edges)} edges) "
              f"and {args.out}.terminals ({len(sets)} levels)")
    else:
        sys.stdout.write(write_graph_text(g))
        sys.stdout.write(write_terminals_text(sets))
    return 0


def _cmd_spanner(args) -> int:
    g = _load_graph(args.graph)
    sets = _load_terminals(args.terminals)
    if not 1 <= args.level <= len(sets):
        raise SystemExit(f"level {args.level} out of range 1..{len(sets)}")
    terminals = sets[args.level - 1]
    pt = build_path_table(g)
    if args.algo == "sub2w":
        state = subsetwise_2w_run(g, terminals, pt)
        edges = state.current_edges
        budget = ALGO_BUDGETS["sub2w"]
        report = {
            "algorithm": "sub2w",
            "buy_audit": [{"pair": list(r.pair), "cost": r.cost, "value": r.value,
                           "bought": r.bought} for r in state.records],
        }
    else:
        params = PairwiseParams(PairwiseAlgo(args.algo), d_override=args.d,
                                max_retries=args.retries, seed=args.seed)
        edges, run = pairwise_spanner_run(g, terminal_pairs(terminals), params, pt)
        budget = advertised_budget(params)
        report = {"algorithm": args.algo} | dataclasses.asdict(run)
    violated = verify_spanner(g, edges, terminal_pairs(terminals), budget, pt)
    report["valid"] = not violated
    report["edges"] = len(edges)
    text = write_graph_text(_edges_graph(g, edges))
    if args.out:
        Path(f"{args.out}.graph").write_text(text, encoding="utf-8")
        Path(f"{args.out}.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {args.out}.graph ({len(edges)} edges) and {args.out}.json")
    else:
        sys.stdout.write(text)
        print(json.dumps(report, indent=2))
    return 0 if report["valid"] else 1


def _cmd_multilevel(args) -> int:
    g = _load_graph(args.graph)
    sets = _load_terminals(args.terminals)
    pt = build_path_table(g)
    budget = ALGO_BUDGETS[args.algo]
    inst = MultiLevelInstance(g, tuple(frozenset(s) for s in sets), budget)
    solver = make_solver(args.algo, args.seed)
    strategy = multilevel_roundup if args.strategy == "roundup" else multilevel_naive
    spanner = strategy(inst, solver, pt)
    summary = {
        "algorithm": args.algo,
        "strategy": args.strategy,
        "levels": inst.levels,
        "level_sizes": [len(e) for e in spanner.level_edges],
        "sparsity": spanner.sparsity,
    }
    if args.out:
        for k, edges in enumerate(spanner.level_edges, start=1):
            Path(f"{args.out}.level{k}.graph").write_text(
                write_graph_text(_edges_graph(g, edges)), encoding="utf-8")
        Path(f"{args.out}.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {inst.levels} level files and {args.out}.json (sparsity {spanner.sparsity})")
    else:
        print(json.dumps(summary, indent=2))
    return 0


def _cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    sets = _load_terminals(args.terminals)
    budget = ErrorBudget(BudgetMode(args.mode), args.c)
    inst = MultiLevelInstance(g, tuple(frozenset(s) for s in sets), budget)
    caps = SizeCaps(args.cap_single, args.cap_multi)
    try:
        spanner = exact_optimum(inst, build_path_table(g), caps)
    except SizeCapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"sparsity": spanner.sparsity,
                      "level_sizes": [len(e) for e in spanner.level_edges]}, indent=2))
    return 0


def _cmd_emit_ilp(args) -> int:
    g = _load_graph(args.graph)
    sets = _load_terminals(args.terminals)
    budget = ErrorBudget(BudgetMode(args.mode), args.c)
    inst = MultiLevelInstance(g, tuple(frozenset(s) for s in sets), budget)
    text = emit_lp(build_ilp(inst, build_path_table(g)))
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _cmd_run(args) -> int:
    plan = ExperimentPlan.from_json(Path(args.plan).read_text(encoding="utf-8"))
    rows = run_plan(plan, out_dir=args.out, workers=args.workers)
    print(f"{len(rows)} rows -> {args.out}/rows.csv")
    return 0


def _cmd_summarize(args) -> int:
    rows = read_rows_csv(args.infile)
    text = summary_to_csv(summarize(rows, args.group))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wspanner",
                                     description="Weighted additive spanner toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded instance (graph + terminal levels)")
    p.add_argument("--model", choices=[m.value for m in Model], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--tsm", choices=[t.value for t in TerminalScheme], default="linear")
    p.add_argument("--weight-lo", type=int, default=1)
    p.add_argument("--weight-hi", type=int, default=10)
    p.add_argument("--out", help="output prefix (writes PREFIX.graph and PREFIX.terminals)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("spanner", help="run one construction on one terminal level")
    p.add_argument("--algo", choices=sorted(ALGO_BUDGETS), required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=None, help="override the d-light parameter")
    p.add_argument("--retries", type=int, default=10)
    p.add_argument("--out", help="output prefix (writes PREFIX.graph and PREFIX.json)")
    p.set_defaults(func=_cmd_spanner)

    p = sub.add_parser("multilevel", help="run a multi-level construction")
    p.add_argument("--algo", choices=sorted(ALGO_BUDGETS), required=True)
    p.add_argument("--strategy", choices=["roundup", "naive"], default="roundup")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output prefix (per-level graphs plus PREFIX.json)")
    p.set_defaults(func=_cmd_multilevel)

    p = sub.add_parser("exact", help="exact minimum sparsity (size-capped brute force)")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--mode", choices=[m.value for m in BudgetMode], default="global")
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--cap-single", type=int, default=20)
    p.add_argument("--cap-multi", type=int, default=14)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("emit-ilp", help="write the ILP in LP text format")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--mode", choices=[m.value for m in BudgetMode], default="global")
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_emit_ilp)

    p = sub.add_parser("run", help="execute an experiment plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None,
                   help="parallel instances (default: WSPANNER_WORKERS or 1)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("summarize", help="aggregate a rows.csv for plotting")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--group", choices=["n", "l", "tsm"], default="n")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_summarize)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
