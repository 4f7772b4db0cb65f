"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 invalid instance, 3 solver refusal.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import counts, generators
from .games import (MODES, solve_one_player_binary, solve_one_player_integer, solve_one_player_variant,
                    solve_two_player_binary, solve_two_player_integer, strategy_names)
from .graph import is_simple, is_stopping, is_tree_like, validate
from .instance import Instance, InstanceError, check_instance, parse_instance, serialize_instance
from .oracle import exit_by_simulation
from .pathgraph import PathInstance, class_after_routing, exit_pattern_path, multi_particle_outcome, n1, r0_r1
from .returnflow import NotTreeLike, compute_destination_forest, flows_from_start, routine_calls_per_vertex
from .walk import NonStoppingError, ParticleState, destination_forest_by_pushing, exit_pattern_from_acyclic, run_maximal_walk

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_REFUSED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Refusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load(path: str) -> Instance:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InstanceError([]) from e
    inst = parse_instance(text)
    for w in inst.warnings:
        print(str(w), file=sys.stderr)
    return inst


def _vertex(inst: Instance, name: str | None) -> int:
    if name is None:
        if inst.start is None:
            raise UsageError("no start vertex: pass --start or add a start line")
        return inst.start
    if name not in inst.graph.index:
        raise UsageError(f"unknown vertex {name!r}")
    return inst.graph.index[name]


def _emit(args, query: dict, result: dict, witness=None, counters=None, text: str | None = None) -> None:
    if args.json:
        doc = {"schema": SCHEMA_VERSION, "instance": getattr(args, "file", None), "query": query, "result": result}
        if witness is not None:
            doc["witness"] = witness
        doc["counters"] = counters or {}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text if text is not None else "\n".join(f"{k}: {v}" for k, v in result.items()))


def _require_tree(inst: Instance) -> None:
    if not is_tree_like(inst.graph):
        raise Refusal("graph is not tree-like; use `simulate` instead")


# -- subcommands ------------------------------------------------------

def cmd_validate(args) -> int:
    inst = _load(args.file)
    errs = check_instance(inst)
    g = inst.graph
    result = {"ok": not errs, "violations": errs, "simple": is_simple(g), "tree_like": is_tree_like(g),
              "stopping": is_stopping(g), "vertices": g.n, "arcs": g.m}
    _emit(args, {"op": "validate"}, result, text="ok" if not errs else "\n".join(errs))
    return EXIT_OK if not errs else EXIT_INVALID


def cmd_simulate(args) -> int:
    inst = _load(args.file)
    g = inst.graph
    u = _vertex(inst, args.start)
    out = run_maximal_walk(g, ParticleState(inst.full_config(), u), cap=args.cap,
                           record_trace=args.trace, record_flows=args.flows)
    result = {"status": out.status, "exit": g.names[out.exit] if out.exit is not None else None,
              "steps": out.steps, "position": g.names[out.position]}
    if args.trace:
        result["trace"] = [g.names[x] for x in out.trace]
    if args.flows:
        result["flows"] = {g.arc_names[a]: f for a, f in enumerate(out.flows) if f}
    _emit(args, {"op": "simulate", "start": g.names[u], "cap": args.cap}, result)
    return EXIT_OK


def _destination(inst: Instance, force_multigraph: bool, root):
    g = inst.graph
    if is_simple(g) and not force_multigraph:
        from .simple import destination_forest_simple
        return destination_forest_simple(g, inst.full_config(), root), "simple"
    return compute_destination_forest(g, inst.full_config(), root), "multigraph"


def cmd_destination(args) -> int:
    inst = _load(args.file)
    _require_tree(inst)
    g = inst.graph
    root = _vertex(inst, args.root) if args.root else None
    res, path = _destination(inst, args.force_multigraph, root)
    exits = res.exits(g)
    result = {
        "algorithm": path,
        "destination": {g.names[u]: g.arc_names[a] for u, a in enumerate(res.destination) if a >= 0},
        "exit": {g.names[u]: g.names[s] for u, s in enumerate(exits)},
        "return_flows": {f"{g.names[a]}->{g.names[b]}": counts.to_json(x) for (a, b), x in sorted(res.table.items())},
    }
    if path == "simple":
        from .simple import eq1_calls_per_vertex
        counters = {"eq1_calls": {g.names[u]: c for u, c in eq1_calls_per_vertex(res).items()}}
    else:
        counters = {"routine_calls": {g.names[u]: c for u, c in routine_calls_per_vertex(res).items()}}
    text = "\n".join(f"{g.names[u]} -> {g.names[s]}" for u, s in enumerate(exits) if not g.sink[u])
    _emit(args, {"op": "destination", "root": g.names[res.root]}, result, counters=counters, text=text)
    return EXIT_OK


def cmd_solve0(args) -> int:
    inst = _load(args.file)
    _require_tree(inst)
    g = inst.graph
    u = _vertex(inst, args.start)
    from .games import prepare
    p = prepare(inst, u)
    h = p.graph
    if h.sink[p.root]:
        sink = p.back_v.get(p.root)
    else:
        res = compute_destination_forest(h, p.cfg, p.root)
        sink = p.back_v.get(res.exits(h)[p.root])
    result = {"exit": g.names[sink] if sink is not None else None,
              "value": inst.value[sink] if sink is not None else 0}
    _emit(args, {"op": "solve0", "start": g.names[u]}, result)
    return EXIT_OK


def cmd_solve1(args) -> int:
    inst = _load(args.file)
    _require_tree(inst)
    u = _vertex(inst, args.start)
    integer = args.integer or not all(inst.value[s] in (0, 1) for s in inst.graph.sinks())
    witness = None
    if args.variant:
        val = solve_one_player_variant(inst, u, args.variant)
    elif integer:
        if args.simple:
            from .simple import one_player_integer_simple
            val = one_player_integer_simple(inst, u)
        else:
            val, w = solve_one_player_integer(inst, u, with_witness=True)
            witness = {"max": strategy_names(inst, w)}
    else:
        val, w = solve_one_player_binary(inst, u)
        witness = {"max": strategy_names(inst, w)}
    q = {"op": "solve1", "start": inst.graph.names[u], "integer": integer, "variant": args.variant}
    _emit(args, q, {"value": val}, witness, text=str(val))
    return EXIT_OK


def cmd_solve2(args) -> int:
    inst = _load(args.file)
    _require_tree(inst)
    u = _vertex(inst, args.start)
    integer = args.integer or not all(inst.value[s] in (0, 1) for s in inst.graph.sinks())
    witness = None
    if integer:
        val = solve_two_player_integer(inst, u)
    else:
        val, s, t = solve_two_player_binary(inst, u)
        witness = {"max": strategy_names(inst, s), "min": strategy_names(inst, t)}
    _emit(args, {"op": "solve2", "start": inst.graph.names[u], "integer": integer}, {"value": val}, witness, text=str(val))
    return EXIT_OK


def cmd_access(args) -> int:
    inst = _load(args.file)
    _require_tree(inst)
    if not is_simple(inst.graph):
        raise Refusal("access flows need a simple graph")
    from .simple import access_flows, one_player_integer_simple
    g = inst.graph
    u = _vertex(inst, args.start)
    acc = access_flows(inst, u)
    result = {"access": {f"{g.names[a]}->{g.names[b]}": counts.to_json(x) for (a, b), x in sorted(acc.items())},
              "value": one_player_integer_simple(inst, u)}
    _emit(args, {"op": "access", "start": g.names[u]}, result)
    return EXIT_OK


def cmd_pathgraph(args) -> int:
    bits = args.bits.strip()
    if not bits or set(bits) - {"0", "1"}:
        raise UsageError("--bits must be a nonempty string of 0/1 (1 = toward s1)")
    p = PathInstance(len(bits), tuple(c == "1" for c in bits))
    result = {"n": p.n, "n1": n1(p),
              "exit": {f"u{i}": f"s{s}" for i, s in exit_pattern_path(p).items()},
              "r0_r1": {f"u{i}": list(r0_r1(p, i)) for i in range(1, p.n + 1)}}
    if args.route is not None:
        result["class_after"] = class_after_routing(p, n1(p), args.route)
    if args.particles:
        starts = [int(x) for x in args.particles.split(",")]
        j, p1 = multi_particle_outcome(p, n1(p), starts)
        result["particles"] = {"class": j, "to_s1": p1, "to_s0": len(starts) - p1}
    _emit(args, {"op": "pathgraph", "bits": bits}, result)
    return EXIT_OK


def _parse_probs(s: str | None):
    if not s:
        return None
    out = {}
    for part in s.split(","):
        k, _, v = part.partition("=")
        out[k.strip()] = float(v)
    return out


def cmd_generate(args) -> int:
    params = {}
    if args.family == "exp_path":
        params["n"] = args.n
    elif args.family == "simple_path":
        params["n"] = args.n
        if args.bits:
            params["bits"] = args.bits
            params["n"] = len(args.bits)
    else:
        params.update(n=args.n, max_multiplicity=args.max_multiplicity, sink_count=args.sinks,
                      owner_probs=_parse_probs(args.owners))
    inst = generators.generate(args.family, params, args.seed)
    text = serialize_instance(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _range(s: str) -> list[int]:
    if ".." in s:
        a, b = s.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in s.split(",")]


def bench_rows(family: str, sizes, sim_limit: int, seed: int = 0):
    for n in sizes:
        if family == "exp_path":
            inst = generators.exp_path(n)
        elif family == "random_tree_like":
            inst = generators.random_tree_like(n, 3, max(1, n // 10), seed=seed + n)
        else:
            raise UsageError(f"bench does not support family {family!r}")
        g, cfg, u = inst.graph, inst.full_config(), inst.start
        t0 = time.perf_counter()
        res = compute_destination_forest(g, cfg, u)
        exit_cda = res.exits(g)[u]
        steps = sum(flows_from_start(g, cfg, u, res.table).values())
        solve_ms = (time.perf_counter() - t0) * 1000
        if n <= sim_limit:
            t0 = time.perf_counter()
            out = run_maximal_walk(g, ParticleState(cfg, u))
            sim_ms = f"{(time.perf_counter() - t0) * 1000:.3f}"
            match = "yes" if (out.exit == exit_cda and out.steps == steps) else "no"
            steps = out.steps
        else:
            sim_ms, match = "", "skipped"
        yield {"family": family, "n": n, "arcs": g.m, "steps": steps, "sim_ms": sim_ms,
               "solve_ms": f"{solve_ms:.3f}", "match": match}


BENCH_FIELDS = ["family", "n", "arcs", "steps", "sim_ms", "solve_ms", "match"]


def cmd_bench(args) -> int:
    sizes = _range(args.n)
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        w.writeheader()
        for row in bench_rows(args.family, sizes, args.sim_limit, args.seed):
            w.writerow(row)
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def verify_instance(inst: Instance) -> list[str]:
    """Production results that disagree with the brute-force references."""
    g, cfg = inst.graph, inst.full_config()
    problems = []
    if not (is_tree_like(g) and is_stopping(g)):
        raise Refusal("verify needs a stopping tree-like instance")
    res = compute_destination_forest(g, cfg)
    pushed = destination_forest_by_pushing(g, cfg)
    if res.destination != pushed:
        problems.append("destination forest differs from cycle pushing")
    exits = exit_pattern_from_acyclic(g, pushed)
    for u in range(g.n):
        if exit_by_simulation(g, cfg, u) != exits[u]:
            problems.append(f"exit of {g.names[u]} differs from simulation")
    from .returnflow import return_flow_oracle
    for (a, b), x in res.table.items():
        if return_flow_oracle(g, cfg, a, b) != x:
            problems.append(f"return flow {g.names[a]}->{g.names[b]} differs from simulation")
    if is_simple(g):
        from .simple import destination_forest_simple
        if destination_forest_simple(g, cfg).destination != res.destination:
            problems.append("simple fast path differs")
    return problems


def cmd_verify(args) -> int:
    if args.file:
        batch = [(args.file, _load(args.file))]
    else:
        batch = [(f"seed={args.seed + k}", generators.random_tree_like(args.vertices, args.max_multiplicity, 2,
                                                                        seed=args.seed + k))
                 for k in range(args.batch)]
    failures = {}
    for name, inst in batch:
        probs = verify_instance(inst)
        if probs:
            failures[name] = probs
    result = {"checked": len(batch), "failures": failures}
    text = f"checked {len(batch)} instance(s), {len(failures)} with mismatches"
    for name, probs in failures.items():
        text += "\n" + name + ": " + "; ".join(probs)
    _emit(args, {"op": "verify"}, result, text=text)
    return EXIT_OK if not failures else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rotortree", description="Rotor walks and rotor games on tree-like multigraphs.")
    p.add_argument("--version", action="version", version="rotortree 0.1.0")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, fn, help, file=True, start=False):
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file", help="instance file, or - for stdin")
        if start:
            sp.add_argument("--start", help="start vertex (defaults to the file's start line)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "check an instance file")
    sp = add("simulate", cmd_simulate, "run the rotor walk", start=True)
    sp.add_argument("--cap", type=int, help="maximum number of steps")
    sp.add_argument("--trace", action="store_true", help="print the visited vertices")
    sp.add_argument("--flows", action="store_true", help="print per-arc crossing counts")
    sp = add("destination", cmd_destination, "Destination Forest and exit pattern")
    sp.add_argument("--root", help="BFS root")
    sp.add_argument("--force-multigraph", action="store_true", help="skip the simple-graph fast path")
    add("solve0", cmd_solve0, "exit sink of the start vertex", start=True)
    for name, fn in (("solve1", cmd_solve1), ("solve2", cmd_solve2)):
        sp = add(name, fn, "one-player game" if name == "solve1" else "two-player game", start=True)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--binary", action="store_true", help="values in {0,1} (default when they are)")
        g.add_argument("--integer", action="store_true", help="integer values by bisection")
        if name == "solve1":
            sp.add_argument("--variant", choices=MODES, help="let MAX pick rotor orders or arcs per visit")
            sp.add_argument("--simple", action="store_true", help="use the access-flow solver for integers")
    add("access", cmd_access, "access flows on a simple one-player game", start=True)
    sp = add("pathgraph", cmd_pathgraph, "closed forms on the simple path", file=False)
    sp.add_argument("--bits", required=True, help="directions of u1..un, 1 = toward s1")
    sp.add_argument("--route", type=int, help="class after routing one particle from u_i")
    sp.add_argument("--particles", help="comma-separated start indices")
    sp = sub.add_parser("generate", help="write a generated instance")
    sp.add_argument("family", choices=generators.FAMILIES)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--bits")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-multiplicity", type=int, default=2)
    sp.add_argument("--sinks", type=int, default=2)
    sp.add_argument("--owners", help="owner probabilities, e.g. rand=0.7,max=0.3")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_generate, json=False)
    sp = sub.add_parser("bench", help="simulation vs linear solver timings as CSV")
    sp.add_argument("--family", default="exp_path", choices=("exp_path", "random_tree_like"))
    sp.add_argument("--n", default="5..20", help="sizes, as a..b or a,b,c")
    sp.add_argument("--sim-limit", type=int, default=20, help="largest size still simulated")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_bench, json=False)
    sp = sub.add_parser("verify", help="cross-check solvers against brute force")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--batch", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--vertices", type=int, default=15)
    sp.add_argument("--max-multiplicity", type=int, default=3)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as e:
        cause = e.__cause__
        print(f"invalid instance: {cause}" if cause else str(e), file=sys.stderr)
        return EXIT_INVALID
    except (Refusal, NotTreeLike, NonStoppingError) as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    raise SystemExit(main())
