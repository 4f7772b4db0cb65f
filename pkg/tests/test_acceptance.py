"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

All checks are exact. Sub-checks are collected so that a failing
criterion still reports every part of it.
"""
import random
import time
from collections import Counter

import pytest

from rotortree import INF
from rotortree.figures import fig2, fig3, fig5, fig7, fig9, fig10, fig13
from rotortree.games import (solve_one_player_binary, solve_one_player_integer, solve_two_player_binary,
                             solve_two_player_integer, strategy_space_size, value_under_strategies)
from rotortree.generators import exp_path, random_tree_like
from rotortree.graph import is_simple
from rotortree.oracle import enumerate_one_player, enumerate_two_player, exit_pattern_by_simulation, value_grid
from rotortree.pathgraph import PathInstance, exit_pattern_path, n1
from rotortree.returnflow import (compute_destination_forest, flows_from_start, improved_revolving_routine,
                                  retropropagate, return_flow_oracle, revolving_routine, routine_calls_per_vertex)
from rotortree.simple import access_flows, destination_forest_simple, eq1_calls_per_vertex, one_player_integer_simple
from rotortree.walk import (ParticleState, all_cycles, cycle_push, destination_forest_by_pushing,
                            exit_pattern_from_acyclic, run_maximal_walk)

REPORT: list[str] = []


class Checks:
    def __init__(self, name: str, title: str):
        self.name, self.title = name, title
        self.failed: list[str] = []
        self.count = 0

    def check(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failed.append(what)

    def finish(self) -> None:
        status = "PASS" if not self.failed else "FAIL"
        line = f"{self.name} {status}: {self.title} ({self.count} checks, {len(self.failed)} failed)"
        for f in self.failed[:10]:
            line += f"\n    - {f}"
        REPORT.append(line)
        print(line)
        assert not self.failed, "; ".join(self.failed[:10])


def _names(g, xs):
    return [g.names[x] for x in xs]


def _class_flows(g, flows):
    out = Counter()
    for a, f in enumerate(flows):
        out[(g.tail[a], g.head[a])] += f
    return out


def test_ac1_exponential_walk_law():
    c = Checks("AC1", "exponential walk law on exp_path")
    for n in range(1, 21):
        inst = exp_path(n)
        g = inst.graph
        t0 = time.perf_counter()
        out = run_maximal_walk(g, ParticleState(inst.full_config(), inst.start), record_flows=True)
        dt = time.perf_counter() - t0
        fl = _class_flows(g, out.flows)
        c.check(g.names[out.exit] == "s", f"n={n}: exit {g.names[out.exit]}")
        for i in range(n):
            c.check(fl[(i, i + 1)] == 2 ** (i + 1), f"n={n}: flow u{i}->u{i + 1} = {fl[(i, i + 1)]}")
        if n == 20:
            c.check(dt < 60, f"n=20 simulation took {dt:.1f}s")
    for n in (50, 100, 200):
        inst = exp_path(n)
        g, cfg = inst.graph, inst.full_config()
        t0 = time.perf_counter()
        res = compute_destination_forest(g, cfg, inst.start)
        exit_sink = res.exits(g)[inst.start]
        dt = time.perf_counter() - t0
        c.check(g.names[exit_sink] == "s", f"n={n}: CDA exit {g.names[exit_sink]}")
        c.check(dt < 0.1, f"n={n}: CDA took {dt * 1000:.1f} ms")
        fl = flows_from_start(g, cfg, inst.start, res.table)
        c.check(all(fl[(i, i + 1)] == 2 ** (i + 1) for i in range(n)), f"n={n}: CDA flow table")
    c.finish()


def test_ac2_golden_figures():
    c = Checks("AC2", "golden figure values")
    # walk of the rotor-routing figure
    inst = fig2()
    g = inst.graph
    out = run_maximal_walk(g, ParticleState(inst.full_config(), inst.start), record_trace=True)
    c.check(_names(g, out.trace[1:]) == ["u1", "u0", "u2", "u0", "u1", "u2", "s2"], "fig2 walk")

    # return-flow table as annotated, and quoted exits
    inst = fig5()
    g, cfg = inst.graph, inst.full_config()
    res = compute_destination_forest(g, cfg)
    annotated = {("u0", "u2"): 2, ("u2", "u0"): 2, ("u0", "u1"): 3, ("u1", "u0"): 2, ("u1", "u3"): 2,
                 ("u3", "u1"): 2, ("u0", "u4"): INF, ("u4", "u0"): 2, ("u2", "s1"): 1, ("u3", "s0"): 1}
    for (a, b), x in annotated.items():
        got = res.table[(g.vertex(a), g.vertex(b))]
        c.check(got == x, f"fig5 r({a},{b}) = {got}, annotated {x}")
    infs = sum(1 for x in res.table.values() if x == INF)
    c.check(infs == 2, f"fig5 has {infs} infinite return flow(s), expected two")
    ex = res.exits(g)
    c.check(g.names[ex[g.vertex("u0")]] == "s1", f"fig5 exit(u0) = {g.names[ex[g.vertex('u0')]]}")
    c.check(g.names[ex[g.vertex("u1")]] == "s0", f"fig5 exit(u1) = {g.names[ex[g.vertex('u1')]]}, expected s0")

    # retropropagation at u
    inst = fig7()
    g, cfg = inst.graph, inst.full_config()
    u = g.vertex("u")
    table = {(u, g.vertex(v)): return_flow_oracle(g, cfg, u, g.vertex(v)) for v in ("v1", "v2", "v3")}
    _, back = retropropagate(g, cfg, table, u)
    got = tuple(back[(g.vertex(v), u)] for v in ("v1", "v2", "v3"))
    for v, x, want in zip(("v1", "v2", "v3"), got, (3, 2, 4)):
        c.check(x == want, f"fig7 r({v},u) = {x}, expected {want}")

    # games
    inst = fig10()
    c.check(solve_one_player_binary(inst, inst.start)[0] == 1, "fig10 value")
    inst = fig9()
    c.check(solve_one_player_integer(inst, inst.start) == 2, "fig9 integer value")
    inst = fig13()
    acc = access_flows(inst, inst.start)
    c.check(set(acc.values()) == {1}, f"fig13 access flows {sorted(acc.values())}")
    c.check(one_player_integer_simple(inst, inst.start) == 2, "fig13 value")

    # simple path
    inst = fig3()
    p = PathInstance.from_graph(inst.graph, inst.full_config())
    c.check(n1(p) == 2, "fig3 n1")
    c.check(exit_pattern_path(p) == {1: 0, 2: 0, 3: 1, 4: 1}, "fig3 exit split")
    c.finish()


def _zero_player(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 60)
    return random_tree_like(n, rng.randint(1, 4), rng.randint(1, min(4, n - 1)), seed=seed)


def test_ac3_zero_player_oracle_equivalence():
    c = Checks("AC3", "CDA = cycle pushing = simulation on 500 random instances")
    simple = 0
    for seed in range(500):
        inst = _zero_player(seed)
        g, cfg = inst.graph, inst.full_config()
        res = compute_destination_forest(g, cfg)
        pushed = destination_forest_by_pushing(g, cfg)
        c.check(res.destination == pushed, f"seed {seed}: destination forest")
        c.check(exit_pattern_from_acyclic(g, pushed) == exit_pattern_by_simulation(g, cfg), f"seed {seed}: exits")
        if is_simple(g):
            simple += 1
            c.check(destination_forest_simple(g, cfg).destination == res.destination, f"seed {seed}: simple path")
    c.check(simple >= 50, f"only {simple} simple instances")
    c.finish()


def test_ac4_routine_equivalence():
    c = Checks("AC4", "revolving routine = improved routine on 10^4 inputs")
    rng = random.Random(4)
    done = infs = 0
    seed = 0
    while done < 10_000:
        inst = random_tree_like(rng.randint(3, 15), 4, rng.randint(1, 2), seed=seed)
        seed += 1
        g = inst.graph
        for u in g.plain():
            for _ in range(5):
                r = {w: (INF if rng.random() < 0.2 else rng.randint(1, 60)) for w in g.out_nbrs[u]}
                if all(x == INF for x in r.values()):
                    r[rng.choice(g.out_nbrs[u])] = rng.randint(1, 60)
                infs += INF in r.values()
                start = rng.choice(g.rotor[u])
                a = revolving_routine(g, u, r, start)
                b = improved_revolving_routine(g, u, r, start)
                c.check(a == b, f"seed {seed - 1} vertex {u}: {a} != {b}")
                done += 1
    c.check(infs > 1000, f"only {infs} inputs with infinite entries")
    c.finish()


def _game(seed, kinds, values, max_owned):
    rng = random.Random(seed)
    n = rng.randint(3, 14)
    return random_tree_like(n, rng.choice([1, 2, 3]), rng.randint(1, min(3, n - 1)), kinds, seed=seed,
                            values=values, max_owned=max_owned, max_owned_degree=4)


def test_ac5_game_solvers_vs_enumeration():
    c = Checks("AC5", "game solvers = exhaustive enumeration")
    one = 0
    seed = 0
    while one < 200:
        integer = one % 2 == 0
        inst = _game(seed, {"rand": 0.55, "max": 0.45}, (0, 1, 2, 3, 5) if integer else (0, 1), 5)
        seed += 1
        size = strategy_space_size(inst, "max")
        if size < 2 or size > 4096:
            continue
        ref = enumerate_one_player(inst, inst.start)[0]
        if integer:
            val, sig = solve_one_player_integer(inst, inst.start, with_witness=True)
        else:
            val, sig = solve_one_player_binary(inst, inst.start)
        c.check(val == ref, f"one-player seed {seed - 1}: {val} != {ref}")
        c.check(value_under_strategies(inst, sig, None, inst.start) == val, f"one-player seed {seed - 1}: witness")
        one += 1
    two = 0
    seed = 10_000
    while two < 100:
        integer = two % 2 == 0
        inst = _game(seed, {"rand": 0.5, "max": 0.25, "min": 0.25}, (0, 1, 2, 4) if integer else (0, 1), 4)
        seed += 1
        smax, smin = strategy_space_size(inst, "max"), strategy_space_size(inst, "min")
        if smax * smin < 2 or smax > 1024 or smin > 1024:
            continue
        if integer:
            val, sig, tau = solve_two_player_integer(inst, inst.start, with_witness=True)
        else:
            val, sig, tau = solve_two_player_binary(inst, inst.start)
        rows, cols, _ = value_grid(inst, inst.start)
        c.check(all(value_under_strategies(inst, sig, t, inst.start) >= val for t in cols),
                f"two-player seed {seed - 1}: MAX guarantee")
        c.check(all(value_under_strategies(inst, s, tau, inst.start) <= val for s in rows),
                f"two-player seed {seed - 1}: MIN guarantee")
        c.check(enumerate_two_player(inst, inst.start) == (val, val), f"two-player seed {seed - 1}: maximin/minimax")
        two += 1
    c.finish()


def test_ac6_path_group_action():
    c = Checks("AC6", "group action and multi-particle counts on the simple path")
    for n in range(1, 11):
        for k in range(n + 1):
            inst = PathInstance.canonical(n, k).to_instance()
            g = inst.graph
            for i in range(1, n + 1):
                out = run_maximal_walk(g, ParticleState(inst.full_config(), i))
                got = n1(PathInstance.from_graph(g, out.final_config))
                c.check(got == (k + i) % (n + 1), f"n={n} k={k} i={i}: class {got}")
    for n in range(1, 9):
        memo = {}
        for k in range(n + 1):
            inst = PathInstance.canonical(n, k).to_instance()
            g = inst.graph
            s1 = g.vertex("s1")

            def step(cfg, i):
                key = (cfg, i)
                if key not in memo:
                    out = run_maximal_walk(g, ParticleState(cfg, i))
                    memo[key] = (out.final_config, out.exit == s1)
                return memo[key]

            # depth-first over all start tuples of length <= 6
            stack = [(inst.full_config(), 0, 0, 0)]
            while stack:
                cfg, depth, total, hits = stack.pop()
                if depth:
                    j = n1(PathInstance.from_graph(g, cfg))
                    ok = (j, hits) == ((k + total) % (n + 1), (k + total) // (n + 1))
                    if not ok:
                        c.check(False, f"n={n} k={k} depth={depth} sum={total}")
                    c.count += ok
                if depth < 6:
                    for i in range(1, n + 1):
                        nxt, hit = step(cfg, i)
                        stack.append((nxt, depth + 1, total + i, hits + hit))
    c.finish()


def test_ac7_structural_properties():
    c = Checks("AC7", "flow identities, push invariance, return-flow bound, argmin destination")
    # flow and return flow identities
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(3, 20)
        inst = random_tree_like(n, rng.randint(1, 3), rng.randint(1, min(3, n - 1)), seed=seed)
        g, cfg = inst.graph, inst.full_config()
        dest = destination_forest_by_pushing(g, cfg)
        for u in g.plain():
            out = run_maximal_walk(g, ParticleState(cfg, u), record_flows=True)
            fl = _class_flows(g, out.flows)
            v = g.head[dest[u]]
            r = {w: return_flow_oracle(g, cfg, u, w) for w in g.out_nbrs[u]}
            c.check(fl[(u, v)] == r[v], f"flow seed {seed} u={u}: F(u,v) != r(u,v)")
            for w in g.out_nbrs[u]:
                if w == v:
                    continue
                c.check(fl[(u, w)] < r[w], f"flow seed {seed} u={u} w={w}: F >= r")
                if g.has_edge(w, u):
                    c.check(return_flow_oracle(g, cfg, w, u) == fl[(u, w)] + 1, f"flow seed {seed} u={u} w={w}: r(w,u)")
    # exit pattern conservation and push-order confluence
    for seed in range(200):
        inst = _zero_player(1000 + seed)
        g, cfg = inst.graph, inst.full_config()
        base = exit_pattern_by_simulation(g, cfg)
        for cyc in all_cycles(g, cfg)[:5]:
            c.check(exit_pattern_by_simulation(g, cycle_push(g, cfg, cyc)) == base, f"conservation seed {seed}")
        ref = destination_forest_by_pushing(g, cfg)
        c.check(destination_forest_by_pushing(g, cfg, "lowest-vertex") == ref, f"confluence seed {seed}")
        for s in range(3):
            c.check(destination_forest_by_pushing(g, cfg, "random", seed=s) == ref, f"confluence seed {seed}/{s}")
    # return-flow bound along a path to a sink
    for seed in range(200):
        inst = _zero_player(2000 + seed)
        g, cfg = inst.graph, inst.full_config()
        for u in g.plain():
            for u1 in g.out_nbrs[u]:
                r = return_flow_oracle(g, cfg, u, u1)
                path = _path_to_sink(g, u1, u)
                if path is None:
                    c.check(r == INF, f"bound seed {seed}: r({u},{u1}) finite without a path")
                else:
                    bound = 1
                    for x in path:
                        bound *= len(g.rotor[x])
                    c.check(r <= bound, f"bound seed {seed}: r({u},{u1})={r} > {bound}")
    # simple graphs: destination among the minimal return flows for any strategy
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(3, 20)
        inst = random_tree_like(n, 1, rng.randint(1, min(3, n - 1)), {"rand": 0.6, "max": 0.4}, seed=3000 + seed)
        g = inst.graph
        cfg = list(inst.full_config())
        for v in inst.owned("max"):
            cfg[v] = rng.choice(g.rotor[v])
        cfg = tuple(cfg)
        dest = destination_forest_by_pushing(g, cfg)
        for u in g.plain():
            r = {w: return_flow_oracle(g, cfg, u, w) for w in g.out_nbrs[u]}
            c.check(r[g.head[dest[u]]] == min(r.values()), f"argmin seed {seed} u={u}")
    c.finish()


def _path_to_sink(g, start, banned):
    """Interior vertices of a shortest path from start to a sink avoiding banned."""
    prev = {start: None}
    todo = [start]
    for x in todo:
        if g.sink[x]:
            path = []
            y = prev[x]
            while y is not None:
                path.append(y)
                y = prev[y]
            return path
        for y in g.out_nbrs[x]:
            if y != banned and y not in prev:
                prev[y] = x
                todo.append(y)
    return None


def test_ac8_operation_counters():
    c = Checks("AC8", "CDA <= 3 routine calls and simple retropropagation <= 2 min evaluations per vertex")
    worst_cda = worst_eq1 = 0
    for seed in range(300):
        inst = _zero_player(seed)
        g, cfg = inst.graph, inst.full_config()
        res = compute_destination_forest(g, cfg)
        calls = routine_calls_per_vertex(res)
        worst_cda = max(worst_cda, max(calls.values(), default=0))
        c.check(all(x <= 3 for x in calls.values()), f"seed {seed}: routine calls {max(calls.values())}")
        simple = random_tree_like(len(g.names), 1, 2, seed=seed)
        sres = destination_forest_simple(simple.graph, simple.full_config())
        ev = eq1_calls_per_vertex(sres)
        worst_eq1 = max(worst_eq1, max(ev.values(), default=0))
        c.check(all(x <= 2 for x in ev.values()), f"seed {seed}: min evaluations {max(ev.values())}")
    print(f"AC8 worst case: {worst_cda} routine calls, {worst_eq1} min evaluations per vertex")
    c.finish()


@pytest.fixture(scope="module", autouse=True)
def _summary():
    yield
    print("\nacceptance summary")
    for line in REPORT:
        print(line)
