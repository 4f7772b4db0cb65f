"""One- and two-player rotor games on tree-like multigraphs.

Values are computed leaves-to-root over the edges directed away from the
start vertex u0. Each edge (u,v) carries a summary (val*, r*): the optimal
value of the (u,v)-subtree and its optimal return flow (smallest among
optimal strategies when the value is 1, largest when it is 0). The start
vertex is finally evaluated as if entered from a fictive parent with no
arc back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .counts import INF, Count
from .graph import RotorGraph, contract_sink_components, induced, is_tree_like, shadow_components
from .instance import Instance
from .returnflow import NotTreeLike, bfs_tree, improved_revolving_routine
from .walk import ParticleState, run_maximal_walk

Strategy = dict[int, int]


class Summary(NamedTuple):
    val: int
    r: Count
    arc: int | None = None  # choice at v for owned v


class SolverRefusal(ValueError):
    pass


# -- evaluation under fixed strategies ---------------------------------

def value_under_strategies(inst: Instance, sigma: Mapping[int, int], tau: Mapping[int, int] | None, u0: int) -> int:
    """Value of the walk from u0 once both players fixed their arcs; 0 if no sink is reached."""
    g = inst.graph
    cfg = list(inst.full_config())
    for who, s in (("max", sigma), ("min", tau or {})):
        for v, a in s.items():
            if inst.owner[v] != who or g.tail[a] != v:
                raise ValueError(f"strategy entry at {g.names[v]} is not a {who} choice")
            cfg[v] = a
    out = run_maximal_walk(g, ParticleState(tuple(cfg), u0))
    return inst.value[out.exit] if out.status == "sink" else 0


# -- preparation -------------------------------------------------------

@dataclass
class Prepared:
    graph: RotorGraph
    cfg: tuple[int, ...]
    owner: tuple[str, ...]
    value: tuple[int, ...]
    root: int
    back_v: dict[int, int]  # prepared vertex -> original
    back_a: dict[int, int]  # prepared arc -> original


def prepare(inst: Instance, u0: int) -> Prepared:
    """Contract sink components into value-0 sinks and keep u0's component.

    Refuses graphs that are not tree-like.
    """
    g = inst.graph
    if not is_tree_like(g):
        raise NotTreeLike("solvers need a tree-like graph")
    for s in g.sinks():
        if inst.value[s] is None or inst.value[s] < 0:
            raise ValueError("sink values must be nonnegative integers")
    cfg = inst.full_config()
    g2, cfg2, vmap = contract_sink_components(g, cfg, split=True)
    # fresh sinks get names absent from g, so names identify survivors
    orig = [g.index.get(name) for name in g2.names]
    root2 = vmap[u0]
    comp = next(c for c in shadow_components(g2) if root2 in c)
    sub = induced(g2, comp)
    h = sub.graph
    owner, value, back_v = [""] * h.n, [0] * h.n, {}
    for i2, j in sub.vmap.items():
        u = orig[i2]
        if u is None:
            continue
        back_v[j] = u
        if g.sink[u]:
            value[j] = inst.value[u]
        else:
            owner[j] = inst.owner[u]
    back_a = {j: g.arc_index[h.arc_names[j]] for j in range(h.m)}
    cfg3 = [-1] * h.n
    for i2, j in sub.vmap.items():
        if cfg2[i2] >= 0:
            cfg3[j] = sub.amap[cfg2[i2]]
    return Prepared(h, tuple(cfg3), tuple(owner), tuple(value), sub.vmap[root2], back_v, back_a)


# -- optimal start arcs ---------------------------------------------------

def _window_scan(g: RotorGraph, v: int, u: int | None, R: Mapping[int, Count]):
    """For every start arc index s, the routine's end arc and u-visits before it.

    Two pointers: the end position is monotone in the start.
    """
    L = g.rotor[v]
    d = len(L)
    cnt: dict[int, int] = {}
    fu = 0
    e = 0
    out = []
    for s in range(d):
        if e < s:
            e, fu = s, 0
            cnt.clear()
        while True:
            w = g.head[L[e % d]]
            if R.get(w, INF) != INF and cnt.get(w, 0) == R[w] - 1:
                break
            cnt[w] = cnt.get(w, 0) + 1
            if w == u:
                fu += 1
            e += 1
        out.append((s, g.head[L[e % d]], fu))
        if e > s:
            w = g.head[L[s]]
            cnt[w] -= 1
            if w == u:
                fu -= 1
    return out


def optimal_strategy_routine(g: RotorGraph, v: int, u: int | None, r: Mapping[int, Count],
                             val: Mapping[int, int], owner: str = "max") -> Summary:
    """Best start arc at an owned vertex v entered from u.

    ``r`` and ``val`` hold the summaries of v's other neighbours; ``u`` is
    None for the fictive parent of the start vertex. MAX wants value 1 with
    few returns to u, else value 0 with many; MIN mirrors this. The first
    candidate in rotor order wins ties.
    """
    mu = g.multiplicity(v, u) if u is not None else 0
    kids = [w for w in g.out_nbrs[v] if w != u]
    finite = [w for w in kids if r[w] != INF]
    if not finite:
        return Summary(0, INF if mu else 1, g.rotor[v][0])
    m = {w: g.mult[(v, w)] for w in finite}
    q = min((r[w] - 1) // m[w] for w in finite)
    R = {w: r[w] - q * m[w] for w in finite}
    good = 1 if owner == "max" else 0
    best_good = best_bad = None
    for s, dest, fu in _window_scan(g, v, u, R):
        if val[dest] == good:
            if best_good is None or fu < best_good[1]:
                best_good = (s, fu)
        elif best_bad is None or fu > best_bad[1]:
            best_bad = (s, fu)
    s, fu = best_good if best_good is not None else best_bad
    value = good if best_good is not None else 1 - good
    return Summary(value, q * mu + fu + 1 if mu else 1, g.rotor[v][s])


def optimal_strategy_by_candidates(g: RotorGraph, v: int, u: int | None, r: Mapping[int, Count],
                                   val: Mapping[int, int], owner: str = "max") -> Summary:
    """Same contract as :func:`optimal_strategy_routine`, one routine run per start arc."""
    mu = g.multiplicity(v, u) if u is not None else 0
    kids = [w for w in g.out_nbrs[v] if w != u]
    if all(r[w] == INF for w in kids):
        return Summary(0, INF if mu else 1, g.rotor[v][0])
    rs = {w: r[w] for w in kids}
    if mu:
        rs[u] = INF
    good = 1 if owner == "max" else 0
    best_good = best_bad = None
    for a in g.rotor[v]:
        res = improved_revolving_routine(g, v, rs, a)
        dest = g.head[res.last_arc]
        fu = res.flows.get(u, 0) if u is not None else 0
        if val[dest] == good:
            if best_good is None or fu < best_good[1]:
                best_good = (a, fu)
        elif best_bad is None or fu > best_bad[1]:
            best_bad = (a, fu)
    a, fu = best_good if best_good is not None else best_bad
    value = good if best_good is not None else 1 - good
    return Summary(value, fu + 1 if mu else 1, a)


def _random_summary(g: RotorGraph, cfg, v: int, u: int | None, summ: Mapping) -> Summary:
    mu = g.multiplicity(v, u) if u is not None else 0
    kids = [w for w in g.out_nbrs[v] if w != u]
    rs = {w: summ[(v, w)].r for w in kids}
    if all(x == INF for x in rs.values()):
        return Summary(0, INF if mu else 1)
    if mu:
        q = min((x - 1) // g.mult[(v, w)] for w, x in rs.items() if x != INF)
        rs[u] = (q + 1) * mu + 1
    res = improved_revolving_routine(g, v, rs, cfg[v])
    dest = g.head[res.last_arc]
    return Summary(summ[(v, dest)].val, res.flows[u] + 1 if mu else 1)


def _free_order_summary(g: RotorGraph, v: int, u: int | None, summ: Mapping, good: int) -> Summary:
    """Owned vertex that also picks its rotor order.

    The exhausting visit of child w falls in turn ceil(r/m). The player can
    make any child with the smallest such turn T the destination and can put
    the arcs back to u before or after it, so the return flow is
    (T-1)m(u)+1 or T m(u)+1.
    """
    mu = g.multiplicity(v, u) if u is not None else 0
    kids = [w for w in g.out_nbrs[v] if w != u and summ[(v, w)].r != INF]
    if not kids:
        return Summary(0, INF if mu else 1)
    turn = {w: -(-summ[(v, w)].r // g.mult[(v, w)]) for w in kids}
    T = min(turn.values())
    vals = {summ[(v, w)].val for w in kids if turn[w] == T}
    if good in vals:
        return Summary(good, (T - 1) * mu + 1 if mu else 1)
    return Summary(1 - good, T * mu + 1 if mu else 1)


def _per_visit_summary(g: RotorGraph, v: int, u: int | None, summ: Mapping) -> Summary:
    mu = g.multiplicity(v, u) if u is not None else 0
    if any(summ[(v, w)].val == 1 for w in g.out_nbrs[v] if w != u):
        return Summary(1, 1)
    return Summary(0, INF if mu else 1)


def propagate_summary(p: Prepared, u: int | None, v: int, summ: Mapping, mode: str = "standard") -> Summary:
    g = p.graph
    if g.sink[v]:
        val = p.value[v]
        if val not in (0, 1):
            raise ValueError("binary solver needs sink values in {0, 1}")
        return Summary(val, 1)
    own = p.owner[v]
    if own == "rand":
        return _random_summary(g, p.cfg, v, u, summ)
    good = 1 if own == "max" else 0
    if mode == "free_rotor_order":
        return _free_order_summary(g, v, u, summ, good)
    if mode == "free_per_visit":
        return _per_visit_summary(g, v, u, summ)
    kids = [w for w in g.out_nbrs[v] if w != u]
    return optimal_strategy_routine(g, v, u, {w: summ[(v, w)].r for w in kids},
                                    {w: summ[(v, w)].val for w in kids}, own)


def _solve_binary(p: Prepared, mode: str = "standard"):
    g = p.graph
    order, parent, edges = bfs_tree(g, p.root)
    summ: dict[tuple[int, int], Summary] = {}
    for (x, y) in reversed(edges):
        if g.has_edge(x, y):
            summ[(x, y)] = propagate_summary(p, x, y, summ, mode)
    top = propagate_summary(p, None, p.root, summ, mode)
    choice = {}
    for (x, y), s in summ.items():
        if s.arc is not None:
            choice[y] = s.arc
    if top.arc is not None:
        choice[p.root] = top.arc
    return top.val, choice, summ


def _check_binary(inst: Instance) -> None:
    for s in inst.graph.sinks():
        if inst.value[s] not in (0, 1):
            raise ValueError("binary solver needs sink values in {0, 1}")


def _lift(inst: Instance, p: Prepared, choice: Mapping[int, int], who: str) -> Strategy:
    g = inst.graph
    out = {v: g.rotor[v][0] for v in inst.owned(who)}
    for v, a in choice.items():
        if p.owner[v] == who:
            out[p.back_v[v]] = p.back_a[a]
    return out


def solve_one_player_binary(inst: Instance, u0: int) -> tuple[int, Strategy]:
    """Optimal value at u0 and a subtree-optimal MAX strategy."""
    if inst.owned("min"):
        raise ValueError("one-player game cannot have MIN vertices")
    _check_binary(inst)
    p = prepare(inst, u0)
    if p.graph.sink[p.root]:
        return p.value[p.root], _lift(inst, p, {}, "max")
    val, choice, _ = _solve_binary(p)
    return val, _lift(inst, p, choice, "max")


def solve_two_player_binary(inst: Instance, u0: int) -> tuple[int, Strategy, Strategy]:
    """Value and a pair of subtree-equilibrium strategies."""
    _check_binary(inst)
    p = prepare(inst, u0)
    if p.graph.sink[p.root]:
        return p.value[p.root], _lift(inst, p, {}, "max"), _lift(inst, p, {}, "min")
    val, choice, _ = _solve_binary(p)
    return val, _lift(inst, p, choice, "max"), _lift(inst, p, choice, "min")


def edge_summaries(inst: Instance, u0: int, mode: str = "standard") -> dict[tuple[int, int], Summary]:
    """Summaries of all edges directed away from u0, keyed by original vertices."""
    _check_binary(inst)
    p = prepare(inst, u0)
    _, _, summ = _solve_binary(p, mode)
    return {(p.back_v[x], p.back_v[y]): s for (x, y), s in summ.items() if x in p.back_v and y in p.back_v}


def threshold(inst: Instance, x: int) -> Instance:
    """Binary game where sinks worth at least x become 1."""
    val = tuple(None if v is None else int(v >= x) for v in inst.value)
    return Instance(inst.graph, inst.config, inst.owner, val, inst.start)


def _bisect(inst: Instance, u0: int, probe) -> int:
    p = prepare(inst, u0)
    if p.graph.sink[p.root]:
        return p.value[p.root]
    vals = sorted({p.value[s] for s in p.graph.sinks()})
    lo, hi = 0, len(vals) - 1  # probe(vals[lo]) holds: every sink is worth at least the minimum
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if probe(threshold(inst, vals[mid]), u0):
            lo = mid
        else:
            hi = mid - 1
    return vals[lo]


def solve_one_player_integer(inst: Instance, u0: int, with_witness: bool = False):
    """Optimal value by bisection over the distinct sink values."""
    val = _bisect(inst, u0, lambda b, x: solve_one_player_binary(b, x)[0] == 1)
    if not with_witness:
        return val
    return val, solve_one_player_binary(threshold(inst, val), u0)[1]


def solve_two_player_integer(inst: Instance, u0: int, with_witness: bool = False):
    """Equilibrium value by bisection.

    With ``with_witness`` also return (sigma, tau): sigma wins the binary
    game at threshold val, tau wins for MIN at the next sink value up.
    """
    val = _bisect(inst, u0, lambda b, x: solve_two_player_binary(b, x)[0] == 1)
    if not with_witness:
        return val
    sigma = solve_two_player_binary(threshold(inst, val), u0)[1]
    above = sorted({inst.value[s] for s in inst.graph.sinks() if inst.value[s] > val})
    tau = solve_two_player_binary(threshold(inst, above[0] if above else val), u0)[2]
    return val, sigma, tau


MODES = ("free_rotor_order", "free_per_visit")


def solve_one_player_variant(inst: Instance, u0: int, mode: str) -> int:
    """Optimal value when MAX also picks rotor orders, or picks an arc at every visit."""
    if mode not in MODES:
        raise ValueError(f"unknown variant {mode!r}")
    if inst.owned("min"):
        raise ValueError("one-player game cannot have MIN vertices")

    def probe(b: Instance, x: int) -> bool:
        p = prepare(b, x)
        if p.graph.sink[p.root]:
            return p.value[p.root] == 1
        return _solve_binary(p, mode)[0] == 1

    if all(inst.value[s] in (0, 1) for s in inst.graph.sinks()):
        return int(probe(inst, u0))
    return _bisect(inst, u0, probe)


def strategy_names(inst: Instance, s: Mapping[int, int]) -> dict[str, str]:
    g = inst.graph
    return {g.names[v]: g.arc_names[a] for v, a in sorted(s.items())}


def strategy_space_size(inst: Instance, who: str) -> int:
    return math.prod(len(inst.graph.rotor[v]) for v in inst.owned(who))
