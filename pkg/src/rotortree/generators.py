"""Instance families: the exponential path, the simple path and random trees."""
from __future__ import annotations

import random
from typing import Mapping, Sequence

from .graph import RotorGraph
from .instance import Instance


def exp_path(n: int) -> Instance:
    """Path u_n..u_0,s where each u_i (i<n) has two arcs right and one left.

    Rotor order at u_i is (L1, L2, R) with rho = L1, where L* point to u_{i+1}
    and R points to u_{i-1} (to s for u_0). The leaf u_n has one arc back.
    Started at u_0, the flow from u_i to u_{i+1} is 2^{i+1}.
    """
    if n < 1:
        raise ValueError("exp_path needs n >= 1")
    names = [f"u{i}" for i in range(n + 1)] + ["s"]
    s = n + 1
    tail, head, anames, rotor = [], [], [], [()] * (n + 2)
    for i in range(n + 1):
        ids = []
        if i < n:
            for k in (1, 2):
                ids.append(len(tail))
                tail.append(i)
                head.append(i + 1)
                anames.append(f"L{k}_{i}")
        ids.append(len(tail))
        tail.append(i)
        head.append(i - 1 if i > 0 else s)
        anames.append(f"R_{i}")
        rotor[i] = tuple(ids)
    g = RotorGraph(names, [False] * (n + 1) + [True], tail, head, rotor, anames)
    return Instance.zero_player(g, g.initial_config(), start=0)


def simple_path(n: int, toward_s1: Sequence[bool]) -> Instance:
    """Path s0,u_1..u_n,s1; ``toward_s1[i-1]`` is the direction of u_i."""
    if n < 1 or len(toward_s1) != n:
        raise ValueError("simple_path needs n >= 1 and one direction per vertex")
    names = ["s0"] + [f"u{i}" for i in range(1, n + 1)] + ["s1"]
    tail, head, anames, rotor = [], [], [], [()] * (n + 2)
    cfg = [-1] * (n + 2)
    for i in range(1, n + 1):
        left, right = len(tail), len(tail) + 1
        tail += [i, i]
        head += [i - 1, i + 1]
        anames += [f"l{i}", f"r{i}"]
        rotor[i] = (left, right)
        cfg[i] = right if toward_s1[i - 1] else left
    g = RotorGraph(names, [True] + [False] * n + [True], tail, head, rotor, anames)
    return Instance.zero_player(g, tuple(cfg), start=1)


def random_tree_like(
    n: int,
    max_multiplicity: int = 2,
    sink_count: int = 2,
    owner_probs: Mapping[str, float] | None = None,
    seed: int | None = None,
    *,
    stopping: bool = True,
    values: Sequence[int] = (0, 1),
    max_owned: int | None = None,
    max_owned_degree: int | None = None,
) -> Instance:
    """Random tree-like multigraph with ``n`` vertices of which ``sink_count`` are sinks.

    Plain vertices form a random recursive tree and each sink hangs off a
    random plain vertex. With ``stopping`` every plain vertex keeps at least
    one arc toward the first sink, so the graph is stopping.
    ``max_owned_degree`` caps the out-degree of owned vertices, which keeps
    strategy spaces small for enumeration.
    """
    if sink_count < 1 or n - sink_count < 1:
        raise ValueError("need at least one sink and one plain vertex")
    if max_multiplicity < 1:
        raise ValueError("max_multiplicity must be positive")
    rng = random.Random(seed)
    p = n - sink_count
    names = [f"v{i}" for i in range(p)] + [f"s{j}" for j in range(sink_count)]
    edges = [(i, rng.randrange(i)) for i in range(1, p)]
    edges += [(rng.randrange(p), p + j) for j in range(sink_count)]

    # orient: parent of each plain vertex on its path toward sink p
    adj: list[list[int]] = [[] for _ in range(n)]
    for x, y in edges:
        adj[x].append(y)
        adj[y].append(x)
    parent = [-1] * n
    seen = {p}
    todo = [p]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                todo.append(y)

    owners = ["rand"] * p
    if owner_probs:
        keys = list(owner_probs)
        weights = [owner_probs[k] for k in keys]
        owners = [rng.choices(keys, weights)[0] for _ in range(p)]
        if max_owned is not None:
            owned = [u for u in range(p) if owners[u] != "rand"]
            rng.shuffle(owned)
            for u in owned[max_owned:]:
                owners[u] = "rand"

    cap = [max_multiplicity] * p
    if max_owned_degree is not None:
        for u in range(p):
            if owners[u] != "rand":
                cap[u] = max_owned_degree

    mult: dict[tuple[int, int], int] = {}
    for x, y in edges:
        for a, b in ((x, y), (y, x)):
            if a >= p:
                continue
            lo = 1 if (b >= p or (stopping and parent[a] == b)) else 0
            mult[(a, b)] = rng.randint(lo, max_multiplicity)
        if x < p and y < p and mult[(x, y)] + mult[(y, x)] == 0:
            mult[(x, y) if rng.random() < 0.5 else (y, x)] = 1

    # shrink owned vertices to the degree cap, keeping stopping arcs
    for u in range(p):
        while sum(c for (a, _), c in mult.items() if a == u) > cap[u]:
            cands = [(a, b) for (a, b), c in mult.items() if a == u and c > 0]
            rng.shuffle(cands)
            for e in cands:
                keep = 1 if (e[1] >= p or (stopping and parent[u] == e[1])) else 0
                if mult[e] > keep:
                    mult[e] -= 1
                    break
            else:
                break
    for (a, b), c in list(mult.items()):
        if c == 0 and b < p and mult.get((b, a), 0) == 0:
            mult[(a, b)] = 1
    for u in range(p):
        if sum(c for (a, _), c in mult.items() if a == u) == 0:
            mult[(u, rng.choice(adj[u]))] = 1

    tail, head = [], []
    for (a, b), c in sorted(mult.items()):
        for _ in range(c):
            tail.append(a)
            head.append(b)
    rotor = []
    for u in range(n):
        ids = [i for i in range(len(tail)) if tail[i] == u]
        rng.shuffle(ids)
        rotor.append(tuple(ids))
    anames = [f"a{i}" for i in range(len(tail))]
    g = RotorGraph(names, [False] * p + [True] * sink_count, tail, head, rotor, anames)
    cfg = tuple(rng.choice(rotor[u]) if u < p else -1 for u in range(n))
    own = tuple(owners) + ("",) * sink_count
    val = (None,) * p + tuple(rng.choice(list(values)) for _ in range(sink_count))
    return Instance(g, cfg, own, val, start=0)


FAMILIES = ("exp_path", "simple_path", "random_tree_like")


def generate(family: str, params: Mapping | None = None, seed: int | None = None) -> Instance:
    params = dict(params or {})
    if family == "exp_path":
        return exp_path(int(params.get("n", 3)))
    if family == "simple_path":
        n = int(params.get("n", 4))
        bits = params.get("bits")
        if bits is None:
            rng = random.Random(seed)
            bits = [rng.random() < 0.5 for _ in range(n)]
        elif isinstance(bits, str):
            bits = [c == "1" for c in bits]
        return simple_path(n, list(bits))
    if family == "random_tree_like":
        return random_tree_like(seed=seed, **params)
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
