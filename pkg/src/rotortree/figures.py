"""Hand-encoded instances of the small example graphs used as golden fixtures.

Rotor orders are anticlockwise around each vertex, read off the drawings.
Each function returns an :class:`~rotortree.instance.Instance`.
"""
from __future__ import annotations

from .generators import exp_path, simple_path
from .graph import build_graph
from .instance import Instance


def _make(vertices, arcs, rotor_heads, config_heads, owner=None, value=None, start=None) -> Instance:
    """``vertices``: list of (name, is_sink); ``arcs``: (tail, head) pairs.

    ``rotor_heads[u]`` lists heads in rotor order; repeated heads pick the
    parallel arcs in declaration order. ``config_heads[u]`` is a head name,
    or an index into the rotor order when given as an int.
    """
    pending: dict[tuple[str, str], list[int]] = {}
    for a, (t, h) in enumerate(arcs):
        pending.setdefault((t, h), []).append(a)
    rotor = {}
    for u, heads in rotor_heads.items():
        used: dict[str, int] = {}
        order = []
        for h in heads:
            k = used.get(h, 0)
            order.append(pending[(u, h)][k])
            used[h] = k + 1
        rotor[u] = order
    g = build_graph(vertices, arcs, rotor)
    cfg = list(g.initial_config())
    for u, c in config_heads.items():
        ui = g.vertex(u)
        cfg[ui] = g.rotor[ui][c] if isinstance(c, int) else g.arcs_between(ui, g.vertex(c))[0]
    own = ["" if s else "rand" for _, s in vertices]
    for u, o in (owner or {}).items():
        own[g.vertex(u)] = o
    val = [None] * g.n
    for s in g.sinks():
        val[s] = 0
    for s, x in (value or {}).items():
        val[g.vertex(s)] = x
    return Instance(g, tuple(cfg), tuple(own), tuple(val), g.vertex(start) if start is not None else None)


def fig2() -> Instance:
    """Three plain vertices, two sinks; particle on u2."""
    v = [("u0", False), ("u1", False), ("u2", False), ("s1", True), ("s2", True)]
    arcs = [("u0", "u2"), ("u0", "u1"), ("u1", "u0"), ("u1", "u2"), ("u1", "s1"),
            ("u2", "u1"), ("u2", "u0"), ("u2", "s2")]
    rot = {"u0": ["u2", "u1"], "u1": ["u0", "u2", "s1"], "u2": ["u1", "u0", "s2"]}
    return _make(v, arcs, rot, {"u0": "u2", "u1": "u0", "u2": "u1"}, start="u2")


def fig3() -> Instance:
    """Simple path with n=4, u1,u2 toward s1 and u3,u4 toward s0."""
    return simple_path(4, (True, True, False, False))


def fig4(n: int) -> Instance:
    return exp_path(n)


def fig5() -> Instance:
    """Simple tree with a non-sink leaf u4."""
    v = [("u0", False), ("u1", False), ("u2", False), ("u3", False), ("u4", False),
         ("s0", True), ("s1", True)]
    arcs = [("u0", "u2"), ("u0", "u1"), ("u0", "u4"), ("u1", "u0"), ("u1", "u3"),
            ("u2", "u0"), ("u2", "s1"), ("u3", "u1"), ("u3", "s0"), ("u4", "u0")]
    rot = {"u0": ["u2", "u1", "u4"], "u1": ["u0", "u3"], "u2": ["u0", "s1"],
           "u3": ["u1", "s0"], "u4": ["u0"]}
    cfg = {"u0": "u2", "u1": "u0", "u2": "u0", "u3": "u1", "u4": "u0"}
    return _make(v, arcs, rot, cfg, start="u0")


def fig7() -> Instance:
    """Vertex u with neighbours v1 (x2 out), v2 (x1), v3 (x2), completed into a tree.

    Behind v1 and v3 sits a gadget giving return flow 4; v2 is a leaf that
    always bounces back, so r(u,v2) is infinite.
    """
    v = [("u", False), ("v1", False), ("v2", False), ("v3", False),
         ("x1", False), ("x3", False), ("t1", True), ("t3", True)]
    arcs = [("u", "v3"), ("u", "v3"), ("u", "v2"), ("u", "v1"), ("u", "v1"),
            ("v1", "u"), ("v2", "u"), ("v2", "u"), ("v3", "u"),
            ("v1", "x1"), ("x1", "v1"), ("x1", "v1"), ("x1", "t1"),
            ("v3", "x3"), ("x3", "v3"), ("x3", "v3"), ("x3", "t3")]
    rot = {"u": ["v3", "v3", "v2", "v1", "v1"], "v1": ["u", "x1"], "v2": ["u", "u"],
           "v3": ["u", "x3"], "x1": ["v1", "v1", "t1"], "x3": ["v3", "v3", "t3"]}
    cfg = {"u": 0, "v1": "u", "v2": 0, "v3": "u", "x1": 0, "x3": 0}
    return _make(v, arcs, rot, cfg, start="u")


def fig8() -> Instance:
    """MAX vertex g between v and u; optimal witness depends on the start."""
    v = [("g", False), ("v", False), ("u", False), ("one_v", True), ("one_u", True),
         ("zero_top", True), ("zero_bot", True)]
    arcs = [("g", "zero_top"), ("g", "v"), ("g", "zero_bot"), ("g", "u"),
            ("v", "g"), ("v", "one_v"), ("u", "g"), ("u", "one_u")]
    rot = {"g": ["zero_top", "v", "zero_bot", "u"], "v": ["g", "one_v"], "u": ["g", "one_u"]}
    return _make(v, arcs, rot, {"v": "g", "u": "g"}, owner={"g": "max"},
                 value={"one_v": 1, "one_u": 1}, start="v")


def fig9(max_name: str = "u") -> Instance:
    """Random vertex u0 next to a MAX vertex; integer value 2 via bouncing."""
    m = max_name
    v = [("u0", False), (m, False), ("two", True), ("zero", True), ("one", True)]
    arcs = [("u0", m), ("u0", "two"), (m, "one"), (m, "u0"), (m, "zero")]
    rot = {"u0": [m, "two"], m: ["one", "u0", "zero"]}
    return _make(v, arcs, rot, {"u0": m}, owner={m: "max"},
                 value={"two": 2, "one": 1, "zero": 0}, start="u0")


def fig13() -> Instance:
    """Same graph as :func:`fig9` with the MAX vertex named v."""
    return fig9("v")


def fig10() -> Instance:
    """One-player binary game with MAX vertices u2 and u4."""
    v = [("u0", False), ("u1", False), ("u2", False), ("u3", False), ("u4", False),
         ("u5", False), ("u6", False),
         ("t0a", True), ("t1b", True), ("t0c", True), ("t0d", True), ("t1e", True)]
    arcs = [("u0", "u4"), ("u0", "u1"),
            ("u1", "u2"), ("u1", "u0"), ("u1", "t0d"),
            ("u2", "u3"), ("u2", "u1"),
            ("u3", "t1e"), ("u3", "u2"),
            ("u4", "u5"), ("u4", "t0a"), ("u4", "u0"),
            ("u5", "t1b"), ("u5", "u4"), ("u5", "t0c"),
            ("u6", "u2")]
    rot = {"u0": ["u4", "u1"], "u1": ["u2", "u0", "t0d"], "u2": ["u3", "u1"],
           "u3": ["t1e", "u2"], "u4": ["u5", "t0a", "u0"], "u5": ["t1b", "u4", "t0c"],
           "u6": ["u2"]}
    cfg = {"u0": "u4", "u1": "u2", "u3": "t1e", "u5": "t0c", "u6": "u2"}
    return _make(v, arcs, rot, cfg, owner={"u2": "max", "u4": "max"},
                 value={"t1b": 1, "t1e": 1}, start="u0")


def fig12() -> Instance:
    """Matching-pennies graph (not tree-like): no pure equilibrium."""
    v = [("Max", False), ("Min", False), ("c", False), ("d", False), ("e", False),
         ("f", False), ("one", True), ("zero", True), ("one_f", True)]
    arcs = [("Max", "c"), ("Max", "d"),
            ("Min", "d"), ("Min", "f"), ("Min", "c"),
            ("c", "e"), ("c", "one"), ("c", "Max"), ("c", "Min"),
            ("d", "e"), ("d", "one"), ("d", "Max"), ("d", "Min"),
            ("e", "f"), ("e", "zero"), ("e", "d"), ("e", "c"),
            ("f", "Min"), ("f", "one_f"), ("f", "e")]
    rot = {"Max": ["c", "d"], "Min": ["d", "f", "c"], "c": ["e", "one", "Max", "Min"],
           "d": ["e", "one", "Max", "Min"], "e": ["f", "zero", "d", "c"], "f": ["Min", "one_f", "e"]}
    cfg = {"c": "e", "d": "e", "e": "f", "f": "Min"}
    return _make(v, arcs, rot, cfg, owner={"Max": "max", "Min": "min"},
                 value={"one": 1, "one_f": 1}, start="Max")


ALL = {"fig2": fig2, "fig3": fig3, "fig5": fig5, "fig7": fig7, "fig8": fig8,
       "fig9": fig9, "fig10": fig10, "fig12": fig12, "fig13": fig13}
