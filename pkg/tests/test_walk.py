import pytest
from hypothesis import given, settings

from rotortree import build_graph
from rotortree.figures import fig2, fig5
from rotortree.oracle import exit_pattern_by_simulation
from rotortree.walk import (NonStoppingError, ParticleState, all_cycles, cycle_push, destination_forest_by_pushing,
                            exit_pattern, exit_pattern_from_acyclic, routing_step, run_maximal_walk)

from conftest import random_zero_player, seeds


def names(g, xs):
    return [g.names[x] for x in xs]


def test_fig2_walk_sequence():
    inst = fig2()
    g = inst.graph
    out = run_maximal_walk(g, ParticleState(inst.full_config(), inst.start), record_trace=True)
    assert names(g, out.trace[1:]) == ["u1", "u0", "u2", "u0", "u1", "u2", "s2"]
    assert out.status == "sink" and g.names[out.exit] == "s2" and out.steps == 7


def test_routing_step_turns_the_rotor():
    inst = fig2()
    g = inst.graph
    cfg, u = inst.full_config(), inst.start
    nxt = routing_step(g, ParticleState(cfg, u))
    assert nxt.position == g.head[cfg[u]]
    assert nxt.config[u] == g.succ[cfg[u]]
    with pytest.raises(ValueError):
        routing_step(g, ParticleState(cfg, g.vertex("s1")))


def test_cap_stops_early():
    inst = fig2()
    out = run_maximal_walk(inst.graph, ParticleState(inst.full_config(), inst.start), cap=3)
    assert out.status == "cap" and out.steps == 3 and out.exit is None


def test_trapped_walk_is_reported():
    g = build_graph([("a", False), ("b", False), ("c", False), ("s", True)],
                    [("a", "s"), ("a", "b"), ("b", "c"), ("c", "b")])
    cfg = g.config_by_heads({"a": "b", "b": "c", "c": "b"})
    out = run_maximal_walk(g, ParticleState(cfg, 0))
    assert out.status == "trapped" and out.exit is None
    with pytest.raises(NonStoppingError):
        destination_forest_by_pushing(g, cfg)


def test_flows_sum_to_steps():
    inst = fig2()
    out = run_maximal_walk(inst.graph, ParticleState(inst.full_config(), inst.start), record_flows=True)
    assert sum(out.flows) == out.steps


def test_cycle_push_rejects_non_cycles():
    inst = fig5()
    g, cfg = inst.graph, inst.full_config()
    with pytest.raises(ValueError):
        cycle_push(g, cfg, (g.vertex("u1"), g.vertex("u3")))


def test_fig5_cycles_and_exits():
    inst = fig5()
    g, cfg = inst.graph, inst.full_config()
    cycles = all_cycles(g, cfg)
    assert cycles
    final = destination_forest_by_pushing(g, cfg)
    assert all_cycles(g, final) == []
    assert names(g, exit_pattern(g, cfg)[:5]) == ["s1", "s1", "s1", "s0", "s1"]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pushing_matches_simulation(seed):
    inst = random_zero_player(seed, 25, 3)
    g, cfg = inst.graph, inst.full_config()
    assert exit_pattern(g, cfg) == exit_pattern_by_simulation(g, cfg)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_push_order_confluence(seed):
    inst = random_zero_player(seed, 25, 3)
    g, cfg = inst.graph, inst.full_config()
    ref = destination_forest_by_pushing(g, cfg)
    assert destination_forest_by_pushing(g, cfg, "lowest-vertex") == ref
    assert destination_forest_by_pushing(g, cfg, "random", seed=seed) == ref
    assert exit_pattern_from_acyclic(g, ref) == exit_pattern(g, cfg)
