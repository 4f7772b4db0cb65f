import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from rotortree import INF
from rotortree.figures import fig8, fig9, fig10, fig12, fig13
from rotortree.games import (SolverRefusal, edge_summaries, optimal_strategy_by_candidates, optimal_strategy_routine,
                             solve_one_player_binary, solve_one_player_integer, solve_one_player_variant,
                             solve_two_player_binary, solve_two_player_integer, strategy_names, value_under_strategies)
from rotortree.generators import random_tree_like
from rotortree.oracle import (BudgetExceeded, enumerate_free_rotor_order, enumerate_one_player, enumerate_two_player, per_visit_value,
                              value_grid)
from rotortree.returnflow import NotTreeLike

from conftest import seeds


def one_player(seed, values=(0, 1), max_n=12):
    rng = random.Random(seed)
    n = rng.randint(3, max_n)
    return random_tree_like(n, rng.choice([1, 2, 3]), rng.randint(1, min(3, n - 1)), {"rand": 0.55, "max": 0.45},
                            seed=seed, values=values, max_owned=5, max_owned_degree=4)


def two_player(seed, values=(0, 1), max_n=12):
    rng = random.Random(seed)
    n = rng.randint(3, max_n)
    return random_tree_like(n, rng.choice([1, 2]), rng.randint(1, min(3, n - 1)),
                            {"rand": 0.5, "max": 0.25, "min": 0.25}, seed=seed, values=values, max_owned=4,
                            max_owned_degree=4)


def test_fig8_witness_depends_on_start():
    inst = fig8()
    g = inst.graph
    for start in ("v", "u"):
        val, sig = solve_one_player_binary(inst, g.vertex(start))
        assert val == 1
        assert g.names[g.head[sig[g.vertex("g")]]] == start


def test_fig10_value_and_summaries():
    inst = fig10()
    g = inst.graph
    val, sig = solve_one_player_binary(inst, inst.start)
    assert val == 1
    assert {g.names[v]: g.names[g.head[a]] for v, a in sig.items()} == {"u2": "u3", "u4": "u0"}
    assert value_under_strategies(inst, sig, None, inst.start) == 1
    summ = edge_summaries(inst, inst.start)
    s = summ[(g.vertex("u0"), g.vertex("u4"))]
    assert (s.val, s.r) == (0, 2)


def test_fig9_integer_value():
    inst = fig9()
    assert solve_one_player_integer(inst, inst.start) == 2
    val, wit = solve_one_player_integer(inst, inst.start, with_witness=True)
    assert value_under_strategies(inst, wit, None, inst.start) == 2


def test_fig12_refused():
    inst = fig12()
    with pytest.raises(NotTreeLike):
        solve_two_player_binary(inst, inst.start)
    assert enumerate_two_player(inst, inst.start) == (0, 1)


def test_binary_solver_rejects_integer_values():
    inst = fig13()
    with pytest.raises(ValueError):
        solve_one_player_binary(inst, inst.start)


def test_strategy_names():
    inst = fig10()
    _, sig = solve_one_player_binary(inst, inst.start)
    assert set(strategy_names(inst, sig)) == {"u2", "u4"}


@settings(max_examples=400, deadline=None)
@given(seeds, st.data())
def test_window_scan_matches_naive_candidates(seed, data):
    inst = one_player(seed)
    g = inst.graph
    plain = [v for v in g.plain() if len(g.out_nbrs[v]) >= 1]
    v = data.draw(st.sampled_from(plain))
    nb = list(g.out_nbrs[v])
    u = data.draw(st.sampled_from(nb + [None]))
    kids = [w for w in nb if w != u]
    r = {w: data.draw(st.one_of(st.integers(1, 12), st.just(INF))) for w in kids}
    val = {w: data.draw(st.integers(0, 1)) for w in kids}
    owner = data.draw(st.sampled_from(["max", "min"]))
    assert optimal_strategy_routine(g, v, u, r, val, owner) == optimal_strategy_by_candidates(g, v, u, r, val, owner)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_one_player_binary_matches_enumeration(seed):
    inst = one_player(seed)
    val, sig = solve_one_player_binary(inst, inst.start)
    assert val == enumerate_one_player(inst, inst.start)[0]
    assert value_under_strategies(inst, sig, None, inst.start) == val


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_one_player_integer_matches_enumeration(seed):
    inst = one_player(seed, (0, 1, 2, 3, 7))
    assert solve_one_player_integer(inst, inst.start) == enumerate_one_player(inst, inst.start)[0]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_two_player_equilibrium(seed):
    inst = two_player(seed)
    val, sig, tau = solve_two_player_binary(inst, inst.start)
    rows, cols, _ = value_grid(inst, inst.start)
    assert all(value_under_strategies(inst, sig, c, inst.start) >= val for c in cols)
    assert all(value_under_strategies(inst, r, tau, inst.start) <= val for r in rows)
    assert enumerate_two_player(inst, inst.start) == (val, val)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_two_player_integer(seed):
    inst = two_player(seed, (0, 1, 2, 5))
    val = solve_two_player_integer(inst, inst.start)
    assert enumerate_two_player(inst, inst.start) == (val, val)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_free_rotor_order_variant(seed):
    inst = one_player(seed, max_n=9)
    try:
        ref = enumerate_free_rotor_order(inst, inst.start)
    except BudgetExceeded:
        assume(False)
    assert solve_one_player_variant(inst, inst.start, "free_rotor_order") == ref


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_free_per_visit_variant(seed):
    inst = one_player(seed, (0, 1, 3), max_n=10)
    assert solve_one_player_variant(inst, inst.start, "free_per_visit") == per_visit_value(inst, inst.start)


def test_unknown_variant():
    inst = fig10()
    with pytest.raises(ValueError):
        solve_one_player_variant(inst, inst.start, "nope")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_two_player_integer_witness(seed):
    inst = two_player(seed, (0, 2, 3, 6))
    val, sig, tau = solve_two_player_integer(inst, inst.start, with_witness=True)
    rows, cols, _ = value_grid(inst, inst.start)
    assert all(value_under_strategies(inst, sig, c, inst.start) >= val for c in cols)
    assert all(value_under_strategies(inst, r, tau, inst.start) <= val for r in rows)
