import pytest

from rotortree.figures import fig2, fig8, fig10, fig12
from rotortree.oracle import (BudgetExceeded, EnumerationBudget, enumerate_one_player, enumerate_two_player,
                              exit_by_simulation, per_visit_value, value_grid)


def test_budget_validation():
    with pytest.raises(ValueError):
        EnumerationBudget(0)
    with pytest.raises(ValueError):
        EnumerationBudget(10, max_steps=0)


def test_exit_by_simulation_cap():
    inst = fig2()
    g = inst.graph
    assert g.names[exit_by_simulation(g, inst.full_config(), inst.start)] == "s2"
    assert exit_by_simulation(g, inst.full_config(), inst.start, EnumerationBudget(10, max_steps=2)) == "cap_hit"


def test_one_player_enumeration_fig8():
    inst = fig8()
    g = inst.graph
    val, arg = enumerate_one_player(inst, g.vertex("v"))
    assert val == 1
    assert any(g.names[g.head[s[g.vertex("g")]]] == "v" for s in arg)


def test_budget_is_enforced():
    inst = fig10()
    with pytest.raises(BudgetExceeded):
        enumerate_one_player(inst, inst.start, EnumerationBudget(2))


def test_fig12_grid_has_no_pure_equilibrium():
    inst = fig12()
    rows, cols, grid = value_grid(inst, inst.start)
    assert grid == [[0, 1, 1], [1, 1, 0]]
    assert enumerate_two_player(inst, inst.start) == (0, 1)


def test_per_visit_at_least_fixed_strategy():
    inst = fig10()
    assert per_visit_value(inst, inst.start) >= enumerate_one_player(inst, inst.start)[0]
