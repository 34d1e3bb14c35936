# -*- coding: utf-8 -*-
"""Tests de la ruleta, el refuerzo y el hill climber."""
import itertools

import numpy as np
import pytest

from construction import N_RULES, RANDOM_CHEAPEST, decode
from lcs import (
    ConfigError,
    HcConfig,
    SelectionError,
    StrengthTable,
    hill_climb,
    reinforce,
    roulette,
    select_rule_string,
)
from nurse_model import GenConfig, generate_instance

# ==============================================================================
# RULETA
# ==============================================================================

def test_roulette_single_positive_weight():
    rng = np.random.default_rng(0)
    assert {roulette([0, 0, 5, 0], rng) for _ in range(100)} == {2}


def test_roulette_frequencies():
    rng = np.random.default_rng(1)
    picks = np.array([roulette([1, 3], rng) for _ in range(20_000)])
    assert abs((picks == 1).mean() - 0.75) < 0.02


def test_roulette_invalid_weights():
    rng = np.random.default_rng(0)
    for weights in ([], [0, 0], [1, -1]):
        with pytest.raises(SelectionError):
            roulette(weights, rng)


def test_roulette_consumes_one_draw():
    rng = np.random.default_rng(8)
    reference = np.random.default_rng(8)
    roulette([1, 2, 3, 4], rng)
    reference.random()
    assert rng.random() == reference.random()

# ==============================================================================
# TABLA DE FUERZAS
# ==============================================================================

def test_reinforce_updates_only_used_rules():
    table = StrengthTable.fresh(3)
    reinforce(table, (0, 2, 3), 0.5)
    assert table.s[0].tolist() == [1.5, 1.0, 1.0, 1.0]
    assert table.s[1].tolist() == [1.0, 1.0, 1.5, 1.0]
    assert table.s[2].tolist() == [1.0, 1.0, 1.0, 1.5]


def test_reinforce_is_capped():
    table = StrengthTable.fresh(1, initial=9.0, cap=10.0)
    for _ in range(5):
        reinforce(table, (1,), 0.75)
    assert table.s[0, 1] == 10.0
    assert table.s[0, 0] == 9.0


def test_reinforce_zero_delta_is_noop():
    table = StrengthTable.fresh(2)
    reinforce(table, (1, 1), 0.0)
    assert np.all(table.s == 1.0)


def test_reinforce_errors():
    table = StrengthTable.fresh(2)
    with pytest.raises(SelectionError):
        reinforce(table, (1,), 0.1)
    with pytest.raises(ConfigError):
        reinforce(table, (1, 1), -0.1)


def test_fresh_table_rejects_bad_initial():
    with pytest.raises(ConfigError):
        StrengthTable.fresh(2, initial=0)
    with pytest.raises(ConfigError):
        StrengthTable.fresh(2, initial=5, cap=1)


def test_probabilities_and_dump():
    table = StrengthTable.fresh(2)
    reinforce(table, (0, 0), 1.0)
    assert table.probabilities(0).tolist() == pytest.approx([0.4, 0.2, 0.2, 0.2])
    lines = table.dump().splitlines()
    assert lines[0].startswith("# n_steps=2 k=4")
    assert lines[1] == "step 0: 2.000000 1.000000 1.000000 1.000000"
    assert len(lines) == 3


def test_select_rule_string_length():
    rng = np.random.default_rng(2)
    table = StrengthTable.fresh(6)
    rs = select_rule_string(table, rng)
    assert len(rs) == 6
    assert all(0 <= r < N_RULES for r in rs)

# ==============================================================================
# HILL CLIMB
# ==============================================================================

def test_hill_climb_zero_iterations(worked_instance):
    table = StrengthTable.fresh(2)
    result = hill_climb(worked_instance, (0, 0), table, HcConfig(iterations=0), np.random.default_rng(0))
    assert result.rule_string == (0, 0)
    assert result.fitness.total == 10
    assert result.evaluations == 1
    assert result.accepted == []
    assert np.all(table.s == 1.0)


def test_hill_climb_reuses_start_decoded(worked_instance):
    start = decode(worked_instance, (0, 0))
    result = hill_climb(worked_instance, (0, 0), StrengthTable.fresh(2), HcConfig(iterations=0),
                        np.random.default_rng(0), start_decoded=start)
    assert result.evaluations == 0
    assert (result.schedule, result.fitness) == start


def test_hill_climb_never_worse():
    rng = np.random.default_rng(0)
    instances = [generate_instance(GenConfig(nurses=4, patterns_per_nurse=3, seed=seed)) for seed in range(50)]
    for trial in range(10_000):
        instance = instances[trial % 50]
        start = tuple(int(r) for r in rng.integers(0, N_RULES, size=4))
        start_total = decode(instance, start, np.random.default_rng(trial))[1].total
        result = hill_climb(instance, start, StrengthTable.fresh(4), HcConfig(iterations=3),
                            np.random.default_rng(trial))
        assert result.fitness.total <= start_total
        assert result.evaluations <= 4
        assert len(result.accepted) <= 3


def test_hill_climb_accepted_is_strictly_decreasing():
    instance = generate_instance(GenConfig(nurses=12, seed=6))
    start = (0,) * 12
    start_total = decode(instance, start)[1].total
    result = hill_climb(instance, start, StrengthTable.fresh(12), HcConfig(iterations=200),
                        np.random.default_rng(4))
    trajectory = [start_total] + result.accepted
    assert all(b < a for a, b in zip(trajectory, trajectory[1:]))
    if result.accepted:
        assert result.accepted[-1] == result.fitness.total


def test_hill_climb_reinforces_on_improvement(worked_instance):
    table = StrengthTable.fresh(2)
    result = hill_climb(worked_instance, (0, 0), table, HcConfig(iterations=50, delta=0.5),
                        np.random.default_rng(1))
    if result.accepted:
        assert table.s.sum() > 8.0
    else:
        assert table.s.sum() == 8.0


def test_hill_climb_escapes_worked_instance(worked_instance):
    # desde (0,0) el total es 10; un solo cambio a la regla 1 en el paso 0 da 1
    reached = 0
    for seed in range(100):
        result = hill_climb(worked_instance, (0, 0), StrengthTable.fresh(2), HcConfig(iterations=50),
                            np.random.default_rng(seed))
        reached += result.fitness.total == 1
    assert reached >= 95


def test_hill_climb_with_degenerate_table(worked_instance):
    # la tabla solo propone la regla 1 en el paso 0; el resto de los pasos queda fijo
    table = StrengthTable.fresh(2)
    table.s[:] = 1e-12
    table.s[0, 1] = 1.0
    table.s[1, 0] = 1.0
    result = hill_climb(worked_instance, (0, 0), table, HcConfig(iterations=20, delta=0.0),
                        np.random.default_rng(3))
    assert result.rule_string == (1, 0)
    assert result.fitness.total == 1
    assert result.accepted == [1]


def _concentrated_table(target):
    table = StrengthTable.fresh(len(target))
    table.s[:] = 0.0
    for i, r in enumerate(target):
        table.s[i, r] = 1.0
    return table


def _best_deterministic_string(instance):
    # reglas 0..2; min() deja el primero en orden lexicografico ante empates
    candidates = itertools.product(range(RANDOM_CHEAPEST), repeat=instance.n_nurses)
    return min(candidates, key=lambda rs: decode(instance, rs)[1].total)


@pytest.mark.parametrize("nurses", [2, 3])
@pytest.mark.parametrize("seed", range(4))
def test_hill_climb_degenerate_table_exhaustive(nurses, seed):
    instance = generate_instance(GenConfig(nurses=nurses, patterns_per_nurse=3, seed=seed))
    target = _best_deterministic_string(instance)
    best_total = decode(instance, target)[1].total

    for start in itertools.product(range(N_RULES), repeat=nurses):
        table = _concentrated_table(target)
        rng = np.random.default_rng(sum(start) + 17 * seed)
        result = hill_climb(instance, start, table, HcConfig(iterations=100, delta=0.0), rng)

        assert len(result.accepted) <= nurses * N_RULES
        assert len(result.accepted) <= sum(a != b for a, b in zip(start, target))
        assert all(b < a for a, b in zip(result.accepted, result.accepted[1:]))
        assert all(r in (s, t) for r, s, t in zip(result.rule_string, start, target))
        assert np.all(table.s == _concentrated_table(target).s)
        if result.rule_string == target:
            assert result.fitness.total == best_total

        if RANDOM_CHEAPEST in start:
            continue
        assert result.fitness.total <= decode(instance, start)[1].total
        if sum(a != b for a, b in zip(start, target)) <= 1:
            assert result.fitness.total <= best_total
        if result.fitness.total > best_total:
            # sin vecino hacia el objetivo que mejore: optimo local de la tabla
            for i, r in enumerate(target):
                if result.rule_string[i] == r:
                    continue
                neighbour = list(result.rule_string)
                neighbour[i] = r
                assert decode(instance, neighbour)[1].total >= result.fitness.total


def test_reinforce_two_by_two_table():
    table = StrengthTable.fresh(2, k=2)
    untouched = (table.s[0, 1], table.s[1, 0])
    reinforce(table, (0, 1), 0.1)
    assert table.s[0, 0] == pytest.approx(1.1)
    assert table.s[1, 1] == pytest.approx(1.1)
    assert (table.s[0, 1], table.s[1, 0]) == untouched


def test_reinforce_at_cap_stays():
    table = StrengthTable.fresh(1, initial=1000.0)
    reinforce(table, (2,), 0.1)
    assert table.s[0, 2] == 1000.0
