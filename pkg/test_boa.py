# -*- coding: utf-8 -*-
"""Tests del BOA: conteo de CPTs, muestreo, reemplazo y ciclo generacional."""
import math

import numpy as np
import pytest

from boa import (
    REPORT_COLUMNS,
    BoaConfig,
    BoaModel,
    Individual,
    learn_cpts,
    evolve,
    read_report_csv,
    replace_population,
    sample_string,
)
from lcs import ConfigError, HcConfig
from nurse_model import Fitness, GenConfig, evaluate, generate_instance


def _ind(total, generation, genotype):
    return Individual(tuple(genotype), Fitness(total, total, 0), generation)

# ==============================================================================
# CPTs
# ==============================================================================

def test_learn_cpts_counts_without_smoothing():
    model = learn_cpts([(0, 0), (0, 1), (1, 1)], n_steps=2, alpha=0)
    assert model.marginal.tolist() == pytest.approx([2 / 3, 1 / 3, 0, 0])
    assert model.cpt(1)[0].tolist() == pytest.approx([0.5, 0.5, 0, 0])
    assert model.cpt(1)[1].tolist() == pytest.approx([0, 1, 0, 0])
    # padres nunca vistos quedan uniformes
    assert model.cpt(1)[3].tolist() == pytest.approx([0.25] * 4)


def test_learn_cpts_laplace():
    model = learn_cpts([(0, 0), (0, 1), (1, 1)], n_steps=2, k=2, alpha=1)
    assert model.marginal.tolist() == pytest.approx([3 / 5, 2 / 5])
    assert model.cpt(1)[0].tolist() == pytest.approx([2 / 4, 2 / 4])
    assert model.cpt(1)[1].tolist() == pytest.approx([1 / 3, 2 / 3])


def test_learn_cpts_empty_elite():
    model = learn_cpts([], n_steps=3, alpha=1)
    assert model.marginal.tolist() == pytest.approx([0.25] * 4)
    assert np.allclose(model.transitions, 0.25)
    with pytest.raises(ConfigError):
        learn_cpts([], n_steps=3, alpha=0)


def _loop_counter_model(elite, n_steps, k, alpha):
    """Conteo con bucles de Python, sin numpy."""
    marginal = []
    for r in range(k):
        count = sum(1 for x in elite if x[0] == r)
        marginal.append((count + alpha) / (len(elite) + k * alpha))
    tables = []
    for i in range(1, n_steps):
        rows = []
        for prev in range(k):
            parent = sum(1 for x in elite if x[i - 1] == prev)
            if parent + k * alpha == 0:
                rows.append([1.0 / k] * k)
                continue
            rows.append([
                (sum(1 for x in elite if x[i - 1] == prev and x[i] == nxt) + alpha) / (parent + k * alpha)
                for nxt in range(k)
            ])
        tables.append(rows)
    return marginal, tables


def test_learn_cpts_matches_loop_counter():
    rng = np.random.default_rng(21)
    for case in range(200):
        size = int(rng.integers(1, 21))
        n_steps = int(rng.integers(1, 7))
        k = int(rng.integers(1, 5))
        alpha = (0.0, 0.5, 1.0)[case % 3]
        elite = [tuple(int(r) for r in row) for row in rng.integers(0, k, size=(size, n_steps))]

        model = learn_cpts(elite, n_steps, k, alpha)
        model.validate()

        marginal, tables = _loop_counter_model(elite, n_steps, k, alpha)
        for r in range(k):
            assert abs(model.marginal[r] - marginal[r]) <= 1e-12
        for i in range(1, n_steps):
            for prev in range(k):
                for nxt in range(k):
                    assert abs(model.cpt(i)[prev][nxt] - tables[i - 1][prev][nxt]) <= 1e-12


def test_learn_cpts_rejects_bad_rules():
    with pytest.raises(ConfigError):
        learn_cpts([(0, 5)], n_steps=2, alpha=1)
    with pytest.raises(ConfigError):
        learn_cpts([(0, 1)], n_steps=2, alpha=-1)


def test_cpt_of_root_has_no_parent():
    with pytest.raises(IndexError):
        BoaModel.uniform(3).cpt(0)


def test_uniform_entropy():
    assert BoaModel.uniform(4).entropy() == pytest.approx(math.log(4))
    # marginal degenerada; en la transicion solo la fila del padre 2 es degenerada
    degenerate = learn_cpts([(2, 1)], n_steps=2, alpha=0)
    assert degenerate.entropy() == pytest.approx(0.75 * math.log(4) / 2)

# ==============================================================================
# MUESTREO
# ==============================================================================

def test_sample_uniform_model_frequencies():
    rng = np.random.default_rng(0)
    model = BoaModel.uniform(3)
    samples = np.array([sample_string(model, rng) for _ in range(20_000)])
    for step in range(3):
        freq = np.bincount(samples[:, step], minlength=4) / len(samples)
        assert np.all(np.abs(freq - 0.25) < 0.02)


def test_sample_degenerate_model():
    rng = np.random.default_rng(3)
    model = learn_cpts([(2, 1, 3)], n_steps=3, alpha=0)
    assert {sample_string(model, rng) for _ in range(200)} == {(2, 1, 3)}


def test_sample_consumes_one_draw_per_node():
    rng = np.random.default_rng(4)
    reference = np.random.default_rng(4)
    sample_string(BoaModel.uniform(6), rng)
    for _ in range(6):
        reference.random()
    assert rng.random() == reference.random()

# ==============================================================================
# REEMPLAZO
# ==============================================================================

def test_replace_population_prefers_older_on_ties():
    population = [_ind(5, 0, (1, 1)), _ind(3, 0, (0, 0))]
    offspring = [_ind(3, 1, (0, 1)), _ind(7, 1, (2, 2))]
    kept = replace_population(population, offspring, 2)
    assert [ind.genotype for ind in kept] == [(0, 0), (0, 1)]


def test_replace_population_genotype_tie_break():
    population = [_ind(2, 0, (3, 0)), _ind(2, 0, (1, 2))]
    kept = replace_population(population, [_ind(1, 1, (0, 0))], 2)
    assert [ind.genotype for ind in kept] == [(0, 0), (1, 2)]


def test_replace_population_by_fitness():
    kept = replace_population([_ind(5, 0, (0,)), _ind(7, 0, (1,))], [_ind(6, 1, (2,))], 2)
    assert [ind.fitness.total for ind in kept] == [5, 6]

    incumbents = [_ind(1, 0, (0,)), _ind(2, 0, (1,))]
    assert replace_population(incumbents, [_ind(9, 1, (2,))], 2) == incumbents

    kept = replace_population([_ind(6, 0, (3,))], [_ind(6, 1, (0,))], 1)
    assert kept[0].birth_generation == 0


def test_replace_population_keeps_size():
    population = [_ind(t, 0, (t,)) for t in range(4)]
    kept = replace_population(population, [_ind(0.5, 1, (0,))], 4)
    assert len(kept) == 4
    assert [ind.fitness.total for ind in kept] == [0, 0.5, 1, 2]

# ==============================================================================
# CONFIG
# ==============================================================================

def test_boa_config_defaults():
    config = BoaConfig()
    assert config.offspring == 50
    assert config.elite_size == 50
    assert BoaConfig(population_size=7, elite_fraction=0.3).elite_size == 3
    assert config.as_dict()["hc"] == {"iterations": 50, "delta": 0.1}


@pytest.mark.parametrize("kwargs", [
    {"population_size": 0},
    {"elite_fraction": 0},
    {"elite_fraction": 1.5},
    {"offspring_count": 0},
    {"smoothing": -0.1},
    {"stagnation_limit": 0},
    {"max_evaluations": 10},
    {"hc": HcConfig(iterations=-1)},
])
def test_boa_config_invalid(kwargs):
    with pytest.raises(ConfigError):
        BoaConfig(**kwargs).validate()

# ==============================================================================
# CICLO GENERACIONAL
# ==============================================================================

SMALL = dict(population_size=20, offspring_count=10, max_generations=15)


def test_evolve_best_is_monotone_and_counts_evaluations():
    instance = generate_instance(GenConfig(nurses=8, seed=3))
    report = evolve(instance, BoaConfig(seed=1, **SMALL))
    bests = [r["best_fitness"] for r in report.records]
    assert all(b2 <= b1 for b1, b2 in zip(bests, bests[1:]))
    assert report.records[0]["generation"] == 0
    assert report.evaluations == 20 + report.generations * 10
    assert [r["evaluations"] for r in report.records] == [20 + g * 10 for g in range(report.generations + 1)]
    assert report.hc_evaluations == 0
    assert report.best.fitness == evaluate(instance, report.best.schedule)


def test_evolve_is_deterministic():
    instance = generate_instance(GenConfig(nurses=8, seed=3))
    for lcs_enabled in (False, True):
        config = BoaConfig(seed=99, lcs_enabled=lcs_enabled, **SMALL)
        a = evolve(instance, config)
        b = evolve(instance, config)
        assert a.records == b.records
        assert a.best == b.best
        assert a.evaluations == b.evaluations


def test_evolve_solves_planted_instance(planted_instance):
    report = evolve(planted_instance, BoaConfig(seed=7, lcs_enabled=True))
    assert report.best.fitness.total == 0


def test_evolve_respects_evaluation_budget():
    instance = generate_instance(GenConfig(nurses=10, seed=5))
    report = evolve(instance, BoaConfig(seed=0, max_evaluations=250, population_size=50,
                                        offspring_count=25, stagnation_limit=1000))
    assert report.evaluations == 250

    report = evolve(instance, BoaConfig(seed=0, max_evaluations=400, population_size=50,
                                        offspring_count=25, lcs_enabled=True,
                                        stagnation_limit=1000, hc=HcConfig(iterations=10)))
    assert report.total_evaluations <= 400
    assert report.hc_evaluations > 0


def test_evolve_stops_on_stagnation(planted_instance):
    optimum = (0,) * planted_instance.n_nurses
    report = evolve(planted_instance, BoaConfig(seed=2, stagnation_limit=3, **SMALL),
                    initial=[optimum])
    assert report.records[0]["best_fitness"] == 0
    assert report.generations == 3


def test_evolve_seeds_initial_rule_strings(planted_instance):
    all_cost_greedy = (0,) * planted_instance.n_nurses
    report = evolve(planted_instance, BoaConfig(seed=0, max_generations=0),
                    initial=[all_cost_greedy])
    assert len(report.records) == 1
    assert report.best.fitness.total == 0
    assert report.best.genotype == all_cost_greedy


def test_report_csv_header(tmp_path):
    instance = generate_instance(GenConfig(nurses=4, seed=0))
    report = evolve(instance, BoaConfig(seed=0, max_generations=2, population_size=6))
    path = tmp_path / "report.csv"
    report.write_csv(path)
    first_line = path.read_text(encoding="utf-8").splitlines()[0]
    assert first_line == ",".join(REPORT_COLUMNS)
    assert len(read_report_csv(path)) == len(report.records)


def test_solution_document(planted_instance):
    report = evolve(planted_instance, BoaConfig(seed=0, lcs_enabled=True, **SMALL))
    doc = report.solution_document()
    assert doc["algorithm"] == "boa+lcs"
    assert len(doc["rule_string"]) == planted_instance.n_nurses
    assert len(doc["schedule"]) == planted_instance.n_nurses
    assert doc["history"][0]["model_entropy"] is None
    assert doc["history"][1]["hc_accepted"] is not None
