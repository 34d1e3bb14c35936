#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
BOA sobre rule strings
Red bayesiana de estructura fija (cadena X0 -> X1 -> ... -> X(N-1)) cuyas
tablas de probabilidad condicional se aprenden contando sobre los mejores
rule strings de la poblacion. Se muestrean hijos, se decodifican y se
reemplaza la poblacion por truncamiento. Opcionalmente el LCS refina al
mejor hijo de cada generacion.
"""
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from construction import N_RULES, RULE_NAMES, decode, validate_rule_string
from lcs import ConfigError, HcConfig, StrengthTable, hill_climb, reinforce, roulette
from nurse_model import Fitness, Instance, Schedule

# ==============================================================================
# CONFIGURACION
# ==============================================================================

POPULATION_SIZE = 100
ELITE_FRACTION = 0.5
SMOOTHING = 1.0
MAX_GENERATIONS = 200
STAGNATION_LIMIT = 50

ROW_TOLERANCE = 1e-9

REPORT_COLUMNS = ["generation", "best_fitness", "mean_fitness", "evaluations"]

# ==============================================================================
# MODELO
# ==============================================================================

@dataclass
class BoaModel:
    """
    Red en cadena. `marginal` es P(X0); `transitions[i - 1]` es la tabla
    T[i][prev][next] = P(Xi = next | X(i-1) = prev) para i = 1..n_steps-1.
    """
    n_steps: int
    k: int
    marginal: np.ndarray
    transitions: np.ndarray

    @classmethod
    def uniform(cls, n_steps: int, k: int = N_RULES) -> "BoaModel":
        return cls(
            n_steps=n_steps,
            k=k,
            marginal=np.full(k, 1.0 / k),
            transitions=np.full((max(n_steps - 1, 0), k, k), 1.0 / k),
        )

    def cpt(self, step: int) -> np.ndarray:
        if not 1 <= step < self.n_steps:
            raise IndexError(f"el paso {step} no tiene padre (n_steps={self.n_steps})")
        return self.transitions[step - 1]

    def validate(self, tol: float = ROW_TOLERANCE):
        if (self.marginal < 0).any() or (self.transitions < 0).any():
            raise ConfigError("probabilidades negativas en el modelo")
        if abs(self.marginal.sum() - 1.0) > tol:
            raise ConfigError(f"la marginal suma {self.marginal.sum()}")
        if self.transitions.size and (np.abs(self.transitions.sum(axis=2) - 1.0) > tol).any():
            raise ConfigError("una fila de transicion no suma 1")

    def entropy(self) -> float:
        """Entropia media por nodo (nats); baja a medida que el modelo converge."""
        def row_entropy(p):
            p = p[p > 0]
            return float(-(p * np.log(p)).sum())

        values = [row_entropy(self.marginal)]
        for table in self.transitions:
            values.append(float(np.mean([row_entropy(row) for row in table])))
        return float(np.mean(values)) if self.n_steps else 0.0


def learn_cpts(elite: Sequence[Sequence[int]], n_steps: int, k: int = N_RULES,
               alpha: float = SMOOTHING) -> BoaModel:
    """
    Estimacion por conteo con suavizado de Laplace alpha.

    marginal[r]   = (#{x0 = r} + a) / (|E| + k a)
    T[i][r'][r]   = (#{x(i-1) = r', xi = r} + a) / (#{x(i-1) = r'} + k a)

    Con alpha = 0 una fila cuyo padre nunca aparece en la elite queda uniforme;
    esa fila no se alcanza al muestrear.
    """
    if alpha < 0:
        raise ConfigError(f"alpha debe ser >= 0 (llego {alpha})")
    if not elite and alpha == 0:
        raise ConfigError("elite vacia con alpha = 0")

    data = np.asarray(elite, dtype=np.int64).reshape(len(elite), n_steps)
    if data.size and (data.min() < 0 or data.max() >= k):
        raise ConfigError(f"la elite tiene reglas fuera de [0, {k})")

    if n_steps == 0:
        return BoaModel(0, k, np.full(k, 1.0 / k), np.zeros((0, k, k)))

    counts0 = np.bincount(data[:, 0], minlength=k).astype(float)
    marginal = (counts0 + alpha) / (len(elite) + k * alpha)

    transitions = np.empty((n_steps - 1, k, k))
    for i in range(1, n_steps):
        pair = np.zeros((k, k))
        np.add.at(pair, (data[:, i - 1], data[:, i]), 1.0)
        parent = pair.sum(axis=1, keepdims=True)
        denom = parent + k * alpha
        with np.errstate(invalid="ignore", divide="ignore"):
            rows = np.where(denom > 0, (pair + alpha) / denom, 1.0 / k)
        transitions[i - 1] = rows

    return BoaModel(n_steps=n_steps, k=k, marginal=marginal, transitions=transitions)


def sample_string(model: BoaModel, rng: np.random.Generator) -> Tuple[int, ...]:
    """Muestreo hacia adelante por la cadena; un numero del rng por nodo."""
    if model.n_steps == 0:
        return ()
    x = [roulette(model.marginal, rng)]
    for i in range(1, model.n_steps):
        x.append(roulette(model.transitions[i - 1][x[-1]], rng))
    return tuple(x)

# ==============================================================================
# POBLACION
# ==============================================================================

@dataclass(frozen=True)
class Individual:
    genotype: Tuple[int, ...]
    fitness: Fitness
    birth_generation: int
    schedule: Optional[Schedule] = None

    def sort_key(self):
        return (self.fitness.total, self.birth_generation, self.genotype)


def replace_population(population: List[Individual], offspring: List[Individual],
                       size: int) -> List[Individual]:
    """Truncamiento sobre la union: fitness, luego generacion de nacimiento, luego genotipo."""
    merged = sorted(list(population) + list(offspring), key=Individual.sort_key)
    return merged[:size]

# ==============================================================================
# CONFIGURACION DE CORRIDA
# ==============================================================================

@dataclass(frozen=True)
class BoaConfig:
    population_size: int = POPULATION_SIZE
    elite_fraction: float = ELITE_FRACTION
    offspring_count: Optional[int] = None
    smoothing: float = SMOOTHING
    max_generations: int = MAX_GENERATIONS
    stagnation_limit: int = STAGNATION_LIMIT
    lcs_enabled: bool = False
    seed: int = 0
    hc: HcConfig = field(default_factory=HcConfig)
    max_evaluations: Optional[int] = None

    @property
    def offspring(self) -> int:
        if self.offspring_count is not None:
            return self.offspring_count
        return max(1, self.population_size // 2)

    @property
    def elite_size(self) -> int:
        return math.ceil(self.elite_fraction * self.population_size)

    def validate(self):
        if self.population_size < 1:
            raise ConfigError("population_size debe ser >= 1")
        if not 0 < self.elite_fraction <= 1:
            raise ConfigError(f"elite_fraction debe estar en (0, 1] (llego {self.elite_fraction})")
        if self.offspring < 1:
            raise ConfigError("offspring_count debe ser >= 1")
        if self.smoothing < 0:
            raise ConfigError("smoothing debe ser >= 0")
        if self.max_generations < 0 or self.stagnation_limit < 1:
            raise ConfigError("max_generations >= 0 y stagnation_limit >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed debe ser un entero sin signo de 64 bits")
        if self.max_evaluations is not None and self.max_evaluations < self.population_size:
            raise ConfigError(
                f"presupuesto {self.max_evaluations} menor que la poblacion {self.population_size}"
            )
        self.hc.validate()

    def as_dict(self) -> Dict[str, Any]:
        return {
            "population_size": self.population_size,
            "elite_fraction": self.elite_fraction,
            "offspring_count": self.offspring,
            "smoothing": self.smoothing,
            "max_generations": self.max_generations,
            "stagnation_limit": self.stagnation_limit,
            "lcs_enabled": self.lcs_enabled,
            "seed": self.seed,
            "hc": self.hc.as_dict(),
            "max_evaluations": self.max_evaluations,
        }

# ==============================================================================
# REPORTE
# ==============================================================================

@dataclass
class RunReport:
    records: List[Dict[str, Any]]
    best: Individual
    config: Dict[str, Any]
    seed: int
    evaluations: int
    hc_evaluations: int = 0
    table: Optional[StrengthTable] = None
    algorithm: str = "boa"

    @property
    def generations(self) -> int:
        return self.records[-1]["generation"] if self.records else 0

    @property
    def total_evaluations(self) -> int:
        return self.evaluations + self.hc_evaluations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=REPORT_COLUMNS)

    def write_csv(self, path: Path):
        self.to_frame().to_csv(path, index=False, lineterminator="\n")

    def solution_document(self) -> Dict[str, Any]:
        best = self.best
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "rule_string": list(best.genotype),
            "rule_names": [RULE_NAMES[r] for r in best.genotype],
            "schedule": list(best.schedule.assignment) if best.schedule else None,
            "fitness": best.fitness.as_dict(),
            "birth_generation": best.birth_generation,
            "generations": self.generations,
            "evaluations": self.evaluations,
            "hc_evaluations": self.hc_evaluations,
            "history": [
                {k: r.get(k) for k in ("generation", "model_entropy", "hc_accepted")}
                for r in self.records
            ],
            "config": self.config,
        }


def read_report_csv(path: Path) -> List[Dict[str, Any]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))

# ==============================================================================
# CICLO GENERACIONAL
# ==============================================================================

def evolve(instance: Instance, config: BoaConfig,
           initial: Optional[Sequence[Sequence[int]]] = None,
           verbose: bool = False) -> RunReport:
    """
    Corre el BOA (y el LCS si config.lcs_enabled) sobre la instancia.

    Subflujos del rng, todos hijos de SeedSequence(seed) y creados en este orden:
      1. muestreo de los P rule strings iniciales
      2. un flujo por individuo inicial para decodificarlo
      por generacion:
      3. muestreo de los M hijos (en orden)
      4. un flujo por hijo para decodificarlo (en orden)
      5. hill climb (solo si lcs_enabled)
    Mismo seed, misma instancia y misma config dan el mismo reporte.
    """
    config.validate()
    n_steps = instance.n_nurses
    k = N_RULES
    P = config.population_size
    M = config.offspring
    seed_seq = np.random.SeedSequence(config.seed)

    def next_stream() -> np.random.Generator:
        return np.random.default_rng(seed_seq.spawn(1)[0])

    sample_rng = next_stream()
    genotypes = [tuple(int(r) for r in row) for row in sample_rng.integers(0, k, size=(P, n_steps))]
    for i, rs in enumerate(list(initial or [])[:P]):
        validate_rule_string(instance, rs)
        genotypes[i] = tuple(int(r) for r in rs)

    population = []
    for rs in genotypes:
        schedule, fitness = decode(instance, rs, next_stream())
        population.append(Individual(rs, fitness, 0, schedule))
    population = replace_population(population, [], P)
    evaluations = P
    hc_evaluations = 0

    table = StrengthTable.fresh(n_steps, k) if config.lcs_enabled else None
    hc_cost = config.hc.iterations if config.lcs_enabled else 0

    def record(generation, entropy=None, hc_accepted=None):
        totals = [ind.fitness.total for ind in population]
        return {
            "generation": generation,
            "best_fitness": population[0].fitness.total,
            "mean_fitness": float(np.mean(totals)),
            "evaluations": evaluations,
            "model_entropy": entropy,
            "hc_accepted": hc_accepted,
        }

    records = [record(0)]
    best_total = population[0].fitness.total
    stagnant = 0
    if verbose:
        print(f"  [gen 0] best={best_total} mean={records[-1]['mean_fitness']:.2f}")

    for generation in range(1, config.max_generations + 1):
        if stagnant >= config.stagnation_limit:
            break
        if config.max_evaluations is not None and \
                evaluations + hc_evaluations + M + hc_cost > config.max_evaluations:
            break

        elite = [ind.genotype for ind in population[:config.elite_size]]
        model = learn_cpts(elite, n_steps, k, config.smoothing)

        sample_rng = next_stream()
        children = [sample_string(model, sample_rng) for _ in range(M)]
        offspring = []
        for rs in children:
            schedule, fitness = decode(instance, rs, next_stream())
            offspring.append(Individual(rs, fitness, generation, schedule))
        evaluations += M

        hc_accepted = None
        if config.lcs_enabled:
            best_idx = min(range(M), key=lambda i: offspring[i].sort_key())
            champion = offspring[best_idx]
            result = hill_climb(instance, champion.genotype, table, config.hc, next_stream(),
                                start_decoded=(champion.schedule, champion.fitness))
            hc_evaluations += result.evaluations
            hc_accepted = len(result.accepted)
            if result.accepted:
                offspring[best_idx] = Individual(result.rule_string, result.fitness,
                                                 generation, result.schedule)
            reinforce(table, offspring[best_idx].genotype, config.hc.delta)

        population = replace_population(population, offspring, P)
        records.append(record(generation, model.entropy(), hc_accepted))

        current = population[0].fitness.total
        if current < best_total:
            best_total = current
            stagnant = 0
        else:
            stagnant += 1

        if verbose:
            print(f"  [gen {generation}] best={current} mean={records[-1]['mean_fitness']:.2f} "
                  f"H={records[-1]['model_entropy']:.3f}")

    return RunReport(
        records=records,
        best=population[0],
        config=config.as_dict(),
        seed=config.seed,
        evaluations=evaluations,
        hc_evaluations=hc_evaluations,
        table=table,
        algorithm="boa+lcs" if config.lcs_enabled else "boa",
    )
