#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tabla de fuerzas estilo LCS
Cada (paso, regla) tiene una fuerza positiva. Las reglas se eligen por ruleta,
las usadas en una mejora se refuerzan y las no usadas quedan intactas.
El hill climber usa la tabla para refinar rule strings del BOA.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from construction import N_RULES, decode
from nurse_model import Fitness, Instance, Schedule

# ==============================================================================
# CONFIGURACION
# ==============================================================================

INITIAL_STRENGTH = 1.0
MAX_STRENGTH = 1000.0
HC_ITERATIONS = 50
HC_DELTA = 0.1


class SelectionError(ValueError):
    pass


class ConfigError(ValueError):
    pass

# ==============================================================================
# TIPOS
# ==============================================================================

@dataclass(frozen=True)
class HcConfig:
    iterations: int = HC_ITERATIONS
    delta: float = HC_DELTA

    def validate(self):
        if self.iterations < 0:
            raise ConfigError(f"hc.iterations debe ser >= 0 (llego {self.iterations})")
        if self.delta < 0:
            raise ConfigError(f"hc.delta debe ser >= 0 (llego {self.delta})")

    def as_dict(self):
        return {"iterations": self.iterations, "delta": self.delta}


@dataclass
class StrengthTable:
    """Fuerzas s[paso][regla], siempre en (0, cap]. Estado mutable de una sola corrida."""
    s: np.ndarray
    initial: float = INITIAL_STRENGTH
    cap: float = MAX_STRENGTH

    @classmethod
    def fresh(cls, n_steps: int, k: int = N_RULES,
              initial: float = INITIAL_STRENGTH, cap: float = MAX_STRENGTH) -> "StrengthTable":
        if not 0 < initial <= cap:
            raise ConfigError(f"fuerza inicial {initial} fuera de (0, {cap}]")
        return cls(s=np.full((n_steps, k), float(initial)), initial=initial, cap=cap)

    @property
    def n_steps(self) -> int:
        return self.s.shape[0]

    def probabilities(self, step: int) -> np.ndarray:
        row = self.s[step]
        return row / row.sum()

    def dump(self) -> str:
        lines = [f"# n_steps={self.n_steps} k={self.s.shape[1]} initial={self.initial} cap={self.cap}"]
        for i, row in enumerate(self.s):
            lines.append(f"step {i}: " + " ".join(f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class ClimbResult:
    rule_string: Tuple[int, ...]
    fitness: Fitness
    schedule: Schedule
    table: StrengthTable
    evaluations: int = 0
    accepted: List[float] = field(default_factory=list)

# ==============================================================================
# OPERACIONES
# ==============================================================================

def roulette(weights: Sequence[float], rng: np.random.Generator) -> int:
    """Indice i con probabilidad weights[i] / sum(weights). Consume un solo numero del rng."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or (w < 0).any():
        raise SelectionError(f"pesos invalidos para la ruleta: {w.tolist()}")
    cumulative = np.cumsum(w)
    if cumulative[-1] <= 0:
        raise SelectionError("todos los pesos de la ruleta son cero")
    u = rng.random() * cumulative[-1]
    idx = int(np.searchsorted(cumulative, u, side="right"))
    # por redondeo u puede tocar el total; nunca devolver un peso cero
    return min(idx, int(np.flatnonzero(w)[-1]))


def reinforce(table: StrengthTable, used: Sequence[int], delta: float) -> StrengthTable:
    if len(used) != table.n_steps:
        raise SelectionError(f"rule string de largo {len(used)}, la tabla tiene {table.n_steps} pasos")
    if delta < 0:
        raise ConfigError(f"delta debe ser >= 0 (llego {delta})")
    for i, r in enumerate(used):
        table.s[i, r] = min(table.cap, table.s[i, r] + delta)
    return table


def select_rule_string(table: StrengthTable, rng: np.random.Generator) -> Tuple[int, ...]:
    return tuple(roulette(row, rng) for row in table.s)


def hill_climb(instance: Instance, start: Sequence[int], table: StrengthTable,
               config: HcConfig, rng: np.random.Generator,
               start_decoded: Optional[Tuple[Schedule, Fitness]] = None) -> ClimbResult:
    """
    Busqueda local de un solo cambio por iteracion.

    En cada iteracion se elige un paso al azar y una regla por ruleta sobre las
    fuerzas de ese paso. Si la regla es la actual la iteracion se pierde; si no,
    se decodifica el vecino y solo se acepta si mejora estrictamente, reforzando
    las reglas del nuevo rule string. Nunca devuelve algo peor que el inicio.

    Si se entrega start_decoded (horario, fitness) no se vuelve a decodificar el inicio.
    """
    config.validate()
    x = list(start)
    evaluations = 0
    if start_decoded is None:
        schedule, f = decode(instance, x, rng)
        evaluations += 1
    else:
        schedule, f = start_decoded

    accepted = []
    n_steps = len(x)
    if n_steps == 0:
        return ClimbResult(tuple(x), f, schedule, table, evaluations, accepted)

    for _ in range(config.iterations):
        i = int(rng.integers(n_steps))
        r = roulette(table.s[i], rng)
        if r == x[i]:
            continue
        candidate = x.copy()
        candidate[i] = r
        schedule_new, f_new = decode(instance, candidate, rng)
        evaluations += 1
        if f_new.total < f.total:
            x, f, schedule = candidate, f_new, schedule_new
            accepted.append(f.total)
            reinforce(table, x, config.delta)

    return ClimbResult(tuple(x), f, schedule, table, evaluations, accepted)
