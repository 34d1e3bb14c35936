#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Construccion paso a paso de horarios
Catalogo de reglas y el decodificador que convierte un rule string
(una regla por paso) en un horario, asignando una enfermera por paso.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from nurse_model import Fitness, Instance, Schedule, evaluate

# ==============================================================================
# CATALOGO DE REGLAS
# ==============================================================================

COST_GREEDY = 0
COVER_GREEDY = 1
RATIO = 2
RANDOM_CHEAPEST = 3

N_RULES = 4

RULE_NAMES = {
    COST_GREEDY: "CostGreedy",
    COVER_GREEDY: "CoverGreedy",
    RATIO: "Ratio",
    RANDOM_CHEAPEST: "RandomCheapest",
}

RULE_HELP = (
    "0=CostGreedy (menor costo), 1=CoverGreedy (mayor reduccion de deficit), "
    "2=Ratio (costo/(1+reduccion)), 3=RandomCheapest (enfermera al azar, patron mas barato)"
)


class DecodeError(ValueError):
    pass

# ==============================================================================
# ESTADO PARCIAL
# ==============================================================================

@dataclass
class PartialState:
    """Horario parcial: enfermeras pendientes, deficit restante por slot y costo acumulado."""
    open_nurses: np.ndarray
    remaining: np.ndarray
    accumulated_cost: float = 0.0

    @classmethod
    def initial(cls, instance: Instance) -> "PartialState":
        return cls(
            open_nurses=np.ones(instance.n_nurses, dtype=bool),
            remaining=instance.demand_vector.copy(),
        )

    @property
    def unassigned(self) -> List[int]:
        return [int(j) for j in np.flatnonzero(self.open_nurses)]

    def remaining_undercover(self, instance: Instance) -> np.ndarray:
        return self.remaining.reshape(instance.days, instance.shifts_per_day)

    def assign(self, instance: Instance, nurse: int, pattern: int):
        cover = instance.flat_covers[instance.offsets[nurse] + pattern]
        self.remaining = self.remaining - np.minimum(cover, self.remaining)
        self.accumulated_cost += instance.nurses[nurse].patterns[pattern].cost
        self.open_nurses[nurse] = False


def coverage_reduction(cover: np.ndarray, remaining: np.ndarray) -> np.ndarray:
    """Unidades de deficit que cubriria cada patron; acepta un patron o una matriz de patrones."""
    return np.minimum(cover, remaining).sum(axis=-1)

# ==============================================================================
# REGLAS
# ==============================================================================

def apply_rule(instance: Instance, state: PartialState, rule: int,
               rng: Optional[np.random.Generator]) -> Tuple[int, int]:
    """
    Elige la siguiente asignacion (enfermera, patron) segun la regla.
    Solo RANDOM_CHEAPEST consume un numero del rng.
    """
    if not state.open_nurses.any():
        raise DecodeError("no quedan enfermeras por asignar")

    if rule == RANDOM_CHEAPEST:
        if rng is None:
            raise DecodeError("la regla RandomCheapest requiere un rng")
        pending = np.flatnonzero(state.open_nurses)
        nurse = int(pending[rng.integers(len(pending))])
        start = instance.offsets[nurse]
        costs = instance.flat_costs[start:start + len(instance.nurses[nurse].patterns)]
        return nurse, int(np.argmin(costs))

    candidates = np.flatnonzero(state.open_nurses[instance.flat_owner])
    costs = instance.flat_costs[candidates]
    reduction = coverage_reduction(instance.flat_covers[candidates], state.remaining)

    # lexsort: la ultima clave es la primaria; el indice plano desempata por
    # enfermera y luego por patron
    if rule == COST_GREEDY:
        order = np.lexsort((candidates, -reduction, costs))
    elif rule == COVER_GREEDY:
        order = np.lexsort((candidates, costs, -reduction))
    elif rule == RATIO:
        order = np.lexsort((candidates, -reduction, costs / (1.0 + reduction)))
    else:
        raise DecodeError(f"regla desconocida {rule}")

    chosen = candidates[order[0]]
    nurse = int(instance.flat_owner[chosen])
    return nurse, int(chosen - instance.offsets[nurse])

# ==============================================================================
# DECODIFICADOR
# ==============================================================================

def validate_rule_string(instance: Instance, rs: Sequence[int]):
    if len(rs) != instance.n_nurses:
        raise DecodeError(f"rule string de largo {len(rs)}, la instancia tiene {instance.n_nurses} enfermeras")
    for i, r in enumerate(rs):
        if not 0 <= r < N_RULES:
            raise DecodeError(f"rs[{i}] = {r} fuera de rango [0, {N_RULES})")


def decode_trace(instance: Instance, rs: Sequence[int],
                 rng: Optional[np.random.Generator] = None) -> Tuple[Schedule, Fitness, List[dict]]:
    """Como decode, pero ademas devuelve la traza de cada paso."""
    validate_rule_string(instance, rs)
    state = PartialState.initial(instance)
    assignment = [0] * instance.n_nurses
    steps = []
    for i, rule in enumerate(rs):
        nurse, pattern = apply_rule(instance, state, int(rule), rng)
        cover = instance.flat_covers[instance.offsets[nurse] + pattern]
        steps.append({
            "step": i,
            "rule": RULE_NAMES[int(rule)],
            "nurse": nurse,
            "pattern": pattern,
            "reduction": int(coverage_reduction(cover, state.remaining)),
        })
        state.assign(instance, nurse, pattern)
        assignment[nurse] = pattern
    schedule = Schedule(tuple(assignment))
    return schedule, evaluate(instance, schedule), steps


def decode(instance: Instance, rs: Sequence[int],
           rng: Optional[np.random.Generator] = None) -> Tuple[Schedule, Fitness]:
    validate_rule_string(instance, rs)
    state = PartialState.initial(instance)
    assignment = [0] * instance.n_nurses
    for rule in rs:
        nurse, pattern = apply_rule(instance, state, int(rule), rng)
        state.assign(instance, nurse, pattern)
        assignment[nurse] = pattern
    schedule = Schedule(tuple(assignment))
    return schedule, evaluate(instance, schedule)
