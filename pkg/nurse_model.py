#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Modelo del problema de turnos de enfermeria
Instancias, evaluacion de fitness, generador sintetico (aleatorio y "planted")
y un oraculo de fuerza bruta para verificar optimos en instancias chicas.
"""
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

# ==============================================================================
# CONFIGURACION
# ==============================================================================

DEFAULT_DAYS = 7
DEFAULT_SHIFTS_PER_DAY = 2
DEFAULT_UNDERCOVER_WEIGHT = 100.0
DEFAULT_COST_RANGE = (0, 10)
DEFAULT_COMBO_BUDGET = 10 ** 6

# Filas evaluadas por bloque en el oraculo vectorizado
ORACLE_CHUNK = 1 << 16

GEN_MODES = ("random", "planted")

INSTANCE_FIELDS = {"days", "shifts_per_day", "undercover_weight", "demand", "nurses"}
NURSE_FIELDS = {"patterns"}
PATTERN_FIELDS = {"cover", "cost"}

# ==============================================================================
# ERRORES
# ==============================================================================

class InstanceError(ValueError):
    """Documento o instancia invalida. `field` indica la ruta del campo."""

    def __init__(self, field_path: str, message: str):
        self.field = field_path
        super().__init__(f"{field_path}: {message}")


class BudgetExceededError(ValueError):
    def __init__(self, combinations: int, budget: int):
        self.combinations = combinations
        self.budget = budget
        super().__init__(
            f"el oraculo requiere {combinations} combinaciones, presupuesto {budget}"
        )

# ==============================================================================
# TIPOS
# ==============================================================================

@dataclass(frozen=True)
class Pattern:
    cover: Tuple[int, ...]
    cost: float


@dataclass(frozen=True)
class Nurse:
    id: int
    patterns: Tuple[Pattern, ...]


@dataclass(frozen=True)
class Fitness:
    """Fitness de un horario; menor es mejor."""
    total: float
    preference_cost: float
    undercover_units: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "preference_cost": self.preference_cost,
            "undercover_units": self.undercover_units,
        }


@dataclass(frozen=True)
class Schedule:
    assignment: Tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    days: int
    shifts_per_day: int
    nurses: Tuple[Nurse, ...]
    demand: Tuple[Tuple[int, ...], ...]
    undercover_weight: float = DEFAULT_UNDERCOVER_WEIGHT

    @property
    def n_nurses(self) -> int:
        return len(self.nurses)

    @property
    def n_slots(self) -> int:
        return self.days * self.shifts_per_day

    @property
    def pattern_counts(self) -> Tuple[int, ...]:
        return tuple(len(n.patterns) for n in self.nurses)

    @property
    def combinations(self) -> int:
        return math.prod(self.pattern_counts)

    # Arreglos precalculados para la evaluacion vectorizada. El orden plano es
    # (enfermera, patron), asi que el indice plano respeta el orden lexicografico.

    @cached_property
    def demand_vector(self) -> np.ndarray:
        return np.asarray(self.demand, dtype=np.int64).reshape(-1)

    @cached_property
    def flat_covers(self) -> np.ndarray:
        rows = [p.cover for n in self.nurses for p in n.patterns]
        return np.asarray(rows, dtype=np.int64).reshape(len(rows), self.n_slots)

    @cached_property
    def flat_costs(self) -> np.ndarray:
        return np.asarray([p.cost for n in self.nurses for p in n.patterns], dtype=float)

    @cached_property
    def flat_owner(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_nurses), self.pattern_counts)

    @cached_property
    def offsets(self) -> np.ndarray:
        counts = np.asarray(self.pattern_counts, dtype=np.int64)
        return np.cumsum(counts) - counts


@dataclass(frozen=True)
class GenConfig:
    nurses: int = 10
    days: int = DEFAULT_DAYS
    shifts_per_day: int = DEFAULT_SHIFTS_PER_DAY
    patterns_per_nurse: int = 4
    cost_range: Tuple[int, int] = DEFAULT_COST_RANGE
    mode: str = "random"
    seed: int = 0
    undercover_weight: float = DEFAULT_UNDERCOVER_WEIGHT

    def validate(self):
        for name in ("nurses", "days", "shifts_per_day"):
            if getattr(self, name) < 1:
                raise InstanceError(name, "debe ser >= 1")
        if self.patterns_per_nurse < 2:
            raise InstanceError("patterns_per_nurse", "debe ser >= 2")
        lo, hi = self.cost_range
        if lo < 0 or hi < lo:
            raise InstanceError("cost_range", f"intervalo invalido [{lo}, {hi}]")
        if self.mode not in GEN_MODES:
            raise InstanceError("mode", f"modo desconocido '{self.mode}'")
        if self.mode == "planted" and hi < 1:
            raise InstanceError("cost_range", "modo planted requiere c_max >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InstanceError("seed", "debe ser un entero sin signo de 64 bits")
        if self.undercover_weight < 0:
            raise InstanceError("undercover_weight", "no puede ser negativo")

    def as_dict(self) -> Dict[str, Any]:
        return {
            "nurses": self.nurses,
            "days": self.days,
            "shifts_per_day": self.shifts_per_day,
            "patterns_per_nurse": self.patterns_per_nurse,
            "cost_range": list(self.cost_range),
            "mode": self.mode,
            "seed": self.seed,
            "undercover_weight": self.undercover_weight,
        }

# ==============================================================================
# PARSEO Y SERIALIZACION
# ==============================================================================

def _check_fields(obj: Any, allowed: set, path: str):
    if not isinstance(obj, dict):
        raise InstanceError(path or "$", "se esperaba un objeto")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise InstanceError(f"{path}.{unknown[0]}" if path else unknown[0], "campo desconocido")
    missing = sorted(allowed - set(obj) - {"undercover_weight"})
    if missing:
        raise InstanceError(f"{path}.{missing[0]}" if path else missing[0], "campo requerido")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(path, f"se esperaba un numero, llego {value!r}")
    if not math.isfinite(value):
        raise InstanceError(path, "numero no finito")
    return value


def _count(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(path, f"se esperaba un entero, llego {value!r}")
    return value


def instance_from_dict(data: Dict[str, Any]) -> Instance:
    """Construye y valida una Instance desde el documento ya decodificado."""
    _check_fields(data, INSTANCE_FIELDS, "")

    days = _count(data["days"], "days")
    shifts = _count(data["shifts_per_day"], "shifts_per_day")
    if days < 1:
        raise InstanceError("days", "debe ser >= 1")
    if shifts < 1:
        raise InstanceError("shifts_per_day", "debe ser >= 1")
    n_slots = days * shifts

    weight = _number(data.get("undercover_weight", DEFAULT_UNDERCOVER_WEIGHT), "undercover_weight")
    if weight < 0:
        raise InstanceError("undercover_weight", "no puede ser negativo")

    demand = data["demand"]
    if not isinstance(demand, list) or len(demand) != days:
        raise InstanceError("demand", f"se esperaban {days} filas")
    rows = []
    for d, row in enumerate(demand):
        if not isinstance(row, list) or len(row) != shifts:
            raise InstanceError(f"demand[{d}]", f"se esperaban {shifts} columnas")
        for s, value in enumerate(row):
            if _count(value, f"demand[{d}][{s}]") < 0:
                raise InstanceError(f"demand[{d}][{s}]", "demanda negativa")
        rows.append(tuple(row))

    raw_nurses = data["nurses"]
    if not isinstance(raw_nurses, list):
        raise InstanceError("nurses", "se esperaba una lista")
    nurses = []
    for j, raw in enumerate(raw_nurses):
        path = f"nurses[{j}]"
        _check_fields(raw, NURSE_FIELDS, path)
        raw_patterns = raw["patterns"]
        if not isinstance(raw_patterns, list) or not raw_patterns:
            raise InstanceError(f"{path}.patterns", "lista de patrones vacia")
        patterns = []
        for p, pat in enumerate(raw_patterns):
            ppath = f"{path}.patterns[{p}]"
            _check_fields(pat, PATTERN_FIELDS, ppath)
            cover = pat["cover"]
            if not isinstance(cover, list) or len(cover) != n_slots:
                got = len(cover) if isinstance(cover, list) else type(cover).__name__
                raise InstanceError(f"{ppath}.cover", f"largo {got}, se esperaba {n_slots}")
            if any(isinstance(c, bool) or c not in (0, 1) for c in cover):
                raise InstanceError(f"{ppath}.cover", "entradas deben ser 0 o 1")
            cost = _number(pat["cost"], f"{ppath}.cost")
            if cost < 0:
                raise InstanceError(f"{ppath}.cost", "costo negativo")
            patterns.append(Pattern(cover=tuple(int(c) for c in cover), cost=cost))
        nurses.append(Nurse(id=j, patterns=tuple(patterns)))

    return Instance(
        days=days,
        shifts_per_day=shifts,
        nurses=tuple(nurses),
        demand=tuple(rows),
        undercover_weight=weight,
    )


def parse_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError("$", f"documento mal formado: {e}") from e
    return instance_from_dict(data)


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    return {
        "days": instance.days,
        "shifts_per_day": instance.shifts_per_day,
        "undercover_weight": instance.undercover_weight,
        "demand": [list(row) for row in instance.demand],
        "nurses": [
            {"patterns": [{"cover": list(p.cover), "cost": p.cost} for p in n.patterns]}
            for n in instance.nurses
        ],
    }


def load_instance(path: Path) -> Instance:
    """Carga una instancia desde disco. FileNotFoundError se propaga tal cual."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_instance(f.read())


def save_instance(instance: Instance, path: Path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(instance_to_dict(instance), f, indent=2)
        f.write("\n")

# ==============================================================================
# EVALUACION
# ==============================================================================

def _flat_indices(instance: Instance, schedule: Schedule) -> np.ndarray:
    assignment = schedule.assignment
    if len(assignment) != instance.n_nurses:
        raise InstanceError(
            "schedule.assignment",
            f"largo {len(assignment)}, se esperaban {instance.n_nurses} enfermeras",
        )
    counts = instance.pattern_counts
    for j, p in enumerate(assignment):
        if not 0 <= p < counts[j]:
            raise InstanceError(f"schedule.assignment[{j}]", f"patron {p} invalido (hay {counts[j]})")
    return instance.offsets + np.asarray(assignment, dtype=np.int64)


def evaluate(instance: Instance, schedule: Schedule) -> Fitness:
    idx = _flat_indices(instance, schedule)
    covered = instance.flat_covers[idx].sum(axis=0)
    undercover = int(np.maximum(instance.demand_vector - covered, 0).sum())
    preference = sum(instance.nurses[j].patterns[p].cost for j, p in enumerate(schedule.assignment))
    return Fitness(
        total=preference + instance.undercover_weight * undercover,
        preference_cost=preference,
        undercover_units=undercover,
    )


def describe_schedule(instance: Instance, schedule: Schedule) -> pd.DataFrame:
    """Tabla de cobertura por slot: day, shift, demand, covered, missing."""
    idx = _flat_indices(instance, schedule)
    covered = instance.flat_covers[idx].sum(axis=0)
    demand = instance.demand_vector
    slots = np.arange(instance.n_slots)
    return pd.DataFrame({
        "day": slots // instance.shifts_per_day,
        "shift": slots % instance.shifts_per_day,
        "demand": demand,
        "covered": covered,
        "missing": np.maximum(demand - covered, 0),
    })


def random_schedule(instance: Instance, rng: np.random.Generator) -> Schedule:
    return Schedule(tuple(int(rng.integers(c)) for c in instance.pattern_counts))


def zero_cost_schedule(instance: Instance) -> Optional[Schedule]:
    """Asignacion "planted": primer patron de costo 0 de cada enfermera."""
    assignment = []
    for nurse in instance.nurses:
        zero = [p for p, pat in enumerate(nurse.patterns) if pat.cost == 0]
        if not zero:
            return None
        assignment.append(zero[0])
    return Schedule(tuple(assignment))

# ==============================================================================
# GENERADOR DE INSTANCIAS
# ==============================================================================

def generate_instance(config: GenConfig) -> Instance:
    config.validate()
    rng = np.random.default_rng(config.seed)
    n_slots = config.days * config.shifts_per_day
    lo, hi = config.cost_range

    covers = (rng.random((config.nurses, config.patterns_per_nurse, n_slots)) < 0.5).astype(int)

    if config.mode == "random":
        costs = rng.integers(lo, hi + 1, size=(config.nurses, config.patterns_per_nurse))
        demand = rng.integers(0, config.nurses // 2 + 1, size=(config.days, config.shifts_per_day))
    else:
        planted = rng.integers(config.patterns_per_nurse, size=config.nurses)
        costs = rng.integers(max(lo, 1), hi + 1, size=(config.nurses, config.patterns_per_nurse))
        costs[np.arange(config.nurses), planted] = 0
        demand = covers[np.arange(config.nurses), planted].sum(axis=0)
        demand = demand.reshape(config.days, config.shifts_per_day)

    nurses = tuple(
        Nurse(
            id=j,
            patterns=tuple(
                Pattern(cover=tuple(int(c) for c in covers[j, p]), cost=int(costs[j, p]))
                for p in range(config.patterns_per_nurse)
            ),
        )
        for j in range(config.nurses)
    )
    return Instance(
        days=config.days,
        shifts_per_day=config.shifts_per_day,
        nurses=nurses,
        demand=tuple(tuple(int(v) for v in row) for row in demand),
        undercover_weight=config.undercover_weight,
    )

# ==============================================================================
# ORACULO DE FUERZA BRUTA
# ==============================================================================

def enumerate_optimum(instance: Instance, combo_budget: int = DEFAULT_COMBO_BUDGET) -> Tuple[Schedule, Fitness]:
    """
    Evalua todas las asignaciones completas y devuelve la de menor fitness.
    Empates: la asignacion lexicograficamente menor (primer minimo en orden C).
    """
    counts = instance.pattern_counts
    total_combos = instance.combinations
    if total_combos > combo_budget:
        raise BudgetExceededError(total_combos, combo_budget)
    if instance.n_nurses == 0:
        return Schedule(()), evaluate(instance, Schedule(()))

    covers = instance.flat_covers
    costs = instance.flat_costs
    offsets = instance.offsets
    demand = instance.demand_vector

    best_value = math.inf
    best_index = 0
    for start in range(0, total_combos, ORACLE_CHUNK):
        stop = min(start + ORACLE_CHUNK, total_combos)
        combos = np.stack(np.unravel_index(np.arange(start, stop), counts), axis=1) + offsets
        covered = covers[combos].sum(axis=1)
        undercover = np.maximum(demand - covered, 0).sum(axis=1)
        totals = costs[combos].sum(axis=1) + instance.undercover_weight * undercover
        i = int(np.argmin(totals))
        if totals[i] < best_value:
            best_value = float(totals[i])
            best_index = start + i

    assignment = tuple(int(p) for p in np.unravel_index(best_index, counts))
    schedule = Schedule(assignment)
    return schedule, evaluate(instance, schedule)
