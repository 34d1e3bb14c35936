#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Explicit Learning Scheduler
CLI y orquestacion de experimentos: genera instancias, resuelve con BOA,
BOA+LCS y lineas base (aleatorio, regla fija, LCS solo), corre el oraculo
de fuerza bruta y escribe reportes CSV + JSON (+ HTML/XLSX opcionales).

Las instancias reales de la literatura no estan disponibles; todos los
experimentos usan instancias sinteticas generadas con `gen`.
"""
import argparse
import concurrent.futures as cf
import contextlib
import json
import os
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from boa import BoaConfig, Individual, RunReport, evolve
from construction import N_RULES, RANDOM_CHEAPEST, RULE_HELP, RULE_NAMES, DecodeError, decode, decode_trace
from dashboard import generate_html_dashboard
from lcs import ConfigError, HcConfig, SelectionError, StrengthTable, reinforce, select_rule_string
from nurse_model import (
    DEFAULT_COMBO_BUDGET,
    BudgetExceededError,
    GenConfig,
    Instance,
    InstanceError,
    describe_schedule,
    enumerate_optimum,
    generate_instance,
    load_instance,
    save_instance,
)

# ==============================================================================
# CONFIGURACION
# ==============================================================================

DEFAULT_BUDGET = 10_000

# Tamano de bloque (en evaluaciones) de cada fila del reporte para las lineas base
BASELINE_BLOCK = 100

ALGORITHMS = ("boa", "boa+lcs", "random", "lcs")
FIXED_PREFIX = "fixed:"

COMPARISON_COLUMNS = ["instance", "algorithm", "seed", "best_fitness", "evaluations", "wall_time_ms"]
SUMMARY_COLUMNS = ["algorithm", "runs", "median_best", "mean_best", "best", "optimum_hits"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class UnknownAlgorithmError(UsageError):
    pass

# ==============================================================================
# ALGORITMOS
# ==============================================================================

def _is_decimal(text: str) -> bool:
    """Solo digitos ASCII 0-9, sin superindices ni digitos de otros alfabetos."""
    return text.isascii() and text.isdecimal()


def parse_algorithm(token: str) -> Tuple[str, Optional[int]]:
    token = token.strip()
    if token in ALGORITHMS:
        return token, None
    if token.startswith(FIXED_PREFIX):
        value = token[len(FIXED_PREFIX):]
        if _is_decimal(value) and int(value) < N_RULES:
            return "fixed", int(value)
    raise UnknownAlgorithmError(
        f"algoritmo desconocido '{token}' (validos: {', '.join(ALGORITHMS)}, fixed:0..fixed:{N_RULES - 1})"
    )


def _baseline_report(algorithm: str, seed: int, budget: int, best: Individual,
                     blocks: List[Tuple[float, float, int]], hc: Optional[StrengthTable] = None) -> RunReport:
    records = [
        {"generation": g, "best_fitness": b, "mean_fitness": m, "evaluations": e}
        for g, (b, m, e) in enumerate(blocks)
    ]
    return RunReport(
        records=records,
        best=best,
        config={"algorithm": algorithm, "budget": budget, "seed": seed},
        seed=seed,
        evaluations=blocks[-1][2] if blocks else 0,
        table=hc,
        algorithm=algorithm,
    )


def _sampling_search(instance: Instance, algorithm: str, seed: int, budget: int,
                     propose, on_improve=None, table=None) -> RunReport:
    """Bucle comun de las lineas base: propone, decodifica, guarda el mejor por bloques."""
    rng = np.random.default_rng(seed)
    best: Optional[Individual] = None
    blocks = []
    block_totals = []
    for evaluation in range(1, budget + 1):
        rs = propose(rng)
        schedule, fitness = decode(instance, rs, rng)
        block_totals.append(fitness.total)
        if best is None or fitness.total < best.fitness.total:
            best = Individual(rs, fitness, evaluation, schedule)
            if on_improve is not None:
                on_improve(rs)
        if len(block_totals) == BASELINE_BLOCK or evaluation == budget:
            blocks.append((best.fitness.total, float(np.mean(block_totals)), evaluation))
            block_totals = []
    return _baseline_report(algorithm, seed, budget, best, blocks, table)


def run_random(instance: Instance, seed: int, budget: int) -> RunReport:
    n = instance.n_nurses
    return _sampling_search(
        instance, "random", seed, budget,
        propose=lambda rng: tuple(int(r) for r in rng.integers(0, N_RULES, size=n)),
    )


def run_fixed(instance: Instance, rule: int, seed: int, budget: int) -> RunReport:
    """Regla fija en todos los pasos; solo RandomCheapest se repite con distintas semillas."""
    repeats = budget if rule == RANDOM_CHEAPEST else 1
    rs = (rule,) * instance.n_nurses
    return _sampling_search(instance, f"fixed:{rule}", seed, repeats, propose=lambda rng: rs)


def run_lcs_only(instance: Instance, seed: int, budget: int, hc: HcConfig) -> RunReport:
    """Solo fuerzas: rule strings por ruleta, refuerzo al mejorar el mejor conocido."""
    table = StrengthTable.fresh(instance.n_nurses)
    return _sampling_search(
        instance, "lcs", seed, budget,
        propose=lambda rng: select_rule_string(table, rng),
        on_improve=lambda rs: reinforce(table, rs, hc.delta),
        table=table,
    )


def run_algorithm(instance: Instance, token: str, seed: int, budget: Optional[int],
                  boa_template: BoaConfig, verbose: bool = False) -> RunReport:
    kind, rule = parse_algorithm(token)
    if kind in ("boa", "boa+lcs"):
        config = replace(boa_template, seed=seed, lcs_enabled=(kind == "boa+lcs"),
                         max_evaluations=budget)
        return evolve(instance, config, verbose=verbose)

    budget = DEFAULT_BUDGET if budget is None else budget
    if budget < 1:
        raise ConfigError("el presupuesto debe ser >= 1")
    if kind == "random":
        return run_random(instance, seed, budget)
    if kind == "lcs":
        return run_lcs_only(instance, seed, budget, boa_template.hc)
    return run_fixed(instance, rule, seed, budget)

# ==============================================================================
# EXPERIMENTOS
# ==============================================================================

# Tipos aceptados en el archivo --config, por seccion
EXPERIMENT_SCHEMA = {
    "budget": "int",
    "output_dir": "str",
    "workers": "int",
    "timing": "bool",
    "oracle": "bool",
    "oracle_budget": "int",
}
GEN_SCHEMA = {
    "nurses": "int",
    "days": "int",
    "shifts_per_day": "int",
    "patterns_per_nurse": "int",
    "cost_range": "pair",
    "mode": "str",
    "seed": "int",
    "undercover_weight": "number",
}
BOA_SCHEMA = {
    "population_size": "int",
    "elite_fraction": "number",
    "offspring_count": "int?",
    "smoothing": "number",
    "max_generations": "int",
    "stagnation_limit": "int",
    "lcs_enabled": "bool",
    "seed": "int",
    "max_evaluations": "int?",
}
HC_SCHEMA = {"iterations": "int", "delta": "number"}


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _coerce(value: Any, kind: str, path: str) -> Any:
    if kind == "int?" and value is None:
        return None
    if kind in ("int", "int?") and _is_int(value):
        return value
    if kind == "number" and (_is_int(value) or isinstance(value, float)):
        return float(value)
    if kind == "bool" and isinstance(value, bool):
        return value
    if kind == "str" and isinstance(value, str):
        return value
    if kind == "pair" and isinstance(value, list) and len(value) == 2 and all(_is_int(v) for v in value):
        return tuple(value)
    expected = {
        "int": "un entero",
        "int?": "un entero o null",
        "number": "un numero",
        "bool": "true/false",
        "str": "texto",
        "pair": "un par de enteros [min, max]",
    }[kind]
    raise ConfigError(f"{path}: se esperaba {expected}, llego {value!r}")


def _read_section(section: Any, schema: Dict[str, str], path: str, extra: Sequence[str] = ()) -> Dict[str, Any]:
    """Valida un diccionario contra `schema`; las claves de `extra` se dejan al llamador.

    `path` vacio indica la raiz del archivo.
    """
    if not isinstance(section, dict):
        raise ConfigError(f"{path or 'configuracion'}: se esperaba un objeto JSON")
    for key in section:
        if key not in schema and key not in extra:
            raise ConfigError(f"{path or 'configuracion'}: campo desconocido '{key}'")
    return {key: _coerce(value, schema[key], f"{path}.{key}" if path else key)
            for key, value in section.items() if key in schema}


def _list_field(data: Dict[str, Any], key: str) -> List[Any]:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise ConfigError(f"{key}: se esperaba una lista, llego {value!r}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    instances: Tuple[Any, ...]              # rutas (str/Path) o GenConfig
    algorithms: Tuple[str, ...]
    seeds: Tuple[int, ...]
    budget: int = DEFAULT_BUDGET
    output_dir: Path = Path("./output")
    workers: int = 1
    timing: bool = True
    oracle: bool = False
    oracle_budget: int = DEFAULT_COMBO_BUDGET
    boa: BoaConfig = field(default_factory=BoaConfig)

    def validate(self):
        if not self.instances:
            raise UsageError("la configuracion no tiene instancias")
        if not self.algorithms:
            raise UsageError("la configuracion no tiene algoritmos")
        if not self.seeds:
            raise UsageError("la configuracion no tiene semillas")
        kinds = [parse_algorithm(a)[0] for a in self.algorithms]
        for seed in self.seeds:
            if not 0 <= seed < 2 ** 64:
                raise ConfigError(f"seed {seed} no es un entero sin signo de 64 bits")
        if self.budget < 1:
            raise ConfigError("budget debe ser >= 1")
        if any(k.startswith("boa") for k in kinds) and self.budget < self.boa.population_size:
            raise ConfigError(
                f"budget {self.budget} menor que population_size {self.boa.population_size}"
            )
        if self.workers < 1:
            raise ConfigError("workers debe ser >= 1")
        self.boa.validate()

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Path = Path(".")) -> "ExperimentConfig":
        """Lee el archivo --config. Las instancias son rutas o diccionarios de GenConfig.

        Cada campo se valida por tipo; los errores nombran la ruta del campo
        (`budget`, `boa.hc.iterations`, `instances[0].seed`).
        """
        top = _read_section(data, EXPERIMENT_SCHEMA, "",
                            extra=("instances", "algorithms", "seeds", "boa"))

        instances = []
        for i, spec in enumerate(_list_field(data, "instances")):
            path = f"instances[{i}]"
            if isinstance(spec, str):
                p = Path(spec)
                instances.append(p if p.is_absolute() else base_dir / p)
            elif isinstance(spec, dict):
                gen = GenConfig(**_read_section(spec, GEN_SCHEMA, path))
                try:
                    gen.validate()
                except InstanceError as e:
                    raise ConfigError(f"{path}.{e}") from e
                instances.append(gen)
            else:
                raise ConfigError(f"{path}: se esperaba ruta o diccionario de GenConfig")

        algorithms = _list_field(data, "algorithms")
        for i, token in enumerate(algorithms):
            if not isinstance(token, str):
                raise ConfigError(f"algorithms[{i}]: se esperaba texto, llego {token!r}")
        seeds = _list_field(data, "seeds")
        for i, seed in enumerate(seeds):
            _coerce(seed, "int", f"seeds[{i}]")

        boa_data = data.get("boa", {})
        boa_fields = _read_section(boa_data, BOA_SCHEMA, "boa", extra=("hc",))
        if "hc" in boa_data:
            boa_fields["hc"] = HcConfig(**_read_section(boa_data["hc"], HC_SCHEMA, "boa.hc"))

        if "output_dir" in top:
            output_dir = Path(top.pop("output_dir"))
            top["output_dir"] = output_dir if output_dir.is_absolute() else base_dir / output_dir
        return cls(
            instances=tuple(instances),
            algorithms=tuple(algorithms),
            seeds=tuple(seeds),
            boa=BoaConfig(**boa_fields),
            **top,
        )


def instance_id(spec: Any) -> str:
    if isinstance(spec, GenConfig):
        return f"gen-{spec.mode}-n{spec.nurses}-p{spec.patterns_per_nurse}-s{spec.seed}"
    return Path(spec).stem


def resolve_instances(specs: Sequence[Any]) -> List[Tuple[str, Instance]]:
    out = []
    for spec in specs:
        if isinstance(spec, GenConfig):
            out.append((instance_id(spec), generate_instance(spec)))
        else:
            out.append((instance_id(spec), load_instance(Path(spec))))
    return out


def _run_triple(instance_name: str, instance: Instance, algorithm: str, seed: int,
                config: ExperimentConfig) -> Dict[str, Any]:
    t0 = time.perf_counter()
    report = run_algorithm(instance, algorithm, seed, config.budget, config.boa)
    elapsed_ms = int((time.perf_counter() - t0) * 1000) if config.timing else 0
    return {
        "instance": instance_name,
        "algorithm": algorithm,
        "seed": seed,
        "best_fitness": report.best.fitness.total,
        "evaluations": report.total_evaluations,
        "wall_time_ms": elapsed_ms,
    }


def run_experiment(config: ExperimentConfig, verbose: bool = True) -> pd.DataFrame:
    """Una fila por (instancia, algoritmo, semilla), ordenadas sin importar el orden de ejecucion."""
    config.validate()
    instances = resolve_instances(config.instances)
    tasks = [
        (name, inst, algo, seed)
        for name, inst in instances
        for algo in config.algorithms
        for seed in config.seeds
    ]
    if verbose:
        print(f"[*] {len(instances)} instancias x {len(config.algorithms)} algoritmos x "
              f"{len(config.seeds)} semillas = {len(tasks)} corridas ({config.workers} workers)")

    rows = []
    with cf.ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = {
            pool.submit(_run_triple, name, inst, algo, seed, config): (name, algo, seed)
            for name, inst, algo, seed in tasks
        }
        for i, fut in enumerate(cf.as_completed(futures), 1):
            row = fut.result()
            rows.append(row)
            if verbose:
                print(f"  [{i}/{len(tasks)}] {row['instance']} {row['algorithm']} "
                      f"seed={row['seed']}: best={_fmt(row['best_fitness'])} evals={row['evaluations']}")

    rows.sort(key=lambda r: (r["instance"], r["algorithm"], r["seed"]))
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)


def oracle_optima(config: ExperimentConfig) -> Dict[str, Optional[float]]:
    optima = {}
    for name, inst in resolve_instances(config.instances):
        try:
            _, fitness = enumerate_optimum(inst, config.oracle_budget)
            optima[name] = fitness.total
        except BudgetExceededError as e:
            print(f"[!] Oraculo omitido para {name}: {e}")
            optima[name] = None
    return optima


def summarize(table: pd.DataFrame, optima: Optional[Dict[str, Optional[float]]] = None) -> pd.DataFrame:
    """Resumen por algoritmo: mediana, media, mejor y veces que se alcanzo el optimo certificado."""
    grouped = table.groupby("algorithm", sort=True)["best_fitness"]
    summary = pd.DataFrame({
        "runs": grouped.size(),
        "median_best": grouped.median(),
        "mean_best": grouped.mean(),
        "best": grouped.min(),
    }).reset_index()
    if optima:
        opt = table["instance"].map(optima)
        hit = opt.notna() & (table["best_fitness"] <= opt + 1e-9)
        hits = hit.groupby(table["algorithm"]).sum()
        summary["optimum_hits"] = summary["algorithm"].map(hits).astype(int)
    else:
        summary["optimum_hits"] = ""
    return summary[SUMMARY_COLUMNS]

# ==============================================================================
# SALIDAS
# ==============================================================================

def _fmt(value: float) -> str:
    return f"{value:g}"


def write_table(df: pd.DataFrame, path: Path):
    df.to_csv(path, index=False, lineterminator="\n")
    print(f"[+] CSV guardado: {path}")


def write_json(data: Dict[str, Any], path: Path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write("\n")
    print(f"[+] JSON guardado: {path}")

# ==============================================================================
# CLI
# ==============================================================================

class CliParser(argparse.ArgumentParser):
    """argparse sale con codigo 2 en errores de uso; aqui se convierten en UsageError (codigo 1)."""

    def error(self, message):
        raise UsageError(message)


def seed_type(text: str) -> int:
    if not _is_decimal(text) or int(text) >= 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed invalido '{text}': entero decimal sin signo de 64 bits")
    return int(text)


def seed_list_type(text: str) -> List[int]:
    return [seed_type(s.strip()) for s in text.split(",") if s.strip()]


def gen_spec_type(text: str) -> GenConfig:
    """'nurses=5,patterns_per_nurse=4,mode=planted,seed=3' -> GenConfig."""
    fields = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"spec de generacion invalida: '{part}'")
        key, value = (s.strip() for s in part.split("=", 1))
        if key == "mode":
            fields[key] = value
        elif key == "cost_max":
            fields["cost_range"] = (0, int(value))
        elif key == "undercover_weight":
            fields[key] = float(value)
        elif key in GenConfig.__dataclass_fields__:
            fields[key] = seed_type(value) if key == "seed" else int(value)
        else:
            raise argparse.ArgumentTypeError(f"campo desconocido en spec de generacion: '{key}'")
    return GenConfig(**fields)


def _add_boa_flags(p: argparse.ArgumentParser):
    p.add_argument("--pop-size", type=int, default=100, help="Tamano de poblacion P (default: 100)")
    p.add_argument("--elite-fraction", type=float, default=0.5, help="Fraccion elite rho (default: 0.5)")
    p.add_argument("--offspring", type=int, default=None, help="Hijos por generacion M (default: P/2)")
    p.add_argument("--smoothing", type=float, default=1.0, help="Suavizado de Laplace alpha (default: 1.0)")
    p.add_argument("--max-generations", type=int, default=200)
    p.add_argument("--stagnation", type=int, default=50, help="Generaciones sin mejora antes de parar")
    p.add_argument("--hc-iterations", type=int, default=50, help="Iteraciones del hill climber LCS")
    p.add_argument("--hc-delta", type=float, default=0.1, help="Refuerzo por mejora aceptada")


def _boa_template(args) -> BoaConfig:
    return BoaConfig(
        population_size=args.pop_size,
        elite_fraction=args.elite_fraction,
        offspring_count=args.offspring,
        smoothing=args.smoothing,
        max_generations=args.max_generations,
        stagnation_limit=args.stagnation,
        hc=HcConfig(iterations=args.hc_iterations, delta=args.hc_delta),
    )


def build_parser() -> CliParser:
    parser = CliParser(
        prog="harness.py",
        description="Explicit Learning Scheduler - BOA + LCS sobre rule strings para turnos de enfermeria",
        epilog=f"Reglas de construccion: {RULE_HELP}",
    )
    parser.add_argument("--quiet", action="store_true", help="Sin mensajes de progreso")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="Genera instancias sinteticas")
    p.add_argument("--nurses", type=int, default=10)
    p.add_argument("--days", type=int, default=7)
    p.add_argument("--shifts-per-day", type=int, default=2)
    p.add_argument("--patterns-per-nurse", type=int, default=4)
    p.add_argument("--cost-min", type=int, default=0)
    p.add_argument("--cost-max", type=int, default=10)
    p.add_argument("--mode", choices=["random", "planted"], default="random")
    p.add_argument("--seed", type=seed_type, default=0)
    p.add_argument("--undercover-weight", type=float, default=100.0)
    p.add_argument("--count", type=int, default=1, help="Cantidad de instancias (semillas consecutivas)")
    p.add_argument("--out", type=str, required=True, help="Archivo JSON de salida")

    p = sub.add_parser("solve", help="Resuelve una instancia con un algoritmo")
    p.add_argument("--instance", type=str, required=True)
    p.add_argument("--algo", type=str, default="boa+lcs",
                   help=f"{', '.join(ALGORITHMS)} o fixed:<regla>")
    p.add_argument("--seed", type=seed_type, default=0)
    p.add_argument("--budget", type=int, default=None,
                   help=f"Evaluaciones maximas (default: sin tope para boa, {DEFAULT_BUDGET} para lineas base)")
    p.add_argument("--out", type=str, default="./output", help="Directorio de salida")
    p.add_argument("--dump-table", type=str, default=None, help="Guarda la tabla de fuerzas final")
    p.add_argument("--trace", action="store_true", help="Muestra la construccion paso a paso del mejor")
    p.add_argument("--verbose", action="store_true", help="Progreso por generacion")
    _add_boa_flags(p)

    p = sub.add_parser("enumerate", help="Optimo por fuerza bruta (instancias chicas)")
    p.add_argument("--instance", type=str, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_COMBO_BUDGET, help="Maximo de combinaciones")

    p = sub.add_parser("compare", help="Compara algoritmos con el mismo presupuesto")
    p.add_argument("--config", type=str, default=None, help="Archivo JSON con la configuracion")
    p.add_argument("--instance", action="append", default=[], help="Instancia (repetible)")
    p.add_argument("--gen", action="append", type=gen_spec_type, default=[],
                   help="Instancia generada, ej: nurses=5,mode=planted,seed=3 (repetible)")
    p.add_argument("--algo", action="append", default=[], help="Algoritmo (repetible o separado por comas)")
    p.add_argument("--seeds", type=seed_list_type, default=None, help="Semillas separadas por coma")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", type=str, default=None, help="Directorio de salida")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="wall_time_ms = 0 (salida reproducible)")
    p.add_argument("--oracle", action="store_true", help="Certifica optimos con fuerza bruta")
    p.add_argument("--html", action="store_true", help="Genera comparison.html")
    p.add_argument("--xlsx", action="store_true", help="Genera comparison.xlsx")
    _add_boa_flags(p)
    return parser


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        config = GenConfig(
            nurses=args.nurses,
            days=args.days,
            shifts_per_day=args.shifts_per_day,
            patterns_per_nurse=args.patterns_per_nurse,
            cost_range=(args.cost_min, args.cost_max),
            mode=args.mode,
            seed=args.seed + i,
            undercover_weight=args.undercover_weight,
        )
        instance = generate_instance(config)
        path = out if args.count == 1 else out.with_name(f"{out.stem}-{config.seed}{out.suffix}")
        save_instance(instance, path)
        print(f"[+] Instancia guardada: {path} ({config.nurses} enfermeras, modo {config.mode}, "
              f"{instance.combinations} combinaciones)")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = load_instance(Path(args.instance))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    template = _boa_template(args)
    print(f"[*] Resolviendo {args.instance} con {args.algo} (seed {args.seed})")
    report = run_algorithm(instance, args.algo, args.seed, args.budget, template, verbose=args.verbose)

    best = report.best
    doc = report.solution_document()
    doc["instance"] = args.instance
    doc["coverage"] = json.loads(describe_schedule(instance, best.schedule).to_json(orient="records"))

    report.write_csv(out_dir / "report.csv")
    write_json(doc, out_dir / "solution.json")

    if args.dump_table:
        if report.table is None:
            print(f"[!] {args.algo} no usa tabla de fuerzas; --dump-table ignorado")
        else:
            with open(args.dump_table, "w", encoding="utf-8") as f:
                f.write(report.table.dump())
            print(f"[+] Tabla de fuerzas guardada: {args.dump_table}")

    if args.trace:
        if RANDOM_CHEAPEST in best.genotype:
            # el flujo aleatorio que puntuo al mejor no se conserva
            print(f"[!] La rule string usa {RULE_NAMES[RANDOM_CHEAPEST]}; --trace no puede reproducir "
                  f"la construccion y se omite")
        else:
            _, _, steps = decode_trace(instance, best.genotype)
            for s in steps:
                print(f"  paso {s['step']:>3} {s['rule']:<15} enfermera {s['nurse']:>3} -> patron {s['pattern']} "
                      f"(reduce {s['reduction']})")

    print("\n" + "=" * 60)
    print("RESUMEN")
    print("=" * 60)
    print(f"Mejor total: {_fmt(best.fitness.total)}")
    print(f"Costo de preferencia: {_fmt(best.fitness.preference_cost)}")
    print(f"Deficit de cobertura: {best.fitness.undercover_units}")
    print(f"Generaciones: {report.generations} | Evaluaciones: {report.total_evaluations}")
    print("\n[OK] Listo!")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    instance = load_instance(Path(args.instance))
    print(f"[*] Enumerando {instance.combinations} combinaciones")
    schedule, fitness = enumerate_optimum(instance, args.budget)
    print(f"[+] Optimo: total={_fmt(fitness.total)} costo={_fmt(fitness.preference_cost)} "
          f"deficit={fitness.undercover_units}")
    print(f"[+] Horario: {list(schedule.assignment)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.config:
        config_path = Path(args.config)
        with open(config_path, "r", encoding="utf-8") as f:
            config = ExperimentConfig.from_dict(json.load(f), base_dir=config_path.parent)
    else:
        algorithms = [a for token in args.algo for a in token.split(",") if a.strip()]
        config = ExperimentConfig(
            instances=tuple(args.instance) + tuple(args.gen),
            algorithms=tuple(a.strip() for a in algorithms),
            seeds=tuple(args.seeds or ()),
            budget=args.budget,
            workers=args.workers,
            boa=_boa_template(args),
        )
    # las banderas explicitas pisan al archivo
    overrides = {}
    if args.out:
        overrides["output_dir"] = Path(args.out)
    if args.no_timing:
        overrides["timing"] = False
    if args.oracle:
        overrides["oracle"] = True
    if args.workers != 1:
        overrides["workers"] = args.workers
    config = replace(config, **overrides)
    config.validate()

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    table = run_experiment(config, verbose=not args.quiet)
    optima = oracle_optima(config) if config.oracle else None
    summary = summarize(table, optima)

    write_table(table, out_dir / "comparison.csv")
    write_table(summary, out_dir / "summary.csv")
    if args.xlsx:
        xlsx_path = out_dir / "comparison.xlsx"
        with pd.ExcelWriter(xlsx_path, engine="openpyxl") as writer:
            table.to_excel(writer, sheet_name="runs", index=False)
            summary.to_excel(writer, sheet_name="summary", index=False)
        print(f"[+] XLSX guardado: {xlsx_path}")
    if args.html:
        html_path = out_dir / "comparison.html"
        with open(html_path, "w", encoding="utf-8") as f:
            f.write(generate_html_dashboard(table, summary, budget=config.budget, optima=optima))
        print(f"[+] HTML guardado: {html_path}")

    print("\n" + "=" * 60)
    print("RESUMEN POR ALGORITMO")
    print("=" * 60)
    for row in summary.itertuples(index=False):
        print(f"  {row.algorithm:<10} mediana={_fmt(row.median_best)} mejor={_fmt(row.best)} corridas={row.runs}")
    print("\n[OK] Comparacion completada!")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Codigos de salida: 0 ok, 1 error de uso, 2 error de E/S o validacion."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK

    try:
        with contextlib.ExitStack() as stack:
            if args.quiet:
                devnull = stack.enter_context(open(os.devnull, "w", encoding="utf-8"))
                stack.enter_context(contextlib.redirect_stdout(devnull))
            return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"[ERROR] archivo no encontrado: {e.filename}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as e:
        print(f"[ERROR] JSON invalido: {e}", file=sys.stderr)
        return EXIT_IO
    except (InstanceError, ConfigError, DecodeError, SelectionError, BudgetExceededError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
