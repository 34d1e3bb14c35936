#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Chequeo de aceptacion empirico
Corre los experimentos largos que no van en la suite de tests:
  1. brecha contra el oraculo en 50 instancias chicas aleatorias
  2. recuperacion de instancias planted de 10 enfermeras
  3. aprendizaje vs sin aprendizaje en una instancia de 20 enfermeras y 8 patrones,
     con la dispersion (cuartiles, media) de cada algoritmo
Escribe acceptance.json en el directorio de salida y sale con 1 si algo falla.
"""
import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from boa import BoaConfig, evolve
from harness import run_algorithm
from nurse_model import GenConfig, enumerate_optimum, generate_instance


def check_oracle_gap(n_instances: int, budget: int) -> dict:
    print(f"[*] Oraculo: {n_instances} instancias aleatorias (5 enfermeras, 4 patrones), presupuesto {budget}")
    t0 = time.perf_counter()
    hits = 0
    for seed in range(n_instances):
        instance = generate_instance(GenConfig(nurses=5, patterns_per_nurse=4, seed=seed))
        _, optimum = enumerate_optimum(instance)
        report = run_algorithm(instance, "boa+lcs", seed=0, budget=budget, boa_template=BoaConfig())
        hit = report.best.fitness.total <= optimum.total + 1e-9
        hits += hit
        print(f"  [{seed + 1}/{n_instances}] optimo={optimum.total:g} boa+lcs={report.best.fitness.total:g} "
              f"{'✓' if hit else '✗'}")
    elapsed = time.perf_counter() - t0
    required = int(np.ceil(0.9 * n_instances))
    return {"hits": hits, "required": required, "seconds": round(elapsed, 1),
            "passed": hits >= required and elapsed < 120}


def check_planted(n_instances: int) -> dict:
    print(f"[*] Planted: {n_instances} instancias de 10 enfermeras, hasta 200 generaciones")
    solved = 0
    for seed in range(n_instances):
        instance = generate_instance(GenConfig(nurses=10, mode="planted", seed=seed))
        report = evolve(instance, BoaConfig(lcs_enabled=True, seed=seed))
        ok = report.best.fitness.total == 0
        solved += ok
        print(f"  [{seed + 1}/{n_instances}] best={report.best.fitness.total:g} "
              f"generaciones={report.generations} {'✓' if ok else '✗'}")
    required = int(np.ceil(0.8 * n_instances))
    return {"solved": solved, "required": required, "passed": solved >= required}


# Instancia del chequeo de aprendizaje (8^20 combinaciones)
LEARNING_INSTANCE = GenConfig(nurses=20, patterns_per_nurse=8, cost_range=(0, 20), seed=2003)


def _spread(totals) -> dict:
    values = np.asarray(totals, dtype=float)
    p25, median, p75 = np.percentile(values, [25, 50, 75])
    return {
        "best": float(values.min()),
        "p25": float(p25),
        "median": float(median),
        "p75": float(p75),
        "worst": float(values.max()),
        "mean": round(float(values.mean()), 3),
    }


def check_learning(n_seeds: int, budget: int, gen: GenConfig = LEARNING_INSTANCE) -> dict:
    print(f"[*] Aprendizaje: 1 instancia de {gen.nurses} enfermeras ({gen.patterns_per_nurse} patrones), "
          f"{n_seeds} semillas, presupuesto {budget}")
    instance = generate_instance(gen)
    spread = {}
    for algo in ("random", "boa", "boa+lcs"):
        totals = [
            run_algorithm(instance, algo, seed, budget, BoaConfig()).best.fitness.total
            for seed in range(n_seeds)
        ]
        spread[algo] = _spread(totals)
        s = spread[algo]
        print(f"  {algo:<8} mejor={s['best']:g} p25={s['p25']:g} mediana={s['median']:g} "
              f"p75={s['p75']:g} peor={s['worst']:g} media={s['mean']:g}")

    medians = {algo: s["median"] for algo, s in spread.items()}
    separated = len(set(medians.values())) > 1
    if not separated:
        print("[!] Las tres medianas coinciden; la instancia no distingue los algoritmos")
    passed = medians["boa"] <= medians["random"] and medians["boa+lcs"] <= medians["boa"]
    return {"instance": gen.as_dict(), "medians": medians, "spread": spread,
            "separated": separated, "passed": passed}


def main():
    parser = argparse.ArgumentParser(description="Chequeo de aceptacion empirico")
    parser.add_argument("--instances", type=int, default=50)
    parser.add_argument("--planted", type=int, default=10)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--learning-patterns", type=int, default=LEARNING_INSTANCE.patterns_per_nurse,
                        help="Patrones por enfermera de la instancia de aprendizaje")
    parser.add_argument("--learning-seed", type=int, default=LEARNING_INSTANCE.seed)
    parser.add_argument("--output-dir", type=str, default="./output")
    args = parser.parse_args()

    learning = replace(LEARNING_INSTANCE, patterns_per_nurse=args.learning_patterns, seed=args.learning_seed)
    output_dir = Path(args.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    print("=" * 60)
    print("Explicit Learning Scheduler - Aceptacion")
    print("=" * 60)

    results = {
        "oracle_gap": check_oracle_gap(args.instances, budget=5000),
        "planted": check_planted(args.planted),
        "learning": check_learning(args.seeds, budget=10_000, gen=learning),
    }

    json_path = output_dir / "acceptance.json"
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(results, f, ensure_ascii=False, indent=2)
    print(f"\n[+] JSON guardado: {json_path}")

    print("\n" + "=" * 60)
    print("RESUMEN")
    print("=" * 60)
    for name, res in results.items():
        print(f"  {name:<12} {'OK' if res['passed'] else 'FALLA'}")

    if all(r["passed"] for r in results.values()):
        print("\n[OK] Todos los criterios cumplidos!")
        return 0
    print("\n[!] Hay criterios sin cumplir")
    return 1


if __name__ == "__main__":
    sys.exit(main())
