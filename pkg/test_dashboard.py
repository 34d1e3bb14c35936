#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Prueba del dashboard HTML sin correr una comparacion completa.
Con pytest verifica el contenido; ejecutado directo escribe output/test_comparison.html.
"""
from pathlib import Path

import pandas as pd

from dashboard import generate_html_dashboard
from harness import summarize

# Datos de prueba simulados
test_table = pd.DataFrame([
    {"instance": "gen-planted-n6-p4-s7", "algorithm": "boa", "seed": 0, "best_fitness": 0.0, "evaluations": 5000, "wall_time_ms": 0},
    {"instance": "gen-planted-n6-p4-s7", "algorithm": "boa+lcs", "seed": 0, "best_fitness": 0.0, "evaluations": 4980, "wall_time_ms": 0},
    {"instance": "gen-planted-n6-p4-s7", "algorithm": "random", "seed": 0, "best_fitness": 106.0, "evaluations": 5000, "wall_time_ms": 0},
    {"instance": "ward<a>", "algorithm": "random", "seed": 1, "best_fitness": 212.0, "evaluations": 5000, "wall_time_ms": 0},
])
test_optima = {"gen-planted-n6-p4-s7": 0.0, "ward<a>": None}


def test_dashboard_contains_every_run():
    summary = summarize(test_table, test_optima)
    page = generate_html_dashboard(test_table, summary, budget=5000, optima=test_optima)
    assert page.startswith("<!DOCTYPE html>")
    assert page.count('<tr class="') == len(test_table)
    assert 'id="runsTable"' in page
    assert "2 corridas alcanzaron el optimo" in page


def test_dashboard_escapes_names():
    summary = summarize(test_table)
    page = generate_html_dashboard(test_table, summary, budget=5000)
    assert "ward&lt;a&gt;" in page
    assert "ward<a>" not in page
    assert "sin oraculo" in page


def test_dashboard_is_deterministic():
    summary = summarize(test_table)
    first = generate_html_dashboard(test_table, summary, budget=5000)
    assert first == generate_html_dashboard(test_table, summary, budget=5000)


def test_dashboard_empty_table():
    empty = test_table.iloc[0:0]
    page = generate_html_dashboard(empty, summarize(empty), budget=100)
    assert "Sin corridas" in page


if __name__ == "__main__":
    html = generate_html_dashboard(test_table, summarize(test_table, test_optima), budget=5000, optima=test_optima)
    output_dir = Path("output")
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / "test_comparison.html"
    path.write_text(html, encoding="utf-8")
    print(f"[+] HTML de prueba guardado: {path}")
