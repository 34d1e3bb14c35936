#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dashboard HTML de una comparacion
Resumen por algoritmo y tabla completa de corridas (ordenable y filtrable).
Solo tablas: los graficos se hacen fuera, a partir de los CSV.
"""
import html
from typing import Dict, Optional

import pandas as pd

# ==============================================================================
# ESTILO
# ==============================================================================

DASHBOARD_CSS = """
    body { margin: 0; background: #0b0d12; color: #e8e8ef; font: 14px/1.5 system-ui, sans-serif; }
    main { max-width: 1200px; margin: 0 auto; padding: 2rem; }
    h1 small { color: #7a7f8c; font-size: 0.9rem; font-weight: 400; }
    h2 { font-size: 1rem; display: flex; gap: 1rem; align-items: center; }
    .banner { padding: 0.8rem 1.2rem; border-radius: 8px; }
    .status-ok { background: #10b98122; border: 1px solid #10b981; }
    .status-warning { background: #f59e0b22; border: 1px solid #f59e0b; }
    .cards { display: grid; grid-template-columns: repeat(5, 1fr); gap: 0.8rem; }
    .card { background: #151821; border-radius: 8px; padding: 1rem; text-align: center; }
    .card small { display: block; color: #7a7f8c; text-transform: uppercase; }
    .card b { font: 700 1.6rem monospace; }
    .green { color: #10b981; }
    .blue { color: #3b82f6; }
    section { background: #151821; border-radius: 8px; padding: 0 1rem 1rem; margin-top: 1.2rem; overflow-x: auto; }
    table { width: 100%; border-collapse: collapse; font-family: monospace; }
    th, td { text-align: left; padding: 0.5rem 0.8rem; border-bottom: 1px solid #262a36; }
    #runsTable th { cursor: pointer; }
    tr.hit { background: #10b98111; }
    tr.miss { background: #f59e0b11; }
    .tag { padding: 0.1rem 0.4rem; border-radius: 4px; background: #262a36; }
    .tag.lead { color: #10b981; }
    input { margin-left: auto; padding: 0.3rem; background: #0b0d12; color: inherit; border: 1px solid #262a36; }
"""

# Filtro por texto y orden por columna (click alterna asc/desc)
DASHBOARD_JS = """
    const runs = document.querySelector('#runsTable tbody');
    document.getElementById('filterInput').oninput = e => {
        const q = e.target.value.toLowerCase();
        for (const tr of runs.rows) tr.hidden = !tr.textContent.toLowerCase().includes(q);
    };
    document.querySelectorAll('#runsTable th').forEach((th, col) => th.onclick = () => {
        const dir = th.dataset.dir === 'asc' ? -1 : 1;
        th.dataset.dir = dir === 1 ? 'asc' : 'desc';
        const key = tr => tr.cells[col].textContent.trim();
        const cmp = th.dataset.num === '1'
            ? (a, b) => ((parseFloat(key(a)) || 0) - (parseFloat(key(b)) || 0))
            : (a, b) => key(a).localeCompare(key(b), 'es');
        [...runs.rows].sort((a, b) => dir * cmp(a, b)).forEach(tr => runs.appendChild(tr));
    });
"""


def _fmt(value) -> str:
    if value is None or value == "" or (isinstance(value, float) and pd.isna(value)):
        return "-"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def generate_html_dashboard(table: pd.DataFrame, summary: pd.DataFrame, budget: int,
                            optima: Optional[Dict[str, Optional[float]]] = None) -> str:
    """Genera el dashboard HTML con los resultados de `compare`."""
    n_runs = len(table)
    n_instances = table["instance"].nunique() if n_runs else 0
    n_algorithms = table["algorithm"].nunique() if n_runs else 0

    # Estado general segun el oraculo (si se corrio)
    certified = {k: v for k, v in (optima or {}).items() if v is not None}
    if not n_runs:
        status_class, status_text = "status-warning", "Sin corridas"
    elif certified:
        hits = int(pd.to_numeric(summary["optimum_hits"], errors="coerce").fillna(0).sum())
        status_class = "status-ok" if hits else "status-warning"
        status_text = f"{hits} corridas alcanzaron el optimo certificado ({len(certified)} instancias con oraculo)"
    else:
        status_class, status_text = "status-ok", "Comparacion completada (sin oraculo)"

    leader = "-"
    if len(summary):
        leader = str(summary.sort_values(["median_best", "algorithm"]).iloc[0]["algorithm"])

    summary_rows = ""
    for row in summary.itertuples(index=False):
        tag = "tag lead" if row.algorithm == leader else "tag"
        summary_rows += f'''<tr>
                <td><span class="{tag}">{html.escape(str(row.algorithm))}</span></td>
                <td>{row.runs}</td>
                <td>{_fmt(row.median_best)}</td>
                <td>{_fmt(row.mean_best)}</td>
                <td>{_fmt(row.best)}</td>
                <td>{_fmt(row.optimum_hits)}</td>
            </tr>'''

    all_rows = ""
    for row in table.itertuples(index=False):
        optimum = certified.get(row.instance)
        row_class = ""
        if optimum is not None:
            row_class = "hit" if row.best_fitness <= optimum + 1e-9 else "miss"
        all_rows += f'''<tr class="{row_class}">
                <td>{html.escape(str(row.instance))}</td>
                <td><span class="tag">{html.escape(str(row.algorithm))}</span></td>
                <td>{row.seed}</td>
                <td>{_fmt(row.best_fitness)}</td>
                <td>{_fmt(optimum)}</td>
                <td>{row.evaluations}</td>
                <td>{row.wall_time_ms}</td>
            </tr>'''

    cards = "".join(
        f'<div class="card"><small>{label}</small><b class="{tone}">{html.escape(str(value))}</b></div>'
        for label, value, tone in (
            ("Corridas", n_runs, "blue"),
            ("Instancias", n_instances, "blue"),
            ("Algoritmos", n_algorithms, "blue"),
            ("Presupuesto", budget, ""),
            ("Mejor mediana", leader, "green"),
        )
    )

    return f'''<!DOCTYPE html>
<html lang="es">
<head>
    <meta charset="UTF-8">
    <title>Explicit Learning Scheduler - Comparacion</title>
    <style>{DASHBOARD_CSS}</style>
</head>
<body>
    <main>
        <h1>Explicit Learning Scheduler <small>comparacion con presupuesto igualado</small></h1>
        <p class="banner {status_class}">{html.escape(status_text)}</p>
        <div class="cards">{cards}</div>

        <section>
            <h2>Resumen por algoritmo ({len(summary)})</h2>
            <table>
                <thead><tr><th>Algoritmo</th><th>Corridas</th><th>Mediana</th><th>Media</th><th>Mejor</th><th>Optimos</th></tr></thead>
                <tbody>{summary_rows}</tbody>
            </table>
        </section>

        <section>
            <h2>Corridas ({n_runs}) <input id="filterInput" placeholder="Filtrar..."></h2>
            <table id="runsTable">
                <thead><tr>
                    <th data-num="0">Instancia</th><th data-num="0">Algoritmo</th><th data-num="1">Seed</th>
                    <th data-num="1">Mejor</th><th data-num="1">Optimo</th><th data-num="1">Evaluaciones</th><th data-num="1">ms</th>
                </tr></thead>
                <tbody>{all_rows}</tbody>
            </table>
        </section>
    </main>
    <script>{DASHBOARD_JS}</script>
</body>
</html>'''
