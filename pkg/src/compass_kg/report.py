"""Coverage reports: delimited rows plus rendered figures.

Each report writes a CSV next to a PNG chart of the same data, so the numbers
stay scriptable while the figure is ready for a slide.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .competency import gaps_and_duplicates, priority_demographics
from .ontology import Schema
from .store import TripleStore


def _short(term) -> str:
    return term.n3() if term is not None else ""


def demographics_rows(store: TripleStore, schema: Schema) -> list[list[str]]:
    rows = [["location", "stakeholder", "serviceCode", "count"]]
    for r in priority_demographics(store, schema):
        rows.append([_short(r.location), _short(r.stakeholder), _short(r.service_code), str(r.count)])
    return rows


def gaps_rows(store: TripleStore, schema: Schema):
    report = gaps_and_duplicates(store, schema)
    gap_rows = [["location", "satisfier", "demandingClients"]]
    for g in report.gaps:
        gap_rows.append([_short(g.location), _short(g.satisfier), str(g.demanding_clients)])
    dup_rows = [["location", "serviceCode", "services"]]
    for d in report.duplicates:
        dup_rows.append(
            [_short(d.location), _short(d.service_code),
             " ".join(sorted(_short(s) for s in d.services))]
        )
    return gap_rows, dup_rows


def to_csv(rows: list[list[str]]) -> str:
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerows(rows)
    return out.getvalue()


def _bar_figure(labels, values, title, ylabel, path: Path):
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(labels) + 2), 4.5))
    ax.bar(range(len(labels)), values, color="#346beb")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_demographics_report(store: TripleStore, schema: Schema, outdir: Path) -> list[Path]:
    """demographics.csv + demographics.png (top-20 bar chart). Returns paths."""
    outdir.mkdir(parents=True, exist_ok=True)
    rows = demographics_rows(store, schema)
    csv_path = outdir / "demographics.csv"
    csv_path.write_text(to_csv(rows), encoding="utf-8")
    head = rows[1:21]
    png_path = outdir / "demographics.png"
    _bar_figure(
        [f"{r[1]}\n{r[2]}" for r in head],
        [int(r[3]) for r in head],
        "Service usage by demographic group",
        "clients",
        png_path,
    )
    return [csv_path, png_path]


def write_gaps_report(store: TripleStore, schema: Schema, outdir: Path) -> list[Path]:
    """gaps.csv, duplicates.csv + gaps.png. Returns paths."""
    outdir.mkdir(parents=True, exist_ok=True)
    gap_rows, dup_rows = gaps_rows(store, schema)
    gaps_csv = outdir / "gaps.csv"
    gaps_csv.write_text(to_csv(gap_rows), encoding="utf-8")
    dups_csv = outdir / "duplicates.csv"
    dups_csv.write_text(to_csv(dup_rows), encoding="utf-8")
    png_path = outdir / "gaps.png"
    body = gap_rows[1:21]
    if body:
        _bar_figure(
            [f"{r[0]}\n{r[1]}" for r in body],
            [int(r[2]) for r in body],
            "Unserved demand by location and satisfier",
            "demanding clients",
            png_path,
        )
    else:
        fig, ax = plt.subplots(figsize=(6, 3))
        ax.text(0.5, 0.5, "No coverage gaps", ha="center", va="center", fontsize=14)
        ax.set_axis_off()
        fig.savefig(png_path, dpi=120)
        plt.close(fig)
    return [gaps_csv, dups_csv, png_path]
