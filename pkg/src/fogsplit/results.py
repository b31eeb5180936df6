"""CSV and manifest serialisation of sweep results."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence

from .scenarios import ResultRow

CSV_COLUMNS = (
    "scenario", "demand_mips", "traffic_gbps", "K", "solver", "total_w", "network_w", "processing_w",
    "iot_w", "accessfog_w", "edgefog_w", "metro_w", "core_w", "cloud_w", "baseline_w",
    "savings_vs_cloud_pct", "savings_vs_k1_pct", "optimal", "wall_ms",
)


def format_float(value: float) -> str:
    text = f"{value:.6g}"
    return "0" if text == "-0" else text


def _cell(row: ResultRow, col: str, timings: bool) -> str:
    value = getattr(row, col)
    if col == "wall_ms":
        return format_float(value) if timings and value is not None else ""
    if col == "optimal":
        return "true" if value else "false"
    if col == "K":
        return str(int(value))
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def rows_to_csv(rows: Iterable[ResultRow], timings: bool = False) -> str:
    """CSV text with a fixed header; floats at 6 significant digits.

    ``wall_ms`` is left empty unless ``timings`` is set, so identical runs
    give identical bytes.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_cell(row, c, timings) for c in CSV_COLUMNS])
    return buf.getvalue()


def csv_to_rows(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        kw = {}
        for col in CSV_COLUMNS:
            raw = rec[col]
            if col == "K":
                kw[col] = int(raw)
            elif col == "optimal":
                kw[col] = raw == "true"
            elif col in ("scenario", "solver"):
                kw[col] = raw
            elif col == "wall_ms":
                kw[col] = float(raw) if raw else None
            else:
                kw[col] = float(raw)
        rows.append(ResultRow(**kw))
    return rows


def write_csv(path: str | Path, rows: Sequence[ResultRow], timings: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(rows, timings))
    return path


def manifest_path(csv_path: str | Path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".manifest.json")


def write_manifest(csv_path: str | Path, manifest: dict) -> Path:
    path = manifest_path(csv_path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
