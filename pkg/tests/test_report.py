"""Serialization: float round-trips, CSV layout, JSON mirror, figures."""

import json
import math

import numpy as np

from plc_capacity.capacity import snr_sweep
from plc_capacity.model import LptvChannel, gaussian, iid_noise
from plc_capacity.noisegen import PresetId, build_preset
from plc_capacity.report import (
    CSV_COLUMNS,
    csv_text,
    json_document,
    render_figure,
    sweep_rows,
    write_csv,
    write_json,
)


def _sweep():
    ch = LptvChannel(np.eye(1)[None, None])
    noise = iid_noise(build_preset(PresetId.GM2))
    return snr_sweep(ch, noise, [0.0, 10.0, 20.0], n_omega=64)


def test_float_cells_round_trip_exactly():
    sweep = _sweep()
    rows = sweep_rows(sweep)
    for row, rep in zip(rows, sweep.reports):
        assert float(row[2]) == rep.upper
        assert float(row[3]) == rep.lower1
        assert float(row[6]) == rep.delta
    # 17 significant digits recover any double exactly
    for x in (math.pi, 1 / 3, 2**-1074, 1e308):
        assert float(format(x, ".17g")) == x


def test_csv_layout():
    text = csv_text(_sweep())
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    for line in lines[1:]:
        assert len(line.split(",")) == len(CSV_COLUMNS)


def test_csv_empty_lower2_cell():
    ch = LptvChannel(np.ones((1, 1, 1, 2)))  # nonsquare: lower2 omitted
    noise = iid_noise(gaussian(np.eye(1), normalize=False))
    sweep = snr_sweep(ch, noise, [0.0], n_omega=16)
    row = sweep_rows(sweep)[0]
    assert row[4] == ""
    assert "lower2-omitted:nonsquare" in row[9]


def test_bps_factor_scales_rate_columns_only():
    sweep = _sweep()
    one = sweep_rows(sweep, 1.0)[0]
    two = sweep_rows(sweep, 2.0)[0]
    assert float(two[2]) == 2.0 * float(one[2])
    assert float(two[3]) == 2.0 * float(one[3])
    assert two[6] == one[6]  # water level is not a rate
    assert two[7] == one[7]


def test_json_document_mirrors_rows():
    sweep = _sweep()
    doc = json_document(sweep, name="demo", extra={"note": "x"})
    assert doc["schema"] == 1 and doc["name"] == "demo" and doc["note"] == "x"
    assert doc["block_length"] == sweep.per
    assert len(doc["rows"]) == 3
    assert doc["rows"][1]["upper_bps"] == sweep.reports[1].upper
    assert doc["entropy"]["szego_gain_bits"] == sweep.entropy.szego_gain_bits


def test_writers_produce_loadable_files(tmp_path):
    sweep = _sweep()
    csv_path = tmp_path / "a.csv"
    json_path = tmp_path / "a.json"
    write_csv(str(csv_path), sweep)
    write_json(str(json_path), sweep, name="demo")
    assert csv_path.read_text() == csv_text(sweep)
    doc = json.loads(json_path.read_text())
    assert doc["rows"][0]["snr_db"] == 0.0


def test_render_figure_formats(tmp_path):
    sweep = _sweep()
    for ext in ("svg", "png", "pdf"):
        path = tmp_path / f"fig.{ext}"
        render_figure(str(path), sweep, title="demo")
        assert path.exists() and path.stat().st_size > 500
