"""Result serialization: delimited text, JSON, and rendered figures.

The CSV layout is the stable machine interface: one row per
signal-to-noise point with the columns

    snr_db, p_tilde, upper_bps, lower1_bps, lower2_bps, c_gauss_bps,
    delta, h_rate_low, h_rate_high, flags

Rates marked _bps are spectral efficiencies (bits/sample times the
scenario's samples-per-hertz factor); h_rate columns are entropy-rate
endpoints in bits per original sample; lower2_bps is empty on rows where
that bound is omitted.  Floats are written with 17 significant digits so
identical runs serialize to identical bytes.
"""

from __future__ import annotations

import io
import json

from .capacity import SweepResult

CSV_COLUMNS = (
    "snr_db",
    "p_tilde",
    "upper_bps",
    "lower1_bps",
    "lower2_bps",
    "c_gauss_bps",
    "delta",
    "h_rate_low",
    "h_rate_high",
    "flags",
)


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def sweep_rows(sweep: SweepResult, bps_factor: float = 1.0):
    """CSV cell values, one tuple of strings per report row."""
    rows = []
    for r in sweep.reports:
        rows.append(
            (
                _fmt(r.snr_db),
                _fmt(r.p_tilde),
                _fmt(r.upper * bps_factor),
                _fmt(r.lower1 * bps_factor),
                _fmt(None if r.lower2 is None else r.lower2 * bps_factor),
                _fmt(r.c_gauss * bps_factor),
                _fmt(r.delta),
                _fmt(r.h_rate.lower),
                _fmt(r.h_rate.upper),
                ";".join(r.flags),
            )
        )
    return rows


def csv_text(sweep: SweepResult, bps_factor: float = 1.0) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for row in sweep_rows(sweep, bps_factor):
        out.write(",".join(row) + "\n")
    return out.getvalue()


def write_csv(path: str, sweep: SweepResult, bps_factor: float = 1.0) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(sweep, bps_factor))


def json_document(
    sweep: SweepResult, bps_factor: float = 1.0, name: str = "", extra: dict | None = None
) -> dict:
    """JSON mirror of the CSV rows plus run-level context."""
    rows = []
    for r in sweep.reports:
        rows.append(
            {
                "snr_db": r.snr_db,
                "p_tilde": r.p_tilde,
                "upper_bps": r.upper * bps_factor,
                "lower1_bps": r.lower1 * bps_factor,
                "lower2_bps": None if r.lower2 is None else r.lower2 * bps_factor,
                "c_gauss_bps": r.c_gauss * bps_factor,
                "delta": r.delta,
                "h_rate_low": r.h_rate.lower,
                "h_rate_high": r.h_rate.upper,
                "flags": list(r.flags),
            }
        )
    doc = {
        "schema": 1,
        "name": name,
        "bps_factor": bps_factor,
        "block_length": sweep.per,
        "n_omega": sweep.n_omega,
        "noise_power": sweep.noise_power,
        "entropy": {
            "innovation_low": sweep.entropy.innovation.lower,
            "innovation_high": sweep.entropy.innovation.upper,
            "szego_gain_bits": sweep.entropy.szego_gain_bits,
            "per_sample_low": sweep.entropy.per_sample.lower,
            "per_sample_high": sweep.entropy.per_sample.upper,
        },
        "rows": rows,
    }
    if extra:
        doc.update(extra)
    return doc


def write_json(
    path: str, sweep: SweepResult, bps_factor: float = 1.0, name: str = "",
    extra: dict | None = None,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(json_document(sweep, bps_factor, name, extra), fh, indent=2)
        fh.write("\n")


def render_figure(
    path: str, sweep: SweepResult, bps_factor: float = 1.0, title: str = ""
) -> None:
    """Bound-vs-SNR curves rendered to an image file (format by extension)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    snr = [r.snr_db for r in sweep.reports]
    upper = [r.upper * bps_factor for r in sweep.reports]
    lower1 = [r.lower1 * bps_factor for r in sweep.reports]
    l2_pts = [
        (r.snr_db, r.lower2 * bps_factor)
        for r in sweep.reports
        if r.lower2 is not None
    ]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(snr, upper, "-", color="tab:red", label="upper bound")
    if l2_pts:
        ax.plot(
            [p[0] for p in l2_pts],
            [p[1] for p in l2_pts],
            "--",
            color="tab:blue",
            label="lower bound 2",
        )
    ax.plot(snr, lower1, "-.", color="tab:green", label="lower bound 1 (Gaussian)")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("spectral efficiency (bits/s/Hz)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
