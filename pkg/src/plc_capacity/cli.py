"""Command-line interface.

Verbs:
  bounds    evaluate capacity bounds over an SNR grid, emit CSV/JSON/figure
  entropy   report noise entropy rates for a noise law or configured model
  validate  run the model invariant suite, optionally with sampling checks
  presets   dump built-in noise presets and scenario names

Exit codes: 0 success, 2 configuration or usage error, 3 invariant
violation from `validate`.  The PLC_CAPACITY_THREADS environment variable
caps worker threads.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._env import thread_cap
from .capacity import bounds, snr_sweep
from .config import (
    RunSpec,
    load_config,
    parse_snr_spec,
    preset_run,
)
from .entropy import (
    gaussian_entropy_rate,
    innovation_entropy,
    mc_entropy_estimate,
    noise_entropy_rate,
)
from .errors import (
    ConfigError,
    DivergentIntegralError,
    ModelError,
    NumericalError,
    SingularHeadTapError,
    SingularNoiseError,
)
from .model import (
    LptvChannel,
    complex_nakagami,
    iid_noise,
    lift,
    lifted_noise_autocorrelation,
)
from .noisegen import PresetId, build_preset, sample_innovation
from .report import csv_text, render_figure, write_csv, write_json
from .scenarios import SCENARIO_NAMES, build_scenario
from .spectra import band_nodes, build_grid, szego_logdet

MATH_ERRORS = (SingularNoiseError, DivergentIntegralError, NumericalError)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plc-capacity",
        description="Capacity bounds for periodically time-varying channels "
        "with cyclostationary non-Gaussian noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser(
        "bounds", help="evaluate capacity bounds over an SNR grid"
    )
    src = p_bounds.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON scenario document")
    src.add_argument(
        "--preset",
        choices=SCENARIO_NAMES,
        help="built-in scenario name",
    )
    p_bounds.add_argument(
        "--snr",
        help="SNR grid in dB: 'A:STEP:B' range or comma-separated list",
    )
    p_bounds.add_argument("--n-omega", type=int, help="quadrature nodes per band")
    p_bounds.add_argument("--seed", type=int, help="seed for seeded steps")
    p_bounds.add_argument("--csv", help="write rows to this CSV file")
    p_bounds.add_argument("--json", dest="json_path", help="write a JSON mirror")
    p_bounds.add_argument("--svg", help="render bound curves to this file")

    p_entropy = sub.add_parser(
        "entropy", help="report entropy rates for a noise model"
    )
    esrc = p_entropy.add_mutually_exclusive_group(required=True)
    esrc.add_argument(
        "--preset",
        choices=[p.value for p in PresetId],
        help="noise preset (normalized to unit variance)",
    )
    esrc.add_argument(
        "--nakagami",
        nargs=2,
        type=float,
        metavar=("M", "OMEGA"),
        help="closed-form entropy of a complex-Nakagami law, as given",
    )
    esrc.add_argument("--config", help="JSON scenario document (its noise block)")
    p_entropy.add_argument("--n-omega", type=int, help="quadrature nodes per band")
    p_entropy.add_argument("--seed", type=int, help="seed for the sampling check")
    p_entropy.add_argument(
        "--mc",
        action="store_true",
        help="also print a nearest-neighbor sampling estimate",
    )

    p_val = sub.add_parser("validate", help="run the model invariant suite")
    vsrc = p_val.add_mutually_exclusive_group(required=True)
    vsrc.add_argument("--config", help="JSON scenario document")
    vsrc.add_argument("--preset", choices=SCENARIO_NAMES, help="built-in scenario")
    p_val.add_argument("--n-omega", type=int, help="quadrature nodes per band")
    p_val.add_argument("--seed", type=int, help="seed for seeded checks")
    p_val.add_argument(
        "--mc",
        action="store_true",
        help="include the sampling entropy cross-check",
    )

    p_presets = sub.add_parser("presets", help="inspect built-in presets")
    psub = p_presets.add_subparsers(dest="action", required=True)
    p_dump = psub.add_parser("dump", help="print preset parameters as JSON")
    p_dump.add_argument("name", nargs="?", help="single preset to dump")
    return parser


def _resolve_run(args) -> RunSpec:
    if args.config:
        spec = load_config(args.config)
    else:
        spec = preset_run(args.preset)
    snr = spec.snr_db
    if getattr(args, "snr", None):
        snr = parse_snr_spec(args.snr)
    n_omega = spec.n_omega
    if getattr(args, "n_omega", None):
        n_omega = int(args.n_omega)
    seed = spec.seed
    if getattr(args, "seed", None) is not None:
        seed = int(args.seed)
    return RunSpec(
        name=spec.name,
        scenario=spec.scenario,
        snr_db=snr,
        n_omega=n_omega,
        seed=seed,
        block_length=spec.block_length,
    )


def cmd_bounds(args) -> int:
    spec = _resolve_run(args)
    scenario = spec.scenario
    sweep = snr_sweep(
        scenario.channel,
        scenario.noise,
        spec.snr_db,
        n_omega=spec.n_omega,
        per=spec.block_length,
        threads=thread_cap(default=1),
    )
    factor = scenario.bps_factor
    wrote = False
    if args.csv:
        write_csv(args.csv, sweep, factor)
        print(f"wrote {args.csv}")
        wrote = True
    if args.json_path:
        write_json(
            args.json_path,
            sweep,
            factor,
            name=spec.name,
            extra={"description": scenario.description},
        )
        print(f"wrote {args.json_path}")
        wrote = True
    if args.svg:
        render_figure(args.svg, sweep, factor, title=spec.name)
        print(f"wrote {args.svg}")
        wrote = True
    if not wrote:
        sys.stdout.write(csv_text(sweep, factor))
    return 0


def _entropy_noise_from_args(args):
    if args.nakagami:
        m, omega = args.nakagami
        return iid_noise(complex_nakagami(m, omega, normalize=False)), "nakagami"
    if args.preset:
        return iid_noise(build_preset(PresetId(args.preset))), args.preset
    spec = load_config(args.config)
    return spec.scenario.noise, spec.name


def cmd_entropy(args) -> int:
    noise, label = _entropy_noise_from_args(args)
    dim = noise.innovation.dim
    channel = LptvChannel(np.eye(dim)[None, None, :, :])
    lifted = lift(channel, noise)
    n_omega = int(args.n_omega) if args.n_omega else 512
    rate = noise_entropy_rate(noise, lifted, n_omega)
    h_u = rate.innovation
    print(f"noise model: {label}")
    print(f"innovation dimension: {dim}")
    if h_u.exact:
        print(f"innovation entropy (bits/sample): {h_u.lower:.12g}")
    else:
        print(
            f"innovation entropy (bits/sample): in "
            f"[{h_u.lower:.12g}, {h_u.upper:.12g}] (width {h_u.width:.6g})"
        )
    print(f"block length: {lifted.per}")
    print(f"shaping spectral gain (bits/block): {rate.szego_gain_bits:.12g}")
    pb, ps = rate.per_block, rate.per_sample
    print(f"entropy rate (bits/block): [{pb.lower:.12g}, {pb.upper:.12g}]")
    print(f"entropy rate (bits/sample): [{ps.lower:.12g}, {ps.upper:.12g}]")
    if args.mc:
        seed = int(args.seed) if args.seed is not None else 0
        samples = sample_innovation(noise.innovation, 10**5, seed)
        est = mc_entropy_estimate(samples, seed=seed)
        print(
            f"sampling check (innovation, n=1e5): {est.bits:.6f} "
            f"+/- {est.stderr:.6f} bits"
        )
    return 0


def _preset_params(preset: PresetId) -> dict:
    pdf = build_preset(preset)
    out: dict = {
        "kind": pdf.kind,
        "dim": pdf.dim,
        "variance_normalized": pdf.variance_normalized,
        "amplitude_scale": pdf.amplitude_scale,
    }
    if pdf.kind == "gm":
        out["priors"] = pdf.gm.priors.tolist()
        out["means"] = pdf.gm.means.tolist()
        out["covariances"] = pdf.gm.covariances.tolist()
    elif pdf.kind == "nakagami":
        out["m"] = pdf.nakagami.m
        out["omega"] = pdf.nakagami.omega
    else:
        out["covariance"] = pdf.covariance.tolist()
    return out


def cmd_presets_dump(args) -> int:
    if args.name:
        try:
            preset = PresetId(args.name)
        except ValueError:
            raise ConfigError(
                f"unknown preset {args.name!r}; known: "
                + ", ".join(p.value for p in PresetId)
            ) from None
        doc = _preset_params(preset)
    else:
        doc = {
            "innovations": {p.value: _preset_params(p) for p in PresetId},
            "scenarios": {
                name: build_scenario(name).description for name in SCENARIO_NAMES
            },
        }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _run_validation(spec: RunSpec, use_mc: bool):
    """Yield (name, passed, detail) for each invariant check."""
    scenario = spec.scenario
    channel, noise = scenario.channel, scenario.noise
    rng = np.random.Generator(np.random.Philox(key=np.uint64(spec.seed)))
    results = []

    lifted = lift(channel, noise, per=spec.block_length)
    per = lifted.per

    # direct periodic convolution against the lifted two-tap form
    n_blocks = 3
    x = rng.standard_normal((n_blocks * per, channel.n_in))
    y_direct = np.zeros((n_blocks * per, channel.n_out))
    for t in range(n_blocks * per):
        for tau in range(channel.memory + 1):
            if t - tau >= 0:
                y_direct[t] += channel.taps[t % channel.period, tau] @ x[t - tau]
    xb = x.reshape(n_blocks, per * channel.n_in)
    yb = xb @ lifted.h0.T
    yb[1:] += xb[:-1] @ lifted.h1.T
    err = np.linalg.norm(yb - y_direct.reshape(n_blocks, -1)) / max(
        np.linalg.norm(y_direct), 1e-30
    )
    results.append(
        ("lift-round-trip", err <= 1e-12, f"relative error {err:.3e}")
    )

    u = rng.standard_normal((n_blocks * per, noise.shaping.n))
    w_direct = np.zeros_like(u)
    for t in range(n_blocks * per):
        for tau in range(noise.shaping.memory + 1):
            if t - tau >= 0:
                w_direct[t] += noise.shaping.taps[t % noise.shaping.period, tau] @ u[t - tau]
    ub = u.reshape(n_blocks, per * noise.shaping.n)
    wb = ub @ lifted.f0.T
    wb[1:] += ub[:-1] @ lifted.f1.T
    err = np.linalg.norm(wb - w_direct.reshape(n_blocks, -1)) / max(
        np.linalg.norm(w_direct), 1e-30
    )
    results.append(
        ("shaping-round-trip", err <= 1e-12, f"relative error {err:.3e}")
    )

    try:
        grid = build_grid(lifted, spec.n_omega)
    except SingularNoiseError as exc:
        results.append(("noise-psd-positive", False, str(exc)))
        return results
    results.append(("noise-psd-positive", True, "positive definite at all nodes"))

    c0, c1 = lifted_noise_autocorrelation(lifted, lifted.sigma_u)
    sigma_big = np.kron(np.eye(per), lifted.sigma_u)
    phase = np.exp(-1j * grid.nodes)
    f_field = lifted.f0[None] + lifted.f1[None] * phase[:, None, None]
    direct = f_field @ sigma_big @ np.conj(np.swapaxes(f_field, 1, 2))
    err = float(
        np.max(np.abs(direct - grid.psd)) / max(np.max(np.abs(grid.psd)), 1e-30)
    )
    results.append(("psd-identity", err <= 1e-10, f"max relative error {err:.3e}"))

    rate = noise_entropy_rate(noise, lifted, spec.n_omega)
    h_g = gaussian_entropy_rate(grid)
    ok = rate.per_block.lower <= h_g + 1e-9
    results.append(
        (
            "entropy-order",
            ok,
            f"entropy lower {rate.per_block.lower:.6f} vs Gaussian {h_g:.6f}",
        )
    )

    rate2 = noise_entropy_rate(noise, lifted, 2 * spec.n_omega)
    grid2 = build_grid(lifted, 2 * spec.n_omega)
    dh = abs(gaussian_entropy_rate(grid2) - h_g) / max(1.0, abs(h_g))
    ds = abs(rate2.szego_gain_bits - rate.szego_gain_bits) / max(
        1.0, abs(rate.szego_gain_bits)
    )
    conv = max(dh, ds)
    results.append(
        ("quadrature-convergence", conv <= 1e-6, f"doubling shift {conv:.3e}")
    )

    c0_trace = float(np.trace(c0)) / per
    reports = []
    for snr in (0.0, 10.0, 20.0):
        p_tilde = 10.0 ** (snr / 10.0) * c0_trace
        reports.append(bounds(lifted, grid, rate.per_block, p_tilde, snr_db=snr))
    worst_res = max(
        r.residual / max(1.0, r.p_tilde * per) for r in reports
    )
    results.append(
        ("waterfill-power", worst_res <= 1e-6, f"worst residual {worst_res:.3e}")
    )
    order_ok = all(
        r.lower1 <= r.upper + 1e-9
        and (r.lower2 is None or r.lower2 <= r.upper + 1e-9)
        and "bound-order-violation" not in r.flags
        for r in reports
    )
    results.append(("bound-order", order_ok, "lower bounds do not exceed upper"))
    mono_ok = all(
        b.upper >= a.upper - 1e-9 and b.lower1 >= a.lower1 - 1e-9
        for a, b in zip(reports, reports[1:])
    )
    results.append(("bound-monotone", mono_ok, "bounds non-decreasing in SNR"))

    if use_mc:
        samples = sample_innovation(noise.innovation, 10**5, spec.seed)
        est = mc_entropy_estimate(samples, seed=spec.seed)
        h_u = rate.innovation
        slack = max(5.0 * est.stderr, 0.05)
        ok = h_u.lower - slack <= est.bits <= h_u.upper + slack
        results.append(
            (
                "entropy-mc",
                ok,
                f"estimate {est.bits:.4f} +/- {est.stderr:.4f} vs "
                f"[{h_u.lower:.4f}, {h_u.upper:.4f}]",
            )
        )
    return results


def cmd_validate(args) -> int:
    try:
        spec = _resolve_run(args)
    except ConfigError as exc:
        cause = exc.__cause__
        if isinstance(cause, SingularHeadTapError):
            print(f"FAIL shaping-head-invertible: {cause}")
            return 3
        if isinstance(cause, ModelError):
            print(f"FAIL model-invariant: {cause}")
            return 3
        raise
    results = _run_validation(spec, args.mc)
    failed = 0
    for name, ok, detail in results:
        if ok:
            print(f"PASS {name}")
        else:
            failed += 1
            print(f"FAIL {name}: {detail}")
    if failed:
        print(f"{failed} invariant check(s) failed")
        return 3
    print(f"all {len(results)} invariant checks passed")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bounds":
            return cmd_bounds(args)
        if args.command == "entropy":
            return cmd_entropy(args)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "presets":
            return cmd_presets_dump(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    except MATH_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
