"""End-to-end acceptance checks.

Each test evaluates one acceptance criterion and prints a single
pass/fail line with the measured quantity and its tolerance, bypassing
output capture so the lines always appear in the test log.
"""

import math
import time

import numpy as np

from plc_capacity.capacity import bounds, snr_sweep, waterfill
from plc_capacity.entropy import (
    innovation_entropy,
    mc_entropy_estimate,
    nakagami_complex_entropy,
    noise_entropy_rate,
)
from plc_capacity.model import (
    LptvChannel,
    LptvShapingFilter,
    NakagamiParams,
    NoiseModel,
    complex_nakagami,
    gaussian,
    iid_noise,
    lift,
    lifted_noise_autocorrelation,
)
from plc_capacity.noisegen import PresetId, build_preset, sample_innovation
from plc_capacity.scenarios import build_scenario
from plc_capacity.spectra import build_grid


def _report(capsys, num, name, ok, detail):
    line = f"acceptance {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    with capsys.disabled():
        print(line, flush=True)
    assert ok, line


def _prep(name, n_omega=512):
    sc = build_scenario(name)
    lifted = lift(sc.channel, sc.noise)
    grid = build_grid(lifted, n_omega)
    ent = noise_entropy_rate(sc.noise, lifted, n_omega)
    c0, _ = lifted_noise_autocorrelation(lifted, lifted.sigma_u)
    noise_power = float(np.trace(c0)) / lifted.per
    return sc, lifted, grid, ent, noise_power


def _point(sc, lifted, grid, ent, noise_power, snr_db):
    p_tilde = 10.0 ** (snr_db / 10.0) * noise_power
    rep = bounds(lifted, grid, ent.per_block, p_tilde, snr_db=snr_db)
    return rep


def test_01_gaussian_noise_collapses_the_bounds(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.Philox(404))
    worst = 0.0
    for _ in range(20):
        p_ch = int(rng.choice([1, 2, 4, 8]))
        mem = int(rng.integers(0, min(4, 2 * p_ch)))
        dim = int(rng.integers(1, 4))
        taps = rng.normal(size=(p_ch, mem + 1, dim, dim))
        taps[:, 0] += 2.0 * np.eye(dim)
        b = rng.normal(size=(dim, dim))
        noise = iid_noise(gaussian(b @ b.T + 0.1 * np.eye(dim), normalize=False))
        lifted = lift(LptvChannel(taps=taps), noise)
        assert lifted.per <= 8
        grid = build_grid(lifted, 256)
        ent = noise_entropy_rate(noise, lifted, 256)
        c0, _ = lifted_noise_autocorrelation(lifted, lifted.sigma_u)
        npow = float(np.trace(c0)) / lifted.per
        for snr in (0.0, 10.0, 20.0):
            p_tilde = 10.0 ** (snr / 10.0) * npow
            rep = bounds(lifted, grid, ent.per_block, p_tilde, snr_db=snr)
            worst = max(worst, abs(rep.upper - rep.lower1))
    elapsed = time.perf_counter() - t0
    ok = worst < 2e-6 and elapsed <= 30.0
    _report(
        capsys, 1, "gaussian-collapse", ok,
        f"max |upper - lower1| over 20 random channels = {worst:.3e}, "
        f"tol 2e-06; {elapsed:.1f} s of 30 s",
    )


def test_02_awgn_bounds_match_the_closed_form(capsys):
    sc, lifted, grid, ent, npow = _prep("gaussian-iid", 256)
    worst = 0.0
    for snr in np.arange(0.0, 31.0):
        rep = _point(sc, lifted, grid, ent, npow, float(snr))
        want = math.log2(1.0 + 10.0 ** (snr / 10.0)) * sc.bps_factor
        for got in (rep.upper, rep.lower1, rep.lower2):
            worst = max(worst, abs(got * sc.bps_factor - want))
    _report(
        capsys, 2, "awgn-closed-form", worst < 1e-3,
        f"max deviation over 0..30 dB = {worst:.3e}, tol 1e-03",
    )


def test_03_nakagami_entropy_matches_references(capsys):
    worst_closed = 0.0
    for omega in (0.25, 1.0, 7.3):
        h = nakagami_complex_entropy(NakagamiParams(m=1.0, omega=omega))
        want = math.log2(math.pi * math.e * omega)
        worst_closed = max(worst_closed, abs(h - want))
    worst_se = 0.0
    detail = []
    for m in (0.6, 0.8, 2.0, 5.0):
        h = nakagami_complex_entropy(NakagamiParams(m=m, omega=1.0))
        pdf = complex_nakagami(m, 1.0, normalize=False)
        est = mc_entropy_estimate(sample_innovation(pdf, 10**6, seed=101))
        pull = abs(est.bits - h) / est.stderr
        worst_se = max(worst_se, pull)
        detail.append(f"m={m}: {pull:.2f} se")
    ok = worst_closed < 1e-9 and worst_se <= 2.0
    _report(
        capsys, 3, "nakagami-entropy", ok,
        f"m=1 closed form off by {worst_closed:.3e}, tol 1e-09; "
        f"{'; '.join(detail)}; tol 2 se",
    )


def test_04_nakagami_gap_closes_at_high_snr(capsys):
    t0 = time.perf_counter()
    sc, lifted, grid, ent, npow = _prep("nakagami-iid")
    worst = 0.0
    for snr in (15.0, 18.0, 21.0, 24.0):
        rep = _point(sc, lifted, grid, ent, npow, snr)
        worst = max(worst, (rep.upper - rep.lower2) * sc.bps_factor)
    elapsed = time.perf_counter() - t0
    ok = worst < 0.05 and elapsed <= 10.0
    _report(
        capsys, 4, "nakagami-high-snr-gap", ok,
        f"max gap above 15 dB = {worst:.2e} bits, tol 0.05; "
        f"{elapsed:.1f} s of 10 s",
    )


def test_05_impulsive_noise_keeps_a_real_gap(capsys):
    sc, lifted, grid, ent, npow = _prep("gm1-iid")
    gaps = []
    for snr in (15.0, 18.0, 21.0, 24.0, 27.0, 30.0):
        rep = _point(sc, lifted, grid, ent, npow, snr)
        gaps.append((rep.upper - rep.lower2) * sc.bps_factor)
    floor = _point(sc, lifted, grid, ent, npow, 12.0).lower2 * sc.bps_factor
    ok = all(0.2 <= g <= 0.9 for g in gaps) and floor >= 6.8
    _report(
        capsys, 5, "gm1-bound-gap", ok,
        f"upper - lower2 in [{min(gaps):.4f}, {max(gaps):.4f}] for snr >= 15 dB, "
        f"window [0.2, 0.9]; lower2 at 12 dB = {floor:.4f}, min 6.8",
    )


def test_06_gaussian_assumption_costs_snr(capsys):
    sc, lifted, grid, ent, npow = _prep("gm1-iid")
    target = _point(sc, lifted, grid, ent, npow, 12.0).lower2
    lo, hi = 12.0, 40.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _point(sc, lifted, grid, ent, npow, mid).lower1 >= target:
            hi = mid
        else:
            lo = mid
    gap_db = 0.5 * (lo + hi) - 12.0
    _report(
        capsys, 6, "gaussian-assumption-snr-cost", gap_db >= 7.0,
        f"lower1 needs {gap_db:.2f} dB more to reach lower2 at 12 dB, min 7",
    )


def test_07_block_length_does_not_move_the_bounds(capsys):
    pdf = build_preset(PresetId.GM1)
    h_u = innovation_entropy(pdf)
    noise = iid_noise(pdf)
    rng = np.random.default_rng(np.random.Philox(77))
    n_base = 512
    om = -np.pi + 2.0 * np.pi * np.arange(n_base) / n_base
    p_tilde = 10.0 ** (12.0 / 10.0)
    worst = 0.0
    for _ in range(10):
        a0 = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.4))
        a1 = float(rng.uniform(-0.4, 0.4))
        # unlifted reference: scalar water-filling over the plain transfer
        # function, unit noise spectrum, one sample per block
        hsq = np.abs(a0 + a1 * np.exp(-1j * om)) ** 2
        wf = waterfill(hsq[:, None], p_tilde)
        upper_ref = wf.capacity_bits + 0.5 * math.log2(2 * math.pi * math.e) - h_u.lower
        s_log = float(np.mean(np.log2(hsq)))
        lower2_ref = 0.5 * np.logaddexp2(
            math.log2(2 * math.pi * math.e * p_tilde) + s_log, 2.0 * h_u.upper
        ) - h_u.upper
        ch = LptvChannel(np.array([a0, a1]).reshape(1, 2, 1, 1))
        for per in (2, 4, 8):
            lifted = lift(ch, noise, per=per)
            grid = build_grid(lifted, n_base // per)
            ent = noise_entropy_rate(noise, lifted, n_base // per)
            rep = bounds(lifted, grid, ent.per_block, p_tilde)
            worst = max(
                worst,
                abs(rep.upper - upper_ref),
                abs(rep.lower1 - wf.capacity_bits),
                abs(rep.lower2 - lower2_ref),
            )
    _report(
        capsys, 7, "lifting-invariance", worst < 1e-6,
        f"max |lifted - unlifted| over 10 channels x per in (2, 4, 8) "
        f"= {worst:.3e}, tol 1e-06",
    )


def test_08_waterfilling_closed_form(capsys):
    lam = np.tile(np.array([1.0, 1.0 / 9.0]), (64, 1))
    below = waterfill(lam, 2.0)
    above = waterfill(lam, 10.0)
    err = max(
        abs(below.delta - 3.0),
        abs(below.capacity_bits - 0.5 * math.log2(3.0)),
        abs(above.delta - 10.0),
        abs(above.capacity_bits - 0.5 * (math.log2(10.0) + math.log2(10.0 / 9.0))),
    )
    _report(
        capsys, 8, "waterfill-closed-form", err < 1e-9,
        f"max deviation from the two-mode solution = {err:.3e}, tol 1e-09",
    )


def test_09_shaping_filters_obey_the_entropy_gain_law(capsys):
    ch = LptvChannel(np.eye(1).reshape(1, 1, 1, 1))
    pdf = build_preset(PresetId.GM1)
    rng = np.random.default_rng(np.random.Philox(909))
    worst_monic = 0.0
    for _ in range(10):
        a = float(rng.uniform(-0.95, 0.95))
        shaping = LptvShapingFilter(np.array([1.0, a]).reshape(1, 2, 1, 1))
        noise = NoiseModel(innovation=pdf, shaping=shaping)
        lifted = lift(ch, noise)
        ent = noise_entropy_rate(noise, lifted, 512)
        worst_monic = max(worst_monic, abs(ent.szego_gain_bits))
    worst_gain = 0.0
    for dim, s in ((1, 0.5), (1, 3.7), (2, 0.5), (2, 3.7)):
        ch_d = LptvChannel(np.eye(dim).reshape(1, 1, dim, dim))
        pdf_d = gaussian(np.eye(dim), normalize=False)
        base = iid_noise(pdf_d)
        scaled = NoiseModel(
            innovation=pdf_d,
            shaping=LptvShapingFilter(s * np.eye(dim).reshape(1, 1, dim, dim)),
        )
        r0 = noise_entropy_rate(base, lift(ch_d, base), 64)
        r1 = noise_entropy_rate(scaled, lift(ch_d, scaled), 64)
        shift = r1.per_sample.lower - r0.per_sample.lower
        worst_gain = max(worst_gain, abs(shift - dim * math.log2(s)))
    ok = worst_monic < 1e-6 and worst_gain < 1e-12
    _report(
        capsys, 9, "entropy-gain-law", ok,
        f"max |szego gain| over 10 monic MA(1) shapings = {worst_monic:.3e}, "
        f"tol 1e-06; constant gain s off by {worst_gain:.3e}, tol 1e-12",
    )


def test_10_scenario_suite_behaves(capsys):
    t0 = time.perf_counter()
    snrs = [float(s) for s in range(0, 21, 2)]
    sweeps = {}
    for family in ("gm1", "gm2", "mca"):
        for kind in ("scalar", "mimo"):
            name = f"{kind}-{family}"
            sc = build_scenario(name)
            sweeps[name] = (sc, snr_sweep(sc.channel, sc.noise, snrs))
    problems = []
    for name, (sc, sweep) in sweeps.items():
        reps = sweep.reports
        for rep in reps:
            if rep.lower2 is None:
                problems.append(f"{name}: lower2 missing at {rep.snr_db} dB")
            elif rep.snr_db >= 10.0 and rep.lower2 <= rep.lower1:
                problems.append(f"{name}: lower2 not above lower1 at {rep.snr_db} dB")
        for a, b in zip(reps, reps[1:]):
            if not (
                b.upper >= a.upper - 1e-9
                and b.lower1 >= a.lower1 - 1e-9
                and b.lower2 >= a.lower2 - 1e-9
            ):
                problems.append(f"{name}: bounds not monotone at {b.snr_db} dB")
        gaps = [r.upper - r.lower2 for r in reps if r.snr_db >= 16.0]
        if any(g2 > g1 + 1e-9 for g1, g2 in zip(gaps, gaps[1:])):
            problems.append(f"{name}: gap not shrinking above 15 dB")
    ratios = []
    for family in ("gm1", "gm2", "mca"):
        scalar = sweeps[f"scalar-{family}"][1].reports[-1]
        mimo = sweeps[f"mimo-{family}"][1].reports[-1]
        ratio = mimo.lower1 / scalar.lower1
        ratios.append(f"{family}: {ratio:.3f}")
        if not (1.3 <= ratio <= 2.0):
            problems.append(f"{family}: 20 dB rate ratio {ratio:.3f} outside [1.3, 2]")
    elapsed = time.perf_counter() - t0
    if elapsed > 300.0:
        problems.append(f"suite took {elapsed:.0f} s, budget 300 s")
    ok = not problems
    detail = (
        f"6 scenarios x {len(snrs)} points in {elapsed:.1f} s of 300 s; "
        f"2x2-over-scalar rate ratios at 20 dB: {', '.join(ratios)}"
    )
    if problems:
        detail = "; ".join(problems)
    _report(capsys, 10, "scenario-suite", ok, detail)
