"""Acceptance gates: one test per quantitative criterion, each printing a
pass/fail line with the measured margin (run with -s or -v to see them).

Every tolerance is pinned here, not computed; the suite is the contract for
what this package promises quantitatively.
"""

import collections
import json
import math
import subprocess
import sys
import time

import numpy as np

from radiomap import (
    ALL_METHODS,
    CorrelationModel,
    ExperimentConfig,
    Point,
    analytic_rmse,
    build_square_scenario,
    covariance_matrix,
    cross_covariance,
    error_form,
    lse_error_coeffs,
    lse_fit,
    make_grid,
    median_power,
    point_rmse_mc,
    sibson_weights,
    sm0_predict,
    sm0_weights,
    sweep,
)
from radiomap.analysis import sm1_coefficient_error_form
from radiomap.harness import DEFAULT_RATIOS, EMITTER_PRESETS
from radiomap.validation import sibson_lattice_weights


def report(cid: str, ok: bool, detail: str, t0: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {cid}: {status} — {detail} [{time.time() - t0:.1f}s]")


def table_scenario(ratio=1.0, kernel="exponential", emitter=EMITTER_PRESETS["E1"]):
    model = CorrelationModel(kernel, sigma=5.0, xc=640.0 / ratio)
    return build_square_scenario(640.0, emitter, 15.3, 3.76, model)


def sweep_table(kernel="exponential", emitter=EMITTER_PRESETS["E1"], methods=("sm0", "sm2")):
    cfg = ExperimentConfig(resolution=16, mode="analytic", kernel=kernel, emitter=emitter, methods=tuple(methods))
    table = collections.defaultdict(dict)
    for row in sweep(cfg):
        table[row.ratio][row.method] = row.spatial_rmse
    return table


def random_scenario_and_point(rng):
    side = float(rng.uniform(100.0, 2000.0))
    kind = ("exponential", "gaussian", "elliptical")[int(rng.integers(3))]
    model = CorrelationModel(
        kind,
        sigma=float(rng.uniform(1.0, 10.0)),
        xc=float(rng.uniform(0.05, 5.0)) * side,
        axis_ratio=float(rng.uniform(1.0, 5.0)),
        rotation=float(rng.uniform(0.0, math.pi)),
    )
    angle = float(rng.uniform(0.0, 2.0 * math.pi))
    emitter = Point(
        side / 2 + float(rng.uniform(0.1, 2.0)) * side * math.cos(angle),
        side / 2 + float(rng.uniform(0.1, 2.0)) * side * math.sin(angle),
    )
    scn = build_square_scenario(
        side, emitter, float(rng.uniform(0.0, 50.0)), float(rng.uniform(2.0, 5.0)), model
    )
    p0 = Point(float(rng.uniform(0.05, 0.95)) * side, float(rng.uniform(0.05, 0.95)) * side)
    return scn, p0


def test_c01_kriging_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        scn, p0 = random_scenario_and_point(rng)
        pm = np.array([median_power(scn, s) for s in scn.sensors])
        meas = pm + rng.normal(0.0, scn.sigma, size=scn.n_sensors)
        lam = np.linalg.solve(
            covariance_matrix(scn.correlation, list(scn.sensors)),
            cross_covariance(scn.correlation, p0, list(scn.sensors)),
        )
        kriging = float(lam @ meas) + (median_power(scn, p0) - float(lam @ pm))
        worst = max(worst, abs(sm0_predict(scn, p0, meas).value - kriging))
    ok = worst <= 1e-9
    report("C01 kriging-equivalence", ok, f"max |diff| {worst:.3g} <= 1e-9 over 100 pairs", t0)
    assert ok


def test_c02_closed_form_fit_errors():
    t0 = time.time()
    rng = np.random.default_rng(102)
    scn = table_scenario()
    d = np.array(scn.sensor_distances())
    co = lse_error_coeffs(d)
    pm = np.array([median_power(scn, s) for s in scn.sensors])
    worst = 0.0
    for _ in range(100):
        s = rng.normal(0.0, 5.0, size=4)
        fit = lse_fit(d, pm + s)
        da_direct = (scn.a_db + float(s.mean())) - fit.a_hat
        dg_direct = scn.gamma - fit.gamma_hat
        worst = max(
            worst,
            abs(float(co.da_coeffs @ s) - da_direct),
            abs(float(co.dgamma_coeffs @ s) - dg_direct),
        )
    ok = worst <= 1e-9
    report("C02 closed-form-fit-errors", ok, f"max |diff| {worst:.3g} <= 1e-9 over 100 draws", t0)
    assert ok


def test_c03_error_decomposition_identity():
    t0 = time.time()
    rng = np.random.default_rng(103)
    scn = table_scenario()
    d = np.array(scn.sensor_distances())
    pm = np.array([median_power(scn, s) for s in scn.sensors])
    grid = make_grid(640.0, 8).points
    worst = 0.0
    for trial in range(100):
        p0 = grid[int(rng.integers(len(grid)))]
        s0 = float(rng.normal(0.0, 5.0))
        s = rng.normal(0.0, 5.0, size=4)

        # two-part route: fit-error terms plus residual-weighting terms
        w = sm0_weights(scn.correlation, list(scn.sensors), p0)
        fit = lse_fit(d, pm + s)
        z_n = float(s.mean())
        da = (scn.a_db + z_n) - fit.a_hat
        dg = scn.gamma - fit.gamma_hat
        delta_0 = da + 10.0 * dg * math.log10(
            math.hypot(p0.x - scn.emitter.x, p0.y - scn.emitter.y)
        )
        delta_i = da + 10.0 * dg * np.log10(d)
        s_dd = s - z_n
        two_part = (delta_0 - float(w @ delta_i)) + ((s0 - z_n) - float(w @ s_dd))

        # single-linear-form route
        linear = sm1_coefficient_error_form(scn, p0).evaluate(s0, s)
        worst = max(worst, abs(two_part - linear))
    ok = worst <= 1e-9
    report("C03 error-decomposition", ok, f"max |diff| {worst:.3g} <= 1e-9 over 100 draws", t0)
    assert ok


def test_c04_analytic_vs_monte_carlo():
    t0 = time.time()
    master = 11
    rng = np.random.default_rng(master)
    grid = make_grid(640.0, 64)
    idx = rng.choice(len(grid.points), size=10, replace=False)
    realizations = 100000
    worst = 0.0
    for ratio in (0.3, 1.0, 3.0):
        scn = table_scenario(ratio)
        for i in idx:
            p0 = grid.points[i]
            for method in ALL_METHODS:
                expected = analytic_rmse(
                    error_form(method, scn, p0), scn.correlation, p0, list(scn.sensors)
                )
                got = point_rmse_mc(scn, p0, method, realizations, master, point_index=int(i))
                worst = max(worst, abs(got - expected) / (expected / math.sqrt(2 * realizations)))
    ok = worst <= 3.0
    report("C04 analytic-vs-mc", ok, f"worst |z| {worst:.2f} <= 3 over 180 combos (R=1e5)", t0)
    assert ok


def test_c05_ideal_method_limits():
    t0 = time.time()
    cfg = ExperimentConfig(resolution=16, mode="analytic", ratios=(1e-3, 50.0), methods=("sm0",))
    rows = {r.ratio: r.spatial_rmse for r in sweep(cfg)}
    ok = rows[1e-3] < 0.05 * 5.0 and rows[50.0] > 0.95 * 5.0
    report(
        "C05 ideal-limits",
        ok,
        f"low {rows[1e-3]:.3f} < 0.25, high {rows[50.0]:.3f} > 4.75",
        t0,
    )
    assert ok


def test_c06_fitted_variants_agree():
    t0 = time.time()
    table = sweep_table(methods=("sm1", "sm2"))
    gaps = {r: abs(table[r]["sm1"] - table[r]["sm2"]) for r in DEFAULT_RATIOS}
    worst = max(gaps.values())
    ok = worst <= 0.15
    report("C06 sm1-sm2-agreement", ok, f"max |gap| {worst:.3f} <= 0.15 dB", t0)
    assert ok


def test_c07_gap_to_ideal():
    t0 = time.time()
    worst = 0.0
    worst_at = None
    for name in ("E1", "E2", "E3"):
        table = sweep_table(emitter=EMITTER_PRESETS[name], methods=("sm0", "sm2"))
        for r in DEFAULT_RATIOS:
            gap = table[r]["sm2"] - table[r]["sm0"]
            if gap > worst:
                worst, worst_at = gap, (name, r)
    ok = worst <= 1.2
    report("C07 gap-to-ideal", ok, f"max gap {worst:.3f} <= 1.2 dB (worst at {worst_at})", t0)
    assert ok


def test_c08_spatial_uniformity():
    t0 = time.time()
    from radiomap.harness import _grid_eval

    cfg = ExperimentConfig(resolution=64, mode="analytic", methods=("sm0", "sm1", "sm2"))
    surfaces = _grid_eval(cfg, 1.0, cfg.methods)
    fracs = {
        m: float(np.mean(np.abs(s.rmse - s.spatial_rmse) <= 0.3)) for m, s in surfaces.items()
    }
    ok = all(f >= 0.75 for f in fracs.values())
    detail = ", ".join(f"{m} {f:.3f}" for m, f in fracs.items())
    report("C08 spatial-uniformity", ok, f"fractions within 0.3 dB: {detail} (need >= 0.75)", t0)
    assert ok


def test_c09_best_baseline_ordering():
    t0 = time.time()
    table = sweep_table(methods=("sm2", "nn", "idw", "nat"))
    worst = -math.inf
    for r in DEFAULT_RATIOS:
        for baseline in ("nn", "idw", "nat"):
            worst = max(worst, table[r]["sm2"] - table[r][baseline])
    ok = worst <= 0.05
    report("C09 ordering", ok, f"max sm2-baseline excess {worst:.3f} <= 0.05 dB", t0)
    assert ok


def test_c10_baseline_error_floor():
    t0 = time.time()
    cfg = ExperimentConfig(
        resolution=16, mode="analytic", ratios=(1e-3,), methods=("sm2", "idw", "nat")
    )
    vals = {r.method: r.spatial_rmse for r in sweep(cfg)}
    ok = vals["idw"] > 5.0 * vals["sm2"] and vals["nat"] > 5.0 * vals["sm2"]
    report(
        "C10 baseline-floor",
        ok,
        f"idw {vals['idw']:.3f}, nat {vals['nat']:.3f} vs 5 x sm2 {5 * vals['sm2']:.3f}",
        t0,
    )
    assert ok


def test_c11_kernel_robustness():
    t0 = time.time()
    failures = []
    for kernel in ("gaussian", "elliptical"):
        table = sweep_table(kernel=kernel, methods=("sm1", "sm2", "nn", "idw", "nat"))
        gap6 = max(abs(table[r]["sm1"] - table[r]["sm2"]) for r in DEFAULT_RATIOS)
        gap9 = max(
            table[r]["sm2"] - table[r][b] for r in DEFAULT_RATIOS for b in ("nn", "idw", "nat")
        )
        if gap6 > 0.15:
            failures.append(f"{kernel}: sm1-sm2 gap {gap6:.3f} > 0.15")
        if gap9 > 0.05:
            failures.append(f"{kernel}: ordering excess {gap9:.3f} > 0.05")
    ok = not failures
    report("C11 kernel-robustness", ok, "; ".join(failures) or "both kernels within bounds", t0)
    assert ok, failures


def test_c12_sibson_area_oracle():
    t0 = time.time()
    sensors = list(table_scenario().sensors)
    rng = np.random.default_rng(112)
    points = [Point(160.0 * i, 160.0 * j) for i in (1, 2, 3) for j in (1, 2, 3)]
    while len(points) < 20:
        points.append(Point(*rng.uniform(160.0, 480.0, 2)))
    worst = 0.0
    for p0 in points:
        exact = sibson_weights(sensors, p0)
        approx = sibson_lattice_weights(sensors, p0, cells=2000)
        worst = max(worst, float(np.abs(exact - approx).max()))
    ok = worst <= 2e-3
    report("C12 sibson-oracle", ok, f"max per-weight |diff| {worst:.2e} <= 2e-3 at 20 points", t0)
    assert ok


def test_c13_cli_determinism(tmp_path):
    t0 = time.time()
    config = {
        "resolution": 16,
        "realizations": 2000,
        "mode": "mc",
        "master_seed": 90210,
        "ratios": [0.2, 1.0, 5.0],
        "methods": ["sm0", "sm2", "nat"],
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    outputs = []
    for threads, name in ((1, "one"), (4, "four")):
        out = tmp_path / name
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "radiomap.cli",
                "sweep",
                str(cfg),
                str(out),
                "--threads",
                str(threads),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append((out / "sweep.csv").read_bytes())
    ok = outputs[0] == outputs[1]
    report("C13 cli-determinism", ok, "sweep.csv byte-identical across --threads 1 vs 4", t0)
    assert ok
