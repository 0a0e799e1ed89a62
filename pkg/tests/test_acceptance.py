"""Acceptance suite: one test per release criterion, each printing a verdict
line (run with `pytest -s` to see them inline, or `telegame verify` for the
equivalent user-facing table)."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from telegame import (
    ComplexAmplitude,
    DomainError,
    McConfig,
    build_cm,
    channel_params,
    coop_measurer_average_fidelity,
    estimate_fidelities,
    f_ab_coop,
    f_ac_coop,
    f_coop_avg,
    f_noncoop,
    find_classical_crossings,
    find_threshold,
    physicality,
    run_coop_pipeline,
    run_noncoop_pipeline,
)
from telegame import cli

GRID = np.linspace(0.5, 50.0, 500)
STAT_FLOOR = 1e-12  # keeps 3-sigma checks meaningful for zero-variance estimators


def report(name):
    print(f"ACCEPTANCE PASS: {name}")


def test_criterion_1_no_cloning_optimum():
    # rational oracle: at alpha = 2 the square root is exactly 3, so
    # kappa = 1 + 2 + 3/2 - 3 = 3/2 and the fidelity is exactly 2/3
    kappa_exact = Fraction(1) + 2 + Fraction(3, 2) - 3
    f_exact = 1 / kappa_exact
    assert f_exact == Fraction(2, 3)
    assert abs(f_noncoop(2.0) - float(f_exact)) < 1e-14
    values = [f_noncoop(a) for a in GRID]
    best = GRID[int(np.argmax(values))]
    assert abs(best - 2.0) <= GRID[1] - GRID[0]
    report("no-cloning optimum: f_noncoop(2) = 2/3, argmax at alpha = 2")


def test_criterion_2_threshold():
    res = find_threshold(1e-9)
    assert 5.70 <= res.alpha_th <= 5.82
    assert abs(f_coop_avg(res.alpha_th) - f_noncoop(res.alpha_th)) <= 1e-9
    report(f"strategy threshold at alpha = {res.alpha_th:.6f} with residual {res.residual:.1e}")


def test_criterion_3_ordering_invariants():
    for alpha in GRID:
        f_tr = f_noncoop(alpha)
        assert f_ab_coop(alpha) >= f_tr - 1e-14
        assert f_ac_coop(alpha) < f_tr
        assert f_ac_coop(alpha) <= 0.5
    report("fidelity ordering f_ab >= f_tr > f_ac and f_ac <= 1/2 on the 500-point grid")


def test_criterion_4_physicality():
    for alpha in GRID:
        assert physicality(build_cm(channel_params(alpha)).cov)
    with pytest.raises(DomainError):
        channel_params(0.49)
    report("channel family passes the uncertainty check on the grid; alpha < 1/2 rejected")


def test_criterion_5_pipeline_formula_equivalence():
    rng = np.random.default_rng(20240917)
    for _ in range(100):
        alpha = float(0.5 + 49.5 * rng.random())
        amp = ComplexAmplitude(*rng.normal(0, 2, 2))
        eta = ComplexAmplitude(*rng.normal(0, 2, 2))
        mu = ComplexAmplitude(*rng.normal(0, 2, 2))
        noncoop = run_noncoop_pipeline(alpha, amp, eta)
        coop = run_coop_pipeline(alpha, amp, eta, mu)
        assert abs(noncoop.fidelity_bob - f_noncoop(alpha)) < 1e-10
        assert abs(coop.fidelity_bob - f_ab_coop(alpha)) < 1e-10
        assert abs(coop_measurer_average_fidelity(alpha, amp) - f_ac_coop(alpha)) < 1e-10
    report("pipeline fidelities match the closed forms to 1e-10 on 100 random tuples")


def test_criterion_6_monte_carlo_consistency():
    for alpha in (0.5, 2.0, 5.76, 10.0):
        est = estimate_fidelities(McConfig(shots=100_000, seed=42, alpha=alpha))
        assert abs(est.f_tr_hat - f_noncoop(alpha)) <= 3 * est.stderr_tr + STAT_FLOOR
        assert abs(est.f_ab_hat - f_ab_coop(alpha)) <= 3 * est.stderr_ab + STAT_FLOOR
        assert abs(est.f_ac_hat - f_ac_coop(alpha)) <= 3 * est.stderr_ac + STAT_FLOOR
        # outcome independence: all statistical spread sits in the reconstruction
        assert est.stderr_tr * math.sqrt(est.shots) < 1e-9
        assert est.stderr_ab * math.sqrt(est.shots) < 1e-9
    report("Monte-Carlo estimates within 3 sigma of the closed forms at 1e5 shots")


def test_criterion_7_classical_crossing():
    alpha_tr, alpha_coop = find_classical_crossings()
    exact = 5.0 + 2.0 * math.sqrt(5.0)
    assert abs(alpha_tr - exact) < 1e-6
    # independent algebraic oracle: the root solves alpha^2 - 10 alpha + 5 = 0
    poly = Fraction(alpha_tr) ** 2 - 10 * Fraction(alpha_tr) + 5
    assert abs(float(poly)) < 1e-6
    assert alpha_coop > alpha_tr
    report(f"classical benchmark crossings at {alpha_tr:.6f} (= 5 + 2*sqrt(5)) and {alpha_coop:.3f}")


def test_criterion_8_sweep_reproduction(tmp_path, capsys):
    first = tmp_path / "sweep1.csv"
    second = tmp_path / "sweep2.csv"
    assert cli.main(["sweep", "--alpha-min", "0.5", "--alpha-max", "12", "--steps", "200",
                     "--out", str(first)]) == 0
    assert cli.main(["sweep", "--alpha-min", "0.5", "--alpha-max", "12", "--steps", "200",
                     "--out", str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()

    lines = first.read_text().strip().split("\n")
    assert lines[0] == "alpha,f_tr,f_ab,f_ac,f_coop"
    rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert len(rows) == 200
    gaps = [r[4] - r[1] for r in rows]
    crossings = [
        (rows[i][0], rows[i + 1][0])
        for i in range(len(gaps) - 1)
        if (gaps[i] < 0) != (gaps[i + 1] < 0)
    ]
    assert len(crossings) == 1
    alpha_th = find_threshold(1e-9).alpha_th
    assert crossings[0][0] <= alpha_th <= crossings[0][1]
    report("sweep CSV is byte-stable and its curves cross exactly once, at the threshold")


def test_criterion_9_determinism_and_parallelism(capsys):
    base = ["simulate", "--alpha", "2", "--shots", "100000", "--seed", "42"]
    assert cli.main(base) == 0
    first = capsys.readouterr().out
    assert cli.main(base) == 0
    second = capsys.readouterr().out
    assert cli.main(base + ["--workers", "4"]) == 0
    parallel = capsys.readouterr().out
    assert first == second
    # workers flag shows up nowhere in the payload, so outputs must coincide
    assert first == parallel
    assert cli.main(base + ["--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["consistent"] is True
    report("simulate output is bit-identical across reruns and parallelism degrees")
