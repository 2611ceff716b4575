import csv
import dataclasses
import json

import numpy as np
import pytest

from phmor import (
    InterpolationSet,
    PHSystem,
    StateSpace,
    check_ph_structure,
    frequency_sweep,
    gen_msd_chain,
    interpolation_report,
    positive_real_sweep,
    reduce_baseline,
    reduce_dissipative,
    verify,
)
from phmor.verification import energy_section, log_grid, structure_section

from .helpers import random_instance

JJ2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@pytest.fixture(scope="module")
def msd_case():
    full = gen_msd_chain(50, dampers=0.1)
    interp = InterpolationSet.canonical(1j * np.array([0.05, 0.3, 0.9, -1.5, -1.9]), 1)
    return full, interp, reduce_dissipative(full, interp)


# --- structure ------------------------------------------------------------


def test_structure_oscillator(oscillator):
    sec = check_ph_structure(oscillator.J, oscillator.R, oscillator.H)
    assert sec.passed
    for key in ("skew_J", "herm_R", "herm_H"):
        assert sec.data[key] == 0
    assert sec.data["rank_J"] == 2


def test_structure_indefinite_R():
    sec = check_ph_structure(JJ2, np.diag([-1.0, 0.0]), np.eye(2))
    assert not sec.passed
    assert sec.data["lambda_min_R"] == pytest.approx(-1.0)
    assert sec.data["checks"]["psd_R"] is False


def test_structure_baseline_fails(msd_case):
    full, interp, _ = msd_case
    res = reduce_baseline(full, interp)
    sec = structure_section(res, full=full)
    assert sec.passed is False
    assert not all(sec.data["checks"].values())


def test_structure_never_raises():
    sec = check_ph_structure(np.zeros((2, 2)), np.zeros((2, 2)), -np.eye(2))
    assert sec.passed is False


# --- positive realness ---------------------------------------------------


def test_pr_lossless_oscillator(oscillator):
    omegas = np.array([0.1, 0.5, 0.9, 1.1, 2.0, 10.0])
    sec = positive_real_sweep(oscillator, omegas)
    assert sec.passed
    np.testing.assert_allclose(sec.data["lambda_min"], 0.0, atol=1e-13)
    # closed form G(i w) = i w / (1 - w^2) is purely imaginary
    for w in omegas:
        G = oscillator.transfer_matrix(1j * w)[0, 0]
        assert G == pytest.approx(1j * w / (1 - w**2), rel=1e-13)


def test_pr_skips_pole(oscillator):
    sec = positive_real_sweep(oscillator, [0.5, 1.0, 2.0])
    assert sec.data["skipped"] == [1.0]
    assert sec.passed


def test_pr_damped_strictly_positive():
    sys = PHSystem(JJ2, np.diag([0.0, 0.4]), np.diag([2.0, 1.0]), np.array([[0.0], [1.0]]))
    sec = positive_real_sweep(sys, log_grid())
    assert sec.passed
    assert min(sec.data["lambda_min"]) > 0


def test_pr_detects_non_passive():
    sys = PHSystem(JJ2, np.diag([0.0, 0.4]), np.diag([2.0, 1.0]), np.array([[0.0], [1.0]]))
    ss = sys.to_state_space()
    flipped = StateSpace(ss.A, -ss.B, ss.C, ss.D)
    sec = positive_real_sweep(flipped, log_grid())
    assert not sec.passed
    assert sec.data["min_lambda"] < -sec.tolerances["tol_pr"]


# --- interpolation --------------------------------------------------------


def test_interpolation_report_msd(msd_case):
    full, _, res = msd_case
    sec = interpolation_report(full, res)
    assert sec.passed
    assert sec.data["max_rel_error"] <= 1e-8


def test_interpolation_report_detects_perturbation(msd_case):
    full, _, res = msd_case
    red = res.reduced
    bad = dataclasses.replace(res, reduced=PHSystem(red.J, red.R, red.H, red.B + 1e-3))
    sec = interpolation_report(full, bad)
    assert not sec.passed
    assert sec.data["max_rel_error"] > 1e-6


def test_interpolation_report_full_order():
    sys, interp = random_instance(9)
    res = reduce_dissipative(sys, interp)
    assert interpolation_report(sys, res).data["max_rel_error"] <= 1e-12


# --- sweeps ---------------------------------------------------------------


def test_sweep_identical_systems(msd_case):
    full, _, _ = msd_case
    table = frequency_sweep(full, full, log_grid())
    assert table.max_error <= 1e-12


def test_sweep_dips_at_interpolation_frequencies(msd_case):
    full, _, res = msd_case
    targets = np.array([0.05, 0.3, 0.9])
    grid = np.sort(np.concatenate([log_grid(), targets]))
    table = frequency_sweep(full, res, grid)
    at = np.isin(grid, targets)
    assert np.all(table.error[at] <= 1e-8 * table.norm_full[at])
    assert table.max_error > 1e-3


def test_sweep_csv(tmp_path, msd_case):
    full, _, res = msd_case
    grid = log_grid(1e-2, 1e2, 50)
    assert len(grid) == 200
    assert grid[0] == pytest.approx(1e-2) and grid[-1] == pytest.approx(1e2)
    path = tmp_path / "sweep.csv"
    frequency_sweep(full, res, grid).to_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["omega", "norm_G", "norm_Gr", "norm_err"]
    omegas = [float(r[0]) for r in rows[1:]]
    assert len(omegas) == 200 and np.all(np.diff(omegas) > 0)
    assert float(rows[1][0]) == grid[0]


# --- energy / full report ------------------------------------------------


def test_energy_section_reduced(msd_case):
    _, _, res = msd_case
    sec = energy_section(res, dt=1e-3, steps=2000)
    assert sec.passed
    assert sec.data["slack"] >= -sec.tolerances["tau_audit"]


def test_verify_dissipative_passes(tmp_path, msd_case):
    full, _, res = msd_case
    report = verify(full, res, steps=2000)
    assert report.passed
    assert set(report.verdict) == {"structure", "interpolation", "pr_sweep", "energy"}
    path = tmp_path / "report.json"
    report.to_json(path)
    loaded = json.loads(path.read_text())
    assert loaded["passed"] is True
    assert loaded["sections"]["pr_sweep"]["tolerances"]["tol_pr"] > 0


def test_verify_baseline_fails(msd_case):
    full, interp, _ = msd_case
    report = verify(full, reduce_baseline(full, interp), steps=100)
    assert report.verdict["structure"] is False
    assert report.verdict["energy"] is None
    assert not report.passed


def test_verify_is_reproducible(msd_case):
    full, _, res = msd_case
    a = verify(full, res, steps=200).to_json()
    b = verify(full, res, steps=200).to_json()
    assert a == b
