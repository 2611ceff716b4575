import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phmor import (
    InterpolationSet,
    check_ph_structure,
    gen_msd_chain,
    gen_random_ph,
    reduce,
    reduce_baseline,
    reduce_dissipative,
    reduce_lossless,
    reduced_transfer_eval,
    to_state_space,
)
from phmor.exceptions import NotLossless
from phmor.verification import baseline_ph_view

from .helpers import lossless_copy, random_complex, random_instance


def probe_error(full, reduced, rng, count=10):
    worst = 0.0
    for _ in range(count):
        s = complex(rng.uniform(-1, 1), rng.uniform(-3, 3))
        u = random_complex(rng, full.p)
        y = full.transfer_eval(s, u)
        worst = max(worst, np.linalg.norm(y - reduced.transfer_eval(s, u)) / np.linalg.norm(y))
    return worst


def ph_lambda_min(reduced):
    return np.linalg.eigvalsh(reduced.H)[0], np.linalg.eigvalsh(reduced.R)[0]


# --- baseline -------------------------------------------------------------


def test_baseline_full_order_is_similar(rng):
    sys = gen_random_ph(2, 1, seed=0)
    interp = InterpolationSet([1.0, 2.0, 1 + 1j, 1 - 1j], [[1.0]] * 4)
    res = reduce_baseline(to_state_space(sys), interp)
    assert res.order == sys.dim
    assert probe_error(sys, res.reduced, rng) <= 1e-10


def test_baseline_oscillator(oscillator):
    res = reduce_baseline(oscillator, InterpolationSet([1.0], [[1.0]]))
    assert res.order == 1
    assert res.max_residual <= 1e-10


def test_baseline_msd_interpolates_but_loses_structure():
    full = gen_msd_chain(50, dampers=0.1)
    interp = InterpolationSet.canonical(1j * np.array([0.05, 0.3, 0.9, 1.7]), 1)
    res = reduce_baseline(full, interp)
    assert res.max_residual <= 1e-8
    assert check_ph_structure(**baseline_ph_view(full, res)).passed is False


def test_baseline_explicit_W(msd50):
    interp = InterpolationSet.canonical(1j * np.array([0.1, 0.7]), 1)
    W = np.random.default_rng(1).standard_normal((msd50.dim, 2))
    res = reduce_baseline(msd50, interp, W=W)
    assert res.max_residual <= 1e-8


# --- lossless -------------------------------------------------------------


def test_lossless_rejects_dissipation(msd50, msd_points):
    with pytest.raises(NotLossless):
        reduce_lossless(msd50, msd_points)


def test_lossless_full_order(rng):
    sys, interp = random_instance(0)
    res = reduce_lossless(lossless_copy(sys), interp)
    assert probe_error(lossless_copy(sys), res.reduced, rng) <= 1e-10


def test_lossless_oscillator_full_order(oscillator, rng):
    res = reduce_lossless(oscillator, InterpolationSet([1.0], [[1.0]]))
    assert res.order == 2
    assert probe_error(oscillator, res.reduced, rng) <= 1e-12


def test_lossless_msd(msd50_lossless, msd_points):
    res = reduce_lossless(msd50_lossless, msd_points)
    assert res.order == 6
    assert res.max_residual <= 1e-8
    assert ph_lambda_min(res.reduced)[0] > 0
    assert not np.any(res.reduced.R)
    # the restriction is the symplectic inverse of the lift
    np.testing.assert_allclose(res.restrict @ res.lift, np.eye(6), atol=1e-10)


# --- dissipative ----------------------------------------------------------


def test_dissipative_msd(msd50, msd_points):
    res = reduce_dissipative(msd50, msd_points)
    assert res.method == "dissipative" and res.order == 6
    assert res.max_residual <= 1e-8
    lam_H, lam_R = ph_lambda_min(res.reduced)
    assert lam_H > 0
    assert lam_R >= -1e-10
    assert check_ph_structure(res.reduced.J, res.reduced.R, res.reduced.H).passed


def test_dissipative_agrees_with_lossless_on_R0(msd50_lossless, msd_points):
    a = reduce_dissipative(msd50_lossless, msd_points)
    b = reduce_lossless(msd50_lossless, msd_points)
    for s, u in msd_points:
        ya, yb = a.transfer_eval(s, u), b.transfer_eval(s, u)
        assert np.linalg.norm(ya - yb) <= 1e-8 * np.linalg.norm(ya)


@pytest.mark.parametrize("seed", [0, 9])
def test_dissipative_full_order(seed, rng):
    sys, interp = random_instance(seed)
    assert len(interp) + sys.p == sys.dim
    res = reduce_dissipative(sys, interp)
    assert probe_error(sys, res.reduced, rng) <= 1e-10


def test_printed_resolvent_variant_misses_interpolation(msd50, msd_points):
    # the lossless-resolvent Krylov data do not interpolate a dissipative G
    with pytest.warns(RuntimeWarning):
        res = reduce_dissipative(msd50, msd_points, lossless_resolvent=True)
    assert res.degraded
    assert res.max_residual > 1e-8


def test_matched_form_interpolates():
    sys = gen_msd_chain(4, dampers=0.1)
    interp = InterpolationSet.canonical([0.5j, 1j, 2j], 1)
    res = reduce_dissipative(sys, interp, J_small="matched")
    assert res.max_residual <= 1e-8
    assert check_ph_structure(res.reduced.J, res.reduced.R, res.reduced.H).passed


def test_degraded_result_warns_and_flags(msd50, msd_points):
    with pytest.warns(RuntimeWarning, match="misses the interpolation tolerance"):
        res = reduce_dissipative(msd50, msd_points, tol_interp=1e-300)
    assert res.degraded
    assert "symplectic" in res.diagnostics


def test_reduce_dispatch(msd50, msd_points):
    assert reduce(msd50, msd_points).method == "dissipative"
    assert reduce(msd50, msd_points, "baseline").method == "baseline"
    with pytest.raises(ValueError):
        reduce(msd50, msd_points, "balanced")


def test_reduced_transfer_eval_consistent(msd50, msd_points):
    res = reduce_dissipative(msd50, msd_points)
    for (s, u), err in zip(msd_points, res.residuals_abs):
        yr = reduced_transfer_eval(res, s, u)
        assert np.linalg.norm(msd50.transfer_eval(s, u) - yr) == pytest.approx(err, abs=1e-14)
    for w in np.logspace(-2, 2, 15):
        G = res.reduced.transfer_matrix(1j * w)
        assert np.linalg.eigvalsh(G + G.conj().T)[0] >= -1e-10


def test_runtime_msd_100_states(msd_points):
    full = gen_msd_chain(50, dampers=0.1)
    t0 = time.perf_counter()
    reduce_dissipative(full, msd_points)
    assert time.perf_counter() - t0 <= 5.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_symplectic_reductions_preserve_structure(seed):
    sys, interp = random_instance(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for res in (reduce_dissipative(sys, interp), reduce_lossless(lossless_copy(sys), interp)):
            red = res.reduced
            assert check_ph_structure(red.J, red.R, red.H).passed
            assert res.max_residual <= 1e-8
