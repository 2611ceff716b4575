import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phmor import (
    InterpolationSet,
    PHSystem,
    assemble_VW,
    build_projector,
    canonical_J,
    congruence_to_canonical,
    congruence_to_target,
    gen_msd_chain,
    gen_random_ph,
    inertia,
    is_symplectic,
    krylov_block,
    make_symplectic_basis,
)
from phmor.exceptions import InvalidParameter, OddDimension, RankDeficient, SingularResolvent, WrongInertia

from .helpers import poisson, random_complex, random_instance


# --- InterpolationSet -----------------------------------------------------


def test_interpolation_set_invariants():
    with pytest.raises(InvalidParameter):
        InterpolationSet([1.0, 1.0], [[1.0], [1.0]])
    with pytest.raises(InvalidParameter):
        InterpolationSet([1.0], [[0.0, 0.0]])
    with pytest.raises(InvalidParameter):
        InterpolationSet([], np.zeros((0, 1)))


def test_canonical_directions_cycle():
    interp = InterpolationSet.canonical([1, 2, 3, 4, 5], 2)
    np.testing.assert_array_equal(interp.directions.real, [[1, 0], [0, 1], [1, 0], [0, 1], [1, 0]])


def test_conjugate_closed():
    assert InterpolationSet([1 + 1j, 1 - 1j], [[1.0], [1.0]]).is_conjugate_closed()
    assert not InterpolationSet([1j, 2j], [[1.0], [1.0]]).is_conjugate_closed()


# --- krylov_block / assemble_VW -----------------------------------------


def test_krylov_oscillator(oscillator):
    X = krylov_block(oscillator, InterpolationSet([1.0], [[1.0]]))
    np.testing.assert_allclose(X[:, 0], [0.5, 0.5], atol=1e-15)


def test_krylov_directions_select_columns():
    sys = gen_random_ph(3, 2, seed=4)
    s = 0.5 + 1j
    X = krylov_block(sys, InterpolationSet([s, s + 1], [[1, 0], [0, 1]]))
    ref = np.linalg.solve(s * np.eye(6) - sys.A, sys.B[:, 0])
    np.testing.assert_allclose(X[:, 0], ref, atol=1e-13)
    ref = np.linalg.solve((s + 1) * np.eye(6) - sys.A, sys.B[:, 1])
    np.testing.assert_allclose(X[:, 1], ref, atol=1e-13)


def test_krylov_generic_rank():
    sys = gen_random_ph(4, 1, seed=9)
    X = krylov_block(sys, InterpolationSet([0.5, 1 + 1j, 2j], [[1.0]] * 3))
    sv = np.linalg.svd(X, compute_uv=False)
    assert np.sum(sv > 8 * np.finfo(float).eps * sv[0]) == 3


def test_krylov_reports_offending_point(oscillator):
    with pytest.raises(SingularResolvent) as info:
        krylov_block(oscillator, InterpolationSet([2.0, 1j], [[1.0], [1.0]]))
    assert info.value.index == 1


def test_krylov_lossless_flag_drops_R():
    sys = gen_msd_chain(3, dampers=0.5)
    interp = InterpolationSet([1j], [[1.0]])
    X = krylov_block(sys, interp, lossless=True)
    ref = np.linalg.solve(1j * np.eye(6) - sys.J @ sys.H, sys.B[:, 0])
    np.testing.assert_allclose(X[:, 0], ref, atol=1e-14)


def test_assemble_VW_oscillator(oscillator):
    X = krylov_block(oscillator, InterpolationSet([1.0], [[1.0]]))
    V, W = assemble_VW(oscillator, X)
    np.testing.assert_allclose(V, [[0, 0.5], [1, 0.5]], atol=1e-15)
    np.testing.assert_array_equal(W, V)
    assert np.all(np.linalg.eigvalsh(V.conj().T @ W) > 0)


def test_assemble_VW_parity(oscillator):
    X = krylov_block(oscillator, InterpolationSet([1.0, 2.0], [[1.0], [1.0]]))
    with pytest.raises(OddDimension):
        assemble_VW(oscillator, X)


def test_assemble_VW_rank_deficient():
    base = gen_random_ph(3, 1, seed=0)
    b = base.B[:, 0]
    sys = PHSystem(base.J, base.R, base.H, np.column_stack([b, 2 * b]))
    X = krylov_block(sys, InterpolationSet([1.0, 2.0], [[1, 0], [0, 1]]))
    with pytest.raises(RankDeficient) as info:
        assemble_VW(sys, X)
    assert info.value.column == 1


# --- inertia / congruence -------------------------------------------------


def test_inertia_examples():
    assert tuple(inertia(1j * poisson(1))) == (1, 1, 0)
    assert tuple(inertia(np.eye(4))) == (4, 0, 0)
    assert tuple(inertia(np.zeros((3, 3)))) == (0, 0, 3)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), dim=st.integers(1, 8))
def test_inertia_congruence_invariant(seed, dim):
    rng = np.random.default_rng(seed)
    d = np.concatenate([rng.uniform(0.5, 2, dim), -rng.uniform(0.5, 2, rng.integers(0, 4))])
    U, _ = np.linalg.qr(random_complex(rng, len(d), len(d)))
    S = U @ np.diag(d) @ U.conj().T
    T = np.eye(len(d)) + 0.2 * random_complex(rng, len(d), len(d))
    assert inertia(T.conj().T @ S @ T) == inertia(S)


def _canonical_residual(S, A):
    k = S.shape[0] // 2
    return np.linalg.norm(A.conj().T @ S @ A - 1j * poisson(k), 2)


@pytest.mark.parametrize("S", [1j * poisson(1), np.diag([1.0, -1.0]), np.diag([2.0, -3.0]), 1j * poisson(3)])
def test_congruence_examples(S):
    A = congruence_to_canonical(S)
    assert _canonical_residual(S, A) <= 1e-12


def test_congruence_wrong_inertia():
    with pytest.raises(WrongInertia) as info:
        congruence_to_canonical(np.diag([1.0, 2.0]))
    assert tuple(info.value.measured) == (2, 0, 0)
    assert tuple(info.value.required) == (1, 1, 0)


def test_congruence_to_target(rng):
    S = np.diag([3.0, -1.0, 0.5, -2.0])
    target = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    A = congruence_to_target(S, target)
    np.testing.assert_allclose(A.conj().T @ S @ A, target, atol=1e-12)


# --- build_projector ------------------------------------------------------


def _assert_certified(proj, tol=1e-10):
    ok, res = is_symplectic(proj.Q2, proj.J_big, proj.J_small)
    assert ok and res <= tol
    k2 = proj.Q2.shape[1]
    assert np.linalg.norm(proj.Q1.conj().T @ proj.Q2 - np.eye(k2), 2) <= tol
    for key in ("range_B", "range_x", "range_Hx"):
        assert proj.certificates[key] <= 1e-8


def test_projector_oscillator(oscillator):
    proj = build_projector(oscillator, InterpolationSet([1.0], [[1.0]]))
    _assert_certified(proj)
    assert proj.certificates["symplectic"] <= 1e-10


@pytest.mark.parametrize("orthonormalize", [True, False])
def test_projector_square_case(orthonormalize):
    # H = I and J canonical: W = V, Q2 square symplectic and Q1 = Q2^{-*}
    B = np.array([[0.0, 1.0], [0.0, 0.3], [1.0, 0.0], [0.5, -0.2]])
    sys = PHSystem(poisson(2), np.zeros((4, 4)), np.eye(4), B)
    interp = InterpolationSet([0.5, 2.0], [[1.0, 0.0], [0.0, 1.0]])
    proj = build_projector(sys, interp, orthonormalize=orthonormalize)
    _assert_certified(proj)
    np.testing.assert_allclose(proj.Q1, np.linalg.inv(proj.Q2).conj().T, atol=1e-10)


def test_projector_ranges_match_V_W(msd50, msd_points):
    proj = build_projector(msd50, msd_points, orthonormalize=False)
    _assert_certified(proj)
    # ran(Q1) = ran(V) and ran(Q2) = ran(W) with invertible A1, A2
    np.testing.assert_allclose(proj.V @ proj.A1, proj.Q1, atol=1e-12 * np.linalg.norm(proj.Q1))
    np.testing.assert_allclose(proj.W @ proj.A2, proj.Q2, atol=1e-12 * np.linalg.norm(proj.Q2))


def test_projector_wrong_inertia():
    sys = gen_msd_chain(4, dampers=0.1)
    interp = InterpolationSet.canonical([0.5j, 1j, 2j], 1)
    with pytest.raises(WrongInertia) as info:
        build_projector(sys, interp)
    assert tuple(info.value.measured) != tuple(info.value.required)
    # the inertia-matched reduced form accepts the same data
    proj = build_projector(sys, interp, J_small="matched")
    _assert_certified(proj)


@pytest.mark.parametrize("seed", range(12))
def test_projector_random_instances(seed):
    sys, interp = random_instance(seed)
    _assert_certified(build_projector(sys, interp))


def test_projector_extended_map(seed=3):
    sys, interp = random_instance(seed)
    qmap = build_projector(sys, interp).extended()
    assert qmap.residual <= 1e-10


# --- make_symplectic_basis -----------------------------------------------


def test_make_symplectic_basis_full_space():
    J = canonical_J(3)
    smap = make_symplectic_basis(np.eye(6), J)
    np.testing.assert_allclose(smap.Q.conj().T @ J.M @ smap.Q, J.M, atol=1e-12)


def test_make_symplectic_basis_oscillator(oscillator):
    X = krylov_block(oscillator, InterpolationSet([1.0], [[1.0]]))
    V, _ = assemble_VW(oscillator, X)
    K = canonical_J(1).inv
    smap = make_symplectic_basis(V, K, canonical_J(1).inv)
    assert smap.residual <= 1e-10


def test_make_symplectic_basis_rank_deficient():
    V = np.column_stack([np.ones(4), np.ones(4)])
    with pytest.raises(WrongInertia):
        make_symplectic_basis(V, canonical_J(2))
