"""Interpolatory reduction: unstructured baseline, lossless symplectic, dissipative symplectic."""

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._validation import TAU_SING, TAU_SYMP, herm, herm_residual, norm2, relative
from .basis import (
    InterpolationSet,
    assemble_VW,
    build_projector,
    krylov_block,
    make_symplectic_basis,
)
from .exceptions import NotLossless, SingularPencil, SingularResolvent
from .symplectic import FormMatrix, canonical_J, symplectic_inverse
from .system import PHSystem, StateSpace, resolvent_solve, to_state_space

#: Default relative interpolation tolerance.
TOL_INTERP = 1e-8

METHODS = ("baseline", "lossless", "dissipative")


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """Reduced model together with its bases and interpolation residuals.

    Attributes
    ----------
    reduced
        :class:`PHSystem` for the symplectic methods, :class:`StateSpace` for the baseline.
    method
        One of ``"baseline"``, ``"lossless"``, ``"dissipative"``.
    projector
        :class:`SymplecticProjector`, :class:`SymplecticMap` or a ``(V, W)`` tuple.
    lift, restrict
        ``x ~ lift @ z`` and ``z = restrict @ x`` for states in the interpolation space.
    residuals_abs, residuals_rel
        ``||G(s_m) u_m - G_r(s_m) u_m||`` and its ratio to ``||G(s_m) u_m||``.
    degraded
        True when some relative residual exceeds ``tol_interp``.
    """

    reduced: object
    method: str
    projector: object
    lift: np.ndarray
    restrict: np.ndarray
    interp: InterpolationSet
    residuals_abs: np.ndarray
    residuals_rel: np.ndarray
    tol_interp: float = TOL_INTERP
    degraded: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.lift.shape[1]

    @property
    def max_residual(self):
        return float(np.max(self.residuals_rel))

    def transfer_eval(self, s, u):
        return reduced_transfer_eval(self, s, u)


def _residuals(full, reduced, interp):
    absr, relr = [], []
    for s, u in interp:
        y = full.transfer_eval(s, u)
        yr = reduced.transfer_eval(s, u)
        err = norm2(y - yr)
        absr.append(err)
        relr.append(relative(err, norm2(y)))
    return np.array(absr), np.array(relr)


def _finish(full, reduced, method, projector, lift, restrict, interp, tol_interp, diagnostics):
    try:
        absr, relr = _residuals(full, reduced, interp)
    except SingularResolvent as exc:
        diagnostics["residual_error"] = str(exc)
        absr = relr = np.full(len(interp), np.inf)
    degraded = not bool(np.all(relr <= tol_interp))
    if degraded:
        warnings.warn(
            f"{method} reduction misses the interpolation tolerance {tol_interp:.1e}: "
            f"max relative residual {np.max(relr):.3e}; diagnostics: {diagnostics}",
            RuntimeWarning,
            stacklevel=3,
        )
    return ReductionResult(
        reduced=reduced,
        method=method,
        projector=projector,
        lift=lift,
        restrict=restrict,
        interp=interp,
        residuals_abs=absr,
        residuals_rel=relr,
        tol_interp=tol_interp,
        degraded=degraded,
        diagnostics=diagnostics,
    )


def _gram(F, Q):
    """``(F* Q)* (F* Q)``: a congruence ``Q* (F F*) Q`` that stays Hermitian PSD in floating point."""
    Y = F.conj().T @ Q
    return herm(Y.conj().T @ Y)


def _psd_factor(S):
    """``F`` with ``F F* = S`` for Hermitian PSD ``S`` (negative rounding eigenvalues clipped)."""
    if not np.any(S):
        return np.zeros((S.shape[0], 0))
    w, U = np.linalg.eigh(herm(S))
    keep = w > 0
    return U[:, keep] * np.sqrt(w[keep])


def _congruence(S, Q, name, diagnostics):
    diagnostics[f"{name}_raw_herm_residual"] = herm_residual(Q.conj().T @ S @ Q)
    try:
        F = np.linalg.cholesky(herm(S))
    except np.linalg.LinAlgError:
        F = _psd_factor(S)
    return _gram(F, Q)


def reduce_baseline(ss, interp, W=None, tol_interp=TOL_INTERP, tau_sing=TAU_SING):
    """Unstructured tangential interpolant by Petrov-Galerkin projection.

    ``V = [(s_1 I - A)^{-1} B u_1, ...]``, ``W`` defaults to ``V``, and the realization is
    ``A_r = (W* V)^{-1} W* A V``, ``B_r = (W* V)^{-1} W* B``, ``C_r = C V``, ``D_r = D``.

    Raises
    ------
    SingularResolvent
        Some ``s_m`` lies on the spectrum of ``A``.
    SingularPencil
        ``W* V`` is not invertible.
    """
    full = ss
    if isinstance(ss, PHSystem):
        ss = to_state_space(ss)
    V = np.empty((ss.order, len(interp)), dtype=np.complex128)
    for m, (s, u) in enumerate(interp):
        try:
            V[:, m] = resolvent_solve(ss.A, s, ss.B @ u, tau_sing)
        except SingularResolvent as exc:
            raise SingularResolvent(f"interpolation point s_{m + 1} = {complex(s)}: {exc}", s=s, index=m) from None
    W = V if W is None else np.asarray(W, dtype=np.complex128)
    if W.shape != V.shape:
        raise ValueError(f"W has shape {W.shape}, expected {V.shape}")
    WV = W.conj().T @ V
    cond = np.linalg.cond(WV)
    if not cond < 1.0 / tau_sing:
        raise SingularPencil(f"W* V is singular (cond={cond:.3e})")
    Wl = np.linalg.solve(WV, W.conj().T)
    reduced = StateSpace(Wl @ ss.A @ V, Wl @ ss.B, ss.C @ V, ss.D)
    diagnostics = {"cond_WV": float(cond)}
    return _finish(full, reduced, "baseline", (V, W), V, Wl, interp, tol_interp, diagnostics)


def reduce_lossless(sys, interp, orthonormalize=True, tol_interp=TOL_INTERP, tol=TAU_SYMP, tau_sing=TAU_SING):
    """Structure-preserving reduction of a system without dissipation.

    ``Q`` is ``(J^{-1}, J_2k^{-1})``-symplectic with ``ran(Q) = ran([B X])``; the reduced
    system is ``(J_2k, 0, Q* H Q, Q^{-L} B)`` with ``J_2k`` canonical.

    Raises
    ------
    NotLossless
        If ``R`` is not zero within the structural tolerance.
    """
    if not sys.is_lossless():
        raise NotLossless(f"R must vanish for the lossless path (||R|| = {norm2(sys.R):.3e})")
    X = krylov_block(sys, interp, lossless=True, tau_sing=tau_sing)
    V, _ = assemble_VW(sys, X)
    if orthonormalize:
        V, _ = np.linalg.qr(V)
    J_small = canonical_J(V.shape[1] // 2)
    K_big = FormMatrix(sys.J).inv
    smap = make_symplectic_basis(V, K_big, J_small.inv, tol)
    Q = smap.Q
    L = symplectic_inverse(smap)
    diagnostics = {"symplectic": float(smap.residual), "left_inverse": norm2(L @ Q - np.eye(Q.shape[1]))}
    H_r = _congruence(sys.H, Q, "H", diagnostics)
    reduced = PHSystem(J_small.M, np.zeros_like(H_r), H_r, L @ sys.B)
    return _finish(sys, reduced, "lossless", smap, Q, L, interp, tol_interp, diagnostics)


def reduce_dissipative(
    sys,
    interp,
    lossless_resolvent=False,
    J_small=None,
    orthonormalize=True,
    tol_interp=TOL_INTERP,
    tol=TAU_SYMP,
    tau_sing=TAU_SING,
):
    """Structure-preserving reduction of a dissipative system.

    With ``(Q1, Q2)`` from :func:`~phmor.basis.build_projector`, the reduced system is
    ``(J_small, Q2* R Q2, Q1* H Q1, Q2* B)``.
    """
    proj = build_projector(
        sys, interp, lossless=lossless_resolvent, J_small=J_small, orthonormalize=orthonormalize, tol=tol, tau_sing=tau_sing
    )
    diagnostics = dict(proj.certificates)
    H_r = _congruence(sys.H, proj.Q1, "H", diagnostics)
    R_r = _congruence(sys.R, proj.Q2, "R", diagnostics)
    B_r = proj.Q2.conj().T @ sys.B
    reduced = PHSystem(proj.J_small.M, R_r, H_r, B_r)
    return _finish(sys, reduced, "dissipative", proj, proj.Q1, proj.Q2.conj().T, interp, tol_interp, diagnostics)


def reduce(sys, interp, method="dissipative", **kwargs):
    """Dispatch on ``method`` (``"dissipative"`` by default)."""
    if method == "dissipative":
        return reduce_dissipative(sys, interp, **kwargs)
    if method == "lossless":
        return reduce_lossless(sys, interp, **kwargs)
    if method == "baseline":
        return reduce_baseline(sys, interp, **kwargs)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def reduced_transfer_eval(res, s, u):
    """``G_r(s) u`` of a reduction result."""
    return res.reduced.transfer_eval(s, u)
