"""Interpolation data and symplectic projection bases.

The basis pair ``(Q1, Q2)`` satisfies ``ran(Q1) = ran(V)``, ``ran(Q2) = ran(W)``,
``Q1* Q2 = I`` and ``Q2* J Q2 = J_small``. It is obtained from ``V = [B X]`` and
``W = H V`` through a Hermitian congruence (Sylvester's law of inertia).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._validation import (
    EPS,
    TAU_SING,
    TAU_SYMP,
    as_matrix,
    herm,
    norm2,
    struct_tol,
)
from .exceptions import (
    IllConditioned,
    InvalidParameter,
    NotLeftInverse,
    NotSymplectic,
    OddDimension,
    RankDeficient,
    SingularResolvent,
    WrongInertia,
)
from .symplectic import FormMatrix, SymplecticMap, canonical_J, extended_projector, is_symplectic
from .system import resolvent_solve


class InertiaTriple(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int


@dataclass(frozen=True, eq=False)
class InterpolationSet:
    """Interpolation frequencies ``s_m`` and right tangent directions ``u_m``.

    Parameters
    ----------
    points
        ``M`` pairwise distinct complex frequencies.
    directions
        ``M x p`` array, row ``m`` is the nonzero direction ``u_m``.
    """

    points: np.ndarray
    directions: np.ndarray

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=np.complex128)).reshape(-1)
        dirs = np.asarray(self.directions, dtype=np.complex128)
        if dirs.ndim == 1:
            dirs = dirs.reshape(len(pts), -1)
        if len(pts) < 1:
            raise InvalidParameter("at least one interpolation point is required")
        if dirs.shape[0] != len(pts):
            raise InvalidParameter(f"{len(pts)} points but {dirs.shape[0]} directions")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(dirs)):
            raise InvalidParameter("interpolation data must be finite")
        if len(np.unique(pts)) != len(pts):
            raise InvalidParameter("interpolation points must be pairwise distinct")
        zero = np.flatnonzero(np.all(dirs == 0, axis=1))
        if zero.size:
            raise InvalidParameter(f"direction u_{zero[0] + 1} is zero")
        pts.setflags(write=False)
        dirs.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def canonical(cls, points, p):
        """Cycle directions through the standard basis: ``u_m = e_{1 + (m-1) mod p}``."""
        points = np.atleast_1d(np.asarray(points, dtype=np.complex128))
        dirs = np.zeros((len(points), p), dtype=np.complex128)
        dirs[np.arange(len(points)), np.arange(len(points)) % p] = 1.0
        return cls(points, dirs)

    def __len__(self):
        return len(self.points)

    @property
    def p(self):
        return self.directions.shape[1]

    def __iter__(self):
        return iter(zip(self.points, self.directions))

    def is_conjugate_closed(self, tol=0.0):
        """True when the set is invariant under ``(s, u) -> (conj s, conj u)``."""
        for s, u in self:
            match = np.flatnonzero(np.abs(self.points - np.conj(s)) <= tol * max(abs(s), 1.0))
            if not any(np.allclose(self.directions[j], np.conj(u)) for j in match):
                return False
        return True


def krylov_block(sys, interp, lossless=False, tau_sing=TAU_SING):
    """Resolvent columns ``x_m = (s_m I - A_eff)^{-1} B u_m``.

    ``A_eff = (J - R) H`` by default. ``lossless=True`` drops ``R`` and uses ``J H``,
    which only coincides with the frequency-domain state when ``R = 0``.

    Raises
    ------
    SingularResolvent
        With ``index`` set to the offending point (0-based).
    """
    if interp.p != sys.p:
        raise InvalidParameter(f"directions have length {interp.p}, system has p={sys.p}")
    A = sys.J @ sys.H if lossless else sys.A
    X = np.empty((sys.dim, len(interp)), dtype=np.complex128)
    for m, (s, u) in enumerate(interp):
        try:
            X[:, m] = resolvent_solve(A, s, sys.B @ u, tau_sing)
        except SingularResolvent as exc:
            raise SingularResolvent(
                f"interpolation point s_{m + 1} = {complex(s)} is (numerically) a pole: {exc}",
                s=s,
                index=m,
                rcond=exc.rcond,
            ) from None
    return X


def _first_dependent_column(V, tol):
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0):
        return int(np.flatnonzero(norms == 0)[0])
    Vn = V / norms
    for j in range(1, Vn.shape[1] + 1):
        s = np.linalg.svd(Vn[:, :j], compute_uv=False)
        if s[-1] <= tol * s[0]:
            return j - 1
    return None


def assemble_VW(sys, X):
    """``V = [B X]`` and ``W = H V``.

    Raises
    ------
    OddDimension
        If ``p + M`` is odd.
    RankDeficient
        If the columns of ``[B X]`` are numerically dependent; ``column`` is the 0-based
        index of the first dependent column.
    """
    X = np.asarray(X, dtype=np.complex128).reshape(sys.dim, -1)
    V = np.hstack([sys.B, X])
    if V.shape[1] % 2:
        raise OddDimension(
            f"p + M = {V.shape[1]} is odd; add or remove one interpolation point to make it even"
        )
    if V.shape[1] > sys.dim:
        raise RankDeficient(f"p + M = {V.shape[1]} exceeds the state dimension {sys.dim}")
    col = _first_dependent_column(V, sys.dim * EPS)
    if col is not None:
        what = f"B[:, {col}]" if col < sys.p else f"x_{col - sys.p + 1}"
        raise RankDeficient(f"interpolation data is redundant: column {col} ({what}) is dependent", column=col)
    return V, sys.H @ V


def inertia(S, tol=None):
    """Counts of eigenvalues of the Hermitian ``S`` above ``tol*||S||``, below ``-tol*||S||``, and between."""
    S = np.asarray(S, dtype=np.complex128)
    dim = S.shape[0]
    if tol is None:
        tol = struct_tol(dim)
    w = np.linalg.eigvalsh(herm(S))
    thr = tol * (np.max(np.abs(w)) if dim else 0.0)
    n_plus = int(np.sum(w > thr))
    n_minus = int(np.sum(w < -thr))
    return InertiaTriple(n_plus, n_minus, dim - n_plus - n_minus)


def _signature_basis(S, tol):
    """``T`` with ``T* S T = diag(I_+, -I_-)`` for a nonsingular Hermitian ``S``."""
    w, U = np.linalg.eigh(herm(S))
    order = np.argsort(-w, kind="stable")
    w, U = w[order], U[:, order]
    thr = tol * np.max(np.abs(w))
    if np.any(np.abs(w) <= thr):
        return None, w
    return U / np.sqrt(np.abs(w)), w


@lru_cache(maxsize=None)
def _canonical_eigvecs(k):
    # unitary Z with Z diag(I_k, -I_k) Z* = i*J_2k
    I = np.eye(k)
    Z = np.block([[I, I], [-1j * I, 1j * I]]) / np.sqrt(2.0)
    Z.setflags(write=False)
    return Z


def congruence_to_canonical(S, tol=None):
    """Invertible ``A`` with ``A* S A = i J_2k`` for Hermitian ``S`` of inertia ``(k, k, 0)``.

    Raises
    ------
    WrongInertia
        If ``S`` does not have inertia ``(k, k, 0)``.
    """
    S = as_matrix(S, "S")
    dim = S.shape[0]
    if tol is None:
        tol = struct_tol(dim)
    measured = inertia(S, tol)
    k = dim // 2
    required = InertiaTriple(k, k, 0)
    if dim % 2 or measured != required:
        raise WrongInertia(
            f"congruence to i*J_{dim} needs inertia {tuple(required)}, measured {tuple(measured)}",
            measured=measured,
            required=required,
        )
    T, _ = _signature_basis(S, tol)
    return T @ _canonical_eigvecs(k).conj().T


def congruence_to_target(S, target, tol=None):
    """Invertible ``A`` with ``A* S A = target`` for Hermitian ``S``, ``target`` of equal nonsingular inertia."""
    S = as_matrix(S, "S")
    target = as_matrix(target, "target", shape=S.shape)
    if tol is None:
        tol = struct_tol(S.shape[0])
    ms, mt = inertia(S, tol), inertia(target, tol)
    if ms != mt or ms.n_zero:
        raise WrongInertia(
            f"inertia of S {tuple(ms)} does not match the target {tuple(mt)}", measured=ms, required=mt
        )
    TS, _ = _signature_basis(S, tol)
    TT, _ = _signature_basis(target, tol)
    return TS @ np.linalg.inv(TT)


def matched_form(S, tol=None):
    """Diagonal skew-Hermitian ``J_small = -i diag(+1.., -1..)`` whose ``i*J_small`` matches the inertia of ``S``."""
    tri = inertia(S, tol)
    if tri.n_zero:
        raise WrongInertia(f"S is singular, inertia {tuple(tri)}", measured=tri)
    d = np.concatenate([np.ones(tri.n_plus), -np.ones(tri.n_minus)])
    return FormMatrix(-1j * np.diag(d), inverse=1j * np.diag(d))


def _is_canonical(form):
    k = form.dim // 2
    return np.array_equal(form.M, canonical_J(k).M)


def _congruence(S, form_small, tol):
    if _is_canonical(form_small):
        return congruence_to_canonical(S, tol)
    return congruence_to_target(S, 1j * form_small.M, tol)


def _range_residual(Q, Y):
    """Largest ``||y - P_Q y|| / ||y||`` over the columns of ``Y`` (least-squares projection)."""
    if Y.size == 0:
        return 0.0
    coef, *_ = np.linalg.lstsq(Q, Y, rcond=None)
    res = np.linalg.norm(Y - Q @ coef, axis=0)
    ref = np.linalg.norm(Y, axis=0)
    ref[ref == 0] = 1.0
    return float(np.max(res / ref))


@dataclass(frozen=True, eq=False)
class SymplecticProjector:
    """Basis pair with ``Q1* Q2 = I`` and ``Q2* J_big Q2 = J_small``."""

    Q1: np.ndarray
    Q2: np.ndarray
    J_small: FormMatrix
    J_big: FormMatrix
    V: np.ndarray = None
    W: np.ndarray = None
    A1: np.ndarray = None
    A2: np.ndarray = None
    certificates: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.Q1.shape[1]

    def extended(self, tol=TAU_SYMP):
        """The certified ``blockdiag(Q1, Q2)`` map over the extended forms."""
        return extended_projector(self.Q1, self.Q2, self.J_big, self.J_small, tol)


def build_projector(sys, interp, lossless=False, J_small=None, orthonormalize=True, tol=TAU_SYMP, tau_sing=TAU_SING):
    """Construct ``Q1 = V A1``, ``Q2 = W A2`` from interpolation data.

    Parameters
    ----------
    sys
        Full-order :class:`~phmor.system.PHSystem`.
    interp
        Interpolation points and directions; ``p + M`` must be even.
    lossless
        Use the resolvent of ``J H`` instead of ``(J - R) H`` for the Krylov columns.
    J_small
        Reduced skew form. ``None`` selects the canonical ``J_2k``; ``"matched"`` picks
        ``-i diag(+-1)`` matching the inertia of ``i W* J W``; a matrix or
        :class:`~phmor.symplectic.FormMatrix` is used as given.
    orthonormalize
        Replace ``V`` by an orthonormal basis of ``ran([B X])`` before forming ``W``.
        Ranges, and hence the interpolation property, are unchanged.
    tol
        Symplecticity / left-inverse certificate tolerance.

    Raises
    ------
    WrongInertia, IllConditioned, SingularResolvent, OddDimension, RankDeficient
    """
    X = krylov_block(sys, interp, lossless=lossless, tau_sing=tau_sing)
    V, W = assemble_VW(sys, X)
    if orthonormalize:
        V, _ = np.linalg.qr(V)
        W = sys.H @ V
    J_big = FormMatrix(sys.J)
    S = 1j * (W.conj().T @ sys.J @ W)
    if J_small is None:
        J_small = canonical_J(V.shape[1] // 2)
    elif isinstance(J_small, str):
        if J_small != "matched":
            raise InvalidParameter(f"unknown J_small option {J_small!r}")
        J_small = matched_form(S)
    elif not isinstance(J_small, FormMatrix):
        J_small = FormMatrix(J_small)
    if J_small.dim != V.shape[1]:
        raise InvalidParameter(f"J_small has dimension {J_small.dim}, expected {V.shape[1]}")
    try:
        A2 = _congruence(S, J_small, None)
    except WrongInertia as exc:
        raise WrongInertia(
            f"i W* J W has inertia {tuple(exc.measured)} but i J_small has {tuple(exc.required)}; "
            "perturb or re-sign the interpolation points (e.g. use a conjugate-closed set) "
            "or pass J_small='matched'",
            measured=exc.measured,
            required=exc.required,
        ) from None
    Q2 = W @ A2
    M = A2.conj().T @ W.conj().T @ V
    cond = np.linalg.cond(M)
    if not cond < 1.0 / tau_sing:
        raise IllConditioned(f"A2* W* V is ill-conditioned (cond={cond:.3e})", cond=cond)
    A1 = np.linalg.inv(M)
    Q1 = V @ A1

    ok, symp = is_symplectic(Q2, J_big, J_small, tol)
    if not ok:
        raise NotSymplectic(f"Q2 symplecticity residual {symp:.3e} exceeds {tol:.1e}", residual=symp)
    left = norm2(Q1.conj().T @ Q2 - np.eye(Q2.shape[1]))
    if left > tol:
        raise NotLeftInverse(f"||Q1* Q2 - I|| = {left:.3e} exceeds {tol:.1e}", residual=left)
    certificates = {
        "symplectic": symp,
        "left_inverse": left,
        "range_B": _range_residual(Q1, sys.B),
        "range_x": _range_residual(Q1, X),
        "range_Hx": _range_residual(Q2, sys.H @ X),
        "cond_A2WV": float(cond),
    }
    return SymplecticProjector(Q1, Q2, J_small, J_big, V=V, W=W, A1=A1, A2=A2, certificates=certificates)


def make_symplectic_basis(V, form_big, form_small=None, tol=TAU_SYMP):
    """Single-basis variant: ``Q = V A`` with ``Q* M_big Q = M_small`` and ``ran(Q) = ran(V)``.

    ``form_small`` defaults to the canonical ``J_2k``.
    """
    V = as_matrix(V, "V")
    if not isinstance(form_big, FormMatrix):
        form_big = FormMatrix(form_big)
    if form_small is None:
        form_small = canonical_J(V.shape[1] // 2)
    elif not isinstance(form_small, FormMatrix):
        form_small = FormMatrix(form_small)
    if V.shape[1] % 2:
        raise OddDimension(f"V has {V.shape[1]} columns; an even number is required")
    S = 1j * (V.conj().T @ form_big.M @ V)
    A = _congruence(S, form_small, None)
    return SymplecticMap(V @ A, form_big, form_small, tol)
