"""Symplectic forms over C^{2m}, symplectic maps and their structured left inverses.

A full-rank skew-Hermitian ``M`` induces the form ``Omega_M(u, v) = v* M u``. A tall
``Q`` is ``(M_big, M_small)``-symplectic when ``Q* M_big Q = M_small``; its symplectic
inverse ``M_small^{-1} Q* M_big`` is a left inverse of ``Q``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import TAU_SYMP, as_matrix, as_square, norm2, numerical_rank, skew_residual, struct_tol
from .exceptions import NotLeftInverse, NotSymplectic, StructureError

#: Bound on ``||M^{-1} M - I||`` accepted for a cached inverse.
INVERSE_TOL = 1e-12


class FormMatrix:
    """Invertible skew-Hermitian matrix with its inverse cached at construction.

    Parameters
    ----------
    M
        Square skew-Hermitian matrix of even dimension.
    inverse
        Known inverse of ``M``; computed with a dense solve when omitted.
    """

    __slots__ = ("M", "inverse_cache", "_inv")

    def __init__(self, M, inverse=None):
        M = as_square(M, "form matrix")
        dim = M.shape[0]
        if dim == 0 or dim % 2:
            raise StructureError(f"form matrix must have even positive dimension, got {dim}")
        if skew_residual(M) > struct_tol(dim):
            raise StructureError(f"form matrix is not skew-Hermitian (residual {skew_residual(M):.3e})")
        if numerical_rank(M) < dim:
            raise StructureError("form matrix is singular")
        if inverse is None:
            inverse = np.linalg.solve(M, np.eye(dim))
        inverse = as_square(inverse, "form inverse", dim)
        res = norm2(inverse @ M - np.eye(dim))
        if res > INVERSE_TOL:
            raise StructureError(f"cached inverse is inaccurate: ||K M - I|| = {res:.3e}")
        self.M = M
        self.inverse_cache = inverse
        self._inv = None

    @property
    def dim(self):
        return self.M.shape[0]

    @property
    def inv(self):
        """The inverse as a :class:`FormMatrix` (shares data, no refactorization)."""
        if self._inv is None:
            other = FormMatrix.__new__(FormMatrix)
            other.M = self.inverse_cache
            other.inverse_cache = self.M
            other._inv = self
            self._inv = other
        return self._inv

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.M, dtype=dtype)

    def __repr__(self):
        return f"FormMatrix(dim={self.dim})"


def _as_form(form):
    return form if isinstance(form, FormMatrix) else FormMatrix(form)


@lru_cache(maxsize=None)
def _canonical(m):
    I = np.eye(m)
    Z = np.zeros((m, m))
    JJ = np.block([[Z, I], [-I, Z]])
    return FormMatrix(JJ, inverse=-JJ)


def canonical_J(m):
    """Poisson matrix ``[[0, I_m], [-I_m, 0]]`` with cached inverse ``-J``."""
    if int(m) < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return _canonical(int(m))


def symplectic_form(form, u, v):
    """``Omega(u, v) = v* M u``: linear in ``u``, anti-linear in ``v``."""
    M = form.M if isinstance(form, FormMatrix) else np.asarray(form)
    return complex(np.vdot(np.asarray(v, dtype=complex), M @ np.asarray(u, dtype=complex)))


def is_symplectic(Q, form_big, form_small, tol=TAU_SYMP):
    """Test ``Q* M_big Q = M_small``.

    Returns
    -------
    ok : bool
        ``residual <= tol``.
    residual : float
        ``||Q* M_big Q - M_small|| / ||M_small||``.
    """
    Q = np.asarray(Q)
    Mb = np.asarray(form_big.M if isinstance(form_big, FormMatrix) else form_big)
    Ms = np.asarray(form_small.M if isinstance(form_small, FormMatrix) else form_small)
    residual = norm2(Q.conj().T @ Mb @ Q - Ms) / norm2(Ms)
    return residual <= tol, residual


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """Certified ``(form_big, form_small)``-symplectic matrix ``Q``."""

    Q: np.ndarray
    form_big: FormMatrix
    form_small: FormMatrix
    tol: float = TAU_SYMP

    def __post_init__(self):
        fb, fs = _as_form(self.form_big), _as_form(self.form_small)
        Q = as_matrix(self.Q, "Q", shape=(fb.dim, fs.dim))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "form_big", fb)
        object.__setattr__(self, "form_small", fs)
        ok, res = is_symplectic(Q, fb, fs, self.tol)
        if not ok:
            raise NotSymplectic(f"Q* M_big Q != M_small (residual {res:.3e} > {self.tol:.1e})", residual=res)
        if numerical_rank(Q) < fs.dim:
            raise NotSymplectic("Q does not have full column rank")
        object.__setattr__(self, "residual", res)


def symplectic_inverse(smap):
    """``Q^{-L} = M_small^{-1} Q* M_big``, a left inverse of ``smap.Q``."""
    return smap.form_small.inverse_cache @ smap.Q.conj().T @ smap.form_big.M


def extend_forms(J2n, J2k):
    """Extended skew forms for the dissipative reformulation.

    Returns ``(Jt_big, Kt_big, Jt_small, Kt_small)`` with ``Jt = [[J, -I], [I, 0]]`` and
    ``Kt = Jt^{-1} = [[0, I], [-I, J]]``.
    """
    out = []
    for form in (_as_form(J2n), _as_form(J2k)):
        J = form.M
        d = J.shape[0]
        I, Z = np.eye(d), np.zeros((d, d))
        Jt = np.block([[J, -I], [I, Z]])
        Kt = np.block([[Z, I], [-I, J]])
        Jt_form = FormMatrix(Jt, inverse=Kt)
        out.extend([Jt_form, Jt_form.inv])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class ExtendedSymplecticMap(SymplecticMap):
    """``Q_E = blockdiag(Q1, Q2)``, certified ``(Kt_big, Kt_small)``-symplectic."""

    Q1: np.ndarray = None
    Q2: np.ndarray = None
    J2n: FormMatrix = None
    J2k: FormMatrix = None


def extended_projector(Q1, Q2, J2n, J2k, tol=TAU_SYMP):
    """Assemble and certify ``Q_E = blockdiag(Q1, Q2)``.

    Raises
    ------
    NotSymplectic
        ``Q2`` is not ``(J2n, J2k)``-symplectic within ``tol``.
    NotLeftInverse
        ``Q1* Q2 != I`` within ``tol``.
    """
    J2n, J2k = _as_form(J2n), _as_form(J2k)
    Q1 = as_matrix(Q1, "Q1", shape=(J2n.dim, J2k.dim))
    Q2 = as_matrix(Q2, "Q2", shape=(J2n.dim, J2k.dim))
    ok, res = is_symplectic(Q2, J2n, J2k, tol)
    if not ok:
        raise NotSymplectic(f"Q2 is not (J2n, J2k)-symplectic: residual {res:.3e} > {tol:.1e}", residual=res)
    res = norm2(Q1.conj().T @ Q2 - np.eye(J2k.dim))
    if res > tol:
        raise NotLeftInverse(f"Q1* is not a left inverse of Q2: ||Q1* Q2 - I|| = {res:.3e} > {tol:.1e}", residual=res)
    _, Kt_big, _, Kt_small = extend_forms(J2n, J2k)
    d, k = J2n.dim, J2k.dim
    QE = np.zeros((2 * d, 2 * k), dtype=np.complex128)
    QE[:d, :k] = Q1
    QE[d:, k:] = Q2
    return ExtendedSymplecticMap(QE, Kt_big, Kt_small, tol, Q1=Q1, Q2=Q2, J2n=J2n, J2k=J2k)


def extended_symplectic_inverse(qmap):
    """Closed form ``[[Q2*, J2k Q1* - Q2* J2n], [0, Q1*]]`` of the extended symplectic inverse."""
    Q1h, Q2h = qmap.Q1.conj().T, qmap.Q2.conj().T
    k, d = Q1h.shape
    off = qmap.J2k.M @ Q1h - Q2h @ qmap.J2n.M
    return np.block([[Q2h, off], [np.zeros((k, d)), Q1h]])
