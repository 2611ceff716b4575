"""Input validation and small dense linear-algebra helpers shared by all modules."""

import warnings

import numpy as np
import scipy.linalg as spla

EPS = np.finfo(float).eps

#: Relative threshold on the reciprocal condition number of a resolvent.
TAU_SING = 1e-12
#: Relative tolerance for symplecticity and left-inverse certificates.
TAU_SYMP = 1e-10


def struct_tol(dim):
    """Structural tolerance ``100 * eps * dim`` used for symmetry/definiteness checks."""
    return 100.0 * EPS * dim


def as_matrix(a, name="matrix", shape=None, copy=True):
    """Return ``a`` as a read-only 2-D complex128 array.

    Parameters
    ----------
    a
        Array-like; 1-D input is treated as a single column.
    name
        Used in error messages.
    shape
        Expected shape; ``None`` entries are wildcards.
    """
    arr = np.array(a, dtype=np.complex128, copy=copy)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if shape is not None:
        for got, want in zip(arr.shape, shape):
            if want is not None and got != want:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def as_square(a, name="matrix", dim=None):
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} must be {dim}x{dim}, got {arr.shape}")
    return arr


def as_vector(x, size, name="vector"):
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    arr = arr.reshape(-1)
    if arr.shape[0] != size:
        raise ValueError(f"{name} must have length {size}, got {arr.shape[0]}")
    return arr


def norm2(a):
    """Spectral norm; 0 for empty arrays."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def relative(num, den):
    """``num / den`` with the convention that a zero reference gives the absolute value."""
    return float(num / den) if den > 0 else float(num)


def herm(a):
    """Hermitian part ``(a + a*) / 2``."""
    return 0.5 * (a + a.conj().T)


def skew_residual(a):
    """``||a + a*|| / ||a||`` (0 for the zero matrix)."""
    return relative(norm2(a + a.conj().T), norm2(a))


def herm_residual(a):
    """``||a - a*|| / ||a||`` (0 for the zero matrix)."""
    return relative(norm2(a - a.conj().T), norm2(a))


def lambda_min(a):
    """Smallest eigenvalue of the Hermitian part of ``a``."""
    if a.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(herm(a))[0])


def numerical_rank(a, tol=None):
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    if tol is None:
        tol = max(a.shape) * EPS
    return int(np.sum(s > tol * s[0]))


def lu_with_rcond(M):
    """Pivoted LU factorization of ``M`` and the LAPACK 1-norm reciprocal condition estimate."""
    anorm = np.linalg.norm(M, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spla.LinAlgWarning)
        lu, piv = spla.lu_factor(M, check_finite=False)
    if anorm == 0 or not np.all(np.isfinite(lu)):
        return (lu, piv), 0.0
    gecon, = spla.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or np.any(np.diag(lu) == 0):
        rcond = 0.0
    return (lu, piv), float(rcond)


def lu_solve(factor, rhs):
    return spla.lu_solve(factor, rhs, check_finite=False)
