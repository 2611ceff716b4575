"""Estimator interface for interpolatory reduction.

``fit`` takes the full-order system, ``transform`` maps full states to reduced
coordinates, ``inverse_transform`` lifts them back, and ``predict`` evaluates the
reduced transfer function at complex frequencies.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .basis import InterpolationSet
from .reduction import METHODS, TOL_INTERP, reduce_baseline, reduce_dissipative, reduce_lossless
from .system import PHSystem, StateSpace


def check_system(X, allow_state_space=False):
    """Validate the ``X`` argument of :meth:`InterpolatoryReducer.fit`."""
    if isinstance(X, PHSystem):
        return X
    if allow_state_space and isinstance(X, StateSpace):
        return X
    if isinstance(X, (tuple, list)) and len(X) == 4:
        return PHSystem(*X)
    raise TypeError(f"expected a PHSystem or a (J, R, H, B) tuple, got {type(X).__name__}")


def check_states(X, dim, name="X"):
    """2-D complex array of shape ``(n_samples, dim)``; a single vector becomes one row."""
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"{name} must have shape (n_samples, {dim}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    return X


class InterpolatoryReducer(BaseEstimator):
    """Reduce a port-Hamiltonian system so that ``G_r(s_m) u_m = G(s_m) u_m``.

    Parameters
    ----------
    points : array-like of complex
        Interpolation frequencies ``s_m``.
    directions : "canonical" or array-like of shape (M, p)
        Tangent directions; ``"canonical"`` cycles through the standard basis.
    method : {"dissipative", "lossless", "baseline"}
        ``"dissipative"`` handles any pH system, ``"lossless"`` requires ``R = 0``,
        ``"baseline"`` is the unstructured Galerkin interpolant.
    J_small : None, "matched" or array
        Reduced skew form for the dissipative method (canonical by default).
    orthonormalize : bool
        Orthonormalize ``[B X]`` before the congruence (symplectic methods).
    lossless_resolvent : bool
        Dissipative method only: build the Krylov columns from ``J H`` instead of ``(J - R) H``.
    tol_interp : float
        Relative interpolation tolerance; results above it are flagged ``degraded``.

    Attributes
    ----------
    result_ : ReductionResult
    reduced_ : PHSystem or StateSpace
    n_components_ : int
        Reduced state dimension.
    residuals_ : ndarray
        Relative interpolation residuals per point.
    """

    def __init__(
        self,
        points=None,
        directions="canonical",
        method="dissipative",
        J_small=None,
        orthonormalize=True,
        lossless_resolvent=False,
        tol_interp=TOL_INTERP,
    ):
        self.points = points
        self.directions = directions
        self.method = method
        self.J_small = J_small
        self.orthonormalize = orthonormalize
        self.lossless_resolvent = lossless_resolvent
        self.tol_interp = tol_interp

    def _interpolation_set(self, p):
        if self.points is None or len(np.atleast_1d(self.points)) == 0:
            raise ValueError("points must be given before fit")
        if isinstance(self.directions, str):
            if self.directions != "canonical":
                raise ValueError(f"unknown directions policy {self.directions!r}")
            return InterpolationSet.canonical(self.points, p)
        return InterpolationSet(self.points, self.directions)

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        system = check_system(X, allow_state_space=self.method == "baseline")
        p = system.p if isinstance(system, PHSystem) else system.n_inputs
        interp = self._interpolation_set(p)
        if self.method == "dissipative":
            result = reduce_dissipative(
                system,
                interp,
                lossless_resolvent=self.lossless_resolvent,
                J_small=self.J_small,
                orthonormalize=self.orthonormalize,
                tol_interp=self.tol_interp,
            )
        elif self.method == "lossless":
            result = reduce_lossless(system, interp, orthonormalize=self.orthonormalize, tol_interp=self.tol_interp)
        else:
            result = reduce_baseline(system, interp, tol_interp=self.tol_interp)
        self.result_ = result
        self.reduced_ = result.reduced
        self.residuals_ = result.residuals_rel
        self.n_components_ = result.order
        self.n_features_in_ = result.lift.shape[0]
        return self

    def transform(self, X):
        """Reduced coordinates ``z = restrict @ x`` for each row of ``X``."""
        check_is_fitted(self, "result_")
        X = check_states(X, self.n_features_in_)
        return X @ self.result_.restrict.T

    def inverse_transform(self, Z):
        """Full states ``x = lift @ z`` for each row of ``Z``."""
        check_is_fitted(self, "result_")
        Z = check_states(Z, self.n_components_, "Z")
        return Z @ self.result_.lift.T

    def predict(self, S):
        """Reduced transfer matrices ``G_r(s)``, shape ``(len(S), p, p)``."""
        check_is_fitted(self, "result_")
        S = np.atleast_1d(np.asarray(S, dtype=np.complex128))
        return np.stack([self.reduced_.transfer_matrix(s) for s in S])

    def score(self, X, y=None):
        """Negative worst relative interpolation error against the system ``X``."""
        check_is_fitted(self, "result_")
        system = check_system(X, allow_state_space=True)
        worst = 0.0
        for s, u in self.result_.interp:
            ref = system.transfer_eval(s, u)
            err = np.linalg.norm(ref - self.reduced_.transfer_eval(s, u))
            worst = max(worst, err / np.linalg.norm(ref) if np.linalg.norm(ref) > 0 else err)
        return -float(worst)
