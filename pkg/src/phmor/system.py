"""Linear port-Hamiltonian systems: representation, transfer functions, energy and simulation.

A system is ``x' = (J - R) H x + B u``, ``y = B* H x`` with ``J`` skew-Hermitian and
invertible, ``R`` Hermitian PSD and ``H`` Hermitian PD. All data is stored as
complex128 even when real-valued.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from ._validation import (
    TAU_SING,
    as_matrix,
    as_square,
    as_vector,
    herm_residual,
    lambda_min,
    lu_solve,
    lu_with_rcond,
    norm2,
    numerical_rank,
    skew_residual,
    struct_tol,
)
from .exceptions import OddDimension, SingularResolvent, SingularStepMatrix, StructureError


def _resolvent_factor(A, s, tau_sing=TAU_SING):
    M = s * np.eye(A.shape[0], dtype=np.complex128) - A
    factor, rcond = lu_with_rcond(M)
    if rcond < tau_sing:
        raise SingularResolvent(
            f"sI - A is numerically singular at s={complex(s)} (rcond={rcond:.3e} < {tau_sing:.1e}); "
            "move the point off the spectrum",
            s=s,
            rcond=rcond,
        )
    return factor


def resolvent_solve(A, s, rhs, tau_sing=TAU_SING):
    """Solve ``(sI - A) x = rhs`` by pivoted LU, refusing near-singular shifts."""
    return lu_solve(_resolvent_factor(A, s, tau_sing), rhs)


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Standard realization ``x' = Ax + Bu``, ``y = Cx + Du``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray = None

    def __post_init__(self):
        A = as_square(self.A, "A")
        n = A.shape[0]
        B = as_matrix(self.B, "B", shape=(n, None))
        p = B.shape[1]
        C = as_matrix(self.C, "C", shape=(None, n))
        D = np.zeros((C.shape[0], p)) if self.D is None else self.D
        D = as_matrix(D, "D", shape=(C.shape[0], p))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)

    @property
    def order(self):
        return self.A.shape[0]

    @property
    def n_inputs(self):
        return self.B.shape[1]

    @property
    def n_outputs(self):
        return self.C.shape[0]

    def transfer_eval(self, s, u, tau_sing=TAU_SING):
        u = as_vector(u, self.n_inputs, "u")
        x = resolvent_solve(self.A, s, self.B @ u, tau_sing)
        return self.C @ x + self.D @ u

    def transfer_matrix(self, s, tau_sing=TAU_SING):
        X = resolvent_solve(self.A, s, self.B, tau_sing)
        return self.C @ X + self.D

    def poles(self):
        return np.linalg.eigvals(self.A)


@dataclass(frozen=True, eq=False)
class PHSystem:
    """Linear time-invariant port-Hamiltonian system of even state dimension ``2n``.

    Parameters
    ----------
    J
        Skew-Hermitian, invertible interconnection matrix, ``2n x 2n``.
    R
        Hermitian positive semi-definite dissipation matrix.
    H
        Hermitian positive definite energy matrix.
    B
        Input map, ``2n x p``. The output map is ``B* H``.
    tol
        Relative structural tolerance. Defaults to ``100 * eps * 2n``.

    Raises
    ------
    StructureError
        If any structural invariant fails.
    """

    J: np.ndarray
    R: np.ndarray
    H: np.ndarray
    B: np.ndarray
    tol: float = field(default=None)

    def __post_init__(self):
        J = as_square(self.J, "J")
        dim = J.shape[0]
        if dim == 0 or dim % 2:
            raise OddDimension(f"state dimension must be even and positive, got {dim}")
        R = as_square(self.R, "R", dim)
        H = as_square(self.H, "H", dim)
        B = as_matrix(self.B, "B", shape=(dim, None))
        if B.shape[1] == 0:
            raise StructureError("B must have at least one column")
        tol = struct_tol(dim) if self.tol is None else float(self.tol)
        for name, value in (("J", J), ("R", R), ("H", H), ("B", B)):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "tol", tol)

        if skew_residual(J) > tol:
            raise StructureError(f"J is not skew-Hermitian: ||J + J*||/||J|| = {skew_residual(J):.3e}")
        if numerical_rank(J) < dim:
            raise StructureError("J is rank deficient")
        if herm_residual(R) > tol:
            raise StructureError(f"R is not Hermitian: ||R - R*||/||R|| = {herm_residual(R):.3e}")
        if lambda_min(R) < -tol * norm2(R):
            raise StructureError(f"R is not positive semi-definite: lambda_min = {lambda_min(R):.3e}")
        if herm_residual(H) > tol:
            raise StructureError(f"H is not Hermitian: ||H - H*||/||H|| = {herm_residual(H):.3e}")
        if not lambda_min(H) > 0:
            raise StructureError(f"H is not positive definite: lambda_min = {lambda_min(H):.3e}")

    @property
    def n(self):
        """Half the state dimension."""
        return self.J.shape[0] // 2

    @property
    def dim(self):
        return self.J.shape[0]

    @property
    def p(self):
        return self.B.shape[1]

    @property
    def A(self):
        return (self.J - self.R) @ self.H

    @property
    def C(self):
        return self.B.conj().T @ self.H

    def is_lossless(self):
        return norm2(self.R) <= self.tol * max(norm2(self.J), 1.0)

    def to_state_space(self):
        return to_state_space(self)

    def transfer_eval(self, s, u, tau_sing=TAU_SING):
        return transfer_eval(self, s, u, tau_sing)

    def transfer_matrix(self, s, tau_sing=TAU_SING):
        return transfer_matrix(self, s, tau_sing)

    def hamiltonian(self, x):
        return hamiltonian(self, x)

    def simulate(self, input_signal, x0, dt, steps):
        return simulate(self, input_signal, x0, dt, steps)

    def poles(self):
        return np.linalg.eigvals(self.A)

    def __repr__(self):
        return f"PHSystem(2n={self.dim}, p={self.p})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled simulation output on a uniform time grid."""

    times: np.ndarray
    states: np.ndarray
    outputs: np.ndarray
    inputs: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        N = len(self.times)
        for name in ("states", "outputs", "inputs", "energies"):
            if len(getattr(self, name)) != N:
                raise ValueError(f"{name} has {len(getattr(self, name))} samples, expected {N}")
        if N > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def duration(self):
        return float(self.times[-1] - self.times[0])


def to_state_space(sys):
    """Return ``(A, B, C, D) = ((J - R) H, B, B* H, 0)``."""
    return StateSpace(sys.A, sys.B, sys.C, np.zeros((sys.p, sys.p)))


def transfer_eval(sys, s, u, tau_sing=TAU_SING):
    """Evaluate ``G(s) u`` for ``G(s) = B* H (sI - (J - R) H)^{-1} B``.

    Solves ``(sI - (J - R) H) x = B u`` with a pivoted LU and returns ``y = B* H x``.

    Raises
    ------
    SingularResolvent
        If the reciprocal condition estimate of ``sI - (J - R) H`` is below ``tau_sing``.
    """
    u = as_vector(u, sys.p, "u")
    x = resolvent_solve(sys.A, s, sys.B @ u, tau_sing)
    return sys.C @ x


def transfer_matrix(sys, s, tau_sing=TAU_SING):
    """Full ``p x p`` transfer matrix ``G(s)``."""
    X = resolvent_solve(sys.A, s, sys.B, tau_sing)
    return sys.C @ X


def hamiltonian(sys, x):
    """Stored energy ``x* H x / 2``."""
    x = as_vector(x, sys.dim, "x")
    return float(0.5 * np.real(np.vdot(x, sys.H @ x)))


def _sample_input(input_signal, times, p):
    if input_signal is None:
        return np.zeros((len(times), p), dtype=np.complex128)
    if callable(input_signal):
        u = np.array([np.asarray(input_signal(t), dtype=np.complex128).reshape(-1) for t in times])
    else:
        u = np.asarray(input_signal, dtype=np.complex128)
        if u.ndim == 1:
            u = u.reshape(-1, 1) if p == 1 else u.reshape(1, -1).repeat(len(times), axis=0)
    if u.shape != (len(times), p):
        raise ValueError(f"input samples have shape {u.shape}, expected {(len(times), p)}")
    return u


def simulate(sys, input_signal, x0, dt, steps):
    """Implicit-midpoint integration of ``x' = (J - R) H x + B u``.

    Parameters
    ----------
    sys
        The system to integrate.
    input_signal
        ``None`` for zero input, a callable ``t -> u(t)``, or an array of shape
        ``(steps + 1, p)`` sampled on the time grid.
    x0
        Initial state.
    dt
        Time step (> 0).
    steps
        Number of steps.

    Returns
    -------
    Trajectory
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    steps = int(steps)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    x0 = as_vector(x0, sys.dim, "x0")
    times = dt * np.arange(steps + 1)
    u = _sample_input(input_signal, times, sys.p)

    A = sys.A
    I = np.eye(sys.dim)
    factor, rcond = lu_with_rcond(I - 0.5 * dt * A)
    if rcond < TAU_SING:
        raise SingularStepMatrix(f"I - dt/2 (J - R)H is singular for dt={dt} (rcond={rcond:.3e})")
    explicit = I + 0.5 * dt * A

    X = np.empty((steps + 1, sys.dim), dtype=np.complex128)
    X[0] = x0
    Bu = u @ sys.B.T
    for k in range(steps):
        rhs = explicit @ X[k] + 0.5 * dt * (Bu[k] + Bu[k + 1])
        X[k + 1] = lu_solve(factor, rhs)

    Y = X @ sys.C.T
    HX = X @ sys.H.T
    energies = 0.5 * np.real(np.einsum("ij,ij->i", X.conj(), HX))
    return Trajectory(times=times, states=X, outputs=Y, inputs=u, energies=energies)


def energy_audit(traj):
    """Dissipation-inequality slack ``int Re(u* y) dt - (H_end - H_start)``.

    The supplied power is integrated with the trapezoid rule. A passive run has
    slack ``>= -audit_tolerance``.
    """
    power = np.real(np.einsum("ij,ij->i", traj.inputs.conj(), traj.outputs))
    supplied = trapezoid(power, traj.times) if len(traj.times) > 1 else 0.0
    return float(supplied - (traj.energies[-1] - traj.energies[0]))


def audit_tolerance(traj, sys):
    """Quadrature tolerance ``dt^2 * T * ||H|| * max ||x||^2`` for :func:`energy_audit`."""
    xmax = float(np.max(np.sum(np.abs(traj.states) ** 2, axis=1))) if len(traj.states) else 0.0
    return traj.dt ** 2 * traj.duration * norm2(sys.H) * xmax
