"""Benchmark systems: mass-spring-damper chains and random pH systems."""

import numpy as np

from .exceptions import InvalidParameter
from .system import PHSystem


def _per_mass(values, n, name):
    arr = np.broadcast_to(np.asarray(values, dtype=float), (n,)) if np.ndim(values) == 0 else np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise InvalidParameter(f"{name} must be a scalar or have length {n}, got shape {arr.shape}")
    return arr


def gen_msd_chain(n_masses, masses=1.0, springs=1.0, dampers=0.0, forced=None):
    """Chain of ``n_masses`` masses; spring ``i`` joins mass ``i`` to mass ``i-1`` (the wall for ``i = 0``).

    Each mass has a damper to ground. The state is ``(q_1..q_n, p_1..p_n)`` so that
    ``J`` is the Poisson matrix, ``H = blockdiag(K, M^{-1})`` and ``R = blockdiag(0, D)``.

    Parameters
    ----------
    n_masses
        Number of masses (half the state dimension).
    masses, springs, dampers
        Scalars or per-mass sequences. Masses and springs must be positive, dampers
        non-negative.
    forced
        0-based indices of the masses receiving a force input; defaults to the last mass.
    """
    n = int(n_masses)
    if n < 1:
        raise InvalidParameter(f"n_masses must be >= 1, got {n_masses}")
    m = _per_mass(masses, n, "masses")
    k = _per_mass(springs, n, "springs")
    d = _per_mass(dampers, n, "dampers")
    if np.any(m <= 0):
        raise InvalidParameter("masses must be positive")
    if np.any(k <= 0):
        raise InvalidParameter("spring constants must be positive")
    if np.any(d < 0):
        raise InvalidParameter("dampers must be non-negative")
    forced = [n - 1] if forced is None else list(forced)
    if not forced or any(not 0 <= i < n for i in forced):
        raise InvalidParameter(f"forced indices must lie in [0, {n})")

    K = np.diag(k + np.append(k[1:], 0.0)) - np.diag(k[1:], 1) - np.diag(k[1:], -1)
    Z = np.zeros((n, n))
    I = np.eye(n)
    J = np.block([[Z, I], [-I, Z]])
    H = np.block([[K, Z], [Z, np.diag(1.0 / m)]])
    R = np.block([[Z, Z], [Z, np.diag(d)]])
    B = np.zeros((2 * n, len(forced)))
    B[n + np.asarray(forced), np.arange(len(forced))] = 1.0
    return PHSystem(J, R, H, B)


def gen_random_ph(n, p, seed, max_attempts=100):
    """Random real pH system of state dimension ``2n`` with ``p`` ports, deterministic in ``seed``.

    ``J = S - S^T``, ``R = M M^T`` with ``M`` of shape ``2n x n``, and
    ``H = N N^T + eps I`` with ``eps = 1e-3 ||N N^T||``.
    """
    n, p = int(n), int(p)
    if n < 1 or p < 1:
        raise InvalidParameter(f"n and p must be >= 1, got n={n}, p={p}")
    dim = 2 * n
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        S = rng.standard_normal((dim, dim))
        J = S - S.T
        if np.linalg.matrix_rank(J) == dim:
            break
    else:
        raise InvalidParameter(f"no full-rank J found in {max_attempts} attempts (seed={seed})")
    M = rng.standard_normal((dim, n)) / np.sqrt(dim)
    R = M @ M.T
    R = 0.5 * (R + R.T)
    N = rng.standard_normal((dim, dim)) / np.sqrt(dim)
    NN = N @ N.T
    NN = 0.5 * (NN + NN.T)
    H = NN + 1e-3 * np.linalg.norm(NN, 2) * np.eye(dim)
    B = rng.standard_normal((dim, p))
    return PHSystem(J, R, H, B)
