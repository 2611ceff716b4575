"""Shared fixtures-free helpers for the test suite."""

import numpy as np

from phmor import InterpolationSet, PHSystem, gen_random_ph


def random_instance(seed):
    """Random pH system and an interpolation set with even ``p + M`` and nonsingular ``i W* J W``."""
    n = 2 + seed % 9
    p = 1 + (seed // 9) % 2
    sys = gen_random_ph(n, p, seed)
    if p == 1:
        interp = InterpolationSet([1.0, 1 + 1j, 1 - 1j], [[1.0]] * 3)
    else:
        interp = InterpolationSet([1 + 1j, 1 - 1j], [[1.0, 0.5], [1.0, 0.5]])
    return sys, interp


def lossless_copy(sys):
    return PHSystem(sys.J, np.zeros_like(sys.R), sys.H, sys.B)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_skew(rng, d, real=True):
    """Full-rank skew-Hermitian matrix; real ones have ``i M`` of inertia ``(d/2, d/2, 0)``."""
    S = rng.standard_normal((d, d))
    if not real:
        S = S + 1j * rng.standard_normal((d, d))
    return S - S.conj().T


def random_form(rng, d):
    """Well-conditioned skew-Hermitian ``U diag(i theta) U*`` with ``|theta|`` in [0.5, 2], balanced signs.

    Forms must carry an inverse accurate to 1e-12, which rules out badly conditioned draws.
    """
    theta = rng.uniform(0.5, 2.0, d) * np.repeat([1.0, -1.0], d // 2)
    U, _ = np.linalg.qr(random_complex(rng, d, d))
    M = U @ np.diag(1j * theta) @ U.conj().T
    return 0.5 * (M - M.conj().T)


def poisson(k):
    I, Z = np.eye(k), np.zeros((k, k))
    return np.block([[Z, I], [-I, Z]])


def random_symplectic(rng, M_big, k, M_small=None):
    """Random ``Q`` with ``Q* M_big Q = M_small`` (canonical by default), from eigenvectors of ``i M_big``.

    ``i M_big`` must have at least ``k`` positive and ``k`` negative eigenvalues.
    Built without the library's congruence routines so it can serve as an oracle.
    """
    w, U = np.linalg.eigh(1j * M_big)
    pos, neg = np.flatnonzero(w > 0), np.flatnonzero(w < 0)
    pick_p = rng.choice(pos, size=k, replace=False)
    pick_n = rng.choice(neg, size=k, replace=False)
    # mix within each signature block by a random unitary to avoid pure eigenvectors
    Up, _ = np.linalg.qr(random_complex(rng, k, k))
    Un, _ = np.linalg.qr(random_complex(rng, k, k))
    P = U[:, pick_p] / np.sqrt(w[pick_p]) @ Up
    N = U[:, pick_n] / np.sqrt(-w[pick_n]) @ Un
    Q0 = np.hstack([P, N])  # Q0* (i M_big) Q0 = diag(I, -I)
    I = np.eye(k)
    Z = np.block([[I, I], [-1j * I, 1j * I]]) / np.sqrt(2.0)
    Q = Q0 @ Z.conj().T  # Q* (i M_big) Q = i J_2k
    if M_small is None:
        return Q, poisson(k)
    # M_small = T* J_2k T for a random invertible T gives Q T as a (M_big, M_small) map
    T = np.eye(2 * k) + 0.3 * rng.standard_normal((2 * k, 2 * k))
    return Q @ T, T.conj().T @ poisson(k) @ T
