"""Symplectic linear algebra on phase space.

All matrices use the interleaved ordering (q1, p1, q2, p2, ...) unless a
basis tag says otherwise.  The quadrature-grouped basis is (q1..qN, p1..pN)
and the complex basis is (a1..aN, a1^dag..aN^dag).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import expm

from .errors import InvalidArgument, NumericError

Basis = Literal["interleaved", "grouped", "complex"]
BASES = ("interleaved", "grouped", "complex")

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Relative gap under which two symplectic eigenvalues count as equal.
PAIRING_TOL = 1e-7


def symplectic_form(n: int) -> np.ndarray:
    """N-mode symplectic form as a direct sum of [[0, 1], [-1, 0]] blocks.

    Args:
        n: Number of modes, at least one.

    Returns:
        The real 2N x 2N antisymmetric matrix Omega.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"mode count must be a positive integer, got {n!r}")
    return np.kron(np.eye(int(n)), OMEGA_1)


def _modes_of(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2:
        raise InvalidArgument(f"phase-space matrices have even dimension, got {M.shape[0]}")
    return M.shape[0] // 2


def is_symplectic(M, tol: float = 1e-9) -> bool:
    """Check M Omega M^T = Omega in the max norm.

    Args:
        M: Real 2N x 2N matrix in the interleaved basis.
        tol: Allowed elementwise deviation.

    Returns:
        True when every entry of M Omega M^T - Omega is within tol.
    """
    M = np.asarray(M, dtype=float)
    n = _modes_of(M)
    Om = symplectic_form(n)
    return bool(np.max(np.abs(M @ Om @ M.T - Om)) <= tol)


def quadrature_permutation(n: int) -> np.ndarray:
    """Permutation T taking interleaved vectors to the grouped ordering.

    T[i, j] = 1 for j = 2i (position rows) and j = 2(i - n) + 1 (momentum rows),
    so that T @ (q1, p1, ..., qN, pN) = (q1, ..., qN, p1, ..., pN).
    """
    T = np.zeros((2 * n, 2 * n))
    for i in range(n):
        T[i, 2 * i] = 1.0
        T[i + n, 2 * i + 1] = 1.0
    return T


def complex_unitary(n: int) -> np.ndarray:
    """Unitary L mapping grouped quadratures to (a, a^dag) amplitudes."""
    eye = np.eye(n)
    return np.block([[eye, 1j * eye], [eye, -1j * eye]]) / np.sqrt(2.0)


def change_basis(M, src: Basis, dst: Basis) -> np.ndarray:
    """Re-express a phase-space matrix in a different basis.

    Conversions compose the permutation T (interleaved to grouped) and
    the unitary L (grouped to complex); M -> T M T^T and M -> L M L^dag.

    Args:
        M: 2N x 2N matrix written in basis ``src``.
        src: Basis of the input.
        dst: Requested basis.

    Returns:
        The matrix in basis ``dst``; real for real bases, complex otherwise.
    """
    if src not in BASES or dst not in BASES:
        raise InvalidArgument(f"unknown basis tag: {src!r} -> {dst!r}")
    M = np.asarray(M)
    n = _modes_of(M)
    if src == dst:
        return M.copy()
    T = quadrature_permutation(n)
    L = complex_unitary(n)
    # route everything through the grouped basis
    if src == "interleaved":
        G = T @ M @ T.T
    elif src == "complex":
        G = L.conj().T @ M @ L
    else:
        G = M
    if dst == "grouped":
        out = G
    elif dst == "interleaved":
        out = T.T @ G @ T
    else:
        return L @ G @ L.conj().T
    if np.iscomplexobj(out) and np.max(np.abs(out.imag), initial=0.0) < 1e-12:
        out = out.real
    return out


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Generator H = [[A, B], [B*, A*]] of a quadratic unitary.

    Attributes:
        A: Hermitian N x N block (passive part).
        B: Symmetric N x N block (active part).
    """

    A: np.ndarray
    B: np.ndarray
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        B = np.atleast_2d(np.asarray(self.B, dtype=complex))
        if A.shape != B.shape or A.shape[0] != A.shape[1]:
            raise InvalidArgument(f"A and B must be square of equal size, got {A.shape}, {B.shape}")
        if np.max(np.abs(A - A.conj().T)) > self.tol:
            raise InvalidArgument("block A is not Hermitian")
        if np.max(np.abs(B - B.T)) > self.tol:
            raise InvalidArgument("block B is not symmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n_modes(self) -> int:
        return self.A.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.conj(), self.A.conj()]])

    @property
    def K(self) -> np.ndarray:
        n = self.n_modes
        return np.diag(np.r_[np.ones(n), -np.ones(n)]).astype(complex)


def symplectic_from_hamiltonian(H: QuadraticHamiltonian) -> np.ndarray:
    """Symplectic matrix of exp(-i H) in the interleaved real basis.

    Computes S_c = expm(-i K H) in the complex basis and maps it back with
    T^T L^dag S_c L T.  The overall sign ambiguity of the metaplectic lift is
    irrelevant here; this always returns the principal exponential.

    Args:
        H: Quadratic generator.

    Returns:
        Real 2N x 2N symplectic matrix.
    """
    Sc = expm(-1j * H.K @ H.matrix)
    S = change_basis(Sc, "complex", "interleaved")
    S = np.asarray(S)
    if np.iscomplexobj(S):
        if np.max(np.abs(S.imag)) > 1e-8 * max(1.0, np.max(np.abs(S))):
            raise NumericError("complex residue in symplectic exponential")
        S = S.real
    return S


def _check_positive_definite(sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sigma = np.asarray(sigma, dtype=float)
    _modes_of(sigma)
    if np.max(np.abs(sigma - sigma.T)) > 1e-9 * max(1.0, np.max(np.abs(sigma))):
        raise InvalidArgument("covariance matrix is not symmetric")
    sigma = 0.5 * (sigma + sigma.T)
    w, V = np.linalg.eigh(sigma)
    if w[0] <= 0:
        raise InvalidArgument("covariance matrix is not positive definite")
    return w, V


def williamson(sigma) -> tuple[np.ndarray, np.ndarray]:
    """Williamson normal form sigma = S diag(nu1, nu1, ..., nuN, nuN) S^T.

    Uses the symmetric square root M of sigma.  The Hermitian matrix
    i M Omega M has eigenvalues +-nu; each eigenvector u = x + i y with a
    positive eigenvalue contributes the orthonormal pair (sqrt2 y, sqrt2 x)
    to an orthogonal K with K^T M Omega M K = direct sum of nu * omega.
    Then S = M K D^(-1/2) is symplectic and reconstructs sigma.

    Args:
        sigma: Real symmetric positive-definite 2N x 2N matrix.

    Returns:
        Tuple (S, nu) with nu sorted in descending order.
    """
    w, V = _check_positive_definite(sigma)
    n = len(w) // 2
    M = (V * np.sqrt(w)) @ V.T
    Om = symplectic_form(n)
    A = M @ Om @ M
    A = 0.5 * (A - A.T)
    evals, evecs = np.linalg.eigh(1j * A)
    # eigh sorts ascending, so the last n carry the positive eigenvalues
    nu = evals[n:][::-1]
    U = evecs[:, n:][:, ::-1]
    if np.any(nu <= 0):
        raise NumericError("failed to separate symplectic eigenvalue pairs")
    K = np.empty((2 * n, 2 * n))
    K[:, 0::2] = np.sqrt(2.0) * U.imag
    K[:, 1::2] = np.sqrt(2.0) * U.real
    S = M @ K @ np.diag(np.repeat(nu, 2) ** -0.5)
    return _fix_gauge(S, nu), nu


def _fix_gauge(S: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Use the passive freedom S -> S O (O commuting with the normal form)
    to bring S as close to the identity as possible.

    Within a block of equal nu the freedom is a unitary V acting on the
    mode amplitudes; maximizing tr(S O) is a Procrustes problem on the
    amplitude block of S restricted to those modes.  Diagonal inputs then
    return S = I exactly.
    """
    n = len(nu)
    S = S.copy()
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(nu[stop] - nu[start]) <= 1e-12 * nu[start]:
            stop += 1
        k = stop - start
        idx = np.arange(2 * start, 2 * stop)
        Xc = change_basis(S[np.ix_(idx, idx)], "interleaved", "complex")
        P, _, Qh = np.linalg.svd(Xc[:k, :k])
        V = (P @ Qh).conj().T
        Oc = np.block([[V, np.zeros((k, k))], [np.zeros((k, k)), V.conj()]])
        O = np.real(change_basis(Oc, "complex", "interleaved"))
        S[:, idx] = S[:, idx] @ O
        start = stop
    return S


def symplectic_spectrum(sigma) -> np.ndarray:
    """Symplectic eigenvalues of sigma, sorted in descending order.

    These are the moduli of the eigenvalues of i Omega sigma, computed as the
    positive eigenvalues of the Hermitian matrix i sigma^(1/2) Omega sigma^(1/2),
    which is similar to it.
    """
    w, V = _check_positive_definite(sigma)
    n = len(w) // 2
    M = (V * np.sqrt(w)) @ V.T
    A = M @ symplectic_form(n) @ M
    try:
        ev = np.linalg.eigvalsh(0.5j * (A - A.T))
    except np.linalg.LinAlgError as exc:
        raise NumericError(str(exc)) from exc
    return np.sort(np.abs(ev[n:]))[::-1]


def symplectic_rank(sigma, tol: float = 1e-9) -> int:
    """Number of symplectic eigenvalues exceeding 1 by more than tol."""
    return int(np.sum(symplectic_spectrum(sigma) - 1.0 > tol))


@dataclass(frozen=True)
class EulerFactors:
    """Factors of S = O Z O' with O, O' passive and Z a set of squeezers.

    Attributes:
        O: Orthogonal symplectic matrix applied last.
        Z: Diagonal matrix with (z_j, 1/z_j) on mode j, z_j >= 1, descending.
        Oprime: Orthogonal symplectic matrix applied first.
    """

    O: np.ndarray
    Z: np.ndarray
    Oprime: np.ndarray

    @property
    def z(self) -> np.ndarray:
        return np.diag(self.Z)[0::2].copy()

    def reconstruct(self) -> np.ndarray:
        return self.O @ self.Z @ self.Oprime


def _isotropic_basis(E: np.ndarray, Om: np.ndarray) -> list[np.ndarray]:
    """Orthonormal vectors v_k spanning half of an Omega-invariant subspace.

    Picks v, removes span{v, Omega v}, repeats.  The result satisfies
    v_j^T Omega v_k = 0 and {v_k, Omega v_k} is orthonormal.
    """
    out: list[np.ndarray] = []
    Q = E.copy()
    while Q.shape[1] > 0:
        norms = np.linalg.norm(Q, axis=0)
        v = Q[:, np.argmax(norms)]
        v = v / np.linalg.norm(v)
        out.append(v)
        pair = np.column_stack([v, Om @ v])
        Q = Q - pair @ (pair.T @ Q)
        # drop the two directions now consumed and re-orthonormalize the rest
        u, s, _ = np.linalg.svd(Q, full_matrices=False)
        Q = u[:, : max(0, E.shape[1] - 2 * len(out))]
    return out


def euler_decompose(S, tol: float = 1e-9) -> EulerFactors:
    """Euler (Bloch-Messiah) decomposition of a symplectic matrix.

    S is split by polar decomposition into P O2 with P = (S S^T)^(1/2)
    symmetric, positive and symplectic.  P has eigenvalue pairs
    (z, 1/z) whose eigenvectors are exchanged by Omega, so an eigenbasis
    with columns (v_j, Omega^T v_j) diagonalizes it symplectically.

    Args:
        S: Symplectic matrix in the interleaved basis.
        tol: Tolerance for the symplectic precondition.

    Returns:
        EulerFactors with S = O Z O'.
    """
    S = np.asarray(S, dtype=float)
    n = _modes_of(S)
    if not is_symplectic(S, tol):
        raise InvalidArgument("input is not symplectic")
    Om = symplectic_form(n)
    U, s, Vt = np.linalg.svd(S)
    O2 = U @ Vt
    w, V = np.linalg.eigh(U @ np.diag(s) @ U.T)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    # eigenvalues within the pairing tolerance of 1 form a passive block
    unit = np.abs(np.log(w)) <= 1e-10
    big = [k for k in range(2 * n) if w[k] > 1 and not unit[k]]
    vecs = [V[:, k] for k in big]
    zs = [w[k] for k in big]
    if np.any(unit):
        iso = _isotropic_basis(V[:, unit], Om)
        vecs += iso
        zs += [1.0] * len(iso)
    if len(vecs) != n:
        raise NumericError("could not pair the singular values of S")
    O = np.empty((2 * n, 2 * n))
    for j, v in enumerate(vecs):
        O[:, 2 * j] = v
        O[:, 2 * j + 1] = Om.T @ v
    z = np.array(zs)
    Z = np.diag(np.repeat(z, 2) ** np.tile([1.0, -1.0], n))
    return EulerFactors(O=O, Z=Z, Oprime=O.T @ O2)
