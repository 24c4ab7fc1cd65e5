"""Gaussian states described by first moments and a covariance matrix.

Conventions: interleaved ordering (q1, p1, ..., qN, pN), hbar = 1 and the
doubled covariance convention sigma_jk = <{dR_j, dR_k}>, so the vacuum has
sigma = I.  Divide sigma by two to obtain the more common halved form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, InvalidState
from .symplectic import (
    QuadraticHamiltonian,
    symplectic_form,
    symplectic_from_hamiltonian,
    symplectic_spectrum,
)

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Immutable N-mode Gaussian state.

    Attributes:
        d: First moments, length 2N.
        sigma: Symmetric 2N x 2N covariance matrix (vacuum = identity).
    """

    d: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        d = np.array(self.d, dtype=float).reshape(-1)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise InvalidArgument(f"covariance matrix must be 2N x 2N, got {sigma.shape}")
        if d.shape[0] != sigma.shape[0]:
            raise InvalidArgument(f"displacement length {d.shape[0]} does not match sigma {sigma.shape}")
        scale = max(1.0, float(np.max(np.abs(sigma))))
        if np.max(np.abs(sigma - sigma.T)) > SYMMETRY_TOL * scale:
            raise InvalidArgument("covariance matrix is not symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        sigma.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "d", d)

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 block of sigma coupling modes i and j (0-based)."""
        return self.sigma[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    def to_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "ordering": "qpqp",
            "hbar_convention": "doubled",
            "d": self.d.tolist(),
            "sigma": self.sigma.tolist(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict, allow_unphysical: bool = False) -> "GaussianState":
        """Parse a state document, rejecting asymmetric or unphysical input.

        Args:
            doc: Mapping with keys n_modes, ordering, hbar_convention, d, sigma.
            allow_unphysical: Skip the bona fide test (for deliberate test input).
        """
        try:
            n = int(doc["n_modes"])
            sigma = np.asarray(doc["sigma"], dtype=float)
            d = np.asarray(doc.get("d", np.zeros(2 * n)), dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed state document: {exc}") from exc
        if doc.get("ordering", "qpqp") != "qpqp":
            raise InvalidArgument("only the interleaved 'qpqp' ordering is supported")
        if doc.get("hbar_convention", "doubled") != "doubled":
            raise InvalidArgument("only the 'doubled' covariance convention is supported")
        if sigma.shape != (2 * n, 2 * n):
            raise InvalidArgument(f"sigma shape {sigma.shape} does not match n_modes={n}")
        state = cls(d, sigma)
        if not allow_unphysical and not is_physical(state):
            raise InvalidState("covariance matrix violates sigma + i Omega >= 0")
        return state

    @classmethod
    def from_json(cls, text: str, allow_unphysical: bool = False) -> "GaussianState":
        return cls.from_dict(json.loads(text), allow_unphysical=allow_unphysical)


def direct_sum(*states: GaussianState) -> GaussianState:
    """Product state of the given states, modes concatenated in order."""
    size = sum(s.sigma.shape[0] for s in states)
    sigma = np.zeros((size, size))
    k = 0
    for s in states:
        m = s.sigma.shape[0]
        sigma[k : k + m, k : k + m] = s.sigma
        k += m
    return GaussianState(np.concatenate([s.d for s in states]), sigma)


def vacuum(n: int) -> GaussianState:
    """N-mode vacuum: zero first moments and identity covariance."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"mode count must be a positive integer, got {n!r}")
    return GaussianState(np.zeros(2 * n), np.eye(2 * n))


def coherent(alphas: Sequence[complex] | complex) -> GaussianState:
    """Product of coherent states with d_k = sqrt2 (Re alpha_k, Im alpha_k)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    if alphas.size == 0:
        raise InvalidArgument("need at least one amplitude")
    d = np.sqrt(2.0) * np.column_stack([alphas.real, alphas.imag]).reshape(-1)
    return GaussianState(d, np.eye(2 * alphas.size))


def thermal(nbars: Sequence[float] | float) -> GaussianState:
    """Product of thermal states, sigma = direct sum of (2 nbar_k + 1) I."""
    nbars = np.atleast_1d(np.asarray(nbars, dtype=float))
    if nbars.size == 0 or np.any(nbars < 0):
        raise InvalidArgument(f"mean occupations must be non-negative, got {nbars}")
    return GaussianState(np.zeros(2 * nbars.size), np.diag(np.repeat(2 * nbars + 1, 2)))


def squeezed(alpha: complex = 0.0, s: float = 0.0, theta: float = 0.0) -> GaussianState:
    """General pure single-mode state: squeezed vacuum then displaced.

    Args:
        alpha: Coherent amplitude of the displacement.
        s: Squeezing parameter, s >= 0.
        theta: Squeezing angle; theta = 0 squeezes momentum.
    """
    if s < 0:
        raise InvalidArgument(f"squeezing must be non-negative, got {s}")
    ch, sh = np.cosh(2 * s), np.sinh(2 * s)
    sigma = np.array(
        [
            [ch + np.cos(theta) * sh, np.sin(theta) * sh],
            [np.sin(theta) * sh, ch - np.cos(theta) * sh],
        ]
    )
    d = np.sqrt(2.0) * np.array([np.real(alpha), np.imag(alpha)])
    return GaussianState(d, sigma)


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with cosh 2r diagonal and +-sinh 2r correlations."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    sigma = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    return GaussianState(np.zeros(4), sigma)


def _boundary_sqrt(ai: float, aj: float, ak: float, sign: float, tol: float = 1e-12) -> float:
    """sqrt(((ai-1)^2 - d^2)((ai+1)^2 - d^2)) with d = aj + sign * ak.

    Each linear factor ai +- 1 +- d is summed with math.fsum, so it is
    correctly rounded even next to the boundary of the valid region, where
    ordinary summation would leave rounding noise that the square root
    amplifies to about 1e-8.  Products below -tol (relative) signal an
    invalid input.
    """
    factors = [
        math.fsum([ai, s1, -s2 * aj, -s2 * sign * ak]) for s1 in (-1.0, 1.0) for s2 in (1.0, -1.0)
    ]
    x = float(np.prod(factors))
    if x < -tol * (ai + 1 + aj + ak) ** 4:
        raise InvalidArgument(f"negative radicand {x}")
    return float(np.sqrt(max(x, 0.0)))


def three_mode_coefficients(a1: float, a2: float, a3: float) -> dict:
    """Correlation coefficients c_i^+- of the pure three-mode standard form.

    c_i couples the two modes other than i.  Radicands are built from
    correctly rounded linear factors and clamped at zero, which keeps states
    on or near the boundary of the triangle region pure to rounding.

    Returns:
        Mapping i -> (c_i^+, c_i^-) for i in (1, 2, 3).
    """
    a = {1: float(a1), 2: float(a2), 3: float(a3)}
    for i, j, k in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
        lo, hi = abs(a[j] - a[k]) + 1, a[j] + a[k] - 1
        if not (lo - 1e-12 <= a[i] <= hi + 1e-12):
            raise InvalidArgument(
                f"triangle condition |a{j}-a{k}|+1 <= a{i} <= a{j}+a{k}-1 violated "
                f"for (a{i}, a{j}, a{k}) = ({a[i]}, {a[j]}, {a[k]})"
            )
    out = {}
    for i, j, k in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
        s1 = _boundary_sqrt(a[i], a[j], a[k], -1.0)
        s2 = _boundary_sqrt(a[i], a[j], a[k], 1.0)
        den = 4 * np.sqrt(a[j] * a[k])
        out[i] = (float((s1 + s2) / den), float((s1 - s2) / den))
    return out


def three_mode_pure(a1: float, a2: float, a3: float) -> GaussianState:
    """Pure three-mode state in standard form with local parameters a1, a2, a3."""
    c = three_mode_coefficients(a1, a2, a3)
    sigma = np.diag(np.repeat([a1, a2, a3], 2)).astype(float)
    # c3 couples modes 1-2, c2 couples 1-3, c1 couples 2-3
    for i, (m, n) in ((3, (0, 1)), (2, (0, 2)), (1, (1, 2))):
        blk = np.diag(c[i])
        sigma[2 * m : 2 * m + 2, 2 * n : 2 * n + 2] = blk
        sigma[2 * n : 2 * n + 2, 2 * m : 2 * m + 2] = blk
    return GaussianState(np.zeros(6), sigma)


def is_physical(state: GaussianState, tol: float = 1e-9) -> bool:
    """Bona fide test: smallest eigenvalue of sigma + i Omega is >= -tol."""
    sigma = state.sigma
    Om = symplectic_form(state.n_modes)
    return bool(np.linalg.eigvalsh(sigma + 1j * Om)[0] >= -tol)


def purity(state: GaussianState, tol: float = 1e-9) -> float:
    """Purity Tr rho^2 = 1 / sqrt(det sigma)."""
    det = float(np.linalg.det(state.sigma))
    if det < 1 - tol:
        raise InvalidState(f"det sigma = {det} < 1 is not a physical state")
    return 1.0 / np.sqrt(max(det, 1.0))


def mean_photon_numbers(state: GaussianState) -> np.ndarray:
    """Mean photon number per mode, (Tr sigma_k - 2)/4 + |d_k|^2 / 2."""
    n = state.n_modes
    tr = np.array([np.trace(state.block(k, k)) for k in range(n)])
    d2 = (state.d.reshape(n, 2) ** 2).sum(axis=1)
    return (tr - 2) / 4 + d2 / 2


def _check_modes(keep: Iterable[int], n: int) -> list[int]:
    keep = [int(k) for k in keep]
    if not keep:
        raise InvalidArgument("mode list is empty")
    if len(set(keep)) != len(keep):
        raise InvalidArgument(f"duplicate mode indices in {keep}")
    bad = [k for k in keep if not 0 <= k < n]
    if bad:
        raise InvalidArgument(f"mode indices {bad} out of range for {n} modes")
    return keep


def mode_indices(modes: Sequence[int]) -> np.ndarray:
    """Phase-space row indices (q and p) of the given 0-based modes."""
    return np.array([2 * m + s for m in modes for s in (0, 1)], dtype=int)


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Reduced state on the listed modes (0-based), in the listed order."""
    keep = _check_modes(keep, state.n_modes)
    idx = mode_indices(keep)
    return GaussianState(state.d[idx], state.sigma[np.ix_(idx, idx)])


@dataclass(frozen=True)
class SymplecticInvariants:
    """Local symplectic invariants of a two-mode covariance matrix."""

    I1: float
    I2: float
    I3: float
    I4: float


def symplectic_invariants(state: GaussianState) -> SymplecticInvariants:
    """det sigma_A, det sigma_B, det epsilon_AB and det sigma_AB."""
    if state.n_modes != 2:
        raise InvalidArgument("symplectic invariants are defined for two-mode states")
    s = state.sigma
    return SymplecticInvariants(
        float(np.linalg.det(s[:2, :2])),
        float(np.linalg.det(s[2:, 2:])),
        float(np.linalg.det(s[:2, 2:])),
        float(np.linalg.det(s)),
    )


@dataclass(frozen=True)
class TwoModeStandardForm:
    """Parameters (a, b, c+, c-) of a two-mode standard form, c+ >= |c-|."""

    a: float
    b: float
    c_plus: float
    c_minus: float

    def sigma(self) -> np.ndarray:
        a, b, cp, cm = self.a, self.b, self.c_plus, self.c_minus
        return np.array([[a, 0, cp, 0], [0, a, 0, cm], [cp, 0, b, 0], [0, cm, 0, b]], dtype=float)

    def state(self) -> GaussianState:
        return GaussianState(np.zeros(4), self.sigma())

    def swapped(self) -> "TwoModeStandardForm":
        """Same state with the roles of A and B exchanged."""
        return TwoModeStandardForm(self.b, self.a, self.c_plus, self.c_minus)

    def quartic(self) -> float:
        """Physicality polynomial; non-negative for bona fide states."""
        a, b, cp, cm = self.a, self.b, self.c_plus, self.c_minus
        return (a * a - 1) * (b * b - 1) - 2 * cm * cp - a * b * cp * cp + cm * cm * (cp * cp - a * b)


def _sqrt_spd(M: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(M)
    return (v * np.sqrt(np.maximum(w, 0.0))) @ v.T


def two_mode_standard_form(state: GaussianState, tol: float = 1e-9) -> TwoModeStandardForm:
    """Standard form (a, b, c+, c-) reached by local symplectic operations.

    Each local block sigma_A is brought to a I by the determinant-one map
    (sigma_A / a)^(1/2), with a = sqrt(det sigma_A); the transformed
    correlation block is then diagonalized by an SVD whose orthogonal factors
    are made proper rotations.  This gives c+ >= |c-| with c- carrying the
    sign of det eps, and avoids the square-root cancellation of the
    invariants route on nearly pure states.
    """
    if state.n_modes != 2:
        raise InvalidArgument("standard form needs a two-mode state")
    if not is_physical(state, tol):
        raise InvalidState("input is not a physical two-mode state")
    sA, sB, eps = state.block(0, 0), state.block(1, 1), state.block(0, 1)
    a = float(np.sqrt(max(np.linalg.det(sA), 1.0)))
    b = float(np.sqrt(max(np.linalg.det(sB), 1.0)))
    SA = _sqrt_spd(sA / np.sqrt(np.linalg.det(sA)))
    SB = _sqrt_spd(sB / np.sqrt(np.linalg.det(sB)))
    eps_n = np.linalg.solve(SA, np.linalg.solve(SB, eps.T).T)
    s = np.linalg.svd(eps_n, compute_uv=False)
    cm = float(np.copysign(s[1], np.linalg.det(eps_n))) if s[1] > 0 else 0.0
    return TwoModeStandardForm(a, b, float(s[0]), cm)


def standard_form_from_invariants(state: GaussianState, tol: float = 1e-9) -> TwoModeStandardForm:
    """Standard-form parameters recovered from the four local invariants.

    With a = sqrt(I1) and b = sqrt(I2), the standard form has
    I3 = c+ c- and I4 = (ab - c+^2)(ab - c-^2), so c+^2 and c-^2 are the
    roots of x^2 - Q x + I3^2 with Q = (a^2 b^2 + I3^2 - I4) / (ab).  The
    larger root gives c+ >= 0 and c- takes the sign of I3.  Accurate to
    about sqrt(machine epsilon) when c+ and |c-| nearly coincide, so it
    serves as an independent cross-check of two_mode_standard_form.
    """
    if state.n_modes != 2:
        raise InvalidArgument("standard form needs a two-mode state")
    if not is_physical(state, tol):
        raise InvalidState("input is not a physical two-mode state")
    inv = symplectic_invariants(state)
    a = np.sqrt(max(inv.I1, 1.0))
    b = np.sqrt(max(inv.I2, 1.0))
    q = (a * a * b * b + inv.I3**2 - inv.I4) / (a * b)
    disc = np.sqrt(max(q * q - 4 * inv.I3**2, 0.0))
    big = max(0.5 * (q + disc), 0.0)
    cp = np.sqrt(big)
    # product form avoids cancellation in the smaller root
    cm = inv.I3 / cp if cp > 0 else 0.0
    if abs(cm) > cp:
        cm = np.copysign(cp, cm)
    return TwoModeStandardForm(float(a), float(b), float(cp), float(cm))


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Symplectic matrix from a random quadratic Hamiltonian.

    Real and imaginary parts of A and B are standard normal, A is made
    Hermitian and B symmetric, and both are scaled by scale / sqrt(N).
    """
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = 0.5 * (A + A.conj().T) * scale / np.sqrt(n)
    B = 0.5 * (B + B.T) * scale / np.sqrt(n)
    return symplectic_from_hamiltonian(QuadraticHamiltonian(A, B))


def random_state(
    n: int,
    purity_class: str = "mixed",
    seed: int | np.random.Generator | None = None,
    displaced: bool = False,
    mean_noise: float = 1.0,
    return_nu: bool = False,
):
    """Random physical state S (direct sum of nu_k I) S^T.

    Args:
        n: Number of modes.
        purity_class: "pure" (all nu = 1) or "mixed" (nu = 1 + Exp(mean_noise)).
        seed: Integer seed or an existing generator.
        displaced: Add standard normal first moments.
        mean_noise: Mean of the exponential excess noise for mixed draws.
        return_nu: Also return the drawn symplectic eigenvalues.

    Returns:
        The state, or (state, nu) when return_nu is set.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"mode count must be a positive integer, got {n!r}")
    if purity_class not in ("pure", "mixed"):
        raise InvalidArgument(f"purity_class must be 'pure' or 'mixed', got {purity_class!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    nu = np.ones(n) if purity_class == "pure" else 1.0 + rng.exponential(mean_noise, n)
    S = random_symplectic(n, rng)
    sigma = S @ np.diag(np.repeat(nu, 2)) @ S.T
    d = rng.normal(size=2 * n) if displaced else np.zeros(2 * n)
    state = GaussianState(d, sigma)
    return (state, np.sort(nu)[::-1]) if return_nu else state


def spectrum(state: GaussianState) -> np.ndarray:
    """Symplectic spectrum of the state's covariance matrix (descending)."""
    return symplectic_spectrum(state.sigma)
