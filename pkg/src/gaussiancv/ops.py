"""Gaussian operations: gates, their generators, and Gaussian measurements."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, NumericError
from .states import GaussianState, _check_modes, mode_indices
from .symplectic import QuadraticHamiltonian, symplectic_from_hamiltonian

GATES = ("phase", "squeeze", "beamsplitter", "two_mode_squeeze")
ARITY = {"phase": 1, "squeeze": 1, "beamsplitter": 2, "two_mode_squeeze": 2}


def phase_shift(phi: float) -> np.ndarray:
    """Phase-space rotation by phi/2."""
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -s], [s, c]])


def single_mode_squeezer(s: float, theta: float = 0.0) -> np.ndarray:
    """Squeezer S(s, theta); theta = 0 gives diag(e^s, e^-s)."""
    ch, sh = np.cosh(s), np.sinh(s)
    return np.array(
        [
            [ch + np.cos(theta) * sh, np.sin(theta) * sh],
            [np.sin(theta) * sh, ch - np.cos(theta) * sh],
        ]
    )


def beam_splitter(tau: float) -> np.ndarray:
    """Phase-free beam splitter of transmissivity tau on two modes."""
    if not 0.0 <= tau <= 1.0:
        raise InvalidArgument(f"transmissivity must lie in [0, 1], got {tau}")
    t, r = np.sqrt(tau), np.sqrt(1.0 - tau)
    return np.array([[t, 0, r, 0], [0, t, 0, r], [r, 0, -t, 0], [0, r, 0, -t]])


def two_mode_squeezer(r: float) -> np.ndarray:
    """Two-mode squeezer acting on the vacuum to give the EPR-like state."""
    c, s = np.cosh(r), np.sinh(r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def gate_matrix(kind: str, **params) -> np.ndarray:
    """Closed-form symplectic matrix of a named gate.

    Args:
        kind: One of phase(phi), squeeze(s, theta), beamsplitter(tau),
            two_mode_squeeze(r).
        **params: Gate parameters by name.

    Returns:
        2x2 or 4x4 symplectic matrix.
    """
    try:
        if kind == "phase":
            return phase_shift(float(params["phi"]))
        if kind == "squeeze":
            return single_mode_squeezer(float(params["s"]), float(params.get("theta", 0.0)))
        if kind == "beamsplitter":
            return beam_splitter(float(params["tau"]))
        if kind == "two_mode_squeeze":
            return two_mode_squeezer(float(params["r"]))
    except KeyError as exc:
        raise InvalidArgument(f"gate {kind!r} is missing parameter {exc}") from exc
    raise InvalidArgument(f"unknown gate {kind!r}; expected one of {GATES}")


def gate_hamiltonian(kind: str, **params) -> QuadraticHamiltonian:
    """Quadratic generator (A, B) whose exponential is the named gate.

    The beam splitter is the reflection a -> alpha a with
    alpha = [[sqrt(tau), sqrt(1-tau)], [sqrt(1-tau), -sqrt(tau)]]; since
    alpha has eigenvalues +-1, A = (pi/2)(I - alpha) gives exp(-iA) = alpha.
    """
    if kind == "phase":
        return QuadraticHamiltonian([[-params["phi"] / 2]], [[0.0]])
    if kind == "squeeze":
        s, theta = params["s"], params.get("theta", 0.0)
        return QuadraticHamiltonian([[0.0]], [[1j * s * np.exp(1j * theta)]])
    if kind == "beamsplitter":
        tau = params["tau"]
        if not 0.0 <= tau <= 1.0:
            raise InvalidArgument(f"transmissivity must lie in [0, 1], got {tau}")
        t, r = np.sqrt(tau), np.sqrt(1.0 - tau)
        alpha = np.array([[t, r], [r, -t]])
        return QuadraticHamiltonian(0.5 * np.pi * (np.eye(2) - alpha), np.zeros((2, 2)))
    if kind == "two_mode_squeeze":
        r = params["r"]
        return QuadraticHamiltonian(np.zeros((2, 2)), 1j * r * np.array([[0.0, 1.0], [1.0, 0.0]]))
    raise InvalidArgument(f"unknown gate {kind!r}; expected one of {GATES}")


def gate_from_hamiltonian(kind: str, **params) -> np.ndarray:
    """Gate matrix obtained through the generator exponential map."""
    return symplectic_from_hamiltonian(gate_hamiltonian(kind, **params))


def embed(S_local, targets: Sequence[int], n: int) -> np.ndarray:
    """Embed a k-mode symplectic matrix into n modes acting on ``targets``.

    Targets are 0-based and may be non-adjacent or in any order; the local
    mode j acts on global mode targets[j].
    """
    S_local = np.asarray(S_local, dtype=float)
    targets = _check_modes(targets, n)
    if S_local.shape != (2 * len(targets), 2 * len(targets)):
        raise InvalidArgument(f"gate of shape {S_local.shape} does not act on {len(targets)} modes")
    idx = mode_indices(targets)
    S = np.eye(2 * n)
    S[np.ix_(idx, idx)] = S_local
    return S


def apply(state: GaussianState, S) -> GaussianState:
    """Transform d -> S d and sigma -> S sigma S^T."""
    S = np.asarray(S, dtype=float)
    if S.shape != state.sigma.shape:
        raise InvalidArgument(f"symplectic of shape {S.shape} does not match state of {state.n_modes} modes")
    return GaussianState(S @ state.d, S @ state.sigma @ S.T)


def apply_gate(state: GaussianState, kind: str, targets: Sequence[int], **params) -> GaussianState:
    """Apply a named gate to the listed (0-based) modes."""
    if kind not in ARITY:
        raise InvalidArgument(f"unknown gate {kind!r}; expected one of {GATES}")
    if len(targets) != ARITY[kind]:
        raise InvalidArgument(f"gate {kind!r} acts on {ARITY[kind]} mode(s), got targets {list(targets)}")
    return apply(state, embed(gate_matrix(kind, **params), targets, state.n_modes))


def displace(state: GaussianState, delta) -> GaussianState:
    """Shift the first moments by delta; sigma is unchanged."""
    delta = np.asarray(delta, dtype=float).reshape(-1)
    if delta.shape != state.d.shape:
        raise InvalidArgument(f"displacement of length {delta.size} for a {state.n_modes}-mode state")
    return GaussianState(state.d + delta, state.sigma)


@dataclass(frozen=True)
class MeasurementSeed:
    """Seed covariance of a single-mode Gaussian measurement.

    Attributes:
        tag: "pure", "heterodyne", "homodyne" or "general".
        gamma: 2x2 seed covariance; None for the homodyne limit.
        quadrature: "q" or "p" for homodyne seeds.
        params: Parametrization used to build the seed, for reports.
    """

    tag: str
    gamma: np.ndarray | None
    quadrature: str | None = None
    params: tuple = ()

    @property
    def n_modes(self) -> int:
        return 1 if self.gamma is None else self.gamma.shape[0] // 2


def rotation(phi: float) -> np.ndarray:
    """Ordinary 2x2 rotation by phi."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def seed(tag: str, lam: float | None = None, phi: float = 0.0, quadrature: str = "q", gamma=None) -> MeasurementSeed:
    """Build a measurement seed.

    Args:
        tag: "pure" uses R(phi) diag(lam, 1/lam) R(phi)^T; "heterodyne" is the
            vacuum seed; "homodyne" is the lam -> 0 limit on ``quadrature``;
            "general" takes an explicit covariance ``gamma``.
        lam: Squeezing of the pure seed, lam > 0.
        phi: Orientation of the pure seed.
        quadrature: Measured quadrature for homodyne, "q" or "p".
        gamma: Explicit seed covariance for the general tag.
    """
    if tag == "pure":
        if lam is None or not lam > 0:
            raise InvalidArgument(f"pure seeds need lambda > 0, got {lam}")
        R = rotation(phi)
        return MeasurementSeed("pure", R @ np.diag([lam, 1.0 / lam]) @ R.T, params=(float(lam), float(phi)))
    if tag == "heterodyne":
        return MeasurementSeed("heterodyne", np.eye(2))
    if tag == "homodyne":
        if quadrature not in ("q", "p"):
            raise InvalidArgument(f"homodyne quadrature must be 'q' or 'p', got {quadrature!r}")
        return MeasurementSeed("homodyne", None, quadrature=quadrature)
    if tag == "general":
        if gamma is None:
            raise InvalidArgument("general seeds need an explicit covariance")
        g = np.asarray(gamma, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
            raise InvalidArgument(f"seed covariance must be 2k x 2k, got {g.shape}")
        return MeasurementSeed("general", 0.5 * (g + g.T))
    raise InvalidArgument(f"unknown seed tag {tag!r}")


def condition(state: GaussianState, measured: Sequence[int], seeds) -> GaussianState:
    """Conditional state of the unmeasured modes after a Gaussian measurement.

    sigma_A -> sigma_A - eps (sigma_B + Gamma)^-1 eps^T.  Homodyne seeds are
    handled as the exact limit: the conjugate quadrature of a homodyned mode
    has infinite seed variance, so its row and column drop out of the inverse
    and the measured quadrature gets zero seed variance.  First moments of
    the conditional state are set to zero since they depend on the outcome.

    Args:
        state: Global state.
        measured: 0-based measured modes (a proper subset).
        seeds: One MeasurementSeed per measured mode, a single seed applied
            to every measured mode, or one general seed covering them all.

    Returns:
        The conditional state on the remaining modes, in their original order.
    """
    n = state.n_modes
    measured = _check_modes(measured, n)
    if len(measured) == n:
        raise InvalidArgument("cannot condition on a measurement of every mode")
    keep = [k for k in range(n) if k not in measured]
    if isinstance(seeds, MeasurementSeed):
        seeds = [seeds] * (1 if seeds.n_modes == len(measured) and seeds.n_modes > 1 else len(measured))
    seeds = list(seeds)
    nb = 2 * len(measured)
    gamma = np.zeros((nb, nb))
    drop: list[int] = []
    pos = 0
    for sd in seeds:
        if sd.gamma is None:
            drop.append(pos + (1 if sd.quadrature == "q" else 0))
            pos += 2
        else:
            m = sd.gamma.shape[0]
            gamma[pos : pos + m, pos : pos + m] = sd.gamma
            pos += m
    if pos != nb:
        raise InvalidArgument(f"seeds cover {pos // 2} modes but {len(measured)} are measured")
    ia, ib = mode_indices(keep), mode_indices(measured)
    sA = state.sigma[np.ix_(ia, ia)]
    sB = state.sigma[np.ix_(ib, ib)]
    eps = state.sigma[np.ix_(ia, ib)]
    live = [k for k in range(nb) if k not in drop]
    M = (sB + gamma)[np.ix_(live, live)]
    if np.linalg.cond(M) > 1e14:
        raise NumericError("sigma_B + Gamma is singular; use a homodyne seed for the limit")
    E = eps[:, live]
    cond_sigma = sA - E @ np.linalg.solve(M, E.T)
    return GaussianState(np.zeros(len(ia)), 0.5 * (cond_sigma + cond_sigma.T))
