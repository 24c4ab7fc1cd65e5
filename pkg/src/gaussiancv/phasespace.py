"""Characteristic and Wigner functions of Gaussian states, plus grid checks.

Phase-space points are real vectors of length 2N in the interleaved
ordering.  The Wigner function is normalized so that it integrates to one
over R^2N; for the vacuum it equals exp(-q^2 - p^2) / pi.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, NumericError
from .states import GaussianState
from .symplectic import symplectic_form

SINGULAR_COND = 1e14
SHANNON_FLOOR = 1e-300
NORM_WARN = 0.05


def _points(state: GaussianState, X) -> tuple[np.ndarray, tuple]:
    X = np.asarray(X, dtype=float)
    dim = 2 * state.n_modes
    if X.shape[-1:] != (dim,):
        raise InvalidArgument(f"phase-space points must have trailing length {dim}, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidArgument("phase-space points must be finite")
    return X.reshape(-1, dim), X.shape[:-1]


def characteristic(state: GaussianState, xi, s: float = 0.0) -> np.ndarray | complex:
    """s-ordered characteristic function chi^s(xi).

    The symmetric function is exp(-xi^T Omega sigma Omega^T xi / 4 - i (Omega d)^T xi)
    and the s-ordered one multiplies it by exp(s |xi|^2 / 2).  s = 1 (normal
    ordering, the P-function's transform) is available only here.

    Args:
        state: Gaussian state.
        xi: Point or array of points with trailing dimension 2N.
        s: Ordering parameter with |s| <= 1.

    Returns:
        Complex value, or an array shaped like xi without its last axis.
    """
    if not abs(s) <= 1:
        raise InvalidArgument(f"ordering parameter must satisfy |s| <= 1, got {s}")
    pts, shape = _points(state, xi)
    om = symplectic_form(state.n_modes)
    quad = om @ state.sigma @ om.T
    expo = -0.25 * np.einsum("ki,ij,kj->k", pts, quad, pts) - 1j * (pts @ (om @ state.d))
    expo = expo + 0.5 * s * np.einsum("ki,ki->k", pts, pts)
    out = np.exp(expo).reshape(shape)
    return complex(out) if out.ndim == 0 else out


def _precision(state: GaussianState) -> tuple[np.ndarray, float]:
    if np.linalg.cond(state.sigma) > SINGULAR_COND:
        raise NumericError("covariance matrix is numerically singular")
    sign, logdet = np.linalg.slogdet(state.sigma)
    if sign <= 0:
        raise NumericError("covariance matrix is not positive definite")
    return np.linalg.inv(state.sigma), logdet


def wigner(state: GaussianState, X) -> np.ndarray | float:
    """Wigner function pi^-N det(sigma)^-1/2 exp(-(X-d)^T sigma^-1 (X-d)).

    Args:
        state: Gaussian state.
        X: Point or array of points with trailing dimension 2N.

    Returns:
        Real value, or an array shaped like X without its last axis.
    """
    pts, shape = _points(state, X)
    inv, logdet = _precision(state)
    y = pts - state.d
    log_w = -state.n_modes * np.log(np.pi) - 0.5 * logdet - np.einsum("ki,ij,kj->k", y, inv, y)
    out = np.exp(log_w).reshape(shape)
    return float(out) if out.ndim == 0 else out


def wigner_from_characteristic(state: GaussianState, X, points: int = 101, width: float = 8.0) -> np.ndarray | float:
    """Single-mode Wigner function by numerically Fourier transforming chi.

    W(X) = (2 pi)^-2N times the integral of chi(k) exp(i k^T Omega X) over R^2N,
    evaluated with a midpoint rule on a points x points grid that spans
    ``width`` standard deviations of chi in every direction.  Kept separate
    from ``wigner`` so the two routes can be compared.
    """
    if state.n_modes != 1:
        raise InvalidArgument("the numerical Fourier route is limited to one mode")
    pts, shape = _points(state, X)
    # chi has covariance 2 (Omega sigma Omega^T)^-1, widest along sigma's smallest eigenvalue
    half = width * np.sqrt(2.0 / np.min(np.linalg.eigvalsh(state.sigma)))
    axis = np.linspace(-half, half, points)
    step = axis[1] - axis[0]
    kq, kp = np.meshgrid(axis, axis, indexing="ij")
    kappa = np.stack([kq.ravel(), kp.ravel()], axis=1)
    chi = characteristic(state, kappa)
    om = symplectic_form(1)
    phase = np.exp(1j * (kappa @ om) @ pts.T)
    vals = (chi @ phase).real * step**2 / (2 * np.pi) ** 2
    out = vals.reshape(shape)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Grid2D:
    """Rectangular sampling grid on the (q_k, p_k) plane of one mode.

    Attributes:
        mode: 0-based mode whose plane is sampled.
        q_range: (q_min, q_max).
        p_range: (p_min, p_max).
        num: Samples per axis, (n_q, n_p), each at least 2.
        fixed: Values of all 2N coordinates; entries of the sampled plane
            are overwritten.  None means the first moments.
    """

    mode: int
    q_range: tuple[float, float]
    p_range: tuple[float, float]
    num: tuple[int, int] = (201, 201)
    fixed: tuple | None = field(default=None)

    def __post_init__(self):
        for name, (lo, hi) in (("q", self.q_range), ("p", self.p_range)):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise InvalidArgument(f"{name} range must be finite and ordered, got ({lo}, {hi})")
        if min(self.num) < 2:
            raise InvalidArgument(f"need at least two samples per axis, got {self.num}")

    @property
    def step(self) -> tuple[float, float]:
        return (
            (self.q_range[1] - self.q_range[0]) / (self.num[0] - 1),
            (self.p_range[1] - self.p_range[0]) / (self.num[1] - 1),
        )

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.q_range, self.num[0]), np.linspace(*self.p_range, self.num[1])

    @classmethod
    def around(cls, state: GaussianState, mode: int = 0, points: int = 201, width: float = 6.0) -> "Grid2D":
        """Square grid centred on the mode's mean, +-width times the largest std."""
        if not 0 <= mode < state.n_modes:
            raise InvalidArgument(f"mode {mode} out of range for {state.n_modes} modes")
        block = state.block(mode, mode)
        half = width * np.sqrt(max(block[0, 0], block[1, 1]) / 2)
        q0, p0 = state.d[2 * mode], state.d[2 * mode + 1]
        return cls(mode, (q0 - half, q0 + half), (p0 - half, p0 + half), (points, points))


def wigner_grid(state: GaussianState, grid: Grid2D) -> np.ndarray:
    """Wigner function sampled on a grid, shape (n_q, n_p), q varying slowest."""
    if not 0 <= grid.mode < state.n_modes:
        raise InvalidArgument(f"grid mode {grid.mode} out of range for {state.n_modes} modes")
    base = np.array(state.d if grid.fixed is None else grid.fixed, dtype=float)
    if base.shape != state.d.shape:
        raise InvalidArgument(f"fixed coordinates must have length {state.d.size}")
    qs, ps = grid.axes()
    X = np.broadcast_to(base, (qs.size, ps.size, base.size)).copy()
    X[:, :, 2 * grid.mode] = qs[:, None]
    X[:, :, 2 * grid.mode + 1] = ps[None, :]
    return wigner(state, X)


def grid_csv(state: GaussianState, grid: Grid2D) -> str:
    """CSV text with header 'q,p,w' and one row-major sample per line."""
    values = wigner_grid(state, grid)
    qs, ps = grid.axes()
    buf = io.StringIO()
    buf.write("q,p,w\n")
    for i, q in enumerate(qs):
        for j, p in enumerate(ps):
            buf.write(f"{q:.17g},{p:.17g},{values[i, j]:.17g}\n")
    return buf.getvalue()


def marginal(state: GaussianState, index: int) -> tuple[float, float]:
    """Mean and variance of quadrature ``index`` (0-based in qpqp order).

    The variance is sigma_jj / 2 because of the doubled convention.
    """
    if not 0 <= index < 2 * state.n_modes:
        raise InvalidArgument(f"quadrature index {index} out of range for {state.n_modes} modes")
    return float(state.d[index]), float(state.sigma[index, index] / 2)


def marginal_density(state: GaussianState, index: int, x) -> np.ndarray | float:
    """Probability density of a quadrature measurement outcome."""
    mean, var = marginal(state, index)
    x = np.asarray(x, dtype=float)
    out = np.exp(-((x - mean) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class QuadratureReport:
    """Grid integrals of W with their analytic references.

    Attributes:
        norm: Integral of W.
        purity_integral: (2 pi)^N times the integral of W^2.
        shannon_H: -integral of W ln W.
        ref_norm, ref_purity, ref_shannon: Analytic values 1, det(sigma)^-1/2
            and S_2 + N(1 + ln pi).
        warning: Diagnostic text when the norm is off by more than 5%.
    """

    norm: float
    purity_integral: float
    shannon_H: float
    ref_norm: float
    ref_purity: float
    ref_shannon: float
    warning: str | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def quadrature_checks(state: GaussianState, points: int | None = None, width: float = 6.0) -> QuadratureReport:
    """Integrate W, W^2 and -W ln W on a truncated grid.

    Every axis spans the mean +- ``width`` standard deviations of the
    largest single-quadrature marginal.  Points with W below 1e-300 add
    nothing to the entropy integral.

    Args:
        state: One- or two-mode state.
        points: Samples per axis; defaults to 201 for one mode and 41 for two.
        width: Half-width of the grid in standard deviations.
    """
    n = state.n_modes
    if n not in (1, 2):
        raise InvalidArgument("grid quadrature is limited to one or two modes")
    points = points or (201 if n == 1 else 41)
    if points < 3:
        raise InvalidArgument("need at least three points per axis")
    half = width * np.sqrt(np.max(np.diag(state.sigma)) / 2)
    axes = [np.linspace(c - half, c + half, points) for c in state.d]
    step = 2 * half / (points - 1)
    cell = step ** (2 * n)
    norm = pur = ent = 0.0
    # slice along the first axis to keep the two-mode grid in memory
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, 2 * n - 1)
    for x0 in axes[0]:
        X = np.column_stack([np.full(rest.shape[0], x0), rest])
        w = wigner(state, X)
        norm += w.sum()
        pur += (w**2).sum()
        pos = w > SHANNON_FLOOR
        ent -= (w[pos] * np.log(w[pos])).sum()
    norm *= cell
    pur *= cell * (2 * np.pi) ** n
    ent *= cell
    logdet = np.linalg.slogdet(state.sigma)[1]
    warning = None
    if abs(norm - 1.0) > NORM_WARN:
        warning = f"grid too coarse or too narrow: norm {norm:.6g} deviates from 1 by more than 5%"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    return QuadratureReport(
        norm=float(norm),
        purity_integral=float(pur),
        shannon_H=float(ent),
        ref_norm=1.0,
        ref_purity=float(np.exp(-0.5 * logdet)),
        ref_shannon=float(0.5 * logdet + n * (1 + np.log(np.pi))),
        warning=warning,
    )
