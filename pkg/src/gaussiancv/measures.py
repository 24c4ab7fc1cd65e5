"""Entropies and correlation measures of Gaussian states.

All values are in nats unless a function says otherwise; divide by ln 2 for
bits.  Two-mode measures work on the standard form (a, b, c+, c-), which
every two-mode state reaches by local symplectic operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .errors import InvalidArgument, InvalidState
from .states import (
    GaussianState,
    TwoModeStandardForm,
    _check_modes,
    partial_trace,
    three_mode_coefficients,
    two_mode_standard_form,
)
from .symplectic import symplectic_spectrum

LN2 = np.log(2.0)
PURE_TOL = 1e-6
SEPARABLE_TOL = 1e-9
SCAN_POINTS = 720


@dataclass(frozen=True)
class MeasureResult:
    """Value of a measure with optional optimizer diagnostics.

    Attributes:
        value: Measure in nats.
        optimizer: Optimal parameters found, if the measure involves one.
        branch: Which case of a piecewise formula applied.
    """

    value: float
    optimizer: dict = field(default_factory=dict)
    branch: str | None = None

    @property
    def bits(self) -> float:
        return self.value / LN2

    def __float__(self) -> float:
        return float(self.value)


def _as_standard_form(state) -> TwoModeStandardForm:
    if isinstance(state, TwoModeStandardForm):
        return state
    return two_mode_standard_form(state)


# ---------------------------------------------------------------- entropies


def _log_g_alpha(nu: np.ndarray, alpha: float) -> np.ndarray:
    """ln g_alpha(nu) with g_alpha(x) = 2^a / ((x+1)^a - (x-1)^a), overflow-safe."""
    nu = np.maximum(np.asarray(nu, dtype=float), 1.0)
    ratio = (nu - 1) / (nu + 1)
    return alpha * np.log(2.0) - alpha * np.log(nu + 1) - np.log1p(-(ratio**alpha))


def _h(nu: np.ndarray) -> np.ndarray:
    nu = np.maximum(np.asarray(nu, dtype=float), 1.0)
    return xlogy((nu + 1) / 2, (nu + 1) / 2) - xlogy((nu - 1) / 2, (nu - 1) / 2)


def von_neumann_entropy(state: GaussianState) -> float:
    """Sum of h(nu_k) over the symplectic spectrum."""
    return float(np.sum(_h(symplectic_spectrum(state.sigma))))


def renyi_entropy(state: GaussianState, alpha: float) -> float:
    """Renyi-alpha entropy sum_k ln g_alpha(nu_k) / (1 - alpha).

    alpha = 1 is the von Neumann limit and is evaluated as such.
    """
    if not alpha > 0:
        raise InvalidArgument(f"Renyi order must be positive, got {alpha}")
    if alpha == 1:
        return von_neumann_entropy(state)
    nu = symplectic_spectrum(state.sigma)
    return float(np.sum(_log_g_alpha(nu, alpha)) / (1 - alpha))


def renyi2_entropy(state: GaussianState) -> float:
    """S_2 = (1/2) ln det sigma = -ln(purity)."""
    sign, logdet = np.linalg.slogdet(state.sigma)
    if sign <= 0:
        raise InvalidState("covariance matrix has non-positive determinant")
    return 0.5 * logdet


def _logdet(M: np.ndarray) -> float:
    sign, val = np.linalg.slogdet(M)
    if sign <= 0:
        raise InvalidState("covariance block has non-positive determinant")
    return val


# ---------------------------------------------------------------- EPR / dB


def epr_parameter(state: GaussianState, modes: Sequence[int] = (0, 1)) -> float:
    """Upsilon = (Var(q_A - q_B) + Var(p_A + p_B)) / 2.

    Variances are central moments, Var(u.R) = u^T sigma u / 2 in the doubled
    convention, so first moments do not contribute.
    """
    i, j = _check_modes(modes, state.n_modes)
    u = np.zeros(2 * state.n_modes)
    v = np.zeros(2 * state.n_modes)
    u[2 * i], u[2 * j] = 1.0, -1.0
    v[2 * i + 1], v[2 * j + 1] = 1.0, 1.0
    return float(0.25 * (u @ state.sigma @ u + v @ state.sigma @ v))


def squeezing_db(r: float) -> float:
    """Squeezing r expressed in decibels, 10 log10(e^{2r})."""
    if r < 0:
        raise InvalidArgument(f"squeezing must be non-negative, got {r}")
    return float(20.0 * r / np.log(10.0))


def squeezing_from_db(db: float) -> float:
    """Inverse of squeezing_db."""
    if db < 0:
        raise InvalidArgument(f"decibel value must be non-negative, got {db}")
    return float(db * np.log(10.0) / 20.0)


# ---------------------------------------------------------------- mutual information


def _split(state: GaussianState, modes_a: Sequence[int], modes_b: Sequence[int] | None):
    n = state.n_modes
    modes_a = _check_modes(modes_a, n)
    if modes_b is None:
        modes_b = [k for k in range(n) if k not in modes_a]
    modes_b = _check_modes(modes_b, n)
    if set(modes_a) & set(modes_b):
        raise InvalidArgument(f"partition overlaps: {modes_a} and {modes_b}")
    if not modes_b:
        raise InvalidArgument("second party is empty")
    return modes_a, modes_b


def mutual_information_renyi2(
    state: GaussianState, modes_a: Sequence[int] = (0,), modes_b: Sequence[int] | None = None
) -> float:
    """I_2(A:B) = (1/2) ln(det sigma_A det sigma_B / det sigma_AB).

    Args:
        state: Global state.
        modes_a: 0-based modes of party A.
        modes_b: Modes of party B; defaults to all remaining modes.
    """
    modes_a, modes_b = _split(state, modes_a, modes_b)
    sa = partial_trace(state, modes_a).sigma
    sb = partial_trace(state, modes_b).sigma
    sab = partial_trace(state, list(modes_a) + list(modes_b)).sigma
    return 0.5 * (_logdet(sa) + _logdet(sb) - _logdet(sab))


# ---------------------------------------------------------------- entanglement


def entanglement_E2_pure(state: GaussianState, modes_a: Sequence[int] = (0,)) -> float:
    """Renyi-2 entanglement of a pure state: (1/2) ln det sigma_A."""
    det = float(np.linalg.det(state.sigma))
    if abs(det - 1.0) > PURE_TOL:
        raise InvalidState(f"state is not pure (det sigma = {det}); use the two-mode mixed route")
    modes_a, _ = _split(state, modes_a, None)
    return max(0.0, 0.5 * _logdet(partial_trace(state, modes_a).sigma))


def partial_transpose_spectrum(state: GaussianState, modes_b: Sequence[int] = (1,)) -> np.ndarray:
    """Symplectic spectrum after flipping the momenta of ``modes_b``."""
    modes_b = _check_modes(modes_b, state.n_modes)
    flip = np.ones(2 * state.n_modes)
    flip[[2 * m + 1 for m in modes_b]] = -1.0
    return symplectic_spectrum(state.sigma * np.outer(flip, flip))


def separability_oracle(state: GaussianState) -> bool:
    """PPT test, exact for two single modes: separable iff min nu~ >= 1."""
    if state.n_modes != 2:
        raise InvalidArgument("the PPT oracle is exact only for two-mode states")
    return bool(partial_transpose_spectrum(state)[-1] >= 1.0 - SEPARABLE_TOL)


def _pure_family(sf: TwoModeStandardForm):
    """Boundary of the pure states G + G^-1 lying below sigma.

    In the grouped basis a standard-form sigma is sigma_q (+) sigma_p with
    sigma_q = [[a, c+], [c+, b]] and sigma_p = [[a, c-], [c-, b]].  Pure
    states without q-p correlations have covariance G (+) G^-1, and fit
    below sigma iff sigma_p^-1 <= G <= sigma_q.  Their reduced determinant
    is m(G) = G11 G22 / det G.  Any G where sigma_q - G or G - sigma_p^-1 is
    invertible can be moved to lower m, so the optimum lies on
    G(psi) = sigma_q - w w^T with w = D^(1/2) (cos psi, sin psi) and
    D = sigma_q - sigma_p^-1.  This parametrization also covers singular D
    (one unit symplectic eigenvalue, or a pure state).
    """
    a, b, cp, cm = sf.a, sf.b, sf.c_plus, sf.c_minus
    U = np.array([[a, cp], [cp, b]])
    P = np.array([[a, cm], [cm, b]])
    D = U - np.linalg.inv(P)
    D = 0.5 * (D + D.T)
    w, V = np.linalg.eigh(D)
    root = (V * np.sqrt(np.maximum(w, 0.0))) @ V.T

    def m(psi):
        psi = np.asarray(psi, dtype=float)
        x = root[0, 0] * np.cos(psi) + root[0, 1] * np.sin(psi)
        y = root[1, 0] * np.cos(psi) + root[1, 1] * np.sin(psi)
        g11, g22, g12 = U[0, 0] - x * x, U[1, 1] - y * y, U[0, 1] - x * y
        return g11 * g22 / (g11 * g22 - g12 * g12)

    return m


def _golden(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section search for a minimum of f on [lo, hi]."""
    inv = (np.sqrt(5.0) - 1) / 2
    x1, x2 = hi - inv * (hi - lo), lo + inv * (hi - lo)
    f1, f2 = float(f(x1)), float(f(x2))
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv * (hi - lo)
            f1 = float(f(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv * (hi - lo)
            f2 = float(f(x2))
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _scan_minimize(f, period: float, points: int = SCAN_POINTS) -> tuple[float, float]:
    """Coarse periodic scan followed by golden-section refinement."""
    grid = np.linspace(0.0, period, points, endpoint=False)
    vals = f(grid)
    k = int(np.argmin(vals))
    h = period / points
    x, fx = _golden(f, grid[k] - h, grid[k] + h)
    if fx <= vals[k]:
        return float(x % period), float(fx)
    return float(grid[k]), float(vals[k])


def entanglement_E2_two_mode(state) -> MeasureResult:
    """Gaussian Renyi-2 entanglement of a two-mode state.

    E_2 = (1/2) ln inf m over pure Gaussian states below sigma, searched on
    the one-parameter boundary family described in ``_pure_family`` with a
    720-point scan refined by golden section.  Separable states (PPT) return
    zero.

    Args:
        state: Two-mode GaussianState or a TwoModeStandardForm.

    Returns:
        MeasureResult with the optimal angle under optimizer["theta"].
    """
    sf = _as_standard_form(state)
    if separability_oracle(sf.state()):
        return MeasureResult(0.0, {}, "separable")
    theta, mval = _scan_minimize(_pure_family(sf), np.pi)
    return MeasureResult(max(0.0, 0.5 * np.log(mval)), {"theta": theta}, "entangled")


def m_theta_printed(theta, a: float, b: float, c_plus: float, c_minus: float):
    """Closed-form m_theta from the literature, evaluated in complex arithmetic.

    Kept for comparison only: its minimum over theta matches the Gaussian
    Renyi-2 entanglement on pure states and on symmetric states with
    c+ = -c-, but can fall below the rigorous lower bound
    ln((1 + nu~^2) / (2 nu~)) on other mixed states.  See
    ``entanglement_E2_two_mode`` for the route used by this package.
    """
    theta = np.asarray(theta, dtype=float)
    cp, cm = complex(c_plus), complex(c_minus)
    k = a * b - cm * cm
    rad = (a - b * k) * (b - a * k)
    sq = np.sqrt(rad + 0j)
    num = (cp * k - cm + np.cos(theta) * sq) ** 2
    inner = np.sqrt(1 - (cp * k + cm) ** 2 / rad + 0j)
    lin = 2 * a * b * cm**3 + (a * a + b * b) * cp * cm**2 + ((1 - 2 * b * b) * a * a + b * b) * cm - a * b * (a * a + b * b - 2) * cp
    den = 2 * k * (a * a + b * b + 2 * cp * cm) + np.sin(theta) * (a * a - b * b) * inner - np.cos(theta) * lin / sq
    return 1 + num / den


def entanglement_E2_printed_scan(state) -> MeasureResult:
    """(1/2) ln of the theta-minimum of ``m_theta_printed``.

    Pure inputs make the closed form 0/0; there its analytic limit a^2 is
    returned.  Entries with imaginary parts above 1e-9 are discarded.
    """
    sf = _as_standard_form(state)
    a, b, cp, cm = sf.a, sf.b, sf.c_plus, sf.c_minus
    k = a * b - cm * cm
    rad = (a - b * k) * (b - a * k)
    if abs(rad) <= 1e-10 * max(1.0, a * b) ** 3:
        return MeasureResult(float(np.log(a)), {}, "pure-limit")
    if separability_oracle(sf.state()):
        return MeasureResult(0.0, {}, "separable")

    def f(t):
        val = m_theta_printed(t, a, b, cp, cm)
        return np.where(np.abs(np.imag(val)) <= 1e-9, np.real(val), np.inf)

    theta, mval = _scan_minimize(f, 2 * np.pi)
    return MeasureResult(max(0.0, 0.5 * np.log(mval)), {"theta": theta}, "scan")


def entanglement_E2_lower_bound(state) -> float:
    """ln((1 + nu~^2) / (2 nu~)) from the smallest partially transposed eigenvalue.

    A valid lower bound on the Gaussian Renyi-2 entanglement, exact for
    symmetric states.
    """
    sf = _as_standard_form(state)
    nt = partial_transpose_spectrum(sf.state())[-1]
    if nt >= 1:
        return 0.0
    return float(np.log((1 + nt * nt) / (2 * nt)))


# ---------------------------------------------------------------- J2 and D2


def conditional_det_printed(lam, phi, sf: TwoModeStandardForm):
    """det of the conditional A covariance after a pure seed (lam, phi) on B."""
    a, b, cp, cm = sf.a, sf.b, sf.c_plus, sf.c_minus
    lam = np.asarray(lam, dtype=float)
    num = (
        2 * a * a * (b + lam) * (1 + b * lam)
        - a * (cp * cp + cm * cm) * (2 * b * lam + lam * lam + 1)
        + 2 * cp * cp * cm * cm * lam
        + a * (cp * cp - cm * cm) * (lam * lam - 1) * np.cos(2 * phi)
    )
    return num / (2 * (b + lam) * (1 + b * lam))


def _inf_conditional_det_numeric(sf: TwoModeStandardForm) -> tuple[float, dict]:
    """Minimize over lam at phi in {0, pi/2}, where cos(2 phi) = +-1."""
    best = (sf.a * sf.a, {"lambda": 1.0, "phi": 0.0})
    for phi in (0.0, np.pi / 2):
        for v in (conditional_det_printed(0.0, phi, sf),):
            if v < best[0]:
                best = (float(v), {"lambda": 0.0, "phi": phi})
        res = minimize_scalar(
            lambda t: float(conditional_det_printed(np.exp(t), phi, sf)), bounds=(-40, 40), method="bounded",
            options={"xatol": 1e-12},
        )
        if res.fun < best[0]:
            best = (float(res.fun), {"lambda": float(np.exp(res.x)), "phi": phi})
    return best


def inf_conditional_det(sf: TwoModeStandardForm) -> tuple[float, str, dict]:
    """Closed-form infimum over pure seeds of det of the conditional A block.

    Returns:
        (value, branch, optimizer).  Branch "homodyne" is a(a - c+^2/b),
        reached in the limit lam -> 0; branch "interior" is the general
        expression.  The degenerate b = 1 limit (where the interior formula
        is 0/0) is evaluated by direct minimization.
    """
    a, b, cp, cm = sf.a, sf.b, sf.c_plus, sf.c_minus
    cond = (a * b * b * cm * cm - cp * cp * (a + b * cm * cm)) * (a * b * b * cp * cp - cm * cm * (a + b * cp * cp))
    if cond < 0:
        return a * (a - cp * cp / b), "homodyne", {"lambda": 0.0, "phi": 0.0}
    if b * b - 1 < 1e-6:
        val, opt = _inf_conditional_det_numeric(sf)
        return val, "interior", opt
    x = max((a * (b * b - 1) - b * cm * cm) * (a * (b * b - 1) - b * cp * cp), 0.0)
    val = (2 * abs(cm * cp) * np.sqrt(x) + x + cm * cm * cp * cp) / (b * b - 1) ** 2
    return float(val), "interior", {}


def _directed(state, direction: str) -> TwoModeStandardForm:
    sf = _as_standard_form(state)
    if direction in ("A|B", "AB", "A"):
        return sf
    if direction in ("B|A", "BA", "B"):
        return sf.swapped()
    raise InvalidArgument(f"direction must be 'A|B' or 'B|A', got {direction!r}")


def _with_optimizer(sf: TwoModeStandardForm, branch: str, opt: dict) -> dict:
    if opt or branch != "interior":
        return opt
    _, found = _inf_conditional_det_numeric(sf)
    return found


def classical_correlations_J2(state, direction: str = "A|B") -> MeasureResult:
    """One-way classical correlations J_2 = ln a - (1/2) ln inf det sigma~_A.

    ``direction`` "A|B" measures B and reports the entropy drop of A.
    """
    sf = _directed(state, direction)
    inf, branch, opt = inf_conditional_det(sf)
    value = np.log(sf.a) - 0.5 * np.log(inf)
    return MeasureResult(max(0.0, float(value)), _with_optimizer(sf, branch, opt), branch)


def discord_D2(state, direction: str = "A|B") -> MeasureResult:
    """Renyi-2 discord D_2 = ln b - (1/2) ln det sigma + (1/2) ln inf det sigma~_A."""
    sf = _directed(state, direction)
    inf, branch, opt = inf_conditional_det(sf)
    value = np.log(sf.b) - 0.5 * _logdet(sf.sigma()) + 0.5 * np.log(inf)
    return MeasureResult(max(0.0, float(value)), _with_optimizer(sf, branch, opt), branch)


# ---------------------------------------------------------------- three modes


def three_mode_beta(a1: float, a2: float, a3: float) -> float:
    """The symmetric combination beta of the pure three-mode parameters."""
    x = np.array([a1, a2, a3], dtype=float)
    delta = np.prod([(x[0] + s * x[1] + t * x[2]) ** 2 - 1 for s in (1, -1) for t in (1, -1)])
    pair = x[0] ** 2 * x[1] ** 2 + x[0] ** 2 * x[2] ** 2 + x[1] ** 2 * x[2] ** 2
    return float(2 * np.sum(x**2) + 2 * pair - np.sum(x**4) - np.sqrt(max(delta, 0.0)) - 1)


def three_mode_g(ai: float, aj: float, ak: float) -> tuple[float, str]:
    """g_k for the reduced state of modes i, j; k is the traced-out mode.

    Returns:
        (g_k, branch) with branch "separable", "pure", "middle" or "lower".
    """
    three_mode_coefficients(ai, aj, ak)
    if ak >= np.sqrt(ai * ai + aj * aj - 1):
        return 1.0, "separable"
    if ak * ak - 1 <= 1e-12:
        # mode k is decoupled, so (i, j) is pure with ai = aj and g_k = ai^2
        return ai * aj, "pure"
    dsq, ssq = ai * ai - aj * aj, ai * ai + aj * aj
    alpha_k = np.sqrt((2 * ssq + dsq * dsq + abs(dsq) * np.sqrt(dsq * dsq + 8 * ssq)) / (2 * ssq))
    if ak > alpha_k:
        return three_mode_beta(ai, aj, ak) / (8 * ak * ak), "middle"
    return (dsq / (ak * ak - 1)) ** 2, "lower"


def three_mode_reduced_E2(ai: float, aj: float, ak: float) -> float:
    """(1/2) ln g_k, the entanglement between modes i and j of a pure state."""
    return max(0.0, 0.5 * np.log(three_mode_g(ai, aj, ak)[0]))


def _local_params(state: GaussianState) -> np.ndarray:
    if state.n_modes != 3:
        raise InvalidArgument("residual tripartite entanglement needs three modes")
    det = float(np.linalg.det(state.sigma))
    if abs(det - 1.0) > PURE_TOL:
        raise InvalidState(f"state is not pure (det sigma = {det})")
    return np.sqrt([np.linalg.det(state.block(k, k)) for k in range(3)])


def residual_tripartite_E2(state, focus: int = 0) -> float:
    """Residual tripartite entanglement (1/2) ln(a_i^2 / (g_j g_k)).

    Args:
        state: Pure three-mode GaussianState, or the triple (a1, a2, a3).
        focus: 0-based focus mode i.
    """
    a = np.asarray(state, dtype=float) if not isinstance(state, GaussianState) else _local_params(state)
    if focus not in (0, 1, 2):
        raise InvalidArgument(f"focus must be 0, 1 or 2, got {focus}")
    i = focus
    j, k = [m for m in range(3) if m != i]
    g_k = three_mode_g(a[i], a[j], a[k])[0]  # pair (i, j)
    g_j = three_mode_g(a[i], a[k], a[j])[0]  # pair (i, k)
    return float(0.5 * np.log(a[i] ** 2 / (g_k * g_j)))


def fully_inseparable(a1: float, a2: float, a3: float) -> bool:
    """|a_i - a_j| + 1 < a_k < sqrt(a_i^2 + a_j^2 - 1) for every k."""
    a = (a1, a2, a3)
    for k in range(3):
        i, j = [m for m in range(3) if m != k]
        if not abs(a[i] - a[j]) + 1 < a[k] < np.sqrt(a[i] ** 2 + a[j] ** 2 - 1):
            return False
    return True


def residual_symmetric(a1: float, a2: float, a3: float) -> float:
    """(1/2) ln(64 a1^2 a2^2 a3^2 / beta^2), valid in the fully inseparable region."""
    beta = three_mode_beta(a1, a2, a3)
    return float(0.5 * np.log(64 * (a1 * a2 * a3) ** 2 / beta**2))


# ---------------------------------------------------------------- inequalities


def check_strong_subadditivity(state: GaussianState, groups: Sequence[Sequence[int]]) -> float:
    """(1/2) ln(det sigma_AB det sigma_BC / (det sigma_ABC det sigma_B)), >= 0.

    Args:
        state: Global state.
        groups: Three disjoint 0-based mode lists (A, B, C) covering the state.
    """
    if len(groups) != 3:
        raise InvalidArgument("need exactly three mode groups")
    A, B, C = (list(g) for g in groups)
    allm = A + B + C
    _check_modes(allm, state.n_modes)
    if sorted(allm) != list(range(state.n_modes)) or not (A and B and C):
        raise InvalidArgument(f"groups {groups} must be nonempty and cover all {state.n_modes} modes")

    def ld(modes):
        return _logdet(partial_trace(state, modes).sigma)

    return 0.5 * (ld(A + B) + ld(B + C) - ld(A + B + C) - ld(B))


def check_monogamy(state: GaussianState, focus: int = 0) -> float:
    """E_2(focus : rest) - sum_j E_2(focus : j) for a pure state of single modes.

    The global split uses the pure-state formula and each pair uses the
    two-mode route on the (mixed) reduced state.
    """
    n = state.n_modes
    det = float(np.linalg.det(state.sigma))
    if abs(det - 1.0) > PURE_TOL:
        raise InvalidState("monogamy check is implemented for pure states only")
    _check_modes([focus], n)
    total = entanglement_E2_pure(state, [focus])
    for j in range(n):
        if j != focus:
            total -= entanglement_E2_two_mode(partial_trace(state, [focus, j])).value
    return float(total)
