"""Randomized property suites shared by the command line and the test suite.

Each suite draws states from a seeded generator, evaluates a property, and
reports the worst margin together with the first counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import measures as M
from .errors import InvalidArgument
from .states import GaussianState, random_state, three_mode_pure, two_mode_standard_form

DEFAULT_SEED = 20140101
SSA_TOL = 1e-9
MONOGAMY_TOL = 1e-8
AGREE_TOL = 1e-9
EQUALITY_TOL = 1e-7
CLOSED_FORM_TOL = 1e-7


@dataclass
class SuiteResult:
    """Outcome of a randomized suite.

    Attributes:
        name: Suite name.
        draws: Number of random draws evaluated.
        seed: Seed of the generator.
        worst: Worst margin; negative means a violation.
        counterexample: First failing state, if any.
        detail: Extra diagnostics (branch counts and similar).
    """

    name: str
    draws: int
    seed: int
    worst: float
    counterexample: GaussianState | None = None
    detail: dict | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.draws} draws, seed {self.seed}, worst margin {self.worst:.3e}"


def cyclic_groupings(n: int = 3) -> list[list[list[int]]]:
    """The n cyclic shifts of single-mode parties (A, B, C) for n = 3."""
    return [[[k % n], [(k + 1) % n], [(k + 2) % n]] for k in range(n)]


def random_triangle_triple(rng: np.random.Generator, high: float = 5.0) -> tuple[float, float, float]:
    """Local parameters of a pure three-mode state inside the triangle region.

    a2 and a3 are uniform on [1, high] and a1 is uniform on its allowed
    interval [|a2 - a3| + 1, a2 + a3 - 1], which makes every triangle
    condition hold.
    """
    a2, a3 = rng.uniform(1.0, high, 2)
    a1 = rng.uniform(abs(a2 - a3) + 1, a2 + a3 - 1)
    return float(a1), float(a2), float(a3)


def ssa_suite(draws: int = 1000, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Strong subadditivity of S_2 on random three-mode mixed states."""
    rng = np.random.default_rng(seed)
    worst, bad = np.inf, None
    for _ in range(draws):
        st = random_state(3, "mixed", rng)
        for groups in cyclic_groupings(3):
            v = M.check_strong_subadditivity(st, groups)
            worst = min(worst, v)
            if v < -SSA_TOL and bad is None:
                bad = st
    return SuiteResult("ssa", draws, seed, float(worst), bad)


def monogamy_suite(draws: int = 1000, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Residual entanglement of pure three-mode states is non-negative.

    In the fully inseparable region the three focus choices must also agree
    with each other and with the symmetric closed form.
    """
    rng = np.random.default_rng(seed)
    worst, bad, inseparable = np.inf, None, 0
    for _ in range(draws):
        a = random_triangle_triple(rng)
        res = [M.residual_tripartite_E2(a, f) for f in range(3)]
        margin = min(res) + MONOGAMY_TOL
        if M.fully_inseparable(*a):
            inseparable += 1
            ref = M.residual_symmetric(*a)
            spread = max(abs(r - ref) for r in res)
            margin = min(margin, AGREE_TOL - spread)
        worst = min(worst, margin)
        if margin < 0 and bad is None:
            bad = three_mode_pure(*a)
    return SuiteResult("monogamy", draws, seed, float(worst), bad, {"fully_inseparable": inseparable})


def pure_equality_values(state: GaussianState) -> dict:
    """I_2/2, both J_2, both D_2 and E_2 of a pure two-mode state."""
    return {
        "I2/2": 0.5 * M.mutual_information_renyi2(state, [0], [1]),
        "J2(A|B)": M.classical_correlations_J2(state, "A|B").value,
        "J2(B|A)": M.classical_correlations_J2(state, "B|A").value,
        "D2(A|B)": M.discord_D2(state, "A|B").value,
        "D2(B|A)": M.discord_D2(state, "B|A").value,
        "E2": M.entanglement_E2_two_mode(state).value,
    }


def pure_equalities_suite(draws: int = 500, seed: int = DEFAULT_SEED) -> SuiteResult:
    """All Renyi-2 correlation measures coincide on pure two-mode states."""
    rng = np.random.default_rng(seed)
    worst, bad = np.inf, None
    for _ in range(draws):
        st = random_state(2, "pure", rng)
        vals = list(pure_equality_values(st).values())
        margin = EQUALITY_TOL - (max(vals) - min(vals))
        worst = min(worst, margin)
        if margin < 0 and bad is None:
            bad = st
    return SuiteResult("pure-equalities", draws, seed, float(worst), bad)


def dense_inf_conditional_det(sf) -> float:
    """Brute-force minimum of the conditional determinant over pure seeds.

    A log-spaced lambda grid times an angle grid seeds a Nelder-Mead
    polish; the lambda -> 0 and lambda -> infinity limits at the two
    principal angles are included as candidates.
    """
    logs = np.linspace(-20, 20, 401)
    phis = np.linspace(0, np.pi, 61)
    grid = M.conditional_det_printed(np.exp(logs)[:, None], phis[None, :], sf)
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    res = minimize(
        lambda x: float(M.conditional_det_printed(np.exp(x[0]), x[1], sf)),
        [logs[i], phis[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000},
    )
    limits = [M.conditional_det_printed(lam, phi, sf) for lam in (0.0, 1e12) for phi in (0.0, np.pi / 2)]
    return float(min(res.fun, grid.min(), *limits))


def closed_forms_suite(draws: int = 500, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Closed-form J_2 optimum vs dense minimization, and the pure theta scan."""
    rng = np.random.default_rng(seed)
    worst, bad = np.inf, None
    branches: dict[str, int] = {}
    for _ in range(draws):
        st = random_state(2, "mixed", rng, mean_noise=0.5)
        sf = two_mode_standard_form(st)
        val, branch, _ = M.inf_conditional_det(sf)
        branches[branch] = branches.get(branch, 0) + 1
        err = abs(0.5 * np.log(val) - 0.5 * np.log(dense_inf_conditional_det(sf)))
        pure = random_state(2, "pure", rng)
        scan = M.entanglement_E2_printed_scan(pure).value
        ref = 0.5 * np.log(np.linalg.det(pure.block(0, 0)))
        err = max(err, abs(scan - ref))
        margin = CLOSED_FORM_TOL - err
        worst = min(worst, margin)
        if margin < 0 and bad is None:
            bad = st
    return SuiteResult("closed-forms", draws, seed, float(worst), bad, {"branches": branches})


SUITES = {
    "ssa": ssa_suite,
    "monogamy": monogamy_suite,
    "pure-equalities": pure_equalities_suite,
    "closed-forms": closed_forms_suite,
}


def run_suite(name: str, draws: int | None = None, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Run a suite by name with its default draw count unless overridden."""
    if name not in SUITES:
        raise InvalidArgument(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if draws is not None and draws < 1:
        raise InvalidArgument(f"draws must be positive, got {draws}")
    return SUITES[name](seed=seed) if draws is None else SUITES[name](draws=draws, seed=seed)
