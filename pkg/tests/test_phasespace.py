import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gaussiancv.errors import InvalidArgument, NumericError
from gaussiancv.ops import displace
from gaussiancv.phasespace import (
    Grid2D,
    characteristic,
    grid_csv,
    marginal,
    marginal_density,
    quadrature_checks,
    wigner,
    wigner_from_characteristic,
    wigner_grid,
)
from gaussiancv.states import GaussianState, random_state, squeezed, thermal, two_mode_squeezed, vacuum


class TestCharacteristic:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_origin(self, n):
        s = random_state(n, "mixed", n, displaced=True)
        assert characteristic(s, np.zeros(2 * n)) == pytest.approx(1.0)

    def test_vacuum_orders(self, rng):
        xi = rng.normal(size=(10, 2))
        norm2 = (xi**2).sum(axis=1)
        sym = characteristic(vacuum(1), xi, 0.0)
        assert_allclose(sym, np.exp(-norm2 / 4))
        assert np.max(np.abs(sym.imag)) == 0
        assert_allclose(characteristic(vacuum(1), xi, -1.0), np.exp(-3 * norm2 / 4))
        assert_allclose(characteristic(vacuum(1), xi, 1.0), np.exp(norm2 / 4))

    def test_bad_order(self):
        with pytest.raises(InvalidArgument):
            characteristic(vacuum(1), [0.0, 0.0], 1.5)

    @given(st.integers(0, 2**32 - 1), st.floats(-1, 0))
    def test_bounded_for_nonpositive_orders(self, sd, s):
        r = np.random.default_rng(sd)
        state = random_state(2, "mixed", r, displaced=True)
        xi = 3 * r.normal(size=(20, 4))
        assert np.all(np.abs(characteristic(state, xi, s)) <= 1 + 1e-12)

    def test_displacement_phase(self):
        d = np.array([0.7, -0.2])
        s = displace(vacuum(1), d)
        xi = np.array([0.3, 1.1])
        om = np.array([[0.0, 1.0], [-1.0, 0.0]])
        expected = np.exp(-xi @ xi / 4 - 1j * (om @ d) @ xi)
        assert characteristic(s, xi) == pytest.approx(expected)


class TestWigner:
    def test_vacuum(self):
        assert wigner(vacuum(1), [0.0, 0.0]) == pytest.approx(1 / np.pi)
        q, p = 0.8, -1.3
        assert wigner(vacuum(1), [q, p]) == pytest.approx(np.exp(-q * q - p * p) / np.pi)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_peak(self, n):
        s = random_state(n, "mixed", 10 + n, displaced=True)
        assert wigner(s, s.d) == pytest.approx(np.pi**-n / np.sqrt(np.linalg.det(s.sigma)))

    @given(st.integers(0, 2**32 - 1))
    def test_nonnegative_and_translation(self, sd):
        r = np.random.default_rng(sd)
        s = random_state(2, "mixed", r)
        X = 2 * r.normal(size=(30, 4))
        delta = r.normal(size=4)
        assert np.all(wigner(s, X) >= 0)
        assert_allclose(wigner(displace(s, delta), X), wigner(s, X - delta), rtol=1e-12)

    @pytest.mark.parametrize(
        "state",
        [vacuum(1), thermal(0.7), squeezed(0.4 + 0.3j, 0.6, 1.1), random_state(1, "mixed", 3, displaced=True)],
    )
    def test_fourier_consistency(self, state, rng):
        X = state.d + rng.normal(size=(15, 2))
        assert np.max(np.abs(wigner_from_characteristic(state, X) - wigner(state, X))) <= 1e-3

    def test_singular(self):
        bad = GaussianState(np.zeros(2), np.diag([1.0, 1e-16]))
        with pytest.raises(NumericError):
            wigner(bad, [0.0, 0.0])

    def test_shape_checks(self):
        with pytest.raises(InvalidArgument):
            wigner(vacuum(2), [0.0, 0.0])
        with pytest.raises(InvalidArgument):
            wigner(vacuum(1), [np.nan, 0.0])


class TestGrid:
    def test_vacuum_peak_at_center(self):
        g = Grid2D.around(vacuum(1), points=101)
        w = wigner_grid(vacuum(1), g)
        assert np.unravel_index(np.argmax(w), w.shape) == (50, 50)
        assert w.max() == pytest.approx(1 / np.pi)

    def test_squeezed_width_ratio(self):
        s = squeezed(0, 1.0, 0.0)
        g = Grid2D(0, (-40, 40), (-2, 2), (4001, 4001))
        w = wigner_grid(s, g)
        qs, ps = g.axes()
        # variance along each axis of the central cross-sections
        wq, wp = w[:, 2000], w[2000, :]
        var_q = (wq * qs**2).sum() / wq.sum()
        var_p = (wp * ps**2).sum() / wp.sum()
        assert np.sqrt(var_q / var_p) == pytest.approx(np.e**2, rel=1e-6)
        assert var_q / var_p == pytest.approx(s.sigma[0, 0] / s.sigma[1, 1], rel=1e-6)

    def test_displaced_peak(self):
        s = displace(vacuum(1), [1.0, -0.5])
        g = Grid2D(0, (-3, 3), (-3, 3), (61, 61))
        w = wigner_grid(s, g)
        qs, ps = g.axes()
        i, j = np.unravel_index(np.argmax(w), w.shape)
        assert (qs[i], ps[j]) == pytest.approx((1.0, -0.5))

    def test_slice_of_two_modes_uses_fixed(self):
        s = two_mode_squeezed(0.5)
        g = Grid2D(1, (-1, 1), (-1, 1), (3, 3), fixed=(0.5, 0.2, 0.0, 0.0))
        w = wigner_grid(s, g)
        assert w[2, 0] == pytest.approx(wigner(s, [0.5, 0.2, 1.0, -1.0]))

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"q_range": (1, -1), "p_range": (-1, 1)},
            {"q_range": (-1, 1), "p_range": (0, 0)},
            {"q_range": (-1, 1), "p_range": (-1, 1), "num": (1, 5)},
        ],
    )
    def test_invalid_grids(self, kwargs):
        with pytest.raises(InvalidArgument):
            Grid2D(0, **kwargs)

    def test_csv(self):
        text = grid_csv(vacuum(1), Grid2D(0, (-1, 1), (-1, 1), (2, 3)))
        lines = text.strip().split("\n")
        assert lines[0] == "q,p,w"
        assert len(lines) == 7
        q, p, w = map(float, lines[2].split(","))
        assert (q, p) == (-1.0, 0.0)
        assert w == pytest.approx(np.exp(-1) / np.pi, rel=1e-15)


class TestMarginal:
    def test_vacuum(self):
        assert marginal(vacuum(1), 0) == (0.0, 0.5)
        assert marginal(vacuum(1), 1) == (0.0, 0.5)

    def test_vacuum_density_is_ground_state(self):
        q = np.linspace(-4, 4, 41)
        assert_allclose(marginal_density(vacuum(1), 0, q), np.exp(-(q**2)) / np.sqrt(np.pi))

    def test_thermal(self):
        assert marginal(thermal(1.5), 0) == (0.0, pytest.approx(2.0))

    def test_wigner_integrates_to_marginal(self):
        s = squeezed(0.2 - 0.4j, 0.5, 0.8)
        p = np.linspace(-12, 12, 4001)
        for q in (-1.0, 0.3, 1.7):
            w = wigner(s, np.column_stack([np.full_like(p, q), p]))
            assert w.sum() * (p[1] - p[0]) == pytest.approx(marginal_density(s, 0, q), rel=1e-9)

    def test_range(self):
        with pytest.raises(InvalidArgument):
            marginal(vacuum(1), 2)


class TestQuadratureChecks:
    def test_vacuum(self):
        rep = quadrature_checks(vacuum(1))
        assert rep.norm == pytest.approx(1.0, abs=1e-3)
        assert rep.purity_integral == pytest.approx(1.0, abs=1e-3)
        assert rep.shannon_H == pytest.approx(1 + np.log(np.pi), abs=1e-3)
        assert rep.warning is None

    def test_thermal(self):
        rep = quadrature_checks(thermal(1.0))
        assert rep.purity_integral == pytest.approx(1 / 3, abs=1e-3)
        assert rep.shannon_H == pytest.approx(np.log(3) + 1 + np.log(np.pi), abs=1e-3)

    def test_two_modes(self):
        rep = quadrature_checks(two_mode_squeezed(0.3))
        assert rep.norm == pytest.approx(1.0, abs=1e-3)
        assert rep.purity_integral == pytest.approx(rep.ref_purity, abs=1e-3)
        assert rep.shannon_H == pytest.approx(rep.ref_shannon, abs=1e-3)

    def test_coarse_grid_warns(self):
        with pytest.warns(RuntimeWarning):
            rep = quadrature_checks(vacuum(1), points=5, width=0.5)
        assert rep.warning is not None

    def test_mode_limit(self):
        with pytest.raises(InvalidArgument):
            quadrature_checks(vacuum(3))
