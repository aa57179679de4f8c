import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import nlslab as nl
from nlslab import Multiplier, apply_multiplier, cutoff_phi, symbol_m


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    return nl.from_frequency(grid, vals)


class TestCutoffPhi:
    def test_branch_values(self):
        assert cutoff_phi(0.7) == 1.0
        assert cutoff_phi(2.5) == 0.0
        assert 0.0 < cutoff_phi(1.5) < 1.0
        assert cutoff_phi(1.5) >= cutoff_phi(1.6)

    @given(st.floats(min_value=0.0, max_value=50.0))
    def test_range(self, r):
        v = cutoff_phi(r)
        assert 0.0 <= v <= 1.0

    @given(st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_nonincreasing(self, r, dr):
        assert cutoff_phi(r) >= cutoff_phi(r + dr) - 1e-15

    def test_smooth_across_junctions(self):
        # flat derivatives at the junctions: finite differences stay tiny
        h = 1e-4
        assert abs(cutoff_phi(1.0 + h) - 1.0) < 1e-8
        assert abs(cutoff_phi(2.0 - h)) < 1e-8


class TestSymbolM:
    def test_low_branch(self):
        assert symbol_m(8.0, 16.0, 0.75) == 1.0

    def test_high_branch_arithmetic(self):
        assert symbol_m(64.0, 16.0, 0.75) == pytest.approx(4.0 ** -0.25, rel=1e-13)

    def test_transition_bracket(self):
        v = symbol_m(24.0, 16.0, 0.75)
        assert 2.0 ** -0.25 <= v <= 1.0

    def test_continuous_at_junctions(self):
        for xi in (16.0 * (1 + 1e-9), 32.0 * (1 - 1e-9)):
            lo = symbol_m(xi * (1 - 1e-9), 16.0, 0.75)
            hi = symbol_m(xi * (1 + 1e-9), 16.0, 0.75)
            assert abs(lo - hi) < 1e-6

    @given(
        st.floats(min_value=0.0, max_value=1e4),
        st.floats(min_value=0.51, max_value=0.99),
    )
    def test_range(self, xi, s):
        v = symbol_m(xi, 16.0, s)
        assert 0.0 < v <= 1.0

    @given(
        st.floats(min_value=0.0, max_value=1e3),
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.51, max_value=0.99),
    )
    def test_monotone_nonincreasing(self, xi, dxi, s):
        assert symbol_m(xi, 8.0, s) >= symbol_m(xi + dxi, 8.0, s) - 1e-14

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            symbol_m(1.0, -2.0, 0.75)
        with pytest.raises(ValueError):
            symbol_m(1.0, 2.0, 0.4)


class TestApplyMultiplier:
    def test_taper_above_lattice_corner_is_identity(self, grid2d):
        f = random_field(grid2d)
        out = apply_multiplier(f, Multiplier.i_operator(grid2d.xi_max, 0.75))
        assert np.max(np.abs(out.values - f.values)) < 1e-14

    def test_taper_radially_symmetric(self, grid2d):
        sym = Multiplier.i_operator(4.0, 0.75).symbol(grid2d)
        # transpose swaps the two axes; |xi| is unchanged
        assert np.allclose(sym, sym.T, atol=0)

    def test_high_low_sum_reconstructs(self, grid2d):
        f = random_field(grid2d, seed=3)
        low = apply_multiplier(f, Multiplier.cutoff_low(5.0))
        high = apply_multiplier(f, Multiplier.cutoff_high(5.0))
        back = low + high
        assert np.max(np.abs(back.values - f.values)) <= 1e-15 * np.max(np.abs(f.values))

    def test_high_low_symbols_sum_to_one(self, grid2d):
        lo = Multiplier.cutoff_low(5.0).symbol(grid2d)
        hi = Multiplier.cutoff_high(5.0).symbol(grid2d)
        assert np.array_equal(lo + hi, np.ones(grid2d.shape))

    def test_free_propagator_zero_is_identity(self, grid2d):
        f = random_field(grid2d, seed=4)
        out = apply_multiplier(f, Multiplier.free_propagator(0.0))
        assert np.array_equal(out.values, f.values)

    def test_preserves_caller_repr(self, grid2d):
        f = nl.as_physical(random_field(grid2d, seed=5))
        out = apply_multiplier(f, Multiplier.cutoff_low(3.0))
        assert out.repr is nl.Repr.PHYSICAL

    def test_multipliers_commute(self, grid2d):
        f = random_field(grid2d, seed=6)
        a = Multiplier.i_operator(4.0, 0.8)
        b = Multiplier.frac_deriv(1.0)
        ab = apply_multiplier(apply_multiplier(f, a), b)
        ba = apply_multiplier(apply_multiplier(f, b), a)
        scale = np.max(np.abs(ab.values))
        assert np.max(np.abs(ab.values - ba.values)) < 1e-12 * max(scale, 1e-300)


class TestLpBlocks:
    def test_telescoping_reconstruction(self, grid2d):
        f = random_field(grid2d, seed=7)
        n0 = 1.0
        total = apply_multiplier(f, Multiplier.cutoff_low(n0))
        N = n0
        while N <= grid2d.xi_max:
            total = total + nl.lp_block(f, N)
            N *= 2
        assert np.max(np.abs(total.values - f.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_block_weight_at_three_halves(self, grid1d):
        # mode at |xi| = 3N passes the block with weight phi(1.5) - phi(3)
        N = 4.0
        f = nl.plane_wave(grid1d, (12,))
        out = nl.lp_block(f, N)
        expected = cutoff_phi(1.5) - cutoff_phi(3.0)
        got = nl.to_frequency(nl.as_physical(out)).values[12]
        ref = nl.to_frequency(nl.as_physical(f)).values[12]
        assert abs(got - expected * ref) < 1e-12 * abs(ref)

    def test_zero_field(self, grid2d):
        out = nl.lp_block(nl.zeros(grid2d), 4.0)
        assert np.max(np.abs(out.values)) == 0.0


class TestFracDerivative:
    def test_order_zero_identity(self, grid2d):
        f = random_field(grid2d, seed=8)
        out = nl.frac_derivative(f, 0.0)
        assert np.array_equal(out.values, f.values)

    def test_plane_wave_order_one(self, grid2d):
        f = nl.plane_wave(grid2d, (3, 4))
        out = nl.as_physical(nl.frac_derivative(f, 1.0))
        expected = 5.0 * nl.as_physical(f).values
        assert np.max(np.abs(out.values - expected)) < 1e-12 * 5.0

    def test_order_two_composes(self, grid2d):
        f = random_field(grid2d, seed=9)
        once = nl.frac_derivative(nl.frac_derivative(f, 1.0), 1.0)
        twice = nl.frac_derivative(f, 2.0)
        scale = np.max(np.abs(twice.values))
        assert np.max(np.abs(once.values - twice.values)) < 1e-12 * scale

    def test_gradient_axis_symbol(self, grid2d):
        f = nl.plane_wave(grid2d, (2, -5))
        gx, gy = nl.gradient(f)
        fx = nl.as_physical(gx).values
        fy = nl.as_physical(gy).values
        base = nl.as_physical(f).values
        assert np.max(np.abs(fx - 2j * base)) < 1e-12 * 5
        assert np.max(np.abs(fy - (-5j) * base)) < 1e-12 * 5
