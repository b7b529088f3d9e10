import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onesided.errors import DomainError, GridMismatchError
from onesided.grid import (ExponentPair, SampledFunction, grid_nodes,
                           integrate, lp_weighted_norm, resample)


def const(c, lo=0.0, hi=1.0, n=101):
    return SampledFunction(lo, hi, n, np.full(n, c, dtype=complex))


class TestSampledFunction:
    def test_invariants(self):
        with pytest.raises(DomainError):
            SampledFunction(1.0, 0.0, 11, np.zeros(11))
        with pytest.raises(DomainError):
            SampledFunction(0.0, 1.0, 1, np.zeros(1))
        with pytest.raises(DomainError):
            SampledFunction(0.0, 1.0, 11, np.zeros(10))
        with pytest.raises(DomainError):
            SampledFunction(0.0, 1.0, 3, np.array([0.0, np.inf, 1.0]))

    def test_spacing(self):
        f = const(1.0, 0.0, 2.0, 5)
        assert f.spacing == 0.5

    def test_nodes_hit_endpoints(self):
        f = const(0.0, -3.0, 7.0, 11)
        x = f.nodes()
        assert x[0] == -3.0 and x[-1] == 7.0

    def test_nodes_mirror_symmetric(self):
        # reflected-window nodes are exact negations, any window
        for lo, hi, n in ((-8.0, 8.0, 4096), (-1.3, 2.7, 257), (0.1, 9.7, 100)):
            x = grid_nodes(lo, hi, n)
            xr = grid_nodes(-hi, -lo, n)
            assert np.array_equal(xr, -x[::-1])

    def test_reflection_involution(self):
        rng = np.random.default_rng(0)
        f = SampledFunction(-2.0, 5.0, 33, rng.normal(size=33) + 0j)
        g = f.reflected().reflected()
        assert g.x_lo == f.x_lo and g.x_hi == f.x_hi
        assert np.array_equal(g.values, f.values)


class TestExponentPair:
    def test_conjugates(self):
        assert ExponentPair(2.0).p_conj == 2.0
        assert abs(ExponentPair(1.5).p_conj - 3.0) < 1e-12
        assert abs(ExponentPair(3.0).p_conj - 1.5) < 1e-12

    @given(st.floats(min_value=1.001, max_value=50.0))
    def test_holder_identity(self, p):
        pair = ExponentPair(p)
        assert abs(1.0 / pair.p + 1.0 / pair.p_conj - 1.0) <= 1e-12

    def test_rejects_endpoint(self):
        with pytest.raises(DomainError):
            ExponentPair(1.0)


class TestIntegrate:
    def test_constant(self):
        assert integrate(const(1.0), 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_linear_exact(self):
        f = SampledFunction.from_callable(lambda x: x, 0.0, 2.0, 201)
        assert integrate(f, 0.0, 2.0).real == pytest.approx(2.0, abs=1e-13)

    def test_quadratic_derived(self):
        # composite trapezoid error for x^2 on [0,1] is spacing^2/6
        f = SampledFunction.from_callable(lambda x: x ** 2, 0.0, 1.0, 1001)
        assert integrate(f, 0.0, 1.0).real == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_endpoint_errors(self):
        f = const(1.0)
        with pytest.raises(DomainError):
            integrate(f, -0.5, 1.0)
        with pytest.raises(DomainError):
            integrate(f, 0.8, 0.2)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(min_value=-5, max_value=5), min_size=8, max_size=64),
           st.data())
    def test_additivity(self, vals, data):
        # endpoint snapping makes the cell partition exact; only the
        # final float addition rounds, so equality holds to ~1 ulp
        n = len(vals)
        f = SampledFunction(0.0, 1.0, n, np.asarray(vals) + 0j)
        x = f.nodes()
        i = data.draw(st.integers(0, n - 1))
        j = data.draw(st.integers(i, n - 1))
        lhs = integrate(f, x[0], x[i]) + integrate(f, x[i], x[j])
        rhs = integrate(f, x[0], x[j])
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


class TestWeightedNorm:
    def test_unit_mass(self):
        assert lp_weighted_norm(const(1.0), const(1.0), 2.0) == pytest.approx(1.0, abs=1e-14)

    def test_homogeneity(self):
        w = SampledFunction.from_callable(lambda x: 1.0 + x ** 2, 0.0, 1.0, 101)
        f = const(1.0, n=101)
        for c in (3.7, -2.0, 0.25):
            got = lp_weighted_norm(f.with_values(c * f.values), w, 1.5)
            assert got == pytest.approx(abs(c) * lp_weighted_norm(f, w, 1.5), rel=1e-13)

    def test_linear_l2(self):
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, 2001)
        w = const(1.0, n=2001)
        assert lp_weighted_norm(f, w, 2.0) == pytest.approx(3.0 ** -0.5, abs=1e-6)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            lp_weighted_norm(const(1.0, n=11), const(1.0, n=12), 2.0)

    def test_negative_weight(self):
        w = const(1.0, n=11).with_values(np.linspace(-1, 1, 11) + 0j)
        with pytest.raises(DomainError):
            lp_weighted_norm(const(1.0, n=11), w, 2.0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 31), st.sampled_from([1.5, 2.0, 3.0]))
    def test_triangle_inequality(self, seed, p):
        rng = np.random.default_rng(seed)
        n = 65
        f = SampledFunction(0.0, 1.0, n, rng.normal(size=n) + 1j * rng.normal(size=n))
        g = f.with_values(rng.normal(size=n) + 1j * rng.normal(size=n))
        w = f.with_values(rng.uniform(0.0, 2.0, size=n) + 0j)
        lhs = lp_weighted_norm(f.with_values(f.values + g.values), w, p)
        rhs = lp_weighted_norm(f, w, p) + lp_weighted_norm(g, w, p)
        assert lhs <= rhs + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 31), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
    def test_monotone_in_magnitude(self, seed, p):
        rng = np.random.default_rng(seed)
        n = 65
        base = rng.normal(size=n)
        bigger = base * rng.uniform(1.0, 2.0, size=n)
        w = SampledFunction(0.0, 1.0, n, rng.uniform(0.0, 2.0, size=n) + 0j)
        small = SampledFunction(0.0, 1.0, n, base + 0j)
        large = SampledFunction(0.0, 1.0, n, bigger + 0j)
        assert (lp_weighted_norm(small, w, p)
                <= lp_weighted_norm(large, w, p) + 1e-12)


class TestResample:
    def test_identity(self):
        rng = np.random.default_rng(1)
        f = SampledFunction(0.0, 1.0, 33, rng.normal(size=33) + 0j)
        g = resample(f, 0.0, 1.0, 33)
        assert np.array_equal(g.values, f.values)

    def test_linear_reproduced(self):
        f = SampledFunction.from_callable(lambda x: 2.0 * x - 1.0, 0.0, 1.0, 41)
        g = resample(f, 0.2, 0.8, 29)
        assert np.max(np.abs(g.values.real - (2.0 * g.nodes() - 1.0))) < 1e-12

    def test_quadratic_error_bound(self):
        # linear interpolation error for x^2 is at most spacing^2 / 4
        f = SampledFunction.from_callable(lambda x: x ** 2, 0.0, 1.0, 101)
        g = resample(f, 0.0, 1.0, 201)
        err = np.max(np.abs(g.values.real - g.nodes() ** 2))
        assert err <= f.spacing ** 2

    def test_window_escape(self):
        with pytest.raises(DomainError):
            resample(const(1.0), -0.1, 1.0, 11)
