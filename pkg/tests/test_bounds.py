import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from orthotime import (INFINITE, DiscreteSpectralState, Moments, construct_intelligent, gamma,
                       excluded_interval, mean_gamma, ml_bound, moments, mt_bound, omega_window,
                       orthogonalization_time, quadratic_constraint, saturation_check,
                       shift_energy, union_excluded, verify_quadratic_minorant)
from orthotime.bounds import alpha_sweep
from orthotime.exceptions import (DegenerateSpectrum, MissingLowerBound, ValidationError,
                                  ZeroDispersion)
from orthotime.spectral_state import random_discrete_state

PI = math.pi

means = st.floats(-3, 3)
dispersions = st.floats(0.1, 5)
alphas = st.floats(-10, 10)


def moment_sets():
    return st.builds(Moments.from_mean_dispersion, means, dispersions)


class TestClosedFormBounds:
    def test_mt(self, three_level):
        assert mt_bound(Moments.from_mean_dispersion(0.0, 1.0), 1.0) == PI / 2
        assert mt_bound(moments(three_level), 1.0) == pytest.approx(PI / math.sqrt(2), abs=1e-15)
        assert mt_bound(Moments(5.0, 25.0, 0.0, 5.0), 1.0) is INFINITE

    def test_ml(self, three_level):
        two = DiscreteSpectralState(1.0, [0.0, 1.0], [1, 1])
        assert ml_bound(moments(two), 1.0) == pytest.approx(PI, abs=1e-15)
        assert ml_bound(moments(three_level), 1.0) == pytest.approx(PI / 2, abs=1e-15)
        assert mt_bound(moments(three_level), 1.0) > ml_bound(moments(three_level), 1.0)
        assert ml_bound(Moments(0.0, 0.0, 0.0, 0.0), 1.0) is INFINITE
        with pytest.raises(MissingLowerBound):
            ml_bound(Moments.from_mean_dispersion(0.0, 1.0), 1.0)

    def test_hbar_scaling(self):
        m = Moments.from_mean_dispersion(1.0, 0.5, 0.0)
        assert mt_bound(m, 2.0) == 2 * mt_bound(m, 1.0)
        assert ml_bound(m, 2.0) == 2 * ml_bound(m, 1.0)


class TestGamma:
    def test_values(self):
        assert gamma(0.0, PI / 2) == pytest.approx(0.0, abs=1e-15)
        assert gamma(0.0, 0.0) == pytest.approx(PI - PI**2 / 4, abs=1e-15)
        assert gamma(0.0, 0.0) == pytest.approx(0.6742, abs=1e-4)
        tail = gamma(0.0, PI)
        assert tail == pytest.approx(3 * PI**2 / 4 - PI, abs=1e-14)
        assert tail == pytest.approx(4.2608, abs=1e-3) and tail > 0

    @given(alphas, st.floats(-30, 30))
    def test_shift_only(self, a, x):
        assert gamma(a, x) == pytest.approx(gamma(0.0, x + a), abs=1e-14 * max(1, (x + a) ** 2))

    @given(alphas, st.floats(-30, 30))
    def test_pointwise_nonnegative(self, a, x):
        assert gamma(a, x) >= -1e-12

    def test_zeros_only_at_quarter_turns(self):
        u = np.linspace(-4 * PI, 4 * PI, 400_001)
        g = gamma(0.0, u)
        near = np.minimum(np.abs(u - PI / 2), np.abs(u + PI / 2))
        assert np.all(g[near > 1e-2] > 1e-5)

    def test_vectorized(self):
        assert gamma(0.0, np.zeros(3)).shape == (3,)
        assert isinstance(gamma(0.0, 1.0), float)


class TestVerifyMinorant:
    @pytest.mark.parametrize("alpha", [0.0, 1.3, -2.0])
    def test_argmins(self, alpha):
        chk = verify_quadratic_minorant(alpha)
        assert chk.min_value >= -1e-12
        assert len(chk.argmins) == 2
        np.testing.assert_allclose(chk.argmins, [-alpha - PI / 2, -alpha + PI / 2], atol=1e-6)
        assert chk.tail_certified and chk.tail_margin == pytest.approx(3 * PI**2 / 4 - PI)

    def test_preconditions(self):
        with pytest.raises(ValidationError):
            verify_quadratic_minorant(0.0, grid_span=PI)
        with pytest.raises(ValidationError):
            verify_quadratic_minorant(0.0, grid_points=100)


class TestConstraint:
    def test_alpha_zero(self, intelligent):
        q = quadratic_constraint(moments(intelligent), 0.0, 1.0)
        assert (q.a2, q.a1, q.a0) == pytest.approx((1.0, 0.0, -PI**2 / 4), abs=1e-15)

    def test_mean_zero_kills_linear_term(self, intelligent):
        q = quadratic_constraint(moments(intelligent), PI / 4, 1.0)
        assert q.a1 == 0.0
        assert q.a0 == pytest.approx(PI**2 / 16 - PI**2 / 4, abs=1e-15)

    def test_degenerate(self):
        m = Moments(0.0, 0.0, 0.0, 0.0)
        with pytest.raises(DegenerateSpectrum):
            quadratic_constraint(m, 0.0, 1.0)
        with pytest.raises(DegenerateSpectrum):
            excluded_interval(m, 0.0, 1.0)

    def test_holds_at_measured_t0(self, rng):
        for _ in range(40):
            s = random_discrete_state(rng, int(rng.integers(2, 10)), weights="symmetric")
            r = orthogonalization_time(s)
            if not r.found:
                continue
            m = moments(s)
            for a in rng.uniform(-3 * PI, 3 * PI, 25):
                assert quadratic_constraint(m, a, 1.0)(r.t0) >= -1e-9
                assert mean_gamma(s, r.t0, a) >= -1e-9

    @given(moment_sets(), alphas, st.floats(0, 1))
    def test_negativity_set_is_the_interval(self, m, a, frac):
        iv = excluded_interval(m, a, 1.0)
        q = quadratic_constraint(m, a, 1.0)
        if iv is None:
            for t in np.linspace(-5, 5, 21):
                assert q(t) >= -1e-9
            return
        inside = iv.lo + frac * iv.width
        assume(0 < frac < 1 and iv.lo < inside < iv.hi)
        assume(min(inside - iv.lo, iv.hi - inside) > 1e-6 * iv.width)
        assert q(inside) < 0
        for t in (iv.lo - 0.1 - frac, iv.hi + 0.1 + frac):
            assert q(t) > 0


class TestExcludedInterval:
    def test_alpha_zero(self, three_level):
        m = moments(three_level)
        iv = excluded_interval(m, 0.0, 1.0)
        half = PI / (2 * math.sqrt(m.second))
        assert (iv.lo, iv.hi) == pytest.approx((-half, half), abs=1e-15)

    def test_intelligent_alpha_one(self, intelligent):
        iv = excluded_interval(moments(intelligent), 1.0, 1.0)
        half = math.sqrt(PI**2 - 4) / 2
        assert (iv.lo, iv.hi) == pytest.approx((-half, half), abs=1e-15)
        assert half == pytest.approx(1.2114, abs=1e-4)

    def test_window_boundary_is_empty(self, three_level):
        m = moments(three_level)
        w = omega_window(m)
        assert excluded_interval(m, w.hi, 1.0) is None
        assert excluded_interval(m, w.lo, 1.0) is None
        assert excluded_interval(m, w.hi * 1.01, 1.0) is None

    @given(moment_sets(), alphas)
    def test_window_consistency(self, m, a):
        w = omega_window(m)
        assume(min(abs(a - w.lo), abs(a - w.hi)) > 1e-9 * w.width)
        assert (excluded_interval(m, a, 1.0) is not None) == (a in w)


class TestOmega:
    def test_intelligent(self, intelligent):
        w = omega_window(moments(intelligent))
        assert (w.lo, w.hi) == pytest.approx((-PI / 2, PI / 2), abs=1e-15)

    def test_three_level(self, three_level):
        w = omega_window(moments(three_level))
        assert w.hi == pytest.approx(PI * math.sqrt(1.5) / (2 * math.sqrt(0.5)), abs=1e-14)
        assert w.hi == pytest.approx(PI * math.sqrt(3) / 2, abs=1e-14)
        assert w.hi == pytest.approx(2.7207, abs=1e-4)

    def test_zero_dispersion(self):
        with pytest.raises(ZeroDispersion):
            omega_window(Moments(1.0, 1.0, 0.0, 1.0))


class TestUnion:
    def test_intelligent(self, intelligent):
        u = union_excluded(moments(intelligent), 1.0, 100_000)
        assert u.is_single
        assert abs(u.inf + PI / 2) <= 1e-6 and abs(u.sup - PI / 2) <= 1e-6

    def test_three_level(self, three_level):
        u = union_excluded(moments(three_level), 1.0)
        assert u.is_single
        assert abs(u.sup - PI / math.sqrt(2)) <= 1e-6 and abs(u.inf + PI / math.sqrt(2)) <= 1e-6

    def test_sample_floor(self, intelligent):
        with pytest.raises(ValidationError):
            union_excluded(moments(intelligent), 1.0, 999)

    @given(moment_sets())
    def test_symmetry(self, m):
        u = union_excluded(m, 1.0, 1000)
        assert u.sup == pytest.approx(-u.inf, abs=1e-9)

    @given(moment_sets())
    def test_monotone_convergence(self, m):
        target = PI / (2 * m.delta_e)
        widths = [union_excluded(m, 1.0, n).sup for n in (1000, 10_000, 100_000)]
        assert all(w <= target + 1e-12 for w in widths)
        # nested grids (n - 1 divides) make the sampled sup monotone
        nested = [alpha_sweep(m, 1.0, n).union().sup for n in (11, 101, 1001, 10_001)]
        for a, b in zip(nested, nested[1:]):
            assert b >= a - 4 * np.finfo(float).eps * target
        assert target - widths[-1] <= 1e-6

    def test_main_theorem(self, rng):
        for _ in range(40):
            s = random_discrete_state(rng, int(rng.integers(2, 10)), weights="symmetric")
            r = orthogonalization_time(s)
            if r.found:
                assert r.t0 not in union_excluded(moments(s), 1.0, 10_000)


class TestMeanGamma:
    def test_saturation_zero(self):
        for mean, de in [(0.0, 1.0), (2.0, 0.3), (-1.5, 2.0)]:
            s = construct_intelligent(1.0, mean, de)
            t = PI / (2 * de)
            assert abs(mean_gamma(s, t, -PI * mean / (2 * de))) <= 1e-12

    @given(st.floats(-5, 5), st.floats(-20, 20), alphas)
    def test_single_level_pointwise(self, e, t, a):
        s = DiscreteSpectralState(1.0, [e], [1.0])
        assert mean_gamma(s, t, a) == pytest.approx(gamma(a, e * t), abs=1e-12 * max(1, (e * t + a) ** 2))
        assert mean_gamma(s, t, a) >= -1e-12


class TestSaturation:
    def test_intelligent(self):
        rep = saturation_check(construct_intelligent(1.0, 0.7, 1.3, (0.2, 2.0)))
        assert rep.is_intelligent and rep.t0_matches_mt and not rep.reasons

    def test_unequal_weights(self):
        s = DiscreteSpectralState(1.0, [0.0, 1.0], [math.sqrt(0.6), math.sqrt(0.4)])
        rep = saturation_check(s)
        assert not rep.is_intelligent and not rep.t0_matches_mt
        assert not rep.orthogonalization.found
        assert rep.orthogonalization.min_abs_survival == pytest.approx(0.2, abs=1e-12)

    def test_three_equal_levels(self):
        rep = saturation_check(DiscreteSpectralState(1.0, [0.0, 1.0, 2.0], [1, 1, 1]))
        assert not rep.is_intelligent and rep.n_occupied == 3

    def test_zero_dispersion(self):
        with pytest.raises(ZeroDispersion):
            saturation_check(DiscreteSpectralState(1.0, [1.0], [1.0]))

    def test_biconditional_on_two_level_states(self, rng):
        for _ in range(60):
            p = 0.5 if rng.random() < 0.3 else rng.uniform(0.05, 0.95)
            e = np.sort(rng.uniform(-3, 3, 2))
            s = DiscreteSpectralState(1.0, e, [math.sqrt(p), math.sqrt(1 - p)])
            rep = saturation_check(s)
            assert rep.is_intelligent == rep.t0_matches_mt


def test_ml_after_shift(rng):
    for _ in range(40):
        s = random_discrete_state(rng, int(rng.integers(2, 10)), weights="symmetric")
        r = orthogonalization_time(s)
        if r.found:
            z = shift_energy(s, -moments(s).min_energy)
            assert r.t0 >= ml_bound(moments(z), 1.0) - 1e-9
