import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gangle import (
    InvalidInputError,
    LimitEstimationError,
    LpVector,
    SpaceConfig,
    UndefinedDirectionError,
    g_closed,
    g_numeric,
    lp_norm,
    tau,
)
from gangle.space import dual_map

from conftest import P_VALUES, rand_vec


class TestLpVector:
    def test_trailing_zeros_compare_equal(self):
        assert LpVector([1, 2]) == LpVector([1, 2, 0, 0])
        assert hash(LpVector([1, 2])) == hash(LpVector([1, 2, 0]))
        assert LpVector([1, 2]) != LpVector([1, 2, 1])

    def test_arithmetic_pads(self):
        v = LpVector([1, 2]) + LpVector([0, 0, 3])
        assert v.tolist() == [1, 2, 3]
        assert (2 * LpVector([1, -1])).tolist() == [2, -2]
        assert (LpVector([1, 1]) - [1, 0]).tolist() == [0, 1]

    def test_immutable(self):
        v = LpVector([1.0, 2.0])
        with pytest.raises(ValueError):
            v.coords[0] = 3.0

    @pytest.mark.parametrize("bad", [[], [1.0, float("nan")], [float("inf")], [[1, 2], [3, 4]], "abc"])
    def test_rejects_bad_coordinates(self, bad):
        with pytest.raises(InvalidInputError):
            LpVector(bad)


class TestSpaceConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"p": 0.5},
            {"p": float("inf")},
            {"p": 2, "eps_g": 0},
            {"p": 2, "tau_steps": (1e-3, 1e-2)},
            {"p": 2, "tau_steps": (1e-2,)},
            {"p": 2, "tau_steps": (1e-2, -1e-3)},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            SpaceConfig(**kwargs)


def test_lp_norm_examples():
    assert lp_norm([1, 1, 2, 0], SpaceConfig(2)) == pytest.approx(math.sqrt(6), rel=1e-15)
    for p in P_VALUES:
        assert lp_norm([0, 0, 0], SpaceConfig(p)) == 0.0
    assert lp_norm([1, 1, 0], SpaceConfig(1)) == 2.0


def test_lp_norm_against_numpy():
    rng = np.random.default_rng(1)
    for p in (1.0, 1.3, 2.0, 3.0, 7.5):
        x = rng.standard_normal(7) * 10.0 ** rng.integers(-100, 100)
        assert lp_norm(x, SpaceConfig(p)) == pytest.approx(np.linalg.norm(x / np.abs(x).max(), ord=p) * np.abs(x).max(), rel=1e-13)


def test_lp_norm_no_overflow():
    assert lp_norm([1e300, 1e300], SpaceConfig(3)) == pytest.approx(1e300 * 2 ** (1 / 3), rel=1e-14)


class TestGClosed:
    def test_l1_forward_pair(self):
        assert g_closed([1, 0], [1, 1], SpaceConfig(1)) == 1.0

    def test_norm_squared(self):
        assert g_closed([1, 1, 2], [1, 1, 2], SpaceConfig(2)) == pytest.approx(6.0, rel=1e-15)

    def test_l1_reversed_pair(self):
        # ||(1,1)||_1 * (sgn(1)*1 + sgn(1)*0) = 2, and 2/||v_2||^2 = 1/2
        assert g_closed([1, 1], [1, 0], SpaceConfig(1)) == 2.0

    def test_zero_first_argument(self):
        for p in P_VALUES:
            assert g_closed([0, 0], [3, 4], SpaceConfig(p)) == 0.0

    def test_zero_coordinates_contribute_nothing_at_p1(self):
        # x_2 = 0 must not pick up y_2 even though |0|^(p-1) = 1 formally
        assert g_closed([2, 0], [1, 100], SpaceConfig(1)) == 2.0

    def test_inner_product_at_p2(self):
        assert g_closed([1, 1, 2], [2, 1, 3], SpaceConfig(2)) == 9.0

    def test_unequal_lengths_pad(self):
        c = SpaceConfig(3)
        assert g_closed([1, 2], [3, 4, 5], c) == g_closed([1, 2, 0], [3, 4, 5], c)

    def test_dual_map_identity(self):
        c = SpaceConfig(1.5)
        x = np.array([0.3, -1.2, 0.0, 2.0])
        y = np.array([1.0, 0.5, -2.0, 0.25])
        assert float(dual_map(x, c) @ y) == g_closed(x, y, c)


# tiny magnitudes are flushed to zero so that scaling never underflows a coordinate
finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False).map(lambda v: 0.0 if abs(v) < 1e-100 else v)
vec = st.lists(finite, min_size=1, max_size=6)
pval = st.sampled_from(P_VALUES)
scalar = st.floats(min_value=-50, max_value=50, allow_nan=False).map(lambda v: 0.0 if abs(v) < 1e-100 else v)


def _scale(x, y, c):
    return lp_norm(x, c) * lp_norm(y, c)


@settings(max_examples=200, deadline=None)
@given(x=vec, p=pval)
def test_property_norm_compatibility(x, p):
    c = SpaceConfig(p)
    n = lp_norm(x, c)
    assert abs(g_closed(x, x, c) - n * n) <= 1e-12 * n * n


@settings(max_examples=200, deadline=None)
@given(x=vec, y=vec, a=scalar, b=scalar, p=pval)
def test_property_homogeneity(x, y, a, b, p):
    c = SpaceConfig(p)
    lhs = g_closed(np.array(x) * a, np.array(y) * b, c)
    rhs = a * b * g_closed(x, y, c)
    assert abs(lhs - rhs) <= 1e-12 * abs(a * b) * _scale(x, y, c) + 1e-300


@settings(max_examples=200, deadline=None)
@given(x=vec, y=vec, p=pval)
def test_property_additivity_with_x(x, y, p):
    c = SpaceConfig(p)
    xs, ys = np.array(x), np.array(y)
    n = max(xs.size, ys.size)
    xs, ys = np.pad(xs, (0, n - xs.size)), np.pad(ys, (0, n - ys.size))
    lhs = g_closed(xs, xs + ys, c)
    rhs = lp_norm(xs, c) ** 2 + g_closed(xs, ys, c)
    assert abs(lhs - rhs) <= 1e-12 * (lp_norm(xs, c) * (lp_norm(xs, c) + lp_norm(ys, c))) + 1e-300


@settings(max_examples=200, deadline=None)
@given(x=vec, y=vec, p=pval)
def test_property_cauchy_schwarz(x, y, p):
    c = SpaceConfig(p)
    assert abs(g_closed(x, y, c)) <= _scale(x, y, c) * (1 + 1e-12) + 1e-12


@settings(max_examples=200, deadline=None)
@given(x=vec, y=vec, z=vec, a=scalar, b=scalar, p=pval)
def test_property_linear_in_second_argument(x, y, z, a, b, p):
    c = SpaceConfig(p)
    n = max(len(x), len(y), len(z))
    ys = np.pad(np.array(y), (0, n - len(y)))
    zs = np.pad(np.array(z), (0, n - len(z)))
    lhs = g_closed(x, a * ys + b * zs, c)
    rhs = a * g_closed(x, ys, c) + b * g_closed(x, zs, c)
    scale = lp_norm(x, c) * (abs(a) * lp_norm(ys, c) + abs(b) * lp_norm(zs, c))
    assert abs(lhs - rhs) <= 1e-12 * scale + 1e-300


class TestTau:
    def test_l1_kink(self):
        tp, tm = tau([1, 0], [0, 1], SpaceConfig(1))
        assert tp == pytest.approx(1.0, abs=1e-9)
        assert tm == pytest.approx(-1.0, abs=1e-9)

    def test_direction_x(self):
        tp, tm = tau([3, 4], [3, 4], SpaceConfig(2))
        assert tp == pytest.approx(5.0, abs=1e-8)
        assert tm == pytest.approx(5.0, abs=1e-8)

    def test_smooth_orthogonal(self):
        tp, tm = tau([1, 0], [0, 1], SpaceConfig(2))
        assert tp == pytest.approx(0.0, abs=1e-8)
        assert tm == pytest.approx(0.0, abs=1e-8)

    def test_zero_x_is_undefined(self):
        with pytest.raises(UndefinedDirectionError):
            tau([0, 0], [1, 0], SpaceConfig(2))

    def test_zero_direction(self):
        assert tau([1, 2], [0, 0], SpaceConfig(3)) == (0.0, 0.0)

    def test_ordering_and_bound(self, cfg):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x = rand_vec(rng, 4)
            if cfg.p != 1.5:
                # for 1 < p < 2 the quotient error near a zero coordinate decays like t^(p-1)
                x[rng.integers(4)] = 0.0
            y = rand_vec(rng, 4)
            tp, tm = tau(x, y, cfg)
            ny = lp_norm(y, cfg)
            assert tm <= tp + cfg.tau_stable * ny
            assert abs(tp) <= ny * (1 + 1e-7) and abs(tm) <= ny * (1 + 1e-7)

    def test_slow_limit_at_zero_coordinate_is_reported(self):
        with pytest.raises(LimitEstimationError, match="did not stabilize"):
            tau([1.0, 0.0], [0.3, 1.0], SpaceConfig(1.5))

    def test_custom_norm(self):
        # sup norm: derivative at (2, 1) in direction (1, 5) is 1 from either side
        tp, tm = tau([2.0, 1.0], [1.0, 5.0], SpaceConfig(2), norm=lambda v: float(np.max(np.abs(v))))
        assert tp == pytest.approx(1.0, abs=1e-9) and tm == pytest.approx(1.0, abs=1e-9)

    def test_unstable_limit_raises(self):
        def wiggly(v):
            return float(np.linalg.norm(v)) + 1e-3 * math.sin(1e9 * v[1])

        with pytest.raises(LimitEstimationError):
            tau([1.0, 0.0], [0.0, 1.0], SpaceConfig(2), norm=wiggly)


class TestGNumeric:
    def test_l1_kink_gives_zero(self):
        assert g_numeric([1, 0], [0, 1], SpaceConfig(1)) == pytest.approx(0.0, abs=1e-9)

    def test_inner_product(self):
        assert g_numeric([1, 1, 2], [2, 1, 3], SpaceConfig(2)) == pytest.approx(9.0, abs=1e-6)

    def test_self(self, cfg):
        x = [0.5, -1.5, 2.0]
        assert g_numeric(x, x, cfg) == pytest.approx(lp_norm(x, cfg) ** 2, abs=1e-6)

    def test_zero_x(self):
        assert g_numeric([0, 0], [1, 1], SpaceConfig(1.5)) == 0.0

    def test_agrees_with_closed_form(self, cfg):
        rng = np.random.default_rng(11)
        for _ in range(40):
            d = int(rng.integers(1, 7))
            x, y = rand_vec(rng, d, nonzero=True), rand_vec(rng, d)
            assert abs(g_numeric(x, y, cfg) - g_closed(x, y, cfg)) <= cfg.eps_g

    def test_agrees_at_l1_zero_coordinates(self):
        c = SpaceConfig(1)
        x, y = [1.0, 0.0, -2.0], [0.3, 5.0, 1.0]
        assert g_numeric(x, y, c) == pytest.approx(g_closed(x, y, c), abs=1e-9)
