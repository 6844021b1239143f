import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from envcalc.core import (
    INF,
    DimensionError,
    as_extended,
    coercify,
    compose_phi,
    grid1d,
    grid2d,
    interp_spec,
    sample,
    truncate_below,
    validate_extended_array,
    FunctionSpec,
)


def make_spec(name, dim, fn, **kw):
    return FunctionSpec(name=name, dim=dim, fn=fn, **kw)


ABS = make_spec("abs", 1, lambda x: np.abs(x))
CONST3 = make_spec("const3", 1, lambda x: np.full_like(np.asarray(x, float), 3.0))
DOUBLEWELL = make_spec("doublewell", 1, lambda x: (x**2 - 1.0) ** 2)


def test_as_extended_rejects_bad_values():
    assert as_extended(INF) == INF
    assert as_extended(-2.5) == -2.5
    with pytest.raises(ValueError):
        as_extended(-INF)
    with pytest.raises(ValueError):
        as_extended(float("nan"))
    with pytest.raises(ValueError):
        validate_extended_array(np.array([1.0, -INF]))


def test_grid_nodes_reproducible():
    g = grid1d(-1.0, 1.0, 3)
    assert g.axis(0).tolist() == [-1.0, 0.0, 1.0]
    h = g.spacing()[0]
    assert g.axis(0)[2] == -1.0 + 2 * h  # lo + i*h exactly
    with pytest.raises(ValueError):
        grid1d(1.0, 1.0, 3)
    with pytest.raises(ValueError):
        grid1d(0.0, 1.0, 1)


def test_grid2d_points_order():
    g = grid2d((-1, -1), (1, 1), (3, 2))
    pts = g.points()
    assert pts.shape == (6, 2)
    assert pts[0].tolist() == [-1.0, -1.0]
    assert pts[1].tolist() == [-1.0, 1.0]  # y varies fastest


def test_sample_constant_and_abs():
    g = grid1d(-1, 1, 3)
    assert sample(CONST3, g).values.tolist() == [3.0, 3.0, 3.0]
    assert sample(ABS, g).values.tolist() == [1.0, 0.0, 1.0]


def test_sample_indicator_complement_penalty():
    spec = make_spec("pen", 1, lambda x: np.where(np.abs(x) <= 0.5, 0.0, INF))
    g = grid1d(-1, 1, 5)
    assert sample(spec, g).values.tolist() == [INF, 0.0, 0.0, 0.0, INF]


def test_sample_dimension_mismatch():
    with pytest.raises(DimensionError):
        sample(ABS, grid2d((-1, -1), (1, 1), 3))


def test_sample_idempotent_bitwise():
    g = grid1d(-2, 2, 101)
    a = sample(DOUBLEWELL, g).values
    b = sample(DOUBLEWELL, g).values
    assert np.array_equal(a, b)


def test_truncate_below():
    g = grid1d(0, 10, 11)
    minus5 = make_spec("m5", 1, lambda x: np.full_like(np.asarray(x, float), -5.0))
    assert set(sample(truncate_below(minus5, 2.0), g).values.tolist()) == {-2.0}
    t = truncate_below(ABS, 1.0)
    assert np.array_equal(sample(t, g).values, sample(ABS, g).values)
    # pointwise evaluation oracle for f(s) = -s on [0, 10], m = 3
    neg = make_spec("neg", 1, lambda x: -np.asarray(x, float))
    got = sample(truncate_below(neg, 3.0), g).values
    expected = np.maximum(-g.axis(0), -3.0)
    assert np.array_equal(got, expected)
    with pytest.raises(ValueError):
        truncate_below(ABS, -1.0)


def test_coercify():
    zero = make_spec("zero", 1, lambda x: np.zeros_like(np.asarray(x, float)))
    g = grid1d(-2, 2, 9)
    assert np.array_equal(sample(coercify(zero, 1), g).values, np.abs(g.axis(0)))
    assert np.array_equal(sample(coercify(ABS, 7), g).values, sample(ABS, g).values)
    assert coercify(DOUBLEWELL, 10)(20.0) == pytest.approx(399.0**2)
    assert coercify(ABS, 3).coercive
    with pytest.raises(ValueError):
        coercify(ABS, 0)


@given(st.integers(min_value=1, max_value=20), st.integers(min_value=1, max_value=20))
def test_coercify_monotone_in_n(n, m):
    if n > m:
        n, m = m, n
    g = grid1d(-3, 3, 31)
    lo = sample(coercify(DOUBLEWELL, m), g).values
    hi = sample(coercify(DOUBLEWELL, n), g).values
    assert np.all(hi >= lo)


def test_truncate_monotone_in_m():
    neg = make_spec("neg", 1, lambda x: -np.asarray(x, float))
    g = grid1d(0, 10, 21)
    prev = sample(truncate_below(neg, 0.0), g).values
    for m in (1.0, 2.0, 5.0, 20.0):
        cur = sample(truncate_below(neg, m), g).values
        assert np.all(cur <= prev)
        prev = cur
    # equal to f for m beyond the bound of a bounded-below f
    assert np.array_equal(sample(truncate_below(neg, 20.0), g).values, -g.axis(0))


def test_compose_phi():
    g = grid1d(-1, 1, 3)
    zero = make_spec("zero", 1, lambda x: np.zeros_like(np.asarray(x, float)))
    assert sample(compose_phi(zero), g).values.tolist() == [0.0, 0.0, 0.0]
    one = make_spec("one", 1, lambda x: np.ones_like(np.asarray(x, float)))
    assert sample(compose_phi(one), g).values[0] == pytest.approx(math.pi / 4)
    spiky = make_spec("s", 1, lambda x: np.where(x == 0.0, INF, 0.0))
    vals = sample(compose_phi(spiky), g).values
    assert vals[1] == pytest.approx(math.pi / 2)
    assert np.all(vals < math.pi / 2 + 1e-12)


def test_interp_spec_linear_and_inf_cells():
    g = grid1d(0, 1, 3)
    s = sample(make_spec("lin", 1, lambda x: 2.0 * x), g)
    spec = interp_spec(s)
    assert spec(0.25) == pytest.approx(0.5)
    assert spec(0.5) == 1.0  # exact node value
    ind = sample(make_spec("ind", 1, lambda x: np.where(x <= 0.5, 0.0, INF)), g)
    ispec = interp_spec(ind)
    assert ispec(0.5) == 0.0
    assert ispec(0.6) == INF
    assert ispec(2.0) == INF  # clamped to boundary value
    assert ispec(-1.0) == 0.0
