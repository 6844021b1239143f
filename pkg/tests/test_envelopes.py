import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from envcalc import battery
from envcalc.convex_geometry import convex_hull
from envcalc.core import (
    INF,
    FunctionSpec,
    grid1d,
    grid2d,
    interp_spec,
    sample,
    value_tol,
)
from envcalc.envelopes import (
    check_hypothesis_H,
    effective_domain_hull,
    envelope_report,
    lc_envelope,
    level_sweep,
    ls_envelope,
    ls_spec,
    lslc_envelope,
    phi_equivariance_check,
    sublevel_lslc,
)

G401 = grid1d(-2, 2, 401)
G41 = grid2d((-2, -2), (2, 2), 41)


def prop_grid(name):
    return G401 if battery.entry(name).dim == 1 else G41


def max_gap(a, b):
    """Max |a-b| treating joint +inf as equal."""
    both = np.isinf(a) & np.isinf(b)
    return float(np.max(np.where(both, 0.0, np.abs(np.where(both, 0.0, a - b)))))


def brute_lc_scan(values, xs):
    """Brute-force sublevel sweep oracle on node masks: ascending scan of
    every sampled level with explicit interval-hull membership."""
    ladder = np.unique(values[np.isfinite(values)])
    out = np.full_like(values, INF)
    for lam in ladder:
        mask = values <= lam
        lo, hi = xs[mask].min(), xs[mask].max()
        hit = (xs >= lo) & (xs <= hi) & np.isinf(out)
        out[hit] = lam
    return out


# ---------------------------------------------------------------------------
# ls_envelope


def test_ls_continuous_equals_sample():
    spec = battery.load_spec("doublewell")
    f = sample(spec, G401)
    ls = ls_envelope(spec, G401)
    assert max_gap(ls.values, f.values) <= value_tol(f.values)


def test_ls_spike_paper_value():
    spec = battery.load_spec("spike")
    g = grid1d(-2, 2, 801)
    ls = ls_envelope(spec, g)
    xs = g.axis(0)
    assert np.max(np.abs(ls.values - np.abs(xs))) <= 1e-9
    assert abs(ls.values[400]) <= 1e-12  # node at 0


def test_ls_chi2d_is_fixed_point():
    spec = battery.load_spec("chi2d")
    g = grid2d((-2, -2), (2, 2), 41)
    ls = ls_envelope(spec, g)
    assert np.array_equal(ls.values, sample(spec, g).values)
    X, Y = g.mesh()
    on_c = (Y == 0) | ((X == 0) & (Y == 1))
    assert np.array_equal(ls.values == 0.0, on_c)


def test_ls_depth_zero_is_sample():
    spec = battery.load_spec("spike")
    assert np.array_equal(ls_envelope(spec, G401, 0).values, sample(spec, G401).values)


def test_ls_below_sample():
    for name in battery.ENTRIES:
        spec = battery.load_spec(name)
        g = prop_grid(name)
        ls = ls_envelope(spec, g)
        f = sample(spec, g)
        assert np.all(ls.values <= f.values + value_tol(f.values))


# ---------------------------------------------------------------------------
# lc_envelope


def test_lc_spike_paper_value():
    spec = battery.load_spec("spike")
    g = grid1d(-2, 2, 801)
    lc = lc_envelope(spec, g)
    xs = g.axis(0)
    assert np.max(np.abs(lc.values - np.abs(xs))) <= 1e-9


def test_lc_double_well_matches_brute_scan():
    spec = battery.load_spec("doublewell")
    f = sample(spec, G401)
    xs = G401.axis(0)
    oracle = brute_lc_scan(f.values, xs)
    lc = lc_envelope(spec, G401)
    assert max_gap(lc.values, oracle) <= value_tol(f.values)
    inner = np.abs(xs) <= 1.0
    assert np.all(lc.values[inner] == 0.0)
    assert np.array_equal(lc.values[~inner], f.values[~inner])


def test_lc_constant():
    spec = FunctionSpec("c", 1, lambda x: np.full_like(np.asarray(x, float), 2.5))
    lc = lc_envelope(spec, G401)
    assert np.all(lc.values == 2.5)


def test_lc_level_convex_fixed_point():
    for name in battery.property_suite():
        if not battery.entry(name).level_convex:
            continue
        spec = battery.load_spec(name)
        g = prop_grid(name)
        f = sample(spec, g)
        lc = lc_envelope(spec, g)
        assert max_gap(lc.values, f.values) <= value_tol(f.values), name


# ---------------------------------------------------------------------------
# lslc_envelope


def test_lslc_chi2d_closed_strip():
    spec = battery.load_spec("chi2d")
    g = grid2d((-2, -2), (2, 2), 161)
    lslc = lslc_envelope(spec, g)
    X, Y = g.mesh()
    expected = np.where((Y >= 0) & (Y <= 1), 0.0, 1.0)
    assert np.array_equal(lslc.values, expected)


def test_lslc_level_convex_lsc_fixed_point():
    spec = battery.load_spec("abs1d")
    lslc = lslc_envelope(spec, G401)
    assert max_gap(lslc.values, sample(spec, G401).values) <= value_tol(lslc.values)


def test_lslc_spike_paper_value():
    spec = battery.load_spec("spike")
    g = grid1d(-2, 2, 801)
    lslc = lslc_envelope(spec, g)
    assert np.max(np.abs(lslc.values - np.abs(g.axis(0)))) <= 1e-9


# ---------------------------------------------------------------------------
# sublevel_lslc


def test_sublevel_double_well_matches_mask_hull_oracle():
    spec = battery.load_spec("doublewell")
    g = grid1d(-2, 2, 801)
    f = sample(spec, g)
    xs = g.axis(0)
    mask = f.values <= 0.0 + 0.01  # oracle: explicit mask + hull
    expected = (xs[mask].min(), xs[mask].max())
    p = sublevel_lslc(spec, g, 0.0, 0.01)
    assert p.vertices[0] == expected[0]
    assert p.vertices[-1] == expected[1]


def test_sublevel_abs_interval():
    spec = battery.load_spec("abs1d")
    h = G401.min_spacing()
    p = sublevel_lslc(spec, G401, 0.5, h)
    assert p.vertices[0] == pytest.approx(-0.5 - h, abs=1e-12)
    assert p.vertices[-1] == pytest.approx(0.5 + h, abs=1e-12)


def test_sublevel_below_inf_is_empty():
    spec = battery.load_spec("abs1d")
    p = sublevel_lslc(spec, G401, -1.0, 0.5)
    assert p.is_empty


def test_sublevel_eps_ladder_monotone_and_agrees():
    spec = battery.load_spec("doublewell")
    h = G401.min_spacing()
    lam = 0.5
    widths = []
    for eps in (4 * h, 2 * h, h):
        p = sublevel_lslc(spec, G401, lam, eps)
        widths.append(p.vertices[-1] - p.vertices[0])
    assert widths[0] >= widths[1] >= widths[2]
    lslc = lslc_envelope(spec, G401)
    mask = lslc.values <= lam + value_tol(lslc.values)
    xs = G401.axis(0)
    p = sublevel_lslc(spec, G401, lam, h)
    # one cell of level inflation plus one cell of node quantization
    assert abs(xs[mask].min() - p.vertices[0]) <= 2 * h + 1e-12
    assert abs(xs[mask].max() - p.vertices[-1]) <= 2 * h + 1e-12


# ---------------------------------------------------------------------------
# effective_domain_hull


def test_domain_hull_finite_everywhere():
    spec = battery.load_spec("doublewell")
    p = effective_domain_hull(spec, G401)
    assert p.vertices[0] == -2.0 and p.vertices[-1] == 2.0


def test_domain_hull_two_dots_matches_lc():
    spec = battery.load_spec("dots1d")
    p = effective_domain_hull(spec, G401)
    assert p.vertices.tolist() == [-1.0, 1.0]
    lc = lc_envelope(spec, G401)
    xs = G401.axis(0)
    assert np.array_equal(np.isfinite(lc.values), (xs >= -1.0) & (xs <= 1.0))


def test_domain_hull_all_infinite_is_empty():
    spec = FunctionSpec("inf", 1, lambda x: np.full_like(np.asarray(x, float), INF))
    assert effective_domain_hull(spec, G401).is_empty


def test_domain_identity_on_battery():
    for name in battery.property_suite():
        spec = battery.load_spec(name)
        g = prop_grid(name)
        lc = lc_envelope(spec, g)
        dom = effective_domain_hull(spec, g)
        pts = g.points()
        inside = dom.contains_many(pts.reshape(-1) if g.dim == 1 else pts)
        assert np.array_equal(np.isfinite(lc.values.ravel()), inside), name


# ---------------------------------------------------------------------------
# hypothesis (H) checker


def test_H_holds_for_abs():
    r = check_hypothesis_H(battery.load_spec("abs1d"), G401, [0.5, 1.0, 1.5])
    assert r.holds and r.witness is None
    assert all(r.interior_ok.values())


def test_H_fails_for_double_well_with_valid_witness():
    spec = battery.load_spec("doublewell")
    r = check_hypothesis_H(spec, G401, [0.5])
    assert not r.holds and r.failing_lambda == 0.5
    a, b = r.witness
    lam = 0.5
    assert spec(*a) <= lam and spec(*b) <= lam
    mid = tuple((np.asarray(a) + np.asarray(b)) / 2.0)
    assert spec(*mid) > lam


def test_H_fails_for_spike():
    spec = battery.load_spec("spike")
    r = check_hypothesis_H(spec, G401, [0.25])
    assert not r.holds
    a, b = r.witness
    assert spec(*a) <= 0.25 and spec(*b) <= 0.25
    mid = tuple((np.asarray(a) + np.asarray(b)) / 2.0)
    assert spec(*mid) > 0.25


def test_H_validates_probes():
    spec = battery.load_spec("abs1d")
    with pytest.raises(ValueError):
        check_hypothesis_H(spec, G401, [])
    with pytest.raises(ValueError):
        check_hypothesis_H(spec, G401, [-1.0])


# ---------------------------------------------------------------------------
# Phi equivariance


@pytest.mark.parametrize("name", ["abs1d", "doublewell", "spike"])
def test_phi_equivariance(name):
    spec = battery.load_spec(name)
    assert phi_equivariance_check(spec, G401)


def test_phi_equivariance_battery():
    for name in battery.property_suite():
        assert phi_equivariance_check(battery.load_spec(name), prop_grid(name)), name


# ---------------------------------------------------------------------------
# invariants on the property battery


def test_ordering_on_battery():
    for name in battery.property_suite():
        rep = envelope_report(battery.load_spec(name), prop_grid(name))
        tol = value_tol(rep.f.values)
        for low, high in ((rep.f_lslc, rep.f_lc), (rep.f_lslc, rep.f_ls), (rep.f_lc, rep.f), (rep.f_ls, rep.f)):
            both = np.isinf(low.values) & np.isinf(high.values)
            assert np.all(both | (low.values <= high.values + tol)), name


def test_lslc_below_ls_then_lc():
    for name in battery.property_suite():
        spec = battery.load_spec(name)
        g = prop_grid(name)
        rep = envelope_report(spec, g)
        ls_then_lc = lc_envelope(ls_spec(spec, g), g).values
        tol = value_tol(rep.f.values)
        both = np.isinf(rep.f_lslc.values) & np.isinf(ls_then_lc)
        assert np.all(both | (rep.f_lslc.values <= ls_then_lc + tol)), name


def test_chi2d_strict_inequality_between_orders():
    # lc-then-ls strictly below ls-then-lc on the open strip's upper boundary
    spec = battery.load_spec("chi2d")
    g = grid2d((-2, -2), (2, 2), 161)
    lc_then_ls = lslc_envelope(spec, g).values
    ls_then_lc = lc_envelope(ls_spec(spec, g), g).values
    X, Y = g.mesh()
    differ = lc_then_ls != ls_then_lc
    assert differ.sum() == 160
    assert np.all(Y[differ] == 1.0)
    assert np.all(X[differ] != 0.0)
    assert np.all(lc_then_ls[differ] < ls_then_lc[differ])


def test_idempotence_on_battery():
    for name in battery.property_suite():
        spec = battery.load_spec(name)
        g = prop_grid(name) if battery.entry(name).dim == 1 else grid2d((-2, -2), (2, 2), 21)
        tol = value_tol(sample(spec, g).values)
        ls1 = ls_envelope(spec, g).values
        ls2 = ls_envelope(ls_spec(spec, g), g).values
        assert max_gap(ls1, ls2) <= tol, name
        sweep = level_sweep(spec, g)
        lc1 = sweep.node_values()
        lc2 = level_sweep(sweep.as_spec(), g).node_values()
        assert max_gap(lc1, lc2) <= tol, name
        lslc1 = ls_envelope(sweep.as_spec(), g).values
        lslc2 = lslc_envelope(ls_spec(sweep.as_spec(), g), g).values
        assert max_gap(lslc1, lslc2) <= tol, name


def test_monotonicity_shift_scale_and_pair():
    dw = battery.load_spec("doublewell")
    shift = FunctionSpec("dw+c", 1, lambda x: dw.eval_arrays(x) + 0.7)
    scale = FunctionSpec("c*dw", 1, lambda x: 1.3 * dw.eval_arrays(x))
    for op in (ls_envelope, lc_envelope, lslc_envelope):
        base = op(dw, G401).values
        up = op(shift, G401).values
        sc = op(scale, G401).values
        assert np.all(up >= base - 1e-9)
        assert np.all(sc >= base - 1e-9)
        # increasing transforms commute with the envelopes
        assert np.max(np.abs(up - (base + 0.7))) <= 1e-9
        assert np.max(np.abs(sc - 1.3 * base)) <= 1e-9
    lo = battery.load_spec("abs1d")
    hi = battery.load_spec("wedge")
    for op in (ls_envelope, lc_envelope, lslc_envelope):
        assert np.all(op(lo, G401).values <= op(hi, G401).values + 1e-9)


def test_inf_preservation_on_battery():
    for name in battery.property_suite():
        rep = envelope_report(battery.load_spec(name), prop_grid(name))
        tol = value_tol(rep.f.values)
        mins = [rep.f.min(), rep.f_ls.min(), rep.f_lc.min(), rep.f_lslc.min()]
        assert max(mins) - min(mins) <= tol, name


def test_sublevel_inclusion_on_battery():
    for name in battery.property_suite():
        spec = battery.load_spec(name)
        g = prop_grid(name)
        rep = envelope_report(spec, g)
        tol = value_tol(rep.f.values)
        pts = g.points()
        flat_f = rep.f.values.ravel()
        flat_lc = rep.f_lc.values.ravel()
        ladder = rep.lambda_grid
        for lam in ladder[np.unique(np.linspace(0, len(ladder) - 1, 3).astype(int))]:
            mask = flat_f <= lam
            if not mask.any():
                continue
            hull = convex_hull(pts[mask].reshape(-1) if g.dim == 1 else pts[mask], dim=g.dim)
            inside = hull.contains_many(pts.reshape(-1) if g.dim == 1 else pts)
            assert np.all(flat_lc[inside] <= lam + tol), name


def test_coercive_lsc_sublevel_agreement():
    # lsc + coercive: co L_lambda(f) and L_lambda(f_lc) agree to one cell
    h = G401.min_spacing()
    xs = G401.axis(0)
    for name, lams in (("doublewell", (0.5, 1.5)), ("abs1d", (0.5, 1.0))):
        spec = battery.load_spec(name)
        rep = envelope_report(spec, G401)
        for lam in lams:
            mask = rep.f.values <= lam
            hull = convex_hull(xs[mask], dim=1)
            lcmask = rep.f_lc.values <= lam + value_tol(rep.f.values)
            assert abs(xs[lcmask].min() - hull.vertices[0]) <= h + 1e-12
            assert abs(xs[lcmask].max() - hull.vertices[-1]) <= h + 1e-12


def test_report_lambda_grid_and_eps():
    rep = envelope_report(battery.load_spec("chi_outside"), G401)
    assert np.all(np.diff(rep.lambda_grid) > 0)
    h = G401.min_spacing()
    assert rep.eps_ladder == (4 * h, 2 * h, h)
    assert rep.refine_depth == 3


# ---------------------------------------------------------------------------
# randomized: piecewise-linear continuous functions with node kinks


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(min_value=0.0, max_value=5.0, allow_nan=False), min_size=2, max_size=9)
)
def test_random_piecewise_linear_properties(knot_vals):
    knots = np.linspace(-2, 2, len(knot_vals))
    vals = np.asarray(knot_vals)
    spec = FunctionSpec("pw", 1, lambda x: np.interp(x, knots, vals))
    g = grid1d(-2, 2, 129)
    f = sample(spec, g)
    tol = value_tol(f.values)
    ls = ls_envelope(spec, g)
    # continuous: ls is a fixed point
    assert max_gap(ls.values, f.values) <= tol
    lc = lc_envelope(spec, g)
    assert np.all(lc.values <= f.values + tol)
    # lc output is level convex: sublevels are intervals
    xs = g.axis(0)
    for lam in np.quantile(lc.values, [0.3, 0.7]):
        mask = lc.values <= lam + tol
        if mask.any():
            idx = np.flatnonzero(mask)
            assert np.all(np.diff(idx) == 1)
    # inf preservation
    assert abs(lc.values.min() - f.values.min()) <= tol
