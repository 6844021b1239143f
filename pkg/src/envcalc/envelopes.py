"""Envelope calculus on a box grid: f^ls, f^lc, f^lslc and their sublevel geometry.

The lsc envelope is approximated with a dyadic ray stencil: around each
node, the function is evaluated along the 3^n - 1 lattice directions at
radii (h/2)/2^k, k = 0..refine_depth, and each directional limit is
estimated by Richardson extrapolation of the dyadic sequence.  A ray
contributes only when its increments decay geometrically and the
extrapolation is order-consistent, i.e. the branch looks polynomial at
the stencil's resolution; otherwise the ray abstains.  The node value is
min(f(node), best ray limit), which resolves discontinuities aligned
with the node lattice exactly, leaves smooth functions unchanged to
float precision, and is an upper approximation of the true liminf for
functions with sub-stencil features.

The level-convex envelope is the sublevel sweep f^lc(xi) = inf of the
levels lambda whose sampled sublevel hull contains xi.  In dim 1 the
masks include the ray-stencil points and the sweep is run at refinement
depths r-1 and r; the two thresholds are Richardson-extrapolated, which
recovers the continuum value at nodes whose membership threshold decays
linearly with the stencil radius (the removable-spike geometry).  In
dim 2 masks are node-only.  Masks whose points touch the box boundary
are extruded outward before hulling ("window" semantics): the box is a
window onto R^n, so a sublevel reaching the boundary is treated as
continuing beyond it.  The hypothesis-(H) checker uses raw in-box hulls.
"""

from dataclasses import dataclass

import numpy as np

from .convex_geometry import Polytope, convex_hull
from .core import (
    INF,
    BoxGrid,
    DimensionError,
    FunctionSpec,
    SampledFunction,
    sample,
    value_tol,
)

DEFAULT_REFINE_DEPTH = 3
MAX_LEVELS_2D = 4096
_DECAY = 0.75

__all__ = [
    "DEFAULT_REFINE_DEPTH",
    "EnvelopeReport",
    "HypothesisHReport",
    "ls_envelope",
    "ls_spec",
    "lc_envelope",
    "lc_spec",
    "level_sweep",
    "lslc_envelope",
    "sublevel_lslc",
    "effective_domain_hull",
    "check_hypothesis_H",
    "phi_equivariance_check",
    "envelope_report",
]


# ---------------------------------------------------------------------------
# lsc envelope: dyadic ray stencil


def _directions(dim):
    if dim == 1:
        return [(-1.0,), (1.0,)]
    return [(float(i), float(j)) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)]


def _neville_weights(length: int) -> np.ndarray:
    """Lagrange weights at t=0 for nodes t_j = 2^-j, j = 0..length-1."""
    t = 0.5 ** np.arange(length)
    w = np.empty(length)
    for j in range(length):
        others = np.delete(t, j)
        w[j] = np.prod(others / (others - t[j]))
    return w


def _ray_limits(vals: np.ndarray) -> np.ndarray:
    """Estimate per-row directional limits of (M, depth+1) dyadic ray values.

    Columns are ordered by decreasing radius.  Rows crossing +inf keep
    only the finite tail.  A row contributes only when its increments
    decay geometrically (ratio <= 0.75), the signature of a resolved
    smooth or exactly-dyadic branch; otherwise the feature is below the
    stencil resolution and the ray abstains (+inf), keeping the stencil
    an upper approximation of the true liminf.
    """
    m, cols = vals.shape
    out = np.full(m, INF)
    infmask = np.isinf(vals)
    has_inf = infmask.any(axis=1)
    last_inf = np.where(has_inf, cols - 1 - np.argmax(infmask[:, ::-1], axis=1), -1)
    tail_len = cols - 1 - last_inf
    scale = np.where(np.isfinite(vals), np.abs(vals), 0.0).max(axis=1)
    tiny = 1e-12 * (1.0 + scale)

    two = tail_len == 2
    if two.any():
        d = vals[two, -1] - vals[two, -2]
        out[two] = np.where(np.abs(d) <= tiny[two], vals[two, -1], INF)
    for ell in range(3, cols + 1):
        sel = tail_len == ell
        if not sel.any():
            continue
        tail = vals[sel, -ell:]
        diffs = np.diff(tail, axis=1)
        decay = np.all(np.abs(diffs[:, 1:]) <= _DECAY * np.abs(diffs[:, :-1]) + tiny[sel, None], axis=1)
        est = tail @ _neville_weights(ell)
        # order-consistency: the one-order-lower estimate must agree, which
        # holds only for branches polynomial up to the stencil's order
        est_inner = tail[:, 1:] @ _neville_weights(ell - 1)
        consistent = np.abs(est - est_inner) <= 1e-9 * (1.0 + scale[sel]) + tiny[sel]
        out[sel] = np.where(decay & consistent, est, INF)
    return out


def _ls_values(spec: FunctionSpec, centers: np.ndarray, spacing, depth: int) -> np.ndarray:
    centers = np.asarray(centers, dtype=float)
    if centers.ndim == 1:
        centers = centers[:, None]
    center_vals = spec.eval_points(centers)
    if depth == 0:
        return center_vals
    radii = np.array([0.5 / 2**k for k in range(depth + 1)])
    best = np.full(len(centers), INF)
    for d in _directions(spec.dim):
        ray = np.empty((len(centers), depth + 1))
        for k, r in enumerate(radii):
            pts = centers + np.array(d) * np.array(spacing) * r
            ray[:, k] = spec.eval_points(pts)
        best = np.minimum(best, _ray_limits(ray))
    return np.minimum(center_vals, best)


def ls_envelope(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> SampledFunction:
    """Grid approximation of the lsc envelope min(f(x), liminf_{y->x} f(y))."""
    if spec.dim != grid.dim:
        raise DimensionError(f"spec dim {spec.dim} != grid dim {grid.dim}")
    if refine_depth < 0:
        raise ValueError("refine_depth must be >= 0")
    vals = _ls_values(spec, grid.points(), grid.spacing(), refine_depth)
    return SampledFunction(grid, vals.reshape(grid.shape))


def ls_spec(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> FunctionSpec:
    """The ls-envelope as an evaluable spec (same stencil at arbitrary points)."""
    spacing = grid.spacing()

    if spec.dim == 1:
        def fn(xs):
            xs = np.asarray(xs, dtype=float)
            return _ls_values(spec, xs.ravel()[:, None], spacing, refine_depth).reshape(xs.shape)
    else:
        def fn(xs, ys):
            xs = np.asarray(xs, dtype=float)
            ys = np.broadcast_to(np.asarray(ys, dtype=float), xs.shape)
            pts = np.stack([xs.ravel(), ys.ravel()], axis=-1)
            return _ls_values(spec, pts, spacing, refine_depth).reshape(xs.shape)

    return FunctionSpec(name=f"ls({spec.name})", dim=spec.dim, fn=fn, coercive=spec.coercive)


# ---------------------------------------------------------------------------
# level-convex envelope: sublevel sweep


class _Table1D:
    """Per-level interval hulls [prefmin, prefmax] of a 1D point/value cloud."""

    def __init__(self, points: np.ndarray, values: np.ndarray):
        finite = np.isfinite(values)
        pts, vals = points[finite], values[finite]
        if len(pts) == 0:
            self.levels = np.empty(0)
            self.prefmin = np.empty(0)
            self.prefmax = np.empty(0)
            return
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sx = pts[order]
        prefmin = np.minimum.accumulate(sx)
        prefmax = np.maximum.accumulate(sx)
        levels, first = np.unique(sv, return_index=True)
        last = np.r_[first[1:], len(sv)] - 1
        self.levels = levels
        self.prefmin = prefmin[last]
        self.prefmax = prefmax[last]

    def threshold(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if len(self.levels) == 0:
            return np.full(q.shape, INF)
        k_left = np.searchsorted(-self.prefmin, -q, side="left")
        k_right = np.searchsorted(self.prefmax, q, side="left")
        k = np.maximum(k_left, k_right)
        out = np.full(q.shape, INF)
        ok = k < len(self.levels)
        out[ok] = self.levels[k[ok]]
        return out


class _Sweep1D:
    """Refined-mask sweep at two consecutive dyadic depths.

    The fine table masks include stencil points at radii (h/2)/2^k for
    k <= depth, the coarse one for k <= depth-1; the two thresholds are
    Richardson-extrapolated (2*fine - coarse), which is exact both where
    the threshold is depth-independent and where it decays linearly with
    the innermost stencil radius.
    """

    def __init__(self, spec: FunctionSpec, grid: BoxGrid, depth: int):
        nodes = grid.axis(0)
        h = grid.spacing()[0]

        def build(num_radii: int) -> _Table1D:
            pts = [nodes]
            for k in range(num_radii):
                r = (h / 2.0) / 2**k
                pts.append(nodes - r)
                pts.append(nodes + r)
            cloud = np.concatenate(pts) if num_radii else nodes
            vals = spec.eval_points(cloud[:, None])
            return _Table1D(cloud, vals)

        if depth == 0:
            self.pair = (build(0),)
        else:
            self.pair = (build(depth), build(depth + 1))
        self.ladder = self.pair[-1].levels

    def eval_points(self, q: np.ndarray, extrapolate: bool = False) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        fine = self.pair[-1].threshold(q)
        if not extrapolate or len(self.pair) == 1:
            return fine
        # valid at nodes only: fine-only stencil points carry their own value
        coarse = self.pair[0].threshold(q)
        both = np.isfinite(fine) & np.isfinite(coarse)
        out = fine.copy()
        out[both] = fine[both] - (coarse[both] - fine[both])
        return out


def _halo_cloud(spec: FunctionSpec, grid: BoxGrid) -> tuple[np.ndarray, np.ndarray]:
    """Box nodes plus exterior probe points with their values (dim 2).

    Window semantics, evidence-gated: from every boundary node, the
    function is sampled along the outward face normal(s) at a geometric
    ladder of distances up to a horizon long enough that a sublevel set
    continuing through the boundary convexifies across the whole box.
    The probes join the sweep's point cloud with their actual values, so
    a hull only extends outward where the function really stays low.
    """
    pts = grid.points()
    vals = sample(spec, grid).values.ravel()
    horizon = 4.0 * grid.diameter() * 2**DEFAULT_REFINE_DEPTH / grid.min_spacing()
    ladder = [2.0 * grid.diameter(), horizon / 16.0, horizon / 4.0, horizon]
    normals = []
    for axis in range(2):
        for bound, sign in ((grid.lo[axis], -1.0), (grid.hi[axis], 1.0)):
            snap = 1e-9 * (1.0 + abs(bound))
            on_face = np.abs(pts[:, axis] - bound) <= snap
            if on_face.any():
                n = np.zeros(2)
                n[axis] = sign
                normals.append((on_face, n))
    halo = []
    for on_face, n in normals:
        base = pts[on_face]
        for dist in ladder:
            halo.append(base + dist * n)
    # corner nodes also probe diagonally
    corner_dirs = {}
    for on_face, n in normals:
        for idx in np.flatnonzero(on_face):
            corner_dirs.setdefault(idx, np.zeros(2))
            corner_dirs[idx] = corner_dirs[idx] + n
    diag = [(idx, d) for idx, d in corner_dirs.items() if np.all(d != 0)]
    for idx, d in diag:
        for dist in ladder:
            halo.append(pts[idx] + dist * d)
    if halo:
        halo_pts = np.concatenate([h.reshape(-1, 2) for h in halo], axis=0)
        halo_vals = spec.eval_points(halo_pts)
        pts = np.concatenate([pts, halo_pts], axis=0)
        vals = np.concatenate([vals, halo_vals])
    return pts, vals


class _Sweep2D:
    def __init__(self, spec: FunctionSpec, grid: BoxGrid, max_levels: int = MAX_LEVELS_2D):
        self.grid = grid
        pts, vals = _halo_cloud(spec, grid)
        finite = np.isfinite(vals)
        levels = np.unique(vals[finite])
        if len(levels) > max_levels:
            idx = np.unique(np.round(np.linspace(0, len(levels) - 1, max_levels)).astype(int))
            levels = levels[idx]
        self.levels = levels
        self.hulls = []
        order = np.argsort(vals[finite], kind="stable")
        fpts = pts[finite][order]
        fvals = vals[finite][order]
        for lam in levels:
            count = np.searchsorted(fvals, lam, side="right")
            self.hulls.append(convex_hull(fpts[:count], dim=2))
        self.ladder = levels

    def _inside(self, level_idx: int, q: np.ndarray) -> np.ndarray:
        return self.hulls[level_idx].contains_many(q)

    def eval_points(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float).reshape(-1, 2)
        m = len(q)
        n_levels = len(self.levels)
        out = np.full(m, INF)
        if n_levels == 0:
            return out
        top = self._inside(n_levels - 1, q)
        lo = np.full(m, -1)
        hi = np.where(top, n_levels - 1, n_levels)
        while True:
            active = hi - lo > 1
            active &= hi < n_levels
            if not active.any():
                break
            mid = (lo + hi) // 2
            for level in np.unique(mid[active]):
                sel = active & (mid == level)
                inside = self._inside(int(level), q[sel])
                hi[sel] = np.where(inside, level, hi[sel])
                lo[sel] = np.where(inside, lo[sel], mid[sel])
        ok = hi < n_levels
        out[ok] = self.levels[hi[ok]]
        return out


class LevelSweep:
    """Reusable sublevel sweep: node values plus point evaluation."""

    def __init__(self, spec: FunctionSpec, grid: BoxGrid, refine_depth: int, max_levels: int | None = None):
        if spec.dim != grid.dim:
            raise DimensionError(f"spec dim {spec.dim} != grid dim {grid.dim}")
        self.spec = spec
        self.grid = grid
        if grid.dim == 1:
            self._impl = _Sweep1D(spec, grid, refine_depth)
        else:
            self._impl = _Sweep2D(spec, grid, max_levels or MAX_LEVELS_2D)
        self.ladder = self._impl.ladder

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if self.grid.dim == 1:
            return self._impl.eval_points(pts.reshape(-1))
        return self._impl.eval_points(pts)

    def node_values(self) -> np.ndarray:
        if self.grid.dim == 1:
            return self._impl.eval_points(self.grid.axis(0), extrapolate=True).reshape(self.grid.shape)
        return self._impl.eval_points(self.grid.points()).reshape(self.grid.shape)

    def as_spec(self) -> FunctionSpec:
        if self.grid.dim == 1:
            def fn(xs):
                xs = np.asarray(xs, dtype=float)
                return self.eval_points(xs.ravel()).reshape(xs.shape)
        else:
            def fn(xs, ys):
                xs = np.asarray(xs, dtype=float)
                ys = np.broadcast_to(np.asarray(ys, dtype=float), xs.shape)
                pts = np.stack([xs.ravel(), ys.ravel()], axis=-1)
                return self.eval_points(pts).reshape(xs.shape)

        return FunctionSpec(name=f"lc({self.spec.name})", dim=self.grid.dim, fn=fn, coercive=self.spec.coercive)


def level_sweep(spec, grid, refine_depth: int = DEFAULT_REFINE_DEPTH, max_levels: int | None = None) -> LevelSweep:
    return LevelSweep(spec, grid, refine_depth, max_levels)


def lc_envelope(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> SampledFunction:
    """Level-convex envelope by the sublevel sweep inf{lambda : xi in co L_lambda}."""
    sweep = level_sweep(spec, grid, refine_depth)
    return SampledFunction(grid, sweep.node_values())


def lc_spec(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> FunctionSpec:
    return level_sweep(spec, grid, refine_depth).as_spec()


def lslc_envelope(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> SampledFunction:
    """lsc + level-convex envelope, computed as the ls envelope of the lc sweep."""
    return ls_envelope(lc_spec(spec, grid, refine_depth), grid, refine_depth)


def sublevel_lslc(spec: FunctionSpec, grid: BoxGrid, lam: float, eps: float) -> Polytope:
    """Hull of the inflated sublevel mask {f <= lambda + eps} (window semantics)."""
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if grid.dim == 1:
        vals = sample(spec, grid).values.ravel()
        pts = grid.points()[vals <= lam + eps]
        return convex_hull(pts.reshape(-1), dim=1)
    pts, vals = _halo_cloud(spec, grid)
    return convex_hull(pts[vals <= lam + eps], dim=2)


def effective_domain_hull(spec: FunctionSpec, grid: BoxGrid) -> Polytope:
    """Hull of the finite-valued sample points: the sampled form of co(dom f)."""
    if grid.dim == 1:
        vals = sample(spec, grid).values.ravel()
        pts = grid.points()[np.isfinite(vals)]
        return convex_hull(pts.reshape(-1), dim=1)
    pts, vals = _halo_cloud(spec, grid)
    return convex_hull(pts[np.isfinite(vals)], dim=2)


# ---------------------------------------------------------------------------
# hypothesis (H)


@dataclass(frozen=True)
class HypothesisHReport:
    holds: bool
    failing_lambda: float | None
    witness: tuple | None  # pair of sublevel points whose midpoint violates convexity
    interior_ok: dict


def _local_lipschitz(values: np.ndarray, spacing) -> np.ndarray:
    """Per-node max |finite difference| / h over axis neighbors (0 if none)."""
    lip = np.zeros_like(values)
    arr = values
    for axis in range(arr.ndim):
        h = spacing[axis]
        diff = np.abs(np.diff(arr, axis=axis)) / h
        diff = np.where(np.isfinite(diff), diff, 0.0)
        pad_lo = [(0, 0)] * arr.ndim
        pad_lo[axis] = (1, 0)
        pad_hi = [(0, 0)] * arr.ndim
        pad_hi[axis] = (0, 1)
        lip = np.maximum(lip, np.pad(diff, pad_lo))
        lip = np.maximum(lip, np.pad(diff, pad_hi))
    return lip


def _ambient_lipschitz(values: np.ndarray, spacing) -> np.ndarray:
    """Center-excluding slope estimate: per-axis central differences.

    Measures the variation of the surrounding branch without the node's
    own value, so an isolated spike is not excused by its own jump.
    Non-finite differences count as 0.
    """
    lip = np.zeros_like(values)
    for axis in range(values.ndim):
        h = spacing[axis]
        sl_lo = [slice(None)] * values.ndim
        sl_lo[axis] = slice(None, -2)
        sl_hi = [slice(None)] * values.ndim
        sl_hi[axis] = slice(2, None)
        central = np.abs(values[tuple(sl_hi)] - values[tuple(sl_lo)]) / (2.0 * h)
        central = np.where(np.isfinite(central), central, 0.0)
        pad = [(0, 0)] * values.ndim
        pad[axis] = (1, 1)
        lip = np.maximum(lip, np.pad(central, pad))
    return lip


def check_hypothesis_H(spec: FunctionSpec, grid: BoxGrid, lambda_probes) -> HypothesisHReport:
    """Sampled check of hypothesis (H): sublevels above the infimum are convex
    with nonempty interior.  Hulls here are raw in-box hulls (no window)."""
    probes = sorted(float(l) for l in lambda_probes)
    if not probes:
        raise ValueError("lambda_probes must be nonempty")
    sampled = sample(spec, grid)
    vals = sampled.values
    vmin = float(np.min(vals))
    if probes[0] <= vmin:
        raise ValueError(f"every probe must exceed the sampled infimum {vmin}")
    pts = grid.points()
    flat = vals.ravel()
    lip = _ambient_lipschitz(vals, grid.spacing()).ravel()
    h = grid.min_spacing()
    holds = True
    failing = None
    witness = None
    interior_ok = {}
    for lam in probes:
        mask = flat <= lam
        hull = convex_hull(pts[mask].reshape(-1) if grid.dim == 1 else pts[mask], dim=grid.dim)
        inside = hull.contains_many(pts.reshape(-1) if grid.dim == 1 else pts)
        viol = inside & (flat > lam + 2.0 * lip * h)
        interior_ok[lam] = _has_interior_node(mask.reshape(grid.shape))
        if viol.any() and holds:
            holds = False
            failing = lam
            witness = _midpoint_witness(pts, mask, np.flatnonzero(viol), grid)
        if not interior_ok[lam]:
            holds = False
            failing = failing if failing is not None else lam
    return HypothesisHReport(holds=holds, failing_lambda=failing, witness=witness, interior_ok=interior_ok)


def _has_interior_node(mask: np.ndarray) -> bool:
    if not mask.any():
        return False
    inner = mask.copy()
    for axis in range(mask.ndim):
        shifted_lo = np.roll(mask, 1, axis=axis)
        shifted_hi = np.roll(mask, -1, axis=axis)
        # roll wraps around: kill the faces
        sl_lo = [slice(None)] * mask.ndim
        sl_lo[axis] = 0
        sl_hi = [slice(None)] * mask.ndim
        sl_hi[axis] = -1
        shifted_lo[tuple(sl_lo)] = False
        shifted_hi[tuple(sl_hi)] = False
        inner &= shifted_lo & shifted_hi
    return bool(inner.any())


def _midpoint_witness(pts: np.ndarray, mask: np.ndarray, viol_indices: np.ndarray, grid: BoxGrid):
    """Pair of sublevel nodes whose midpoint is a violating node, if one exists."""
    members = pts[mask].reshape(-1, grid.dim)
    tol = 1e-9 * (1.0 + float(np.max(np.abs(pts))))
    for viol_idx in viol_indices:
        v = pts[viol_idx].reshape(-1)
        partners = 2.0 * v - members
        for cand, other in zip(partners, members):
            hit = np.all(np.abs(members - cand) <= tol, axis=1)
            if hit.any():
                return (tuple(members[np.argmax(hit)].tolist()), tuple(other.tolist()))
    return None


# ---------------------------------------------------------------------------
# Phi-equivariance and the report


def phi_equivariance_check(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> bool:
    """lslc(arctan f) vs arctan(lslc f): value gap within tol_phi and equal
    sublevel masks at matched probe levels chosen between attained values."""
    from .core import compose_phi

    plain = lslc_envelope(spec, grid, refine_depth).values
    composed = lslc_envelope(compose_phi(spec), grid, refine_depth).values
    mapped = np.arctan(plain)
    sampled = sample(spec, grid).values
    lip = float(np.max(_local_lipschitz(sampled, grid.spacing())))
    tol_phi = 1e-6 + lip * grid.min_spacing()
    if float(np.max(np.abs(composed - mapped))) > tol_phi:
        return False
    # probe levels sit midway across genuine value gaps, so the masks are
    # insensitive to float noise in either pipeline
    finite = np.unique(plain[np.isfinite(plain)])
    if len(finite) >= 2:
        gaps = np.diff(finite)
        floor = 1e-6 * (1.0 + float(np.abs(finite).max()))
        wide = np.flatnonzero(gaps > floor)
        for j in wide[:: max(1, len(wide) // 3)][:3]:
            lam = (finite[j] + finite[j + 1]) / 2.0
            if not np.array_equal(plain <= lam, composed <= np.arctan(lam)):
                return False
    return True


@dataclass(frozen=True)
class EnvelopeReport:
    """All four arrays plus sweep metadata for one function on one grid."""

    name: str
    grid: BoxGrid
    f: SampledFunction
    f_ls: SampledFunction
    f_lc: SampledFunction
    f_lslc: SampledFunction
    lambda_grid: np.ndarray
    eps_ladder: tuple
    refine_depth: int


def envelope_report(spec: FunctionSpec, grid: BoxGrid, refine_depth: int = DEFAULT_REFINE_DEPTH) -> EnvelopeReport:
    f = sample(spec, grid)
    f_ls = ls_envelope(spec, grid, refine_depth)
    sweep = level_sweep(spec, grid, refine_depth)
    f_lc = SampledFunction(grid, sweep.node_values())
    f_lslc = ls_envelope(sweep.as_spec(), grid, refine_depth)
    tol = value_tol(f.values, f_ls.values, f_lc.values, f_lslc.values)
    for low, high, label in (
        (f_lslc, f_lc, "f_lslc <= f_lc"),
        (f_lslc, f_ls, "f_lslc <= f_ls"),
        (f_lc, f, "f_lc <= f"),
        (f_ls, f, "f_ls <= f"),
    ):
        bad = low.values > high.values + tol
        bad &= ~(np.isinf(low.values) & np.isinf(high.values))
        if bad.any():
            raise ValueError(f"envelope ordering violated: {label}")
    h = grid.min_spacing()
    return EnvelopeReport(
        name=spec.name,
        grid=grid,
        f=f,
        f_ls=f_ls,
        f_lc=f_lc,
        f_lslc=f_lslc,
        lambda_grid=np.asarray(sweep.ladder),
        eps_ladder=(4 * h, 2 * h, h),
        refine_depth=refine_depth,
    )
