"""Convex hulls and membership queries behind every sublevel-set formula.

Polytopes are closed convex sets: an interval in dim 1, a convex polygon
(possibly degenerate: empty, point, segment) in dim 2.  Membership uses
closed-set semantics with a signed-distance band, because the envelope
formulas are stated through closures.
"""

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, SampledFunction, INF

GEOM_REL_TOL = 1e-12

__all__ = ["GEOM_REL_TOL", "Polytope", "convex_hull", "contains", "lower_hull_epigraph", "lower_hull_values"]


@dataclass(frozen=True)
class Polytope:
    """Closed convex polytope in R^1 or R^2 with vertex representation.

    dim 1: vertices is a sorted (k,) array, k <= 2 (interval endpoints).
    dim 2: vertices is a (k, 2) array, counterclockwise, strictly convex
    (no retained collinear triple), starting at the lexicographic minimum.
    """

    dim: int
    vertices: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.vertices, dtype=float)
        if self.dim == 1:
            arr = arr.reshape(-1)
        elif self.dim == 2:
            arr = arr.reshape(-1, 2)
        else:
            raise DimensionError(f"polytope dim must be 1 or 2, got {self.dim}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "vertices", arr)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def scale(self) -> float:
        if self.is_empty:
            return 1.0
        return 1.0 + float(np.max(np.abs(self.vertices)))

    def contains(self, point, tol: float | None = None) -> bool:
        pts = np.asarray(point, dtype=float).reshape(1, -1) if self.dim == 2 else np.asarray([point], dtype=float)
        return bool(self.contains_many(pts, tol)[0])

    def contains_many(self, points, tol: float | None = None) -> np.ndarray:
        """Vectorized closed membership within signed distance `tol`."""
        if tol is None:
            tol = GEOM_REL_TOL * self.scale()
        if self.dim == 1:
            pts = np.asarray(points, dtype=float).reshape(-1)
            if self.is_empty:
                return np.zeros(pts.shape, dtype=bool)
            a, b = self.vertices[0], self.vertices[-1]
            return (pts >= a - tol) & (pts <= b + tol)
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        k = len(self.vertices)
        if k == 0:
            return np.zeros(len(pts), dtype=bool)
        if k == 1:
            d = np.hypot(*(pts - self.vertices[0]).T)
            return d <= tol
        if k == 2:
            return _segment_distance(pts, self.vertices[0], self.vertices[1]) <= tol
        v = self.vertices
        nxt = np.roll(v, -1, axis=0)
        edge = nxt - v
        length = np.hypot(edge[:, 0], edge[:, 1])
        # signed distance of p from each edge line, positive on the interior side
        dx = pts[:, None, 0] - v[None, :, 0]
        dy = pts[:, None, 1] - v[None, :, 1]
        cross = edge[None, :, 0] * dy - edge[None, :, 1] * dx
        signed = cross / length[None, :]
        return np.all(signed >= -tol, axis=1)


def _segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    denom = float(d @ d)
    if denom == 0.0:
        return np.hypot(*(pts - a).T)
    t = np.clip(((pts - a) @ d) / denom, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.hypot(*(pts - proj).T)


def convex_hull(points, dim: int | None = None) -> Polytope:
    """Smallest convex polytope containing `points` (possibly empty).

    dim 2 uses a monotone chain over lexicographically sorted points;
    collinear vertices are dropped with a cross-product tolerance of
    GEOM_REL_TOL times the bounding-box scale, so output is deterministic.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        if dim is None:
            raise DimensionError("cannot infer dimension of an empty point set")
        return Polytope(dim, np.zeros((0, 2)) if dim == 2 else np.zeros(0))
    if pts.ndim == 1:
        pts = pts[:, None]
    d = pts.shape[1]
    if dim is not None and dim != d:
        raise DimensionError(f"points have dim {d}, expected {dim}")
    if d == 1:
        return Polytope(1, np.array([pts.min(), pts.max()]) if pts.min() < pts.max() else np.array([pts.min()]))
    if d != 2:
        raise DimensionError(f"hulls supported in dim 1 and 2 only, got {d}")

    uniq = np.unique(pts, axis=0)  # lexicographic sort, ties on x broken by y
    if len(uniq) == 1:
        return Polytope(2, uniq)
    span = float(np.max(uniq.max(axis=0) - uniq.min(axis=0)))
    tol_geom = GEOM_REL_TOL * max(span, 1.0)

    def chain(seq):
        out = []
        for p in seq:
            while len(out) > 1:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= tol_geom:
                    out.pop()
                else:
                    break
            out.append((p[0], p[1]))
        return out

    lower = chain(uniq)
    upper = chain(uniq[::-1])
    verts = lower[:-1] + upper[:-1]
    if len(verts) <= 2:
        # all points collinear: keep a segment (or point)
        arr = np.array([lower[0], lower[-1]]) if len(lower) > 1 else np.array(lower)
        return Polytope(2, np.unique(arr, axis=0))
    return Polytope(2, np.array(verts))


def contains(poly: Polytope, point, tol: float) -> bool:
    """Closed membership of `point` in `poly` within signed distance `tol`."""
    return poly.contains(point, tol)


def lower_hull_values(xs: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Convex envelope of the points (xs, vs), evaluated back at xs.

    xs must be strictly increasing and vs finite.  The result is the
    restriction to xs of the lower convex hull of the point set, i.e. of
    the convex envelope of the piecewise-linear interpolant.
    """
    xs = np.asarray(xs, dtype=float)
    vs = np.asarray(vs, dtype=float)
    hull_x = []
    hull_v = []
    for x, v in zip(xs, vs):
        while len(hull_x) > 1:
            x0, v0 = hull_x[-2], hull_v[-2]
            x1, v1 = hull_x[-1], hull_v[-1]
            # drop the middle point when it lies on or above the chord
            if (v1 - v0) * (x - x0) >= (v - v0) * (x1 - x0):
                hull_x.pop()
                hull_v.pop()
            else:
                break
        hull_x.append(float(x))
        hull_v.append(float(v))
    return np.interp(xs, hull_x, hull_v)


def lower_hull_epigraph(f: SampledFunction) -> SampledFunction:
    """Restriction to grid nodes of the convex envelope of the sampled data.

    +inf nodes are excluded from the hull; they are re-assigned the hull
    value at their abscissa when it falls inside the hull's domain and
    stay +inf outside.
    """
    if f.grid.dim != 1:
        raise DimensionError("lower_hull_epigraph implemented for dim 1")
    xs = f.grid.axis(0)
    finite = f.finite_mask()
    if not finite.any():
        raise ValueError("lower_hull_epigraph needs at least one finite value")
    hull_vals = lower_hull_values(xs[finite], f.values[finite])
    out = np.full_like(f.values, INF)
    out[finite] = hull_vals
    xf = xs[finite]
    inside = (~finite) & (xs >= xf[0]) & (xs <= xf[-1])
    if inside.any():
        out[inside] = np.interp(xs[inside], xf, hull_vals)
    return SampledFunction(f.grid, out)
