"""Extended-real values, box grids, sampled functions, and supremand combinators.

Values live in (-inf, +inf].  IEEE +inf plays the role of the "plus
infinity" mark: max/min/comparisons against it are exact, so no tagged
union is needed.  -inf and NaN are rejected at ingestion; a caller that
wants a function unbounded below must pre-apply `truncate_below`.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

INF = math.inf

__all__ = [
    "INF",
    "DimensionError",
    "as_extended",
    "validate_extended_array",
    "value_scale",
    "value_tol",
    "BoxGrid",
    "grid1d",
    "grid2d",
    "FunctionSpec",
    "SampledFunction",
    "sample",
    "truncate_below",
    "coercify",
    "compose_phi",
    "interp_spec",
]


class DimensionError(ValueError):
    """Raised when operands have incompatible dimensions."""


def as_extended(value) -> float:
    """Validate a scalar as an extended value in (-inf, +inf]."""
    v = float(value)
    if math.isnan(v) or v == -INF:
        raise ValueError(f"extended value must lie in (-inf, +inf], got {value!r}")
    return v


def validate_extended_array(values) -> np.ndarray:
    """Return `values` as a float array, rejecting NaN and -inf entries."""
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any():
        raise ValueError("extended-value array contains NaN")
    if np.isneginf(arr).any():
        raise ValueError("extended-value array contains -inf")
    return arr


def value_scale(values) -> float:
    """Largest finite magnitude in `values` (0 if none)."""
    arr = np.asarray(values, dtype=float)
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        return 0.0
    return float(np.max(np.abs(finite)))


def value_tol(*arrays) -> float:
    """Float-noise tolerance 1e-9 * (1 + value scale) across the given arrays."""
    scale = max((value_scale(a) for a in arrays), default=0.0)
    return 1e-9 * (1.0 + scale)


@dataclass(frozen=True)
class BoxGrid:
    """Axis-aligned box with a uniform node lattice, dim 1 or 2.

    Node coordinates are lo + i*h with h = (hi-lo)/(nodes-1), endpoint
    included, so sampled arrays are bit-reproducible.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    nodes: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.lo) == len(self.hi) == len(self.nodes)):
            raise DimensionError("lo, hi, nodes must have equal length")
        if len(self.lo) not in (1, 2):
            raise DimensionError(f"grid dim must be 1 or 2, got {len(self.lo)}")
        for a, b, n in zip(self.lo, self.hi, self.nodes):
            if not a < b:
                raise ValueError(f"need lo < hi per axis, got [{a}, {b}]")
            if n < 2:
                raise ValueError(f"need at least 2 nodes per axis, got {n}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.nodes

    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / (n - 1) for a, b, n in zip(self.lo, self.hi, self.nodes))

    def min_spacing(self) -> float:
        return min(self.spacing())

    def axis(self, i: int) -> np.ndarray:
        h = self.spacing()[i]
        return self.lo[i] + np.arange(self.nodes[i]) * h

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays of shape `self.nodes` ('ij' indexing)."""
        axes = [self.axis(i) for i in range(self.dim)]
        if self.dim == 1:
            return (axes[0],)
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def points(self) -> np.ndarray:
        """All nodes as an (N, dim) array in C order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def diameter(self) -> float:
        return math.hypot(*(b - a for a, b in zip(self.lo, self.hi)))


def grid1d(lo: float, hi: float, nodes: int) -> BoxGrid:
    return BoxGrid((float(lo),), (float(hi),), (int(nodes),))


def grid2d(lo, hi, nodes) -> BoxGrid:
    lo = (float(lo[0]), float(lo[1]))
    hi = (float(hi[0]), float(hi[1]))
    if isinstance(nodes, int):
        nodes = (nodes, nodes)
    return BoxGrid(lo, hi, (int(nodes[0]), int(nodes[1])))


@dataclass(frozen=True)
class FunctionSpec:
    """An evaluable f: R^n -> (-inf, +inf], n in {1, 2}.

    `fn` is vectorized over coordinate arrays: fn(xs) in dim 1,
    fn(xs, ys) in dim 2, returning an array of extended values.
    Evaluation must be deterministic and total.
    """

    name: str
    dim: int
    fn: Callable[..., np.ndarray] = field(repr=False)
    coercive: bool = False

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DimensionError(f"spec dim must be 1 or 2, got {self.dim}")

    def eval_arrays(self, *axes: np.ndarray) -> np.ndarray:
        if len(axes) != self.dim:
            raise DimensionError(f"{self.name}: expected {self.dim} coordinate arrays, got {len(axes)}")
        out = np.broadcast_to(np.asarray(self.fn(*axes), dtype=float), np.broadcast_shapes(*(a.shape for a in axes)))
        return validate_extended_array(out)

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate on an (N, dim) point array."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.dim:
            raise DimensionError(f"{self.name}: points have dim {pts.shape[1]}, spec has dim {self.dim}")
        return self.eval_arrays(*(pts[:, i] for i in range(self.dim)))

    def __call__(self, *point) -> float:
        if len(point) == 1 and isinstance(point[0], (tuple, list, np.ndarray)):
            point = tuple(point[0])
        vals = self.eval_arrays(*(np.asarray([float(c)]) for c in point))
        return float(vals[0])


@dataclass(frozen=True)
class SampledFunction:
    """Node-indexed extended values on a BoxGrid (values.shape == grid.nodes)."""

    grid: BoxGrid
    values: np.ndarray

    def __post_init__(self):
        arr = validate_extended_array(self.values)
        if arr.shape != self.grid.shape:
            raise DimensionError(f"values shape {arr.shape} != grid shape {self.grid.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def min(self) -> float:
        return float(np.min(self.values))


def sample(spec: FunctionSpec, grid: BoxGrid) -> SampledFunction:
    """Evaluate `spec` exactly at every grid node."""
    if spec.dim != grid.dim:
        raise DimensionError(f"spec dim {spec.dim} != grid dim {grid.dim}")
    values = spec.eval_arrays(*grid.mesh())
    return SampledFunction(grid, values)


def truncate_below(spec: FunctionSpec, m: float) -> FunctionSpec:
    """max(f, -m): the standard approximation of an f unbounded below."""
    m = float(m)
    if m < 0:
        raise ValueError(f"truncation level m must be >= 0, got {m}")
    return FunctionSpec(
        name=f"truncate({spec.name},{m:g})",
        dim=spec.dim,
        fn=lambda *axes: np.maximum(spec.eval_arrays(*axes), -m),
        coercive=spec.coercive,
    )


def coercify(spec: FunctionSpec, n: int) -> FunctionSpec:
    """max(f, |xi|/n): a coercive majorant-of-norm regularization, decreasing in n."""
    n = int(n)
    if n < 1:
        raise ValueError(f"coercification index n must be >= 1, got {n}")

    def fn(*axes):
        if spec.dim == 1:
            norm = np.abs(axes[0])
        else:
            norm = np.hypot(axes[0], axes[1])
        return np.maximum(spec.eval_arrays(*axes), norm / n)

    return FunctionSpec(name=f"coercify({spec.name},{n})", dim=spec.dim, fn=fn, coercive=True)


def compose_phi(spec: FunctionSpec) -> FunctionSpec:
    """arctan(f), with arctan(+inf) = pi/2; bounded in (-pi/2, pi/2]."""
    return FunctionSpec(
        name=f"arctan({spec.name})",
        dim=spec.dim,
        fn=lambda *axes: np.arctan(spec.eval_arrays(*axes)),
        coercive=False,
    )


def interp_spec(sampled: SampledFunction, name: str | None = None) -> FunctionSpec:
    """Wrap a sampled function as a spec via multilinear interpolation.

    Cells with any +inf corner evaluate to +inf; coordinates outside the
    box are clamped to the boundary.  Queries landing exactly on a node
    return the stored node value.
    """
    grid = sampled.grid
    vals = sampled.values
    axes = [grid.axis(i) for i in range(grid.dim)]
    spacing = grid.spacing()

    def locate(q, i):
        a = axes[i]
        h = spacing[i]
        qc = np.clip(q, a[0], a[-1])
        idx = np.clip(((qc - a[0]) / h).astype(int), 0, len(a) - 2)
        t = np.clip((qc - a[idx]) / h, 0.0, 1.0)
        snap_lo = np.abs(qc - a[idx]) <= 1e-12 * (1.0 + np.abs(a[idx]))
        snap_hi = np.abs(qc - a[idx + 1]) <= 1e-12 * (1.0 + np.abs(a[idx + 1]))
        t = np.where(snap_lo, 0.0, np.where(snap_hi, 1.0, t))
        return idx, t

    def combine(v0, v1, t):
        # linear blend that keeps cells with an infinite endpoint infinite
        with np.errstate(invalid="ignore"):
            out = np.where(t == 0.0, v0, np.where(t == 1.0, v1, v0 + t * (v1 - v0)))
        hit_inf = ((np.isinf(v0) & (t < 1.0)) | (np.isinf(v1) & (t > 0.0)))
        return np.where(hit_inf, INF, out)

    if grid.dim == 1:
        def fn(xs):
            xs = np.asarray(xs, dtype=float)
            idx, t = locate(xs.ravel(), 0)
            out = combine(vals[idx], vals[idx + 1], t)
            return out.reshape(xs.shape)
    else:
        def fn(xs, ys):
            xs = np.asarray(xs, dtype=float)
            ys = np.broadcast_to(np.asarray(ys, dtype=float), xs.shape)
            ix, tx = locate(xs.ravel(), 0)
            iy, ty = locate(ys.ravel(), 1)
            v00 = vals[ix, iy]
            v10 = vals[ix + 1, iy]
            v01 = vals[ix, iy + 1]
            v11 = vals[ix + 1, iy + 1]
            lo = combine(v00, v10, tx)
            hi = combine(v01, v11, tx)
            out = combine(lo, hi, ty)
            return out.reshape(xs.shape)

    return FunctionSpec(name=name or f"interp({id(sampled):x})", dim=grid.dim, fn=fn)
