"""Recursive embedding of S^{n_1} x ... x S^{n_r} in R^{n_1+...+n_r+1}.

Level 1 is the inclusion S^{n_1} in R^{n_1+1} with its first coordinate
shifted to be >= 1.  Level k drops the first coordinate g_1 of level
k-1 and appends xi * sqrt(g_1) for the new factor xi.  For k < r the
first coordinate of the level output is shifted again before the next
level uses it; the final level is left unshifted (r >= 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, SpherePoint, normalize

RANK_TOL = 1e-7
FD_STEP = 1e-6


class RangeError(GeometryError):
    """The vector is not in the image of the embedding."""


@dataclass(frozen=True)
class MultiProductPoint:
    factors: tuple[SpherePoint, ...]

    def __post_init__(self):
        f = tuple(p if isinstance(p, SpherePoint) else SpherePoint(p) for p in self.factors)
        if not f:
            raise GeometryError("need at least one factor")
        object.__setattr__(self, "factors", f)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.factors)


def _shifts_for(dims) -> tuple[float, ...]:
    """Minimal shifts making each entering first coordinate >= 1.

    Tracks a bound on |coordinate| through the levels: level 1 has
    coordinates in [-1, 1]; a new block xi * sqrt(g_1) is bounded by
    sqrt(max g_1).
    """
    bounds = [1.0] * (dims[0] + 1)
    shifts = []
    for k, nk in enumerate(dims):
        s = 1.0 + bounds[0]
        shifts.append(s)
        if k == len(dims) - 1:
            break
        top = bounds[0] + s
        bounds = bounds[1:] + [math.sqrt(top)] * (dims[k + 1] + 1)
    return tuple(shifts[: max(len(dims) - 1, 1)])


@dataclass(frozen=True)
class EmbeddingSpec:
    dims: tuple[int, ...]
    shifts: tuple[float, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise GeometryError("dims must be nonempty")
        if any(d < 1 for d in dims):
            raise GeometryError(f"sphere dimensions must be >= 1, got {dims}")
        shifts = tuple(float(s) for s in self.shifts) or _shifts_for(dims)
        if len(shifts) != max(len(dims) - 1, 1):
            raise GeometryError(f"need {max(len(dims) - 1, 1)} shifts for {len(dims)} factors")
        if any(s < 1 for s in shifts):
            raise GeometryError("every shift must be >= 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "shifts", shifts)

    @property
    def output_dim(self) -> int:
        return sum(self.dims) + 1


def _check(spec: EmbeddingSpec, point: MultiProductPoint):
    if point.dims != spec.dims:
        raise GeometryError(f"point dims {point.dims} do not match spec {spec.dims}")


def embed_levels(spec: EmbeddingSpec, point: MultiProductPoint) -> list[np.ndarray]:
    """Outputs of every level before the next-level shift is applied; the
    last entry is the embedding."""
    _check(spec, point)
    out = []
    g = point.factors[0].coords.copy()
    g[0] += spec.shifts[0]
    if len(spec.dims) == 1:
        return [g]
    for k in range(1, len(spec.dims)):
        xi = point.factors[k].coords
        h = np.concatenate([g[1:], xi * math.sqrt(g[0])])
        out.append(h)
        if k < len(spec.dims) - 1:
            g = h.copy()
            g[0] += spec.shifts[k]
    return out


def entering_first_coordinates(spec: EmbeddingSpec, point: MultiProductPoint) -> list[float]:
    """The first coordinate fed into each level's square root."""
    _check(spec, point)
    vals = [point.factors[0].coords[0] + spec.shifts[0]]
    for k, h in enumerate(embed_levels(spec, point)[:-1], start=1):
        vals.append(h[0] + spec.shifts[k])
    return vals


def embed(spec: EmbeddingSpec, point: MultiProductPoint) -> np.ndarray:
    return embed_levels(spec, point)[-1]


def embed_inverse(spec: EmbeddingSpec, image, tol: float = 1e-9) -> MultiProductPoint:
    v = np.asarray(image, dtype=float).reshape(-1)
    if v.size != spec.output_dim:
        raise GeometryError(f"image has {v.size} coordinates, expected {spec.output_dim}")
    dims = spec.dims
    factors = []
    for k in range(len(dims) - 1, 0, -1):
        block = v[-(dims[k] + 1):]
        g1 = float(block @ block)
        if g1 < 1 - tol:
            raise RangeError(f"level {k + 1}: squared block norm {g1:.3e} is below the shift floor 1")
        factors.append(SpherePoint(_unit(block / math.sqrt(g1), tol)))
        g = np.concatenate([[g1], v[: -(dims[k] + 1)]])
        g[0] -= spec.shifts[k - 1]
        v = g
    v = v.copy()
    if len(dims) == 1:
        v[0] -= spec.shifts[0]
    factors.append(SpherePoint(_unit(v, tol)))
    return MultiProductPoint(tuple(reversed(factors)))


def _unit(v: np.ndarray, tol: float) -> np.ndarray:
    r = np.linalg.norm(v)
    if abs(r - 1) > tol:
        raise RangeError(f"recovered factor has norm {r!r}, not on the sphere")
    return v / r


def tangent_basis(p: SpherePoint) -> np.ndarray:
    """Orthonormal basis of T_p S^dim as columns."""
    q, _ = np.linalg.qr(np.column_stack([p.coords, np.eye(p.coords.size)]))
    return q[:, 1:]


def jacobian(spec: EmbeddingSpec, point: MultiProductPoint, step: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian along an orthonormal tangent basis of
    each factor (moving along great circles)."""
    _check(spec, point)
    cols = []
    for k, p in enumerate(point.factors):
        for v in tangent_basis(p).T:
            plus = list(point.factors)
            minus = list(point.factors)
            plus[k] = SpherePoint(math.cos(step) * p.coords + math.sin(step) * v)
            minus[k] = SpherePoint(math.cos(step) * p.coords - math.sin(step) * v)
            diff = embed(spec, MultiProductPoint(tuple(plus))) - embed(spec, MultiProductPoint(tuple(minus)))
            cols.append(diff / (2 * step))
    return np.column_stack(cols)


def immersion_rank(spec: EmbeddingSpec, point: MultiProductPoint, tol: float = RANK_TOL) -> int:
    sv = np.linalg.svd(jacobian(spec, point), compute_uv=False)
    return int(np.sum(sv > tol))


def sample_multi(dims, count: int, rng_seed: int) -> list[MultiProductPoint]:
    rng = np.random.default_rng(rng_seed)
    return [
        MultiProductPoint(tuple(normalize(rng.standard_normal(d + 1)) for d in dims)) for _ in range(count)
    ]
