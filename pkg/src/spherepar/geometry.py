"""Points on spheres and on products of two spheres, ambient tangent vectors,
seeded sampling and the elementary vector fields used by every frame.

Tangent vectors of S^m x S^n are stored in ambient coordinates
R^{m+1} + R^{n+1}.  The circle S^1 sits in R^2 and the angular field is
the vector (-y2, y1).  Indices in the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

UNIT_TOL = 1e-12
REJECT_TOL = 1e-9


class GeometryError(ValueError):
    """Bad dimension, index or non-unit input."""


class ParityError(GeometryError):
    """An odd-sphere construction was asked for on an even sphere."""


def _as_vector(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpherePoint:
    """A point of the unit sphere S^dim in R^{dim+1}.

    Coordinates within 1e-9 of unit norm are renormalized; anything
    farther is rejected.  Use :func:`normalize` for raw data.
    """

    coords: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        c = _as_vector(self.coords)
        if c.size < 2:
            raise GeometryError("a sphere point needs at least 2 coordinates")
        if not np.all(np.isfinite(c)):
            raise GeometryError("non-finite coordinates")
        r = float(np.linalg.norm(c))
        if abs(r - 1.0) > REJECT_TOL:
            raise GeometryError(f"|coords| = {r!r} is not within {REJECT_TOL} of 1")
        if abs(r - 1.0) > UNIT_TOL:
            c = _as_vector(c / r)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "dim", c.size - 1)

    def __len__(self):
        return self.coords.size

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


def normalize(values) -> SpherePoint:
    """Radially project a nonzero vector onto the unit sphere."""
    v = np.asarray(values, dtype=float).reshape(-1)
    r = np.linalg.norm(v)
    if not r > 0:
        raise GeometryError("cannot normalize the zero vector")
    return SpherePoint(v / r)


@dataclass(frozen=True)
class ProductPoint:
    """A point (x, y) of S^m x S^n.  Parity of n is checked by the frame
    constructors, not here."""

    x: SpherePoint
    y: SpherePoint

    @classmethod
    def from_coords(cls, x, y) -> "ProductPoint":
        return cls(SpherePoint(x), SpherePoint(y))

    @property
    def m(self) -> int:
        return self.x.dim

    @property
    def n(self) -> int:
        return self.y.dim

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.x.coords, self.y.coords])


@dataclass(frozen=True)
class AmbientVector:
    """A vector of R^{m+1} + R^{n+1}.  ``ypart`` may be empty for
    single-sphere work.  Tangency is a predicate, see :meth:`is_tangent`."""

    xpart: np.ndarray
    ypart: np.ndarray = field(default_factory=lambda: _as_vector([]))

    def __post_init__(self):
        object.__setattr__(self, "xpart", _as_vector(self.xpart))
        object.__setattr__(self, "ypart", _as_vector(self.ypart))

    @classmethod
    def from_stacked(cls, values, m: int) -> "AmbientVector":
        v = np.asarray(values, dtype=float).reshape(-1)
        return cls(v[: m + 1], v[m + 1 :])

    @property
    def shape(self) -> tuple[int, int]:
        return self.xpart.size, self.ypart.size

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.xpart, self.ypart])

    def _check(self, other: "AmbientVector"):
        if self.shape != other.shape:
            raise GeometryError(f"ambient dimension mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check(other)
        return AmbientVector(self.xpart + other.xpart, self.ypart + other.ypart)

    def __sub__(self, other):
        self._check(other)
        return AmbientVector(self.xpart - other.xpart, self.ypart - other.ypart)

    def __neg__(self):
        return AmbientVector(-self.xpart, -self.ypart)

    def __mul__(self, s):
        return AmbientVector(s * self.xpart, s * self.ypart)

    __rmul__ = __mul__

    def dot(self, other: "AmbientVector") -> float:
        self._check(other)
        return float(self.xpart @ other.xpart + self.ypart @ other.ypart)

    def norm(self) -> float:
        return float(np.sqrt(self.dot(self)))

    def tangency_residual(self, point: ProductPoint) -> float:
        """max(|<xpart, x>|, |<ypart, y>|)."""
        rx = abs(float(self.xpart @ point.x.coords))
        ry = abs(float(self.ypart @ point.y.coords)) if self.ypart.size else 0.0
        return max(rx, ry)

    def is_tangent(self, point: ProductPoint, tol: float = UNIT_TOL) -> bool:
        return self.tangency_residual(point) <= tol

    def with_y(self, ypart) -> "AmbientVector":
        return AmbientVector(self.xpart, ypart)

    def with_x(self, xpart) -> "AmbientVector":
        return AmbientVector(xpart, self.ypart)


class FrameKind(str, Enum):
    B_S1 = "B_S1"
    B_S3 = "B_S3"
    B_GENERIC = "B_GENERIC"
    P = "P"


@dataclass(frozen=True)
class Frame:
    """An ordered family of ambient tangent vectors at ``base``."""

    base: ProductPoint
    vectors: tuple[AmbientVector, ...]
    kind: FrameKind

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i: int) -> AmbientVector:
        """1-based access, ``frame[1]`` is the first field."""
        if not 1 <= i <= len(self.vectors):
            raise IndexError(f"frame index {i} outside 1..{len(self.vectors)}")
        return self.vectors[i - 1]

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the stacked frame vectors."""
        if not self.vectors:
            return np.zeros((self.base.m + self.base.n + 2, 0))
        return np.column_stack([v.stacked() for v in self.vectors])

    def gram(self) -> np.ndarray:
        return gram(self.vectors)

    def orthonormality_residual(self) -> float:
        g = self.gram()
        return float(np.max(np.abs(g - np.eye(len(g))))) if g.size else 0.0

    def tangency_residual(self) -> float:
        return max((v.tangency_residual(self.base) for v in self.vectors), default=0.0)


def sample_point(m: int, n: int, rng_seed: int) -> ProductPoint:
    """Uniform point of S^m x S^n from normalized standard Gaussians.

    The generator is numpy's PCG64 (``default_rng``) seeded with
    ``rng_seed``; x is drawn before y.
    """
    return sample_points(m, n, 1, rng_seed)[0]


def sample_points(m: int, n: int, count: int, rng_seed: int) -> list[ProductPoint]:
    if m < 1 or n < 1:
        raise GeometryError(f"sphere dimensions must be >= 1, got m={m}, n={n}")
    rng = np.random.default_rng(rng_seed)
    out = []
    for _ in range(count):
        x = rng.standard_normal(m + 1)
        y = rng.standard_normal(n + 1)
        out.append(ProductPoint(normalize(x), normalize(y)))
    return out


def _check_index(i: int, size: int, name: str = "index"):
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= size:
        raise GeometryError(f"{name} {i} outside 1..{size}")


def _embed(vec: np.ndarray, where: str, other_dim: int) -> AmbientVector:
    zeros = np.zeros(other_dim)
    if where == "x":
        return AmbientVector(vec, zeros)
    return AmbientVector(zeros, vec)


def meridian(i: int, x: SpherePoint, *, other_dim: int = 0, factor: str = "x") -> AmbientVector:
    """The i-th meridian field e_i - x_i x of the sphere containing ``x``.

    By default the result lives in the x-factor with an empty y-part;
    ``factor="y"`` and ``other_dim`` place it in the y-factor of a product
    (the fields N_j).
    """
    _check_index(i, len(x))
    c = x.coords
    v = -c[i - 1] * c
    v[i - 1] += 1.0
    return _embed(v, factor, other_dim)


def normal(x: SpherePoint, *, other_dim: int = 0, factor: str = "x") -> AmbientVector:
    """The outward unit normal, i.e. the position vector itself."""
    return _embed(x.coords.copy(), factor, other_dim)


def torsion_coords(y: np.ndarray) -> np.ndarray:
    """Coordinates of complex multiplication by i on C^{(n+1)/2}:
    t_j = -y_{j+1} for odd j and t_j = y_{j-1} for even j.  Works along
    the last axis, so batches of points are fine."""
    y = np.asarray(y, dtype=float)
    t = np.empty_like(y)
    t[..., 0::2] = -y[..., 1::2]
    t[..., 1::2] = y[..., 0::2]
    return t


def _require_odd(n: int):
    if n % 2 == 0:
        raise ParityError(f"n={n} is even; odd sphere required")


def torsion(y: SpherePoint, *, other_dim: int = 0) -> AmbientVector:
    """The unit tangent field T on an odd sphere, in the y-factor."""
    _require_odd(y.dim)
    return _embed(torsion_coords(y.coords), "y", other_dim)


def quaternion_coords(y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    y1, y2, y3, y4 = np.moveaxis(np.asarray(y, dtype=float), -1, 0)
    t1 = np.stack([-y2, y1, -y4, y3], axis=-1)
    t2 = np.stack([-y3, y4, y1, -y2], axis=-1)
    t3 = np.stack([-y4, -y3, y2, y1], axis=-1)
    return t1, t2, t3


def quaternion_fields(y: SpherePoint, *, other_dim: int = 0) -> tuple[AmbientVector, AmbientVector, AmbientVector]:
    """Left multiplication by i, j, k on H = R^4, restricted to S^3."""
    if y.dim != 3:
        raise GeometryError(f"quaternionic fields need S^3, got S^{y.dim}")
    return tuple(_embed(t, "y", other_dim) for t in quaternion_coords(y.coords))


def gram(vectors) -> np.ndarray:
    """Pairwise inner products under the product metric."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, 0))
    shape = vectors[0].shape
    for v in vectors[1:]:
        if v.shape != shape:
            raise GeometryError(f"ambient dimension mismatch {shape} vs {v.shape}")
    mat = np.column_stack([v.stacked() for v in vectors])
    return mat.T @ mat
