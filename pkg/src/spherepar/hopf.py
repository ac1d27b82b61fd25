"""The diagonal real Hopf manifold (R^{m+1} \\ 0) / Gamma, Gamma generated
by x -> e^{2 pi} x, identified with S^m x S^1.

The circle factor is carried as (cos t, sin t); the branch of
log|x| mod 2 pi never leaves this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frames import frame_B_s1
from .geometry import AmbientVector, Frame, FrameKind, GeometryError, ProductPoint, SpherePoint, torsion_coords

PERIOD = math.exp(2 * math.pi)


@dataclass(frozen=True)
class UpstairsPoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size < 2:
            raise GeometryError("need at least 2 coordinates")
        if not np.linalg.norm(c) > 0:
            raise GeometryError("the origin is not in the Hopf covering space")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.coords))


def _upstairs(x) -> UpstairsPoint:
    return x if isinstance(x, UpstairsPoint) else UpstairsPoint(x)


def angle(x) -> float:
    """log|x| mod 2 pi, in [0, 2 pi)."""
    return math.log(_upstairs(x).radius) % (2 * math.pi)


def project(x) -> ProductPoint:
    """x -> (x / |x|, log|x| mod 2 pi)."""
    x = _upstairs(x)
    r = x.radius
    t = math.log(r)
    return ProductPoint(SpherePoint(x.coords / r), SpherePoint([math.cos(t), math.sin(t)]))


def project_embedded(x) -> np.ndarray:
    """``project`` as a map into R^{m+1} x R^2, stacked; used for finite differences."""
    return project(x).stacked()


def pushforward(x, v) -> AmbientVector:
    """p_*(v) = |x|^{-1} (v - x omega(v)) + omega(v) d/dtheta,
    with omega = |x|^{-2} sum x_i dx_i and d/dtheta = (-y2, y1)."""
    x = _upstairs(x)
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != x.coords.size:
        raise GeometryError(f"vector has {v.size} components, base point {x.coords.size}")
    r = x.radius
    omega = float(x.coords @ v) / r**2
    y = project(x).y.coords
    return AmbientVector((v - omega * x.coords) / r, omega * torsion_coords(y))


def pushforward_matrix(x) -> np.ndarray:
    """(m+3) x (m+1) matrix of p_* on stacked ambient coordinates."""
    x = _upstairs(x)
    eye = np.eye(x.coords.size)
    return np.column_stack([pushforward(x, eye[:, i]).stacked() for i in range(x.coords.size)])


def pushed_frame(x) -> Frame:
    """b_i = p_*(|x| d/dx_i)."""
    x = _upstairs(x)
    r = x.radius
    eye = np.eye(x.coords.size)
    vecs = tuple(pushforward(x, r * eye[:, i]) for i in range(x.coords.size))
    return Frame(project(x), vecs, FrameKind.B_S1)


def finite_difference_jacobian(x, step: float = 1e-6) -> np.ndarray:
    """Central differences of ``project_embedded`` at x."""
    x = _upstairs(x).coords
    cols = []
    for i in range(x.size):
        h = np.zeros_like(x)
        h[i] = step
        cols.append((project_embedded(x + h) - project_embedded(x - h)) / (2 * step))
    return np.column_stack(cols)


def _check_perm(pi, size: int) -> tuple[int, ...]:
    pi = tuple(int(k) for k in pi)
    if sorted(pi) != list(range(1, size + 1)):
        raise GeometryError(f"{pi} is not a permutation of 1..{size}")
    return pi


def permute_point(pi, point: ProductPoint) -> ProductPoint:
    """f_pi(x, theta) = (x_{pi(1)}, ..., x_{pi(m+1)}, theta); pi is 1-based."""
    if point.n != 1:
        raise GeometryError("the permutation lemma lives on S^m x S^1")
    pi = _check_perm(pi, point.m + 1)
    idx = np.array(pi) - 1
    return ProductPoint(SpherePoint(point.x.coords[idx]), point.y)


def permute_vector(pi, v: AmbientVector) -> AmbientVector:
    """df_pi: permutes x-components the same way, theta-part unchanged."""
    pi = _check_perm(pi, v.xpart.size)
    return AmbientVector(v.xpart[np.array(pi) - 1], v.ypart)


def permutation_action(pi, point: ProductPoint) -> tuple[ProductPoint, Frame]:
    """Image point and the pushed B frame reordered so that entry i is
    df_pi(b_{pi(i)}); the lemma says this equals frame_B_s1 at the image."""
    image = permute_point(pi, point)
    b = frame_B_s1(point)
    pi = _check_perm(pi, point.m + 1)
    vecs = tuple(permute_vector(pi, b[pi[i]]) for i in range(len(pi)))
    return image, Frame(image, vecs, FrameKind.B_S1)


def permutation_residual(pi, point: ProductPoint) -> float:
    image, moved = permutation_action(pi, point)
    return float(np.max(np.abs(moved.matrix - frame_B_s1(image).matrix)))
