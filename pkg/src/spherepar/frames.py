"""Explicit orthonormal frames on S^m x S^n and their duals.

* ``frame_B_s1`` / ``frame_B_s3``: b_i = M_i + x_i T plus, on S^3, the
  quaternionic fields T_2, T_3.
* ``frame_product``: the same recipe for any frame supplied on the
  second factor.
* ``frame_P``: the frame for any odd n, obtained by pulling back the
  standard basis of R^{m-1} + R^{n+1} through ``chain_isomorphism``.

Coframes are stored as metric duals, which is exact for orthonormal frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    AmbientVector,
    Frame,
    FrameKind,
    GeometryError,
    ParityError,
    ProductPoint,
    gram,
    meridian,
    quaternion_coords,
    torsion_coords,
)

ORTHO_TOL = 1e-9
TANGENT_TOL = 1e-12
RANK_TOL = 1e-9


def _meridians(x: np.ndarray) -> np.ndarray:
    """Columns are M_1..M_{m+1} at x."""
    return np.eye(x.size) - np.outer(x, x)


def _require_n(point: ProductPoint, n: int):
    if point.n != n:
        raise GeometryError(f"this frame lives on S^m x S^{n}, got n={point.n}")


def _frame_from_columns(point, xcols, ycols, kind) -> Frame:
    vecs = tuple(AmbientVector(xcols[:, k], ycols[:, k]) for k in range(xcols.shape[1]))
    return Frame(point, vecs, kind)


def _b_columns(point: ProductPoint, t: np.ndarray):
    """x- and y-parts of b_i = M_i + x_i T for i = 1..m+1."""
    x = point.x.coords
    return _meridians(x), np.outer(t, x)


def frame_B_s1(point: ProductPoint) -> Frame:
    """b_i = M_i + x_i d/dtheta on S^m x S^1, with d/dtheta = (-y2, y1)."""
    _require_n(point, 1)
    xc, yc = _b_columns(point, torsion_coords(point.y.coords))
    return _frame_from_columns(point, xc, yc, FrameKind.B_S1)


def frame_B_s3(point: ProductPoint) -> Frame:
    """b_i = M_i + x_i T_1 (i <= m+1), b_{m+2} = T_2, b_{m+3} = T_3."""
    _require_n(point, 3)
    t1, t2, t3 = quaternion_coords(point.y.coords)
    xc, yc = _b_columns(point, t1)
    m = point.m
    xc = np.hstack([xc, np.zeros((m + 1, 2))])
    yc = np.hstack([yc, t2[:, None], t3[:, None]])
    return _frame_from_columns(point, xc, yc, FrameKind.B_S3)


def frame_product(point: ProductPoint, n_frame) -> Frame:
    """Frame on S^m x N from a frame T_1..T_n of N at y.

    ``n_frame`` entries may be AmbientVectors (only the y-part is used)
    or plain arrays of length n+1.  T_1 plays the role of T.
    """
    y = point.y.coords
    cols = []
    for v in n_frame:
        cols.append(np.asarray(v.ypart if isinstance(v, AmbientVector) else v, dtype=float).reshape(-1))
    if len(cols) != point.n:
        raise GeometryError(f"need {point.n} fields on the second factor, got {len(cols)}")
    tmat = np.column_stack(cols)
    if tmat.shape[0] != y.size:
        raise GeometryError("second-factor fields have the wrong ambient length")
    if np.max(np.abs(y @ tmat)) > TANGENT_TOL:
        raise GeometryError("second-factor fields are not tangent at y")
    if abs(np.linalg.det(tmat.T @ tmat)) < RANK_TOL:
        raise GeometryError("second-factor fields are rank deficient")
    m = point.m
    xc, yc = _b_columns(point, tmat[:, 0])
    xc = np.hstack([xc, np.zeros((m + 1, point.n - 1))])
    yc = np.hstack([yc, tmat[:, 1:]])
    return _frame_from_columns(point, xc, yc, FrameKind.B_GENERIC)


def frame_P_columns(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Stacked (m+n+2) x (m+n) matrix of the frame P at (x, y)."""
    m1, n1 = x.size, y.size
    m = m1 - 1
    t = torsion_coords(y)
    mer = _meridians(x)
    out = np.zeros((m1 + n1, m1 + n1 - 2))
    # p_i = M_i + x_i T, i = 1..m-1
    out[:m1, : m - 1] = mer[:, : m - 1]
    out[m1:, : m - 1] = np.outer(t, x[: m - 1])
    # p_{m-1+j} = y_j M_m + t_j M_{m+1} + (t_j x_{m+1} + y_j x_m - t_j) T + N_j
    xm, xm1 = x[m - 1], x[m]
    coef = t * xm1 + y * xm - t
    out[:m1, m - 1 :] = np.outer(mer[:, m - 1], y) + np.outer(mer[:, m], t)
    out[m1:, m - 1 :] = np.outer(t, coef) + _meridians(y)
    return out


def frame_P(point: ProductPoint) -> Frame:
    if point.n % 2 == 0:
        raise ParityError(f"frame P needs odd n, got n={point.n}")
    cols = frame_P_columns(point.x.coords, point.y.coords)
    m1 = point.m + 1
    return _frame_from_columns(point, cols[:m1], cols[m1:], FrameKind.P)


def frame_B(point: ProductPoint) -> Frame:
    """The B frame matching the parity class of ``point`` (n = 1 or 3)."""
    if point.n == 1:
        return frame_B_s1(point)
    if point.n == 3:
        return frame_B_s3(point)
    raise GeometryError(f"no closed-form B frame for n={point.n}")


def build_frame(kind: FrameKind | str, point: ProductPoint) -> Frame:
    kind = FrameKind(kind)
    if kind is FrameKind.B_S1:
        return frame_B_s1(point)
    if kind is FrameKind.B_S3:
        return frame_B_s3(point)
    if kind is FrameKind.P:
        return frame_P(point)
    raise GeometryError("B_GENERIC needs an explicit second-factor frame, use frame_product")


@dataclass(frozen=True)
class Coframe:
    """Dual 1-forms, each stored as the vector it is metric-dual to."""

    base: ProductPoint
    covectors: tuple[AmbientVector, ...]

    def __len__(self):
        return len(self.covectors)

    def __getitem__(self, i: int) -> AmbientVector:
        if not 1 <= i <= len(self.covectors):
            raise IndexError(f"coframe index {i} outside 1..{len(self.covectors)}")
        return self.covectors[i - 1]

    def pairing(self, frame: Frame) -> np.ndarray:
        """Matrix whose (i, j) entry is covector i applied to vector j."""
        a = np.column_stack([c.stacked() for c in self.covectors])
        return a.T @ frame.matrix


def coframe(frame: Frame) -> Coframe:
    res = frame.orthonormality_residual()
    if res > ORTHO_TOL:
        raise GeometryError(f"frame is not orthonormal (residual {res:.3e}); metric dual refused")
    return Coframe(frame.base, frame.vectors)


def auxiliary_form(point: ProductPoint) -> AmbientVector:
    """The 1-form dual to T (d theta when n = 1, tau when n = 3)."""
    return AmbientVector(np.zeros(point.m + 1), torsion_coords(point.y.coords))


def closed_form_coframe(kind: FrameKind | str, point: ProductPoint) -> Coframe:
    """Coframes written out from their displayed formulas, independent of
    :func:`coframe`.

    B on S^m x S^1:  b^i = dx_i| + x_i dtheta
    B on S^m x S^3:  b^i = x_i tau + dx_i|,  b^{m+j} = tau_j
    P (n = 1, 3):    P* = B* A with the change-of-basis block
    """
    kind = FrameKind(kind)
    x = point.x.coords
    m1 = x.size
    zero_y = np.zeros(point.n + 1)
    dx = [AmbientVector(_meridians(x)[:, i], zero_y) for i in range(m1)]
    if kind is FrameKind.B_S1:
        dtheta = auxiliary_form(point)
        return Coframe(point, tuple(dx[i] + x[i] * dtheta for i in range(m1)))
    if kind is FrameKind.B_S3:
        taus = [AmbientVector(np.zeros(m1), t) for t in quaternion_coords(point.y.coords)]
        cov = [x[i] * taus[0] + dx[i] for i in range(m1)] + taus[1:]
        return Coframe(point, tuple(cov))
    if kind is FrameKind.P:
        bstar = closed_form_coframe(FrameKind.B_S1 if point.n == 1 else FrameKind.B_S3, point)
        a = change_of_basis(point, point.n).matrix
        bmat = np.column_stack([c.stacked() for c in bstar.covectors])
        pmat = bmat @ a
        return Coframe(point, tuple(AmbientVector.from_stacked(pmat[:, k], point.m) for k in range(pmat.shape[1])))
    raise GeometryError(f"no closed-form coframe for {kind.value}")


@dataclass(frozen=True)
class ChangeOfBasis:
    """P = B A with A = diag(I_{m-1}, rotation block in y)."""

    size: int
    matrix: np.ndarray

    def orthogonality_residual(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix.T - np.eye(self.size))))


def change_of_basis_block(y: np.ndarray) -> np.ndarray:
    """The (n+1) x (n+1) lower-right block for n = 1 or 3.

    Column j is (y_j, t_j) for n = 1 and (y_j, t_j, (T_2)_j, (T_3)_j)
    for n = 3.
    """
    y = np.asarray(y, dtype=float)
    if y.size == 2:
        return np.vstack([y, torsion_coords(y)])
    if y.size == 4:
        return np.vstack([y, *quaternion_coords(y)])
    raise GeometryError(f"change of basis is only displayed for n in (1, 3), got n={y.size - 1}")


def change_of_basis(point: ProductPoint, n: int) -> ChangeOfBasis:
    if n not in (1, 3):
        raise GeometryError(f"change of basis is only defined for n in (1, 3), got {n}")
    _require_n(point, n)
    m = point.m
    size = m + n
    a = np.zeros((size, size))
    a[: m - 1, : m - 1] = np.eye(m - 1)
    a[m - 1 :, m - 1 :] = change_of_basis_block(point.y.coords)
    return ChangeOfBasis(size, a)


@dataclass(frozen=True)
class ChainIsomorphism:
    """T_x S^m + T_y S^n  ->  R^{m-1} + R^{n+1}.

    alpha sends T to the normal M of S^m; beta then sends d/dx_m to the
    normal N of S^n and d/dx_{m+1} to T.
    """

    base: ProductPoint

    def _parts(self):
        x = self.base.x.coords
        y = self.base.y.coords
        return x, y, torsion_coords(y)

    def forward(self, v: AmbientVector) -> np.ndarray:
        x, y, t = self._parts()
        m = x.size - 1
        a, b = v.xpart, v.ypart
        s = float(b @ t)
        b_perp = b - s * t
        w = a + s * x  # alpha: <b,T> T  ->  <b,T> M
        ypart = w[m - 1] * y + w[m] * t + b_perp  # beta
        return np.concatenate([w[: m - 1], ypart])

    def inverse(self, values) -> AmbientVector:
        x, y, t = self._parts()
        m = x.size - 1
        values = np.asarray(values, dtype=float).reshape(-1)
        c, d = values[: m - 1], values[m - 1 :]
        wm, wm1 = float(d @ y), float(d @ t)
        b_perp = d - wm * y - wm1 * t
        w = np.concatenate([c, [wm, wm1]])
        s = float(w @ x)
        return AmbientVector(w - s * x, s * t + b_perp)

    def matrix(self) -> np.ndarray:
        """(m+n) x (m+n+2) matrix of ``forward`` on stacked ambient vectors."""
        m = self.base.m
        dim = m + self.base.n + 2
        eye = np.eye(dim)
        return np.column_stack([self.forward(AmbientVector.from_stacked(eye[:, k], m)) for k in range(dim)])

    def pulled_back_basis(self) -> Frame:
        size = self.base.m + self.base.n
        eye = np.eye(size)
        return Frame(self.base, tuple(self.inverse(eye[:, k]) for k in range(size)), FrameKind.P)


def chain_isomorphism(point: ProductPoint) -> ChainIsomorphism:
    if point.n % 2 == 0:
        raise ParityError(f"the isomorphism chain needs odd n, got n={point.n}")
    return ChainIsomorphism(point)


__all__ = [
    "ChainIsomorphism",
    "ChangeOfBasis",
    "Coframe",
    "auxiliary_form",
    "build_frame",
    "chain_isomorphism",
    "change_of_basis",
    "closed_form_coframe",
    "coframe",
    "frame_B",
    "frame_B_s1",
    "frame_B_s3",
    "frame_P",
    "frame_P_columns",
    "frame_product",
    "gram",
]
