"""Exact sparse polynomials over Q, polynomial vector fields, their Lie
brackets, and normal forms modulo the two sphere relations.

Variables are x_1..x_{m+1}, y_1..y_{n+1}, stored in that order.
Floating point never enters the arithmetic; coefficients are ints or
Fractions, so a zero normal form is a proof, not a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

from .geometry import FrameKind, GeometryError, ParityError


class UniverseMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Universe:
    """The variable set of S^m x S^n in R^{m+1} x R^{n+1}."""

    m: int
    n: int

    @property
    def nvars(self) -> int:
        return self.m + self.n + 2

    def x(self, i: int) -> int:
        if not 1 <= i <= self.m + 1:
            raise GeometryError(f"x index {i} outside 1..{self.m + 1}")
        return i - 1

    def y(self, j: int) -> int:
        if not 1 <= j <= self.n + 1:
            raise GeometryError(f"y index {j} outside 1..{self.n + 1}")
        return self.m + 1 + j - 1

    def name(self, k: int) -> str:
        return f"x{k + 1}" if k <= self.m else f"y{k - self.m}"


def _coef(c):
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SparsePoly:
    """Polynomial as a dict {exponent tuple: nonzero rational}."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: Universe, terms=None):
        self.universe = universe
        clean = {}
        if terms:
            nv = universe.nvars
            for e, c in terms.items():
                if len(e) != nv:
                    raise UniverseMismatch(f"exponent {e} has wrong length for {nv} variables")
                c = _coef(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def _raw(cls, universe, terms):
        p = cls.__new__(cls)
        p.universe = universe
        p.terms = terms
        return p

    @classmethod
    def const(cls, universe: Universe, c=1) -> "SparsePoly":
        return cls(universe, {(0,) * universe.nvars: c})

    @classmethod
    def var(cls, universe: Universe, k: int) -> "SparsePoly":
        e = [0] * universe.nvars
        e[k] = 1
        return cls._raw(universe, {tuple(e): 1})

    @classmethod
    def zero(cls, universe: Universe) -> "SparsePoly":
        return cls._raw(universe, {})

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.universe != self.universe:
                raise UniverseMismatch(f"{self.universe} vs {other.universe}")
            return other
        return SparsePoly.const(self.universe, other)

    # ring operations
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _coef(s) if isinstance(s, Fraction) else s
            else:
                out.pop(e, None)
        return SparsePoly._raw(self.universe, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.universe, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            c = _coef(other)
            if c == 0:
                return SparsePoly.zero(self.universe)
            return SparsePoly._raw(self.universe, {e: _norm(v * c) for e, v in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly._raw(self.universe, {e: _norm(c) for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = SparsePoly.const(self.universe, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, k: int) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = c * e[k]
        return SparsePoly._raw(self.universe, out)

    # comparison and display
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.universe == other.universe and self.terms == other.terms
        if isinstance(other, Rational):
            return self.terms == ({(0,) * self.universe.nvars: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.universe, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in descending graded-lex order; canonical for equality and printing."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                self.universe.name(k) + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"SparsePoly({self})"

    # numeric evaluation (for sampling only; never feeds back into exact work)
    def compiled(self):
        if not self.terms:
            return np.zeros((0, self.universe.nvars), dtype=np.int64), np.zeros(0)
        exps = np.array(list(self.terms), dtype=np.int64)
        coefs = np.array([float(c) for c in self.terms.values()])
        return exps, coefs

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        exps, coefs = self.compiled()
        return _monomials(pts, exps) @ coefs


def _norm(c):
    return _coef(c) if isinstance(c, Fraction) else c


def _monomials(points: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """N x T matrix of monomial values."""
    if exps.shape[0] == 0:
        return np.zeros((points.shape[0], 0))
    out = np.ones((points.shape[0], exps.shape[0]))
    for k in range(exps.shape[1]):
        col = exps[:, k]
        if col.any():
            out *= points[:, k : k + 1] ** col[None, :]
    return out


class PolyVectorField:
    """Ambient vector field with SparsePoly components."""

    __slots__ = ("universe", "components")

    def __init__(self, universe: Universe, components):
        components = tuple(components)
        if len(components) != universe.nvars:
            raise UniverseMismatch(f"expected {universe.nvars} components, got {len(components)}")
        for c in components:
            if c.universe != universe:
                raise UniverseMismatch("component from another universe")
        self.universe = universe
        self.components = components

    @classmethod
    def zero(cls, universe: Universe) -> "PolyVectorField":
        return cls(universe, [SparsePoly.zero(universe)] * universe.nvars)

    @classmethod
    def coordinate(cls, universe: Universe, k: int) -> "PolyVectorField":
        """The constant field d/dv_k."""
        comps = [SparsePoly.zero(universe)] * universe.nvars
        comps[k] = SparsePoly.const(universe, 1)
        return cls(universe, comps)

    def _check(self, other):
        if not isinstance(other, PolyVectorField) or other.universe != self.universe:
            raise UniverseMismatch("vector fields from different universes")

    def __add__(self, other):
        self._check(other)
        return PolyVectorField(self.universe, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return PolyVectorField(self.universe, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return PolyVectorField(self.universe, [-a for a in self.components])

    def scale(self, f) -> "PolyVectorField":
        """f X for a polynomial or rational f."""
        return PolyVectorField(self.universe, [a * f for a in self.components])

    __rmul__ = scale

    def apply(self, f: SparsePoly) -> SparsePoly:
        """Directional derivative X(f) = sum_l X^l d_l f."""
        out = SparsePoly.zero(self.universe)
        for k, comp in enumerate(self.components):
            if comp.terms:
                d = f.diff(k)
                if d.terms:
                    out = out + comp * d
        return out

    def dot(self, other: "PolyVectorField") -> SparsePoly:
        self._check(other)
        out = SparsePoly.zero(self.universe)
        for a, b in zip(self.components, other.components):
            if a.terms and b.terms:
                out = out + a * b
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.universe == other.universe and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"PolyVectorField{self}"

    def evaluate(self, points) -> np.ndarray:
        """N x nvars array of field values at the rows of ``points``."""
        return CompiledField(self).evaluate(points)


class CompiledField:
    """Float evaluator for a PolyVectorField and, on demand, its Jacobian.

    All components share one monomial table so a batch of points costs a
    single pass.
    """

    def __init__(self, field: PolyVectorField):
        self.field = field
        self._exps, self._coefs = self._compile(field.components, field.universe.nvars)
        self._jac = None

    @staticmethod
    def _compile(polys, nvars):
        index: dict = {}
        for p in polys:
            for e in p.terms:
                index.setdefault(e, len(index))
        exps = np.array(list(index), dtype=np.int64).reshape(len(index), nvars)
        coefs = np.zeros((len(index), len(polys)))
        for j, p in enumerate(polys):
            for e, c in p.terms.items():
                coefs[index[e], j] = float(c)
        return exps, coefs

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return _monomials(pts, self._exps) @ self._coefs

    def jacobian(self, points) -> np.ndarray:
        """N x nvars x nvars array, entry [p, k, l] = d_l X^k at point p."""
        nv = self.field.universe.nvars
        if self._jac is None:
            derivs = [c.diff(l) for c in self.field.components for l in range(nv)]
            self._jac = self._compile(derivs, nv)
        exps, coefs = self._jac
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return (_monomials(pts, exps) @ coefs).reshape(pts.shape[0], nv, nv)


def numeric_bracket(a: CompiledField, b: CompiledField, points) -> np.ndarray:
    """[X, Y] = DY X - DX Y at each point, from exact derivative polynomials."""
    xa, xb = a.evaluate(points), b.evaluate(points)
    ja, jb = a.jacobian(points), b.jacobian(points)
    return np.einsum("pkl,pl->pk", jb, xa) - np.einsum("pkl,pl->pk", ja, xb)


def lie_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^k = sum_l (X^l d_l Y^k - Y^l d_l X^k), exactly."""
    X._check(Y)
    return PolyVectorField(X.universe, [X.apply(yk) - Y.apply(xk) for xk, yk in zip(X.components, Y.components)])


@dataclass(frozen=True)
class SphereIdeal:
    """<sum x_i^2 - 1, sum y_j^2 - 1>.

    Under lex order with x_{m+1} and y_{n+1} ranked highest the leading
    monomials are x_{m+1}^2 and y_{n+1}^2, which are coprime, so the two
    generators already form a Groebner basis.
    """

    universe: Universe

    @property
    def generators(self) -> tuple[SparsePoly, SparsePoly]:
        u = self.universe
        gx = sum((SparsePoly.var(u, u.x(i)) ** 2 for i in range(1, u.m + 2)), SparsePoly.zero(u)) - 1
        gy = sum((SparsePoly.var(u, u.y(j)) ** 2 for j in range(1, u.n + 2)), SparsePoly.zero(u)) - 1
        return gx, gy

    @property
    def leading_variables(self) -> tuple[int, int]:
        return self.universe.x(self.universe.m + 1), self.universe.y(self.universe.n + 1)


@lru_cache(maxsize=None)
def _tail_power(universe: Universe, which: str, q: int) -> SparsePoly:
    """(1 - sum of the other squares)^q: the rewrite of x_{m+1}^{2q} or y_{n+1}^{2q}."""
    u = universe
    if which == "x":
        idx = [u.x(i) for i in range(1, u.m + 1)]
    else:
        idx = [u.y(j) for j in range(1, u.n + 1)]
    base = SparsePoly.const(u, 1)
    for k in idx:
        base = base - SparsePoly.var(u, k) ** 2
    return base ** q


def reduce(p: SparsePoly, ideal: SphereIdeal | None = None) -> SparsePoly:
    """Normal form of ``p`` modulo the sphere ideal.

    Rewrites x_{m+1}^2 -> 1 - sum_{i<=m} x_i^2 and y_{n+1}^2 -> 1 -
    sum_{j<=n} y_j^2 until both leading variables have degree <= 1.
    Zero result iff p lies in the ideal.
    """
    u = p.universe
    if ideal is not None and ideal.universe != u:
        raise UniverseMismatch("ideal and polynomial use different variables")
    lx, ly = u.x(u.m + 1), u.y(u.n + 1)
    out: dict = {}
    pending: dict = {}
    for e, c in p.terms.items():
        qx, qy = e[lx] // 2, e[ly] // 2
        if not qx and not qy:
            out[e] = out.get(e, 0) + c
            continue
        e2 = list(e)
        e2[lx] -= 2 * qx
        e2[ly] -= 2 * qy
        key = (qx, qy)
        pending.setdefault(key, {})
        pending[key][tuple(e2)] = pending[key].get(tuple(e2), 0) + c
    for (qx, qy), terms in pending.items():
        factor = _tail_power(u, "x", qx) * _tail_power(u, "y", qy)
        prod = SparsePoly._raw(u, {e: c for e, c in terms.items() if c != 0}) * factor
        for e, c in prod.terms.items():
            out[e] = out.get(e, 0) + c
    return SparsePoly._raw(u, {e: _norm(c) for e, c in out.items() if c != 0})


def reduce_field(X: PolyVectorField, ideal: SphereIdeal | None = None) -> PolyVectorField:
    return PolyVectorField(X.universe, [reduce(c, ideal) for c in X.components])


# polynomial building blocks -------------------------------------------------


def coords(universe: Universe) -> tuple[list[SparsePoly], list[SparsePoly]]:
    u = universe
    xs = [SparsePoly.var(u, u.x(i)) for i in range(1, u.m + 2)]
    ys = [SparsePoly.var(u, u.y(j)) for j in range(1, u.n + 2)]
    return xs, ys


def torsion_polys(universe: Universe) -> list[SparsePoly]:
    """t_j = -y_{j+1} (j odd), y_{j-1} (j even)."""
    if universe.n % 2 == 0:
        raise ParityError(f"T needs odd n, got n={universe.n}")
    _, ys = coords(universe)
    return [-ys[j + 1] if j % 2 == 0 else ys[j - 1] for j in range(universe.n + 1)]


def quaternion_polys(universe: Universe) -> tuple[list[SparsePoly], list[SparsePoly], list[SparsePoly]]:
    if universe.n != 3:
        raise GeometryError("quaternionic fields need n = 3")
    _, (y1, y2, y3, y4) = coords(universe)
    return [-y2, y1, -y4, y3], [-y3, y4, y1, -y2], [-y4, -y3, y2, y1]


def _field(universe, xpart, ypart) -> PolyVectorField:
    u = universe
    z = SparsePoly.zero(u)
    xpart = list(xpart) if xpart is not None else [z] * (u.m + 1)
    ypart = list(ypart) if ypart is not None else [z] * (u.n + 1)
    return PolyVectorField(u, xpart + ypart)


def meridian_field(universe: Universe, i: int) -> PolyVectorField:
    """M_i = d/dx_i - x_i sum_a x_a d/dx_a."""
    xs, _ = coords(universe)
    k = universe.x(i)
    comps = [(1 if a == k else 0) - xs[k] * xs[a] for a in range(len(xs))]
    return _field(universe, comps, None)


def meridian_field_y(universe: Universe, j: int) -> PolyVectorField:
    _, ys = coords(universe)
    k = j - 1
    comps = [(1 if b == k else 0) - ys[k] * ys[b] for b in range(len(ys))]
    return _field(universe, None, comps)


def normal_field(universe: Universe) -> PolyVectorField:
    xs, _ = coords(universe)
    return _field(universe, xs, None)


def normal_field_y(universe: Universe) -> PolyVectorField:
    _, ys = coords(universe)
    return _field(universe, None, ys)


def torsion_field(universe: Universe) -> PolyVectorField:
    return _field(universe, None, torsion_polys(universe))


def _b_fields(universe: Universe, T: PolyVectorField) -> list[PolyVectorField]:
    xs, _ = coords(universe)
    return [meridian_field(universe, i) + T.scale(xs[i - 1]) for i in range(1, universe.m + 2)]


def frame_as_poly(kind: FrameKind | str, m: int, n: int, n_frame=None) -> list[PolyVectorField]:
    """Symbolic frame fields; evaluating them reproduces the numeric frames.

    ``n_frame`` (a list of PolyVectorFields on the same universe) is only
    used, and required, for ``B_GENERIC``.
    """
    kind = FrameKind(kind)
    u = Universe(m, n)
    if kind is FrameKind.B_S1:
        if n != 1:
            raise GeometryError(f"B_S1 needs n = 1, got {n}")
        return _b_fields(u, torsion_field(u))
    if kind is FrameKind.B_S3:
        if n != 3:
            raise GeometryError(f"B_S3 needs n = 3, got {n}")
        t1, t2, t3 = (_field(u, None, q) for q in quaternion_polys(u))
        return _b_fields(u, t1) + [t2, t3]
    if kind is FrameKind.B_GENERIC:
        if not n_frame or len(n_frame) != n:
            raise GeometryError("B_GENERIC needs n second-factor fields")
        return _b_fields(u, n_frame[0]) + list(n_frame[1:])
    if kind is FrameKind.P:
        if n % 2 == 0:
            raise ParityError(f"frame P needs odd n, got n={n}")
        xs, ys = coords(u)
        t = torsion_polys(u)
        T = torsion_field(u)
        fields = [meridian_field(u, i) + T.scale(xs[i - 1]) for i in range(1, m)]
        Mm, Mm1 = meridian_field(u, m), meridian_field(u, m + 1)
        xm, xm1 = xs[m - 1], xs[m]
        for j in range(1, n + 2):
            yj, tj = ys[j - 1], t[j - 1]
            fields.append(
                Mm.scale(yj) + Mm1.scale(tj) + T.scale(tj * xm1 + yj * xm - tj) + meridian_field_y(u, j)
            )
        return fields
    raise GeometryError(f"unknown frame kind {kind}")
