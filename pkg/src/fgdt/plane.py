"""The Desarguesian plane PG(2,q): points, lines, conics, hyperovals, polarity.

Points and lines share one dense indexing.  A triple is scaled so its last
nonzero coordinate is 1; then ``(x, y, 1) -> x*q + y``, ``(x, 1, 0) -> q^2 + x``
and ``(1, 0, 0) -> q^2 + q``.  Line ``[a0, a1, a2]`` is the set of points with
``a0 X0 + a1 X1 + a2 X2 = 0``; because the incidence is symmetric, the list of
points on line i is also the list of lines through point i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .field import FieldCtx

INF = "inf"
MAX_Q = 128


def canonical_index(F: FieldCtx, X: np.ndarray) -> np.ndarray:
    """Dense index of the projective points with homogeneous coordinates X[..., 3]."""
    X = np.asarray(X)
    x0, x1, x2 = X[..., 0], X[..., 1], X[..., 2]
    if np.any((x0 == 0) & (x1 == 0) & (x2 == 0)):
        raise ValueError("zero vector is not a projective point")
    d = np.where(x2 != 0, x2, np.where(x1 != 0, x1, x0))
    y0 = F.div(x0, d)
    y1 = F.div(x1, d)
    q = F.q
    return np.where(x2 != 0, y0 * q + y1, np.where(x1 != 0, q * q + y0, q * q + q))


def coords_of(q: int, idx) -> np.ndarray:
    idx = np.asarray(idx)
    out = np.zeros(idx.shape + (3,), dtype=np.int64)
    aff = idx < q * q
    mid = (idx >= q * q) & (idx < q * q + q)
    out[..., 0] = np.where(aff, idx // q, np.where(mid, idx - q * q, 1))
    out[..., 1] = np.where(aff, idx % q, np.where(mid, 1, 0))
    out[..., 2] = np.where(aff, 1, 0)
    return out


def cross(F: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a0, a1, a2 = A[..., 0], A[..., 1], A[..., 2]
    b0, b1, b2 = B[..., 0], B[..., 1], B[..., 2]
    return np.stack(
        [
            F.sub(F.mul(a1, b2), F.mul(a2, b1)),
            F.sub(F.mul(a2, b0), F.mul(a0, b2)),
            F.sub(F.mul(a0, b1), F.mul(a1, b0)),
        ],
        axis=-1,
    )


def dot(F: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.add(F.add(F.mul(A[..., 0], B[..., 0]), F.mul(A[..., 1], B[..., 1])), F.mul(A[..., 2], B[..., 2]))


def apply_matrix(F: FieldCtx, X: np.ndarray, M) -> np.ndarray:
    """Row vectors times a 3x3 matrix: the action x -> xM used throughout."""
    M = np.asarray(M).reshape(3, 3)
    cols = []
    for j in range(3):
        acc = F.mul(X[..., 0], int(M[0, j]))
        acc = F.add(acc, F.mul(X[..., 1], int(M[1, j])))
        acc = F.add(acc, F.mul(X[..., 2], int(M[2, j])))
        cols.append(acc)
    return np.stack(cols, axis=-1)


class PlaneCtx:
    """Enumerated PG(2,q) with O(1) incidence lookups."""

    def __init__(self, F: FieldCtx):
        if F.q > MAX_Q:
            raise ValueError(f"q = {F.q} exceeds the plane size limit {MAX_Q}")
        self.field = F
        self.q = q = F.q
        self.n_points = n = q * q + q + 1
        self.points = coords_of(q, np.arange(n))
        self.lines = self.points  # same canonical triples, read as coefficients
        self.line_points = self._line_points()
        self.point_lines = self.line_points
        self.O = self.index((0, 0, 1))
        self.P_inf = self.index((1, 0, 0))
        self._join = None

    def __repr__(self):
        return f"PlaneCtx(PG(2,{self.q}))"

    def index(self, coords) -> int:
        return int(canonical_index(self.field, np.asarray(coords)))

    def coords(self, idx) -> tuple:
        return tuple(int(c) for c in self.points[idx])

    def _line_points(self) -> np.ndarray:
        F, q = self.field, self.q
        a = self.lines
        a0, a1, a2 = a[:, 0], a[:, 1], a[:, 2]
        n = len(a)
        zero, one = np.zeros(n, dtype=np.int64), np.ones(n, dtype=np.int64)
        case_a = a2 != 0
        case_b = (a2 == 0) & (a1 != 0)
        P1 = np.where(case_a[:, None], np.stack([one, zero, F.neg(a0)], 1), np.stack([zero, zero, one], 1))
        P2 = np.where(
            case_a[:, None],
            np.stack([zero, one, F.neg(a1)], 1),
            np.where(case_b[:, None], np.stack([one, F.neg(a0), zero], 1), np.stack([zero, one, zero], 1)),
        )
        t = np.arange(q)
        X = F.add(P1[:, None, :], F.mul(t[None, :, None], P2[:, None, :]))
        pts = np.concatenate([canonical_index(F, X), canonical_index(F, P2)[:, None]], axis=1)
        return np.sort(pts, axis=1)

    # incidence

    def on_line(self, P, L) -> bool:
        return int(dot(self.field, self.points[P], self.lines[L])) == 0

    def join(self, P, Q):
        """Line through two distinct points (vectorized)."""
        if self._join is not None:
            return self._join[P, Q]
        return canonical_index(self.field, cross(self.field, self.points[P], self.points[Q]))

    def meet(self, L, M):
        """Intersection point of two distinct lines (vectorized)."""
        if self._join is not None:
            return self._join[L, M]
        return canonical_index(self.field, cross(self.field, self.lines[L], self.lines[M]))

    def build_join_table(self):
        """Dense join/meet table; used for line actions when q <= 64."""
        if self._join is None and self.q <= 64:
            n = self.n_points
            dtype = np.int16 if n < 32768 else np.int32
            J = np.full((n, n), -1, dtype=dtype)
            lp = self.line_points
            L = np.arange(n)
            J[lp[:, :, None], lp[:, None, :]] = L[:, None, None]
            J[np.arange(n), np.arange(n)] = -1
            self._join = J
        return self._join

    def intersection_sizes(self, point_set) -> np.ndarray:
        """|L ∩ point_set| for every line L."""
        mask = np.zeros(self.n_points, dtype=bool)
        mask[np.asarray(list(point_set), dtype=np.int64)] = True
        return mask[self.line_points].sum(axis=1)

    def apply_matrix(self, M) -> np.ndarray:
        """Permutation of point indices induced by x -> xM."""
        return canonical_index(self.field, apply_matrix(self.field, self.points, M))

    def frobenius_perm(self, m: int = 1) -> np.ndarray:
        """Point permutation of the collineation (X0, X1, X2) -> (X0^p^m, X1^p^m, X2^p^m)."""
        return canonical_index(self.field, self.field.frobenius(self.points, m))

    def line_perm(self, point_perm: np.ndarray) -> np.ndarray:
        """Line permutation induced by a collineation given on points."""
        lp = self.line_points
        return self.join(point_perm[lp[:, 0]], point_perm[lp[:, 1]])

    def dump(self, path) -> None:
        """Write the incidence structure: header ``PG2 q`` then one line per line."""
        rows = [f"PG2 {self.q}"] + [" ".join(map(str, r)) for r in self.line_points.tolist()]
        Path(path).write_text("\n".join(rows) + "\n")


def build_plane(F: FieldCtx) -> PlaneCtx:
    return PlaneCtx(F)


@dataclass
class Conic:
    h: object  # field element index or INF
    points: np.ndarray
    kind: str  # "irreducible" | "simply-degenerate" | "doubly-degenerate"
    plane: PlaneCtx = dc_field(repr=False)

    @property
    def punctured(self) -> np.ndarray:
        """C_h* = C_h minus {O, P_inf}."""
        drop = {self.plane.O, self.plane.P_inf}
        return np.array([p for p in self.points.tolist() if p not in drop], dtype=np.int64)

    def __contains__(self, P) -> bool:
        return int(P) in set(self.points.tolist())

    def __len__(self):
        return len(self.points)


def pencil_conic(plane: PlaneCtx, h) -> Conic:
    """Member X0 X2 - h X1^2 = 0 of the bitangent pencil; h = INF gives X1^2 = 0."""
    F, X = plane.field, plane.points
    if h == INF:
        mask = X[:, 1] == 0
        kind = "doubly-degenerate"
    else:
        val = F.sub(F.mul(X[:, 0], X[:, 2]), F.mul(h, F.mul(X[:, 1], X[:, 1])))
        mask = val == 0
        kind = "simply-degenerate" if h == 0 else "irreducible"
    return Conic(h, np.flatnonzero(mask), kind, plane)


def classify_line(plane: PlaneCtx, line: int, arc) -> str:
    pts = set(np.asarray(list(arc)).tolist())
    n = sum(1 for P in plane.line_points[line].tolist() if P in pts)
    if n > 2:
        raise ValueError(f"line {line} meets the set in {n} points: not an arc")
    return ("external", "tangent", "secant")[n]


def tangent_lines(plane: PlaneCtx, arc) -> np.ndarray:
    """All lines meeting the arc in exactly one point."""
    return np.flatnonzero(plane.intersection_sizes(arc) == 1)


def nucleus(plane: PlaneCtx, conic: Conic) -> int:
    if plane.q % 2:
        raise ValueError("tangents of a conic are concurrent only for even q")
    if conic.kind != "irreducible":
        raise ValueError("nucleus needs an irreducible conic")
    tans = tangent_lines(plane, conic.points)
    if len(tans) != plane.q + 1:
        raise RuntimeError(f"expected q+1 tangents, found {len(tans)}")
    N = int(plane.meet(tans[0], tans[1]))
    if not all(N in set(plane.line_points[t].tolist()) for t in tans):
        raise RuntimeError("tangents are not concurrent")
    return N


@dataclass
class Hyperoval:
    points: np.ndarray
    nucleus: int
    external_lines: np.ndarray
    secant_lines: np.ndarray


def hyperoval(plane: PlaneCtx, conic: Conic) -> Hyperoval:
    if plane.q % 2:
        raise ValueError("hyperovals need even q")
    N = nucleus(plane, conic)
    pts = np.sort(np.append(conic.points, N))
    sizes = plane.intersection_sizes(pts)
    if not np.all((sizes == 0) | (sizes == 2)):
        raise RuntimeError("conic plus nucleus is not a hyperoval")
    return Hyperoval(pts, N, np.flatnonzero(sizes == 0), np.flatnonzero(sizes == 2))


def polarity_image(plane: PlaneCtx, P, h=1):
    """Polar line of P with respect to C_h: coefficients P * [[0,0,1/2],[0,-h,0],[1/2,0,0]]."""
    F = plane.field
    if F.p == 2:
        raise ValueError("polarity needs odd q")
    half = F.inv(F.const(2))
    X = plane.points[np.asarray(P)]
    coeffs = np.stack([F.mul(half, X[..., 2]), F.neg(F.mul(h, X[..., 1])), F.mul(half, X[..., 0])], axis=-1)
    return canonical_index(F, coeffs)


def pole(plane: PlaneCtx, L, h=1):
    """Inverse of polarity_image."""
    F = plane.field
    if F.p == 2:
        raise ValueError("polarity needs odd q")
    two = F.const(2)
    a = plane.lines[np.asarray(L)]
    X = np.stack([F.mul(two, a[..., 2]), F.neg(F.div(a[..., 1], h)), F.mul(two, a[..., 0])], axis=-1)
    return canonical_index(F, X)


def classify_points(plane: PlaneCtx, conic: Conic) -> np.ndarray:
    """Label every point 'internal', 'on_conic' or 'external'.

    Uses tangent counts and cross-checks against the polar line of each point.
    """
    if plane.q % 2 == 0:
        raise ValueError("internal/external points need odd q")
    if conic.kind != "irreducible":
        raise ValueError("classification needs an irreducible conic")
    tans = tangent_lines(plane, conic.points)
    counts = np.bincount(plane.line_points[tans].ravel(), minlength=plane.n_points)
    on = np.zeros(plane.n_points, dtype=bool)
    on[conic.points] = True
    labels = np.where(on, "on_conic", np.where(counts == 0, "internal", "external"))
    if np.any(~on & (counts != 0) & (counts != 2)) or np.any(on & (counts != 1)):
        raise RuntimeError("tangent counts outside {0, 1, 2}")

    # internal <-> polar external, on conic <-> polar tangent, external <-> polar secant
    sizes = plane.intersection_sizes(conic.points)
    polar = sizes[polarity_image(plane, np.arange(plane.n_points), conic.h)]
    via_polar = np.array(["internal", "on_conic", "external"])[polar]
    if not np.array_equal(labels, via_polar):
        raise RuntimeError("tangent-count and polarity criteria disagree")
    return labels


def classify_point(plane: PlaneCtx, conic: Conic, P: int) -> str:
    return str(classify_points(plane, conic)[P])


def internal_points(plane: PlaneCtx, conic: Conic) -> np.ndarray:
    return np.flatnonzero(classify_points(plane, conic) == "internal")


def external_points(plane: PlaneCtx, conic: Conic) -> np.ndarray:
    return np.flatnonzero(classify_points(plane, conic) == "external")
