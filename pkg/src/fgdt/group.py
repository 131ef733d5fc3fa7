"""Collineation groups of PG(2,q) and small abstract permutation groups.

A group is stored as the full table of its element permutations (rows) on a
faithful domain.  Composition is left to right: ``a * b`` applies ``a`` first,
so the permutation of the product is ``perm_b[perm_a]``.  Matrices act on row
vectors, x -> xM, which makes the matrix of ``a * b`` the product ``A @ B``.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .field import FieldCtx
from .plane import PlaneCtx, apply_matrix, canonical_index

ORDER_CAP = 1_000_000
MULT_TABLE_CAP = 6000


class CapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- matrices


def mat_mul(F: FieldCtx, A, B) -> np.ndarray:
    """Product of (stacks of) 3x3 matrices over GF(q)."""
    A, B = np.asarray(A), np.asarray(B)
    out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            acc = F.mul(A[..., i, 0], B[..., 0, j])
            acc = F.add(acc, F.mul(A[..., i, 1], B[..., 1, j]))
            out[..., i, j] = F.add(acc, F.mul(A[..., i, 2], B[..., 2, j]))
    return out


def mat_det(F: FieldCtx, M):
    M = np.asarray(M)
    m = lambda i, j: M[..., i, j]  # noqa: E731
    t0 = F.mul(m(0, 0), F.sub(F.mul(m(1, 1), m(2, 2)), F.mul(m(1, 2), m(2, 1))))
    t1 = F.mul(m(0, 1), F.sub(F.mul(m(1, 0), m(2, 2)), F.mul(m(1, 2), m(2, 0))))
    t2 = F.mul(m(0, 2), F.sub(F.mul(m(1, 0), m(2, 1)), F.mul(m(1, 1), m(2, 0))))
    return F.add(F.sub(t0, t1), t2)


def mat_adj(F: FieldCtx, M) -> np.ndarray:
    M = np.asarray(M)
    out = np.zeros_like(M)
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            minor = F.sub(F.mul(M[..., r[0], c[0]], M[..., r[1], c[1]]), F.mul(M[..., r[0], c[1]], M[..., r[1], c[0]]))
            out[..., i, j] = minor if (i + j) % 2 == 0 else F.neg(minor)
    return out


def canonical_matrix(F: FieldCtx, M) -> np.ndarray:
    """Scale (a stack of) matrices so the first nonzero row-major entry is 1."""
    M = np.asarray(M, dtype=np.int64)
    flat = M.reshape(M.shape[:-2] + (9,))
    first = np.argmax(flat != 0, axis=-1)
    lead = np.take_along_axis(flat, first[..., None], axis=-1)
    if np.any(lead == 0):
        raise ValueError("zero matrix")
    return F.div(flat, lead).reshape(M.shape)


class GroupElement:
    """A projectivity of PG(2,q) given by a scalar-normalized 3x3 matrix."""

    def __init__(self, F: FieldCtx, M):
        M = np.asarray(M, dtype=np.int64).reshape(3, 3)
        if mat_det(F, M) == 0:
            raise ValueError("singular matrix")
        self.field = F
        self.matrix = canonical_matrix(F, M)
        self.key = tuple(self.matrix.ravel().tolist())

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.field, mat_mul(self.field, self.matrix, other.matrix))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        ints = self.field.to_int(self.matrix).tolist()
        return f"GroupElement({ints})"

    def inverse(self) -> "GroupElement":
        return GroupElement(self.field, mat_adj(self.field, self.matrix))

    def det(self) -> int:
        return int(mat_det(self.field, self.matrix))

    def is_identity(self) -> bool:
        return self.key == (1, 0, 0, 0, 1, 0, 0, 0, 1)

    def order(self) -> int:
        g, n = self, 1
        while not g.is_identity():
            g = g * self
            n += 1
            if n > self.field.q**3:
                raise RuntimeError("order computation diverged")
        return n

    def power(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse().power(-k)
        out = identity(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def perm(self, plane: PlaneCtx) -> np.ndarray:
        return plane.apply_matrix(self.matrix)


def identity(F: FieldCtx) -> GroupElement:
    return GroupElement(F, np.diag([1, 1, 1]))


def _sl2_image(F: FieldCtx, a, b, c, d) -> np.ndarray:
    two = F.const(2)
    return np.array(
        [
            [F.mul(a, a), F.mul(a, b), F.mul(b, b)],
            [F.mul(two, F.mul(a, c)), F.add(F.mul(a, d), F.mul(b, c)), F.mul(two, F.mul(b, d))],
            [F.mul(c, c), F.mul(c, d), F.mul(d, d)],
        ]
    )


def sl2_det(F: FieldCtx, a, b, c, d) -> int:
    return F.sub(F.mul(a, d), F.mul(b, c))


def in_psl2(F: FieldCtx, a, b, c, d) -> bool:
    """True iff the 2x2 matrix (a b; c d) has a nonzero square determinant."""
    return F.chi(sl2_det(F, a, b, c, d)) == 1


def pgl2_embed(F: FieldCtx, a, b, c, d) -> GroupElement:
    """Image of the 2x2 matrix (a b; c d) acting on the conic X0 X2 = X1^2."""
    if sl2_det(F, a, b, c, d) == 0:
        raise ValueError("singular 2x2 matrix")
    return GroupElement(F, _sl2_image(F, a, b, c, d))


def psl2_embed(F: FieldCtx, a, b, c, d) -> GroupElement:
    det = sl2_det(F, a, b, c, d)
    if det == 0:
        raise ValueError("singular 2x2 matrix")
    if F.chi(det) != 1:
        raise ValueError("determinant is a nonsquare: element of PGL(2,q) outside PSL(2,q)")
    return GroupElement(F, _sl2_image(F, a, b, c, d))


def alpha(F: FieldCtx) -> GroupElement:
    return GroupElement(F, np.diag([F.omega, 1, F.inv(F.omega)]))


def beta(F: FieldCtx) -> GroupElement:
    return GroupElement(F, [[0, 0, 1], [0, F.neg(1), 0], [1, 0, 0]])


def gamma(F: FieldCtx, c: int) -> GroupElement:
    two = F.const(2)
    return GroupElement(F, [[1, c, F.mul(c, c)], [0, 1, F.mul(two, c)], [0, 0, 1]])


def tau(F: FieldCtx, xi: int) -> GroupElement:
    if xi == 0:
        raise ValueError("xi must be nonzero")
    if F.p != 2 and F.q % 4 == 1 and F.mul(xi, xi) == F.neg(1):
        raise ValueError("xi^2 = -1 is excluded when q = 1 mod 4")
    two = F.const(2)
    x2 = F.mul(xi, xi)
    return GroupElement(
        F,
        [[1, xi, x2], [F.mul(two, xi), F.sub(x2, 1), F.neg(F.mul(two, xi))], [x2, F.neg(xi), 1]],
    )


def tau_in_psl2(F: FieldCtx, xi: int) -> bool:
    """tau(xi) comes from (1 xi; xi -1), whose determinant is -(1 + xi^2)."""
    return F.chi(F.neg(F.add(1, F.mul(xi, xi)))) == 1


def named_generators(F: FieldCtx) -> dict:
    return {"alpha": alpha(F), "beta": beta(F), "tau": lambda xi: tau(F, xi), "gamma": lambda c: gamma(F, c)}


def sl2_generators(F: FieldCtx) -> list[GroupElement]:
    """Generators of the PSL(2,q) copy fixing the conic X0 X2 = X1^2."""
    w = F.omega
    return [
        psl2_embed(F, 1, 1, 0, 1),
        psl2_embed(F, 1, 0, 1, 1),
        psl2_embed(F, w, 0, 0, F.inv(w)),
    ]


def pgl2_generators(F: FieldCtx) -> list[GroupElement]:
    return sl2_generators(F) + [pgl2_embed(F, F.omega, 0, 0, 1)]


def matrices_from_perms(plane: PlaneCtx, perms: np.ndarray) -> np.ndarray:
    """Recover canonical matrices of projectivities from their point permutations.

    Row i of M is the image of the i-th unit vector up to a scalar; the image
    of (1,1,1) fixes the three scalars (Cramer's rule).
    """
    F = plane.field
    e = [plane.index(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))]
    R = np.stack([plane.points[perms[:, e[i]]] for i in range(3)], axis=-2)  # rows r0, r1, r2
    s = plane.points[perms[:, e[3]]]
    Rt = np.swapaxes(R, -1, -2)  # columns are r_i
    D = mat_det(F, Rt)
    lam = []
    for i in range(3):
        Ri = Rt.copy()
        Ri[..., :, i] = s
        lam.append(F.div(mat_det(F, Ri), D))
    M = np.stack([F.mul(lam[i][..., None], R[..., i, :]) for i in range(3)], axis=-2)
    return canonical_matrix(F, M)


# ---------------------------------------------------------------- groups


class PermGroup:
    """An enumerated permutation group.

    Elements are rows of ``perms``; element 0 is the identity.  Elements are
    looked up by their images of ``base`` (a set of points whose images
    determine the element), packed into int64 keys.
    """

    def __init__(self, perms: np.ndarray, base, gens=None, name: str = "", plane: PlaneCtx | None = None):
        self.perms = perms
        self.degree = perms.shape[1]
        self.order = perms.shape[0]
        self.base = np.asarray(base, dtype=np.int64)
        if self.degree ** len(self.base) >= 2**62:
            raise ValueError("base too long for packed keys")
        self.keys = self._pack(perms[:, self.base])
        self._sorter = np.argsort(self.keys, kind="stable")
        self._sorted = self.keys[self._sorter]
        if len(np.unique(self.keys)) != self.order:
            raise ValueError("base does not separate the elements")
        self.gens = list(gens) if gens is not None else []
        self.name = name
        self.plane = plane
        self._inv = None
        self._mult = None
        self._line_perms = None
        self._matrices = None

    def __repr__(self):
        return f"PermGroup({self.name or 'anonymous'}, order={self.order}, degree={self.degree})"

    def __len__(self):
        return self.order

    def _pack(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        radix = self.degree ** np.arange(rows.shape[-1], dtype=np.int64)
        return rows @ radix

    def locate(self, perm_rows) -> np.ndarray:
        """Element indices of the given permutations (-1 when not in the group)."""
        perm_rows = np.asarray(perm_rows)
        k = self._pack(perm_rows[..., self.base])
        pos = np.searchsorted(self._sorted, k)
        pos = np.minimum(pos, self.order - 1)
        found = self._sorted[pos] == k
        return np.where(found, self._sorter[pos], -1)

    def contains_perm(self, perm) -> bool:
        i = int(self.locate(np.asarray(perm)[None, :])[0])
        return i >= 0 and np.array_equal(self.perms[i], perm)

    def mul(self, a, b):
        """Index of a*b (a applied first)."""
        if self._mult is not None:
            return self._mult[a, b]
        a, b = np.asarray(a), np.asarray(b)
        prod = np.take_along_axis(self.perms[b], self.perms[a], axis=-1) if a.ndim else self.perms[b][self.perms[a]]
        out = self.locate(prod)
        return int(out) if np.ndim(out) == 0 else out

    def inverse_rows(self) -> np.ndarray:
        if self._inv is None:
            inv = np.empty_like(self.perms)
            rows = np.arange(self.order)[:, None]
            inv[rows, self.perms] = np.arange(self.degree)[None, :]
            self._inv = self.locate(inv)
        return self._inv

    def inv(self, a):
        return self.inverse_rows()[a]

    def mult_table(self) -> np.ndarray:
        if self._mult is None:
            if self.order > MULT_TABLE_CAP:
                raise CapExceeded(f"multiplication table for order {self.order} exceeds cap")
            T = np.empty((self.order, self.order), dtype=np.int32)
            for a in range(self.order):
                T[a] = self.locate(self.perms[:, self.perms[a]])
            self._mult = T
        return self._mult

    def element_order(self, a: int) -> int:
        p = self.perms[a]
        x, n = p.copy(), 1
        ident = np.arange(self.degree)
        while not np.array_equal(x, ident):
            x = p[x]
            n += 1
        return n

    def element_orders(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        cur = self.perms.copy()
        ident = np.arange(self.degree)
        done = np.all(cur == ident, axis=1)
        n = 1
        while not done.all():
            n += 1
            cur = np.take_along_axis(self.perms, cur, axis=1)
            hit = ~done & np.all(cur == ident, axis=1)
            out[hit] = n
            done |= hit
        return out

    def closure(self, gen_idx, cap: int | None = None) -> np.ndarray | None:
        """Sorted element indices of the subgroup generated by ``gen_idx``.

        Returns None if the subgroup grows beyond ``cap``.
        """
        gen_idx = [int(g) for g in gen_idx]
        elems = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for g in gen_idx:
                prods = self.mul(np.asarray(frontier), np.full(len(frontier), g))
                for x in np.atleast_1d(prods).tolist():
                    if x not in elems:
                        elems.add(x)
                        nxt.append(x)
            if cap is not None and len(elems) > cap:
                return None
            frontier = nxt
        return np.array(sorted(elems), dtype=np.int64)

    def conjugate_set(self, idx, g: int) -> np.ndarray:
        """Sorted indices of g^-1 H g."""
        idx = np.asarray(idx)
        gi = self.inv(g)
        return np.sort(self.mul(self.mul(np.full(len(idx), gi), idx), np.full(len(idx), g)))

    def subgroup(self, idx, name: str = "") -> "PermGroup":
        idx = np.asarray(idx, dtype=np.int64)
        order = np.argsort(idx != 0, kind="stable")  # identity first
        return PermGroup(self.perms[idx[order]], self.base, name=name, plane=self.plane)

    # actions on lines of the plane

    def line_perms(self) -> np.ndarray:
        if self._line_perms is None:
            if self.plane is None:
                raise ValueError("group is not attached to a plane")
            self.plane.build_join_table()
            lp = self.plane.line_points
            P = self.perms
            self._line_perms = np.asarray(self.plane.join(P[:, lp[:, 0]], P[:, lp[:, 1]]), dtype=P.dtype)
        return self._line_perms

    def matrices(self) -> np.ndarray:
        if self._matrices is None:
            self._matrices = matrices_from_perms(self.plane, self.perms)
        return self._matrices


def plane_base(plane: PlaneCtx) -> list[int]:
    """Frame plus one point off every subplane: images determine any collineation."""
    F = plane.field
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    if F.f > 1:
        pts.append((F.omega, 1, 0))
    return [plane.index(p) for p in pts]


def enumerate_group(gen_perms, base, cap: int = ORDER_CAP, name: str = "", plane: PlaneCtx | None = None) -> PermGroup:
    """Breadth-first closure of a set of generating permutations.

    Elements are ordered by BFS layer and by key within a layer.
    """
    gen_perms = [np.asarray(g) for g in gen_perms]
    n = len(gen_perms[0]) if gen_perms else len(base)
    dtype = np.int16 if n < 32768 else np.int32
    base = np.asarray(base, dtype=np.int64)
    radix = n ** np.arange(len(base), dtype=np.int64)
    ident = np.arange(n, dtype=dtype)
    layers = [ident[None, :]]
    seen = np.array([ident[base].astype(np.int64) @ radix])
    frontier = ident[None, :]
    total = 1
    G = np.stack(gen_perms).astype(dtype) if gen_perms else np.empty((0, n), dtype=dtype)
    while len(frontier) and len(G):
        cand = G[:, frontier].reshape(-1, n)  # row f*g = g[f]
        keys = cand[:, base].astype(np.int64) @ radix
        keys, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = cand[first[fresh]]
        if not len(frontier):
            break
        total += len(frontier)
        if total > cap:
            raise CapExceeded(f"group order exceeds cap {cap}")
        layers.append(frontier)
        seen = np.union1d(seen, keys[fresh])
    perms = np.concatenate(layers)
    gens = [int(i) for i in _locate_raw(perms, base, radix, G)]
    return PermGroup(perms, base, gens=gens, name=name, plane=plane)


def _locate_raw(perms, base, radix, rows):
    keys = perms[:, base].astype(np.int64) @ radix
    order = np.argsort(keys)
    k = rows[:, base].astype(np.int64) @ radix
    return order[np.searchsorted(keys[order], k)]


def matrix_group(plane: PlaneCtx, gens: list[GroupElement], extra_perms=(), name: str = "", cap: int = ORDER_CAP) -> PermGroup:
    perms = [g.perm(plane) for g in gens] + [np.asarray(p) for p in extra_perms]
    return enumerate_group(perms, plane_base(plane), cap=cap, name=name, plane=plane)


def psl2_group(plane: PlaneCtx) -> PermGroup:
    return cached_group(plane, "PSL2", lambda: matrix_group(plane, sl2_generators(plane.field), name=f"PSL(2,{plane.q})"))


def pgl2_group(plane: PlaneCtx) -> PermGroup:
    return cached_group(plane, "PGL2", lambda: matrix_group(plane, pgl2_generators(plane.field), name=f"PGL(2,{plane.q})"))


def pgammal2_group(plane: PlaneCtx) -> PermGroup:
    """PSL(2,q) extended by the Frobenius collineation and the diagonal automorphism."""
    F = plane.field
    return matrix_group(plane, pgl2_generators(F), extra_perms=[plane.frobenius_perm()], name=f"PGammaL(2,{plane.q})")


# ---------------------------------------------------------------- cache

_memo: dict = {}
CACHE_DIR: Path | None = None


def set_cache_dir(path) -> None:
    global CACHE_DIR
    CACHE_DIR = Path(path) if path else None


def _cache_path(plane: PlaneCtx, tag: str) -> Path | None:
    if CACHE_DIR is None:
        return None
    F = plane.field
    h = hashlib.sha1(f"{tag}:{F.p}:{F.f}:{F.modulus}".encode()).hexdigest()[:12]
    return CACHE_DIR / f"group-{tag}-q{plane.q}-{h}.txt"


def write_group_cache(path, group: PermGroup) -> None:
    """Header ``FGDT-GROUP v1 q=<q>``, then one canonical matrix (9 ints) per element, BFS order."""
    F = group.plane.field
    M = F.to_int(group.matrices()).reshape(group.order, 9)
    lines = [f"FGDT-GROUP v1 q={group.plane.q}", f"name {group.name}", f"gens {' '.join(map(str, group.gens))}"]
    lines += [" ".join(map(str, row)) for row in M.tolist()]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # atomic so concurrent workers never read a partial file
    tmp = path.with_name(f"{path.name}.{os.getpid()}.tmp")
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_group_cache(path, plane: PlaneCtx) -> PermGroup:
    rows = Path(path).read_text().splitlines()
    if rows[0] != f"FGDT-GROUP v1 q={plane.q}":
        raise ValueError(f"bad group cache header: {rows[0]!r}")
    name = rows[1].split(" ", 1)[1] if " " in rows[1] else ""
    gens = [int(x) for x in rows[2].split()[1:]]
    F = plane.field
    ints = np.array([[int(x) for x in r.split()] for r in rows[3:]], dtype=np.int64)
    M = F.index_of[ints].reshape(-1, 3, 3)
    X = plane.points
    dtype = np.int16 if plane.n_points < 32768 else np.int32
    perms = np.stack([canonical_index(F, apply_matrix(F, X, m)) for m in M]).astype(dtype)
    return PermGroup(perms, plane_base(plane), gens=gens, name=name, plane=plane)


def cached_group(plane: PlaneCtx, tag: str, build) -> PermGroup:
    F = plane.field
    key = (tag, F.p, F.f, F.modulus)
    if key in _memo:
        return _memo[key]
    path = _cache_path(plane, tag)
    G = None
    if path is not None and path.exists():
        try:
            G = read_group_cache(path, plane)
        except (ValueError, IndexError, OSError):
            G = None
    if G is None:
        G = build()
        if path is not None:
            write_group_cache(path, G)
    _memo[key] = G
    return G


# ---------------------------------------------------------------- orbits


@dataclass
class OrbitPartition:
    labels: np.ndarray  # orbit id per base-set element (or -1 outside the restriction)
    orbits: list  # sorted index arrays
    reps: np.ndarray  # smallest element of each orbit
    transversal: np.ndarray | None  # element index mapping the orbit rep to each point (-1 if unknown)

    def __len__(self):
        return len(self.orbits)

    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def orbit_of(self, x: int) -> np.ndarray:
        return self.orbits[self.labels[x]]


def orbit_partition(table: np.ndarray, rows=None, restrict=None, transversal: bool = False) -> OrbitPartition:
    """Orbits of the permutations ``table[rows]`` on their common domain.

    ``rows`` defaults to every row; pass generator rows for speed.  With
    ``restrict`` only orbits meeting that (invariant) subset are reported.
    """
    table = np.asarray(table)
    sel = table if rows is None else table[np.asarray(rows, dtype=np.int64)]
    n = table.shape[1]
    src = np.tile(np.arange(n), len(sel))
    dst = sel.ravel().astype(np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    keep = np.ones(n, dtype=bool)
    if restrict is not None:
        keep[:] = False
        keep[np.asarray(restrict, dtype=np.int64)] = True
    # relabel orbits by their smallest member
    pts = np.flatnonzero(keep)
    comps = comp[pts]
    uniq, first = np.unique(comps, return_index=True)
    order = np.argsort(pts[first])
    remap = np.full(comp.max() + 1, -1)
    remap[uniq[order]] = np.arange(len(uniq))
    labels = np.full(n, -1)
    labels[pts] = remap[comps]
    orbits = [np.flatnonzero(labels == i) for i in range(len(uniq))]
    reps = np.array([o[0] for o in orbits], dtype=np.int64)
    tr = None
    if transversal:
        tr = np.full(n, -1, dtype=np.int64)
        if rows is not None:
            raise ValueError("transversals need the full element table")
        for r in reps:
            imgs = table[:, r]
            u, idx = np.unique(imgs, return_index=True)
            tr[u] = idx
    return OrbitPartition(labels, orbits, reps, tr)


def orbits(group: PermGroup, base: str = "points", restrict=None, transversal: bool = False) -> OrbitPartition:
    table = group.perms if base == "points" else group.line_perms()
    rows = None if transversal or not group.gens else group.gens
    return orbit_partition(table, rows=rows, restrict=restrict, transversal=transversal)


def stabilizer(table: np.ndarray, x: int) -> np.ndarray:
    """Indices of elements fixing x."""
    return np.flatnonzero(np.asarray(table)[:, x] == x)


def setwise_stabilizer(table: np.ndarray, subset) -> np.ndarray:
    subset = np.asarray(sorted(subset), dtype=np.int64)
    mask = np.zeros(np.asarray(table).shape[1], dtype=bool)
    mask[subset] = True
    return np.flatnonzero(mask[np.asarray(table)[:, subset]].all(axis=1))


def pair_orbitals(table: np.ndarray, rows=None, points=None):
    """Orbit ids of unordered pairs {x, y} of distinct points.

    Returns an (n, n) array with -1 on the diagonal (and outside ``points``).
    """
    table = np.asarray(table)
    sel = table if rows is None else table[np.asarray(rows, dtype=np.int64)]
    n = table.shape[1]
    pair = np.arange(n * n).reshape(n, n)
    lo = np.minimum(pair, pair.T)  # id of the unordered pair
    xs, ys = np.triu_indices(n, 1)
    src = lo[xs, ys]
    src_all, dst_all = [], []
    for g in sel:
        src_all.append(src)
        dst_all.append(lo[g[xs], g[ys]])
    src_all = np.concatenate(src_all)
    dst_all = np.concatenate(dst_all)
    graph = coo_matrix((np.ones(len(src_all), dtype=np.int8), (src_all, dst_all)), shape=(n * n, n * n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    out = comp[lo].astype(np.int64)
    np.fill_diagonal(out, -1)
    used = np.unique(out[xs, ys])
    remap = np.full(comp.max() + 1, -1)
    remap[used] = np.arange(len(used))
    out = np.where(out >= 0, remap[np.maximum(out, 0)], -1)
    if points is not None:
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(points)] = True
        out[~mask, :] = -1
        out[:, ~mask] = -1
    return out


def restrict_table(table: np.ndarray, subset) -> np.ndarray:
    """Action table on an invariant subset, reindexed to 0..len(subset)-1."""
    subset = np.asarray(subset, dtype=np.int64)
    inv = np.full(np.asarray(table).shape[1], -1, dtype=np.int64)
    inv[subset] = np.arange(len(subset))
    out = inv[np.asarray(table)[:, subset]]
    if np.any(out < 0):
        raise ValueError("subset is not invariant")
    return out.astype(np.int32 if len(subset) >= 32768 else np.int16)


# ---------------------------------------------------------------- even q structure


@dataclass
class SylowData:
    S: np.ndarray  # element indices
    K: np.ndarray
    k_generator: int
    sigma: int  # the involution gamma_1


def sylow2_even(group: PermGroup) -> SylowData:
    """S = centralizer of gamma_1 (elementary abelian of order q) and a cyclic K of order q-1 normalizing it."""
    plane = group.plane
    F = plane.field
    if F.p != 2:
        raise ValueError("q must be even")
    q = F.q
    sig = int(group.locate(gamma(F, 1).perm(plane)[None, :])[0])
    if sig < 0:
        raise ValueError("gamma_1 is not in the group")
    idx = np.arange(group.order)
    commute = group.mul(idx, np.full(group.order, sig)) == group.mul(np.full(group.order, sig), idx)
    S = np.flatnonzero(commute)
    if len(S) != q:
        raise RuntimeError(f"centralizer of an involution has order {len(S)}, expected {q}")
    # K: diagonal element of order q-1 (normalizes the unipotent group of gamma_c)
    kg = int(group.locate(psl2_embed(F, F.omega, 0, 0, 1).perm(plane)[None, :])[0])
    K = group.closure([kg])
    Sset = set(S.tolist())
    if len(K) != q - 1 or not set(group.conjugate_set(S, kg).tolist()) == Sset:
        raise RuntimeError("K does not normalize S with order q-1")
    return SylowData(S, K, kg, sig)


def fixed_points(perm: np.ndarray) -> np.ndarray:
    return np.flatnonzero(perm == np.arange(len(perm)))


def elation_data(group: PermGroup, sigma: int) -> tuple[int, int]:
    """(center, axis) of an involutory collineation; raises if not an elation."""
    plane = group.plane
    p = group.perms[sigma]
    if sigma == 0 or not np.array_equal(p[p], np.arange(len(p))):
        raise ValueError("not an involution")
    fixed_pts = fixed_points(p)
    fixed_lines = fixed_points(group.line_perms()[sigma])
    if len(fixed_pts) != plane.q + 1 or len(fixed_lines) != plane.q + 1:
        raise ValueError("fixed structure is not that of an elation")
    axis = [L for L in fixed_lines.tolist() if set(plane.line_points[L].tolist()) == set(fixed_pts.tolist())]
    if len(axis) != 1:
        raise ValueError("fixed points are not collinear")
    center = set(fixed_pts.tolist())
    for L in fixed_lines.tolist():
        center &= set(plane.line_points[L].tolist())
    if len(center) != 1:
        raise ValueError("fixed lines are not concurrent")
    return center.pop(), axis[0]


# ---------------------------------------------------------------- abstract subgroup machinery


def coset_labels(group: PermGroup, H) -> np.ndarray:
    """Label of the right coset Hg for every element g (the smallest index in Hg)."""
    H = np.asarray(H, dtype=np.int64)
    out = np.full(group.order, np.iinfo(np.int64).max)
    idx = np.arange(group.order)
    for h in H.tolist():
        out = np.minimum(out, group.mul(np.full(group.order, h), idx))
    return out


def coset_action(group: PermGroup, H, name: str = "") -> tuple[PermGroup, np.ndarray]:
    """Action of the group on the right cosets of H; returns the group and coset reps."""
    lab = coset_labels(group, H)
    reps, inverse = np.unique(lab, return_inverse=True)
    n = len(reps)
    idx = np.arange(group.order)
    perms = np.empty((group.order, n), dtype=np.int16)
    for g in range(group.order):
        perms[g] = inverse[group.mul(reps, np.full(n, g))] if n > 1 else 0
    # greedy base: add coset points until the keys separate the elements
    base = _greedy_base(perms)
    G = PermGroup(perms, base, gens=group.gens, name=name or f"{group.name} on cosets")
    del idx
    return G, reps


def _greedy_base(perms: np.ndarray) -> list[int]:
    N, n = perms.shape
    base: list[int] = []
    cls = np.zeros(N, dtype=np.int64)
    while len(np.unique(cls)) < N:
        best, best_k = None, -1
        for x in range(n):
            if x in base:
                continue
            k = len(np.unique(cls * n + perms[:, x]))
            if k > best_k:
                best, best_k = x, k
        base.append(best)
        cls = np.unique(cls * n + perms[:, best], return_inverse=True)[1]
        if len(base) > 6:
            raise ValueError("base too long")
    return base


def is_dihedral(group: PermGroup, idx) -> bool:
    """True iff the subgroup (given by element indices) is dihedral of order >= 4 (Klein four counts)."""
    idx = np.asarray(idx)
    n = len(idx)
    if n < 4 or n % 2:
        return False
    orders = np.array([group.element_order(int(i)) for i in idx])
    if not np.any(orders == n // 2) and n > 4:
        return False
    # a cyclic subgroup of index 2 plus n/2 involutions outside it
    for c in idx[orders == n // 2].tolist():
        C = set(group.closure([c]).tolist())
        outside = [int(i) for i in idx.tolist() if i not in C]
        if len(C) == n // 2 and all(group.element_order(i) == 2 for i in outside):
            return True
    if n == 4:
        return int(np.sum(orders == 2)) == 3
    return False


def conjugacy_classes(group: PermGroup) -> list[np.ndarray]:
    T = group.mult_table()
    inv = group.inverse_rows()
    seen = np.zeros(group.order, dtype=bool)
    out = []
    for g in range(group.order):
        if seen[g]:
            continue
        cls = np.unique(T[T[inv, g], np.arange(group.order)])
        seen[cls] = True
        out.append(cls)
    return out


def subgroup_classes(group: PermGroup, order: int, max_gens: int = 3) -> list[np.ndarray]:
    """Representatives of the conjugacy classes of subgroups of a given order.

    Subgroups are grown from class representatives by adjoining further
    elements (up to ``max_gens`` generators), so every subgroup generated by
    that many elements is found.  Each class is represented by its smallest
    element list.
    """
    T = group.mult_table()
    inv = group.inverse_rows()
    N = group.order
    if N % order:
        return []
    classes = conjugacy_classes(group)
    elt_orders = group.element_orders()

    def close(gens):
        elems = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for g in gens:
                for x in T[frontier, g].tolist():
                    if x not in elems:
                        elems.add(x)
                        nxt.append(x)
            if len(elems) > order:
                return None
            frontier = nxt
        return frozenset(elems)

    def conj_class(H):
        Ha = np.array(sorted(H))
        return {tuple(np.sort(T[T[inv[g], Ha], g]).tolist()) for g in range(N)}

    found: dict = {}
    known_conj: set = set()
    layer = {}
    for cls in classes:
        g = int(cls[0])
        if order % elt_orders[g]:
            continue
        H = close([g])
        if H is not None:
            layer[H] = [g]
    for _ in range(max_gens):
        nxt = {}
        for H, gens in layer.items():
            if len(H) == order:
                key = tuple(sorted(H))
                if key not in known_conj:
                    cc = conj_class(H)
                    known_conj |= cc
                    found[min(cc)] = True
                continue
            for h in range(N):
                if h in H or order % elt_orders[h]:
                    continue
                K = close(gens + [h])
                if K is not None and K not in nxt and order % len(K) == 0:
                    nxt[K] = gens + [h]
        # keep one subgroup per conjugacy class to bound the work
        pruned, seen_keys = {}, set()
        for K, gens in sorted(nxt.items(), key=lambda kv: sorted(kv[0])):
            key = tuple(sorted(K))
            if key in seen_keys:
                continue
            seen_keys |= conj_class(K)
            pruned[K] = gens
        layer = pruned
    for H in layer:
        if len(H) == order:
            key = tuple(sorted(H))
            if key not in known_conj:
                cc = conj_class(H)
                known_conj |= cc
                found[min(cc)] = True
    return [np.array(k, dtype=np.int64) for k in sorted(found)]
