"""Incidence structures, 2-design certification and orbit-based design search."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from . import group as grp
from .field import field_of_order
from .plane import build_plane, hyperoval, pencil_conic, internal_points, classify_points

SEARCH_POINT_CAP = 2000
CANDIDATE_CAP = 2_000_000


class NotADesign(ValueError):
    def __init__(self, reason: str, witness: dict):
        super().__init__(f"{reason}: {witness}")
        self.reason = reason
        self.witness = witness


class SearchCapExceeded(RuntimeError):
    pass


@dataclass
class IncidenceStructure:
    v: int
    blocks: list  # sorted tuples, lexicographic order
    labels: dict | None = None

    def __post_init__(self):
        blocks = [tuple(sorted(int(x) for x in B)) for B in self.blocks]
        for B in blocks:
            if len(set(B)) != len(B):
                raise ValueError(f"block {B} repeats a point")
            if B and (B[0] < 0 or B[-1] >= self.v):
                raise ValueError(f"block {B} has indices outside 0..{self.v - 1}")
        self.blocks = sorted(blocks)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def block_array(self) -> np.ndarray:
        return np.array(self.blocks, dtype=np.int64)

    def incidence_matrix(self) -> np.ndarray:
        N = np.zeros((self.v, self.b), dtype=np.int64)
        for j, B in enumerate(self.blocks):
            N[list(B), j] = 1
        return N

    def flags(self) -> list[tuple[int, int]]:
        return [(x, j) for j, B in enumerate(self.blocks) for x in B]

    def block_set(self) -> frozenset:
        return frozenset(self.blocks)


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int
    repeated_blocks: int = 0

    def __post_init__(self):
        if self.b * self.k != self.v * self.r:
            raise ValueError(f"bk != vr for {self}")
        if self.lam * (self.v - 1) != self.r * (self.k - 1):
            raise ValueError(f"lambda(v-1) != r(k-1) for {self}")

    def as_tuple(self) -> tuple:
        return (self.v, self.b, self.r, self.k)

    def nontrivial(self) -> bool:
        return 2 < self.k < self.v - 1


def certify_design(S: IncidenceStructure, lam: int) -> DesignParams:
    """Check constant k, constant r and exact lambda coverage of every point pair."""
    if not S.blocks:
        raise NotADesign("no blocks", {})
    ks = {len(B) for B in S.blocks}
    if len(ks) != 1:
        j = next(j for j, B in enumerate(S.blocks) if len(B) != len(S.blocks[0]))
        raise NotADesign("non-uniform block size", {"block": list(S.blocks[j]), "expected_k": len(S.blocks[0])})
    k = ks.pop()
    N = S.incidence_matrix()
    M = N @ N.T
    r_vals = np.diag(M)
    if np.any(r_vals != r_vals[0]):
        x = int(np.flatnonzero(r_vals != r_vals[0])[0])
        raise NotADesign("non-constant replication", {"point": x, "r": int(r_vals[x]), "expected_r": int(r_vals[0])})
    off = M.copy()
    np.fill_diagonal(off, lam)
    bad = np.argwhere(off != lam)
    if len(bad):
        x, y = (int(t) for t in bad[0])
        raise NotADesign("pair coverage differs from lambda", {"pair": [x, y], "covered": int(M[x, y]), "lambda": lam})
    repeated = S.b - len(set(S.blocks))
    return DesignParams(S.v, S.b, int(r_vals[0]), k, lam, repeated)


def is_design(S: IncidenceStructure, lam: int) -> bool:
    try:
        certify_design(S, lam)
        return True
    except (NotADesign, ValueError):
        return False


# ---------------------------------------------------------------- flag transitivity


@dataclass
class FlagOrbitReport:
    flags: int
    orbits: int
    transitive: bool
    point_orbits: int
    block_orbits: int


def block_images(S: IncidenceStructure, table: np.ndarray) -> np.ndarray:
    """Block permutation induced by each row of ``table``; -1 where a block is not mapped to a block."""
    index = {B: j for j, B in enumerate(S.blocks)}
    A = S.block_array()
    out = np.empty((len(table), S.b), dtype=np.int64)
    for g, row in enumerate(np.asarray(table)):
        imgs = np.sort(row[A], axis=1)
        out[g] = [index.get(tuple(r), -1) for r in imgs.tolist()]
    return out


def flag_transitive(S: IncidenceStructure, table: np.ndarray, rows=None) -> FlagOrbitReport:
    """Orbits on flags of the group generated by the given permutations of the points."""
    table = np.asarray(table)
    gens = table if rows is None else table[np.asarray(rows, dtype=np.int64)]
    bimg = block_images(S, gens)
    if np.any(bimg < 0):
        g = int(np.argwhere(bimg < 0)[0][0])
        raise ValueError(f"not an automorphism group: generator {g} does not preserve the blocks")
    flags = S.flags()
    fidx = {f: i for i, f in enumerate(flags)}
    ftab = np.array([[fidx[(int(row[x]), int(bimg[g, j]))] for (x, j) in flags] for g, row in enumerate(gens)])
    fo = grp.orbit_partition(ftab) if len(ftab) else None
    po = grp.orbit_partition(gens)
    bo = grp.orbit_partition(bimg)
    n_f = len(fo) if fo is not None else len(flags)
    return FlagOrbitReport(len(flags), n_f, n_f == 1, len(po), len(bo))


# ---------------------------------------------------------------- constructions


def orbit_blocks(table: np.ndarray, base_block) -> np.ndarray:
    """Distinct images of a block under every row of ``table`` (sorted rows, lexicographic)."""
    B = np.asarray(sorted(base_block), dtype=np.int64)
    imgs = np.sort(np.asarray(table)[:, B], axis=1)
    return np.unique(imgs, axis=0)


def orbit_design(table: np.ndarray, base_block, labels=None) -> IncidenceStructure:
    table = np.asarray(table)
    if len(base_block) == 0:
        raise ValueError("empty base block")
    return IncidenceStructure(table.shape[1], [tuple(r) for r in orbit_blocks(table, base_block).tolist()], labels)


@dataclass
class WBSData:
    design: IncidenceStructure
    params: DesignParams
    group: grp.PermGroup
    external_lines: np.ndarray


def witt_bose_shrikhande(q: int) -> WBSData:
    """Pencils of external lines of the regular hyperoval: a 2-(q(q-1)/2, q/2, 1) linear space."""
    if q % 2 or q < 8:
        raise ValueError("W(q) needs even q >= 8")
    F = field_of_order(q)
    plane = build_plane(F)
    J = hyperoval(plane, pencil_conic(plane, 1))
    T = grp.psl2_group(plane)
    ext = J.external_lines
    table = grp.restrict_table(T.line_perms(), ext)
    syl = grp.sylow2_even(T)
    base = grp.orbit_partition(table[syl.S]).orbit_of(0)
    labels = {i: {"line": plane.lines[L].tolist()} for i, L in enumerate(ext.tolist())}
    D = orbit_design(table, base, labels)
    return WBSData(D, certify_design(D, 1), T, ext)


# ---------------------------------------------------------------- search engine


def unions_of_orbits(sizes: list[int], k: int, cap: int = CANDIDATE_CAP):
    """Index sets of orbits whose sizes sum to k (subset-sum enumeration)."""
    order = sorted(range(len(sizes)), key=lambda i: sizes[i])
    out = []

    def rec(start, remaining, chosen):
        if remaining == 0:
            out.append(tuple(sorted(chosen)))
            if len(out) > cap:
                raise SearchCapExceeded(f"more than {cap} candidate base blocks")
            return
        for pos in range(start, len(order)):
            i = order[pos]
            if sizes[i] > remaining:
                break
            chosen.append(i)
            rec(pos + 1, remaining - sizes[i], chosen)
            chosen.pop()

    rec(0, k, [])
    return out


@dataclass
class Candidate:
    block: tuple
    stabilizer_order: int
    orbit_length: int
    coverage: tuple  # lambda contributed on each pair orbital
    key: tuple  # lexicographically least block of the orbit


@dataclass
class SearchResult:
    designs: list  # IncidenceStructure
    candidates: int
    distinct_orbits: int
    one_orbit_hits: int
    two_orbit_hits: int
    subgroups: int
    details: dict = field(default_factory=dict)


class SearchContext:
    """Shared data for searching designs invariant under a permutation group.

    ``table`` holds every group element as a row; ``gens`` are generator rows
    used for the pair orbitals.
    """

    def __init__(self, table: np.ndarray, gens=None):
        self.table = np.asarray(table)
        self.N, self.n = self.table.shape
        if self.n > SEARCH_POINT_CAP:
            raise SearchCapExceeded(f"{self.n} points exceed the search cap {SEARCH_POINT_CAP}")
        self.gens = gens
        self.orbital = grp.pair_orbitals(self.table, rows=gens)
        xs, ys = np.triu_indices(self.n, 1)
        self.orbital_sizes = np.bincount(self.orbital[xs, ys])
        self._cache: dict = {}

    def candidate(self, block) -> Candidate:
        block = tuple(sorted(int(x) for x in block))
        if block in self._cache:
            return self._cache[block]
        B = np.asarray(block, dtype=np.int64)
        mask = np.zeros(self.n, dtype=bool)
        mask[B] = True
        stab = int(mask[self.table[:, B]].all(axis=1).sum())
        length = self.N // stab
        xs, ys = np.triu_indices(len(B), 1)
        counts = np.bincount(self.orbital[B[xs], B[ys]], minlength=len(self.orbital_sizes))
        num = counts * length
        if np.any(num % self.orbital_sizes):
            raise RuntimeError("non-integral orbital coverage: group table is not closed")
        cov = tuple((num // self.orbital_sizes).tolist())
        imgs = np.sort(self.table[:, B], axis=1)
        key = tuple(imgs[np.lexsort(imgs.T[::-1])[0]].tolist())
        c = Candidate(block, stab, length, cov, key)
        self._cache[block] = c
        return c

    def design_of(self, *blocks) -> IncidenceStructure:
        rows = np.concatenate([orbit_blocks(self.table, B) for B in blocks])
        return IncidenceStructure(self.n, [tuple(r) for r in rows.tolist()])


def exhaustive_block_search(
    ctx: SearchContext,
    k: int,
    lam: int,
    subgroups: list,
    shapes=(1, 2),
    points=None,
    cap: int = CANDIDATE_CAP,
) -> SearchResult:
    """All designs whose block set is a union of one or two group orbits of
    k-sets, where each base block is a union of orbits of one of the
    ``subgroups`` (element index arrays into ``ctx.table``).

    Candidates are screened by their exact coverage per pair orbital, and
    every hit is re-certified from scratch by pair enumeration.
    """
    cands: dict = {}
    n_cand = 0
    for U in subgroups:
        part = grp.orbit_partition(ctx.table[np.asarray(U, dtype=np.int64)], restrict=points)
        for combo in unions_of_orbits(part.sizes(), k, cap):
            n_cand += 1
            if n_cand > cap:
                raise SearchCapExceeded(f"more than {cap} candidates")
            block = tuple(sorted(np.concatenate([part.orbits[i] for i in combo]).tolist()))
            c = ctx.candidate(block)
            cands.setdefault(c.key, c)
    reps = sorted(cands.values(), key=lambda c: c.key)
    target = tuple([lam] * len(ctx.orbital_sizes))
    if points is not None:
        # only orbitals inside the point set must be covered
        inside = np.zeros(len(ctx.orbital_sizes), dtype=bool)
        P = np.asarray(points)
        xs, ys = np.triu_indices(len(P), 1)
        inside[np.unique(ctx.orbital[P[xs], P[ys]])] = True
        target = tuple(lam if inside[i] else 0 for i in range(len(inside)))
    found = []
    one = two = 0
    if 1 in shapes:
        for c in reps:
            if c.coverage == target:
                found.append((c.key,))
                one += 1
    if 2 in shapes:
        by_cov: dict = {}
        for c in reps:
            by_cov.setdefault(c.coverage, []).append(c)
        for c in reps:
            need = tuple(t - x for t, x in zip(target, c.coverage))
            if min(need) < 0:
                continue
            for d in by_cov.get(need, []):
                if d.key > c.key:
                    found.append((c.key, d.key))
                    two += 1
    designs = []
    for keys in found:
        D = ctx.design_of(*keys)
        certify_design(D, lam)  # independent route: raises if the screen was wrong
        designs.append(D)
    designs.sort(key=lambda D: D.blocks)
    return SearchResult(designs, n_cand, len(reps), one, two, len(subgroups))


def brute_force_designs(table: np.ndarray, k: int, lam: int, shapes=(1, 2)) -> list[IncidenceStructure]:
    """Oracle: every k-subset, every union of one or two of their group orbits, full certification."""
    table = np.asarray(table)
    n = table.shape[1]
    orbits = {}
    for B in itertools.combinations(range(n), k):
        if any(B in o for o in orbits.values()):
            continue
        blocks = frozenset(tuple(r) for r in orbit_blocks(table, B).tolist())
        orbits[min(blocks)] = blocks
    keys = sorted(orbits)
    out = []
    if 1 in shapes:
        for a in keys:
            D = IncidenceStructure(n, list(orbits[a]))
            if is_design(D, lam):
                out.append(D)
    if 2 in shapes:
        for a, b in itertools.combinations(keys, 2):
            D = IncidenceStructure(n, list(orbits[a] | orbits[b]))
            if is_design(D, lam):
                out.append(D)
    out.sort(key=lambda D: D.blocks)
    return out


def all_subgroup_reps(group: grp.PermGroup) -> list[np.ndarray]:
    """Conjugacy class representatives of subgroups of every order (small groups only)."""
    out = []
    for d in range(1, group.order + 1):
        if group.order % d == 0:
            out += grp.subgroup_classes(group, d)
    return out


# ---------------------------------------------------------------- Table 1

TABLE1 = {
    1: dict(v=6, b=10, r=5, k=3, G="PSL(2,5)", Gx=10, GB=6),
    2: dict(v=7, b=7, r=4, k=4, G="PSL(2,7)", Gx=24, GB=24),
    3: dict(v=10, b=15, r=6, k=4, G="PGL(2,5)", Gx=12, GB=8),
    4: dict(v=10, b=15, r=6, k=4, G="PSL(2,9)", Gx=36, GB=24),
    5: dict(v=11, b=11, r=5, k=5, G="PSL(2,11)", Gx=60, GB=60),
    6: dict(v=28, b=252, r=27, k=3, G="PSL(2,8)", Gx=18, GB=2, printed_k=7, printed_GB=14),
    7: dict(v=28, b=252, r=27, k=3, G="PGammaL(2,8)", Gx=54, GB=6, printed_k=7, printed_GB=42),
    8: dict(v=36, b=84, r=14, k=6, G="PSL(2,8)", Gx=14, GB=6),
    9: dict(v=36, b=84, r=14, k=6, G="PGammaL(2,8)", Gx=42, GB=18),
}


@dataclass
class Table1Result:
    line: int
    design: IncidenceStructure | None
    params: DesignParams | None
    group_name: str
    group_order: int
    point_stabilizer: int
    block_stabilizer: int | None
    flags: FlagOrbitReport | None
    designs_found: int
    notes: list = field(default_factory=list)


def _table1_action(line: int):
    """(group, action table on the design's points, point labels) for a Table 1 line."""
    if line == 1:
        F = field_of_order(5)
        plane = build_plane(F)
        T = grp.psl2_group(plane)
        pts = pencil_conic(plane, 1).points
        return T, grp.restrict_table(T.perms, pts), {i: {"conic_point": plane.coords(p)} for i, p in enumerate(pts)}
    if line == 2:
        F = field_of_order(2)
        plane = build_plane(F)
        gens = [np.asarray(plane.apply_matrix(m)) for m in ([[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]])]
        G = grp.enumerate_group(gens, grp.plane_base(plane), name="PSL(2,7)=PSL(3,2)", plane=plane)
        return G, G.perms, {i: {"fano_point": plane.coords(i)} for i in range(7)}
    if line in (3, 4):
        F = field_of_order(5 if line == 3 else 9)
        plane = build_plane(F)
        if line == 3:
            G = grp.pgl2_group(plane)
            I = internal_points(plane, pencil_conic(plane, 1))
            return G, grp.restrict_table(G.perms, I), {i: {"internal_point": plane.coords(p)} for i, p in enumerate(I)}
        # PSL(2,9) = A6 on the 10 points of PG(1,9): the conic of PG(2,9)
        G = grp.psl2_group(plane)
        pts = pencil_conic(plane, 1).points
        return G, grp.restrict_table(G.perms, pts), {i: {"conic_point": plane.coords(p)} for i, p in enumerate(pts)}
    if line == 5:
        F = field_of_order(11)
        plane = build_plane(F)
        T = grp.psl2_group(plane)
        conic_tab = grp.restrict_table(T.perms, pencil_conic(plane, 1).points)
        small = grp.PermGroup(conic_tab, grp._greedy_base(conic_tab), gens=T.gens, name="PSL(2,11)")
        A5 = grp.subgroup_classes(small, 60)
        if not A5:
            raise RuntimeError("no subgroup of order 60 in PSL(2,11)")
        G, reps = grp.coset_action(small, A5[0], name="PSL(2,11) on cosets of A5")
        return G, G.perms, {i: {"coset_rep": int(r)} for i, r in enumerate(reps)}
    if line in (6, 7, 8, 9):
        F = field_of_order(8)
        plane = build_plane(F)
        G = grp.psl2_group(plane) if line in (6, 8) else grp.pgammal2_group(plane)
        C = pencil_conic(plane, 1)
        if line in (6, 7):
            pts = hyperoval(plane, C).external_lines
            return G, grp.restrict_table(G.line_perms(), pts), {i: {"external_line": plane.lines[L].tolist()} for i, L in enumerate(pts)}
        sizes = plane.intersection_sizes(C.points)
        pts = np.flatnonzero(sizes == 2)
        return G, grp.restrict_table(G.line_perms(), pts), {i: {"secant_line": plane.lines[L].tolist()} for i, L in enumerate(pts)}
    raise ValueError(f"Table 1 has lines 1..9, got {line}")


def small_group(table: np.ndarray, gens=None, name: str = "") -> grp.PermGroup:
    return grp.PermGroup(np.asarray(table), grp._greedy_base(np.asarray(table)), gens=gens, name=name)


def table1_construct(line: int, k: int | None = None, block_stabilizer: int | None = None) -> Table1Result:
    """Construct and certify the design of one Table 1 line by orbit search."""
    if line not in TABLE1:
        raise ValueError(f"Table 1 has lines 1..9, got {line}")
    row = TABLE1[line]
    k = row["k"] if k is None else k
    G, table, labels = _table1_action(line)
    H = small_group(table, gens=G.gens, name=G.name)
    notes = []
    if H.order != G.order:
        notes.append("action is not faithful")
    v = table.shape[1]
    gx = len(grp.stabilizer(table, 0))
    if v != row["v"]:
        raise RuntimeError(f"line {line}: action has {v} points, expected {row['v']}")
    lam = 2
    b_target = lam * v * (v - 1) // (k * (k - 1))
    orders = [block_stabilizer] if block_stabilizer else sorted({H.order * s // b_target for s in (1, 2) if (H.order * s) % b_target == 0})
    subgroups = []
    for o in orders:
        subgroups += grp.subgroup_classes(H, o)
    ctx = SearchContext(table, gens=G.gens or None)
    res = exhaustive_block_search(ctx, k, lam, subgroups, shapes=(1, 2))
    best = None
    for D in res.designs:
        rep = flag_transitive(D, table, rows=G.gens or None)
        if best is None or (rep.transitive and not best[1].transitive):
            best = (D, rep)
    if best is None:
        return Table1Result(line, None, None, G.name, G.order, gx, None, None, 0, notes + ["search exhausted without a design"])
    D, rep = best
    params = certify_design(D, lam)
    gb = len(grp.setwise_stabilizer(table, D.blocks[0]))
    D.labels = labels
    return Table1Result(line, D, params, G.name, G.order, gx, gb, rep, len(res.designs), notes)


# ---------------------------------------------------------------- file formats


def write_blocks(path, S: IncidenceStructure, lam: int) -> None:
    """Line 1 ``v b k lambda``; then one sorted block per line; trailing newline."""
    k = len(S.blocks[0]) if S.blocks else 0
    rows = [f"{S.v} {S.b} {k} {lam}"] + [" ".join(map(str, B)) for B in S.blocks]
    Path(path).write_text("\n".join(rows) + "\n")


def read_blocks(path) -> tuple[IncidenceStructure, int]:
    text = Path(path).read_text()
    if not text.endswith("\n"):
        raise ValueError("block file must end with a newline")
    rows = text[:-1].split("\n")
    v, b, k, lam = (int(x) for x in rows[0].split(" "))
    blocks = [tuple(int(x) for x in r.split(" ")) for r in rows[1:]] if b else []
    if len(blocks) != b or any(len(B) != k for B in blocks):
        raise ValueError("block count or size disagrees with the header")
    if any(list(B) != sorted(B) for B in blocks):
        raise ValueError("blocks must be sorted")
    return IncidenceStructure(v, blocks), lam


def write_labels(path, S: IncidenceStructure) -> None:
    labels = {str(i): S.labels[i] for i in sorted(S.labels or {})}
    Path(path).write_text(json.dumps(labels, indent=1, sort_keys=True) + "\n")


def pair_count(v: int) -> int:
    return comb(v, 2)
