import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgdt.field import field_of_order
from fgdt.plane import (
    INF,
    build_plane,
    classify_line,
    classify_points,
    coords_of,
    hyperoval,
    internal_points,
    nucleus,
    pencil_conic,
    pole,
    polarity_image,
    tangent_lines,
)

ODD = [3, 5, 7, 9, 11, 13]
EVEN = [4, 8, 16]


def plane(q):
    return build_plane(field_of_order(q))


# ---------------------------------------------------------------- scalar oracle
# Incidence by scalar dot products, one pair at a time.


def sdot(F, u, v):
    return F.add(F.add(F.mul(u[0], v[0]), F.mul(u[1], v[1])), F.mul(u[2], v[2]))


def brute_incidence(P):
    F, pts = P.field, P.points.tolist()
    return [[sdot(F, pt, L) == 0 for pt in pts] for L in pts]


def conic_value(F, x, h):
    return F.sub(F.mul(x[0], x[2]), F.mul(h, F.mul(x[1], x[1])))


# ---------------------------------------------------------------- structure


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_line_points_match_scalar_incidence(q):
    P = plane(q)
    inc = brute_incidence(P)
    for L in range(P.n_points):
        assert sorted(np.flatnonzero(inc[L]).tolist()) == P.line_points[L].tolist()


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25])
def test_projective_plane_axioms(q):
    P = plane(q)
    assert P.n_points == q * q + q + 1
    assert P.line_points.shape == (P.n_points, q + 1)
    # every pair of points on exactly one line
    M = np.zeros((P.n_points, P.n_points), dtype=np.int64)
    for row in P.line_points:
        M[np.ix_(row, row)] += 1
    np.fill_diagonal(M, 1)
    assert np.all(M == 1)


def test_canonical_coordinates_are_normalized():
    for q in (5, 8, 9):
        X = coords_of(q, np.arange(q * q + q + 1))
        for row in X.tolist():
            lead = next(c for c in reversed(row) if c)
            assert lead == 1  # last nonzero coordinate is one


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([5, 7, 8, 9, 11]), st.data())
def test_join_meet_consistent(q, data):
    P = plane(q)
    a, b = data.draw(st.lists(st.integers(0, P.n_points - 1), min_size=2, max_size=2, unique=True))
    L = int(P.join(a, b))
    assert a in P.line_points[L] and b in P.line_points[L]
    M = int(P.join(a, data.draw(st.sampled_from([x for x in range(P.n_points) if x not in P.line_points[L]]))))
    assert int(P.meet(L, M)) == a


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 5, 7, 8, 9]), st.data())
def test_invertible_matrix_is_a_collineation(q, data):
    P = plane(q)
    F = P.field
    M = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=9, max_size=9))).reshape(3, 3)
    from fgdt.group import mat_det

    if mat_det(F, M) == 0:
        return
    perm = P.apply_matrix(M)
    assert sorted(perm.tolist()) == list(range(P.n_points))
    # lines go to lines
    images = np.sort(perm[P.line_points], axis=1)
    assert {tuple(r) for r in images.tolist()} == {tuple(r) for r in P.line_points.tolist()}
    assert np.array_equal(np.sort(P.line_perm(perm)), np.arange(P.n_points))


# ---------------------------------------------------------------- conics, odd q


@pytest.mark.parametrize("q", ODD)
def test_conic_points_by_scalar_evaluation(q):
    P = plane(q)
    F = P.field
    for h in range(1, q):
        C = pencil_conic(P, h)
        want = [i for i, x in enumerate(P.points.tolist()) if conic_value(F, x, h) == 0]
        assert C.points.tolist() == want
        assert len(C) == q + 1 and C.kind == "irreducible"
        assert P.O in C and P.P_inf in C


def test_degenerate_pencil_members():
    P = plane(7)
    assert pencil_conic(P, 0).kind == "simply-degenerate"
    assert len(pencil_conic(P, 0)) == 2 * 7 + 1
    assert pencil_conic(P, INF).kind == "doubly-degenerate"
    assert len(pencil_conic(P, INF)) == 7 + 1


@pytest.mark.parametrize("q", ODD)
def test_census_odd(q):
    """internal q(q-1)/2, external q(q+1)/2."""
    P = plane(q)
    labels = classify_points(P, pencil_conic(P, 1))
    assert (labels == "on_conic").sum() == q + 1
    assert (labels == "internal").sum() == q * (q - 1) // 2
    assert (labels == "external").sum() == q * (q + 1) // 2


@pytest.mark.parametrize("q", [5, 7, 9])
def test_internal_points_by_brute_tangent_count(q):
    """Internal means on no tangent; tangents found by scalar incidence."""
    P = plane(q)
    F = P.field
    inc = brute_incidence(P)
    on = {i for i, x in enumerate(P.points.tolist()) if conic_value(F, x, 1) == 0}
    tangents = [L for L in range(P.n_points) if sum(inc[L][i] for i in on) == 1]
    internal = [i for i in range(P.n_points) if i not in on and not any(inc[L][i] for L in tangents)]
    assert internal_points(P, pencil_conic(P, 1)).tolist() == internal


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 25])
def test_internal_points_by_quadratic_form(q):
    """for X0 X2 - X1^2, a point off the conic is internal iff -Q(P) is a nonsquare."""
    P = plane(q)
    F = P.field
    labels = classify_points(P, pencil_conic(P, 1))
    for i, x in enumerate(P.points.tolist()):
        Q = conic_value(F, x, 1)
        if Q:
            assert (labels[i] == "internal") == (F.chi(F.neg(Q)) == -1)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_polarity_round_trip(q):
    P = plane(q)
    idx = np.arange(P.n_points)
    for h in (1, 2):
        assert np.array_equal(pole(P, polarity_image(P, idx, h), h), idx)


def test_polarity_needs_odd_q():
    with pytest.raises(ValueError):
        polarity_image(plane(8), 0)


def test_classify_line_rejects_non_arc():
    P = plane(5)
    with pytest.raises(ValueError):
        classify_line(P, 0, P.line_points[0][:3])


# ---------------------------------------------------------------- hyperovals, even q


@pytest.mark.parametrize("q", EVEN)
def test_hyperoval_and_nucleus(q):
    P = plane(q)
    C = pencil_conic(P, 1)
    N = nucleus(P, C)
    assert P.coords(N) == (0, 1, 0)
    tans = tangent_lines(P, C.points)
    assert len(tans) == q + 1 and all(N in P.line_points[t] for t in tans)
    J = hyperoval(P, C)
    sizes = P.intersection_sizes(J.points)
    assert set(np.unique(sizes).tolist()) == {0, 2}
    assert len(J.external_lines) == q * (q - 1) // 2
    assert len(J.secant_lines) == (q + 2) * (q + 1) // 2


@pytest.mark.parametrize("q", EVEN)
def test_secant_and_external_counts_through_points_off_hyperoval(q):
    """q/2 + 1 secants and q/2 external lines through each point off J."""
    P = plane(q)
    J = hyperoval(P, pencil_conic(P, 1))
    sizes = P.intersection_sizes(J.points)
    for x in sorted(set(range(P.n_points)) - set(J.points.tolist())):
        through = sizes[[L for L in range(P.n_points) if x in P.line_points[L]]]
        assert (through == 2).sum() == q // 2 + 1
        assert (through == 0).sum() == q // 2


def test_hyperoval_needs_even_q():
    P = plane(7)
    with pytest.raises(ValueError):
        hyperoval(P, pencil_conic(P, 1))


def test_plane_dump(tmp_path):
    P = plane(3)
    P.dump(tmp_path / "pg.txt")
    rows = (tmp_path / "pg.txt").read_text().splitlines()
    assert rows[0] == "PG2 3" and len(rows) == 14
    assert [list(map(int, r.split())) for r in rows[1:]] == P.line_points.tolist()


def test_line_pairs_exhaustive_small():
    P = plane(3)
    for a, b in itertools.combinations(range(P.n_points), 2):
        L = int(P.join(a, b))
        assert P.on_line(a, L) and P.on_line(b, L)
