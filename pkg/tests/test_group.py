import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgdt import group as grp
from fgdt.field import field_of_order
from fgdt.plane import build_plane, hyperoval, internal_points, pencil_conic


def ctx(q):
    F = field_of_order(q)
    return F, build_plane(F)


def psl_order(q):
    return q * (q * q - 1) // (1 if q % 2 == 0 else 2)


# ---------------------------------------------------------------- orders


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13, 16])
def test_group_orders(q):
    """|PSL(2,q)| = q(q^2-1)/gcd(2,q-1), |PGL(2,q)| = q(q^2-1), |PGammaL| = f |PGL|."""
    F, P = ctx(q)
    assert grp.psl2_group(P).order == psl_order(q)
    assert grp.pgl2_group(P).order == q * (q * q - 1)
    if F.f > 1:
        assert grp.pgammal2_group(P).order == F.f * q * (q * q - 1)


@pytest.mark.parametrize("q", [5, 8, 9])
def test_group_elements_are_distinct_conic_preserving_permutations(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    assert len({tuple(r) for r in T.perms[:, T.base].tolist()}) == T.order
    C = set(pencil_conic(P, 1).points.tolist())
    for row in T.perms:
        assert {int(row[x]) for x in C} == C
    assert np.array_equal(T.perms[0], np.arange(P.n_points))  # identity first


# ---------------------------------------------------------------- conventions


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 8, 9]), st.data())
def test_product_acts_first_factor_first(q, data):
    """Right action x -> xM: perm(a*b) = perm_b composed after perm_a."""
    F, P = ctx(q)
    T = grp.psl2_group(P)
    a, b = data.draw(st.integers(0, T.order - 1)), data.draw(st.integers(0, T.order - 1))
    ab = T.mul(a, b)
    assert np.array_equal(T.perms[ab], T.perms[b][T.perms[a]])
    M = grp.matrices_from_perms(P, T.perms[[a, b]])
    g = grp.GroupElement(F, M[0]) * grp.GroupElement(F, M[1])
    assert np.array_equal(g.perm(P), T.perms[ab])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 9, 11]), st.data())
def test_inverse_and_matrix_recovery(q, data):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    a = data.draw(st.integers(0, T.order - 1))
    assert T.mul(a, T.inv(a)) == 0
    M = grp.matrices_from_perms(P, T.perms[[a]])[0]
    assert np.array_equal(P.apply_matrix(M), T.perms[a])


@pytest.mark.parametrize("q", [5, 7, 8, 9, 11, 13])
def test_named_elements(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    a, b = grp.alpha(F), grp.beta(F)
    assert b.order() == 2
    assert a.order() == q - 1
    if q % 2:
        # alpha is in PGL(2,q) but not in PSL(2,q); its square is
        assert not T.contains_perm(a.perm(P))
        assert T.contains_perm(a.power(2).perm(P))
    else:
        assert T.contains_perm(a.perm(P))
    for c in range(q):
        for d in range(q):
            assert grp.gamma(F, c) * grp.gamma(F, d) == grp.gamma(F, F.add(c, d))


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 17])
def test_tau_membership_follows_its_determinant(q):
    """tau(xi) lies in PSL(2,q) iff -(1 + xi^2) is a nonzero square."""
    F, P = ctx(q)
    T = grp.psl2_group(P)
    for xi in range(1, q):
        if q % 4 == 1 and F.mul(xi, xi) == F.neg(1):
            with pytest.raises(ValueError):
                grp.tau(F, xi)
            continue
        t = grp.tau(F, xi)
        assert T.contains_perm(t.perm(P)) == grp.tau_in_psl2(F, xi)
        assert t.order() == 2


@pytest.mark.parametrize("q,expected", [(7, False), (11, True), (13, False)])
def test_tau_one_membership(q, expected):
    F = field_of_order(q)
    assert grp.tau_in_psl2(F, 1) is expected


def test_psl2_embed_rejects_nonsquare_determinant():
    F = field_of_order(7)
    with pytest.raises(ValueError):
        grp.psl2_embed(F, F.omega, 0, 0, 1)
    with pytest.raises(ValueError):
        grp.pgl2_embed(F, 0, 0, 0, 0)


# ---------------------------------------------------------------- orbits


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_psl2_orbits_on_points_odd(q):
    """PSL(2,q) has orbits: conic, internal points, external points."""
    F, P = ctx(q)
    T = grp.psl2_group(P)
    part = grp.orbits(T)
    assert sorted(part.sizes()) == sorted([q + 1, q * (q - 1) // 2, q * (q + 1) // 2])
    I = internal_points(P, pencil_conic(P, 1))
    assert np.array_equal(part.orbit_of(int(I[0])), I)


@pytest.mark.parametrize("q", [4, 8, 16])
def test_psl2_orbits_on_lines_even(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    J = hyperoval(P, pencil_conic(P, 1))
    part = grp.orbits(T, base="lines")
    assert np.array_equal(part.orbit_of(int(J.external_lines[0])), J.external_lines)


@pytest.mark.parametrize("q", [5, 7])
def test_transversal_maps_rep_to_point(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    part = grp.orbits(T, transversal=True)
    for x in range(P.n_points):
        rep = part.reps[part.labels[x]]
        assert T.perms[part.transversal[x], rep] == x


@pytest.mark.parametrize("q", [5, 7, 9])
def test_orbit_stabilizer(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    part = grp.orbits(T)
    for rep in part.reps.tolist():
        assert len(grp.stabilizer(T.perms, rep)) * len(part.orbit_of(rep)) == T.order


def test_pair_orbitals_count_matches_brute_force():
    F, P = ctx(7)
    T = grp.psl2_group(P)
    I = internal_points(P, pencil_conic(P, 1))
    tab = grp.restrict_table(T.perms, I)
    orb = grp.pair_orbitals(tab, rows=T.gens)
    # brute force: orbit of each unordered pair under every element
    n = tab.shape[1]
    seen, count = set(), 0
    for x in range(n):
        for y in range(x + 1, n):
            if (x, y) in seen:
                continue
            count += 1
            imgs = {tuple(sorted((int(g[x]), int(g[y])))) for g in tab}
            seen |= imgs
            assert len({int(orb[a, b]) for a, b in imgs}) == 1
    assert orb.max() + 1 == count


def test_restrict_table_requires_invariance():
    F, P = ctx(5)
    T = grp.psl2_group(P)
    with pytest.raises(ValueError):
        grp.restrict_table(T.perms, [0, 1])


# ---------------------------------------------------------------- subgroups


def test_psl27_subgroup_classes():
    """PSL(2,7) has two classes of S4 subgroups, one class of order-6 dihedral subgroups."""
    F, P = ctx(7)
    T = grp.psl2_group(P)
    assert len(grp.subgroup_classes(T, 24)) == 2
    six = grp.subgroup_classes(T, 6)
    assert len(six) == 1 and grp.is_dihedral(T, six[0])
    assert len(grp.subgroup_classes(T, 7)) == 1
    assert grp.subgroup_classes(T, 5) == []


def test_conjugacy_classes_psl27():
    """PSL(2,7) has 6 conjugacy classes with sizes 1, 21, 42, 56, 24, 24."""
    F, P = ctx(7)
    sizes = sorted(len(c) for c in grp.conjugacy_classes(grp.psl2_group(P)))
    assert sizes == [1, 21, 24, 24, 42, 56]


def test_is_dihedral_rejects_cyclic():
    F, P = ctx(7)
    T = grp.psl2_group(P)
    a2 = int(T.locate(grp.alpha(F).power(2).perm(P)[None, :])[0])
    C = T.closure([a2])
    assert len(C) == 3 and not grp.is_dihedral(T, C)


@pytest.mark.parametrize("q", [4, 8, 16])
def test_sylow2_even(q):
    F, P = ctx(q)
    T = grp.psl2_group(P)
    syl = grp.sylow2_even(T)
    assert len(syl.S) == q and len(syl.K) == q - 1
    assert all(T.element_order(int(s)) <= 2 for s in syl.S)
    center, axis = grp.elation_data(T, syl.sigma)
    assert center in P.line_points[axis]


def test_coset_action_is_transitive():
    F, P = ctx(5)
    T = grp.psl2_group(P)
    H = grp.stabilizer(T.perms, int(pencil_conic(P, 1).points[0]))
    G, reps = grp.coset_action(T, H)
    assert G.degree == T.order // len(H) == 6
    assert len(grp.orbit_partition(G.perms)) == 1


# ---------------------------------------------------------------- cache


def test_group_cache_round_trip(tmp_path):
    F, P = ctx(7)
    T = grp.psl2_group(P)
    path = tmp_path / "g.txt"
    grp.write_group_cache(path, T)
    assert path.read_text().startswith("FGDT-GROUP v1 q=7\n")
    back = grp.read_group_cache(path, P)
    assert np.array_equal(back.perms, T.perms) and back.gens == T.gens and back.name == T.name


def test_group_cache_rejects_wrong_q(tmp_path):
    F, P = ctx(7)
    grp.write_group_cache(tmp_path / "g.txt", grp.psl2_group(P))
    with pytest.raises(ValueError):
        grp.read_group_cache(tmp_path / "g.txt", build_plane(field_of_order(5)))


def test_cached_group_writes_cache_file(tmp_path):
    F, P = ctx(3)
    grp.set_cache_dir(tmp_path)
    try:
        grp._memo.clear()
        G = grp.psl2_group(P)
        files = list(tmp_path.iterdir())
        assert len(files) == 1 and files[0].name.startswith("group-")
        grp._memo.clear()
        again = grp.psl2_group(P)  # cold memo: read back from disk
        assert np.array_equal(again.perms, G.perms)
    finally:
        grp.set_cache_dir(None)
        grp._memo.clear()


def test_order_cap():
    F, P = ctx(5)
    with pytest.raises(grp.CapExceeded):
        grp.matrix_group(P, grp.pgl2_generators(F), cap=10)
