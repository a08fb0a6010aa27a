import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varevasive.construction import build_construction, enumerate_points
from varevasive.errors import InvalidParameters, WorkBudgetExceeded
from varevasive.field import embedding, make_field
from varevasive.linalg import rank
from varevasive.poly import Polynomial, grlex_monomials
from varevasive.varieties import (
    ZeroSet,
    canonical_flat,
    curve_from_coefficients,
    curve_points_batch,
    enumerate_all_flats,
    enumerate_flat_points,
    find_annihilator,
    flat_census,
    flats_by_index,
    gaussian_binomial,
    make_parametric,
    parametric_image_points,
    point_count_bound_check,
    sample_curves,
    sample_flats,
    variety_from_json,
    variety_points,
    zero_set_points,
)


def as_set(points):
    return {tuple(x) for x in np.asarray(points).tolist()}


def brute_flats(q, n, k):
    """All affine k-flats of F_q^n as frozensets of points, by spanning every tuple."""
    space = list(itertools.product(range(q), repeat=n))
    coeffs = list(itertools.product(range(q), repeat=k))
    out = set()
    for base in space:
        for dirs in itertools.product(space, repeat=k):
            pts = frozenset(
                tuple((b + sum(c * v[j] for c, v in zip(t, dirs))) % q for j, b in enumerate(base))
                for t in coeffs
            )
            if len(pts) == q**k:
                out.add(pts)
    return out


# -- flats ------------------------------------------------------------------------


def test_flat_point_counts(F11):
    assert as_set(enumerate_flat_points(F11, canonical_flat(F11, (1, 2, 3), []))) == {(1, 2, 3)}
    line = canonical_flat(F11, (1, 2, 3), [(0, 1, 5)])
    assert len(as_set(enumerate_flat_points(F11, line))) == 11
    F5 = make_field(5)
    plane = canonical_flat(F5, (1, 1, 1, 1), [(1, 2, 0, 3), (0, 1, 1, 1)])
    assert len(as_set(enumerate_flat_points(F5, plane))) == 25
    with pytest.raises(InvalidParameters):
        canonical_flat(F5, (0, 0), [(1, 2), (2, 4)])
    with pytest.raises(WorkBudgetExceeded):
        enumerate_flat_points(F5, plane, budget=10)


def test_line_census_examples(F11):
    assert sum(1 for _ in enumerate_all_flats(make_field(3), 2, 1)) == 12
    assert flat_census(3, 2, 1) == 12 == 3 * 4
    assert flat_census(11, 3, 1) == 16093 == 11**2 * (11**2 + 11 + 1)
    assert flat_census(11, 3, 1) == 11**2 * (11**3 - 1) // 10


@pytest.mark.parametrize("q,n,k", [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 3, 2), (3, 3, 1), (2, 4, 2), (3, 3, 2)])
def test_census_matches_brute_force_dedup(q, n, k):
    f = make_field(q)
    flats = list(enumerate_all_flats(f, n, k))
    as_sets = [frozenset(as_set(enumerate_flat_points(f, fl))) for fl in flats]
    assert len(flats) == flat_census(q, n, k)
    assert len(set(as_sets)) == len(flats)  # no flat is listed twice
    assert set(as_sets) == brute_flats(q, n, k)


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 3, 1), (5, 3, 2), (4, 3, 1), (7, 2, 1)])
def test_flats_by_index_is_canonical_and_complete(q, n, k):
    f = make_field(*{4: (2, 2)}.get(q, (q, 1)))
    total = flat_census(q, n, k)
    bases, dirs = flats_by_index(f, n, k, 0, total)
    seen = set()
    for b, D in zip(bases.tolist(), dirs.tolist()):
        fl = canonical_flat(f, b, D)
        assert fl.basepoint == tuple(b) and fl.basis == tuple(map(tuple, D))
        seen.add(frozenset(as_set(enumerate_flat_points(f, fl))))
    assert len(seen) == total
    # slices agree with the full table
    b2, d2 = flats_by_index(f, n, k, total // 3, total // 2)
    assert (b2 == bases[total // 3:total // 2]).all() and (d2 == dirs[total // 3:total // 2]).all()
    with pytest.raises(InvalidParameters):
        flats_by_index(f, n, k, 0, total + 1)


def test_gaussian_binomial_small_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 11) == 133
    assert gaussian_binomial(3, 0, 5) == 1 == gaussian_binomial(3, 3, 5)
    assert gaussian_binomial(2, 3, 5) == 0


@given(st.integers(0, 2**31), st.sampled_from([(5, 3, 1), (11, 4, 2), (9, 3, 2), (2, 5, 3)]))
@settings(max_examples=40, deadline=None)
def test_canonical_form_is_span_invariant(seed, case):
    q, n, k = case
    f = make_field(*{9: (3, 2)}.get(q, (q, 1)))
    rng = np.random.default_rng(seed)
    bases, dirs = sample_flats(f, n, k, 1, rng)
    fl = canonical_flat(f, bases[0], dirs[0])
    # change of basis and basepoint shift inside the flat
    mix = rng.integers(0, q, size=(k, k))
    while rank(f, mix.tolist()) < k:
        mix = rng.integers(0, q, size=(k, k))
    new_dirs = [[f.sum(f.mul(int(mix[i][t]), int(dirs[0][t][j])) for t in range(k)) for j in range(n)]
                for i in range(k)]
    pts = enumerate_flat_points(f, fl)
    shift = pts[rng.integers(0, len(pts))]
    other = canonical_flat(f, shift, new_dirs)
    assert other == fl
    assert as_set(enumerate_flat_points(f, other)) == as_set(pts)


def test_sampled_flats_are_full_rank(F11):
    rng = np.random.default_rng(3)
    bases, dirs = sample_flats(F11, 4, 2, 500, rng)
    for b, D in zip(bases.tolist(), dirs.tolist()):
        assert len(as_set(enumerate_flat_points(F11, canonical_flat(F11, b, D)))) == 121


# -- parametric images --------------------------------------------------------------


def test_parabola_and_constant_map():
    F5 = make_field(5)
    par = curve_from_coefficients(F5, [[0, 1], [0, 0, 1]])
    assert par.deg_claim == 2 and par.dim_claim == 1
    assert as_set(parametric_image_points(F5, par)) == {(0, 0), (1, 1), (2, 4), (3, 4), (4, 1)}
    const = curve_from_coefficients(F5, [[3], [4]])
    assert as_set(parametric_image_points(F5, const)) == {(3, 4)}
    with pytest.raises(InvalidParameters):
        curve_from_coefficients(F5, [[0, 1], [0, 0, 1]], deg_claim=1)


def test_degree_one_curve_equals_its_flat(F11):
    coef = [[1, 2], [3, 0], [5, 7]]
    curve = curve_from_coefficients(F11, coef)
    flat = canonical_flat(F11, [1, 3, 5], [[2, 0, 7]])
    assert as_set(parametric_image_points(F11, curve)) == as_set(enumerate_flat_points(F11, flat))


def test_curve_batch_matches_polynomial_evaluation(F11):
    rng = np.random.default_rng(1)
    coef = sample_curves(F11, 3, 2, 20, rng)
    pts = curve_points_batch(F11, coef)
    for c, batch in zip(coef.tolist(), pts):
        curve = curve_from_coefficients(F11, c, deg_claim=2)
        assert as_set(batch) == as_set(parametric_image_points(F11, curve))
        for t in range(11):
            assert tuple(batch[t]) == tuple(sum(a * t**i for i, a in enumerate(row)) % 11 for row in c)


def test_extension_image_contains_base_image():
    F, E = make_field(3), make_field(3, 2)
    emb = embedding(F, E)
    curve = curve_from_coefficients(F, [[1, 2, 1], [0, 1]])
    small = parametric_image_points(F, curve)
    big = parametric_image_points(E, curve, base=F)
    assert {tuple(emb[x]) for x in small.tolist()} <= as_set(big)
    assert len(big) == 9


def test_two_parameter_image(F7):
    s, t = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    image = make_parametric(F7, [s, t, Polynomial.from_terms(2, [((1, 1), 1)], F7)])
    pts = parametric_image_points(F7, image)
    assert len(pts) == 49 and all((x * y - z) % 7 == 0 for x, y, z in pts.tolist())


def test_variety_json_roundtrip(F11):
    flat = canonical_flat(F11, (1, 2, 3), [(0, 1, 5)])
    curve = curve_from_coefficients(F11, [[0, 1], [0, 0, 1], [4]])
    zs = ZeroSet((Polynomial.variable(3, 0),), 3, 2, 1)
    for v in (flat, curve, zs):
        back = variety_from_json(v.to_json(), F11)
        assert as_set(variety_points(F11, back)) == as_set(variety_points(F11, v))
    with pytest.raises(InvalidParameters):
        variety_from_json({"kind": "blob"}, F11)


# -- zero sets ------------------------------------------------------------------------


def test_zero_set_examples():
    F3 = make_field(3)
    assert len(zero_set_points(F3, [], 2)) == 9
    assert as_set(zero_set_points(F3, [Polynomial.variable(2, 0)])) == {(0, 0), (0, 1), (0, 2)}
    with pytest.raises(InvalidParameters):
        zero_set_points(F3, [])


@pytest.mark.parametrize("p,e,n,k,m", [(11, 1, 2, 1, None), (11, 1, 4, 2, None), (5, 1, 4, 1, 2), (3, 2, 3, 1, None)])
def test_zero_set_of_construction_equals_phi_image(p, e, n, k, m):
    f = make_field(p, e)
    c = build_construction(f, n, k, 1, m)
    assert as_set(zero_set_points(f, c.polynomials())) == set(enumerate_points(c))


# -- annihilators ------------------------------------------------------------------------


def test_grlex_order():
    assert grlex_monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_parabola_annihilator():
    F5 = make_field(5)
    pts = np.array([(t, t * t % 5) for t in range(5)])
    g = find_annihilator(F5, pts, [0, 1], 2)
    # the kernel is one-dimensional here: g = c * (x2 - x1^2)
    assert g is not None
    target = Polynomial.from_terms(2, [((0, 1), 1), ((2, 0), 4)], F5).monic(F5)
    assert g == target
    assert str(g) == "x1^2 + 4*x2"
    assert all(g.evaluate(F5, x) == 0 for x in pts.tolist())


def test_no_affine_annihilator_on_the_plane():
    F5 = make_field(5)
    pts = np.array(list(itertools.product(range(5), repeat=2)))
    assert find_annihilator(F5, pts, [0, 1], 1) is None
    with pytest.raises(InvalidParameters):
        find_annihilator(F5, pts, [0, 2], 1)


@given(st.integers(0, 2**31), st.sampled_from([(11, 3, 1), (11, 4, 2), (7, 5, 3), (9, 3, 1)]))
@settings(max_examples=30, deadline=None)
def test_flats_have_affine_annihilators(seed, case):
    q, n, k = case
    f = make_field(*{9: (3, 2)}.get(q, (q, 1)))
    rng = np.random.default_rng(seed)
    bases, dirs = sample_flats(f, n, k, 1, rng)
    pts = enumerate_flat_points(f, canonical_flat(f, bases[0], dirs[0]))
    J = sorted(rng.choice(n, size=k + 1, replace=False).tolist())
    g = find_annihilator(f, pts, J, 1)
    assert g is not None and g.degree <= 1
    assert not (g.vevaluate(f, pts)).any()
    assert all(all(e[j] == 0 for j in range(n) if j not in J) for e, _ in g.terms)


# -- point counts -------------------------------------------------------------------------


def test_point_count_examples(F7):
    hyper = zero_set_points(F7, [Polynomial.from_terms(3, [((1, 0, 0), 1), ((0, 1, 0), 2)], F7)])
    assert len(hyper) == 49 and point_count_bound_check(hyper, 2, 1, 7)
    F5 = make_field(5)
    par = parametric_image_points(F5, curve_from_coefficients(F5, [[0, 1], [0, 0, 1]]))
    assert point_count_bound_check(par, 1, 2, 5) and len(par) <= 10
    assert point_count_bound_check(0, 0, 1, 7)
    assert point_count_bound_check(7, 1, 1, 7) and not point_count_bound_check(8, 1, 1, 7)
