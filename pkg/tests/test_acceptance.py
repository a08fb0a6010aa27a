"""Acceptance criteria AC1-AC10, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the "acceptance criteria"
section at the end of the pytest run.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import record_acceptance
from varevasive.construction import (
    build_construction,
    evaluate_membership,
    index_to_point,
    point_to_index,
    points_in_range,
    theoretical_bound,
)
from varevasive.field import make_field
from varevasive.parameters import check_k_regular, vandermonde_matrix
from varevasive.varieties import (
    curve_from_coefficients,
    enumerate_flat_points,
    canonical_flat,
    find_annihilator,
    parametric_image_points,
    sample_flats,
    zero_set_points,
)
from varevasive.verify import (
    CHUNK,
    _curve_coefficients,
    evaluation_field,
    random_baseline,
    recount_witness,
    sweep_curves,
    sweep_flats,
)

pytestmark = pytest.mark.acceptance

SEED = 20240601


def verdict(name, ok, detail):
    record_acceptance(name, bool(ok), detail)
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def F31():
    return make_field(31)


@pytest.fixture(scope="module")
def ac1_construction(F11):
    return build_construction(F11, 4, 2, 1)


@pytest.fixture(scope="module")
def ac2_report(F11):
    c = build_construction(F11, 3, 1, 1)
    return c, sweep_flats(c, mode="exhaustive")


@pytest.fixture(scope="module")
def ac3_report(F11):
    c = build_construction(F11, 4, 2, 1)
    return c, sweep_flats(c, mode="sampled", trials=10**5, seed=SEED)


@pytest.fixture(scope="module")
def ac4_reports(F31):
    c = build_construction(F31, 3, 1, 2)
    base = sweep_curves(c, 2, 10**4, seed=SEED)
    ext = sweep_curves(c, 2, 100, seed=SEED, ext_degree=2)
    return c, base, ext


@pytest.fixture(scope="module")
def ac6_report(F11):
    c = build_construction(F11, 4, 1, 1, 2, exponents=(7, 3))
    return c, sweep_flats(c, mode="sampled", trials=10**4, seed=SEED)


def test_ac1_size_and_bijectivity(ac1_construction):
    c = ac1_construction
    t0 = time.perf_counter()
    idxs = list(itertools.product(range(11), repeat=2))
    pts = [index_to_point(c, i) for i in idxs]
    distinct = len(set(pts))
    members = all(evaluate_membership(c, x) for x in pts)
    roundtrip = all(point_to_index(c, x) == i for i, x in zip(idxs, pts))
    elapsed = time.perf_counter() - t0
    ok = distinct == 121 and members and roundtrip and elapsed < 1.0
    verdict("AC1", ok, f"distinct={distinct} members={members} roundtrip={roundtrip} ({elapsed:.2f}s)")


def test_ac2_exhaustive_lines(ac2_report):
    c, rep = ac2_report
    ok = (
        c.plan.exponents == (7, 5, 3)
        and rep.trials == 16093
        and rep.max_intersection <= 7
        and recount_witness(c, rep.to_json()) == rep.max_intersection
    )
    verdict("AC2", ok, f"lines={rep.trials} max={rep.max_intersection} bound=7")


def test_ac3_plane_evasion(ac3_report):
    c, rep = ac3_report
    d1, d2 = c.plan.exponents[:2]
    ok = rep.trials >= 10**5 and rep.bound == d1 * d2 and rep.max_intersection <= d1 * d2
    verdict("AC3", ok, f"plan={c.plan.exponents} flats={rep.trials} max={rep.max_intersection} bound={d1 * d2}")


def test_ac4_degree_two_curves(ac4_reports):
    c, base, ext = ac4_reports
    ok = (
        c.plan.exponents == (13, 11, 7)
        and base.trials == 10**4 and ext.trials == 100
        and ext.extension_degree == 2
        and base.bound == ext.bound == 26
        and base.max_intersection <= 26 and ext.max_intersection <= 26
    )
    verdict("AC4", ok, f"F_31 max={base.max_intersection} F_961 max={ext.max_intersection} bound=26")


def test_ac5_k_regularity():
    t0 = time.perf_counter()
    shapes = bad = 0
    for q in (7, 11, 13):
        f = make_field(q)
        for n in range(1, 7):
            for k in range(1, min(3, n) + 1):
                if q <= n:
                    continue
                res = check_k_regular(f, vandermonde_matrix(f, k, n).entries)
                shapes += 1
                bad += not res.regular or len(res.minors) != math.comb(n, k)
    elapsed = time.perf_counter() - t0
    verdict("AC5", bad == 0 and elapsed < 1.0, f"shapes={shapes} failures={bad} ({elapsed:.2f}s)")


def test_ac6_bucketed(ac6_report):
    c, rep = ac6_report
    ok = c.size == 121 and len(set(map(tuple, points_in_range(c, 0, c.size).tolist()))) == 121
    ok = ok and theoretical_bound(c) == 7 and rep.trials == 10**4 and rep.max_intersection <= 7
    verdict("AC6", ok, f"|U'|={c.size} lines={rep.trials} max={rep.max_intersection} bound=7")


def test_ac7_point_counts(ac2_report, ac3_report, ac4_reports, ac6_report):
    reports = [ac2_report[1], ac3_report[1], *ac4_reports[1:], ac6_report[1]]
    ok = all(r.point_count["all_ok"] and r.point_count["max_points"] <= r.point_count["limit"] for r in reports)
    detail = " ".join(f"{r.point_count['max_points']}<={r.point_count['limit']}" for r in reports)
    verdict("AC7", ok, detail)


def test_ac8_annihilators(ac4_reports, F11):
    c = ac4_reports[0]
    t0 = time.perf_counter()
    found = total = 0
    # the AC4 curves, regenerated from their chunk seeds
    for trials, ext in ((10**4, 1), (100, 2)):
        over = evaluation_field(c, ext)
        for chunk in range(math.ceil(trials / CHUNK)):
            start, stop = chunk * CHUNK, min(trials, (chunk + 1) * CHUNK)
            for coef in _curve_coefficients(c, 2, SEED, chunk, start, stop).tolist():
                pts = parametric_image_points(over, curve_from_coefficients(c.field, coef, 2), base=c.field)
                for J in itertools.combinations(range(3), 2):
                    total += 1
                    found += find_annihilator(over, pts, J, 2) is not None
    rng = np.random.default_rng([SEED, 8])
    bases, dirs = sample_flats(F11, 4, 2, 100, rng)
    for b, D in zip(bases.tolist(), dirs.tolist()):
        pts = enumerate_flat_points(F11, canonical_flat(F11, b, D))
        J = sorted(rng.choice(4, size=3, replace=False).tolist())
        total += 1
        found += find_annihilator(F11, pts, J, 1) is not None
    elapsed = time.perf_counter() - t0
    verdict("AC8", found == total and elapsed < 60, f"annihilators={found}/{total} ({elapsed:.1f}s)")


def test_ac9_random_baseline(F31):
    eps = Fraction(1, 2)
    k, d = 1, 1
    threshold = 10 * (d / eps) * math.comb(k + d + 2, k)
    rep = random_baseline(F31, 4, k, d, eps, list(range(20)), 10**4)
    within = sum(m <= threshold for m in rep.per_seed_max)
    ok = rep.set_size == 961 and len(rep.rows) == 20 and within >= 19
    verdict("AC9", ok, f"|S|={rep.set_size} seeds within {threshold}: {within}/20 maxima={rep.per_seed_max}")


def test_ac10_zero_set_cross_oracle(ac1_construction, F11):
    c = ac1_construction
    zs = {tuple(x) for x in zero_set_points(F11, c.polynomials()).tolist()}
    phi = {tuple(x) for x in points_in_range(c, 0, c.size).tolist()}
    verdict("AC10", zs == phi and len(zs) == 121, f"zero_set={len(zs)} phi={len(phi)} equal={zs == phi}")
