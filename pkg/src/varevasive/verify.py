"""Brute-force sweeps of adversary varieties against a construction.

Work is split into fixed-size chunks of variety indices. A sampled chunk
draws its varieties from ``default_rng([seed, chunk_index])``, so variety i
depends only on (seed, i) and a sweep with more trials extends, never
changes, a shorter one. Chunks may run in worker processes; results are
reduced in chunk order (max, ties to the smallest variety index), so output
does not depend on the worker count.
"""

from __future__ import annotations

import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .construction import EvasiveConstruction, build_construction, membership_mask, theoretical_bound
from .errors import InvalidParameters, WorkBudgetExceeded
from .field import FieldSpec, embedding, encode_points, make_field
from .varieties import (
    canonical_flat,
    curve_from_coefficients,
    curve_points_batch,
    flat_census,
    flat_points_batch,
    flats_by_index,
    point_count_bound_check,
    sample_curves,
    sample_flats,
    unique_points,
    variety_from_json,
    variety_points,
)

SCHEMA_VERSION = 1
CHUNK = 2048
WITNESS_CAP = 16
DEFAULT_SWEEP_BUDGET = 10**7
_EVAL_BATCH = 1 << 19  # points evaluated at once


def intersect_count(
    c: EvasiveConstruction,
    points: np.ndarray,
    over: FieldSpec | None = None,
    witness_cap: int = WITNESS_CAP,
) -> tuple[int, list[tuple[int, ...]]]:
    """Number of distinct points lying in U', plus up to ``witness_cap`` of them."""
    over = over or c.field
    points = np.asarray(points, dtype=np.int64)
    if points.size == 0:
        return 0, []
    pts = unique_points(over, points)
    hits = pts[membership_mask(c, pts, over)]
    return int(hits.shape[0]), [tuple(r) for r in hits[:witness_cap].tolist()]


def check_point_count(points, k: int, d: int, q: int) -> bool:
    return point_count_bound_check(points, k, d, q)


@dataclass
class _Tally:
    trials: int = 0
    max_count: int = -1
    argmax: int = -1
    max_points: int = 0
    point_count_ok: bool = True
    histogram: Counter = field(default_factory=Counter)

    def absorb(self, offset: int, counts: np.ndarray, npoints: np.ndarray, limit: int) -> None:
        if counts.size == 0:
            return
        self.trials += int(counts.size)
        i = int(np.argmax(counts))
        if counts[i] > self.max_count:
            self.max_count, self.argmax = int(counts[i]), offset + i
        self.max_points = max(self.max_points, int(npoints.max()))
        self.point_count_ok &= bool(np.all(npoints <= limit))
        vals, freq = np.unique(counts, return_counts=True)
        self.histogram.update(dict(zip(vals.tolist(), freq.tolist())))

    def merge(self, other: _Tally) -> None:
        # chunks arrive in index order, so strict > keeps the smallest index on ties
        self.trials += other.trials
        if other.max_count > self.max_count:
            self.max_count, self.argmax = other.max_count, other.argmax
        self.max_points = max(self.max_points, other.max_points)
        self.point_count_ok &= other.point_count_ok
        self.histogram.update(other.histogram)


def _run(fn: Callable, tasks: list[tuple], workers: int) -> _Tally:
    total = _Tally()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, *zip(*tasks)))
    else:
        results = [fn(*t) for t in tasks]
    for r in results:
        total.merge(r)
    return total


def _chunks(trials: int) -> list[tuple[int, int, int]]:
    return [(i, i * CHUNK, min(trials, (i + 1) * CHUNK)) for i in range(math.ceil(trials / CHUNK))]


# -- flats --------------------------------------------------------------------


def _flat_batch(c: EvasiveConstruction, k: int, mode: str, seed: int, chunk: int, start: int, stop: int):
    if mode == "exhaustive":
        return flats_by_index(c.field, c.n, k, start, stop)
    rng = np.random.default_rng([seed, chunk])
    bases, dirs = sample_flats(c.field, c.n, k, CHUNK, rng)
    return bases[: stop - start], dirs[: stop - start]


def _flats_task(c: EvasiveConstruction, k: int, mode: str, seed: int, chunk: int, start: int, stop: int) -> _Tally:
    bases, dirs = _flat_batch(c, k, mode, seed, chunk, start, stop)
    tally = _Tally()
    per = c.field.q**k
    step = max(1, _EVAL_BATCH // per)
    for s in range(0, bases.shape[0], step):
        pts = flat_points_batch(c.field, bases[s:s + step], dirs[s:s + step])
        counts = membership_mask(c, pts).sum(axis=1)
        tally.absorb(start + s, counts, np.full(counts.shape, per), per)
    return tally


def _flat_witness(c, k, mode, seed, index):
    chunk = index // CHUNK if mode == "sampled" else 0
    start = chunk * CHUNK if mode == "sampled" else index
    bases, dirs = _flat_batch(c, k, mode, seed, chunk, start, index + 1)
    return canonical_flat(c.field, bases[-1].tolist(), dirs[-1].tolist())


def sweep_flats(
    c: EvasiveConstruction,
    k: int | None = None,
    mode: str = "exhaustive",
    trials: int = 0,
    seed: int = 0,
    workers: int = 1,
    budget: int = DEFAULT_SWEEP_BUDGET,
    witness_cap: int = WITNESS_CAP,
    timing: bool = False,
) -> IntersectionReport:
    """Max |V cap U'| over all (or ``trials`` random) affine k-flats V."""
    k = c.k if k is None else k
    if not 0 <= k <= c.k:
        raise InvalidParameters(f"flat dimension must be in [0, {c.k}], got {k}")
    t0 = time.perf_counter()
    if mode == "exhaustive":
        total = flat_census(c.field.q, c.n, k)
        work = total * c.field.q**k
        if work > budget:
            raise WorkBudgetExceeded("exhaustive flat sweep", work, budget)
        step = max(CHUNK, total // 256)
        tasks = [(c, k, mode, seed, 0, s, min(total, s + step)) for s in range(0, total, step)]
    elif mode == "sampled":
        if trials < 1:
            raise InvalidParameters("sampled sweeps need trials >= 1")
        tasks = [(c, k, mode, seed, i, s, e) for i, s, e in _chunks(trials)]
    else:
        raise InvalidParameters(f"unknown flat sweep mode {mode!r}")
    tally = _run(_flats_task, tasks, workers)
    witness = _flat_witness(c, k, mode, seed, tally.argmax)
    return _report(
        c, f"{mode}-flats", tally, witness, c.field, theoretical_bound(c, 1),
        seed=seed if mode == "sampled" else None, dim=k, degree=1,
        witness_cap=witness_cap, elapsed=time.perf_counter() - t0 if timing else None,
    )


# -- curves -------------------------------------------------------------------


def evaluation_field(c: EvasiveConstruction, ext_degree: int) -> FieldSpec:
    if ext_degree < 1:
        raise InvalidParameters(f"extension degree must be >= 1, got {ext_degree}")
    if ext_degree == 1:
        return c.field
    return make_field(c.field.p, c.field.e * ext_degree)


def _curve_coefficients(c, d, seed, chunk, start, stop):
    rng = np.random.default_rng([seed, chunk])
    return sample_curves(c.field, c.n, d, CHUNK, rng)[: stop - start]


def _curves_task(c: EvasiveConstruction, d: int, over: FieldSpec, seed: int, chunk: int, start: int, stop: int) -> _Tally:
    coef = _curve_coefficients(c, d, seed, chunk, start, stop)
    emb = embedding(c.field, over)
    tally = _Tally()
    step = max(1, _EVAL_BATCH // over.q)
    limit = d * over.q
    for s in range(0, coef.shape[0], step):
        pts = curve_points_batch(over, emb[coef[s:s + step]])
        codes = encode_points(over, pts)
        order = np.argsort(codes, axis=1, kind="stable")
        codes = np.take_along_axis(codes, order, axis=1)
        distinct = np.ones(codes.shape, dtype=bool)
        distinct[:, 1:] = codes[:, 1:] != codes[:, :-1]
        member = np.take_along_axis(membership_mask(c, pts, over), order, axis=1)
        counts = (distinct & member).sum(axis=1)
        tally.absorb(start + s, counts, distinct.sum(axis=1), limit)
    return tally


def sweep_curves(
    c: EvasiveConstruction,
    d: int,
    trials: int,
    seed: int = 0,
    ext_degree: int = 1,
    workers: int = 1,
    budget: int = DEFAULT_SWEEP_BUDGET,
    witness_cap: int = WITNESS_CAP,
    timing: bool = False,
) -> IntersectionReport:
    """Random curves t -> (p_1(t), .., p_n(t)), deg p_j <= d, coefficients from the
    construction field, with t ranging over F_{q^ext_degree}."""
    if not 1 <= d <= c.d:
        raise InvalidParameters(f"curve degree must be in [1, {c.d}], got {d}")
    if trials < 1:
        raise InvalidParameters("curve sweeps need trials >= 1")
    over = evaluation_field(c, ext_degree)
    work = trials * over.q
    if work > budget:
        raise WorkBudgetExceeded("curve sweep", work, budget)
    t0 = time.perf_counter()
    tasks = [(c, d, over, seed, i, s, e) for i, s, e in _chunks(trials)]
    tally = _run(_curves_task, tasks, workers)
    i = tally.argmax
    coef = _curve_coefficients(c, d, seed, i // CHUNK, (i // CHUNK) * CHUNK, i + 1)[-1]
    witness = curve_from_coefficients(c.field, coef.tolist(), d)
    return _report(
        c, "sampled-curves", tally, witness, over, theoretical_bound(c, d),
        seed=seed, dim=1, degree=d, witness_cap=witness_cap,
        elapsed=time.perf_counter() - t0 if timing else None,
    )


# -- reports ------------------------------------------------------------------


@dataclass
class IntersectionReport:
    manifest: dict
    family: str
    trials: int
    max_intersection: int
    witness: dict
    bound: int
    extension_degree: int
    seed: int | None
    variety_dim: int
    variety_degree: int
    histogram: dict[int, int]
    point_count: dict
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return self.max_intersection <= self.bound

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "report": "intersection",
            "manifest": self.manifest,
            "family": self.family,
            "trials": self.trials,
            "seed": self.seed,
            "extension_degree": self.extension_degree,
            "variety_dim": self.variety_dim,
            "variety_degree": self.variety_degree,
            "max_intersection": self.max_intersection,
            "bound": self.bound,
            "pass": self.passed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "point_count": self.point_count,
            "witness": self.witness,
        }
        if self.elapsed is not None:
            out["timing_seconds"] = round(self.elapsed, 3)
        return out


def _report(c, family, tally, variety, over, bound, *, seed, dim, degree, witness_cap, elapsed):
    pts = variety_points(over, variety, base=c.field)
    count, hits = intersect_count(c, pts, over, witness_cap)
    assert count == tally.max_count, "witness recount disagrees with the sweep"
    return IntersectionReport(
        manifest=c.manifest(),
        family=family,
        trials=tally.trials,
        max_intersection=tally.max_count,
        witness={
            "index": tally.argmax,
            "variety": variety.to_json(),
            "num_points": int(pts.shape[0]),
            "points": [list(p) for p in hits],
        },
        bound=bound,
        extension_degree=over.e // c.field.e,
        seed=seed,
        variety_dim=dim,
        variety_degree=degree,
        histogram=dict(tally.histogram),
        point_count={
            "limit": degree * over.q**dim,
            "max_points": tally.max_points,
            "all_ok": tally.point_count_ok,
        },
        elapsed=elapsed,
    )


def recount_witness(c: EvasiveConstruction, report: dict) -> int:
    """Re-derive the witness intersection from its serialized variety alone."""
    over = evaluation_field(c, report["extension_degree"])
    v = variety_from_json(report["witness"]["variety"], c.field)
    return intersect_count(c, variety_points(over, v, base=c.field), over)[0]


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# -- random baseline -------------------------------------------------------------


def random_set_size(q: int, n: int, eps: Fraction) -> int:
    """q^((1-eps) n) rounded to the nearest integer, at least 1."""
    expo = (1 - Fraction(eps)) * n
    if expo.denominator == 1:
        return max(1, q ** int(expo))
    return max(1, round(q ** float(expo)))


def lemma_bound(k: int, d: int, eps: Fraction) -> Fraction | None:
    """(d / eps) * C(k + d + 2, k), the random-set bound with its constant set to 1."""
    eps = Fraction(eps)
    if eps == 0:
        return None
    return d / eps * math.comb(k + d + 2, k)


def _sample_subset(q: int, n: int, size: int, rng: np.random.Generator, budget: int) -> np.ndarray:
    total = q**n
    if size > total:
        raise InvalidParameters(f"cannot draw {size} distinct points from {total}")
    if total <= budget:
        return np.sort(rng.choice(total, size=size, replace=False))
    # rejection sampling for sets much smaller than F_q^n
    if size * 2 > total:
        raise WorkBudgetExceeded("random subset", total, budget)
    seen: set[int] = set()
    while len(seen) < size:
        for v in rng.integers(0, total, size=size - len(seen)).tolist():
            seen.add(v)
    return np.sort(np.fromiter(seen, dtype=np.int64))


def _baseline_seed(c, f, n, k, d, size, seed, trials, budget):
    rng = np.random.default_rng([seed, 0])
    S = _sample_subset(f.q, n, size, rng, budget)
    max_random = max_explicit = 0
    for chunk, start, stop in _chunks(trials):
        vrng = np.random.default_rng([seed, 1, chunk])
        if d == 1:
            bases, dirs = sample_flats(f, n, k, CHUNK, vrng)
            pts = flat_points_batch(f, bases[: stop - start], dirs[: stop - start])
        else:
            coef = sample_curves(f, n, d, CHUNK, vrng)[: stop - start]
            pts = curve_points_batch(f, coef)
        codes = encode_points(f, pts)
        # curves may repeat points; count each distinct point once
        order = np.argsort(codes, axis=1, kind="stable")
        codes = np.take_along_axis(codes, order, axis=1)
        distinct = np.ones(codes.shape, dtype=bool)
        distinct[:, 1:] = codes[:, 1:] != codes[:, :-1]
        pos = np.searchsorted(S, codes)
        in_s = (pos < S.size) & (S[np.minimum(pos, S.size - 1)] == codes)
        max_random = max(max_random, int((in_s & distinct).sum(axis=1).max()))
        member = np.take_along_axis(membership_mask(c, pts), order, axis=1)
        max_explicit = max(max_explicit, int((member & distinct).sum(axis=1).max()))
    return {"seed": seed, "max_random": max_random, "max_explicit": max_explicit}


@dataclass
class BaselineReport:
    field: str
    n: int
    k: int
    d: int
    epsilon: Fraction
    set_size: int
    trials: int
    rows: list[dict]
    lemma_bound: Fraction | None
    explicit_size: int
    explicit_bound: int
    manifest: dict

    @property
    def per_seed_max(self) -> list[int]:
        return [r["max_random"] for r in self.rows]

    def to_json(self) -> dict:
        lb = self.lemma_bound
        return {
            "schema_version": SCHEMA_VERSION,
            "report": "random-baseline",
            "field": self.field,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "epsilon": str(self.epsilon),
            "set_size": self.set_size,
            "trials_per_seed": self.trials,
            "variety_family": "sampled-flats" if self.d == 1 else "sampled-curves",
            "lemma_bound_constant_1": None if lb is None else str(lb),
            "per_seed": self.rows,
            "explicit": {
                "size": self.explicit_size,
                "bound": self.explicit_bound,
                "manifest": self.manifest,
            },
        }


def random_baseline(
    f: FieldSpec,
    n: int,
    k: int,
    d: int,
    eps: Fraction | str | float,
    seeds: Sequence[int],
    trials: int,
    construction: EvasiveConstruction | None = None,
    workers: int = 1,
    budget: int = DEFAULT_SWEEP_BUDGET,
) -> BaselineReport:
    """Max |S cap V| for random S of size q^((1-eps) n) against sampled varieties.

    Seed s draws S from ``default_rng([s, 0])`` and the varieties (flats of
    dimension k when d = 1, degree-d curves otherwise) from
    ``default_rng([s, 1, chunk])``. The explicit construction is evaluated on
    the identical varieties.
    """
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise InvalidParameters(f"epsilon must lie in [0, 1], got {eps}")
    if d >= 2 and k != 1:
        raise InvalidParameters("degree >= 2 baselines sample curves, which need k = 1")
    c = construction or build_construction(f, n, k, d)
    size = random_set_size(f.q, n, eps)
    tasks = [(c, f, n, k, d, size, s, trials, budget) for s in seeds]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_baseline_seed, *zip(*tasks)))
    else:
        rows = [_baseline_seed(*t) for t in tasks]
    return BaselineReport(
        field=f.label, n=n, k=k, d=d, epsilon=eps, set_size=size, trials=trials, rows=rows,
        lemma_bound=lemma_bound(k, d, eps), explicit_size=c.size,
        explicit_bound=theoretical_bound(c, d), manifest=c.manifest(),
    )
