"""Desk-scale adversary varieties and their F_q-points.

Three kinds: affine flats (exhaustively enumerable via reduced-echelon
bases), parametric images of polynomial maps (random curves), and explicit
zero sets (brute force over F_q^n). Point sets are numpy arrays of shape
(N, n) holding encoded field elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameters, WorkBudgetExceeded
from .field import FieldSpec, embedding, encode_points
from .linalg import nullspace_vector, rref
from .poly import Polynomial, grlex_monomials

DEFAULT_BUDGET = 10**7


def _check_budget(what: str, needed: int, budget: int) -> None:
    if needed > budget:
        raise WorkBudgetExceeded(what, needed, budget)


def grid(f: FieldSpec, k: int) -> np.ndarray:
    """All of F^k as rows, little-endian (first coordinate varies fastest)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(f.q**k, dtype=np.int64)
    out = np.empty((idx.size, k), dtype=np.int64)
    for i in range(k):
        out[:, i] = idx % f.q
        idx //= f.q
    return out


def unique_points(f: FieldSpec, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    if points.size == 0:
        return points.reshape(0, points.shape[-1] if points.ndim > 1 else 0)
    codes = encode_points(f, points)
    _, first = np.unique(codes, return_index=True)
    return points[first]


# -- affine flats ---------------------------------------------------------------


@dataclass(frozen=True)
class AffineFlat:
    """basepoint + span(basis), basis in reduced echelon form, basepoint zero on pivots."""

    basepoint: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    kind = "affine_flat"

    @property
    def n(self) -> int:
        return len(self.basepoint)

    @property
    def dim_claim(self) -> int:
        return len(self.basis)

    @property
    def deg_claim(self) -> int:
        return 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "basepoint": list(self.basepoint),
            "basis": [list(v) for v in self.basis],
            "dim_claim": self.dim_claim,
            "deg_claim": 1,
        }


def canonical_flat(f: FieldSpec, basepoint: Sequence[int], directions: Sequence[Sequence[int]]) -> AffineFlat:
    """Unique representative of basepoint + span(directions)."""
    base = [f.check(int(x)) for x in basepoint]
    dirs = [[int(x) for x in v] for v in directions]
    if not dirs:
        return AffineFlat(tuple(base), ())
    R, pivots = rref(f, dirs)
    if len(pivots) != len(dirs):
        raise InvalidParameters("flat directions are linearly dependent")
    for row, pc in zip(R, pivots):
        coef = base[pc]
        if coef:
            base = [f.sub(b, f.mul(coef, r)) for b, r in zip(base, row)]
    return AffineFlat(tuple(base), tuple(tuple(r) for r in R[: len(pivots)]))


def flat_points_batch(f: FieldSpec, bases: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Points of a batch of flats: bases (B, n), dirs (B, k, n) -> (B, q^k, n)."""
    bases = np.asarray(bases, dtype=np.int64)
    dirs = np.asarray(dirs, dtype=np.int64)
    k = dirs.shape[1]
    t = grid(f, k)
    pts = np.broadcast_to(bases[:, None, :], (bases.shape[0], t.shape[0], bases.shape[1])).copy()
    for i in range(k):
        pts = f.vadd(pts, f.vmul(t[None, :, i, None], dirs[:, None, i, :]))
    return pts


def enumerate_flat_points(f: FieldSpec, flat: AffineFlat, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    _check_budget("flat points", f.q**flat.dim_claim, budget)
    bases = np.asarray([flat.basepoint], dtype=np.int64)
    dirs = np.asarray([flat.basis], dtype=np.int64).reshape(1, flat.dim_claim, flat.n)
    return flat_points_batch(f, bases, dirs)[0]


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional linear subspaces of F_q^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def flat_census(q: int, n: int, k: int) -> int:
    """Number of affine k-flats in F_q^n."""
    return gaussian_binomial(n, k, q) * q ** (n - k)


@dataclass(frozen=True)
class _Pattern:
    pivots: tuple[int, ...]
    free_slots: tuple[tuple[int, int], ...]  # (row, column) entries left free in the echelon basis
    nonpivots: tuple[int, ...]
    count: int


def _patterns(q: int, n: int, k: int) -> list[_Pattern]:
    out = []
    for piv in itertools.combinations(range(n), k):
        pset = set(piv)
        slots = tuple(
            (i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pset
        )
        nonpiv = tuple(c for c in range(n) if c not in pset)
        out.append(_Pattern(piv, slots, nonpiv, q ** (len(slots) + len(nonpiv))))
    return out


def flats_by_index(f: FieldSpec, n: int, k: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical flats number start..stop-1 of the census: (bases (B, n), dirs (B, k, n)).

    Flats are ordered by pivot pattern (lexicographic), then echelon free
    entries, then coset representative; the last varies fastest.
    """
    q = f.q
    total = flat_census(q, n, k)
    if not 0 <= start <= stop <= total:
        raise InvalidParameters(f"flat range [{start}, {stop}) outside census of {total}")
    bases = np.zeros((stop - start, n), dtype=np.int64)
    dirs = np.zeros((stop - start, k, n), dtype=np.int64)
    offset = 0
    for pat in _patterns(q, n, k):
        lo, hi = max(start, offset), min(stop, offset + pat.count)
        if lo < hi:
            local = np.arange(lo - offset, hi - offset, dtype=np.int64)
            rows = slice(lo - start, hi - start)
            for c in pat.nonpivots:
                bases[rows, c] = local % q
                local = local // q
            for i, pc in enumerate(pat.pivots):
                dirs[rows, i, pc] = 1
            for i, c in pat.free_slots:
                dirs[rows, i, c] = local % q
                local = local // q
        offset += pat.count
        if offset >= stop:
            break
    return bases, dirs


def enumerate_all_flats(
    f: FieldSpec, n: int, k: int, budget: int = DEFAULT_BUDGET
) -> Iterator[AffineFlat]:
    """Every affine k-flat of F_q^n exactly once, in canonical form."""
    total = flat_census(f.q, n, k)
    _check_budget("flat census", total * f.q**k, budget)
    step = 4096
    for start in range(0, total, step):
        bases, dirs = flats_by_index(f, n, k, start, min(total, start + step))
        for b, D in zip(bases.tolist(), dirs.tolist()):
            yield AffineFlat(tuple(b), tuple(tuple(v) for v in D))


def batch_full_rank(f: FieldSpec, mats: np.ndarray) -> np.ndarray:
    """For a batch (B, k, n), whether each k x n matrix has rank k."""
    M = np.array(mats, dtype=np.int64, copy=True)
    B, k, _ = M.shape
    ok = np.ones(B, dtype=bool)
    rows = np.arange(B)
    for i in range(k):
        row = M[:, i, :]
        nz = row != 0
        has = nz.any(axis=1)
        ok &= has
        col = nz.argmax(axis=1)
        piv = np.where(has, row[rows, col], 1)
        row = f.vmul(row, f.vinv(piv)[:, None])
        M[:, i, :] = row
        for j in range(i + 1, k):
            factor = M[rows, j, col]
            M[:, j, :] = f.vsub(M[:, j, :], f.vmul(factor[:, None], row))
    return ok


def sample_flats(f: FieldSpec, n: int, k: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniformly random affine k-flats as (bases (B, n), dirs (B, k, n)).

    Draws a coefficient array (B, n, k + 1): column 0 is the basepoint, the
    rest are directions. Rank-deficient draws are redrawn afterwards from the
    same generator, so full-rank draws coincide with ``sample_curves(d=1)``.
    """
    coef = rng.integers(0, f.q, size=(size, n, k + 1), dtype=np.int64)
    bases = coef[:, :, 0]
    dirs = np.ascontiguousarray(np.transpose(coef[:, :, 1:], (0, 2, 1)))
    if k:
        bad = ~batch_full_rank(f, dirs)
        while bad.any():
            idx = np.flatnonzero(bad)
            dirs[idx] = rng.integers(0, f.q, size=(idx.size, k, n), dtype=np.int64)
            bad[idx] = ~batch_full_rank(f, dirs[idx])
    return bases, dirs


# -- parametric images --------------------------------------------------------


@dataclass(frozen=True)
class ParametricImage:
    """t in F^k -> (p_1(t), ..., p_n(t)); coefficients live in the construction field."""

    coords: tuple[Polynomial, ...]
    nparams: int
    deg_claim: int

    kind = "parametric_image"

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def dim_claim(self) -> int:
        return self.nparams

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "nparams": self.nparams,
            "coords": [p.to_json() for p in self.coords],
            "dim_claim": self.dim_claim,
            "deg_claim": self.deg_claim,
        }


def make_parametric(f: FieldSpec, coords: Sequence[Polynomial], deg_claim: int | None = None) -> ParametricImage:
    if not coords:
        raise InvalidParameters("need at least one coordinate polynomial")
    k = coords[0].nvars
    if any(p.nvars != k for p in coords):
        raise InvalidParameters("coordinate polynomials disagree on the parameter count")
    deg = max(p.degree for p in coords)
    claim = max(deg, 1) if deg_claim is None else deg_claim
    if deg > claim:
        raise InvalidParameters(f"coordinate degree {deg} exceeds claimed degree {claim}")
    return ParametricImage(tuple(coords), k, claim)


def curve_from_coefficients(f: FieldSpec, coef: Sequence[Sequence[int]], deg_claim: int | None = None) -> ParametricImage:
    """coef[j][a] is the coefficient of t^a in coordinate j."""
    polys = [Polynomial.from_terms(1, [((a,), c) for a, c in enumerate(row)], f) for row in coef]
    return make_parametric(f, polys, deg_claim)


def parametric_image_points(
    over: FieldSpec,
    image: ParametricImage,
    base: FieldSpec | None = None,
    budget: int = DEFAULT_BUDGET,
) -> np.ndarray:
    """Distinct points of the image with parameters ranging over ``over``.

    ``base`` is the field the coefficients were written in (defaults to
    ``over``); coefficients are embedded when ``over`` is an extension.
    """
    _check_budget("parametric image", over.q**image.nparams, budget)
    emb = None if base is None or base == over else embedding(base, over)
    t = grid(over, image.nparams)
    pts = np.stack([p.vevaluate(over, t, emb) for p in image.coords], axis=-1)
    return unique_points(over, pts)


def sample_curves(f: FieldSpec, n: int, d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Coefficients (B, n, d + 1) of random degree-<=d curves, uniform over f."""
    return rng.integers(0, f.q, size=(size, n, d + 1), dtype=np.int64)


def curve_points_batch(over: FieldSpec, coef: np.ndarray) -> np.ndarray:
    """Evaluate curves (B, n, d + 1), already embedded in ``over``, at every t: (B, Q, n)."""
    coef = np.asarray(coef, dtype=np.int64)
    t = np.arange(over.q, dtype=np.int64)[None, :, None]
    acc = np.broadcast_to(coef[:, None, :, -1], (coef.shape[0], over.q, coef.shape[1])).copy()
    for a in range(coef.shape[2] - 2, -1, -1):
        acc = over.vadd(over.vmul(acc, t), coef[:, None, :, a])
    return acc


# -- zero sets ------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroSet:
    polys: tuple[Polynomial, ...]
    n: int
    dim_claim: int
    deg_claim: int

    kind = "zero_set"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "polys": [p.to_json() for p in self.polys],
            "dim_claim": self.dim_claim,
            "deg_claim": self.deg_claim,
        }


def zero_set_points(
    f: FieldSpec, polys: Sequence[Polynomial], n: int | None = None, budget: int = DEFAULT_BUDGET
) -> np.ndarray:
    """Every x in F_q^n on which all polynomials vanish, in little-endian code order."""
    if n is None:
        if not polys:
            raise InvalidParameters("need n when the polynomial list is empty")
        n = polys[0].nvars
    if any(p.nvars != n for p in polys):
        raise InvalidParameters("polynomials disagree on the variable count")
    total = f.q**n
    _check_budget("zero set brute force", total * max(len(polys), 1), budget)
    chunks = []
    step = 1 << 16
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)
        pts = np.empty((idx.size, n), dtype=np.int64)
        for j in range(n):
            pts[:, j] = idx % f.q
            idx //= f.q
        keep = np.ones(pts.shape[0], dtype=bool)
        for p in polys:
            keep &= p.vevaluate(f, pts) == 0
        chunks.append(pts[keep])
    return np.concatenate(chunks) if chunks else np.zeros((0, n), dtype=np.int64)


def variety_from_json(data: dict, f: FieldSpec):
    kind = data["kind"]
    if kind == AffineFlat.kind:
        return canonical_flat(f, data["basepoint"], data["basis"])
    if kind == ParametricImage.kind:
        coords = [Polynomial.from_json(p, f) for p in data["coords"]]
        return make_parametric(f, coords, data["deg_claim"])
    if kind == ZeroSet.kind:
        polys = tuple(Polynomial.from_json(p, f) for p in data["polys"])
        return ZeroSet(polys, data["n"], data["dim_claim"], data["deg_claim"])
    raise InvalidParameters(f"unknown variety kind {kind!r}")


def variety_points(f: FieldSpec, variety, base: FieldSpec | None = None, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """F-points of any variety description; ``f`` may extend the field its coefficients live in."""
    if isinstance(variety, AffineFlat):
        return enumerate_flat_points(f, variety, budget)
    if isinstance(variety, ParametricImage):
        return parametric_image_points(f, variety, base, budget)
    if isinstance(variety, ZeroSet):
        return zero_set_points(f, variety.polys, variety.n, budget)
    raise InvalidParameters(f"not a variety: {variety!r}")


# -- annihilators and point counts ----------------------------------------------


def find_annihilator(
    f: FieldSpec,
    points: np.ndarray,
    J: Sequence[int],
    d: int,
    budget: int = DEFAULT_BUDGET,
) -> Polynomial | None:
    """Nonzero polynomial of degree <= d in the variables J vanishing on ``points``.

    Kernel of the evaluation matrix (projected points x grlex monomials); the
    vector attached to the first free column is returned, made monic in its
    grlex-leading term. None when the kernel is trivial.
    """
    J = sorted(set(int(j) for j in J))
    points = np.asarray(points, dtype=np.int64)
    if not J:
        raise InvalidParameters("J must be nonempty")
    n = points.shape[1]
    if J[-1] >= n:
        raise InvalidParameters(f"coordinate {J[-1]} out of range for {n} variables")
    monos = grlex_monomials(len(J), d)
    proj = unique_points(f, points[:, J]) if points.shape[0] else points[:, J]
    _check_budget("annihilator system", proj.shape[0] * len(monos) ** 2, budget)
    cols = []
    for exps in monos:
        col = np.ones(proj.shape[0], dtype=np.int64)
        for i, a in enumerate(exps):
            if a:
                col = f.vmul(col, f.vpow(proj[:, i], a))
        cols.append(col)
    M = np.stack(cols, axis=1).tolist() if proj.shape[0] else []
    v = nullspace_vector(f, M, len(monos))
    if v is None:
        return None
    terms = []
    for exps, c in zip(monos, v):
        if c:
            full = [0] * n
            for j, a in zip(J, exps):
                full[j] = a
            terms.append((full, c))
    g = Polynomial.from_terms(n, terms, f).monic(f)
    assert not g.is_zero
    assert np.all(g.vevaluate(f, points) == 0), "annihilator does not vanish on the points"
    return g


def point_count_bound_check(points, k: int, d: int, q: int) -> bool:
    """|V(F_q)| <= d * q^k. ``points`` may be a point array or a count."""
    count = points if isinstance(points, (int, np.integer)) else len(points)
    return int(count) <= d * q**k
