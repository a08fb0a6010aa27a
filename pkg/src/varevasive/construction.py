"""The evasive set U' = {x : f_i(x) = 0 blockwise} and its indexing bijection.

Each block of ``m_block`` coordinates carries the k equations
``sum_j A[i][j] * x_j ** d_j = 0``. The bijection fixes the non-solved
coordinates of a block to the index digits, solves the k x k system on the
solved columns for the values ``y_j = x_j ** d_j``, and recovers ``x_j`` by the
inverse power map (gcd(d_j, q - 1) = 1 on solved columns).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameters, NotAMember, WorkBudgetExceeded
from .field import VECTOR_TABLE_CAP, FieldSpec, embedding
from .linalg import inverse, matvec
from .parameters import (
    DEFAULT_MINOR_BUDGET,
    ExponentPlan,
    RegularMatrix,
    check_k_regular,
    plan_from_exponents,
    select_exponents,
    vandermonde_matrix,
)
from .poly import Polynomial

MANIFEST_VERSION = 1
DEFAULT_ENUMERATION_BUDGET = 10**7
_BATCH = 1 << 14


@dataclass(frozen=True)
class EvasiveConstruction:
    field: FieldSpec
    n: int
    k: int
    d: int
    plan: ExponentPlan
    matrix: RegularMatrix
    m_block: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def num_blocks(self) -> int:
        return self.n // self.m_block

    @property
    def is_bucketed(self) -> bool:
        return self.num_blocks > 1

    @property
    def index_length(self) -> int:
        return (self.m_block - self.k) * self.num_blocks

    @property
    def size(self) -> int:
        """|U'| = q ** (n - k * num_blocks)."""
        return self.field.q**self.index_length

    @cached_property
    def free_positions(self) -> tuple[int, ...]:
        solved = set(self.plan.solved_positions)
        return tuple(j for j in range(self.m_block) if j not in solved)

    @cached_property
    def _solved_inverse(self) -> list[list[int]]:
        # factorized once; every call of the bijection reuses it
        cols = self.plan.solved_positions
        sub = [[row[c] for c in cols] for row in self.matrix.entries]
        return inverse(self.field, sub)

    @cached_property
    def _inverse_exponents(self) -> tuple[int, ...]:
        return tuple(self.plan.inverse_exponent(j) for j in self.plan.solved_positions)

    def polynomials(self) -> list[Polynomial]:
        """The k * num_blocks defining polynomials in n variables."""
        out = []
        A, ex = self.matrix.entries, self.plan.exponents
        for b in range(self.num_blocks):
            off = b * self.m_block
            for row in A:
                terms = []
                for j, a in enumerate(row):
                    exps = [0] * self.n
                    exps[off + j] = ex[j]
                    terms.append((exps, a))
                out.append(Polynomial.from_terms(self.n, terms, self.field))
        return out

    def manifest(self) -> dict:
        f = self.field
        return {
            "format": "varevasive-construction",
            "version": MANIFEST_VERSION,
            "field": {"p": f.p, "e": f.e, "modulus_poly": None if f.modulus is None else list(f.modulus)},
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "m_block": self.m_block,
            "num_blocks": self.num_blocks,
            "exponents": list(self.plan.exponents),
            "invertible_mask": list(self.plan.invertible_mask),
            "solved_positions": list(self.plan.solved_positions),
            "gammas": None if self.matrix.gammas is None else list(self.matrix.gammas),
            "matrix": [list(r) for r in self.matrix.entries],
            "certificate": None
            if self.matrix.certificate is None
            else [[list(c), v] for c, v in self.matrix.certificate],
        }


def build_construction(
    f: FieldSpec,
    n: int,
    k: int,
    d: int,
    m_block: int | None = None,
    *,
    exponents: Sequence[int] | None = None,
    matrix: Sequence[Sequence[int]] | RegularMatrix | None = None,
    allow_noninvertible: bool = False,
    verify_matrix: bool = True,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> EvasiveConstruction:
    """Compose exponent selection and a k-regular matrix into a construction.

    ``exponents`` / ``matrix`` override the defaults (greedy prime plan and
    Vandermonde matrix). A supplied matrix is checked for k-regularity unless
    ``verify_matrix`` is false; the Vandermonde one is regular by construction.
    """
    m = n if m_block is None else m_block
    if not (1 <= k < m <= n):
        raise InvalidParameters(f"need 1 <= k < m_block <= n, got k={k}, m_block={m}, n={n}")
    if n % m:
        raise InvalidParameters(f"m_block = {m} does not divide n = {n}")
    if d < 1:
        raise InvalidParameters(f"need d >= 1, got {d}")
    if exponents is None:
        plan = select_exponents(m, d, f.q, k, allow_noninvertible)
    else:
        if len(exponents) != m:
            raise InvalidParameters(f"need {m} exponents, got {len(exponents)}")
        plan = plan_from_exponents(exponents, d, f.q, k)
    if matrix is None:
        A = vandermonde_matrix(f, k, m)
    else:
        A = matrix if isinstance(matrix, RegularMatrix) else RegularMatrix(
            tuple(tuple(int(x) for x in row) for row in matrix)
        )
        if A.k != k or A.n != m:
            raise InvalidParameters(f"matrix must be {k} x {m}, got {A.k} x {A.n}")
        for row in A.entries:
            for x in row:
                f.check(x)
        if verify_matrix:
            res = check_k_regular(f, A.entries, minor_budget)
            if not res.regular:
                raise InvalidParameters(f"matrix is not {k}-regular: zero minor on columns {res.witness}")
    return EvasiveConstruction(f, n, k, d, plan, A, m)


def from_manifest(data: dict, verify_matrix: bool = True) -> EvasiveConstruction:
    """Rebuild a construction from its manifest dict."""
    if data.get("format") != "varevasive-construction":
        raise InvalidParameters("not a construction manifest")
    if data.get("version") != MANIFEST_VERSION:
        raise InvalidParameters(f"unsupported manifest version {data.get('version')}")
    fd = data["field"]
    mod = fd.get("modulus_poly")
    f = FieldSpec(fd["p"], fd.get("e", 1), None if mod is None else tuple(mod))
    gammas = data.get("gammas")
    entries = tuple(tuple(r) for r in data["matrix"])
    cert = data.get("certificate")
    A = RegularMatrix(
        entries,
        None if gammas is None else tuple(gammas),
        None if cert is None else tuple((tuple(cols), v) for cols, v in cert),
    )
    c = build_construction(
        f,
        data["n"],
        data["k"],
        data["d"],
        data["m_block"],
        exponents=data["exponents"],
        matrix=A,
        verify_matrix=verify_matrix,
    )
    if list(c.plan.solved_positions) != list(data["solved_positions"]):
        plan = c.plan
        solved = tuple(data["solved_positions"])
        if len(solved) != c.k or not all(plan.invertible_mask[j] for j in solved):
            raise InvalidParameters(f"solved positions {solved} are not {c.k} invertible columns")
        c = EvasiveConstruction(
            f, c.n, c.k, c.d,
            ExponentPlan(plan.d, plan.q, plan.exponents, plan.invertible_mask, tuple(sorted(solved))),
            A, c.m_block,
        )
    return c


# -- membership ---------------------------------------------------------------


def evaluate_membership(c: EvasiveConstruction, x: Sequence[int]) -> bool:
    if len(x) != c.n:
        raise InvalidParameters(f"point has {len(x)} coordinates, expected {c.n}")
    f = c.field
    for b in range(c.num_blocks):
        block = x[b * c.m_block:(b + 1) * c.m_block]
        ys = [f.pow(xj, dj) for xj, dj in zip(block, c.plan.exponents)]
        if any(f.dot(row, ys) for row in c.matrix.entries):
            return False
    return True


def _eval_tables(c: EvasiveConstruction, over: FieldSpec) -> tuple[list[np.ndarray], np.ndarray]:
    key = ("eval", over)
    if key not in c._cache:
        if over.q > VECTOR_TABLE_CAP:
            raise WorkBudgetExceeded("power tables", over.q, VECTOR_TABLE_CAP)
        emb = embedding(c.field, over)
        powers = [over.power_table(dj) for dj in c.plan.exponents]
        A = emb[np.asarray(c.matrix.entries, dtype=np.int64)]
        c._cache[key] = (powers, A)
    return c._cache[key]


def block_values(c: EvasiveConstruction, points: np.ndarray, over: FieldSpec | None = None) -> np.ndarray:
    """f_i of every block at every point: shape (..., num_blocks, k)."""
    over = over or c.field
    powers, A = _eval_tables(c, over)
    points = np.asarray(points, dtype=np.int64)
    lead = points.shape[:-1]
    out = np.zeros(lead + (c.num_blocks, c.k), dtype=np.int64)
    for b in range(c.num_blocks):
        ys = [powers[j][points[..., b * c.m_block + j]] for j in range(c.m_block)]
        for i in range(c.k):
            acc = np.zeros(lead, dtype=np.int64)
            for j in range(c.m_block):
                acc = over.vadd(acc, over.vmul(A[i, j], ys[j]))
            out[..., b, i] = acc
    return out


def membership_mask(c: EvasiveConstruction, points: np.ndarray, over: FieldSpec | None = None) -> np.ndarray:
    """Vectorized evaluate_membership over the rows of ``points``.

    ``over`` is the field the coordinates live in (an extension of the
    construction field); the matrix entries are embedded into it.
    """
    vals = block_values(c, points, over)
    return np.all(vals == 0, axis=(-1, -2))


# -- the bijection ------------------------------------------------------------


def index_to_point(c: EvasiveConstruction, idx: Sequence[int]) -> tuple[int, ...]:
    """phi: F_q^(n - k * num_blocks) -> U'."""
    f = c.field
    if len(idx) != c.index_length:
        raise InvalidParameters(f"index has {len(idx)} digits, expected {c.index_length}")
    ex = c.plan.exponents
    solved = c.plan.solved_positions
    free = c.free_positions
    width = c.m_block - c.k
    out: list[int] = []
    for b in range(c.num_blocks):
        digits = [f.check(v) for v in idx[b * width:(b + 1) * width]]
        x = [0] * c.m_block
        rhs = [0] * c.k
        for j, v in zip(free, digits):
            x[j] = v
            y = f.pow(v, ex[j])
            for i, row in enumerate(c.matrix.entries):
                rhs[i] = f.sub(rhs[i], f.mul(row[j], y))
        ys = matvec(f, c._solved_inverse, rhs)
        for j, y, e in zip(solved, ys, c._inverse_exponents):
            x[j] = 0 if y == 0 else f.pow(y, e)
        out.extend(x)
    return tuple(out)


def point_to_index(c: EvasiveConstruction, x: Sequence[int]) -> tuple[int, ...]:
    if not evaluate_membership(c, x):
        raise NotAMember(f"{tuple(x)} is not in the evasive set")
    out = []
    for b in range(c.num_blocks):
        out.extend(x[b * c.m_block + j] for j in c.free_positions)
    return tuple(out)


def index_digits(c: EvasiveConstruction, indices: np.ndarray) -> np.ndarray:
    """Little-endian base-q digits of integer indices, shape (len, index_length)."""
    indices = np.asarray(indices, dtype=np.int64)
    out = np.empty(indices.shape + (c.index_length,), dtype=np.int64)
    rest = indices.copy()
    for t in range(c.index_length):
        out[..., t] = rest % c.field.q
        rest //= c.field.q
    return out


def _solve_tables(c: EvasiveConstruction):
    if "solve" not in c._cache:
        f = c.field
        inv_pow = [f.power_table(e) for e in c._inverse_exponents]
        c._cache["solve"] = (np.asarray(c._solved_inverse, dtype=np.int64), inv_pow)
    return c._cache["solve"]


def index_block_to_points(c: EvasiveConstruction, digits: np.ndarray) -> np.ndarray:
    """Vectorized phi over rows of index digits."""
    f = c.field
    digits = np.asarray(digits, dtype=np.int64)
    powers, A = _eval_tables(c, f)
    Sinv, inv_pow = _solve_tables(c)
    lead = digits.shape[:-1]
    width = c.m_block - c.k
    out = np.zeros(lead + (c.n,), dtype=np.int64)
    for b in range(c.num_blocks):
        off = b * c.m_block
        rhs = [np.zeros(lead, dtype=np.int64) for _ in range(c.k)]
        for t, j in enumerate(c.free_positions):
            v = digits[..., b * width + t]
            out[..., off + j] = v
            y = powers[j][v]
            for i in range(c.k):
                rhs[i] = f.vsub(rhs[i], f.vmul(A[i, j], y))
        for s, j in enumerate(c.plan.solved_positions):
            y = np.zeros(lead, dtype=np.int64)
            for i in range(c.k):
                y = f.vadd(y, f.vmul(Sinv[s, i], rhs[i]))
            out[..., off + j] = inv_pow[s][y]
    return out


def enumeration_size(c: EvasiveConstruction, budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    total = c.size
    if total > budget:
        raise WorkBudgetExceeded("point enumeration", total, budget)
    return total


def points_in_range(c: EvasiveConstruction, start: int, stop: int) -> np.ndarray:
    """phi of every index in [start, stop), in index order."""
    return index_block_to_points(c, index_digits(c, np.arange(start, stop, dtype=np.int64)))


def enumerate_points(
    c: EvasiveConstruction, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Stream U' in little-endian mixed-radix index order."""
    total = enumeration_size(c, budget)
    if c.field.q > VECTOR_TABLE_CAP:
        digits = [0] * c.index_length
        for _ in range(total):
            yield index_to_point(c, digits)
            for t in range(len(digits)):
                digits[t] += 1
                if digits[t] < c.field.q:
                    break
                digits[t] = 0
        return
    for start in range(0, total, _BATCH):
        for row in points_in_range(c, start, min(total, start + _BATCH)).tolist():
            yield tuple(row)


def theoretical_bound(c: EvasiveConstruction, d: int | None = None) -> int:
    """Intersection bound for varieties of dimension k and degree <= d.

    d * prod(d_1..d_k) for one block, d^(k+1) * prod(d_1..d_k)^k when bucketed,
    with d_1 > ... > d_k the k largest exponents. ``d`` defaults to c.d; any
    smaller degree is also covered since every exponent exceeds it.
    """
    d = c.d if d is None else d
    if d > c.d:
        raise InvalidParameters(f"construction only covers degree <= {c.d}")
    prod = math.prod(c.plan.exponents[: c.k])
    if c.num_blocks == 1:
        return d * prod
    return d ** (c.k + 1) * prod**c.k
