"""Exponent selection and k-regular (Vandermonde) matrices."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    FieldTooSmall,
    InsufficientInvertibleExponents,
    InvalidParameters,
    WorkBudgetExceeded,
)
from .field import FieldSpec, is_prime
from .linalg import det

PRIME_SEARCH_CAP = 10**6
DEFAULT_MINOR_BUDGET = 10**7


@dataclass(frozen=True)
class ExponentPlan:
    """Exponents d_1 > ... > d_n > d, with the positions the bijection solves for.

    ``invertible_mask[j]`` says whether gcd(d_j, q - 1) = 1. ``solved_positions``
    are 0-based indices into ``exponents``.
    """

    d: int
    q: int
    exponents: tuple[int, ...]
    invertible_mask: tuple[bool, ...]
    solved_positions: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def k(self) -> int:
        return len(self.solved_positions)

    def inverse_exponent(self, position: int) -> int:
        """e with (y^e)^d_j = y on F_q, for an invertible position j."""
        if not self.invertible_mask[position]:
            raise InvalidParameters(f"exponent {self.exponents[position]} is not invertible mod q-1")
        return pow(self.exponents[position], -1, self.q - 1) if self.q > 2 else 1

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "exponents": list(self.exponents),
            "invertible_mask": list(self.invertible_mask),
            "solved_positions": list(self.solved_positions),
        }


def _primes_above(d: int):
    p = d + 1
    while p < d + PRIME_SEARCH_CAP:
        if is_prime(p):
            yield p
        p += 1
    raise InsufficientInvertibleExponents(f"no suitable primes below {d + PRIME_SEARCH_CAP}")


def check_plan(exponents: Sequence[int], d: int, q: int, k: int) -> None:
    """Raise InvalidParameters unless the exponents are usable for a k-row construction."""
    ex = list(exponents)
    if not ex:
        raise InvalidParameters("need at least one exponent")
    if any(a <= b for a, b in zip(ex, ex[1:])):
        raise InvalidParameters(f"exponents {ex} are not strictly decreasing")
    if ex[-1] <= d:
        raise InvalidParameters(f"every exponent must exceed d = {d}")
    for a, b in itertools.combinations(ex, 2):
        if math.gcd(a, b) != 1:
            raise InvalidParameters(f"exponents {a} and {b} are not coprime")
    ninv = sum(math.gcd(x, q - 1) == 1 for x in ex)
    if ninv < k:
        raise InsufficientInvertibleExponents(
            f"only {ninv} of {ex} are coprime to q-1 = {q - 1}, need {k}"
        )


def plan_from_exponents(exponents: Sequence[int], d: int, q: int, k: int) -> ExponentPlan:
    ex = tuple(int(x) for x in exponents)
    check_plan(ex, d, q, k)
    mask = tuple(math.gcd(x, q - 1) == 1 for x in ex)
    solved = tuple(j for j, ok in enumerate(mask) if ok)[:k]
    return ExponentPlan(d, q, ex, mask, solved)


def select_exponents(
    n: int, d: int, q: int, k: int, allow_noninvertible: bool = False
) -> ExponentPlan:
    """Smallest primes above d, with primes dividing q - 1 handled as follows.

    Default: a prime dividing q - 1 is skipped until k primes coprime to q - 1
    have been taken; after that primes are taken in order.
    ``allow_noninvertible``: a prime dividing q - 1 is kept whenever the n - k
    non-solved slots still have room, which minimizes d_1.
    """
    if not 1 <= k <= n:
        raise InvalidParameters(f"need 1 <= k <= n, got k={k}, n={n}")
    if d < 1:
        raise InvalidParameters(f"need d >= 1, got {d}")
    if q < 2:
        raise InvalidParameters(f"need q >= 2, got {q}")
    chosen: list[int] = []
    n_inv = n_noninv = 0
    for p in _primes_above(d):
        if len(chosen) == n:
            break
        invertible = math.gcd(p, q - 1) == 1
        if invertible:
            n_inv += 1
        elif allow_noninvertible:
            if n_noninv >= n - k:
                continue
            n_noninv += 1
        elif n_inv < k:
            continue
        chosen.append(p)
    return plan_from_exponents(sorted(chosen, reverse=True), d, q, k)


@dataclass(frozen=True)
class RegularMatrix:
    """k x n matrix over a field; ``gammas`` is set when Vandermonde-built."""

    entries: tuple[tuple[int, ...], ...]
    gammas: tuple[int, ...] | None = None
    certificate: tuple[tuple[tuple[int, ...], int], ...] | None = None

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.entries]

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "n": self.n,
            "entries": [list(r) for r in self.entries],
            "gammas": None if self.gammas is None else list(self.gammas),
        }
        if self.certificate is not None:
            out["certificate"] = [[list(cols), dv] for cols, dv in self.certificate]
        return out


def vandermonde_matrix(f: FieldSpec, k: int, n: int) -> RegularMatrix:
    """A[i][j] = gamma_j^(i+1), gamma_j the j-th nonzero element in encoding order."""
    if not 1 <= k <= n:
        raise InvalidParameters(f"need 1 <= k <= n, got k={k}, n={n}")
    if f.q <= n:
        raise FieldTooSmall(f"F_{f.label} has only {f.q - 1} nonzero elements, need {n}")
    gammas = tuple(range(1, n + 1))
    entries = tuple(tuple(f.pow(g, i) for g in gammas) for i in range(1, k + 1))
    return RegularMatrix(entries, gammas)


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    minors: tuple[tuple[tuple[int, ...], int], ...]
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "regular": self.regular,
            "minors": [[list(c), v] for c, v in self.minors],
            "witness": None if self.witness is None else list(self.witness),
        }


def minor_work(k: int, n: int) -> int:
    return math.comb(n, k) * k**3


def check_k_regular(
    f: FieldSpec, A: Sequence[Sequence[int]], budget: int = DEFAULT_MINOR_BUDGET
) -> RegularityResult:
    """Compute every k x k minor in lexicographic column order.

    Stops at the first zero minor and returns it as the witness.
    """
    rows = [list(r) for r in A]
    k, n = len(rows), len(rows[0])
    if k > n:
        raise InvalidParameters(f"a {k} x {n} matrix cannot be {k}-regular")
    work = minor_work(k, n)
    if work > budget:
        raise WorkBudgetExceeded("k-regularity certificate", work, budget)
    minors = []
    for cols in itertools.combinations(range(n), k):
        value = det(f, [[row[c] for c in cols] for row in rows])
        if value == 0:
            return RegularityResult(False, tuple(minors), cols)
        minors.append((cols, value))
    return RegularityResult(True, tuple(minors))


def certify(f: FieldSpec, A: RegularMatrix, budget: int = DEFAULT_MINOR_BUDGET) -> RegularMatrix:
    """Return A with its minor certificate attached; raises if A is not k-regular."""
    res = check_k_regular(f, A.entries, budget)
    if not res.regular:
        raise InvalidParameters(f"matrix is not {A.k}-regular: zero minor on columns {res.witness}")
    return RegularMatrix(A.entries, A.gammas, res.minors)
