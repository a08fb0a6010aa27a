"""Sparse multivariate polynomials over a FieldSpec."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameters
from .field import FieldSpec


def grlex_monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= max_degree.

    Ordered by degree, then lexicographically descending within a degree,
    e.g. for two variables: 1, x1, x2, x1^2, x1*x2, x2^2.
    """
    out = []
    for deg in range(max_degree + 1):
        block = [
            e for e in itertools.product(range(deg + 1), repeat=nvars) if sum(e) == deg
        ]
        out.extend(sorted(block, reverse=True))
    return out


def grlex_key(exps: Sequence[int]) -> tuple:
    return (sum(exps), tuple(exps))


@dataclass(frozen=True)
class Polynomial:
    """Sum of coeff * prod x_i^e_i; terms are sorted grlex ascending, coefficients nonzero."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[tuple[Sequence[int], int]], f: FieldSpec) -> Polynomial:
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise InvalidParameters(f"bad exponent vector {exps} for {nvars} variables")
            acc[exps] = f.add(acc.get(exps, 0), f.check(int(c)))
        kept = sorted(((e, c) for e, c in acc.items() if c), key=lambda t: grlex_key(t[0]))
        return cls(nvars, tuple(kept))

    @classmethod
    def variable(cls, nvars: int, i: int) -> Polynomial:
        exps = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, ((exps, 1),))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def leading_coefficient(self) -> int:
        return self.terms[-1][1] if self.terms else 0

    def support(self) -> set[int]:
        return {i for e, _ in self.terms for i, a in enumerate(e) if a}

    def evaluate(self, f: FieldSpec, x: Sequence[int]) -> int:
        acc = 0
        for exps, c in self.terms:
            term = c
            for xi, a in zip(x, exps):
                if a:
                    term = f.mul(term, f.pow(xi, a))
            acc = f.add(acc, term)
        return acc

    def vevaluate(self, f: FieldSpec, points: np.ndarray, coeff_map: np.ndarray | None = None) -> np.ndarray:
        """Evaluate at every row of ``points`` (shape (..., nvars)).

        ``coeff_map`` embeds the coefficients into ``f`` when the polynomial
        was written over a subfield.
        """
        points = np.asarray(points, dtype=np.int64)
        acc = np.zeros(points.shape[:-1], dtype=np.int64)
        for exps, c in self.terms:
            cc = int(coeff_map[c]) if coeff_map is not None else c
            term = np.full(points.shape[:-1], cc, dtype=np.int64)
            for i, a in enumerate(exps):
                if a:
                    term = f.vmul(term, f.vpow(points[..., i], a))
            acc = f.vadd(acc, term)
        return acc

    def monic(self, f: FieldSpec) -> Polynomial:
        if self.is_zero:
            return self
        inv = f.inv(self.leading_coefficient)
        return Polynomial(self.nvars, tuple((e, f.mul(c, inv)) for e, c in self.terms))

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "terms": [[list(e), c] for e, c in self.terms]}

    @classmethod
    def from_json(cls, data: dict, f: FieldSpec) -> Polynomial:
        return cls.from_terms(data["nvars"], [(e, c) for e, c in data["terms"]], f)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in reversed(self.terms):
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(exps) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)
