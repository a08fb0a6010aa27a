"""Arithmetic in F_p and F_{p^e} over a canonical integer encoding.

An element of F_q is an ``int`` in ``[0, q)``. For extension fields the
base-p digits of that integer are the coefficients of the residue polynomial,
constant term in the least significant digit, so ``3`` in F_9 is the element
``x`` and ``6`` is ``2x``.

Scalar methods work for every supported field (q <= 2**31). The ``v*``
methods operate elementwise on numpy integer arrays and are what the sweeps
use; for extension fields they go through log/exp tables, which are only
built when ``q <= VECTOR_TABLE_CAP``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, InvalidParameters, NonPrimeModulus, UnsupportedSize

MAX_FIELD_SIZE = 2**31
VECTOR_TABLE_CAP = 2**22
_SCALAR_TABLE_CAP = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low -> high ---------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _poly_trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_powmod(a: Sequence[int], n: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while n:
        if n & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        n >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low -> high).

    f of degree e is irreducible iff x^(p^e) = x mod f and
    gcd(x^(p^(e/r)) - x, f) = 1 for every prime r dividing e.
    """
    f = _poly_trim([c % p for c in poly])
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    frob = [[0, 1]]  # frob[i] = x^(p^i) mod f
    for _ in range(e):
        frob.append(_poly_powmod(frob[-1], p, f, p))
    if _poly_mod(frob[e], f, p) != _poly_mod([0, 1], f, p):
        return False
    for r in prime_factors(e):
        h = list(frob[e // r]) + [0] * 2
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(h, f, p)) > 1:
            return False
    return True


def _monic_candidates(p: int, e: int) -> Iterator[list[int]]:
    # increasing encoded value of the low-order coefficient vector
    for code in range(p**e):
        coeffs = []
        for _ in range(e):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q, q = p**e.

    ``modulus`` is the monic irreducible polynomial (coefficients low -> high,
    length e + 1) defining the extension; it is ``None`` for prime fields.
    """

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None
    q: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrimeModulus(f"{self.p} is not prime")
        if self.e < 1:
            raise InvalidParameters(f"extension degree must be >= 1, got {self.e}")
        q = self.p**self.e
        if q > MAX_FIELD_SIZE:
            raise UnsupportedSize(f"q = {self.p}^{self.e} exceeds the cap 2^31")
        object.__setattr__(self, "q", q)
        if self.e == 1:
            if self.modulus is not None:
                raise InvalidParameters("prime fields take no modulus polynomial")
            return
        if self.modulus is None:
            raise InvalidParameters("extension fields need a modulus polynomial")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise InvalidParameters(f"modulus must be monic of degree {self.e}")
        if not is_irreducible(mod, self.p):
            raise InvalidParameters(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldSpec(F_{self.p})"
        return f"FieldSpec(F_{self.p}^{self.e}, modulus={self.modulus})"

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    @property
    def label(self) -> str:
        return str(self.p) if self.e == 1 else f"{self.p}^{self.e}"

    # -- encoding -------------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(digits)):
            v = v * self.p + (c % self.p)
        return v

    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise InvalidParameters(f"{a} is not an element of F_{self.label}")
        return a

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p, out, place = self.p, 0, 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        p, out, place = self.p, 0, 1
        for _ in range(self.e):
            out += (-(a % p) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.q <= _SCALAR_TABLE_CAP:
            log, exp = self._log_exp_lists
            return exp[log[a] + log[b]]
        return self._poly_mul_elems(a, b)

    def _poly_mul_elems(self, a: int, b: int) -> int:
        prod = _poly_mul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_poly_mod(prod, self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        if self.e == 1:
            return _xgcd_inverse(a, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def sum(self, values) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for x, y in zip(u, v):
            acc = self.add(acc, self.mul(x, y))
        return acc

    @cached_property
    def primitive_element(self) -> int:
        """Smallest encoded generator of the multiplicative group."""
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise AssertionError("multiplicative group has no generator")  # pragma: no cover

    def _slow_pow(self, a: int, n: int) -> int:
        if self.e == 1:
            return pow(a, n, self.p)
        result, base = 1, a
        while n:
            if n & 1:
                result = self._poly_mul_elems(result, base)
            base = self._poly_mul_elems(base, base)
            n >>= 1
        return result

    @cached_property
    def _log_exp_lists(self) -> tuple[list[int], list[int]]:
        g = self.primitive_element
        n = self.q - 1
        exp = [0] * (2 * n)
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = exp[i + n] = x
            log[x] = i
            x = x * g % self.p if self.e == 1 else self._poly_mul_elems(x, g)
        return log, exp

    # -- vectorized arithmetic -------------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self.q > VECTOR_TABLE_CAP:
            raise UnsupportedSize(
                f"vectorized arithmetic over F_{self.label} needs q <= {VECTOR_TABLE_CAP}"
            )
        log, exp = self._log_exp_lists
        return np.asarray(log, dtype=np.int64), np.asarray(exp, dtype=np.int64)

    @cached_property
    def _place_values(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    def varray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64)

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for place in self._place_values:
            out += ((a // place + b // place) % self.p) * place
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return -a % self.p
        out = np.zeros_like(a)
        for place in self._place_values:
            out += (-(a // place) % self.p) * place
        return out

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return a * b % self.p
        log, exp = self._tables
        prod = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vpow(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if n < 0:
            return self.vpow(self.vinv(a), -n)
        result = np.ones_like(a)
        base = a
        while n:
            if n & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            n >>= 1
        return result

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("0 has no multiplicative inverse")
        return self.vpow(a, self.q - 2)

    def power_table(self, n: int) -> np.ndarray:
        """Array t with t[a] = a**n for every element a."""
        return self.vpow(np.arange(self.q, dtype=np.int64), n)


def _xgcd_inverse(a: int, m: int) -> int:
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise DivisionByZero(f"{a} is not invertible mod {m}")
    return old_s % m


def make_field(p: int, e: int = 1) -> FieldSpec:
    """Build F_{p^e}; extensions use the lexicographically smallest monic irreducible."""
    if not is_prime(p):
        raise NonPrimeModulus(f"{p} is not prime")
    if e < 1:
        raise InvalidParameters(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_FIELD_SIZE:
        raise UnsupportedSize(f"q = {p}^{e} exceeds the cap 2^31")
    if e == 1:
        return FieldSpec(p)
    for cand in _monic_candidates(p, e):
        if is_irreducible(cand, p):
            return FieldSpec(p, e, tuple(cand))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def parse_field(text: str) -> FieldSpec:
    """Parse the command-line syntax ``p`` or ``p^e``."""
    text = text.strip()
    try:
        if "^" in text:
            base, ext = text.split("^", 1)
            p, e = int(base), int(ext)
        else:
            p, e = int(text), 1
    except ValueError as exc:
        raise InvalidParameters(f"cannot parse field {text!r}; use p or p^e") from exc
    return make_field(p, e)


def enumerate_field(f: FieldSpec) -> range:
    return f.elements()


def embedding(small: FieldSpec, big: FieldSpec) -> np.ndarray:
    """Table mapping each element of ``small`` to its image in ``big``.

    Requires the same characteristic and e_small | e_big. For a prime base
    field the map is the identity on 0..p-1 (constant residue polynomials).
    """
    if small.p != big.p or big.e % small.e:
        raise InvalidParameters(f"F_{small.label} does not embed in F_{big.label}")
    if small.e == 1:
        return np.arange(small.p, dtype=np.int64)
    if small == big:
        return np.arange(small.q, dtype=np.int64)
    # find a root of small's modulus inside big; the basis 1, b, b^2, ... follows
    root = None
    for b in range(big.q):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, b), c)
        if acc == 0:
            root = b
            break
    if root is None:  # pragma: no cover - guaranteed by finite field theory
        raise AssertionError("modulus has no root in the extension")
    powers = [big.pow(root, i) for i in range(small.e)]
    table = np.zeros(small.q, dtype=np.int64)
    for a in range(small.q):
        acc = 0
        for c, r in zip(small.digits(a), powers):
            acc = big.add(acc, big.mul(c, r))
        table[a] = acc
    return table


def encode_points(f: FieldSpec, points: np.ndarray) -> np.ndarray:
    """Integer code sum_j x_j q^j for each row (little-endian base q)."""
    points = np.asarray(points, dtype=np.int64)
    n = points.shape[-1]
    if f.q**n >= 2**63:
        raise UnsupportedSize(f"points in F_{f.label}^{n} do not fit a 63-bit code")
    weights = f.q ** np.arange(n, dtype=np.int64)
    return points @ weights


def decode_points(f: FieldSpec, codes: np.ndarray, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (n,), dtype=np.int64)
    for j in range(n):
        out[..., j] = codes % f.q
        codes = codes // f.q
    return out
