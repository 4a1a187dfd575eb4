"""Arithmetic in small finite fields GF(p^m).

Elements are exposed as :class:`FieldElem` (polynomial-basis coefficients,
low degree first).  Internally every element also has an integer index
``sum(c_k * p**k)``; the solver works on indices for speed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    CardinalityTooLarge,
    DivisionByZero,
    FieldMismatch,
    InputError,
    NotPrime,
    ReducibleModulus,
)

MAX_CARDINALITY = 2 ** 16
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- polynomials over GF(p), coefficient lists low degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a / b over GF(p); b must have a nonzero leading coeff."""
    r = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        factor = (r[-1] * inv_lead) % p
        shift = len(r) - len(b)
        for k, bk in enumerate(b):
            r[shift + k] = (r[shift + k] - factor * bk) % p
        _trim(r)
    return r


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= m/2."""
    m = len(poly) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


@dataclass(frozen=True)
class FieldElem:
    coeffs: tuple[int, ...]

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) with a fixed monic irreducible modulus (low degree first)."""

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.m)
        object.__setattr__(self, "_cache", {})

    # -- identification -----------------------------------------------------
    @property
    def name(self) -> str:
        return f"{self.p}^{self.m}"

    def __str__(self) -> str:
        return f"GF({self.name})"

    # -- element <-> index --------------------------------------------------
    def index(self, x: FieldElem) -> int:
        self._check(x)
        idx = 0
        for c in reversed(x.coeffs):
            idx = idx * self.p + c
        return idx

    def elem(self, idx: int) -> FieldElem:
        out = []
        for _ in range(self.m):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return FieldElem(tuple(out))

    def elements(self) -> Iterator[FieldElem]:
        """All elements in index order (the solver's lexicographic order)."""
        return (self.elem(i) for i in range(self.q))

    def zero(self) -> FieldElem:
        return FieldElem((0,) * self.m)

    def one(self) -> FieldElem:
        return FieldElem((1,) + (0,) * (self.m - 1))

    def parse(self, text: str) -> FieldElem:
        try:
            coeffs = tuple(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise InputError(f"bad field element {text!r}") from exc
        x = FieldElem(coeffs)
        self._check(x)
        return x

    def _check(self, x: FieldElem) -> None:
        if len(x.coeffs) != self.m or any(not 0 <= c < self.p for c in x.coeffs):
            raise FieldMismatch(f"{x.coeffs} is not an element of {self}")

    # -- integer-index arithmetic (hot path) --------------------------------
    def _tables(self):
        cache = self._cache
        if "exp" not in cache:
            cache["exp"], cache["log"] = self._build_log_tables()
            if self.m > 1 and self.q <= _TABLE_LIMIT:
                cache["add"] = [
                    [self._add_digits(a, b) for b in range(self.q)]
                    for a in range(self.q)
                ]
        return cache

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.m):
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def _mul_poly(self, a: int, b: int) -> int:
        ca = self.elem(a).coeffs
        cb = self.elem(b).coeffs
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _poly_mod(prod, self.modulus, self.p)
        rem += [0] * (self.m - len(rem))
        return self.index(FieldElem(tuple(rem)))

    def _build_log_tables(self):
        q = self.q
        if self.m == 1:
            return None, None
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_poly(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                return exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    def add_i(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self._tables()
        if "add" in t:
            return t["add"][a][b]
        return self._add_digits(a, b)

    def neg_i(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._scale_digits(a, self.p - 1)

    def _scale_digits(self, a: int, k: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.m):
            a, d = divmod(a, p)
            out += (d * k % p) * scale
            scale *= p
        return out

    def sub_i(self, a: int, b: int) -> int:
        return self.add_i(a, self.neg_i(b))

    def mul_i(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables()
        return t["exp"][(t["log"][a] + t["log"][b]) % (self.q - 1)]

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        t = self._tables()
        return t["exp"][(-t["log"][a]) % (self.q - 1)]

    def from_int_i(self, n: int) -> int:
        return n % self.p

    # -- element-level API --------------------------------------------------
    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.elem(self.add_i(self.index(a), self.index(b)))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.elem(self.sub_i(self.index(a), self.index(b)))

    def neg(self, a: FieldElem) -> FieldElem:
        return self.elem(self.neg_i(self.index(a)))

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.elem(self.mul_i(self.index(a), self.index(b)))

    def inv(self, a: FieldElem) -> FieldElem:
        return self.elem(self.inv_i(self.index(a)))

    def pow(self, a: FieldElem, k: int) -> FieldElem:
        result, base = 1, self.index(a)
        while k:
            if k & 1:
                result = self.mul_i(result, base)
            base = self.mul_i(base, base)
            k >>= 1
        return self.elem(result)

    def from_int(self, n: int) -> FieldElem:
        return self.elem(self.from_int_i(n))


def field_make(p: int, m: int = 1, modulus: Sequence[int] | None = None,
               max_q: int = MAX_CARDINALITY) -> FieldSpec:
    """Validate parameters and return GF(p^m).

    Without an explicit modulus the first irreducible monic polynomial in
    lexicographic order of its coefficient sequence (low degree first) is
    used, so the same field string always yields the same basis.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise InputError(f"extension degree must be >= 1, got {m}")
    if p ** m > max_q:
        raise CardinalityTooLarge(f"q = {p}^{m} exceeds {max_q}")
    if m == 1:
        if modulus:
            raise InputError("a prime field takes no modulus")
        return FieldSpec(p, 1, ())
    if modulus is None:
        for low in itertools.product(range(p), repeat=m):
            cand = tuple(low) + (1,)
            if is_irreducible(cand, p):
                return FieldSpec(p, m, cand)
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise InputError(f"modulus must be monic of degree {m}: {modulus}")
    if any(not 0 <= c < p for c in modulus):
        raise InputError(f"modulus coefficients must lie in [0, {p})")
    if not is_irreducible(modulus, p):
        raise ReducibleModulus(f"{modulus} is reducible over GF({p})")
    return FieldSpec(p, m, modulus)


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            if q != 1:
                raise NotPrime(f"{p ** m * q} is not a prime power")
            return p, m
    raise NotPrime(f"{q} is not a prime power")


def parse_field(text: str) -> FieldSpec:
    """Parse ``"p^m"`` or a bare prime power such as ``"4"``."""
    try:
        if "^" in text:
            p, m = (int(t) for t in text.split("^"))
        else:
            p, m = _prime_power(int(text))
    except ValueError as exc:
        raise InputError(f"bad field string {text!r}, expected p^m") from exc
    return field_make(p, m)


def f_add(F: FieldSpec, a: FieldElem, b: FieldElem) -> FieldElem:
    return F.add(a, b)


def f_mul(F: FieldSpec, a: FieldElem, b: FieldElem) -> FieldElem:
    return F.mul(a, b)


def f_neg(F: FieldSpec, a: FieldElem) -> FieldElem:
    return F.neg(a)


def f_inv(F: FieldSpec, a: FieldElem) -> FieldElem:
    return F.inv(a)


def f_from_int(F: FieldSpec, n: int) -> FieldElem:
    return F.from_int(n)
