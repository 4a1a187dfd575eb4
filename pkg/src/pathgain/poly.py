"""Sparse integer-coefficient polynomials over named variables.

A monomial is a sorted tuple of variable names with repetition (``("x", "x")``
is x^2).  Coefficients stay integers; reduction into a field happens only at
evaluation time, so relations such as ``2 = 0`` survive until analysis.
"""
from __future__ import annotations

import ast
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import ParseError
from .network import natural_key

Monomial = tuple  # tuple[str, ...]


@lru_cache(maxsize=None)
def var_key(name: str):
    return natural_key(name)


@lru_cache(maxsize=1 << 18)
def mono_key(mono: Monomial):
    """Fixed monomial order: higher degree first, then variable names."""
    return (-len(mono), tuple(var_key(v) for v in mono))


def _mono(names: Iterable[str]) -> Monomial:
    return tuple(sorted(names, key=var_key))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return _mono(a + b)


class Poly:
    """Immutable sparse polynomial; equality and hashing are structural."""

    __slots__ = ("terms", "_hash", "_deg", "_canon")

    def __init__(self, terms: Mapping[Monomial, int] | None = None, *, _clean=False):
        if _clean:
            self.terms = terms
        else:
            clean: dict = {}
            for mono, c in (terms or {}).items():
                if c:
                    key = _mono(mono)
                    clean[key] = clean.get(key, 0) + c
            self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None
        self._deg = None
        self._canon = False

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): c} if c else {}, _clean=True)

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({(name,): 1}, _clean=True)

    @classmethod
    def monomial(cls, names: Iterable[str], coeff: int = 1) -> "Poly":
        return cls({_mono(names): coeff} if coeff else {}, _clean=True)

    @classmethod
    def sum_of(cls, names: Iterable[str]) -> "Poly":
        return cls({(n,): 1 for n in names}, _clean=True)

    @staticmethod
    def _lift(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, int):
            return Poly.const(x)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly(out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # -- inspection -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    @property
    def degree(self) -> int:
        if self._deg is None:
            self._deg = max(map(len, self.terms), default=0)
        return self._deg

    @property
    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    @property
    def constant(self) -> int:
        return self.terms.get((), 0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def linear_coeff(self, name: str) -> int:
        return self.terms.get((name,), 0)

    def occurs_nonlinearly(self, name: str) -> bool:
        return any(len(m) > 1 and name in m for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0]))

    def canonical(self) -> "Poly":
        """Sign-normalize so the leading term has a positive coefficient."""
        if self._canon or not self.terms:
            return self
        deg = self.degree
        lead = min((m for m in self.terms if len(m) == deg), key=mono_key)
        out = -self if self.terms[lead] < 0 else self
        out._canon = True
        return out

    # -- substitution / evaluation ----------------------------------------------
    def substitute(self, name: str, value: "Poly") -> "Poly":
        if not any(name in m for m in self.terms):
            return self
        out: dict = {}
        powers: dict[int, Poly] = {}
        for m, c in self.terms.items():
            k = m.count(name)
            if not k:
                out[m] = out.get(m, 0) + c
                continue
            if k not in powers:
                powers[k] = value ** k
            rest = tuple(v for v in m if v != name)
            for m2, c2 in powers[k].terms.items():
                key = _mono_mul(rest, m2)
                out[key] = out.get(key, 0) + c * c2
        return Poly({m: c for m, c in out.items() if c}, _clean=True)

    def substitute_many(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        out = Poly.const(0)
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v in m:
                term = term * mapping.get(v, Poly.var(v))
            out = out + term
        return out

    def evaluate(self, field, values: Mapping[str, int]) -> int:
        """Value (as a field index) with variables bound to field indices."""
        total = 0
        for m, c in self.terms.items():
            t = field.from_int_i(c)
            for v in m:
                t = field.mul_i(t, values[v])
            total = field.add_i(total, t)
        return total

    # -- rendering ----------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            body = _render_mono(m)
            mag = abs(c)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{mag}*{body}"
            else:
                text = str(mag)
            if i == 0:
                parts.append(f"-{text}" if c < 0 else text)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {text}")
        return " ".join(parts)

    def to_json(self) -> list[dict]:
        return [{"coeff": c, "vars": list(m)} for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, terms: list[dict]) -> "Poly":
        try:
            return cls({tuple(t["vars"]): int(t["coeff"]) for t in terms})
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed polynomial terms: {exc}") from exc


def _render_mono(m: Monomial) -> str:
    out = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        out.append(m[i] if j - i == 1 else f"{m[i]}^{j - i}")
        i = j
    return "*".join(out)


# -- parsing ------------------------------------------------------------------

def _from_ast(node) -> Poly:
    if isinstance(node, ast.Expression):
        return _from_ast(node.body)
    if isinstance(node, ast.BinOp):
        left, right = _from_ast(node.left), _from_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Pow) and right.is_constant and right.constant >= 0:
            return left ** right.constant
    elif isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_from_ast(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _from_ast(node.operand)
    elif isinstance(node, ast.Name):
        return Poly.var(node.id)
    elif isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Poly.const(node.value)
    raise ParseError(f"unsupported expression: {ast.dump(node)}")


def parse_poly(text: str) -> Poly:
    """Parse ``"a2*(b5+b6) - a4"`` or an equation ``"lhs = rhs"`` (as lhs - rhs)."""
    text = text.replace("^", "**")
    if text.count("=") > 1:
        raise ParseError(f"more than one '=' in {text!r}")
    sides = text.split("=")
    try:
        polys = [_from_ast(ast.parse(s.strip(), mode="eval")) for s in sides]
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from exc
    return polys[0] - polys[1] if len(polys) == 2 else polys[0]
