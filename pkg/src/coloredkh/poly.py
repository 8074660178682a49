"""Exact Laurent polynomials in one variable with big-integer coefficients."""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Iterable, Mapping

VARIABLES = ("q", "A")

# Exponents stay far below this at desk scale; crossing it means a runaway loop.
_EXPONENT_BOUND = 2**62


class VariableMismatch(ValueError):
    pass


class ConsistencyError(ArithmeticError):
    """An internal identity that must hold by construction was violated."""


class LaurentPoly:
    """Immutable Laurent polynomial ``sum c_e * var**e``.

    Zero coefficients are never stored, so equality and hashing are
    structural.
    """

    __slots__ = ("_coeffs", "var", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None, var: str = "q"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        clean = {}
        for e, c in (coeffs or {}).items():
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            if abs(e) >= _EXPONENT_BOUND:
                raise OverflowError(f"exponent {e} out of range")
            if c:
                clean[int(e)] = c
        self._coeffs = dict(sorted(clean.items()))
        self.var = var
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, var: str = "q") -> "LaurentPoly":
        return cls({exponent: coeff}, var)

    @classmethod
    def one(cls, var: str = "q") -> "LaurentPoly":
        return cls({0: 1}, var)

    @classmethod
    def zero(cls, var: str = "q") -> "LaurentPoly":
        return cls({}, var)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], var: str = "q") -> "LaurentPoly":
        acc: dict[int, int] = defaultdict(int)
        for e, c in terms:
            acc[e] += c
        return cls(acc, var)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, exponent: int) -> int:
        return self._coeffs.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree_range(self) -> tuple[int, int] | None:
        if not self._coeffs:
            return None
        exps = list(self._coeffs)
        return exps[0], exps[-1]

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var != self.var:
                raise VariableMismatch(f"{self.var} vs {other.var}")
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._coeffs)
        for e, c in other._coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._coeffs.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = defaultdict(int)
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                acc[e1 + e2] += c1 * c2
        return LaurentPoly(acc, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._coeffs) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._coeffs.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({e * n: c ** (-n) if c == 1 else (-1) ** n}, self.var)
        result = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``var**k``."""
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()}, self.var)

    def __eq__(self, other):
        if isinstance(other, int):
            return self._coeffs == ({0: other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var == other.var and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, tuple(self._coeffs.items())))
        return self._hash

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"LaurentPoly({render(self)!r}, var={self.var!r})"


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.var != b.var:
        raise VariableMismatch(f"{a.var} vs {b.var}")
    return a * b


def render(p: LaurentPoly) -> str:
    """Canonical text form, decreasing exponents: ``q^3 + 2*q - q^-1``."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in sorted(p.items(), reverse=True):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = p.var if e == 1 else f"{p.var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


_TERM = re.compile(r"^(?:(\d+)\*?)?(?:([qA])(?:\^(-?\d+))?)?$")


def parse(text: str, var: str | None = None) -> LaurentPoly:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero(var or "q")
    tokens = text.replace("- ", "-").replace("+ ", "+").split()
    acc: dict[int, int] = defaultdict(int)
    seen_var = var
    for tok in tokens:
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-")
        m = _TERM.match(tok)
        if not m or tok == "":
            raise ValueError(f"bad term {tok!r} in {text!r}")
        coeff, v, exp = m.groups()
        if v is not None:
            if seen_var is not None and v != seen_var:
                raise VariableMismatch(f"mixed variables in {text!r}")
            seen_var = v
            e = int(exp) if exp is not None else 1
        else:
            e = 0
        acc[e] += sign * (int(coeff) if coeff is not None else 1)
    return LaurentPoly(acc, seen_var or "q")


def jones_from_bracket(bracket: LaurentPoly, writhe: int) -> LaurentPoly:
    """``(-A)^(-3w) <D>`` rewritten in ``q = -A^-2``."""
    if bracket.var != "A":
        raise VariableMismatch("bracket must be a polynomial in A")
    sign = -1 if writhe % 2 else 1
    out: dict[int, int] = {}
    for e, c in bracket.items():
        a_exp = e - 3 * writhe
        if a_exp % 2:
            raise ConsistencyError(f"odd A-exponent {a_exp} after normalisation")
        # A^(2k) = (A^-2)^(-k) = (-q)^(-k)
        k = -(a_exp // 2)
        out[k] = out.get(k, 0) + sign * c * (-1) ** (k % 2)
    return LaurentPoly(out, "q")


def binomial_poly(var: str = "q") -> LaurentPoly:
    """The loop value ``q + q^-1`` (or ``-A^2 - A^-2`` in A)."""
    if var == "q":
        return LaurentPoly({1: 1, -1: 1}, "q")
    return LaurentPoly({2: -1, -2: -1}, "A")
