"""Polynomials over Q in named parameters (commuting, even).

Used as coefficients of ``Polynomial`` when a morphism is written with
unknown coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

__all__ = ["ParamPoly"]


def _mul_keys(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class ParamPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, i: int) -> "ParamPoly":
        return cls({((i, 1),): 1})

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): c})

    @staticmethod
    def lift(x) -> "ParamPoly":
        return x if isinstance(x, ParamPoly) else ParamPoly.const(x)

    # ring operations -------------------------------------------------------
    def __add__(self, other):
        other = ParamPoly.lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            nc = out.get(k, 0) + c
            if nc:
                out[k] = nc
            else:
                out.pop(k, None)
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ParamPoly.lift(other))

    def __rsub__(self, other):
        return ParamPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            if not other:
                return ParamPoly()
            c = Fraction(other)
            return ParamPoly({k: v * c for k, v in self.terms.items()})
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _mul_keys(k1, k2)
                nc = out.get(k, 0) + c1 * c2
                if nc:
                    out[k] = nc
                else:
                    out.pop(k, None)
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # inspection -------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        try:
            return self.terms == ParamPoly.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set:
        return {v for k in self.terms for v, _ in k}

    def is_constant(self) -> bool:
        return all(not k for k in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def linear_solution(self, v: int) -> Optional["ParamPoly"]:
        """If self = c*v + rest with c a nonzero constant and rest free of v, return -rest/c."""
        coef = None
        rest = {}
        for k, c in self.terms.items():
            d = dict(k)
            if v in d:
                if d[v] != 1 or len(k) != 1:
                    return None
                coef = c
            else:
                rest[k] = c
        if coef is None:
            return None
        return ParamPoly({k: -c / coef for k, c in rest.items()})

    def substitute(self, sub: Mapping) -> "ParamPoly":
        """Replace variables by ParamPolys (simultaneously)."""
        if not sub or not (self.variables() & set(sub)):
            return self
        out = ParamPoly()
        for k, c in self.terms.items():
            t = ParamPoly.const(c)
            for v, e in k:
                if v in sub:
                    t = t * (ParamPoly.lift(sub[v]) ** e)
                else:
                    t = t * ParamPoly({((v, e),): 1})
            out = out + t
        return out

    def evaluate(self, values: Mapping) -> Fraction:
        total = Fraction(0)
        for k, c in self.terms.items():
            t = c
            for v, e in k:
                t *= Fraction(values[v]) ** e
            total += t
        return total

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(
                (names[v] if names else f"p{v}") + (f"^{e}" if e > 1 else "") for v, e in k
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"ParamPoly({self.format()})"

    __str__ = format
