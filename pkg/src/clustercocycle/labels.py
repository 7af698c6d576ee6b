"""Symbolic coordinate labels and the rational expressions built from them.

Atoms are ``Minor`` (a frozen-edge minor), ``ChainMinor`` (a minor against an
intermediate flag of the chain) and ``Symbol``. Composite expressions are
monomials, ``OnePlus`` and exchange-relation results. Everything is hashable
and evaluates against a dict of atom values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union


@dataclass(frozen=True)
class Minor:
    """Delta_i(F_a, F_b): det of the first i vectors of F_a and first n-i of F_b."""
    i: int
    a: int
    b: int

    def __str__(self) -> str:
        return f"D{self.i}({self.a},{self.b})"


@dataclass(frozen=True)
class ChainMinor:
    """Delta_{i_p}(F_a, X^p) where X^0 = F_b, ..., X^m = F_c is the flag chain
    for the starred word."""
    word: tuple[int, ...]
    p: int
    a: int
    b: int
    c: int

    def __str__(self) -> str:
        w = "".join(map(str, self.word))
        return f"A{self.p}[{w}]({self.a};{self.b},{self.c})"


@dataclass(frozen=True)
class Symbol:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    factors: tuple[tuple["Expr", int], ...]

    @classmethod
    def of(cls, factors: Mapping["Expr", int] | None = None, coeff=1) -> "Monomial":
        items = tuple(sorted(((k, v) for k, v in (factors or {}).items() if v), key=lambda kv: sort_key(kv[0])))
        return cls(Fraction(coeff), items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        acc = dict(self.factors)
        for k, v in other.factors:
            acc[k] = acc.get(k, 0) + v
        return Monomial.of(acc, self.coeff * other.coeff)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.factors)

    def exponents(self) -> dict["Expr", int]:
        return dict(self.factors)

    def __str__(self) -> str:
        parts = [str(k) if v == 1 else f"{k}^{v}" for k, v in self.factors]
        body = "*".join(parts) if parts else "1"
        if self.coeff == 1:
            return body
        if self.coeff == -1:
            return f"-{body}"
        return f"{self.coeff}*{body}"


@dataclass(frozen=True)
class OnePlus:
    inner: "Expr"

    def __str__(self) -> str:
        return f"(1+{self.inner})"


@dataclass(frozen=True)
class OneMinus:
    inner: "Expr"

    def __str__(self) -> str:
        return f"(1-{self.inner})"


@dataclass(frozen=True)
class Exchanged:
    """(plus + minus) / old: the label produced by one mutation."""
    old: "Expr"
    plus: Monomial
    minus: Monomial

    def __str__(self) -> str:
        return f"({self.plus}+{self.minus})/{self.old}"


Atom = Union[Minor, ChainMinor, Symbol]
Expr = Union[Minor, ChainMinor, Symbol, Const, Monomial, OnePlus, OneMinus, Exchanged]

_RANK = {Minor: 0, ChainMinor: 1, Symbol: 2, Const: 3, Monomial: 4, OnePlus: 5, OneMinus: 6, Exchanged: 7}


def sort_key(e: Expr) -> tuple:
    if isinstance(e, Minor):
        return (0, e.i, e.a, e.b)
    if isinstance(e, ChainMinor):
        return (1, e.word, e.p, e.a, e.b, e.c)
    return (_RANK[type(e)], repr(e))


def is_atom(e: Expr) -> bool:
    return isinstance(e, (Minor, ChainMinor, Symbol))


def atoms(e: Expr, out: set | None = None) -> set:
    out = set() if out is None else out
    if is_atom(e):
        out.add(e)
    elif isinstance(e, Monomial):
        for k, _ in e.factors:
            atoms(k, out)
    elif isinstance(e, (OnePlus, OneMinus)):
        atoms(e.inner, out)
    elif isinstance(e, Exchanged):
        atoms(e.old, out)
        atoms(e.plus, out)
        atoms(e.minus, out)
    return out


def evaluate(e: Expr, values: Mapping | Callable, memo: dict | None = None):
    """Evaluate with atom values from a mapping or a callable atom -> value."""
    memo = {} if memo is None else memo
    if e in memo:
        return memo[e]
    if is_atom(e):
        out = values(e) if callable(values) else values[e]
    elif isinstance(e, Const):
        out = e.value
    elif isinstance(e, Monomial):
        out = e.coeff
        for k, v in e.factors:
            x = evaluate(k, values, memo)
            if v < 0 and x == 0:
                raise ZeroDivisionError(f"{k} vanishes")
            out = out * x ** v
    elif isinstance(e, OnePlus):
        out = 1 + evaluate(e.inner, values, memo)
    elif isinstance(e, OneMinus):
        out = 1 - evaluate(e.inner, values, memo)
    elif isinstance(e, Exchanged):
        old = evaluate(e.old, values, memo)
        if old == 0:
            raise ZeroDivisionError(f"{e.old} vanishes")
        out = (evaluate(e.plus, values, memo) + evaluate(e.minus, values, memo)) / old
    else:
        raise TypeError(f"not an expression: {e!r}")
    memo[e] = out
    return out
