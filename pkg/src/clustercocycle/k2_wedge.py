"""Formal wedge elements, exact evaluation into Lambda^2 Q^*, and tame symbols.

A ``WedgeElement`` is a finite sum of ``c * (a ^ b)`` over expressions, with
``c`` in (1/2)Z stored doubled. Evaluation factors each value into -1 and
primes and expands bilinearly; -1 is an order-two generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Literal, Mapping

import sympy

from .labels import Const, Expr, Monomial, OnePlus, evaluate, is_atom, sort_key

TorsionMode = Literal["keep", "drop"]


class WedgeElement:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Expr, Expr], int] | None = None):
        self._terms: dict[tuple[Expr, Expr], int] = {}
        for (a, b), c in (terms or {}).items():
            self._add(a, b, c)

    def _add(self, a: Expr, b: Expr, c2: int) -> None:
        if a == b or c2 == 0 or _is_one(a) or _is_one(b):
            return
        if sort_key(a) > sort_key(b):
            a, b, c2 = b, a, -c2
        key = (a, b)
        val = self._terms.get(key, 0) + c2
        if val:
            self._terms[key] = val
        else:
            self._terms.pop(key, None)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Expr, Expr, int | Fraction]]) -> "WedgeElement":
        out = cls()
        for a, b, c in terms:
            c2 = Fraction(c) * 2
            if c2.denominator != 1:
                raise ValueError("wedge coefficients must lie in (1/2)Z")
            out._add(a, b, int(c2))
        return out

    def doubled(self) -> dict[tuple[Expr, Expr], int]:
        return dict(self._terms)

    def terms(self) -> list[tuple[Expr, Expr, Fraction]]:
        items = sorted(self._terms.items(), key=lambda kv: (sort_key(kv[0][0]), sort_key(kv[0][1])))
        return [(a, b, Fraction(c, 2)) for (a, b), c in items]

    def coeff(self, a: Expr, b: Expr) -> Fraction:
        if sort_key(a) > sort_key(b):
            return -self.coeff(b, a)
        return Fraction(self._terms.get((a, b), 0), 2)

    def labels(self) -> set:
        return {x for pair in self._terms for x in pair}

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "WedgeElement") -> "WedgeElement":
        out = WedgeElement(self._terms)
        for (a, b), c in other._terms.items():
            out._add(a, b, c)
        return out

    def __neg__(self) -> "WedgeElement":
        return WedgeElement({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "WedgeElement") -> "WedgeElement":
        return self + (-other)

    def scale(self, k: int | Fraction) -> "WedgeElement":
        out = WedgeElement()
        for (a, b), c in self._terms.items():
            v = Fraction(k) * c
            if v.denominator != 1:
                raise ValueError("scaling leaves (1/2)Z")
            out._add(a, b, int(v))
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WedgeElement) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*{a}^{b}" for a, b, c in self.terms())


def _is_one(e: Expr) -> bool:
    if isinstance(e, Monomial):
        return not e.factors and e.coeff == 1
    return isinstance(e, Const) and e.value == 1


def wedge(a: Expr, b: Expr, coeff: int | Fraction = 1) -> WedgeElement:
    return WedgeElement.from_terms([(a, b, coeff)])


def expand_monomials(w: WedgeElement) -> WedgeElement:
    """Rewrite wedges of monomials bilinearly as wedges of their factors."""
    out = WedgeElement()
    for a, b, c in w.terms():
        left = _monomial_parts(a)
        right = _monomial_parts(b)
        for x, ex in left.items():
            for y, ey in right.items():
                out = out + wedge(x, y, c * ex * ey)
    return out


def _monomial_parts(e: Expr) -> dict:
    if not isinstance(e, Monomial):
        return {e: 1}
    parts = dict(e.factors)
    if e.coeff != 1:
        if e.coeff < 0:
            parts[Const(Fraction(-1))] = 1
        if abs(e.coeff) != 1:
            parts[Const(abs(e.coeff))] = 1
    return parts


# -- factored rationals ------------------------------------------------------

@dataclass(frozen=True)
class FactoredRational:
    sign: int
    exponents: tuple[tuple[int, int], ...]

    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.exponents:
            out *= Fraction(p) ** e
        return out


@lru_cache(maxsize=1 << 16)
def _factor_int(n: int) -> tuple[tuple[int, int], ...]:
    # factorint may hand back gmpy2 integers, which do not mix with Fraction
    return tuple(sorted((int(p), int(e)) for p, e in sympy.factorint(n).items()))


def factor(q: Fraction | int) -> FactoredRational:
    q = Fraction(q)
    if q == 0:
        raise ValueError("cannot factor zero")
    exps: dict[int, int] = {}
    for p, e in _factor_int(abs(q.numerator)):
        exps[p] = exps.get(p, 0) + e
    for p, e in _factor_int(q.denominator):
        exps[p] = exps.get(p, 0) - e
    return FactoredRational(1 if q > 0 else -1, tuple(sorted((p, e) for p, e in exps.items() if e)))


def _generators(q: Fraction) -> dict[int, int]:
    f = factor(q)
    out = dict(f.exponents)
    if f.sign < 0:
        out[-1] = 1
    return out


class WedgeValue:
    """Element of Lambda^2 Q^* (tensor Z[1/2]) on generators -1 and primes."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Fraction] | None = None):
        self._c: dict[tuple[int, int], Fraction] = {}
        for (g, h), c in (coeffs or {}).items():
            self.add(g, h, c)

    def add(self, g: int, h: int, c: Fraction | int) -> None:
        if g == h or c == 0:
            return
        if g > h:
            g, h, c = h, g, -c
        v = self._c.get((g, h), Fraction(0)) + c
        if v:
            self._c[(g, h)] = Fraction(v)
        else:
            self._c.pop((g, h), None)

    def add_wedge(self, x: Fraction, y: Fraction, c: Fraction | int) -> None:
        gx, gy = _generators(x), _generators(y)
        for g, a in gx.items():
            for h, b in gy.items():
                self.add(g, h, c * a * b)

    def finalize(self, torsion: TorsionMode = "keep", allow_half: bool = False) -> "WedgeValue":
        out = WedgeValue()
        for (g, h), c in self._c.items():
            if g == -1:
                if torsion == "drop":
                    continue
                if c.denominator != 1:
                    if allow_half:
                        continue
                    raise ValueError(f"half-integer coefficient on torsion pair (-1, {h})")
                c = Fraction(int(c) % 2)
            elif c.denominator != 1 and not allow_half:
                raise ValueError(f"residual half-integer coefficient on ({g}, {h})")
            out.add(g, h, c)
        return out

    def items(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __sub__(self, other: "WedgeValue") -> "WedgeValue":
        out = WedgeValue(self._c)
        for (g, h), c in other._c.items():
            out.add(g, h, -c)
        return out

    def __add__(self, other: "WedgeValue") -> "WedgeValue":
        out = WedgeValue(self._c)
        for (g, h), c in other._c.items():
            out.add(g, h, c)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WedgeValue) and self._c == other._c

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        return " + ".join(f"{c}*({g}^{h})" for (g, h), c in self.items())


def evaluate_wedge(w: WedgeElement, assignment: Mapping | Callable,
                   torsion: TorsionMode = "keep", allow_half: bool = False) -> WedgeValue:
    memo: dict = {}
    acc = WedgeValue()
    for a, b, c in w.terms():
        x = Fraction(evaluate(a, assignment, memo))
        y = Fraction(evaluate(b, assignment, memo))
        if x == 0 or y == 0:
            raise ZeroDivisionError(f"wedge factor vanishes: {a if x == 0 else b}")
        acc.add_wedge(x, y, c)
    return acc.finalize(torsion, allow_half)


def steinberg_element(d: int, xhat: Expr) -> WedgeElement:
    """d * (1 + X) ^ X."""
    return wedge(OnePlus(xhat), xhat, d)


def equal_mod_steinberg(lhs: WedgeElement, rhs: WedgeElement,
                        steinberg: Iterable[tuple[int, Expr]],
                        sampler: Callable[[random.Random], Mapping | Callable],
                        trials: int = 20, seed: int = 0,
                        torsion: TorsionMode = "keep") -> bool:
    """True iff lhs - rhs - sum d (1+X)^X vanishes at every sampled point."""
    diff = lhs - rhs
    for d, x in steinberg:
        diff = diff - steinberg_element(d, x)
    rng = random.Random(seed)
    for _ in range(trials):
        if not evaluate_wedge(diff, sampler(rng), torsion).is_zero():
            return False
    return True


# -- tame symbols ------------------------------------------------------------

def tame_symbol_formal(w: WedgeElement, k: Expr, doubled: bool = False) -> Monomial:
    """Exponents of the residue of w along {k = 0}: coefficient of k ^ x goes to x.

    With ``doubled`` the residue of 2w is returned, which is always integral.
    A label that does not occur in w has residue 1.
    """
    exps: dict = {}
    for a, b, c in w.terms():
        if not (is_atom(a) and is_atom(b)):
            raise ValueError("formal residue needs a wedge of atoms")
        if a == k:
            exps[b] = exps.get(b, 0) + c
        elif b == k:
            exps[a] = exps.get(a, 0) - c
    if doubled:
        exps = {x: 2 * v for x, v in exps.items()}
    if any(Fraction(v).denominator != 1 for v in exps.values()):
        raise ValueError("residue exponents are not integral")
    return Monomial.of({x: int(v) for x, v in exps.items()})


def _order_at(expr, t, a) -> int:
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    if num == 0:
        raise ValueError("function vanishes identically")

    def mult(p) -> int:
        poly = sympy.Poly(p, t)
        k = 0
        lin = sympy.Poly(t - a, t)
        while poly.eval(a) == 0:
            poly = sympy.div(poly, lin)[0]
            k += 1
        return k

    return mult(num) - mult(den)


def tame_symbol_univariate(f, g, point, t=None) -> Fraction:
    """(-1)^{v(f)v(g)} f^{v(g)} / g^{v(f)} evaluated at t = point.

    f and g are sympy expressions in one parameter ``t``.
    """
    f, g = sympy.sympify(f), sympy.sympify(g)
    if t is None:
        free = (f.free_symbols | g.free_symbols)
        if len(free) > 1:
            raise ValueError("expected functions of one parameter")
        t = next(iter(free)) if free else sympy.Symbol("t")
    a = sympy.Rational(Fraction(point).numerator, Fraction(point).denominator)
    vf, vg = _order_at(f, t, a), _order_at(g, t, a)
    u = sympy.cancel((-1) ** (vf * vg) * f ** vg / g ** vf)
    val = sympy.Rational(u.subs(t, a))
    return Fraction(int(val.p), int(val.q))


# -- residues against the divisor component ------------------------------------

@dataclass
class VertexResidue:
    vertex: str
    label: Expr
    frozen: bool
    exponents: dict
    status: str  # "match", "2-torsion", "trivial" or "mismatch"
    points: int
    detail: str = ""

    def line(self) -> str:
        exps = " ".join(f"{k}^{v}" for k, v in self.exponents.items())
        return f"{self.vertex:>6} {str(self.label):<24} {self.status:<10} [{self.points} pts] {exps} {self.detail}".rstrip()


@dataclass
class ResidueReport:
    label: str
    vertices: list[VertexResidue] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.status != "mismatch" for v in self.vertices)

    def lines(self) -> list[str]:
        return [f"residues of W for {self.label}"] + [v.line() for v in self.vertices]


# signs of the edge maps for the roles (F1, F3, F2) of a counterclockwise triangle
_EDGE_SIGNS = {(0, 1): 1, (1, 2): 1, (0, 2): -1}


def residue_match_c3(cd, word=None, frozen_points: int = 5, unfrozen_points: int = 20,
                     seed: int = 0, triangle=None) -> ResidueReport:
    """Compare residues of W on the triangle seed with the divisor component.

    Along {Delta_k(F_a, F_b) = 0} the residue of 2W must equal F_k(F_a, F_b)^{+-2},
    where F_k = (Lambda_k(h)^{-1} prod_{j != k} Delta_j^{C_kj/2})^{d_k} and h is the
    torus part of the pair in the cell B_{s_k w0}. Squares absorb the half-integer
    exponents and the sign. Unfrozen residues must evaluate to -1. Only SL_n
    realizations are available. ``triangle`` replaces the canonical seed, e.g.
    with a corrupted one as a negative control.
    """
    from .bd_complex import c3_element
    from .cluster_seed import triangle_seed
    from .flags_sl import bruhat_invariants, delta, divisor_sample
    from .labels import evaluate
    from .root_system import longest_word

    if cd.series != "A":
        raise NotImplementedError("divisor sampling needs the SL_n flag model")
    word = longest_word(cd, word)
    s = triangle if triangle is not None else triangle_seed(cd, word)
    w = s.w_element()
    n = cd.rank + 1
    roles = {1: 0, 2: 1, 3: 2}  # triple (1, 2, 3) gives F1 = 1, F3 = 2, F2 = 3
    c3 = {e.k: e for e in c3_element(cd).entries}
    rng = random.Random(seed)
    report = ResidueReport(f"{cd.label} {word}")
    for idx, v in enumerate(s.quiver.vertices):
        lab = s.labels[idx]
        pts = divisor_sample(s.labels, idx, n, 3, unfrozen_points if not v.frozen else frozen_points, rng)
        if not v.frozen:
            mono = tame_symbol_formal(w, lab)
            vals = {Fraction(evaluate(mono, p)) for p in pts}
            status = "2-torsion" if vals == {-1} else "trivial" if vals == {1} else "mismatch"
            report.vertices.append(VertexResidue(v.id, lab, False, dict(mono.factors), status, len(pts),
                                                 "" if status != "mismatch" else f"values {sorted(vals)}"))
            continue
        mono = tame_symbol_formal(w, lab, doubled=True)
        sign = _EDGE_SIGNS[(min(roles[lab.a], roles[lab.b]), max(roles[lab.a], roles[lab.b]))]
        entry = c3[lab.i]
        bad = ""
        for p in pts:
            cfg = p["__config__"]
            f, g = cfg[lab.a - 1], cfg[lab.b - 1]
            h = bruhat_invariants(f, g)
            sq = Fraction(1)
            for j, x in enumerate(entry.character, start=1):
                base = h.lam(j) if j == lab.i else delta(f, g, j)
                sq *= base ** int(2 * x * entry.power)
            got = Fraction(evaluate(mono, p))
            if got != sq ** sign:
                bad = f"residue^2 {got} != F_{lab.i}^{2 * sign} {sq ** sign}"
                break
        exps = {k: Fraction(e, 2) for k, e in mono.factors}
        report.vertices.append(VertexResidue(v.id, lab, True, exps, "mismatch" if bad else "match", len(pts),
                                             bad or f"edge sign {sign:+d}"))
    return report
