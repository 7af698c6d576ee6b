"""Bloch group elements, the map delta, five-term relations and their checks.

Also holds the SL_n surface and 3-complex elements: the sum of C^(2) over the
triangles of a triangulated surface and the motivic volume of a triangulated
3-complex.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .k2_wedge import TorsionMode, WedgeElement, WedgeValue, evaluate_wedge, wedge
from .labels import Const, Expr, Minor, Monomial, OneMinus, evaluate

Number = Fraction | complex | float | int


def _is_number(x) -> bool:
    return isinstance(x, (Fraction, complex, float, int))


def _normalize_arg(x):
    if isinstance(x, (int, float)) and not isinstance(x, bool) and float(x).is_integer():
        x = Fraction(int(x))
    if _is_number(x) and (x == 0 or x == 1):
        raise ValueError(f"Bloch arguments must avoid 0 and 1, got {x}")
    return x


class BlochElement:
    """Finite sum of c {x} with c in (1/2)Z stored doubled."""

    __slots__ = ("_t",)

    def __init__(self, doubled: Mapping | None = None):
        self._t: dict = {}
        for x, c in (doubled or {}).items():
            self._add(x, c)

    def _add(self, x, c2: int) -> None:
        if not c2:
            return
        x = _normalize_arg(x)
        v = self._t.get(x, 0) + c2
        if v:
            self._t[x] = v
        else:
            self._t.pop(x, None)

    @classmethod
    def of(cls, *args, coeff: int | Fraction = 1) -> "BlochElement":
        c2 = Fraction(coeff) * 2
        if c2.denominator != 1:
            raise ValueError("coefficients must lie in (1/2)Z")
        out = cls()
        for x in args:
            out._add(x, int(c2))
        return out

    def terms(self) -> list[tuple[object, Fraction]]:
        return [(x, Fraction(c, 2)) for x, c in self._t.items()]

    def __add__(self, other: "BlochElement") -> "BlochElement":
        out = BlochElement(self._t)
        for x, c in other._t.items():
            out._add(x, c)
        return out

    def __neg__(self) -> "BlochElement":
        return BlochElement({x: -c for x, c in self._t.items()})

    def __sub__(self, other: "BlochElement") -> "BlochElement":
        return self + (-other)

    def scale(self, k: int) -> "BlochElement":
        return BlochElement({x: k * c for x, c in self._t.items()})

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BlochElement) and self._t == other._t

    def evaluate(self, assignment) -> "BlochElement":
        """Replace symbolic arguments by their values."""
        memo: dict = {}
        out = BlochElement()
        for x, c in self._t.items():
            out._add(x if _is_number(x) else evaluate(x, assignment, memo), c)
        return out

    def __repr__(self) -> str:
        if not self._t:
            return "0"
        return " + ".join(f"{Fraction(c, 2)}*{{{x}}}" for x, c in self._t.items())


def bloch_delta(b: BlochElement) -> WedgeElement:
    """{x} -> (1 - x) ^ x."""
    out = WedgeElement()
    for x, c in b.terms():
        if _is_number(x):
            out = out + wedge(Const(Fraction(1 - x)), Const(Fraction(x)), c)
        else:
            out = out + wedge(OneMinus(x), x, c)
    return out


def delta_value(b: BlochElement, assignment=None, torsion: TorsionMode = "keep") -> WedgeValue:
    return evaluate_wedge(bloch_delta(b), assignment or {}, torsion)


# -- cross-ratios and five-term relations --------------------------------------

INF = "inf"


def _homog(s) -> tuple[Fraction, Fraction]:
    if s == INF or s is None:
        return (Fraction(1), Fraction(0))
    if isinstance(s, tuple):
        return (Fraction(s[0]), Fraction(s[1]))
    return (Fraction(s), Fraction(1))


def _d(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def cross_ratio(s1, s2, s3, s4) -> Fraction:
    """(s1-s2)(s3-s4) / ((s1-s4)(s2-s3)) on the projective line; 'inf' allowed."""
    p = [_homog(s) for s in (s1, s2, s3, s4)]
    pairs = [_d(p[a], p[b]) for a, b in itertools.combinations(range(4), 2)]
    if any(x == 0 for x in pairs):
        raise ValueError("cross-ratio needs four distinct points")
    return _d(p[0], p[1]) * _d(p[2], p[3]) / (_d(p[0], p[3]) * _d(p[1], p[2]))


def cross_ratio_complex(s1, s2, s3, s4) -> complex:
    s = [complex(x) for x in (s1, s2, s3, s4)]
    return (s[0] - s[1]) * (s[2] - s[3]) / ((s[0] - s[3]) * (s[1] - s[2]))


def five_term(*points) -> BlochElement:
    """sum over i in Z/5 of {-r(s_i, s_{i+1}, s_{i+2}, s_{i+3})}."""
    if len(points) != 5:
        raise ValueError("five points required")
    exact = all(not isinstance(p, (complex, float)) for p in points)
    out = BlochElement()
    for i in range(5):
        quad = [points[(i + k) % 5] for k in range(4)]
        r = cross_ratio(*quad) if exact else cross_ratio_complex(*quad)
        out = out + BlochElement.of(-r)
    return out


# -- C^(1) checks ------------------------------------------------------------

def sl2_r2(cfg) -> Monomial:
    """r2 = -D12 D34 / (D14 D23) as a monomial in minors of a 4-flag configuration."""
    return Monomial.of({Minor(1, 1, 2): 1, Minor(1, 3, 4): 1, Minor(1, 1, 4): -1, Minor(1, 2, 3): -1}, -1)


def octahedron_rhs(cfg, torsion: TorsionMode = "drop") -> WedgeValue:
    """-1/2 Alt_4 (D(v1 v2) ^ D(v1 v3)), all 24 terms expanded."""
    from .flags_sl import delta

    acc = WedgeValue()
    for perm in itertools.permutations(range(4)):
        sign = _perm_sign(perm)
        x = delta(cfg[perm[0]], cfg[perm[1]], 1)
        y = delta(cfg[perm[0]], cfg[perm[2]], 1)
        acc.add_wedge(x, y, Fraction(-sign, 2))
    return acc.finalize(torsion)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for a, b in itertools.combinations(range(len(perm)), 2):
        if perm[a] > perm[b]:
            sign = -sign
    return sign


@dataclass
class CheckReport:
    name: str
    passed: bool
    trials: int = 0
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(self.details)})" if self.details else ""
        return f"{status} {self.name} [{self.trials} trials]{extra}"


@lru_cache(maxsize=None)
def conf4_path(series: str, rank: int, word: tuple[int, ...], max_depth: int = 12, seed: int = 7):
    """The flip path from c24 to c13 together with both seeds (SL types only)."""
    from .cluster_seed import conf4_seeds, find_mutation_path
    from .flags_sl import ConfigEvaluator, random_config
    from .root_system import WeylWord, cartan_data

    cd = cartan_data(series, rank)
    seeds = conf4_seeds(cd, WeylWord(word))
    rng = random.Random(seed)
    evs = [ConfigEvaluator(random_config(rank + 1, 4, rng, bound=30)) for _ in range(2)]
    path = find_mutation_path(seeds.c24, seeds.c13, max_depth, evs)
    return seeds, path


def c1_from_path(path) -> BlochElement:
    from .cluster_seed import c1_element
    return c1_element(path)


def c1_conf4_check(cd, word, trials: int = 20, seed: int = 0,
                   torsion: TorsionMode = "drop", max_depth: int = 12) -> CheckReport:
    """delta(C1) = W_c13 - W_c24 along the flip path (plus the octahedron identity for SL2)."""
    from .flags_sl import ConfigEvaluator, random_config

    if cd.series != "A":
        raise ValueError("concrete checks are available for SL_n only")
    n = cd.rank + 1
    seeds, path = conf4_path(cd.series, cd.rank, tuple(word.letters), max_depth)
    rep = CheckReport(f"C1 coherence SL{n}", True)
    if path is None:
        rep.passed = False
        rep.details.append(f"no mutation path within depth {max_depth}")
        return rep
    rep.details.append(f"path length {len(path)}: {','.join(path.vertices)}")
    c1 = c1_from_path(path)
    dw = seeds.c13.w_element() - seeds.c24.w_element()
    rng = random.Random(seed)
    for _ in range(trials):
        cfg = random_config(n, 4, rng)
        ev = ConfigEvaluator(cfg)
        lhs = evaluate_wedge(bloch_delta(c1), ev, torsion)
        rhs = evaluate_wedge(dw, ev, torsion)
        rep.trials += 1
        if lhs != rhs:
            rep.passed = False
            rep.details.append(f"mismatch: {lhs - rhs}")
            break
        if n == 2 and evaluate_wedge(bloch_delta(BlochElement.of(sl2_r2(cfg))), ev, torsion) != octahedron_rhs(cfg, torsion):
            rep.passed = False
            rep.details.append("octahedron identity failed")
            break
    rep.details.append(f"torsion={torsion}")
    return rep


def s4_sign_check(trials: int = 20, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """D(C1(sigma . config)) = sign(sigma) D(C1(config)) on SL2, generators of S4."""
    from .dilog import bloch_wigner, cross_ratio_vectors

    gens = {"id": (0, 1, 2, 3), "(12)": (1, 0, 2, 3), "(23)": (0, 2, 1, 3),
            "(34)": (0, 1, 3, 2), "(1234)": (1, 2, 3, 0)}
    rng = random.Random(seed)
    rep = CheckReport("S4 sign behaviour of D(C1)", True)
    for _ in range(trials):
        vs = [(complex(rng.gauss(0, 1), rng.gauss(0, 1)), complex(rng.gauss(0, 1), rng.gauss(0, 1)))
              for _ in range(4)]
        base = bloch_wigner(cross_ratio_vectors(vs))
        for name, perm in gens.items():
            val = bloch_wigner(cross_ratio_vectors([vs[p] for p in perm]))
            if abs(val - _perm_sign(perm) * base) > tol:
                rep.passed = False
                rep.details.append(f"{name}: {val} vs {_perm_sign(perm) * base}")
        rep.trials += 1
    return rep


# -- surfaces and 3-complexes -----------------------------------------------------

@dataclass(frozen=True)
class TriangulatedSurface:
    """Counterclockwise vertex triples; vertex ids index the flag configuration (1-based)."""
    triangles: tuple[tuple[int, int, int], ...]

    def oriented_edges(self) -> dict[frozenset, list[tuple[int, int]]]:
        out: dict[frozenset, list[tuple[int, int]]] = {}
        for a, b, c in self.triangles:
            for e in ((a, b), (b, c), (c, a)):
                out.setdefault(frozenset(e), []).append(e)
        return out

    def validate(self) -> None:
        for key, uses in self.oriented_edges().items():
            if len(uses) > 2:
                raise ValueError(f"edge {sorted(key)} is used {len(uses)} times")
            if len(uses) == 2 and uses[0] == uses[1]:
                raise ValueError(f"edge {sorted(key)} is glued without reversing orientation")

    def interior_edges(self) -> list[tuple[int, int]]:
        return [tuple(sorted(k)) for k, u in self.oriented_edges().items() if len(u) == 2]


def surface_w_element(cd, word, surf: TriangulatedSurface) -> WedgeElement:
    from .cluster_seed import triangle_seed

    surf.validate()
    out = WedgeElement()
    for tri in surf.triangles:
        out = out + triangle_seed(cd, word, tri).w_element()
    return out


def surface_edge_residues(cd, word, surf: TriangulatedSurface, trials: int = 5,
                          seed: int = 0) -> dict:
    """Residue of the surface element along each interior-edge minor, sampled on its divisor."""
    from .flags_sl import divisor_sample
    from .k2_wedge import tame_symbol_formal

    w = surface_w_element(cd, word, surf)
    labels = sorted(w.labels(), key=str)
    nflags = max(max(t) for t in surf.triangles)
    rng = random.Random(seed)
    out = {}
    for a, b in surf.interior_edges():
        for lab in labels:
            if isinstance(lab, Minor) and {lab.a, lab.b} == {a, b}:
                mono = tame_symbol_formal(w, lab)
                pts = divisor_sample(labels, labels.index(lab), cd.rank + 1, nflags, trials, rng)
                out[lab] = (mono, [evaluate(mono, pt) for pt in pts])
    return out


@dataclass(frozen=True)
class Triangulated3Complex:
    """Tetrahedra as vertex quadruples with an orientation sign."""
    tetrahedra: tuple[tuple[tuple[int, int, int, int], int], ...]

    def faces(self) -> dict[tuple[int, int, int], list[int]]:
        out: dict[tuple[int, int, int], list[int]] = {}
        for quad, eps in self.tetrahedra:
            order = sorted(range(4), key=lambda k: quad[k])
            sgn = eps * _perm_sign(order)
            q = sorted(quad)
            for i in range(4):
                face = tuple(q[:i] + q[i + 1:])
                out.setdefault(face, []).append(sgn * (-1) ** i)
        return out

    def validate(self) -> None:
        for face, signs in self.faces().items():
            if len(signs) > 2:
                raise ValueError(f"face {face} is shared by {len(signs)} tetrahedra")
            if len(signs) == 2 and signs[0] == signs[1]:
                raise ValueError(f"face {face} is glued with inconsistent orientation")

    def boundary(self) -> list[tuple[tuple[int, int, int], int]]:
        return [(f, sum(s)) for f, s in sorted(self.faces().items()) if sum(s)]


def tetra_c1(cd, word, quad: Sequence[int], ev_for) -> BlochElement:
    """Numeric C^(1) of one tetrahedron with ascending vertex ids."""
    if cd.rank == 1:
        return BlochElement.of(evaluate(sl2_r2(None), ev_for(quad)))
    seeds, path = conf4_path(cd.series, cd.rank, tuple(word.letters))
    if path is None:
        raise RuntimeError("no flip path available")
    return c1_from_path(path).evaluate(ev_for(quad))


def motivic_volume(cd, word, m3: Triangulated3Complex, cfg) -> BlochElement:
    """sum over tetrahedra of eps_T C^(1)(flags at the vertices)."""
    from .flags_sl import ConfigEvaluator

    m3.validate()

    def ev_for(quad):
        return ConfigEvaluator(tuple(cfg[v - 1] for v in quad))

    out = BlochElement()
    for quad, eps in m3.tetrahedra:
        order = sorted(range(4), key=lambda k: quad[k])
        sgn = eps * _perm_sign(order)
        out = out + tetra_c1(cd, word, sorted(quad), ev_for).scale(sgn)
    return out


def boundary_w_value(cd, word, m3: Triangulated3Complex, cfg, torsion: TorsionMode = "drop") -> WedgeValue:
    from .cluster_seed import triangle_seed
    from .flags_sl import ConfigEvaluator

    acc = WedgeValue()
    for face, sgn in m3.boundary():
        w = triangle_seed(cd, word, (1, 2, 3)).w_element()
        val = evaluate_wedge(w, ConfigEvaluator(tuple(cfg[v - 1] for v in face)), torsion, allow_half=True)
        for (g, h), c in val.items():
            acc.add(g, h, sgn * c)
    return acc.finalize(torsion, allow_half=True)


def numeric_volume_element(m3: Triangulated3Complex, vectors: Mapping[int, Sequence[complex]]) -> BlochElement:
    """SL2 motivic volume from complex vectors: sum of eps_T {r2} with r2 computed numerically."""
    from .dilog import cross_ratio_vectors

    m3.validate()
    out = BlochElement()
    for quad, eps in m3.tetrahedra:
        order = sorted(range(4), key=lambda k: quad[k])
        sgn = eps * _perm_sign(order)
        vs = [tuple(complex(x) for x in vectors[v]) for v in sorted(quad)]
        out = out + BlochElement.of(cross_ratio_vectors(vs), coeff=sgn)
    return out
