"""The acceptance suite: eleven checks, each returning a timed report."""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import sympy

from .bd_complex import killing_verification
from .bloch import (BlochElement, CheckReport, TriangulatedSurface, Triangulated3Complex, bloch_delta,
                    boundary_w_value, c1_conf4_check, delta_value, five_term, motivic_volume,
                    octahedron_rhs, s4_sign_check, sl2_r2, surface_edge_residues)
from .cluster_seed import c2_element, conf4_seeds, steinberg_delta, triangle_seed
from .dilog import bloch_wigner, li2, volume_real
from .flags_sl import ConfigEvaluator, DecoratedFlag, random_config
from .k2_wedge import TorsionMode, WedgeElement, evaluate_wedge, residue_match_c3
from .labels import Minor, evaluate
from .root_system import cartan_data, longest_word


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    limit: float  # seconds
    run: Callable[..., CheckReport]


def clausen_oracle(theta: float, terms: int = 40) -> float:
    """Cl2(theta) = theta - theta log|theta| + sum |B_2k| theta^(2k+1) / (2k (2k+1)!), |theta| < 2 pi."""
    out = theta - theta * math.log(abs(theta))
    for k in range(1, terms + 1):
        b = abs(sympy.bernoulli(2 * k))
        out += float(b) * theta ** (2 * k + 1) / (2 * k * math.factorial(2 * k + 1))
    return out


def _sl2_config(rng: random.Random, count: int, bound: int = 30):
    return random_config(2, count, rng, bound)


def _rational_points(rng: random.Random, count: int) -> list[Fraction]:
    while True:
        pts = [Fraction(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 10 ** 4)) for _ in range(count)]
        if len(set(pts)) == count:
            return pts


def check_structure(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    cd = cartan_data("A", 1)
    d12, d13, d23 = Minor(1, 1, 2), Minor(1, 1, 3), Minor(1, 2, 3)
    expected = WedgeElement.from_terms([(d12, d13, 1), (d13, d23, 1), (d23, d12, 1)])
    got = c2_element(cd, longest_word(cd))
    rep = CheckReport("SL2 structural match of C2", got == expected, 1)
    rep.details.append(f"W = {got}")
    return rep


def check_octahedron(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("octahedron identity", True)
    for _ in range(trials or 100):
        cfg = _sl2_config(rng, 4)
        ev = ConfigEvaluator(cfg)
        lhs = evaluate_wedge(bloch_delta(BlochElement.of(sl2_r2(cfg))), ev, torsion)
        rhs = octahedron_rhs(cfg, torsion)
        rep.trials += 1
        if lhs != rhs:
            rep.passed = False
            rep.details.append(f"residual {lhs - rhs}")
            break
    rep.details.append(f"torsion={torsion}")
    return rep


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def check_exchange(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    """The SL3 two-term identity, and the mutated centre against det of the dual flags."""
    rng = random.Random(seed)
    cd = cartan_data("A", 2)
    s = triangle_seed(cd, longest_word(cd))
    k = s.quiver.unfrozen()[0]
    from .cluster_seed import a_mutation
    new = a_mutation(s, k).labels[k]
    rep = CheckReport("SL3 exchange relation", True)
    while rep.trials < (trials or 100):
        cfg = random_config(3, 3, rng)
        (e1, e2), (f1, f2), (g1, g2) = (F.vectors for F in cfg)
        if _det3(e1, f1, g1) == 0:
            continue
        dual = _det3(_cross(e1, e2), _cross(f1, f2), _cross(g1, g2))
        lhs = dual * _det3(e1, f1, g1)
        rhs = (_det3(e1, e2, f1) * _det3(f1, f2, g1) * _det3(g1, g2, e1)
               + _det3(e1, e2, g1) * _det3(f1, f2, e1) * _det3(g1, g2, f1))
        rep.trials += 1
        if lhs != rhs:
            rep.passed = False
            rep.details.append(f"determinant identity: {lhs} != {rhs}")
            break
        mutated = evaluate(new, ConfigEvaluator(cfg))
        if abs(mutated) != abs(dual):
            rep.passed = False
            rep.details.append(f"mutated centre {mutated} vs dual determinant {dual}")
            break
    return rep


def _steinberg_trials(s, k, n, count, trials, rng, torsion) -> tuple[int, str]:
    diff, st, _ = steinberg_delta(s, k)
    done = 0
    while done < trials:
        ev = ConfigEvaluator(random_config(n, count, rng, bound=30))
        try:
            val = evaluate_wedge(diff - st, ev, torsion)
        except ZeroDivisionError:
            continue
        done += 1
        if not val.is_zero():
            return done, f"residual {val}"
    return done, ""


def check_steinberg(seed: int = 0, torsion: TorsionMode = "keep", trials: int | None = None) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("Steinberg mutation identity", True)
    a1, a2 = cartan_data("A", 1), cartan_data("A", 2)
    cases = [("SL2 Conf4 flip", conf4_seeds(a1, longest_word(a1)).c24, 2, 4),
             ("A2 triangle centre", triangle_seed(a2, longest_word(a2)), 3, 3)]
    for name, s, n, count in cases:
        k = s.quiver.unfrozen()[0]
        done, err = _steinberg_trials(s, k, n, count, trials or 50, rng, torsion)
        rep.trials += done
        rep.details.append(f"{name} at {s.quiver.vertices[k].id}: {err or 'zero'}")
        rep.passed &= not err
    rep.details.append(f"torsion={torsion}")
    return rep


def check_residues(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    rep = CheckReport("residues against C3", True)
    for r in (1, 2):
        res = residue_match_c3(cartan_data("A", r), unfrozen_points=trials or 20, seed=seed)
        rep.trials += sum(v.points for v in res.vertices)
        rep.passed &= res.passed
        counts = {}
        for v in res.vertices:
            counts[v.status] = counts.get(v.status, 0) + 1
        rep.details.append(f"A{r}: " + ", ".join(f"{c} {k}" for k, c in sorted(counts.items())))
        rep.passed &= counts.get("trivial", 0) == 0  # unfrozen residues must be -1
    return rep


KILLING_TYPES = (("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("F", 4), ("G", 2))


def check_killing(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    rep = CheckReport("Killing normalization", True)
    for s, r in KILLING_TYPES:
        k = killing_verification(cartan_data(s, r), trials=trials or 50, seed=seed)
        rep.trials += 1
        rep.passed &= k.passed
        if not k.passed:
            rep.details.append(k.line())
    rep.details.append(f"{len(KILLING_TYPES)} types")
    return rep


def check_bloch(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    """Five-term relation exactly and numerically, Li2(1), D(e^{i pi/3})."""
    rng = random.Random(seed)
    rep = CheckReport("Bloch five-term and dilogarithm values", True)
    count = trials or 100
    bad = 0
    for _ in range(count):
        if not delta_value(five_term(*_rational_points(rng, 5)), torsion=torsion).is_zero():
            bad += 1
    worst = 0.0
    for _ in range(count):
        pts = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(5)]
        worst = max(worst, abs(volume_real(five_term(*pts))))
    li = abs(li2(1) - math.pi ** 2 / 6)
    d = abs(bloch_wigner(cmath.exp(1j * math.pi / 3)) - clausen_oracle(math.pi / 3))
    rep.trials = 2 * count
    rep.passed = bad == 0 and worst <= 1e-10 and li <= 1e-12 and d <= 1e-10
    rep.details += [f"delta nonzero on {bad}/{count} (torsion={torsion})", f"max |sum D| {worst:.1e}",
                    f"|Li2(1) - pi^2/6| {li:.1e}", f"|D(e^(i pi/3)) - Cl2(pi/3)| {d:.1e}"]
    return rep


def check_coherence(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    rep = CheckReport("C1 coherence", True)
    for r in (1, 2):
        cd = cartan_data("A", r)
        sub = c1_conf4_check(cd, longest_word(cd), trials=trials or 50, seed=seed, torsion=torsion)
        rep.trials += sub.trials
        rep.passed &= sub.passed
        rep.details.append(f"SL{r + 1}: " + "; ".join(sub.details))
    return rep


SQUARE = TriangulatedSurface(((1, 2, 3), (1, 3, 4)))
TWO_TETRA = Triangulated3Complex((((1, 2, 3, 4), 1), ((1, 2, 3, 5), -1)))
CLOSED_DOUBLE = Triangulated3Complex((((1, 2, 3, 4), 1), ((1, 2, 3, 4), -1)))
SPHERE = Triangulated3Complex(tuple((tuple(v for v in range(1, 6) if v != i), (-1) ** i) for i in range(1, 6)))


def check_surface(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    rng = random.Random(seed)
    cd = cartan_data("A", 1)
    w = longest_word(cd)
    rep = CheckReport("surface and 3-complex identities", True)
    res = surface_edge_residues(cd, w, SQUARE, trials=5, seed=seed)
    vals = {v for _, pts in res.values() for v in pts}
    rep.passed &= bool(res) and vals <= {1, -1}
    rep.details.append(f"interior residues {sorted(str(v) for v in vals)}")
    for name, m3, count in (("two tetrahedra", TWO_TETRA, 5), ("closed double", CLOSED_DOUBLE, 4),
                            ("boundary of 4-simplex", SPHERE, 5)):
        ok = True
        for _ in range(trials or 5):
            cfg = _sl2_config(rng, count)
            mv = motivic_volume(cd, w, m3, cfg)
            lhs = delta_value(mv, torsion=torsion)
            rhs = boundary_w_value(cd, w, m3, cfg, torsion)
            ok &= lhs == rhs and (bool(m3.boundary()) or lhs.is_zero())
            rep.trials += 1
        rep.passed &= ok
        rep.details.append(f"{name}: {'ok' if ok else 'mismatch'}")
    return rep


def check_volume(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    b = BlochElement.of(cmath.exp(1j * math.pi / 3), coeff=2)
    v = volume_real(b)
    ref = 2 * clausen_oracle(math.pi / 3)
    rep = CheckReport("volume of 2{e^(i pi/3)}", abs(v - ref) <= 1e-9, 1)
    rep.details.append(f"{v:.12f} vs {ref:.12f}")
    return rep


def check_s4(seed: int = 0, torsion: TorsionMode = "drop", trials: int | None = None) -> CheckReport:
    return s4_sign_check(trials=trials or 20, seed=seed)


CRITERIA: tuple[Criterion, ...] = (
    Criterion("structure", "SL2 structural match", 1, check_structure),
    Criterion("octahedron", "octahedron identity", 5, check_octahedron),
    Criterion("exchange", "SL3 exchange relation", 5, check_exchange),
    Criterion("steinberg", "Steinberg mutation identity", 10, lambda s, t, n=None: check_steinberg(s, trials=n)),
    Criterion("residue", "residue theorem", 30, check_residues),
    Criterion("killing", "Killing normalization", 5, check_killing),
    Criterion("bloch", "Bloch five-term", 10, check_bloch),
    Criterion("coherence", "C1 coherence", 60, check_coherence),
    Criterion("surface", "surface and 3-complex identities", 10, check_surface),
    Criterion("volume", "volume cross-check", 1, check_volume),
    Criterion("s4", "S4 sign behaviour", 5, check_s4),
)


@dataclass
class Outcome:
    index: int
    criterion: Criterion
    report: CheckReport
    seconds: float

    @property
    def passed(self) -> bool:
        return self.report.passed and self.seconds <= self.criterion.limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "; ".join(self.report.details)
        slow = "" if self.seconds <= self.criterion.limit else f" over the {self.criterion.limit:g}s limit"
        return (f"[{self.index:2d}] {status} {self.criterion.key}: {self.criterion.title} "
                f"({self.report.trials} trials, {self.seconds:.2f}s{slow}) {extra}").rstrip()


def run_criterion(index: int, seed: int = 0, torsion: TorsionMode = "drop",
                  trials: int | None = None) -> Outcome:
    crit = CRITERIA[index - 1]
    t = time.perf_counter()
    rep = crit.run(seed, torsion, trials)
    return Outcome(index, crit, rep, time.perf_counter() - t)


def run_suite(only: set[str] | None = None, seed: int = 0, torsion: TorsionMode = "drop",
              trials: int | None = None) -> list[Outcome]:
    out = []
    for i, crit in enumerate(CRITERIA, start=1):
        if only and crit.key not in only and str(i) not in only:
            continue
        out.append(run_criterion(i, seed, torsion, trials))
    return out
