"""Decorated flags for SL_n over Q: minors, Bruhat invariants and flag chains.

A decorated flag is stored as its first n-1 vectors. Pairs are compared via
g = x^{-1} y where x, y complete the vectors to unimodular matrices, and
g = u h nbar_w v is the Bruhat decomposition with h to the left of nbar_w.
``nbar_w`` is the product of the lifts [[0,-1],[1,0]] along a reduced word.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .labels import ChainMinor, Expr, Minor, atoms, evaluate

Matrix = list[list[Fraction]]


# -- exact linear algebra ----------------------------------------------------

def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n, sign, out = len(a), 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + ident for row, ident in zip(m, identity(n))]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def columns(m: Matrix) -> list[tuple[Fraction, ...]]:
    return [tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0]))]


def from_columns(cols: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(cols[0])
    return [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(n)]


# -- flags -------------------------------------------------------------------

@dataclass(frozen=True)
class DecoratedFlag:
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = self.n
        if len(self.vectors) != n - 1 or any(len(v) != n for v in self.vectors):
            raise ValueError("a decorated flag in dimension n has n-1 vectors of length n")

    @classmethod
    def of(cls, *vectors: Sequence) -> "DecoratedFlag":
        return cls(tuple(tuple(Fraction(x) for x in v) for v in vectors))

    @property
    def n(self) -> int:
        return len(self.vectors[0]) if self.vectors else 1

    def matrix(self) -> Matrix:
        """Unimodular matrix whose first n-1 columns are the flag vectors."""
        n = self.n
        for j in range(n):
            e = tuple(Fraction(int(k == j)) for k in range(n))
            c = det(from_columns(list(self.vectors) + [e]))
            if c != 0:
                return from_columns(list(self.vectors) + [tuple(x / c for x in e)])
        raise ValueError("flag vectors are linearly dependent")

    def act(self, g: Matrix) -> "DecoratedFlag":
        return DecoratedFlag(tuple(tuple(sum(g[i][k] * v[k] for k in range(len(v))) for i in range(len(g)))
                                   for v in self.vectors))


FlagConfig = tuple[DecoratedFlag, ...]


def flag_from_matrix(m: Matrix) -> DecoratedFlag:
    return DecoratedFlag(tuple(columns(m)[:-1]))


def delta(F: DecoratedFlag, G: DecoratedFlag, i: int) -> Fraction:
    n = F.n
    if G.n != n or not 1 <= i <= n - 1:
        raise ValueError("delta needs flags of equal dimension and 1 <= i <= n-1")
    return det(from_columns(list(F.vectors[:i]) + list(G.vectors[:n - i])))


def is_generic(F: DecoratedFlag, G: DecoratedFlag) -> bool:
    return all(delta(F, G, i) != 0 for i in range(1, F.n))


# -- Bruhat decomposition ----------------------------------------------------

def lift_simple(n: int, i: int) -> Matrix:
    m = identity(n)
    m[i - 1][i - 1] = m[i][i] = Fraction(0)
    m[i - 1][i] = Fraction(-1)
    m[i][i - 1] = Fraction(1)
    return m


def root_unipotent(n: int, i: int, t: Fraction) -> Matrix:
    m = identity(n)
    m[i - 1][i] = Fraction(t)
    return m


def perm_word(perm: Sequence[int]) -> tuple[int, ...]:
    """Reduced word (1-based letters) for a permutation in one-line notation."""
    w = list(perm)
    letters: list[int] = []
    while True:
        i = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
        if i is None:
            return tuple(reversed(letters))
        w[i], w[i + 1] = w[i + 1], w[i]
        letters.append(i + 1)


def lift_perm(perm: Sequence[int]) -> Matrix:
    n = len(perm)
    out = identity(n)
    for i in perm_word(perm):
        out = matmul(out, lift_simple(n, i))
    return out


@dataclass(frozen=True)
class BruhatData:
    perm: tuple[int, ...]  # perm[j] = image of basis index j (0-based)
    h: tuple[Fraction, ...]  # torus diagonal, left convention
    v: tuple[tuple[Fraction, ...], ...]  # right unipotent factor

    @property
    def word(self) -> tuple[int, ...]:
        return perm_word(self.perm)

    def lam(self, k: int) -> Fraction:
        """Fundamental weight Lambda_k evaluated on h."""
        out = Fraction(1)
        for x in self.h[:k]:
            out *= x
        return out

    def h_right(self) -> tuple[Fraction, ...]:
        # h_l nbar_w = nbar_w h_r with h_l = w(h_r)
        return tuple(self.h[self.perm[j]] for j in range(len(self.perm)))


def bruhat_decompose(g: Matrix) -> BruhatData:
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    v = identity(n)
    used: set[int] = set()
    perm = [0] * n
    for j in range(n):
        r = max((r for r in range(n) if r not in used and a[r][j] != 0), default=None)
        if r is None:
            raise ZeroDivisionError("singular matrix")
        used.add(r)
        perm[j] = r
        for c in range(j + 1, n):
            if a[r][c]:
                f = a[r][c] / a[r][j]
                for i in range(n):
                    a[i][c] -= f * a[i][j]
                # v <- E^{-1} v with E = I + f E_{jc}: row j of v gains f * row c
                v[j] = [x + f * y for x, y in zip(v[j], v[c])]
        for r2 in range(r):
            if a[r2][j] and r2 not in used:
                f = a[r2][j] / a[r][j]
                a[r2] = [x - f * y for x, y in zip(a[r2], a[r])]
    nb = lift_perm(perm)
    h = tuple(a[perm[j]][j] / nb[perm[j]][j] for j in range(n))
    hdiag = [Fraction(0)] * n
    for j in range(n):
        hdiag[perm[j]] = h[j]
    return BruhatData(tuple(perm), tuple(hdiag), tuple(tuple(r) for r in v))


def bruhat_invariants(F: DecoratedFlag, G: DecoratedFlag) -> BruhatData:
    return bruhat_decompose(matmul(inverse(F.matrix()), G.matrix()))


# -- flag chains -------------------------------------------------------------

def _apply_perm_to_torus(perm: Sequence[int], h: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * len(h)
    for j, x in enumerate(h):
        out[perm[j]] = x
    return out


def _perm_of_word(n: int, letters: Sequence[int]) -> list[int]:
    """One-line notation of s_{l_1} ... s_{l_k}."""
    perm = list(range(n))
    for i in letters:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return perm


def _diag(h: Sequence[Fraction]) -> Matrix:
    n = len(h)
    return [[h[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def flag_chain(F: DecoratedFlag, G: DecoratedFlag, word: Sequence[int]) -> list[DecoratedFlag]:
    """The chain F = F^0, ..., F^m = G with w(F^k, F^{k-1}) = s_{i_k}.

    The h-distance of step k is allowed only when the coroot attached to
    letter k is simple; the remaining freedom fixes F^0 = F exactly.
    """
    n = F.n
    letters = tuple(word)
    if len(letters) != n * (n - 1) // 2:
        raise ValueError("word must be a reduced word for w0")
    if not is_generic(F, G):
        raise ValueError("flag pair is not generic")
    x = F.matrix()
    g = matmul(inverse(x), G.matrix())

    def run(torus: dict[int, list[Fraction]]) -> list[Matrix]:
        b = g
        mats = [b]
        for k in range(len(letters), 0, -1):
            i = letters[k - 1]
            t = -bruhat_decompose(b).v[i - 1][i]
            step = root_unipotent(n, i, t)
            if k in torus:
                step = matmul(step, _diag(torus[k]))
            b = matmul(matmul(b, step), lift_simple(n, i))
            mats.append(b)
        return mats[::-1]

    base = run({})
    b0 = base[0]
    if any(b0[i][j] != 0 for i in range(n) for j in range(i)):
        raise AssertionError("chain did not reach the Borel subgroup")
    target = [1 / b0[i][i] for i in range(n)]
    # coordinates e_j = Lambda_j(target) along simple coroots
    want = []
    acc = Fraction(1)
    for j in range(n - 1):
        acc *= target[j]
        want.append(acc)
    torus: dict[int, list[Fraction]] = {}
    for k in range(1, len(letters) + 1):
        i = letters[k - 1]
        perm = _perm_of_word(n, letters[:k])
        lo, hi = sorted((perm[i - 1], perm[i]))
        if hi != lo + 1:
            continue
        c = want[lo]
        # w_k(alpha_i^vee(c)) puts c at perm[i-1] and 1/c at perm[i]
        if perm[i - 1] > perm[i]:
            c = 1 / c
        h = [Fraction(1)] * n
        h[i - 1], h[i] = c, 1 / c
        torus[k] = h
    mats = run(torus)
    b0 = mats[0]
    if any(b0[i][j] != (1 if i == j else 0) for i in range(n) for j in range(i + 1)):
        raise AssertionError("flag chain failed to close up")
    inner = [flag_from_matrix(matmul(x, b)) for b in mats[1:-1]]
    return [F] + inner + [G]


def chain_conditions(chain: Sequence[DecoratedFlag], word: Sequence[int],
                     simple_steps: set[int]) -> list[str]:
    """Violations of the chain conditions; empty when the chain is valid."""
    n = chain[0].n
    bad = []
    for k in range(1, len(chain)):
        i = word[k - 1]
        bd = bruhat_invariants(chain[k], chain[k - 1])
        if list(bd.perm) != _perm_of_word(n, [i]):
            bad.append(f"step {k}: relative position is not s_{i}")
            continue
        others = [bd.h[j] for j in range(n) if j not in (i - 1, i)]
        if any(x != 1 for x in others) or bd.h[i - 1] * bd.h[i] != 1:
            bad.append(f"step {k}: h-distance outside alpha_{i}^vee")
        elif k not in simple_steps and bd.h[i - 1] != 1:
            bad.append(f"step {k}: nontrivial h-distance at a non-simple step")
    return bad


# -- evaluation --------------------------------------------------------------

def star_sl(n: int, word: Sequence[int]) -> tuple[int, ...]:
    return tuple(n - i for i in word)


class ConfigEvaluator:
    """Callable atom -> value for a fixed flag configuration (1-based indices)."""

    def __init__(self, cfg: Sequence[DecoratedFlag]):
        self.cfg = tuple(cfg)
        self._chains: dict = {}

    def chain(self, word: tuple[int, ...], b: int, c: int) -> list[DecoratedFlag]:
        key = (word, b, c)
        if key not in self._chains:
            n = self.cfg[0].n
            self._chains[key] = flag_chain(self.cfg[b - 1], self.cfg[c - 1], star_sl(n, word))
        return self._chains[key]

    def __call__(self, atom: Expr) -> Fraction:
        if isinstance(atom, Minor):
            return delta(self.cfg[atom.a - 1], self.cfg[atom.b - 1], atom.i)
        if isinstance(atom, ChainMinor):
            ch = self.chain(atom.word, atom.b, atom.c)
            return delta(self.cfg[atom.a - 1], ch[atom.p], atom.word[atom.p - 1])
        raise TypeError(f"no concrete value for {atom}")


def evaluate_seed(seed, cfg: Sequence[DecoratedFlag]) -> dict:
    ev = ConfigEvaluator(cfg)
    memo: dict = {}
    return {lab: evaluate(lab, ev, memo) for lab in seed.labels}


def random_flag(n: int, rng: random.Random, bound: int = 9) -> DecoratedFlag:
    while True:
        vecs = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n - 1)]
        if _independent(vecs):
            return DecoratedFlag.of(*vecs)


def _independent(vecs) -> bool:
    n = len(vecs[0])
    for j in range(n):
        e = [Fraction(int(k == j)) for k in range(n)]
        if det(from_columns(list(vecs) + [e])) != 0:
            return True
    return False


def random_config(n: int, count: int, rng: random.Random, bound: int = 9,
                  generic: bool = True) -> FlagConfig:
    while True:
        cfg = tuple(random_flag(n, rng, bound) for _ in range(count))
        if not generic or all(is_generic(cfg[a], cfg[b]) and is_generic(cfg[b], cfg[a])
                              for a in range(count) for b in range(a + 1, count)):
            return cfg


def random_unimodular(n: int, rng: random.Random, bound: int = 3) -> Matrix:
    m = identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        f = Fraction(rng.randint(-bound, bound))
        m[i] = [x + f * y for x, y in zip(m[i], m[j])]
    return m


def config_to_json(cfg: Sequence[DecoratedFlag]) -> str:
    doc = [[[[x.numerator, x.denominator] for x in v] for v in F.vectors] for F in cfg]
    return json.dumps({"flags": doc})


def config_from_json(text: str) -> FlagConfig:
    doc = json.loads(text)
    return tuple(DecoratedFlag(tuple(tuple(Fraction(p, q) for p, q in v) for v in F)) for F in doc["flags"])


# -- divisor sampling ----------------------------------------------------------

def _with_coordinate(cfg: FlagConfig, a: int, v: int, c: int, t: Fraction) -> FlagConfig:
    vecs = [list(x) for x in cfg[a].vectors]
    vecs[v][c] = Fraction(t)
    out = list(cfg)
    out[a] = DecoratedFlag.of(*vecs)
    return tuple(out)


def value_on_line(expr: Expr, line: Callable[[Fraction], FlagConfig], t0: Fraction,
                  max_degree: int = 8) -> Fraction:
    """Value of a polynomial label at t0, by interpolation when t0 is singular."""
    try:
        return evaluate(expr, ConfigEvaluator(line(t0)))
    except (ValueError, ZeroDivisionError, AssertionError):
        pass
    pts: list[tuple[Fraction, Fraction]] = []
    t = Fraction(t0) + 1
    while len(pts) < max_degree + 2:
        try:
            pts.append((t, Fraction(evaluate(expr, ConfigEvaluator(line(t))))))
        except (ValueError, ZeroDivisionError, AssertionError):
            pass
        t += Fraction(1, 3)
        if len(pts) >= 3 and _lagrange(pts[:-1], pts[-1][0]) == pts[-1][1]:
            return _lagrange(pts[:-1], Fraction(t0))
    raise ValueError(f"{expr} is not polynomial of degree <= {max_degree} along the line")


def _lagrange(pts, x: Fraction) -> Fraction:
    out = Fraction(0)
    for i, (xi, yi) in enumerate(pts):
        term = yi
        for j, (xj, _) in enumerate(pts):
            if i != j:
                term *= (x - xj) / (xi - xj)
        out += term
    return out


def divisor_sample(labels: Sequence[Expr], k: int, n: int, count: int, trials: int,
                   rng: random.Random, bound: int = 9, max_attempts: int = 200) -> list[dict]:
    """Label values at configurations where labels[k] vanishes and the rest do not.

    One vector coordinate is moved along a line on which the label is affine.
    """
    target = labels[k]
    out: list[dict] = []
    attempts = 0
    while len(out) < trials:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError(f"could not sample the divisor of {target}")
        cfg = random_config(n, count, rng, bound)
        slots = [(a, v, c) for a in range(count) for v in range(n - 1) for c in range(n)]
        rng.shuffle(slots)
        for a, v, c in slots:
            line = (lambda t, a=a, v=v, c=c, base=cfg: _with_coordinate(base, a, v, c, t))
            try:
                f = [Fraction(evaluate(target, ConfigEvaluator(line(Fraction(t))))) for t in (0, 1, 2)]
            except (ValueError, ZeroDivisionError, AssertionError):
                continue
            slope = f[1] - f[0]
            if slope == 0 or f[2] - f[1] != slope:
                continue
            t0 = -f[0] / slope
            try:
                vals = {lab: value_on_line(lab, line, t0) for lab in labels}
            except ValueError:
                continue
            if vals[target] != 0 or any(vals[lab] == 0 for lab in labels if lab != target):
                break
            vals["__config__"] = line(t0)
            out.append(vals)
            break
    return out


# -- finite 2-cocycle ----------------------------------------------------------

def group_2cocycle(g1: Matrix, g2: Matrix, g3: Matrix, base: DecoratedFlag,
                   torsion: str = "drop"):
    from .cluster_seed import triangle_seed
    from .k2_wedge import evaluate_wedge
    from .root_system import cartan_data, longest_word

    cfg = tuple(base.act(g) for g in (g1, g2, g3))
    for a in range(3):
        for b in range(a + 1, 3):
            if not (is_generic(cfg[a], cfg[b]) and is_generic(cfg[b], cfg[a])):
                raise ValueError("orbit triple is not pairwise generic")
    cd = cartan_data("A", base.n - 1)
    seed = triangle_seed(cd, longest_word(cd), (1, 2, 3))
    return evaluate_wedge(seed.w_element(), ConfigEvaluator(cfg), torsion, allow_half=True)
