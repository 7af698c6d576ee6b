"""Seeds: quivers with coordinate labels, A-mutation, W elements and C^(1) paths."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Sequence

from .k2_wedge import WedgeElement, steinberg_element
from .labels import ChainMinor, Exchanged, Expr, Minor, Monomial, evaluate
from .quiver import GluingPlan, Quiver, amalgamate, build_triangle_quiver, level_layout, mutate_quiver
from .root_system import CartanData, WeylWord, root_coroot_chains, simple_index, star_involution


@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    labels: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.quiver):
            raise ValueError("one label per vertex required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")

    def index(self, key: int | str | Expr) -> int:
        if isinstance(key, int):
            return key
        if isinstance(key, str):
            return self.quiver.index(key)
        return self.labels.index(key)

    def label(self, key: int | str) -> Expr:
        return self.labels[self.index(key)]

    def w_element(self) -> WedgeElement:
        """W = 1/2 sum d_i eps_ij A_i ^ A_j, i.e. sum over i < j of d_i eps_ij."""
        q = self.quiver
        terms: dict = {}
        for a in range(len(q)):
            for b in range(a + 1, len(q)):
                c2 = q.vertices[a].multiplier * q.exchange2[a][b]
                if c2:
                    terms[(self.labels[a], self.labels[b])] = c2
        return WedgeElement(terms)

    def to_json(self) -> str:
        doc = json.loads(self.quiver.to_json())
        doc["labels"] = [str(x) for x in self.labels]
        return json.dumps(doc, indent=1)


def _row(s: Seed, k: int) -> list[int]:
    q = s.quiver
    if q.vertices[k].frozen:
        raise ValueError(f"vertex {q.vertices[k].id} is frozen")
    row = []
    for j in range(len(q)):
        e2 = q.exchange2[k][j]
        if e2 % 2:
            raise AssertionError("half-integer exponent at an unfrozen vertex")
        row.append(e2 // 2)
    return row


def xhat(s: Seed, key: int | str) -> Monomial:
    """X_k = prod_j A_j^{-eps_kj}, so that W' - W = d_k (1 + X_k) ^ X_k."""
    k = s.index(key)
    return Monomial.of({s.labels[j]: -e for j, e in enumerate(_row(s, k)) if e})


def exchange_monomials(s: Seed, k: int) -> tuple[Monomial, Monomial]:
    row = _row(s, k)
    plus = Monomial.of({s.labels[j]: e for j, e in enumerate(row) if e > 0})
    minus = Monomial.of({s.labels[j]: -e for j, e in enumerate(row) if e < 0})
    return plus, minus


def a_mutation(s: Seed, key: int | str) -> Seed:
    k = s.index(key)
    plus, minus = exchange_monomials(s, k)
    labels = list(s.labels)
    labels[k] = Exchanged(s.labels[k], plus, minus)
    return Seed(mutate_quiver(s.quiver, k), tuple(labels))


def steinberg_delta(s: Seed, key: int | str) -> tuple[WedgeElement, WedgeElement, tuple[int, Monomial]]:
    """(W' - W, d_k (1+X_k)^X_k, Bloch term (d_k, -X_k))."""
    k = s.index(key)
    d = s.quiver.vertices[k].multiplier
    x = xhat(s, k)
    diff = a_mutation(s, k).w_element() - s.w_element()
    return diff, steinberg_element(d, x), (d, -x)


# -- triangle and rectangle seeds ---------------------------------------------

def triangle_labels(cd: CartanData, word: WeylWord, q: Quiver,
                    triple: tuple[int, int, int]) -> tuple[Expr, ...]:
    """Coordinates for a counterclockwise triangle (t1, t2, t3).

    The roles are F1 = t1, F3 = t2, F2 = t3; interior level vertices are minors
    against the chain from F2 to F3.
    """
    f1, f3, f2 = triple
    layout = level_layout(cd, word)
    chain = root_coroot_chains(cd, word)
    star = star_involution(cd)
    out: list[Expr] = []
    for v in q.vertices:
        if v.id.startswith("e"):
            j = simple_index(chain.betas[int(v.id[1:]) - 1])
            out.append(Minor(star[j], f3, f2))
            continue
        i, c = (int(x) for x in v.id.split(":"))
        if c == 0:
            out.append(Minor(i, f1, f2))
        elif c == len(layout[i]):
            out.append(Minor(i, f1, f3))
        else:
            out.append(ChainMinor(word.letters, layout[i][c - 1], f1, f2, f3))
    return tuple(out)


def triangle_seed(cd: CartanData, word: WeylWord, triple: tuple[int, int, int] = (1, 2, 3)) -> Seed:
    q = build_triangle_quiver(cd, word)
    return Seed(q, triangle_labels(cd, word, q, triple))


def c2_element(cd: CartanData, word: WeylWord) -> WedgeElement:
    return triangle_seed(cd, word).w_element()


def _prefixed(s: Seed, prefix: str) -> Seed:
    vs = tuple(replace(v, id=f"{prefix}{v.id}") for v in s.quiver.vertices)
    return Seed(Quiver(vs, s.quiver.exchange2), s.labels)


def glue_seeds(a: Seed, b: Seed) -> Seed:
    """Glue two seeds along vertices carrying equal labels; those become unfrozen."""
    a, b = _prefixed(a, "a."), _prefixed(b, "b.")
    where = {lab: a.quiver.vertices[k].id for k, lab in enumerate(a.labels)}
    mp: dict[str, str | None] = {}
    shared: set[str] = set()
    for k, lab in enumerate(b.labels):
        if lab in where:
            mp[b.quiver.vertices[k].id] = where[lab]
            shared.add(where[lab])
    # boundary decorations follow the twisted shift, so only multipliers must agree
    plan = GluingPlan(({}, mp), unfrozen=frozenset(shared), check_decoration=False)
    q = amalgamate([a.quiver, b.quiver], plan)
    labels = list(a.labels) + [lab for lab in b.labels if lab not in where]
    return Seed(q, tuple(labels))


class Conf4Seeds(NamedTuple):
    c24: Seed  # triangles (1,2,3), (1,3,4); diagonal 13 unfrozen
    c13: Seed  # triangles (2,3,4), (1,2,4); diagonal 24 unfrozen


def conf4_seeds(cd: CartanData, word: WeylWord) -> Conf4Seeds:
    c24 = glue_seeds(triangle_seed(cd, word, (1, 2, 3)), triangle_seed(cd, word, (1, 3, 4)))
    c13 = glue_seeds(triangle_seed(cd, word, (2, 3, 4)), triangle_seed(cd, word, (1, 2, 4)))
    return Conf4Seeds(c24, c13)


# -- mutation paths -------------------------------------------------------------

@dataclass(frozen=True)
class MutationStep:
    seed: Seed
    vertex: int
    xhat: Monomial


@dataclass(frozen=True)
class MutationPath:
    steps: tuple[MutationStep, ...]
    final: Seed
    matching: tuple[int, ...] = ()  # final vertex index -> target vertex index

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(st.seed.quiver.vertices[st.vertex].id for st in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def replay(s: Seed, vertices: Sequence[int | str]) -> MutationPath:
    steps = []
    for v in vertices:
        k = s.index(v)
        steps.append(MutationStep(s, k, xhat(s, k)))
        s = a_mutation(s, k)
    return MutationPath(tuple(steps), s)


Evaluator = Callable[[Expr], Fraction]


def _values(s: Seed, ev: Evaluator) -> tuple[Fraction, ...]:
    memo: dict = {}
    return tuple(Fraction(evaluate(lab, ev, memo)) for lab in s.labels)


def _mutate_values(q: Quiver, vals: tuple, k: int) -> tuple:
    plus, minus = Fraction(1), Fraction(1)
    for j in range(len(q)):
        e2 = q.exchange2[k][j]
        if e2 > 0:
            plus *= vals[j] ** (e2 // 2)
        elif e2 < 0:
            minus *= vals[j] ** (-e2 // 2)
    out = list(vals)
    out[k] = (plus + minus) / vals[k]
    return tuple(out)


def _match(q: Quiver, vals: Sequence, tq: Quiver, tvals: Sequence) -> tuple[int, ...] | None:
    where = {v: k for k, v in enumerate(tvals)}
    if len(where) != len(tvals) or sorted(vals) != sorted(tvals):
        return None
    perm = tuple(where[v] for v in vals)
    for a in range(len(q)):
        va, ta = q.vertices[a], tq.vertices[perm[a]]
        if va.multiplier != ta.multiplier or va.frozen != ta.frozen:
            return None
        for b in range(len(q)):
            if q.exchange2[a][b] != tq.exchange2[perm[a]][perm[b]]:
                return None
    return perm


def find_mutation_path(src: Seed, dst: Seed, max_depth: int,
                       evaluators: Sequence[Evaluator]) -> MutationPath | None:
    """Breadth-first search over unfrozen mutations from src to dst.

    Seeds are compared by label values under the first evaluator plus a
    decorated-quiver isomorphism; a hit is re-checked with the others.
    """
    if sorted(v.multiplier for v in src.quiver.vertices) != sorted(v.multiplier for v in dst.quiver.vertices):
        return None
    ev0 = evaluators[0]
    tvals = _values(dst, ev0)
    start = _values(src, ev0)
    queue = deque([(src.quiver, start, ())])
    seen = {frozenset(start)}
    while queue:
        q, vals, path = queue.popleft()
        perm = _match(q, vals, dst.quiver, tvals)
        if perm is not None:
            found = replay(src, path)
            if all(_match(found.final.quiver, _values(found.final, ev), dst.quiver, _values(dst, ev)) == perm
                   for ev in evaluators[1:]):
                return replace(found, matching=perm)
        if len(path) >= max_depth:
            continue
        for k in q.unfrozen():
            if path and path[-1] == k:
                continue
            nvals = _mutate_values(q, vals, k)
            key = frozenset(nvals)
            if key in seen:
                continue
            seen.add(key)
            queue.append((mutate_quiver(q, k), nvals, path + (k,)))
    return None


def c1_element(path: MutationPath):
    """C^(1) = sum_k d_k {-X_k} over the mutation steps."""
    from .bloch import BlochElement

    out = BlochElement()
    for st in path.steps:
        d = st.seed.quiver.vertices[st.vertex].multiplier
        out = out + BlochElement({-st.xhat: 2 * d})
    return out
