"""Quivers with frozen vertices and half-integer exchange matrices.

Exchange entries are stored doubled (``exchange2[v][w] = 2 * eps_vw``).
Skew-symmetrizability means ``d_v * eps_vw = -d_w * eps_wv``. A positive
``eps_vw`` is drawn as an arrow v -> w.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .root_system import CartanData, WeylWord, is_reduced, root_coroot_chains, simple_index


@dataclass(frozen=True)
class Vertex:
    id: str
    decoration: int
    frozen: bool
    multiplier: int
    tag: str = ""  # "l", "r", "e", "h" or "" for plain vertices


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[Vertex, ...]
    exchange2: tuple[tuple[int, ...], ...]
    skew_filled: frozenset[tuple[str, str]] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if len(self.exchange2) != n or any(len(row) != n for row in self.exchange2):
            raise ValueError("exchange matrix shape does not match vertex count")
        if len({v.id for v in self.vertices}) != n:
            raise ValueError("duplicate vertex ids")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    def index(self, vid: str) -> int:
        for k, v in enumerate(self.vertices):
            if v.id == vid:
                return k
        raise KeyError(vid)

    def eps(self, a: int, b: int) -> Fraction:
        return Fraction(self.exchange2[a][b], 2)

    def unfrozen(self) -> list[int]:
        return [k for k, v in enumerate(self.vertices) if not v.frozen]

    def check(self) -> None:
        """Raise if skew-symmetrizability or integrality fails."""
        vs, e = self.vertices, self.exchange2
        for a in range(len(vs)):
            if e[a][a] != 0:
                raise ValueError(f"nonzero diagonal at {vs[a].id}")
            for b in range(len(vs)):
                if vs[a].multiplier * e[a][b] != -vs[b].multiplier * e[b][a]:
                    raise ValueError(f"not skew-symmetrizable at ({vs[a].id}, {vs[b].id})")
                if (not vs[a].frozen or not vs[b].frozen) and e[a][b] % 2:
                    raise ValueError(f"half-integer entry at unfrozen pair ({vs[a].id}, {vs[b].id})")

    def to_json(self) -> str:
        doc = {
            "vertices": [
                {"id": v.id, "decoration": v.decoration, "tag": v.tag,
                 "frozen": v.frozen, "multiplier": v.multiplier}
                for v in self.vertices
            ],
            "exchange2": [list(row) for row in self.exchange2],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        doc = json.loads(text)
        vs = tuple(Vertex(d["id"], d["decoration"], d["frozen"], d["multiplier"], d.get("tag", ""))
                   for d in doc["vertices"])
        return cls(vs, tuple(tuple(r) for r in doc["exchange2"]))


def _matrix(n: int) -> list[list[int]]:
    return [[0] * n for _ in range(n)]


def _freeze(m: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in m)


def reorder(q: Quiver, ids: Sequence[str]) -> Quiver:
    perm = [q.index(i) for i in ids]
    if len(perm) != len(q):
        raise ValueError("reorder needs every vertex exactly once")
    e = q.exchange2
    return Quiver(tuple(q.vertices[p] for p in perm),
                  tuple(tuple(e[a][b] for b in perm) for a in perm), q.skew_filled)


def elementary_quiver(cd: CartanData, i: int) -> Quiver:
    """The quiver J(i): vertices I minus {i} plus i_l, i_r, i_e."""
    c, d = cd.cartan, cd.symmetrizers
    others = [j for j in range(1, cd.rank + 1) if j != i]
    vs = [Vertex(f"j{j}", j, True, d[j - 1]) for j in others]
    vs += [Vertex(f"{i}{t}", i, True, d[i - 1], t) for t in "lre"]
    n = len(vs)
    pos = {v.id: k for k, v in enumerate(vs)}
    l, r, e_ = pos[f"{i}l"], pos[f"{i}r"], pos[f"{i}e"]
    m = _matrix(n)
    given: list[tuple[int, int]] = []
    for j in others:
        m[l][pos[f"j{j}"]] = -c[i - 1][j - 1]
        m[r][pos[f"j{j}"]] = c[i - 1][j - 1]
        given += [(l, pos[f"j{j}"]), (r, pos[f"j{j}"])]
    for a, b in ((r, l), (l, e_), (e_, r)):
        m[a][b] = 2
        given.append((a, b))
    filled = set()
    for a, b in given:
        num = -vs[a].multiplier * m[a][b]
        if num % vs[b].multiplier:
            raise AssertionError("skew fill produced a non-half-integer")
        m[b][a] = num // vs[b].multiplier
        if m[b][a]:
            filled.add((vs[b].id, vs[a].id))
    q = Quiver(tuple(vs), _freeze(m), frozenset(filled))
    q.check()
    return q


def auxiliary_quiver(cd: CartanData, word: WeylWord) -> Quiver:
    """The quiver K(i) on the letters of a reduced word for w0."""
    if word.length != cd.num_positive_roots or not is_reduced(cd, word):
        raise ValueError(f"word ({word}) is not a reduced word for w0")
    chain = root_coroot_chains(cd, word)
    m = word.length
    vs = tuple(Vertex(f"k{k + 1}", i, True, cd.symmetrizers[i - 1], "h")
               for k, i in enumerate(word.letters))
    mat = _matrix(m)
    for j in range(m):
        for k in range(m):
            if j != k:
                sgn = 1 if k > j else -1
                mat[j][k] = sgn * cd.pairing(chain.alphas[j], chain.betas[k])
    q = Quiver(vs, _freeze(mat))
    q.check()
    return q


def restrict(q: Quiver, keep: Iterable[int]) -> Quiver:
    keep = list(keep)
    e = q.exchange2
    return Quiver(tuple(q.vertices[k] for k in keep),
                  tuple(tuple(e[a][b] for b in keep) for a in keep))


def h_subquiver(kq: Quiver, chain) -> Quiver:
    """Restriction of K(i) to letters whose coroot beta_k is simple."""
    return restrict(kq, [k for k, b in enumerate(chain.betas) if simple_index(b) is not None])


@dataclass(frozen=True)
class GluingPlan:
    """Per part, a map old vertex id -> new id (None drops the vertex)."""
    maps: tuple[Mapping[str, str | None], ...]
    unfrozen: frozenset[str] = frozenset()
    frozen: frozenset[str] = frozenset()
    check_decoration: bool = True


def amalgamate(parts: Sequence[Quiver], plan: GluingPlan) -> Quiver:
    if len(parts) != len(plan.maps):
        raise ValueError("plan does not match the number of parts")
    merged: dict[str, Vertex] = {}
    order: list[str] = []
    for q, mp in zip(parts, plan.maps):
        for v in q.vertices:
            new = mp.get(v.id, v.id)
            if new is None:
                continue
            if new in merged:
                old = merged[new]
                if old.multiplier != v.multiplier:
                    raise ValueError(f"multiplier mismatch gluing {v.id} into {new}")
                if plan.check_decoration and old.decoration != v.decoration:
                    raise ValueError(f"decoration mismatch gluing {v.id} into {new}")
            else:
                merged[new] = replace(v, id=new)
                order.append(new)
    pos = {vid: k for k, vid in enumerate(order)}
    mat = _matrix(len(order))
    for q, mp in zip(parts, plan.maps):
        for a, va in enumerate(q.vertices):
            na = mp.get(va.id, va.id)
            if na is None:
                continue
            for b, vb in enumerate(q.vertices):
                nb = mp.get(vb.id, vb.id)
                if nb is not None and q.exchange2[a][b]:
                    if na == nb:
                        raise ValueError(f"gluing would create a loop at {na}")
                    mat[pos[na]][pos[nb]] += q.exchange2[a][b]
    vs = []
    for vid in order:
        v = merged[vid]
        if vid in plan.unfrozen:
            v = replace(v, frozen=False)
        elif vid in plan.frozen:
            v = replace(v, frozen=True)
        vs.append(v)
    out = Quiver(tuple(vs), _freeze(mat))
    out.check()
    return out


def level_layout(cd: CartanData, word: WeylWord) -> dict[int, list[int]]:
    """Per level i, the letter positions p (1-based) with i_p = i."""
    out: dict[int, list[int]] = {i: [] for i in range(1, cd.rank + 1)}
    for p, i in enumerate(word.letters, start=1):
        out[i].append(p)
    return out


def build_triangle_quiver(cd: CartanData, word: WeylWord) -> Quiver:
    """Amalgamate J(i_1) * ... * J(i_m) * H(i).

    Level-i vertices get ids ``"i:c"`` (c = 0 leftmost), extra vertices ``"e<k>"``.
    """
    kq = auxiliary_quiver(cd, word)
    chain = root_coroot_chains(cd, word)
    simple = [simple_index(b) is not None for b in chain.betas]
    hq = h_subquiver(kq, chain)
    counter = {i: 0 for i in range(1, cd.rank + 1)}
    maps: list[dict[str, str | None]] = []
    for p, i in enumerate(word.letters, start=1):
        mp: dict[str, str | None] = {}
        for j in counter:
            if j != i:
                mp[f"j{j}"] = f"{j}:{counter[j]}"
        mp[f"{i}l"] = f"{i}:{counter[i]}"
        counter[i] += 1
        mp[f"{i}r"] = f"{i}:{counter[i]}"
        mp[f"{i}e"] = f"e{p}" if simple[p - 1] else None
        maps.append(mp)
    maps.append({v.id: f"e{v.id[1:]}" for v in hq.vertices})
    parts = [elementary_quiver(cd, i) for i in word.letters] + [hq]
    interior = {f"{i}:{c}" for i, t in counter.items() for c in range(1, t)}
    q = amalgamate(parts, GluingPlan(tuple(maps), unfrozen=frozenset(interior)))
    ids = [f"{i}:{c}" for i in sorted(counter) for c in range(counter[i] + 1)]
    ids += [f"e{p}" for p in range(1, word.length + 1) if simple[p - 1]]
    q = reorder(q, ids)
    # frozen flags: level ends and e-vertices; glued vertices keep no tag
    vs = tuple(replace(v, frozen=v.id not in interior, tag="e" if v.id[0] == "e" else "")
               for v in q.vertices)
    q = Quiver(vs, q.exchange2)
    q.check()
    return q


def mutate_quiver(q: Quiver, k: int) -> Quiver:
    """Mutate at vertex index k by transporting the form through the new basis.

    The form is (e_a, e_b) = eps_ab / d_b; the new basis is e_k' = -e_k and
    e_a' = e_a + [eps_ak]_+ e_k.
    """
    if q.vertices[k].frozen:
        raise ValueError(f"cannot mutate frozen vertex {q.vertices[k].id}")
    n = len(q)
    d = [v.multiplier for v in q.vertices]
    form = [[Fraction(q.exchange2[a][b], 2 * d[b]) for b in range(n)] for a in range(n)]
    basis: list[dict[int, Fraction]] = []
    for a in range(n):
        if a == k:
            basis.append({k: Fraction(-1)})
        else:
            coeff = max(q.eps(a, k), Fraction(0))
            basis.append({a: Fraction(1), k: coeff} if coeff else {a: Fraction(1)})
    mat = _matrix(n)
    for a in range(n):
        for b in range(n):
            val = sum(ca * cb * form[x][y] for x, ca in basis[a].items() for y, cb in basis[b].items())
            doubled = 2 * d[b] * val
            if doubled.denominator != 1:
                raise AssertionError("mutation left the doubled integer lattice")
            mat[a][b] = int(doubled)
    out = Quiver(q.vertices, _freeze(mat))
    out.check()
    return out


def matrix_mutation(e2: Sequence[Sequence[int]], k: int) -> tuple[tuple[int, ...], ...]:
    """Closed-form mutation rule on doubled entries, used as a cross-check."""
    n = len(e2)
    out = _matrix(n)
    for i in range(n):
        for j in range(n):
            if k in (i, j):
                out[i][j] = -e2[i][j]
            else:
                a, b = e2[i][k], e2[k][j]
                sgn = (a > 0) - (a < 0)
                out[i][j] = e2[i][j] + sgn * max(a * b, 0) // 2
    return _freeze(out)


def export_dot(q: Quiver, name: str = "Q") -> str:
    lines = [f"digraph {name} {{"]
    for v in q.vertices:
        shape = "box" if v.frozen else "ellipse"
        lines.append(f'  "{v.id}" [shape={shape}, label="{v.id} (d={v.multiplier})"];')
    n = len(q)
    for a in range(n):
        for b in range(n):
            w = q.exchange2[a][b]
            if w <= 0:
                continue
            attrs = []
            if w % 2:
                attrs.append("style=dashed")
            if q.vertices[a].multiplier != q.vertices[b].multiplier:
                attrs.append("color=blue")
                attrs.append(f'label="{Fraction(w, 2)}/{Fraction(q.exchange2[b][a], 2)}"')
            elif w > 2:
                attrs.append(f'label="{Fraction(w, 2)}"')
            tail = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f'  "{q.vertices[a].id}" -> "{q.vertices[b].id}"{tail};')
    lines.append("}")
    return "\n".join(lines) + "\n"
