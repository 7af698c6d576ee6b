"""Cartan data, Weyl group actions, reduced words and root/coroot chains.

Conventions: ``cartan[i][j] = alpha_i(alpha_j^vee)``. Roots are stored in the
simple-root basis, coroots in the simple-coroot basis and weights in the
fundamental-weight basis. Indices are 1-based in words and 0-based in
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Literal, Sequence

Lattice = Literal["root", "coroot", "weight"]
Vector = tuple[int, ...]


@dataclass(frozen=True)
class CartanData:
    series: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]
    num_positive_roots: int

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    def pairing(self, root: Sequence[int], coroot: Sequence[int]) -> int:
        """Natural pairing of a root (simple-root coords) with a coroot."""
        r = self.rank
        return sum(root[i] * coroot[j] * self.cartan[i][j] for i in range(r) for j in range(r))


@dataclass(frozen=True)
class WeylWord:
    letters: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    @classmethod
    def parse(cls, text: str) -> "WeylWord":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",")))

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.letters)


@dataclass(frozen=True)
class RootChain:
    alphas: tuple[Vector, ...]
    betas: tuple[Vector, ...]


def _chain_matrix(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def _cartan_matrix(series: str, rank: int) -> list[list[int]]:
    if series == "A" and rank >= 1:
        return _chain_matrix(rank)
    if series in ("B", "C") and rank >= 2:
        # the doubly-laced node sits between indices 1 and 2
        c = _chain_matrix(rank)
        if series == "B":
            c[1][0] = -2
        else:
            c[0][1] = -2
        return c
    if series == "D" and rank >= 4:
        c = _chain_matrix(rank)
        c[rank - 2][rank - 1] = c[rank - 1][rank - 2] = 0
        c[rank - 3][rank - 1] = c[rank - 1][rank - 3] = -1
        return c
    if series == "E" and rank in (6, 7, 8):
        c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, rank - 1)]
        for a, b in edges:
            c[a][b] = c[b][a] = -1
        return c
    if series == "F" and rank == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if series == "G" and rank == 2:
        return [[2, -1], [-3, 2]]
    raise ValueError(f"unsupported Cartan type {series}{rank}")


def _symmetrizers(c: list[list[int]]) -> tuple[int, ...]:
    n = len(c)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and c[i][j] != 0 and d[j] is None:
                d[j] = d[i] * c[i][j] / c[j][i]
                stack.append(j)
    if any(x is None for x in d):
        raise ValueError("Cartan matrix is not connected")
    den = 1
    for x in d:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@lru_cache(maxsize=None)
def cartan_data(series: str, rank: int) -> CartanData:
    series = series.upper()
    c = _cartan_matrix(series, rank)
    d = _symmetrizers(c)
    for i in range(rank):
        for j in range(rank):
            if d[i] * c[i][j] != d[j] * c[j][i]:
                raise AssertionError("symmetrizer solve failed")
    cart = tuple(tuple(row) for row in c)
    proto = CartanData(series, rank, cart, d, 0)
    return CartanData(series, rank, cart, d, len(positive_roots(proto)))


def reflect(cd: CartanData, j: int, v: Sequence[int], lattice: Lattice) -> Vector:
    """Simple reflection s_j (1-based) on a lattice vector."""
    c, k = cd.cartan, j - 1
    out = list(v)
    if lattice == "root":
        out[k] -= sum(v[i] * c[i][k] for i in range(cd.rank))
    elif lattice == "coroot":
        out[k] -= sum(c[k][i] * v[i] for i in range(cd.rank))
    elif lattice == "weight":
        for i in range(cd.rank):
            out[i] -= v[k] * c[k][i]
    else:
        raise ValueError(f"unknown lattice {lattice!r}")
    return tuple(out)


def weyl_apply(cd: CartanData, word: WeylWord | Sequence[int], v: Sequence[int],
               lattice: Lattice = "coroot") -> Vector:
    """Apply s_{i_1} ... s_{i_k} to v (rightmost reflection acts first)."""
    letters = word.letters if isinstance(word, WeylWord) else tuple(word)
    out = tuple(v)
    for j in reversed(letters):
        out = reflect(cd, j, out, lattice)
    return out


def _unit(rank: int, i: int) -> Vector:
    return tuple(1 if k == i else 0 for k in range(rank))


@lru_cache(maxsize=None)
def _positive_roots(series: str, rank: int, cartan: tuple) -> tuple[Vector, ...]:
    cd = CartanData(series, rank, cartan, (1,) * rank, 0)
    seen = {_unit(rank, i) for i in range(rank)}
    queue = sorted(seen, reverse=True)
    while queue:
        beta = queue.pop()
        for j in range(1, rank + 1):
            img = reflect(cd, j, beta, "root")
            if all(x >= 0 for x in img) and img not in seen:
                seen.add(img)
                queue.append(img)
    return tuple(sorted(seen, key=lambda r: (sum(r), r)))


def positive_roots(cd: CartanData) -> tuple[Vector, ...]:
    return _positive_roots(cd.series, cd.rank, cd.cartan)


def inversion_count(cd: CartanData, word: WeylWord | Sequence[int]) -> int:
    letters = word.letters if isinstance(word, WeylWord) else tuple(word)
    return sum(
        1 for beta in positive_roots(cd)
        if any(x < 0 for x in weyl_apply(cd, letters, beta, "root"))
    )


def is_reduced(cd: CartanData, w: WeylWord | Sequence[int]) -> bool:
    letters = w.letters if isinstance(w, WeylWord) else tuple(w)
    if any(not 1 <= j <= cd.rank for j in letters):
        raise ValueError(f"letters must lie in 1..{cd.rank}")
    return inversion_count(cd, letters) == len(letters)


def _greedy_longest(cd: CartanData) -> tuple[int, ...]:
    # w0 is the top of the right weak order, so every reduced word extends
    # to one for w0 and the greedy choice yields the lexicographic minimum.
    r = cd.rank
    images = [list(_unit(r, i)) for i in range(r)]  # w(alpha_i)
    letters: list[int] = []
    while True:
        # l(w s_j) > l(w) iff w(alpha_j) > 0
        j = next((j for j in range(r) if all(x >= 0 for x in images[j])), None)
        if j is None:
            return tuple(letters)
        wj = images[j]
        images = [[a - cd.cartan[i][j] * b for a, b in zip(images[i], wj)] for i in range(r)]
        letters.append(j + 1)


def longest_word(cd: CartanData, word: WeylWord | Sequence[int] | None = None) -> WeylWord:
    """Canonical reduced word for w0, or validate a user-supplied one."""
    if word is not None:
        w = word if isinstance(word, WeylWord) else WeylWord(tuple(word))
        if not is_reduced(cd, w):
            inv = inversion_count(cd, w.letters)
            raise ValueError(f"word ({w}) is not reduced: length {w.length} but only {inv} inversions")
        if w.length != cd.num_positive_roots:
            raise ValueError(f"word ({w}) is reduced but has length {w.length}; w0 of {cd.label} "
                             f"has length {cd.num_positive_roots}")
        return w
    if cd.series == "E":
        raise ValueError(f"{cd.label} needs an explicit reduced word for w0")
    return WeylWord(_greedy_longest(cd))


def root_coroot_chains(cd: CartanData, word: WeylWord) -> RootChain:
    letters = word.letters
    if not is_reduced(cd, letters):
        raise ValueError(f"word ({word}) is not reduced")
    alphas, betas = [], []
    for k, i in enumerate(letters):
        tail = letters[k + 1:]
        # s_{i_m} ... s_{i_{k+1}} applied to the simple (co)root
        prod = tuple(reversed(tail))
        alphas.append(weyl_apply(cd, prod, _unit(cd.rank, i - 1), "root"))
        betas.append(weyl_apply(cd, prod, _unit(cd.rank, i - 1), "coroot"))
    return RootChain(tuple(alphas), tuple(betas))


def simple_index(v: Sequence[int]) -> int | None:
    """1-based index if v is a simple basis vector, else None."""
    nz = [k for k, x in enumerate(v) if x != 0]
    if len(nz) == 1 and v[nz[0]] == 1:
        return nz[0] + 1
    return None


def w0_coroot_matrix(cd: CartanData) -> tuple[Vector, ...]:
    letters = _greedy_longest(cd)
    return tuple(weyl_apply(cd, letters, _unit(cd.rank, i), "coroot") for i in range(cd.rank))


def star_involution(cd: CartanData) -> dict[int, int]:
    out = {}
    for i, img in enumerate(w0_coroot_matrix(cd), start=1):
        j = simple_index(tuple(-x for x in img))
        if j is None:
            raise AssertionError("-w0 does not permute simple coroots")
        out[i] = j
    return out
