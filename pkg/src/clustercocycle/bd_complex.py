"""The divisor component C^(3), the Brylinski-Deligne complex and the Killing form.

Middle-stage elements of X_sc (x) X are rank x rank matrices M with M[i][j]
the coefficient of Lambda_i (x) Lambda_j; as a bilinear form on coroots,
C(y, y') = y^T M y'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .root_system import CartanData, reflect

Mat = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class DivisorEntry:
    k: int
    power: int
    character: tuple[Fraction, ...]  # exponents over fundamental weights


@dataclass(frozen=True)
class DivisorFunctionSum:
    entries: tuple[DivisorEntry, ...]

    def table(self) -> list[str]:
        rows = []
        for e in self.entries:
            exps = ", ".join(str(x) for x in e.character)
            rows.append(f"B_(s{e.k} w0)  power {e.power}  exponents ({exps})")
        return rows


def c3_element(cd: CartanData) -> DivisorFunctionSum:
    """F_k = (Delta_{k,s_k w0}^{-1} prod_{j != k} Delta_{j,w0}^{C_kj/2})^{d_k} per k."""
    out = []
    for k in range(cd.rank):
        ch = tuple(Fraction(-1) if j == k else Fraction(cd.cartan[k][j], 2) for j in range(cd.rank))
        out.append(DivisorEntry(k + 1, cd.symmetrizers[k], ch))
    return DivisorFunctionSum(tuple(out))


def bd_d1(x1: Sequence[int], x2: Sequence[int]) -> Mat:
    """x1 ^ x2 -> sum_i <x1, a_i^v> (w0 s_i, x2) - <x2, a_i^v> (w0 s_i, x1)."""
    r = len(x1)
    return tuple(tuple(Fraction(x1[i] * x2[j] - x2[i] * x1[j]) for j in range(r)) for i in range(r))


def bd_d2(cd: CartanData, m: Sequence[Sequence[Fraction]]) -> dict[tuple[int, int], Fraction]:
    """Component at w0 s_i s_j: C(a_i^v, a_j^v) + C(a_j^v, s_j(a_i^v))."""
    c = cd.cartan
    out = {}
    for i in range(cd.rank):
        for j in range(cd.rank):
            if i != j:
                out[(i + 1, j + 1)] = Fraction(m[i][j]) + Fraction(m[j][i]) - c[j][i] * Fraction(m[j][j])
    return out


def c3_to_bd(cd: CartanData, c3: DivisorFunctionSum | None = None) -> Mat:
    """sum_k d_k Lambda_k (x) Lambda_k + sum_{i != k} (d_k C_ki / 2) Lambda_k (x) Lambda_i.

    The divisor B_{s_k w0} maps to w0 s_k and the character -Lambda_k + ... of
    F_k flips sign under the left/right Bruhat conversion.
    """
    c3 = c3 or c3_element(cd)
    r = cd.rank
    m = [[Fraction(0)] * r for _ in range(r)]
    for e in c3.entries:
        k = e.k - 1
        for j, x in enumerate(e.character):
            m[k][j] = -x * e.power if j == k else x * e.power
    return tuple(tuple(row) for row in m)


@dataclass(frozen=True)
class QuadraticFormData:
    bilinear: Mat
    quadratic: tuple[Fraction, ...]


def quadratic_form(cd: CartanData, m: Sequence[Sequence[Fraction]] | None = None) -> QuadraticFormData:
    m = m or c3_to_bd(cd)
    r = cd.rank
    b = tuple(tuple(Fraction(m[i][j]) + Fraction(m[j][i]) for j in range(r)) for i in range(r))
    return QuadraticFormData(b, tuple(Fraction(m[i][i]) for i in range(r)))


def q_value(m: Sequence[Sequence[Fraction]], y: Sequence[int]) -> Fraction:
    r = len(y)
    return sum((y[i] * Fraction(m[i][j]) * y[j] for i in range(r) for j in range(r)), Fraction(0))


@dataclass
class KillingReport:
    label: str
    closed: bool
    invariant: bool
    normalized: bool
    q_simple: tuple[Fraction, ...] = ()
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.closed and self.invariant and self.normalized

    def line(self) -> str:
        q = ", ".join(str(x) for x in self.q_simple)
        return (f"{self.label}: closed={self.closed} W-invariant={self.invariant} "
                f"Q(short)=1:{self.normalized} Q(simple coroots)=({q})")


def killing_verification(cd: CartanData, trials: int = 50, seed: int = 0) -> KillingReport:
    m = c3_to_bd(cd)
    closed = all(v == 0 for v in bd_d2(cd, m).values())
    rng = random.Random(seed)
    invariant = True
    for _ in range(trials):
        y = tuple(rng.randint(-6, 6) for _ in range(cd.rank))
        q = q_value(m, y)
        for i in range(1, cd.rank + 1):
            if q_value(m, reflect(cd, i, y, "coroot")) != q:
                invariant = False
    qd = quadratic_form(cd, m).quadratic
    normalized = all(qd[i] == 1 for i in range(cd.rank) if cd.symmetrizers[i] == 1)
    return KillingReport(cd.label, closed, invariant, normalized, qd)


def div_c3_check(cd: CartanData) -> bool:
    return all(v == 0 for v in bd_d2(cd, c3_to_bd(cd)).values())
