"""Dilogarithms: Li2, the Bloch-Wigner function D, the modified L2, Cech cochains.

Li2 reduces into |z| <= 1, Re z <= 1/2 with the inversion and reflection
identities, then sums the Bernoulli series in u = -log(1 - z). On the cut
(1, inf) the sign of the imaginary zero picks the side: +0.0 gives the limit
from the upper half-plane, -0.0 the one from below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

PI2_6 = math.pi ** 2 / 6
TWO_PI_I = 2j * math.pi


def _bernoulli(count: int) -> list[Fraction]:
    b = [Fraction(1)]
    for m in range(1, count + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b


def _series_coefficients(terms: int = 30) -> list[float]:
    b = _bernoulli(2 * terms)
    return [float(b[2 * k] / math.factorial(2 * k + 1)) for k in range(1, terms + 1)]


_COEFFS = _series_coefficients()


def _series(z: complex) -> complex:
    u = -cmath.log(1 - z)
    u2 = u * u
    out = u - u2 / 4
    p = u
    for c in _COEFFS:
        p *= u2
        term = c * p
        out += term
        if abs(term) < 1e-18 * max(1.0, abs(out)):
            break
    return out


def _li2_disc(z: complex) -> complex:
    if z.real > 0.5:
        w = 1 - z
        if w == 0:
            return complex(PI2_6)
        return -_series(w) + PI2_6 - cmath.log(z) * cmath.log(w)
    return _series(z)


def li2(z: complex | float) -> complex:
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(PI2_6)
    if abs(z) > 1:
        return -_li2_disc(1 / z) - PI2_6 - 0.5 * cmath.log(-z) ** 2
    return _li2_disc(z)


def bloch_wigner(z: complex | float | Fraction) -> float:
    z = complex(z)
    if z == 0 or z == 1:
        return 0.0
    return li2(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def l2(x: complex | float, log_x_winding: int = 0, log_1mx_winding: int = 0) -> complex:
    """Li2(x) + 1/2 log(1-x) log(x) + (2 pi i)^2 / 24 with shifted log branches."""
    x = complex(x)
    if x == 0 or x == 1:
        raise ValueError("L2 is undefined at 0 and 1")
    lx = cmath.log(x) + TWO_PI_I * log_x_winding
    l1 = cmath.log(1 - x) + TWO_PI_I * log_1mx_winding
    return li2(x) + 0.5 * l1 * lx + TWO_PI_I ** 2 / 24


def volume_real(b) -> float:
    """sum of coeff * D(arg) for a Bloch element with numeric arguments."""
    return sum(float(c) * bloch_wigner(complex(x)) for x, c in b.terms())


# -- Cech cochain ------------------------------------------------------------

CMatrix = Sequence[Sequence[complex]]


def _apply(g: CMatrix, v: Sequence[complex]) -> tuple[complex, complex]:
    return (g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1])


def _det2(a, b) -> complex:
    return a[0] * b[1] - a[1] * b[0]


def cross_ratio_vectors(vs: Sequence[Sequence[complex]]) -> complex:
    """r2 = -D12 D34 / (D14 D23) for four vectors in dimension two."""
    d = {(a, b): _det2(vs[a], vs[b]) for a in range(4) for b in range(4)}
    den = d[(0, 3)] * d[(1, 2)]
    if any(abs(d[(a, b)]) < 1e-300 for a in range(4) for b in range(a + 1, 4)):
        raise ValueError("vectors are not pairwise generic")
    return -d[(0, 1)] * d[(2, 3)] / den


@dataclass(frozen=True)
class CechCover:
    sections: Mapping[int, CMatrix]
    base: tuple[complex, complex] = (1, 0)

    def vector(self, i: int) -> tuple[complex, complex]:
        return _apply(self.sections[i], self.base)


def cech_c2_cochain(cover: CechCover, simplex: Sequence[int]) -> complex:
    """sum_{k=1}^5 (-1)^k L2(C1(g_{i_1}, ..., omit k, ..., g_{i_5})), principal branches."""
    if len(simplex) != 5:
        raise ValueError("the cochain is evaluated on 5-vertex simplices")
    vs = [cover.vector(i) for i in simplex]
    out = 0j
    for k in range(5):
        sub = vs[:k] + vs[k + 1:]
        out += (-1) ** (k + 1) * l2(cross_ratio_vectors(sub))
    return out


def cech_coboundary(cover: CechCover, simplex: Sequence[int]) -> complex:
    """Alternating sum of the cochain over the faces of a 6-vertex simplex."""
    if len(simplex) != 6:
        raise ValueError("the coboundary is evaluated on 6-vertex simplices")
    return sum((-1) ** j * cech_c2_cochain(cover, simplex[:j] + simplex[j + 1:]) for j in range(6))


def lattice_denominator(value: complex, max_den: int = 100, tol: float = 1e-8) -> Fraction | None:
    """p/q with q <= max_den and |value - (2 pi i)^2 p/q| < tol, if one exists."""
    scaled = value / TWO_PI_I ** 2
    if abs(scaled.imag) > tol:
        return None
    for q in range(1, max_den + 1):
        p = round(scaled.real * q)
        if abs(scaled.real - p / q) * abs(TWO_PI_I ** 2) < tol:
            return Fraction(p, q)
    return None
