"""Shared independent oracles for the test suite.

These deliberately avoid the library's own code paths: cofactor expansion
for determinants, an explicit symbolic Laplacian on integer-coefficient
polynomials, and a recursive surface-area formula for sphere volumes.
"""

from __future__ import annotations

from fractions import Fraction

from kcscglue.balancing import PiRational


def det_cofactor(rows) -> Fraction:
    """Determinant by cofactor expansion along the first row."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("not square")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [
            [rows[i][c] for c in range(n) if c != j] for i in range(1, n)
        ]
        sign = -1 if j % 2 else 1
        total += sign * Fraction(rows[0][j]) * det_cofactor(minor)
    return total


class Poly:
    """Exact polynomial in several variables: {exponent tuple: coeff}."""

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Poly(out)

    def __mul__(self, other):
        out = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                key = tuple(a + b for a, b in zip(ka, kb))
                out[key] = out.get(key, Fraction(0)) + va * vb
        return Poly(out)

    def scale(self, c):
        return Poly({k: v * c for k, v in self.terms.items()})

    def laplacian(self):
        out = {}
        for k, v in self.terms.items():
            for i, e in enumerate(k):
                if e >= 2:
                    key = k[:i] + (e - 2,) + k[i + 1 :]
                    out[key] = out.get(key, Fraction(0)) + v * e * (e - 1)
        return Poly(out)

    def is_zero(self):
        return not self.terms


def harmonic_binomial_poly(j: int, nvars: int) -> Poly:
    """Re((x1 + i x2)^j) embedded in nvars variables: degree-j harmonic."""
    terms = {}
    from math import comb

    for t in range(0, j + 1):
        # i^t real part: t = 0 mod 4 -> +, 2 mod 4 -> -, odd -> 0
        if t % 2:
            continue
        sign = 1 if t % 4 == 0 else -1
        key = [0] * nvars
        key[0] = j - t
        if nvars > 1:
            key[1] = t
        terms[tuple(key)] = sign * comb(j, t)
    return Poly(terms)


def sphere_eigenvalue_oracle(j: int, m: int) -> int:
    """Eigenvalue of the spherical Laplacian on degree-j harmonics.

    Checks that the explicit harmonic polynomial really is annihilated by
    the symbolic Euclidean Laplacian, then reads the eigenvalue off the
    radial decomposition Lap = d_rr + (n-1)/r d_r + Lap_sphere / r^2 applied
    to a homogeneous function: Lambda = -(j(j-1) + (n-1) j), n = 2m.
    """
    n = 2 * m
    f = harmonic_binomial_poly(j, n)
    assert f.laplacian().is_zero(), "oracle polynomial is not harmonic"
    return -(j * (j - 1) + (n - 1) * j)


def sphere_volume_oracle(m: int) -> PiRational:
    """|S^{2m-1}| via the recursion |S^n| = (2 pi / (n-1)) |S^{n-2}|."""
    n = 2 * m - 1
    if n == 1:
        return PiRational(Fraction(2), 1)
    prev = sphere_volume_oracle(m - 1)
    return prev * PiRational(Fraction(2, n - 1), 1)
