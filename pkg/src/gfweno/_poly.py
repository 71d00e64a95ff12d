"""Exact rational polynomial helpers used to generate quadrature and WENO tables."""

from __future__ import annotations

from fractions import Fraction

Poly = list[Fraction]


def trim(p: Poly) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def mul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return trim(out)


def scale(a: Poly, c: Fraction) -> Poly:
    return trim([c * x for x in a])


def deriv(a: Poly) -> Poly:
    if len(a) == 1:
        return [Fraction(0)]
    return [i * a[i] for i in range(1, len(a))]


def antideriv(a: Poly) -> Poly:
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(a)]


def evaluate(a: Poly, x: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(a):
        result = result * x + c
    return result


def integrate(a: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    A = antideriv(a)
    return evaluate(A, hi) - evaluate(A, lo)


def lagrange_basis(nodes: list[Fraction], m: int) -> Poly:
    """Polynomial equal to 1 at ``nodes[m]`` and 0 at the other nodes."""
    p: Poly = [Fraction(1)]
    for i, y in enumerate(nodes):
        if i == m:
            continue
        p = mul(p, [-y / (nodes[m] - y), Fraction(1) / (nodes[m] - y)])
    return p
