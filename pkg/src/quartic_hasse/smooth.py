"""Exact smoothness test for plane curves over Q.

A curve f = 0 is singular iff f_X, f_Y, f_Z have a common projective zero
(char 0, Euler's identity puts such a zero on the curve).  After a unimodular
change of coordinates making every partial monic-up-to-scalar in Y, the
affine chart Z = 1 is handled by resultant elimination in y followed by an
exact gcd computation over Q[x]/(d) (splitting d whenever a zero divisor
shows up), and the line Z = 0 by univariate gcds.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from .exact import TERN, Poly, UPoly, resultant_poly_coeffs, squarefree_upoly, upoly_gcd, variables


class _Split(Exception):
    def __init__(self, d1: UPoly, d2: UPoly):
        self.parts = (d1, d2)


def _generic_shift(f: Poly) -> tuple[int, int]:
    """(a, b) with f, f_X, f_Z nonzero at (a, 1, b).

    Then every partial of f(X + aY, Y, Z + bY) has a nonzero Y^(d-1) term.
    """
    fx, fz = f.diff("X"), f.diff("Z")
    for r in range(0, 50):
        for a, b in product(range(-r, r + 1), repeat=2):
            if max(abs(a), abs(b)) != r:
                continue
            pt = (Fraction(a), Fraction(1), Fraction(b))
            if f(*pt) and fx(*pt) and fz(*pt):
                return a, b
    raise RuntimeError("no generic coordinate shift found")


def _as_y_poly(p: Poly) -> list[UPoly]:
    """p(x, y, 1) as a list of UPoly in x, indexed by the power of y."""
    by_y: dict[int, dict[int, Fraction]] = {}
    for (i, j, _k), c in p.terms.items():
        row = by_y.setdefault(j, {})
        row[i] = row.get(i, 0) + c
    top = max(by_y, default=-1)
    out = []
    for j in range(top + 1):
        row = by_y.get(j, {})
        out.append(UPoly([row.get(i, 0) for i in range(max(row, default=-1) + 1)]))
    return out


def _inv_mod(c: UPoly, d: UPoly) -> UPoly:
    # extended Euclid; gcd(c, d) = 1 is assumed
    r0, r1 = d, c % d
    s0, s1 = UPoly(), UPoly([1])
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.deg != 0:
        raise ArithmeticError("not invertible modulo d")
    return (s0 * (1 / r0.lc)) % d


def _normalize(p: list[UPoly], d: UPoly) -> list[UPoly]:
    """Drop leading coefficients vanishing mod d; split d on zero divisors."""
    p = [c % d for c in p]
    while p:
        lc = p[-1]
        if not lc:
            p.pop()
            continue
        g = upoly_gcd(lc, d)
        if g.deg > 0:
            raise _Split(g, d.exact_div(g).monic())
        return p
    return p


def _rem(a: list[UPoly], b: list[UPoly], d: UPoly) -> list[UPoly]:
    a = list(a)
    inv = _inv_mod(b[-1], d)
    while len(a) >= len(b) and a:
        coef = (a[-1] * inv) % d
        shift = len(a) - len(b)
        for k, x in enumerate(b):
            a[shift + k] = (a[shift + k] - coef * x) % d
        a.pop()
        a = _normalize(a, d)
    return a


def _gcd_over(d: UPoly, polys: list[list[UPoly]]) -> list[UPoly]:
    g: list[UPoly] = []
    for p in polys:
        b = _normalize(p, d)
        a = g
        while b:
            a, b = b, _rem(a, b, d) if a else []
        g = a if a else g
    return g


def common_root_over(d: UPoly, polys: list[list[UPoly]]) -> bool:
    """Is there a root x0 of d at which the y-polynomials share a root?"""
    work = [squarefree_upoly(d)]
    while work:
        d = work.pop()
        if d.deg <= 0:
            continue
        try:
            g = _gcd_over(d, polys)
        except _Split as s:
            work.extend(s.parts)
            continue
        if len(g) != 1:  # zero (all vanish) or positive y-degree
            return True
    return False


def _affine_singular(partials: list[Poly]) -> bool:
    ys = [_as_y_poly(p) for p in partials]
    res = []
    for i in range(3):
        for j in range(i + 1, 3):
            r = resultant_poly_coeffs(ys[i], ys[j])
            if not r:
                # common factor of positive y-degree: a common curve component,
                # which meets the third partial somewhere in P^2
                return True
            res.append(r)
    d = res[0]
    for r in res[1:]:
        d = upoly_gcd(d, r)
    if d.deg <= 0:
        return False
    return common_root_over(d, ys)


def _infinity_singular(partials: list[Poly]) -> bool:
    if all(p(Fraction(1), Fraction(0), Fraction(0)) == 0 for p in partials):
        return True
    g = UPoly()
    for p in partials:
        g = upoly_gcd(g, p.to_upoly("X", {"Y": 1, "Z": 0}))
    return g.deg != 0


def singular_partials(f: Poly) -> list[Poly]:
    return [f.diff(v) for v in TERN]


def is_smooth(f: Poly) -> bool:
    """Exact smoothness of the projective plane curve f = 0."""
    if f.gens != TERN or not f or not f.is_homogeneous():
        raise ValueError("expected a nonzero ternary form")
    if f.degree() <= 1:
        return True
    if any(not p for p in singular_partials(f)):
        # two remaining partials of positive degree always meet in P^2
        return False
    a, b = _generic_shift(f)
    X, Y, Z = variables(TERN)
    g = f.substitute([X + a * Y, Y, Z + b * Y])
    partials = singular_partials(g)
    return not (_affine_singular(partials) or _infinity_singular(partials))
