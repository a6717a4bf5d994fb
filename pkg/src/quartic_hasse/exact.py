"""Exact arithmetic: rationals, sparse polynomials, univariate resultants,
and real or imaginary quadratic fields Q(sqrt(d)).

Rationals are ``fractions.Fraction`` throughout; nothing in this package ever
rounds.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd, isqrt

Rat = Fraction


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --- integers ---------------------------------------------------------------------

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        from .arith import is_prime

        # no factor below 1000 remains, so n < 10^6 is prime
        if n < 1_000_000 or (n < 1 << 64 and is_prime(n)):
            out[n] = out.get(n, 0) + 1
        else:
            from sympy import factorint

            for p, e in factorint(n).items():
                out[int(p)] = out.get(int(p), 0) + int(e)
    return out


def squarefree_part(x) -> int:
    """The squarefree integer representing x in Q^x / (Q^x)^2."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no squarefree part")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = isqrt(n)
    if r * r == n:
        return sign
    out = 1
    for p, e in factor_int(n).items():
        if e % 2:
            out *= p
    return sign * out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factor_int(n).values())


# --- determinants -------------------------------------------------------------------

def bareiss_det(rows, zero, one, exact_div):
    """Fraction-free Gaussian elimination over an integral domain.

    ``exact_div(a, b)`` must return a / b, which Bareiss guarantees is exact.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k] == zero:
            for i in range(k + 1, n):
                if a[i][k] != zero:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def det_fraction(rows) -> Fraction:
    return bareiss_det(
        [[Fraction(x) for x in r] for r in rows], Fraction(0), Fraction(1), lambda a, b: a / b
    )


def leibniz_det(rows):
    """Permutation expansion; fine for 3x3 with polynomial entries."""
    n = len(rows)
    total = None
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


# --- univariate polynomials ------------------------------------------------------

class UPoly:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def from_roots(cls, roots) -> "UPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return self.c == other.c

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"UPoly({[format_rational(x) for x in self.c]})"

    def __neg__(self):
        return UPoly([-x for x in self.c])

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return UPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, UPoly) else UPoly([-Fraction(other)]))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            other = Fraction(other)
            return UPoly([x * other for x in self.c])
        if not self.c or not other.c:
            return UPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, UPoly) else UPoly()
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def divmod(self, other: "UPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(other.c) + 1, 0)
        inv = 1 / other.lc
        for k in range(len(q) - 1, -1, -1):
            coef = r[k + other.deg] * inv
            q[k] = coef
            if coef:
                for j, y in enumerate(other.c):
                    r[k + j] -= coef * y
        return UPoly(q), UPoly(r[: other.deg] if other.deg > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            return self * (1 / Fraction(other))
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "UPoly":
        return self * (1 / self.lc) if self.c else self

    def deriv(self) -> "UPoly":
        return UPoly([i * x for i, x in enumerate(self.c)][1:])


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_upoly(a: UPoly) -> UPoly:
    if a.deg <= 0:
        return a.monic()
    return a.exact_div(upoly_gcd(a, a.deriv())).monic()


def sylvester_matrix(f, g, zero):
    """f, g: coefficient lists, low degree first, with nonzero leading term."""
    m, n = len(f) - 1, len(g) - 1
    rows = []
    fr, gr = list(reversed(f)), list(reversed(g))
    for i in range(n):
        rows.append([zero] * i + fr + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gr + [zero] * (m - 1 - i))
    return rows


def resultant_uni(f, g) -> Fraction:
    """Resultant of two univariate polynomials over Q via the Sylvester matrix."""
    f = f if isinstance(f, UPoly) else UPoly(f)
    g = g if isinstance(g, UPoly) else UPoly(g)
    if not f and not g:
        raise ValueError("resultant of two zero polynomials")
    if not f or not g:
        return Fraction(0)
    rows = sylvester_matrix(list(f.c), list(g.c), Fraction(0))
    return bareiss_det(rows, Fraction(0), Fraction(1), lambda a, b: a / b)


def resultant_poly_coeffs(f: list[UPoly], g: list[UPoly]) -> UPoly:
    """Res_y of f, g given as lists of UPoly in x (coefficients of y^k).

    Leading coefficients must be nonzero polynomials.
    """
    rows = sylvester_matrix(f, g, UPoly())
    return bareiss_det(rows, UPoly(), UPoly([1]), lambda a, b: a.exact_div(b))


# --- sparse multivariate polynomials --------------------------------------------

class Poly:
    """Sparse polynomial with rational coefficients in named variables.

    Binary forms use the variables (S, T), ternary forms (X, Y, Z).
    """

    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms=None):
        self.gens = tuple(gens)
        self.terms = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = c

    # construction
    @classmethod
    def const(cls, gens, c) -> "Poly":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens, name) -> "Poly":
        e = tuple(1 if g == name else 0 for g in gens)
        return cls(gens, {e: 1})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise ValueError(f"variable mismatch {self.gens} vs {other.gens}")
            return other
        return Poly.const(self.gens, other)

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.gens, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly(self.gens, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.gens, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.gens, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.gens, other) if not isinstance(other, Poly) else other
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    # inspection
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def diff(self, name) -> "Poly":
        k = self.gens.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                t[tuple(e2)] = c * e[k]
        return Poly(self.gens, t)

    def __call__(self, *values):
        """Evaluate; values may be rationals or any ring elements."""
        total = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def substitute(self, images) -> "Poly":
        """Compose with polynomials: images[i] replaces gens[i]."""
        gens = images[0].gens
        out = Poly(gens)
        for e, c in self.terms.items():
            term = Poly.const(gens, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def sorted_terms(self):
        """Graded lexicographic order, largest first (X > Y > Z, S > T)."""
        return sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-k for k in ec[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = " ".join(
                g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k
            )
            body = format_rational(abs(c)) + (f" * {mono}" if mono else "")
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str, gens) -> "Poly":
        gens = tuple(gens)
        text = text.strip()
        if text == "0":
            return cls(gens)
        tokens = re.split(r"\s+([+-])\s+", text)
        signs = ["+"] + tokens[1::2]
        terms: dict = {}
        for sign, body in zip(signs, tokens[0::2]):
            coef_txt, _, mono = body.partition("*")
            coef = Fraction(coef_txt.strip())
            if sign == "-":
                coef = -coef
            e = [0] * len(gens)
            for factor in mono.split():
                name, _, k = factor.partition("^")
                e[gens.index(name)] += int(k) if k else 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + coef
        return cls(gens, terms)

    def to_upoly(self, name, fixed=None) -> UPoly:
        """Univariate in ``name``; other variables take values from ``fixed``."""
        k = self.gens.index(name)
        fixed = fixed or {}
        coeffs: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            val = c
            for g, j in zip(self.gens, e):
                if g != name and j:
                    val *= Fraction(fixed[g]) ** j
            coeffs[e[k]] = coeffs.get(e[k], 0) + val
        n = max(coeffs, default=-1)
        return UPoly([coeffs.get(i, 0) for i in range(n + 1)])


def primitive(f: Poly) -> Poly:
    """Positive rational multiple of f with coprime integer coefficients."""
    if not f:
        return f
    den = 1
    num = 0
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    for c in f.terms.values():
        num = gcd(num, int(c * den))
    return f * Fraction(den, num)


BIN = ("S", "T")
TERN = ("X", "Y", "Z")


def binary_form(coeffs) -> Poly:
    """sum c_k S^(d-k) T^k for coeffs = (c_0, ..., c_d)."""
    d = len(coeffs) - 1
    return Poly(BIN, {(d - k, k): c for k, c in enumerate(coeffs)})


def binary_coeffs(f: Poly, d: int) -> list[Fraction]:
    return [f.coefficient((d - k, k)) for k in range(d + 1)]


def ternary_form(terms) -> Poly:
    return Poly(TERN, terms)


def variables(gens):
    return [Poly.var(gens, g) for g in gens]


@dataclass(frozen=True)
class SymMat3:
    """Symmetric 3x3 matrix of binary forms, stored by its upper triangle."""

    m11: Poly
    m12: Poly
    m13: Poly
    m22: Poly
    m23: Poly
    m33: Poly

    def entry(self, i: int, j: int) -> Poly:
        i, j = min(i, j), max(i, j)
        return getattr(self, f"m{i + 1}{j + 1}")

    def rows(self):
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def at(self, s, t) -> list[list[Fraction]]:
        return [[self.entry(i, j)(s, t) for j in range(3)] for i in range(3)]


def det3(M: SymMat3) -> Poly:
    return leibniz_det(M.rows())


# --- quadratic fields -------------------------------------------------------------

@dataclass(frozen=True)
class QuadExtNum:
    """a + b sqrt(delta) with delta a squarefree integer other than 0, 1."""

    delta: int
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        if self.delta in (0, 1) or not is_squarefree(self.delta):
            raise ValueError(f"delta must be squarefree and not 0 or 1, got {self.delta}")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _lift(self, other) -> "QuadExtNum":
        if isinstance(other, QuadExtNum):
            if other.delta != self.delta:
                raise ValueError("elements of different quadratic fields")
            return other
        return QuadExtNum(self.delta, Fraction(other))

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtNum(self.delta, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtNum(self.delta, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._lift(other)
        return QuadExtNum(
            self.delta, self.a * o.a + self.delta * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = QuadExtNum(self.delta, 1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "QuadExtNum":
        return QuadExtNum(self.delta, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.delta * self.b * self.b

    def inverse(self) -> "QuadExtNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadExtNum(self.delta, self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, QuadExtNum):
            return (self.delta, self.a, self.b) == (other.delta, other.a, other.b)
        try:
            return self.b == 0 and self.a == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.delta, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def is_square(self) -> bool:
        """Whether this is a square in Q(sqrt(delta))."""
        if not self:
            return True
        n = self.norm()
        if not _is_rational_square(n):
            return False
        # (c + d sqrt(delta))^2 = x forces c^2 = (a +- sqrt(norm)) / 2
        s = _rational_sqrt(n)
        for c2 in ((self.a + s) / 2, (self.a - s) / 2):
            if c2 and _is_rational_square(c2):
                return True
        # c = 0: x = delta * d^2
        return self.b == 0 and _is_rational_square(self.a / self.delta)

    def __repr__(self):
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.delta})"

    def to_json(self) -> list[str]:
        return [format_rational(self.a), format_rational(self.b)]


def _is_rational_square(x: Fraction) -> bool:
    x = Fraction(x)
    return x >= 0 and is_square_int(x.numerator) and is_square_int(x.denominator)


def _rational_sqrt(x: Fraction) -> Fraction:
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


def sqrt_in_field(x) -> Fraction | None:
    x = Fraction(x)
    return _rational_sqrt(x) if _is_rational_square(x) else None
