"""Conic bundle over P^1 whose discriminant is a prescribed sextic, and the
plane quartic over which the bundle is a double cover.

Pipeline: build_F -> solve_gh -> assemble_M -> discriminant_quartic, then
is_smooth, and the six degenerate fibers split into line pairs over quadratic
fields; each line is a bitangent of the quartic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact import (
    BIN,
    TERN,
    Poly,
    QuadExtNum,
    SymMat3,
    binary_coeffs,
    binary_form,
    det3,
    det_fraction,
    format_rational,
    primitive,
    squarefree_part,
    variables,
)
from .smooth import is_smooth  # noqa: F401  (re-exported)


class ConstructionError(RuntimeError):
    code = "construction-error"


class DegenerateParameters(ConstructionError):
    code = "degenerate-parameters"


class InexactDivision(ConstructionError):
    code = "inexact-division"


class UnexpectedFiberRank(ConstructionError):
    code = "unexpected-fiber-rank"


class RationalLines(ConstructionError):
    code = "rational-lines"


class LineOnCurve(ConstructionError):
    code = "line-on-curve"


class NotSmooth(ConstructionError):
    code = "not-smooth"


S, T = variables(BIN)
X, Y, Z = variables(TERN)


@dataclass(frozen=True)
class ConstructionInput:
    a: tuple[Fraction, ...]  # a_1 .. a_5
    u: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "u", Fraction(self.u))

    @property
    def c(self) -> Fraction:
        out = self.u
        for x in self.a:
            out *= x
        return out

    @property
    def a6(self) -> Fraction:
        return self.c * self.u

    @property
    def roots(self) -> tuple[Fraction, ...]:
        return (*self.a, self.a6)


def build_F(a, u):
    """F(S, T) = prod (a_i S - T) with a_6 = a_1 ... a_5 u^2.

    Returns (F, a_6, c) where c = a_1 ... a_5 u, so that F(1, 0) = c^2.
    """
    inp = ConstructionInput(tuple(a), u)
    if len(inp.a) != 5:
        raise DegenerateParameters(f"need five a_i, got {len(inp.a)}")
    if inp.u == 0 or any(x == 0 for x in inp.a):
        raise DegenerateParameters("a_i and u must be nonzero")
    if len(set(inp.roots)) != 6:
        raise DegenerateParameters(
            f"repeated root among a_1..a_6 = {[format_rational(x) for x in inp.roots]}"
        )
    F = Poly.const(BIN, 1)
    for r in inp.roots:
        F = F * (r * S - T)
    return F, inp.a6, inp.c


def solve_gh(F: Poly, c) -> tuple[Poly, Poly]:
    """The binary quadratics g, h with g(1, 0) = c and det M(g, h) = -F.

    Matching coefficients of det M = -F gives g term by term:
        g = c S^2 + g1 S T + g0 T^2,  g0 = (-[S T^5]F - 1) / 2,
        g1 = (-[S^2 T^4]F + g0^2) / 2,
    and then h = (S T^5 - (T^3 - g S)^2 + F) / (S^3 T), an exact division.
    """
    c = Fraction(c)
    if F.degree() != 6 or not F.is_homogeneous(6):
        raise ValueError("F must be a binary sextic form")
    if F(1, 0) != c * c:
        raise InexactDivision(f"F(1, 0) = {F(1, 0)} differs from c^2 = {c * c}")
    coeffs = binary_coeffs(F, 6)
    g0 = (-coeffs[5] - 1) / 2
    g1 = (-coeffs[4] + g0 * g0) / 2
    g = binary_form([c, g1, g0])
    num = S * T**5 - (T**3 - g * S) ** 2 + F
    terms = {}
    for (i, j), coef in num.terms.items():
        if i < 3 or j < 1:
            raise InexactDivision(f"S^3 T does not divide the numerator (term S^{i} T^{j})")
        terms[(i - 3, j - 1)] = coef
    h = Poly(BIN, terms)
    return g, h


def assemble_M(g: Poly, h: Poly) -> SymMat3:
    return SymMat3(
        m11=-S * T + T**2,
        m12=S * T,
        m13=g,
        m22=S**2,
        m23=T**2,
        m33=h,
    )


def _ternary_quadric(coef) -> Poly:
    # coef[i][j] symmetric rational matrix -> x^T coef x
    xs = (X, Y, Z)
    out = Poly(TERN)
    for i in range(3):
        for j in range(3):
            if coef[i][j]:
                out = out + coef[i][j] * xs[i] * xs[j]
    return out


def biquad_parts(M: SymMat3) -> tuple[Poly, Poly, Poly]:
    """(X Y Z) M (X Y Z)^T = q0 S^2 + q1 S T + q2 T^2."""
    parts = []
    for k in range(3):
        mat = [[binary_coeffs(M.entry(i, j), 2)[k] for j in range(3)] for i in range(3)]
        parts.append(_ternary_quadric(mat))
    return tuple(parts)


def raw_discriminant(M: SymMat3) -> Poly:
    q0, q1, q2 = biquad_parts(M)
    return q1 * q1 - 4 * q0 * q2


def discriminant_quartic(M: SymMat3) -> Poly:
    """The branch quartic q1^2 - 4 q0 q2, scaled to coprime integer
    coefficients (a positive multiple, so the same curve)."""
    return primitive(raw_discriminant(M))


@dataclass(frozen=True)
class ConicBundle:
    inp: ConstructionInput
    F: Poly
    g: Poly
    h: Poly
    M: SymMat3
    quartic: Poly

    @property
    def c(self) -> Fraction:
        return self.inp.c

    @property
    def a6(self) -> Fraction:
        return self.inp.a6


def construct(a, u) -> ConicBundle:
    F, a6, c = build_F(a, u)
    g, h = solve_gh(F, c)
    M = assemble_M(g, h)
    if det3(M) != -F:
        raise ConstructionError("det M != -F")
    return ConicBundle(ConstructionInput(tuple(a), u), F, g, h, M, discriminant_quartic(M))


# --- degenerate fibers -------------------------------------------------------------------

@dataclass(frozen=True)
class FiberSplit:
    index: int
    root: Fraction
    delta: int
    kernel: tuple[int, int, int]
    lines: tuple[tuple[QuadExtNum, QuadExtNum, QuadExtNum], tuple[QuadExtNum, QuadExtNum, QuadExtNum]]
    scale: Fraction  # l * l' = scale * fiber conic

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "root": format_rational(self.root),
            "delta": self.delta,
            "kernel": list(self.kernel),
            "lines": [[c.to_json() for c in line] for line in self.lines],
            "scale": format_rational(self.scale),
        }


def _kernel(A) -> list[Fraction]:
    """A nonzero kernel vector of a 3x3 rank-2 matrix (cross product of two
    independent rows)."""
    for r1, r2 in ((0, 1), (0, 2), (1, 2)):
        u, v = A[r1], A[r2]
        k = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        if any(k):
            return k
    raise UnexpectedFiberRank("matrix has rank below 2")


def _primitive(v) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return tuple(-x for x in ints) if first < 0 else tuple(ints)


def split_conic(A, index: int = 0, root=Fraction(0)) -> FiberSplit:
    """Factor the rank-2 ternary quadric x^T A x into two conjugate lines.

    With kernel vector k and pivot p (first nonzero entry of k), the form only
    depends on y_i = x_i - (x_p / k_p) k_i for the two other coordinates, and
    B11 q = (B11 y_i + B12 y_j)^2 - D y_j^2 with D = -det B.
    """
    A = [[Fraction(x) for x in row] for row in A]
    if det_fraction(A) != 0:
        raise UnexpectedFiberRank("fiber conic is nondegenerate (rank 3)")
    if not any(any(row) for row in A):
        raise UnexpectedFiberRank("fiber conic vanishes (rank 0)")
    kvec = _primitive(_kernel(A))
    p = next(i for i, x in enumerate(kvec) if x)
    i, j = [t for t in range(3) if t != p]
    B11, B12, B22 = A[i][i], A[i][j], A[j][j]
    D = B12 * B12 - B11 * B22
    if D == 0:
        raise UnexpectedFiberRank("fiber conic is a double line (rank 1)")
    if B11 == 0:
        i, j, B11, B22 = j, i, B22, B11
    delta = squarefree_part(D)
    if delta == 1:
        raise RationalLines(f"fiber {index}: the two lines are defined over Q")
    s = Fraction(D) / delta
    root_s = Fraction(_isqrt_rat(s))  # D = s * delta with s a rational square
    # y_i = x_i - (k_i / k_p) x_p, y_j likewise
    kp = Fraction(kvec[p])

    def line(sign):
        coeffs = [QuadExtNum(delta, 0)] * 3
        lin_i = QuadExtNum(delta, B11)
        lin_j = QuadExtNum(delta, B12, sign * root_s)
        coeffs[i] = lin_i
        coeffs[j] = lin_j
        coeffs[p] = -(lin_i * Fraction(kvec[i]) + lin_j * Fraction(kvec[j])) / kp
        return tuple(coeffs)

    return FiberSplit(index, Fraction(root), delta, kvec, (line(1), line(-1)), B11)


def _isqrt_rat(x: Fraction) -> Fraction:
    from math import isqrt

    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise ArithmeticError(f"{x} is not a rational square")
    return Fraction(n, d)


def split_degenerate_fiber(M: SymMat3, root, index: int = 0) -> FiberSplit:
    """Split the fiber over [S:T] = [1:root], where det M vanishes."""
    A = M.at(Fraction(1), Fraction(root))
    return split_conic(A, index, root)


def fiber_splits(bundle: ConicBundle) -> list[FiberSplit]:
    return [split_degenerate_fiber(bundle.M, r, k + 1) for k, r in enumerate(bundle.inp.roots)]


def line_product(lines) -> dict:
    """Coefficients of l * l' as a ternary quadric over Q(sqrt(delta))."""
    l1, l2 = lines
    out = {}
    for a in range(3):
        for b in range(3):
            e = [0, 0, 0]
            e[a] += 1
            e[b] += 1
            e = tuple(e)
            out[e] = out.get(e, 0) + l1[a] * l2[b]
    return out


# --- bitangency -------------------------------------------------------------------------

def restrict_to_line(f: Poly, line) -> list:
    """Coefficients r_0..r_4 of f restricted to the line, in parameters (s, t).

    The line sum c_i x_i = 0 is parametrized by solving for the last
    coordinate with nonzero coefficient.
    """
    line = list(line)
    k = max(i for i, c in enumerate(line) if c)
    free = [i for i in range(3) if i != k]
    # x_free[0] = s, x_free[1] = t, x_k = -(c_f0 s + c_f1 t) / c_k
    zero = line[k] * 0
    one = zero + 1
    coord = [None, None, None]
    coord[free[0]] = (one, zero)
    coord[free[1]] = (zero, one)
    coord[k] = (-line[free[0]] / line[k], -line[free[1]] / line[k])
    out = [zero] * 5
    for e, c in f.terms.items():
        # product of linear forms (alpha s + beta t)^e
        poly = [one]
        for var, power in enumerate(e):
            al, be = coord[var]
            for _ in range(power):
                nxt = [zero] * (len(poly) + 1)
                for d, x in enumerate(poly):
                    nxt[d] = nxt[d] + x * al  # s-degree counts from s^deg
                    nxt[d + 1] = nxt[d + 1] + x * be
                poly = nxt
        for d, x in enumerate(poly):
            out[d] = out[d] + x * c
    return out  # out[d] multiplies s^(4-d) t^d


def _is_scaled_square(r) -> bool:
    """Whether sum r_d s^(4-d) t^d = const * (quadratic)^2 with const != 0."""
    n = len(r) - 1
    lead = 0
    while lead <= n and not r[lead]:
        lead += 1
    trail = n
    while not r[trail]:
        trail -= 1
    # factor out s^(n - trail) t^lead; both powers must be even
    if lead % 2 or (n - trail) % 2:
        return False
    core = r[lead : trail + 1]
    m = len(core) - 1
    c0 = core[0]
    mon = [x / c0 for x in core]
    half = m // 2
    # monic square root by matching the top half of coefficients
    root = [mon[0] * 0 + 1]
    for d in range(1, half + 1):
        acc = mon[d]
        for k in range(1, d):
            acc = acc - root[k] * root[d - k]
        root.append(acc / 2)
    sq = [mon[0] * 0] * (m + 1)
    for a_, x in enumerate(root):
        for b_, y in enumerate(root):
            sq[a_ + b_] = sq[a_ + b_] + x * y
    return all(sq[d] == mon[d] for d in range(m + 1))


def verify_bitangent(f: Poly, line) -> bool:
    """True iff f restricted to the line is a nonzero constant times a square."""
    if not any(line):
        raise ValueError("zero line")
    r = restrict_to_line(f, line)
    if not any(r):
        raise LineOnCurve("the line is a component of the curve")
    return _is_scaled_square(r)


def conjugate_line(line):
    return tuple(c.conj() for c in line)


def proportional(l1, l2) -> bool:
    k = next(i for i, c in enumerate(l1) if c)
    if not l2[k]:
        return False
    ratio = l2[k] / l1[k]
    return all(l2[i] == l1[i] * ratio for i in range(3))
