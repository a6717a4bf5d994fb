import random
import re
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from quartic_hasse.exact import (
    BIN,
    TERN,
    Poly,
    QuadExtNum,
    SymMat3,
    UPoly,
    bareiss_det,
    binary_form,
    det3,
    det_fraction,
    factor_int,
    format_rational,
    leibniz_det,
    parse_rational,
    primitive,
    resultant_uni,
    squarefree_part,
    upoly_gcd,
    variables,
)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)
small_ints = st.integers(-30, 30)


def rand_poly(rng, gens, deg, nterms=5):
    terms = {}
    for _ in range(nterms):
        e = [0] * len(gens)
        for _ in range(rng.randrange(deg + 1)):
            e[rng.randrange(len(gens))] += 1
        terms[tuple(e)] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return Poly(gens, terms)


def to_sympy(f: Poly):
    syms = sympy.symbols(f.gens)
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**k for s, k in zip(syms, e)])
                       for e, c in f.terms.items()])


def text_to_sympy(txt):
    # "3/2 * X^2 Y" -> "3/2*X**2*Y"
    expr = re.sub(r"(?<=[\w)]) (?=[XYZST])", "*", txt.replace(" * ", "*").replace("^", "**"))
    return sympy.sympify(expr)


def test_rational_text_roundtrip():
    for x in (Fraction(0), Fraction(-7, 3), Fraction(10**30 + 1, 2**70)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(6, 3)) == "2"


@given(st.integers(1, 10**12))
def test_factor_int_against_sympy(n):
    assert factor_int(n) == {int(p): e for p, e in sympy.factorint(n).items()}


def test_factor_int_large():
    n = (2**61 - 1) * (10**18 + 9) * 3**3
    assert factor_int(n) == {3: 3, 2**61 - 1: 1, 10**18 + 9: 1}
    with pytest.raises(ValueError):
        factor_int(0)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 1000))
def test_squarefree_part(n, k):
    s = squarefree_part(n)
    assert squarefree_part(Fraction(n * k * k)) == s
    assert squarefree_part(Fraction(n, k * k)) == s
    q = Fraction(n, s)
    assert q > 0 and sympy.sqrt(sympy.Rational(q.numerator, q.denominator)).is_rational


@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_sympy(rows):
    assert det_fraction(rows) == int(sympy.Matrix(rows).det())
    assert leibniz_det([[Fraction(x) for x in r] for r in rows]) == det_fraction(rows)


def test_bareiss_integer_mode():
    rows = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
    assert bareiss_det(rows, 0, 1, lambda a, b: a // b) == 2 * 1 - 0 + 1 * (1 - 3)


def test_det3_against_evaluation():
    rng = random.Random(1)
    for _ in range(20):
        entries = [rand_poly(rng, BIN, 2, 3) for _ in range(6)]
        M = SymMat3(*entries)
        D = det3(M)
        for _ in range(4):
            s, t = Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            assert D(s, t) == det_fraction(M.at(s, t))


@given(st.lists(rats, min_size=1, max_size=5), st.lists(rats, min_size=1, max_size=4))
def test_resultant_is_product_over_roots(r1, r2):
    f, g = UPoly.from_roots(r1), UPoly.from_roots(r2)
    expected = Fraction(1)
    for a in r1:
        for b in r2:
            expected *= a - b
    assert resultant_uni(f, g) == expected


@given(st.lists(rats, min_size=1, max_size=3), st.lists(rats, min_size=1, max_size=3),
       st.lists(rats, min_size=1, max_size=3))
def test_resultant_multiplicative(a, b, c):
    f, g, h = UPoly.from_roots(a), UPoly.from_roots(b), UPoly.from_roots(c)
    assert resultant_uni(f * g, h) == resultant_uni(f, h) * resultant_uni(g, h)


def test_resultant_edge_cases():
    assert resultant_uni(UPoly([1, 1]), UPoly()) == 0
    with pytest.raises(ValueError):
        resultant_uni(UPoly(), UPoly())
    assert resultant_uni(UPoly([3]), UPoly([1, 0, 1])) == 9


@given(st.lists(rats, min_size=0, max_size=4), st.lists(rats, min_size=0, max_size=4))
def test_upoly_gcd_and_division(r1, r2):
    f, g = UPoly.from_roots(r1), UPoly.from_roots(r2)
    d = upoly_gcd(f, g)
    common = list(r1)
    shared = 0
    for r in r2:
        if r in common:
            common.remove(r)
            shared += 1
    assert d.deg == shared
    q, r = (f * g).divmod(g)
    assert q == f and not r


def test_poly_text_roundtrip_and_sympy():
    rng = random.Random(7)
    for _ in range(50):
        f = rand_poly(rng, TERN, 4, 6)
        txt = f.to_text()
        assert Poly.parse(txt, TERN) == f
        assert sympy.expand(to_sympy(f) - text_to_sympy(txt)) == 0


def test_canonical_order():
    X, Y, Z = variables(TERN)
    f = Z**4 + X * Y * Z**2 - 3 * Y**2 + Fraction(1, 2) * X**2
    assert f.to_text() == "1 * X Y Z^2 + 1 * Z^4 + 1/2 * X^2 - 3 * Y^2"
    assert Poly(TERN).to_text() == "0"
    assert binary_form([1, -2, 3]).to_text() == "1 * S^2 - 2 * S T + 3 * T^2"


def test_poly_arithmetic_against_sympy():
    rng = random.Random(2)
    for _ in range(30):
        f, g = rand_poly(rng, TERN, 3), rand_poly(rng, TERN, 3)
        assert sympy.expand(to_sympy(f * g - g + f) - (to_sympy(f) * to_sympy(g) - to_sympy(g) + to_sympy(f))) == 0
        X = sympy.Symbol("X")
        assert sympy.expand(to_sympy(f.diff("X")) - sympy.diff(to_sympy(f), X)) == 0


def test_primitive():
    X, Y, Z = variables(TERN)
    f = Fraction(3, 4) * X**2 - Fraction(3, 2) * Y * Z
    p = primitive(f)
    assert p == X**2 - 2 * Y * Z
    assert primitive(-f) == -p


deltas = st.sampled_from([-1, 2, 3, -3, 5, -7, 17, -769, 4369])  # never 7


@given(deltas, rats, rats, rats, rats)
def test_quadext_field_laws(d, a, b, c, e):
    x, y = QuadExtNum(d, a, b), QuadExtNum(d, c, e)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x * (y + 1) == x * y + x
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(deltas, rats, rats)
def test_quadext_squares(d, a, b):
    x = QuadExtNum(d, a, b)
    assert (x * x).is_square()
    # multiplying a nonzero square by a rational non-square of Q(sqrt d) breaks it
    if x:
        assert not (x * x * 7).is_square()


def test_quadext_validation():
    with pytest.raises(ValueError):
        QuadExtNum(4, 1, 1)
    with pytest.raises(ValueError):
        QuadExtNum(1, 1, 1)
    assert QuadExtNum(-1, 0, 1) ** 2 == -1
    assert QuadExtNum(5, 5, 0).is_square()
