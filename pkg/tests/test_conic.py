from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_hasse.conic import (
    ConstructionInput,
    DegenerateParameters,
    LineOnCurve,
    RationalLines,
    UnexpectedFiberRank,
    assemble_M,
    build_F,
    conjugate_line,
    discriminant_quartic,
    fiber_splits,
    line_product,
    proportional,
    raw_discriminant,
    restrict_to_line,
    solve_gh,
    split_conic,
    verify_bitangent,
)
from quartic_hasse.exact import BIN, TERN, Poly, QuadExtNum, det3, sqrt_in_field, variables

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "paper-example"
X, Y, Z = variables(TERN)
S, T = variables(BIN)

nonzero = st.fractions(min_value=-60, max_value=60, max_denominator=7).filter(bool)


@st.composite
def construction_inputs(draw):
    a = draw(st.lists(nonzero, min_size=5, max_size=5, unique=True))
    u = draw(nonzero)
    inp = ConstructionInput(tuple(a), u)
    if len(set(inp.roots)) != 6:
        a = [x + 100 * (k + 1) for k, x in enumerate(a)]
        inp = ConstructionInput(tuple(a), u)
    return inp


@settings(max_examples=120)
@given(construction_inputs())
def test_det_M_is_minus_F(inp):
    F, a6, c = build_F(inp.a, inp.u)
    assert F(Fraction(1), Fraction(0)) == c * c
    assert a6 == inp.a6
    g, h = solve_gh(F, c)
    assert g(Fraction(1), Fraction(0)) == c
    M = assemble_M(g, h)
    assert det3(M) == -F
    f = discriminant_quartic(M)
    assert f.is_homogeneous(4)
    assert f.coefficient((0, 4, 0)) == 0
    assert f(0, 1, 0) == 0
    assert f.coefficient((4, 0, 0)) > 0
    assert all(c.denominator == 1 for c in f.terms.values())


def test_build_F_roots():
    F, a6, c = build_F([2, 3, 5, 7, 11], Fraction(1, 3))
    assert a6 == Fraction(2 * 3 * 5 * 7 * 11, 9)
    for r in (2, 3, 5, 7, 11, a6):
        assert F(Fraction(1), Fraction(r)) == 0


@pytest.mark.parametrize("a,u", [
    ([1, 2, 3, 4], 1),                      # too few roots
    ([0, 2, 3, 4, 5], 1),                   # zero root
    ([1, 2, 3, 4, 5], 0),                   # u = 0
    ([1, 1, 3, 4, 5], 1),                   # repeated a_i
    ([2, 4, 9, 1, Fraction(1, 36)], 1),     # a6 = a1 since a2 a3 a4 a5 u^2 = 1
])
def test_degenerate_parameters(a, u):
    with pytest.raises(DegenerateParameters):
        build_F(a, u)


# --- the worked example ------------------------------------------------------------------


def test_example_g_h(example_bundle):
    g = Fraction(1, 8) * (2392149832 * S**2 + 35008837 * S * T + 12804 * T**2)
    h = -Fraction(1, 64) * (251582881045706064 * S**2 + 1084638148302617 * S * T + 594847875240 * T**2)
    assert example_bundle.g == g
    assert example_bundle.h == h
    assert example_bundle.a6 == -1513


def test_quartic_scaling(example_bundle):
    # the displayed quartic is 4096 times q1^2 - 4 q0 q2
    assert raw_discriminant(example_bundle.M) * 4096 == example_bundle.quartic


def test_golden_files(example_bundle):
    b = example_bundle
    for name, poly in (("F", b.F), ("g", b.g), ("h", b.h), ("quartic", b.quartic)):
        text = (FIXTURES / f"{name}.txt").read_text().strip()
        assert poly.to_text() == text
        assert Poly.parse(text, poly.gens) == poly


def test_fiber_splits(example_bundle):
    f = example_bundle.quartic
    splits = fiber_splits(example_bundle)
    assert [fs.delta for fs in splits] == [-769, 4369, 89, 257, 769, -1513]
    for fs in splits:
        l1, l2 = fs.lines
        assert sqrt_in_field(fs.delta) is None  # delta is not a rational square
        assert proportional(conjugate_line(l1), l2)
        assert verify_bitangent(f, l1) and verify_bitangent(f, l2)
        # l * l' reproduces the fiber conic up to the recorded scale
        A = example_bundle.M.at(Fraction(1), fs.root)
        prod = line_product(fs.lines)
        for e, c in prod.items():
            i, j = [k for k in range(3) for _ in range(e[k])]
            expected = A[i][j] if i == j else 2 * A[i][j]
            assert c == fs.scale * expected


def sympy_bitangent_oracle(f, line, delta):
    """Restrict f to the line with sympy over Q(sqrt(delta)) and read the
    square-free decomposition: bitangent iff every multiplicity is even."""
    r = sympy.sqrt(delta)
    s, t = sympy.symbols("s t")
    coeffs = [sympy.Rational(str(c.a)) + sympy.Rational(str(c.b)) * r for c in line]
    k = max(i for i in range(3) if coeffs[i] != 0)
    free = [i for i in range(3) if i != k]
    pt = [None] * 3
    pt[free[0]], pt[free[1]] = s, sympy.Integer(1)
    pt[k] = -(coeffs[free[0]] * s + coeffs[free[1]]) / coeffs[k]
    expr = sum(sympy.Rational(c.numerator, c.denominator) * pt[0]**e[0] * pt[1]**e[1] * pt[2]**e[2]
               for e, c in f.terms.items())
    P = sympy.Poly(sympy.expand(expr), s, extension=r)
    _, factors = P.sqf_list()
    return all(m % 2 == 0 for _, m in factors)


def test_fiber_lines_against_sympy(example_bundle):
    f = example_bundle.quartic
    for fs in fiber_splits(example_bundle)[:3]:
        for line in fs.lines:
            assert sympy_bitangent_oracle(f, line, fs.delta)


def Q(x):
    return QuadExtNum(2, x)


def test_verify_bitangent_small():
    f = X**4 + Y**2 * Z**2
    assert verify_bitangent(f, (1, 0, 0))
    assert not verify_bitangent(X**4 + Y**4 + Z**4, (1, 0, 0))
    with pytest.raises(LineOnCurve):
        verify_bitangent(X * (Y**3 + Z**3), (1, 0, 0))
    # X - sqrt2 Y is a factor of X^2 - 2Y^2, so on that line g restricts to Z^4
    g = (X**2 - 2 * Y**2) ** 2 + Z**2 * (X**2 - 2 * Y**2)
    line = (Q(1), QuadExtNum(2, 0, -1), Q(0))
    assert verify_bitangent(g + Z**4, line)
    assert not verify_bitangent(g + Z**3 * Y, line)
    r = restrict_to_line(X**4, (Fraction(1), Fraction(-1), Fraction(0)))
    assert len(r) == 5


def test_split_conic_errors():
    with pytest.raises(UnexpectedFiberRank):
        split_conic([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(UnexpectedFiberRank):
        split_conic([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(RationalLines):
        split_conic([[0, 1, 0], [1, 0, 0], [0, 0, 0]])  # 2 X Y
    fs = split_conic([[1, 0, 0], [0, -3, 0], [0, 0, 0]])  # X^2 - 3 Y^2
    assert fs.delta == 3
