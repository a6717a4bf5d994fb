"""Arithmetic of multiquadratic fields Q(sqrt(b1), ..., sqrt(b5)).

Galois elements are 5-bit vectors: bit j set means sqrt(b_{j+1}) changes
sign.  Decomposition groups are computed from local square classes by Kummer
duality: the image of the local Galois group at v is the annihilator of
{c : prod b_j^c_j is a square in Q_v}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import factor_int, is_squarefree, squarefree_part

INF = "inf"
RANK = 5


class SearchExhausted(RuntimeError):
    pass


# --- symbols and primes ----------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 and a % 8 in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the fixed bases are exact below 2^64."""
    if n < 0 or n >= 1 << 64:
        raise ValueError(f"is_prime supports 0 <= n < 2^64, got {n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(n + 1) if sieve[p]]


def ramified_primes(b: int) -> frozenset[int]:
    """Primes dividing the discriminant of Q(sqrt(b)), b squarefree."""
    if b in (0, 1) or not is_squarefree(b):
        raise ValueError(f"expected a squarefree integer other than 0, 1: {b}")
    out = {p for p in factor_int(b) if p != 2}
    if b % 4 != 1:
        out.add(2)
    return frozenset(out)


def local_class(b: int, place) -> tuple[int, ...]:
    """Coordinates of b in Q_v^x / (Q_v^x)^2 over F_2.

    inf: (sign,).  Odd p: (valuation, unit is a non-residue).
    p = 2: (valuation, unit = 3 mod 4, unit = +-3 mod 8).
    """
    if place == INF:
        return (int(b < 0),)
    p = place
    v = 0
    while b % p == 0:
        b //= p
        v += 1
    if p == 2:
        return (v % 2, int(b % 4 == 3), int(b % 8 in (3, 5)))
    return (v % 2, int(kronecker(b, p) == -1))


def is_local_square(b: int, place) -> bool:
    return not any(local_class(b, place))


# --- F_2 linear algebra on 5-bit vectors -------------------------------------------

def bits(v: int, n: int = RANK) -> tuple[int, ...]:
    return tuple(v >> j & 1 for j in range(n))


def from_bits(t) -> int:
    return sum(int(x) << j for j, x in enumerate(t))


def dot(u: int, v: int) -> int:
    return bin(u & v).count("1") & 1


def span(vectors) -> frozenset[int]:
    out = {0}
    for v in vectors:
        out |= {w ^ v for w in out}
    return frozenset(out)


def f2_rank(vectors) -> int:
    return len(span(vectors)).bit_length() - 1


def annihilator(subspace, n: int = RANK) -> frozenset[int]:
    return frozenset(v for v in range(1 << n) if all(dot(v, c) == 0 for c in subspace))


# --- parameters -----------------------------------------------------------------------

@dataclass(frozen=True)
class ParamTuple:
    """b_1..b_5 and u; the a_i follow the fixed pattern
    a = (b1 b5, b2 b4, b3, b4, b5)."""

    b: tuple[int, ...]
    u: Fraction

    @property
    def a(self) -> tuple[Fraction, ...]:
        b1, b2, b3, b4, b5 = (Fraction(x) for x in self.b)
        return (b1 * b5, b2 * b4, b3, b4, b5)

    @staticmethod
    def default_u(b) -> Fraction:
        return Fraction(-1, b[3] * b[4])

    def with_u(self, u) -> "ParamTuple":
        return ParamTuple(self.b, Fraction(u))

    def to_json(self) -> dict:
        from .exact import format_rational

        return {
            "b": list(self.b),
            "u": format_rational(self.u),
            "a": [format_rational(x) for x in self.a],
            "a_pattern": "a = (b1*b5, b2*b4, b3, b4, b5)",
        }


@dataclass
class ValidationReport:
    b: tuple[int, ...]
    ramified: dict[int, list[int]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, detail: str, **where):
        self.failures.append({"check": check, "detail": detail, **where})

    def failed_places(self) -> set:
        return {f["place"] for f in self.failures if "place" in f}

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "b": list(self.b),
            "ramified": {str(k): v for k, v in self.ramified.items()},
            "failures": self.failures,
        }


def squarefree_vector(x, primes: list) -> int:
    """Exponent vector mod 2 of the squarefree part of x on the basis -1, primes."""
    s = squarefree_part(x)
    v = int(s < 0)
    for k, p in enumerate(primes):
        if abs(s) % p == 0:
            v |= 1 << (k + 1)
    return v


def _prime_support(values) -> list[int]:
    ps = set()
    for x in values:
        s = squarefree_part(x)
        ps |= set(factor_int(s)) if abs(s) > 1 else set()
    return sorted(ps)


def validate_params(b) -> ValidationReport:
    """Check the Galois extension Q(sqrt(b_1), ..., sqrt(b_5)) is usable.

    (i) each Q(sqrt(b_i)) is ramified at exactly one prime p_i; (ii) the p_i
    are distinct; (iii) every other b_j is a local square at p_i, which makes
    the decomposition group at p_i equal to the inertia group, of order 2.
    """
    b = tuple(int(x) for x in b)
    rep = ValidationReport(b)
    if len(b) != RANK:
        rep.fail("shape", f"expected {RANK} integers, got {len(b)}")
        return rep
    for i, x in enumerate(b):
        if x in (0, 1) or not is_squarefree(x):
            rep.fail("squarefree", f"b{i + 1} = {x} is not a squarefree integer other than 0, 1", index=i + 1)
    if rep.failures:
        return rep
    if len(set(b)) != RANK:
        rep.fail("distinct", "the b_i are not pairwise distinct")
    support = _prime_support(b)
    if f2_rank(squarefree_vector(x, support) for x in b) != RANK:
        rep.fail("independent", "the b_i are multiplicatively dependent modulo squares")

    ram = {i: sorted(ramified_primes(x)) for i, x in enumerate(b)}
    rep.ramified = {i + 1: ps for i, ps in ram.items()}
    for i, ps in ram.items():
        if len(ps) != 1:
            rep.fail("one-ramified-prime", f"Q(sqrt({b[i]})) is ramified at {ps}", index=i + 1)
    single = {i: ps[0] for i, ps in ram.items() if len(ps) == 1}
    if len(set(single.values())) != len(single):
        rep.fail("distinct-ramified-primes", f"ramified primes collide: {sorted(single.values())}")
    for i, p in single.items():
        for j, x in enumerate(b):
            if j == i or is_local_square(x, p):
                continue
            if p == 2:
                why = f"b{j + 1} = {x} is not 1 mod 8, so 2 does not split in Q(sqrt({x}))"
            else:
                why = f"kronecker({x}, {p}) = {kronecker(x, p)}"
            rep.fail("local-square", why, place=p, index=j + 1)
    return rep


# --- decomposition groups ------------------------------------------------------

@dataclass(frozen=True)
class PlaceCert:
    place: object  # prime or "inf"
    inertia: frozenset[int]
    frobenius: int
    decomposition: frozenset[int]

    @property
    def cyclic(self) -> bool:
        return len(self.decomposition) <= 2

    @property
    def generator(self) -> int | None:
        """The generator of a cyclic decomposition group (0 when trivial)."""
        if not self.cyclic:
            return None
        return max(self.decomposition)

    def to_json(self) -> dict:
        gen = self.generator
        return {
            "place": self.place,
            "inertia": sorted(list(bits(v)) for v in self.inertia),
            "frobenius": list(bits(self.frobenius)),
            "decomposition": sorted(list(bits(v)) for v in self.decomposition),
            "generator": None if gen is None else list(bits(gen)),
            "cyclic": self.cyclic,
        }


def decomposition_generator(params: ParamTuple | tuple, place) -> PlaceCert:
    b = params.b if isinstance(params, ParamTuple) else tuple(params)
    classes = [local_class(x, place) for x in b]
    width = len(classes[0])

    def kernel(coords):
        out = []
        for c in range(1 << RANK):
            tot = [0] * width
            for j in range(RANK):
                if c >> j & 1:
                    tot = [t ^ x for t, x in zip(tot, classes[j])]
            if not any(tot[k] for k in coords):
                out.append(c)
        return out

    decomposition = annihilator(kernel(range(width)))
    if place == INF:
        inertia = frozenset({0})
        frob = from_bits(cl[0] for cl in classes)
        return PlaceCert(place, inertia, frob, decomposition)
    # ramified coordinates: the valuation (and for p = 2 the mod-4 unit class)
    ram_coords = (0, 1) if place == 2 else (0,)
    inertia = annihilator(kernel(ram_coords))
    unram = [not any(cl[k] for k in ram_coords) for cl in classes]
    frob_bit = 2 if place == 2 else 1
    frob = from_bits(int(u and cl[frob_bit]) for u, cl in zip(unram, classes))
    return PlaceCert(place, inertia, frob, decomposition)


def certificate_places(b, bound: int = 100) -> list:
    """Ramified primes, 2, the real place and every prime up to ``bound``."""
    ram = set()
    for x in b:
        ram |= ramified_primes(x)
    finite = sorted(ram | {2} | set(primes_up_to(bound)))
    return finite + [INF]


# --- search -----------------------------------------------------------------------------

def search_params(bound: int, seed: int = 0) -> ParamTuple:
    """Find b = (-1, q2, q3, q4, q5), q_j primes = 1 mod 8 up to ``bound`` that
    are pairwise quadratic residues of each other.

    Seed 0 scans candidates in increasing order; other seeds shuffle them.
    The first 4-clique found (depth first) is returned, sorted.
    """
    cands = [q for q in primes_up_to(bound) if q % 8 == 1]
    if seed:
        random.Random(seed).shuffle(cands)
    adj = {q: {r for r in cands if r != q and kronecker(q, r) == 1} for q in cands}

    def extend(clique, rest):
        if len(clique) == RANK - 1:
            return clique
        for k, q in enumerate(rest):
            if all(q in adj[c] for c in clique):
                found = extend(clique + [q], rest[k + 1 :])
                if found:
                    return found
        return None

    clique = extend([], cands)
    if clique is None:
        raise SearchExhausted(f"no four pairwise-residue primes = 1 mod 8 up to {bound}")
    b = (-1, *sorted(clique))
    rep = validate_params(b)
    if not rep.passed:  # cannot happen for this pattern; kept as a guard
        raise RuntimeError(f"search produced an invalid tuple {b}: {rep.failures}")
    return ParamTuple(b, ParamTuple.default_u(b))


# --- splitting field -------------------------------------------------------------------

def splitting_field_check(a, b) -> bool:
    """Whether the square classes of the a_i span the same F_2-space as the b_j."""
    support = _prime_support(list(a) + list(b))
    va = [squarefree_vector(x, support) for x in a]
    vb = [squarefree_vector(x, support) for x in b]
    return span(va) == span(vb) and f2_rank(vb) == len(vb)


def galois_coordinates(x, b) -> int | None:
    """The c with x = prod b_j^c_j modulo squares, or None if x is outside the span."""
    support = _prime_support([x, *b])
    target = squarefree_vector(x, support)
    vb = [squarefree_vector(y, support) for y in b]
    for c in range(1 << len(b)):
        acc = 0
        for j, v in enumerate(vb):
            if c >> j & 1:
                acc ^= v
        if acc == target:
            return c
    return None
