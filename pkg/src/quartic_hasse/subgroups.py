"""Subgroups of Sp_6(F_2): stabilizers, the fixed-point conditions on theta
characteristics, Sylow 2-subgroups and the elementary abelian subgroups of
order 32 up to conjugacy.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .symplectic import (
    DIM,
    IDENTITY_CODE,
    NVEC,
    SpElement,
    action_table,
    arf,
    closure_codes,
    conjugate_array,
    decode_array,
    encode_array,
    fixes_array,
    forms_of_sign,
    generate_sp6,
    inverse_array,
    apply_array,
    multiply_array,
)

log = logging.getLogger(__name__)

# stabilized targets for the three standard maximal subgroups
U63_VECTOR = 0b000001  # e1
U36_FORM = 0b000000  # all basis values 0, Arf invariant 0
U28_FORM = 0b001001  # Q(e1) = Q(f1) = 1, Arf invariant 1


class SubgroupError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Subgroup:
    codes: np.ndarray  # sorted int64 element codes
    generators: tuple[SpElement, ...]
    label: str = ""
    ambient: "Subgroup | None" = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    @cached_property
    def cols(self) -> np.ndarray:
        return decode_array(self.codes)

    @cached_property
    def code_set(self) -> frozenset[int]:
        return frozenset(int(c) for c in self.codes)

    def __contains__(self, g: SpElement) -> bool:
        i = np.searchsorted(self.codes, g.code)
        return bool(i < len(self.codes) and self.codes[i] == g.code)

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        i = np.minimum(np.searchsorted(self.codes, codes), len(self.codes) - 1)
        return self.codes[i] == codes

    def elements(self) -> list[SpElement]:
        return [SpElement(int(c)) for c in self.codes]

    def key(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.codes)


def subgroup_closure(gens, label: str = "", ambient: Subgroup | None = None) -> Subgroup:
    gens = tuple(gens)
    return Subgroup(closure_codes(list(gens)), gens, label, ambient)


@lru_cache(maxsize=1)
def full_group() -> Subgroup:
    table = generate_sp6()
    return Subgroup(table.codes, table.generators, "sp6")


def find_generators(codes: np.ndarray, seed: int = 0) -> tuple[SpElement, ...]:
    """A small generating set for the group with element codes ``codes``.

    Random elements are added until their closure has the full order.
    """
    rng = np.random.default_rng(seed)
    gens: list[SpElement] = []
    while True:
        gens.append(SpElement(int(codes[rng.integers(len(codes))])))
        if len(gens) >= 2 and len(closure_codes(gens, limit=len(codes))) == len(codes):
            return tuple(gens)


def _stabilizer_mask(cols: np.ndarray, kind: str, target: int) -> np.ndarray:
    if kind == "vector":
        # g x = x; x is a sum of basis vectors
        img = apply_array(cols, target)
        return img == target
    return fixes_array(cols, target)


def stabilizer_subgroup(target: int, kind: str = "form") -> Subgroup:
    """Stabilizer in Sp_6(F_2) of a quadratic form or of a nonzero vector.

    ``kind`` is "form" (``target`` = basis values) or "vector".  Index 36, 28
    or 63 for even forms, odd forms and nonzero vectors respectively.
    """
    if kind == "vector":
        if not 0 < target < NVEC:
            raise ValueError("the stabilizer of the zero vector is the whole group")
        label = "u63"
    elif kind == "form":
        if not 0 <= target < NVEC:
            raise ValueError(f"not a form: {target}")
        label = "u36" if arf(target) == 0 else "u28"
    else:
        raise ValueError(f"unknown stabilizer kind {kind!r}")
    G = full_group()
    codes = G.codes[_stabilizer_mask(G.cols, kind, target)]
    return Subgroup(codes, find_generators(codes), label, G)


@lru_cache(maxsize=None)
def standard_stabilizer(label: str) -> Subgroup:
    """The fixed representatives: U63 = Stab(e1), U36 and U28 = Stab of a form."""
    if label == "sp6":
        return full_group()
    if label == "u63":
        return stabilizer_subgroup(U63_VECTOR, "vector")
    if label == "u36":
        return stabilizer_subgroup(U36_FORM, "form")
    if label == "u28":
        return stabilizer_subgroup(U28_FORM, "form")
    raise ValueError(f"unknown ambient {label!r}; expected sp6, u63, u36 or u28")


# --- condition (*)+ / (*)- ------------------------------------------------------

COMMON_FIXED = "common-fixed-form"
FIXED_POINT_FREE = "fixed-point-free-element"


@dataclass(frozen=True)
class CondReport:
    """Outcome of the fixed-point condition for one sign.

    The condition holds when no form of the given Arf sign is fixed by the
    whole group, yet every single element fixes at least one such form.
    ``failing`` names whichever of the two requirements broke.
    """

    sign: str
    common_fixed: frozenset[int]
    per_element_fixed_counts: dict[int, int]
    failing: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failing

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "pass": self.passed,
            "failing": list(self.failing),
            "common_fixed": sorted(self.common_fixed),
            "per_element_fixed_counts": {str(k): v for k, v in sorted(self.per_element_fixed_counts.items())},
        }


def fixed_count_array(cols: np.ndarray, sign: str) -> np.ndarray:
    counts = np.zeros(cols.shape[:-1], dtype=np.int64)
    for q in forms_of_sign(sign):
        counts += fixes_array(cols, q)
    return counts


def check_star(G: Subgroup, sign: str) -> CondReport:
    forms = forms_of_sign(sign)
    masks = np.stack([fixes_array(G.cols, q) for q in forms])
    common = frozenset(q for q, m in zip(forms, masks) if m.all())
    counts = masks.sum(axis=0)
    failing = []
    if common:
        failing.append(COMMON_FIXED)
    if (counts == 0).any():
        failing.append(FIXED_POINT_FREE)
    per_element = {int(c): int(n) for c, n in zip(G.codes, counts)}
    return CondReport(sign, common, per_element, tuple(failing))


# --- Sylow 2-subgroups ------------------------------------------------------------

def two_part(n: int) -> int:
    return n & -n


def _conjugates_in(A: np.ndarray, Ainv: np.ndarray, p: SpElement, P: Subgroup) -> np.ndarray:
    # x p x^-1 for every row x of A, tested for membership in P
    pt = action_table(p)
    conj = np.stack([apply_array(A, pt[Ainv[:, j]]) for j in range(DIM)], axis=-1)
    return P.contains_codes(encode_array(conj))


def sylow2(G: Subgroup) -> Subgroup:
    """A Sylow 2-subgroup of G.

    Starting from the trivial group, repeatedly adjoin an element x of the
    normalizer with x not in P but x^2 in P.  Such an x exists while P is not
    Sylow, because N_G(P)/P then has even order.
    """
    target = two_part(G.order)
    A = G.cols
    Ainv = inverse_array(A)
    gens: list[SpElement] = []
    P = subgroup_closure(gens, ambient=G)
    while P.order < target:
        normal = np.ones(len(A), dtype=bool)
        for p in gens:
            normal &= _conjugates_in(A, Ainv, p, P)
        normal &= ~P.contains_codes(G.codes)
        squares = encode_array(multiply_array(A, A))
        normal &= P.contains_codes(squares)
        if not normal.any():
            raise SubgroupError(f"cannot extend 2-subgroup of order {P.order} in group of order {G.order}")
        x = SpElement(int(G.codes[np.flatnonzero(normal)[0]]))
        gens.append(x)
        P = subgroup_closure(gens, ambient=G)
        if P.order & (P.order - 1):
            raise SubgroupError(f"extension produced order {P.order}, not a power of 2")
    return Subgroup(P.codes, P.generators, f"sylow2({G.label})", G)


@lru_cache(maxsize=None)
def standard_sylow2(label: str) -> Subgroup:
    return sylow2(standard_stabilizer(label))


# --- elementary abelian subgroups of order 32 ----------------------------------

def multiplication_table(P: Subgroup) -> np.ndarray:
    """table[i, j] = index of P[i] * P[j] in the sorted code list."""
    n = P.order
    table = np.empty((n, n), dtype=np.int32)
    cols = P.cols
    for i, c in enumerate(P.codes):
        at = action_table(SpElement(int(c)))
        prod = encode_array(at[cols])
        table[i] = np.searchsorted(P.codes, prod)
    return table


def enumerate_elementary_abelian(P: Subgroup, rank: int) -> list[Subgroup]:
    """All subgroups of P isomorphic to F_2^rank.

    Grown one rank at a time: an elementary abelian subgroup A extends by any
    involution outside A commuting with all of A.
    """
    mul = multiplication_table(P)
    ident = int(np.searchsorted(P.codes, IDENTITY_CODE))
    idx = np.arange(P.order)
    invol = idx[(mul[idx, idx] == ident) & (idx != ident)]
    commute = mul == mul.T
    level = {frozenset([ident])}
    for _ in range(rank):
        nxt = set()
        for A in level:
            members = np.fromiter(A, dtype=np.int64)
            ok = commute[np.ix_(invol, members)].all(axis=1)
            for x in invol[ok]:
                x = int(x)
                if x in A:
                    continue
                nxt.add(A | frozenset(int(mul[a, x]) for a in A))
        level = nxt
        log.debug("rank %d: %d elementary abelian subgroups", _ + 1, len(level))
    out = []
    for A in level:
        codes = np.sort(P.codes[sorted(A)])
        out.append(Subgroup(codes, canonical_generators(codes), "", P))
    out.sort(key=lambda s: s.key())
    return out


def enumerate_ea32(P: Subgroup) -> list[Subgroup]:
    if P.order & (P.order - 1):
        raise ValueError("enumerate_ea32 expects a 2-group")
    return enumerate_elementary_abelian(P, 5)


def canonical_generators(codes) -> tuple[SpElement, ...]:
    """Greedy basis of an elementary abelian 2-group in increasing code order."""
    span = {IDENTITY_CODE}
    gens = []
    for c in sorted(int(c) for c in codes):
        if c in span:
            continue
        g = SpElement(c)
        gens.append(g)
        span |= {(SpElement(s) * g).code for s in span}
    return tuple(gens)


def is_elementary_abelian(H: Subgroup) -> bool:
    cols = H.cols
    n = len(cols)
    a = np.repeat(cols, n, axis=0)
    b = np.tile(cols, (n, 1))
    ab = encode_array(multiply_array(a, b))
    ba = encode_array(multiply_array(b, a))
    squares = encode_array(multiply_array(cols, cols))
    return bool((ab == ba).all() and (squares == IDENTITY_CODE).all())


# --- conjugacy classes --------------------------------------------------------------

@dataclass(frozen=True)
class EAClass:
    representative: Subgroup
    ambient_label: str
    orbit_size: int
    normalizer_order: int


def conjugation_orbit(rows: np.ndarray, generators) -> np.ndarray:
    """All conjugates of a subgroup, as sorted rows of element codes.

    ``rows`` is a (1, k) array holding one sorted subgroup.
    """
    seen = {rows[0].tobytes()}
    orbit = [rows]
    frontier = rows
    k = rows.shape[1]
    while len(frontier):
        cols = decode_array(frontier.reshape(-1))
        found = []
        for g in generators:
            img = encode_array(conjugate_array(g, cols)).reshape(-1, k)
            img.sort(axis=1)
            found.append(img)
        cand = np.unique(np.concatenate(found), axis=0)
        keep = []
        for r in cand:
            b = r.tobytes()
            if b not in seen:
                seen.add(b)
                keep.append(r)
        frontier = np.array(keep, dtype=np.int64).reshape(-1, k)
        if len(frontier):
            orbit.append(frontier)
    return np.concatenate(orbit)


def _lex_min(rows: np.ndarray) -> np.ndarray:
    order = np.lexsort(rows.T[::-1])
    return rows[order[0]]


def classify_up_to_conjugacy(subs: list[Subgroup], ambient: Subgroup) -> list[EAClass]:
    """Partition ``subs`` into conjugacy classes under ``ambient``.

    Each class is explored by breadth-first closure under conjugation by the
    ambient generators; the representative is the lexicographically least
    sorted code list in the orbit.  Orbits are disjoint by construction, so
    distinct representatives are certified non-conjugate.
    """
    pending = {s.key(): s for s in subs}
    classes = []
    while pending:
        key = min(pending)
        rows = np.array([key], dtype=np.int64)
        orbit = conjugation_orbit(rows, ambient.generators)
        for r in orbit:
            pending.pop(tuple(int(c) for c in r), None)
        rep_codes = _lex_min(orbit)
        rep = Subgroup(rep_codes, canonical_generators(rep_codes), "", ambient)
        classes.append(EAClass(rep, ambient.label, len(orbit), ambient.order // len(orbit)))
        log.info("class %d in %s: orbit %d", len(classes), ambient.label, len(orbit))
    classes.sort(key=lambda c: c.representative.key())
    return classes


@lru_cache(maxsize=None)
def ea32_classes(label: str) -> tuple[EAClass, ...]:
    """Classes of F_2^5 subgroups in one of sp6 / u63 / u36 / u28.

    Every 2-subgroup lies in a Sylow 2-subgroup, so scanning one Sylow
    subgroup meets every class.
    """
    ambient = standard_stabilizer(label)
    P = standard_sylow2(label)
    return tuple(classify_up_to_conjugacy(enumerate_ea32(P), ambient))


@lru_cache(maxsize=1)
def pick_certified_E() -> Subgroup:
    """The first F_2^5 class of U63 = Stab(e1) satisfying both conditions."""
    for cls in ea32_classes("u63"):
        E = cls.representative
        if check_star(E, "-").passed and check_star(E, "+").passed:
            return Subgroup(E.codes, E.generators, "E", standard_stabilizer("u63"))
    raise SubgroupError("no F_2^5 subgroup of U63 satisfies both conditions")


def galvec_to_element(bits, gens) -> SpElement:
    """Image of a Galois vector under e_i -> i-th generator."""
    g = SpElement.identity()
    for b, h in zip(bits, gens):
        if b:
            g = g * h
    return g
