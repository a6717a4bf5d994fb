"""The symplectic space F_2^6, its 64 quadratic forms, and Sp_6(F_2).

Vectors are 6-bit integers; bit ``i`` is the coordinate on the basis vector
``(e1, e2, e3, f1, f2, f3)[i]``.  A group element is a 6x6 bit matrix stored
column-wise: column ``i`` is the image of basis vector ``i``.  Packing the six
columns as ``sum(col[i] << 6*i)`` gives a 36-bit integer code used for hashing,
sorting and membership tests.

A quadratic form with the standard polar form is determined by its six values
on the basis, so a form is also a 6-bit integer (its "basis values").
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DIM = 6
NVEC = 64
SP6_ORDER = 1_451_520
BASIS_NAMES = ("e1", "e2", "e3", "f1", "f2", "f3")

_POW64 = np.array([1 << (6 * i) for i in range(DIM)], dtype=np.int64)
# basis index i <-> its symplectic partner
_PARTNER = (3, 4, 5, 0, 1, 2)


def parity(n: int) -> int:
    return bin(n).count("1") & 1


def pairing(x: int, y: int) -> int:
    """Standard symplectic pairing: <e_i, f_j> = delta_ij, all else zero."""
    return parity(((x & 7) & (y >> 3)) ^ ((x >> 3) & (y & 7)))


def base_value(x: int) -> int:
    # the form with all basis values 0: sum_i x_{e_i} x_{f_i}
    return parity(x & (x >> 3) & 7)


def eval_form(q: int, x: int) -> int:
    """Value of the form with basis values ``q`` at the vector ``x``.

    Expanding Q(sum x_i b_i) with the polarization identity gives
    sum x_i Q(b_i) + sum_{i<j} x_i x_j <b_i, b_j>, and only the pairs
    (e_i, f_i) pair nontrivially.
    """
    return parity(x & q) ^ base_value(x)


def arf(q: int) -> int:
    return parity(q & (q >> 3) & 7)


# FORM_TABLE[q, x] = Q_q(x)
FORM_TABLE = np.array(
    [[eval_form(q, x) for x in range(NVEC)] for q in range(NVEC)], dtype=np.uint8
)
PAIRING_TABLE = np.array(
    [[pairing(x, y) for y in range(NVEC)] for x in range(NVEC)], dtype=np.uint8
)


@dataclass(frozen=True)
class FormSet:
    omega_plus: tuple[int, ...]
    omega_minus: tuple[int, ...]

    def of_sign(self, sign: str) -> tuple[int, ...]:
        return self.omega_plus if sign == "+" else self.omega_minus


def all_forms() -> FormSet:
    plus = tuple(q for q in range(NVEC) if arf(q) == 0)
    minus = tuple(q for q in range(NVEC) if arf(q) == 1)
    return FormSet(plus, minus)


def forms_of_sign(sign: str) -> tuple[int, ...]:
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return all_forms().of_sign(sign)


def format_vector(x: int) -> str:
    return "+".join(BASIS_NAMES[i] for i in range(DIM) if x >> i & 1) or "0"


# --- scalar group elements -------------------------------------------------

def encode(cols) -> int:
    return sum(int(c) << (6 * i) for i, c in enumerate(cols))


def decode(code: int) -> tuple[int, ...]:
    return tuple((code >> (6 * i)) & 63 for i in range(DIM))


def _apply_cols(cols, x: int) -> int:
    r = 0
    for i in range(DIM):
        if x >> i & 1:
            r ^= cols[i]
    return r


IDENTITY_CODE = encode(1 << i for i in range(DIM))


@dataclass(frozen=True, order=True)
class SpElement:
    """A 6x6 matrix over F_2 acting on column vectors, stored by its code."""

    code: int

    @classmethod
    def from_columns(cls, cols) -> "SpElement":
        return cls(encode(cols))

    @classmethod
    def identity(cls) -> "SpElement":
        return cls(IDENTITY_CODE)

    @classmethod
    def transvection(cls, v: int) -> "SpElement":
        """x -> x + <x, v> v."""
        if not 0 < v < NVEC:
            raise ValueError("transvection needs a nonzero vector")
        return cls.from_columns((1 << i) ^ (v if pairing(1 << i, v) else 0) for i in range(DIM))

    @property
    def columns(self) -> tuple[int, ...]:
        return decode(self.code)

    def __call__(self, x: int) -> int:
        return _apply_cols(self.columns, x)

    def __mul__(self, other: "SpElement") -> "SpElement":
        cols = self.columns
        return SpElement(encode(_apply_cols(cols, c) for c in other.columns))

    def inverse(self) -> "SpElement":
        # for symplectic g, g^-1 = J g^T J
        cols = self.columns
        inv = []
        for c in range(DIM):
            col = 0
            for r in range(DIM):
                if cols[_PARTNER[r]] >> _PARTNER[c] & 1:
                    col |= 1 << r
            inv.append(col)
        return SpElement(encode(inv))

    def order(self) -> int:
        k, p = 1, self
        while p.code != IDENTITY_CODE:
            p = p * self
            k += 1
        return k

    def matrix(self) -> list[list[int]]:
        cols = self.columns
        return [[cols[c] >> r & 1 for c in range(DIM)] for r in range(DIM)]


def is_symplectic(g: SpElement) -> bool:
    """Gram identity: <g b_i, g b_j> = <b_i, b_j> on all basis pairs."""
    cols = g.columns
    return all(
        pairing(cols[i], cols[j]) == pairing(1 << i, 1 << j)
        for i in range(DIM)
        for j in range(i + 1, DIM)
    )


def act(g: SpElement, q: int) -> int:
    """(g.Q)(x) = Q(g^-1 x); returns the basis values of g.Q."""
    inv = g.inverse().columns
    return sum(eval_form(q, inv[i]) << i for i in range(DIM))


def fixes(g: SpElement, q: int) -> bool:
    # g.Q = Q  <=>  Q o g = Q  <=>  Q(g b_i) = Q(b_i) on the basis
    cols = g.columns
    return all(eval_form(q, cols[i]) == (q >> i & 1) for i in range(DIM))


def fixed_forms(g: SpElement, sign: str) -> frozenset[int]:
    return frozenset(q for q in forms_of_sign(sign) if fixes(g, q))


# --- vectorized helpers over arrays of codes --------------------------------

def decode_array(codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    shifts = np.arange(0, 6 * DIM, 6, dtype=np.int64)
    return ((codes[..., None] >> shifts) & 63).astype(np.uint8)


def encode_array(cols: np.ndarray) -> np.ndarray:
    return cols.astype(np.int64) @ _POW64


def apply_array(cols: np.ndarray, x: np.ndarray | int) -> np.ndarray:
    """Row-wise matrix-vector product: cols (n, 6), x scalar or (n,)."""
    x = np.asarray(x, dtype=np.uint8)
    out = np.zeros(cols.shape[:-1], dtype=np.uint8)
    for i in range(DIM):
        bit = (x >> i) & 1
        out ^= cols[..., i] * bit
    return out


def multiply_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise products a[k] * b[k] (columns in, columns out)."""
    return np.stack([apply_array(a, b[..., j]) for j in range(DIM)], axis=-1)


def inverse_array(cols: np.ndarray) -> np.ndarray:
    out = np.zeros_like(cols)
    for c in range(DIM):
        for r in range(DIM):
            bit = (cols[..., _PARTNER[r]] >> _PARTNER[c]) & 1
            out[..., c] |= bit << r
    return out


def action_table(g: SpElement) -> np.ndarray:
    """Images of all 64 vectors under g, for left multiplication by lookup."""
    cols = g.columns
    return np.array([_apply_cols(cols, x) for x in range(NVEC)], dtype=np.uint8)


def conjugate_array(g: SpElement, cols: np.ndarray) -> np.ndarray:
    """g x g^-1 for every row x of ``cols``."""
    gt = action_table(g)
    ginv = g.inverse().columns
    return np.stack([gt[apply_array(cols, ginv[j])] for j in range(DIM)], axis=-1)


def fixes_array(cols: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask: which rows fix the form q."""
    ok = np.ones(cols.shape[:-1], dtype=bool)
    row = FORM_TABLE[q]
    for i in range(DIM):
        ok &= row[cols[..., i]] == (q >> i & 1)
    return ok


def is_symplectic_array(cols: np.ndarray) -> np.ndarray:
    ok = np.ones(cols.shape[:-1], dtype=bool)
    for i in range(DIM):
        for j in range(i + 1, DIM):
            ok &= PAIRING_TABLE[cols[..., i], cols[..., j]] == pairing(1 << i, 1 << j)
    return ok


# --- the full group -----------------------------------------------------------

def closure_codes(generators: list[SpElement], limit: int | None = None) -> np.ndarray:
    """Sorted codes of the group generated by ``generators``.

    Breadth-first closure under left multiplication by the generators, run on
    whole frontiers at once.
    """
    seen = np.array([IDENTITY_CODE], dtype=np.int64)
    frontier = decode_array(seen)
    tables = [action_table(g) for g in generators]
    while len(frontier) and tables:
        cand = np.unique(np.concatenate([encode_array(t[frontier]) for t in tables]))
        new = cand[~np.isin(cand, seen, assume_unique=True)]
        seen = np.union1d(seen, new)
        if limit is not None and len(seen) > limit:
            raise ValueError(f"closure exceeds {limit} elements")
        frontier = decode_array(new)
    return seen


def sp6_generators() -> list[SpElement]:
    """Two elements generating Sp_6(F_2).

    The product of the transvections along the chain e1, f1, e1+e2, f2,
    e2+e3, f3 (which alone generate a copy of S_7) together with the
    transvection of e2.  ``generate_sp6`` checks the closure has full order.
    """
    chain = [0b000001, 0b001000, 0b000011, 0b010000, 0b000110, 0b100000]
    c = SpElement.identity()
    for v in chain:
        c = c * SpElement.transvection(v)
    return [c, SpElement.transvection(0b000010)]


@dataclass(frozen=True, eq=False)
class GroupTable:
    codes: np.ndarray  # sorted int64
    generators: tuple[SpElement, ...]
    cols: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, g: SpElement) -> bool:
        i = np.searchsorted(self.codes, g.code)
        return bool(i < len(self.codes) and self.codes[i] == g.code)

    def mask(self, codes: np.ndarray) -> np.ndarray:
        i = np.searchsorted(self.codes, codes)
        i = np.minimum(i, len(self.codes) - 1)
        return self.codes[i] == codes


@lru_cache(maxsize=1)
def generate_sp6() -> GroupTable:
    gens = sp6_generators()
    codes = closure_codes(gens, limit=SP6_ORDER)
    cols = decode_array(codes)
    if len(codes) != SP6_ORDER or not is_symplectic_array(cols).all():
        raise RuntimeError(f"Sp6(F2) closure produced {len(codes)} elements")
    return GroupTable(codes, tuple(gens), cols)


def orbit_of_form(q: int, generators: list[SpElement]) -> set[int]:
    orbit, todo = {q}, [q]
    while todo:
        r = todo.pop()
        for g in generators:
            s = act(g, r)
            if s not in orbit:
                orbit.add(s)
                todo.append(s)
    return orbit


def orbit_of_vector(x: int, generators: list[SpElement]) -> set[int]:
    orbit, todo = {x}, [x]
    while todo:
        y = todo.pop()
        for g in generators:
            z = g(y)
            if z not in orbit:
                orbit.add(z)
                todo.append(z)
    return orbit
