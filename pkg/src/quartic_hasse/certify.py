"""End-to-end certificate: the conic-bundle quartic of a parameter tuple
together with the group, arithmetic and geometric evidence that it has no
rational bitangent and no rational symmetric determinantal representation,
although it has both everywhere locally.

The verdicts are a pure function of the stored sections, so ``recheck`` can
re-derive them from the JSON alone.
"""
from __future__ import annotations

import logging
import platform
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .arith import (
    INF,
    ParamTuple,
    bits,
    certificate_places,
    decomposition_generator,
    galois_coordinates,
    splitting_field_check,
    validate_params,
)
from .conic import (
    ConstructionError,
    NotSmooth,
    conjugate_line,
    construct,
    fiber_splits,
    is_smooth,
    line_product,
    proportional,
    verify_bitangent,
)
from .exact import format_rational
from .subgroups import check_star, galvec_to_element, pick_certified_E
from .symplectic import fixed_forms

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
RETRY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)

PLACE_POLICY = (
    "every ramified prime, 2, the real place and all primes up to the bound are "
    "checked; at any other prime the extension is unramified, so the "
    "decomposition group is generated by Frobenius and is cyclic"
)


@dataclass(frozen=True)
class CertifyConfig:
    bound: int = 100  # every prime up to here is checked
    sample_places: tuple = ()  # extra spot checks
    max_attempts: int = 1  # > 1 re-samples u on a singular quartic
    retry_primes: tuple = RETRY_PRIMES

    def __post_init__(self):
        if self.bound < 2 or self.max_attempts < 1:
            raise ValueError("bound must be >= 2 and max_attempts >= 1")
        if self.max_attempts > len(self.retry_primes) + 1:
            raise ValueError(f"at most {len(self.retry_primes) + 1} attempts")


class CertificationFailure(RuntimeError):
    """A structured reason why no certificate could be produced."""

    def __init__(self, code: str, detail: str, data: dict | None = None):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail
        self.data = data or {}

    def to_json(self) -> dict:
        return {"status": "fail", "code": self.code, "detail": self.detail, **self.data}


@dataclass
class Certificate:
    params: ParamTuple
    quartic: str
    group: dict
    arithmetic: dict
    geometry: dict
    verdicts: dict
    attempts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "quartic": self.quartic,
            "group": self.group,
            "arithmetic": self.arithmetic,
            "geometry": self.geometry,
            "verdicts": self.verdicts,
            "versions": versions(),
            **({"attempts": self.attempts} if self.attempts else {}),
        }


def versions() -> dict:
    return {
        "package": __version__,
        "schema": SCHEMA_VERSION,
        "python": platform.python_version(),
    }


# --- sections ---------------------------------------------------------------------------

def group_section() -> tuple[dict, tuple]:
    E = pick_certified_E()
    minus, plus = check_star(E, "-"), check_star(E, "+")
    sec = {
        "ambient": "u63",
        "order": E.order,
        "generators": [g.code for g in E.generators],
        "generator_matrices": [g.matrix() for g in E.generators],
        "galois_map": "i-th basis vector of Gal(L/Q) -> i-th generator",
        "star_minus": minus.to_json(),
        "star_plus": plus.to_json(),
    }
    return sec, E.generators


def arithmetic_section(params: ParamTuple, places, gens) -> dict:
    out = []
    for v in places:
        pc = decomposition_generator(params, v)
        row = pc.to_json()
        if pc.cyclic:
            g = galvec_to_element(bits(pc.generator), gens)
            row["element"] = g.code
            row["fixed_odd_forms"] = sorted(fixed_forms(g, "-"))
            row["fixed_even_forms"] = sorted(fixed_forms(g, "+"))
        out.append(row)
    a = [*params.a, _a6(params)]
    return {
        "places": out,
        "place_policy": PLACE_POLICY,
        "splitting_field_check": splitting_field_check(a, params.b),
        "root_coordinates": [list(bits(galois_coordinates(x, params.b) or 0)) for x in a],
    }


def _a6(params: ParamTuple) -> Fraction:
    out = params.u * params.u
    for x in params.a:
        out *= x
    return out


def geometry_section(bundle) -> dict:
    f = bundle.quartic
    smooth = is_smooth(f)
    if not smooth:
        return {"smooth": False}
    fibers = []
    for fs in fiber_splits(bundle):
        l1, l2 = fs.lines
        prod = line_product(fs.lines)
        conic = bundle.M.at(Fraction(1), fs.root)
        reproduces = all(
            prod.get(e, 0) == fs.scale * _quadric_coeff(conic, e) for e in _QUADRIC_EXPONENTS
        )
        row = fs.to_json()
        row["bitangent"] = [verify_bitangent(f, l1), verify_bitangent(f, l2)]
        row["conjugate_pair"] = proportional(conjugate_line(l1), l2)
        row["product_is_fiber"] = reproduces
        fibers.append(row)
    return {
        "smooth": True,
        "F": bundle.F.to_text(),
        "g": bundle.g.to_text(),
        "h": bundle.h.to_text(),
        "a6": format_rational(bundle.a6),
        "fibers": fibers,
        "rational_point": {"point": [0, 1, 0], "on_curve": f(0, 1, 0) == 0},
    }


_QUADRIC_EXPONENTS = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def _quadric_coeff(A, e) -> Fraction:
    idx = [i for i in range(3) for _ in range(e[i])]
    i, j = idx
    return A[i][j] if i == j else 2 * A[i][j]


# --- verdicts ----------------------------------------------------------------------------

def verdicts_from(doc: dict) -> dict:
    """Both verdicts, recomputed from stored sections only."""
    group, arith, geo = doc["group"], doc["arithmetic"], doc["geometry"]
    minus = _star_pass(group["star_minus"])
    plus = _star_pass(group["star_plus"])
    smooth = bool(geo.get("smooth"))
    places = arith["places"]
    cyclic = bool(places) and all(len(p["decomposition"]) <= 2 for p in places)
    bit = minus and smooth and cyclic and bool(arith["splitting_field_check"])
    point = bool(geo.get("rational_point", {}).get("on_curve"))
    return {
        "bitangent_hasse_failure": bit,
        "sdr_hasse_failure": bit and plus and point,
    }


def _star_pass(rep: dict) -> bool:
    counts = rep["per_element_fixed_counts"].values()
    return not rep["common_fixed"] and all(n > 0 for n in counts)


def consistency_from(doc: dict) -> dict:
    """Cross-checks that do not enter the verdicts but must hold in any
    passing certificate."""
    geo, places = doc["geometry"], doc["arithmetic"]["places"]
    fibers = geo.get("fibers", [])
    return {
        "fiber_lines_bitangent": bool(fibers) and all(all(f["bitangent"]) for f in fibers),
        "fiber_lines_conjugate": bool(fibers) and all(f["conjugate_pair"] for f in fibers),
        "fiber_products": bool(fibers) and all(f["product_is_fiber"] for f in fibers),
        "place_elements_fix_odd_form": all(p.get("fixed_odd_forms") for p in places),
    }


def recheck(doc: dict) -> dict:
    """Recompute verdicts from a certificate document and compare with the
    stored ones."""
    again = verdicts_from(doc)
    return {"verdicts": again, "consistency": consistency_from(doc), "agrees": again == doc.get("verdicts")}


# --- orchestration ----------------------------------------------------------------------

def run_certify(params: ParamTuple, sample_places=None, bound: int = 100) -> Certificate:
    """Build the quartic for ``params`` and certify it.

    ``sample_places`` adds places to the default set (ramified primes, 2,
    the real place and every prime up to ``bound``).
    Raises CertificationFailure on invalid parameters or a construction error;
    a singular quartic raises it with code "not-smooth".
    """
    rep = validate_params(params.b)
    if not rep.passed:
        raise CertificationFailure("invalid-params", "validation failed", {"validation": rep.to_json()})
    try:
        bundle = construct(params.a, params.u)
        geometry = geometry_section(bundle)
    except ConstructionError as exc:
        raise CertificationFailure(exc.code, str(exc), {"params": params.to_json()}) from exc
    if not geometry["smooth"]:
        raise CertificationFailure(
            NotSmooth.code,
            "the quartic is singular; retry with another u",
            {"params": params.to_json(), "suggested_u": [format_rational(params.u * p) for p in RETRY_PRIMES[:3]]},
        )
    group, gens = group_section()
    places = certificate_places(params.b, bound)
    for v in sample_places or ():
        if v not in places:
            places.insert(-1, v)
    places = sorted((v for v in places if v != INF)) + [INF]
    arithmetic = arithmetic_section(params, places, gens)
    doc = {"group": group, "arithmetic": arithmetic, "geometry": geometry}
    return Certificate(params, bundle.quartic.to_text(), group, arithmetic, geometry, verdicts_from(doc))


def certify(params: ParamTuple, config: CertifyConfig = CertifyConfig()) -> Certificate:
    if config.max_attempts == 1:
        return run_certify(params, config.sample_places, config.bound)
    return certify_with_retry(params, config.sample_places, config.bound, config.max_attempts, config.retry_primes)


def certify_with_retry(params: ParamTuple, sample_places=None, bound: int = 100, max_attempts: int = 4,
                       retry_primes=RETRY_PRIMES):
    """run_certify, re-sampling u on a singular quartic or a degenerate root set.

    Each retry multiplies the original u by the next small prime; every
    attempt is recorded on the returned certificate (or on the raised failure).
    """
    attempts = []
    u0 = params.u
    for k in range(max_attempts):
        u = u0 if k == 0 else u0 * retry_primes[k - 1]
        p = params.with_u(u)
        try:
            cert = run_certify(p, sample_places, bound)
        except CertificationFailure as exc:
            attempts.append({"u": format_rational(u), "result": exc.code})
            log.info("attempt %d with u = %s failed: %s", k + 1, u, exc.code)
            if exc.code not in ("not-smooth", "degenerate-parameters"):
                exc.data["attempts"] = attempts
                raise
            continue
        attempts.append({"u": format_rational(u), "result": "pass" if cert.passed else "fail"})
        cert.attempts = attempts if len(attempts) > 1 else []
        return cert
    raise CertificationFailure(
        "retries-exhausted", f"no smooth quartic after {max_attempts} choices of u", {"attempts": attempts}
    )


def check_place(params: ParamTuple, place) -> dict:
    """Decomposition group at one place and the fixed forms of its image in E."""
    _, gens = group_section()
    return arithmetic_section(params, [place], gens)["places"][0]
