"""Group-theoretic facts that the certificates rely on, recomputed from
scratch and compared with their expected values."""
from __future__ import annotations

from .subgroups import (
    U28_FORM,
    U36_FORM,
    U63_VECTOR,
    check_star,
    ea32_classes,
    full_group,
    standard_stabilizer,
)
from .symplectic import NVEC, SP6_ORDER, forms_of_sign, orbit_of_form, orbit_of_vector

EXPECTED = {
    "sp6_order": SP6_ORDER,
    "even_forms": 36,
    "odd_forms": 28,
    "stabilizer_orders": {"u28": 51840, "u36": 40320, "u63": 23040},
    "orbit_sizes": {"u28": 28, "u36": 36, "u63": 63},
    "ea32_classes": {"sp6": 6, "u63": 13, "u36": 0},
}


def _class_report(label: str) -> dict:
    classes = ea32_classes(label)
    rows = []
    for cls in classes:
        E = cls.representative
        rows.append({
            "generators": [g.code for g in E.generators],
            "orbit_size": cls.orbit_size,
            "normalizer_order": cls.normalizer_order,
            "star_plus": check_star(E, "+").passed,
            "star_minus": check_star(E, "-").passed,
        })
    return {"count": len(classes), "classes": rows}


def class_count(label: str) -> int:
    return len(ea32_classes(label))


def group_audit(include_classes: bool = True) -> dict:
    G = full_group()
    gens = list(G.generators)
    stab = {lab: standard_stabilizer(lab).order for lab in ("u28", "u36", "u63")}
    orbits = {
        "u28": len(orbit_of_form(U28_FORM, gens)),
        "u36": len(orbit_of_form(U36_FORM, gens)),
        "u63": len(orbit_of_vector(U63_VECTOR, gens)),
    }
    found = {
        "sp6_order": G.order,
        "even_forms": len(forms_of_sign("+")),
        "odd_forms": len(forms_of_sign("-")),
        "stabilizer_orders": stab,
        "orbit_sizes": orbits,
    }
    report = {"found": found, "expected": dict(EXPECTED)}
    report["orbit_stabilizer"] = all(stab[k] * orbits[k] == G.order for k in stab)
    report["transitive"] = {
        "even_forms": orbits["u36"] == 36,
        "odd_forms": orbits["u28"] == 28,
        "nonzero_vectors": orbits["u63"] == NVEC - 1,
    }
    if include_classes:
        classes = {lab: _class_report(lab) for lab in ("sp6", "u63", "u36")}
        found["ea32_classes"] = {lab: c["count"] for lab, c in classes.items()}
        report["classes"] = classes
        report["sp6_classes_satisfy_both"] = all(
            r["star_plus"] and r["star_minus"] for r in classes["sp6"]["classes"]
        )
    else:
        report["expected"].pop("ea32_classes")
    ok = all(found[k] == v for k, v in report["expected"].items())
    ok = ok and report["orbit_stabilizer"] and all(report["transitive"].values())
    ok = ok and report.get("sp6_classes_satisfy_both", True)
    report["pass"] = ok
    return report
