import copy
from fractions import Fraction
import json
from pathlib import Path

import pytest

import quartic_hasse.certify as certify_mod
from quartic_hasse.arith import INF, ParamTuple, bits
from quartic_hasse.certify import (
    CertificationFailure,
    certify_with_retry,
    check_place,
    recheck,
    run_certify,
    verdicts_from,
)
from quartic_hasse.subgroups import galvec_to_element, pick_certified_E
from quartic_hasse.symplectic import SpElement, arf, fixes

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "paper-example"
KEYS = {"params", "quartic", "group", "arithmetic", "geometry", "verdicts", "versions"}


@pytest.fixture(scope="module")
def cert(example_params):
    return run_certify(example_params)


@pytest.fixture
def doc(cert):
    return copy.deepcopy(cert.to_json())


def test_example_verdicts(cert):
    assert cert.verdicts == {"bitangent_hasse_failure": True, "sdr_hasse_failure": True}
    assert cert.passed


def test_schema(doc):
    assert set(doc) == KEYS
    json.loads(json.dumps(doc))
    assert doc["quartic"] == (FIXTURES / "quartic.txt").read_text().strip()


def test_matches_golden(doc):
    golden = json.loads((FIXTURES / "certificate.json").read_text())
    doc.pop("versions")
    assert doc == golden


def test_recheck_agrees(doc):
    res = recheck(doc)
    assert res["agrees"]
    assert all(res["consistency"].values())


def test_places(doc):
    places = [p["place"] for p in doc["arithmetic"]["places"]]
    assert places[-1] == INF
    assert {2, 17, 89, 257, 769}.issubset(places)
    assert all(p in places for p in (3, 5, 7, 97))
    assert all(p["cyclic"] for p in doc["arithmetic"]["places"])


def test_place_elements_fix_odd_forms(doc):
    gens = [SpElement(c) for c in doc["group"]["generators"]]
    E = pick_certified_E()
    for row in doc["arithmetic"]["places"]:
        g = galvec_to_element(row["generator"], gens)
        assert g.code == row["element"] and g in E
        assert row["fixed_odd_forms"]
        for q in row["fixed_odd_forms"]:
            assert arf(q) == 1 and fixes(g, q)


@pytest.mark.parametrize("path,value,verdicts", [
    (("group", "star_minus", "common_fixed"), [7], (False, False)),
    (("group", "star_plus", "common_fixed"), [0], (True, False)),
    (("geometry", "smooth"), False, (False, False)),
    (("geometry", "rational_point", "on_curve"), False, (True, False)),
    (("arithmetic", "splitting_field_check"), False, (False, False)),
])
def test_tampering_changes_verdicts(doc, path, value, verdicts):
    node = doc
    for k in path[:-1]:
        node = node[k]
    node[path[-1]] = value
    v = verdicts_from(doc)
    assert (v["bitangent_hasse_failure"], v["sdr_hasse_failure"]) == verdicts
    assert not recheck(doc)["agrees"]


def test_noncyclic_place_fails(doc):
    doc["arithmetic"]["places"][0]["decomposition"].append([1, 1, 0, 0, 0])
    doc["arithmetic"]["places"][0]["decomposition"].append([0, 1, 0, 0, 0])
    assert verdicts_from(doc)["bitangent_hasse_failure"] is False


def test_zero_count_element_fails(doc):
    counts = doc["group"]["star_minus"]["per_element_fixed_counts"]
    counts[next(iter(counts))] = 0
    assert not verdicts_from(doc)["bitangent_hasse_failure"]


def test_invalid_params():
    with pytest.raises(CertificationFailure) as info:
        run_certify(ParamTuple((-1, 5, 89, 257, 769), Fraction(-1, 257 * 769)))
    exc = info.value
    assert exc.code == "invalid-params"
    assert 2 in {f.get("place") for f in exc.data["validation"]["failures"]}
    assert exc.to_json()["status"] == "fail"


def test_not_smooth_is_structured(example_params, monkeypatch):
    monkeypatch.setattr(certify_mod, "is_smooth", lambda f: False)
    with pytest.raises(CertificationFailure) as info:
        run_certify(example_params)
    assert info.value.code == "not-smooth"
    assert info.value.data["suggested_u"][0] == "-2/197633"


def test_retry_after_not_smooth(example_params, monkeypatch):
    calls = []
    real = certify_mod.is_smooth

    def flaky(f):
        calls.append(f)
        return len(calls) > 1 and real(f)

    monkeypatch.setattr(certify_mod, "is_smooth", flaky)
    cert = certify_with_retry(example_params)
    assert [a["result"] for a in cert.attempts] == ["not-smooth", "pass"]
    assert cert.params.u == example_params.u * 2
    assert cert.passed
    assert "attempts" in cert.to_json()


def test_retries_exhausted(example_params, monkeypatch):
    monkeypatch.setattr(certify_mod, "is_smooth", lambda f: False)
    with pytest.raises(CertificationFailure) as info:
        certify_with_retry(example_params, max_attempts=3)
    assert info.value.code == "retries-exhausted"
    assert len(info.value.data["attempts"]) == 3


def test_extra_sample_places(example_params):
    c = run_certify(example_params, sample_places=[1009, 7919], bound=10)
    places = [p["place"] for p in c.arithmetic["places"]]
    assert places == [2, 3, 5, 7, 17, 89, 257, 769, 1009, 7919, INF]
    assert c.passed


def test_check_place(example_params):
    row = check_place(example_params, 3)
    assert tuple(row["generator"]) == (1, 1, 1, 1, 0)
    assert len(row["fixed_odd_forms"]) >= 1
    row = check_place(example_params, 17)
    assert row["decomposition"] == [[0, 0, 0, 0, 0], [0, 1, 0, 0, 0]]
    assert bits(0b00010) == (0, 1, 0, 0, 0)


def test_config():
    from quartic_hasse.certify import CertifyConfig

    with pytest.raises(ValueError):
        CertifyConfig(bound=1)
    with pytest.raises(ValueError):
        CertifyConfig(max_attempts=0)
    with pytest.raises(ValueError):
        CertifyConfig(max_attempts=50)
