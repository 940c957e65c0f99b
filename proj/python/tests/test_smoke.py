import json
import math

import numpy as np
import pytest

import moebius_lab as ml


def test_torus_oracle():
    fam = ml.make_family("torus:n=2:k=1:r=0.6")
    rep = ml.analyze_point(fam, [0.3, 1.1])
    np.testing.assert_allclose(np.sort(rep["b"]), [-0.5, 0.5], atol=1e-10)
    assert rep["r"] == 2
    assert np.linalg.norm(rep["C"]) < 1e-10


@pytest.mark.parametrize("t", [0.7, 1.0, 2.5])
def test_cone_rho_and_ratios(t):
    fam = ml.make_family("cone:clifford:m=2:n=3")
    p = [t] + list(fam.base_point[1:])
    rep = ml.analyze_point(fam, p)
    assert rep["rho"] == pytest.approx(math.sqrt(3) / t, rel=1e-10)
    np.testing.assert_allclose(rep["b"], [-1 / math.sqrt(3), 0, 1 / math.sqrt(3)], atol=1e-10)
    ratios = {(i, j, k): v for i, j, k, v in rep["M"]}
    assert ratios[(1, 2, 3)] == pytest.approx(0.5)
    assert ratios[(1, 3, 2)] == pytest.approx(2.0)


def test_logspiral_form_is_constant():
    fam = ml.make_family("logspiral:n=2:c=1")
    norms = [np.linalg.norm(ml.analyze_point(fam, p)["C"]) for p in ([0, 0], [0.5, -1], [-1.2, 0.4])]
    np.testing.assert_allclose(norms, 1.0, rtol=1e-10)


def test_light_cone_and_stereographic():
    u = np.array([0.3, -0.2, 0.5])
    x = ml.inv_stereographic(u)
    assert np.linalg.norm(x) == pytest.approx(1.0)
    np.testing.assert_allclose(ml.stereographic(x), u, atol=1e-14)
    lift = ml.light_cone_lift(x)
    assert ml.lorentz_inner(lift, lift) == pytest.approx(0.0, abs=1e-14)
    eta = ml.lorentz_metric(5)
    np.testing.assert_array_equal(np.diag(eta), [-1, 1, 1, 1, 1])


def test_group_elements_are_lorentz():
    for sel in ml.standard_selectors():
        fam = ml.make_family(sel)
        lo, hi = fam.domain
        q = [0.5 * (a + b) + 0.1 for a, b in zip(lo, hi)]
        t = fam.group_element(q)
        eta = ml.lorentz_metric(t.shape[0])
        np.testing.assert_allclose(t @ eta @ t.T, eta, atol=1e-10)
        assert ml.group_membership(t)["is_orthochronous"]


def test_orbit_cases():
    assert ml.classify_orbit(ml.make_family("torus:n=2:k=1:r=0.6"))["tag"] == "FixedPoint"
    assert ml.classify_orbit(ml.make_family("hypcyl:n=3:k=1:r=1"))["tag"] == "TotallyGeodesic"
    oc = ml.classify_orbit(ml.make_family("logspiral:n=2:c=1"))
    assert oc["tag"] == "Horosphere"
    w = oc["witness"][:, 0]
    np.testing.assert_allclose(np.abs(w[:2]), [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_homogeneity():
    assert ml.verify_homogeneity(ml.make_family("cone:clifford:m=2:n=3"), 20) < 1e-8


def test_errors():
    with pytest.raises(ml.MoebiusLabError, match="unknown_family"):
        ml.make_family("bogus:n=2")
    with pytest.raises(ValueError):
        ml.make_family("torus:n=2:k=5:r=0.6")


def test_report_json_is_deterministic():
    a = ml.invariants_report_json("torus:n=2:k=1:r=0.6", 10, 3)
    assert a == ml.invariants_report_json("torus:n=2:k=1:r=0.6", 10, 3)
    doc = json.loads(a)
    assert doc["schema"] == "moebius-lab/1"
    assert doc["pass"] is True


def test_criterion_failure_path():
    assert ml.run_criterion(4)["pass"]
    bad = ml.run_criterion(4, tolerances={"cone_b": 0.0, "b_expected": 0.0, "rho_oracle": 0.0})
    assert not bad["pass"]
    assert any(not c["pass"] for c in bad["checks"])
