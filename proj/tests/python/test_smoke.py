import math

import pytest

confsym = pytest.importorskip("confsym")


def test_expression_round_trip():
    assert confsym.parse("u_xxx + 6*u*u_x") == "u_xxx + 6*u*u_x"
    assert confsym.simplify("t^(1-beta)*t^beta") == "t"
    assert confsym.zero_test("(2*W - omega^alpha/alpha) - 2*W + omega^alpha/alpha")


def test_evaluate_and_diff():
    assert confsym.evaluate("2*t^1.7", {"t": 1.0}) == pytest.approx(2.0)
    assert confsym.diff("6*u*u_x", "u") == "6*u_x"


def test_conformable_operators():
    assert confsym.conf_diff("t^p", "t", "alpha") == "p*t^(p - alpha)"
    assert confsym.conf_diff_value("sqrt(t)", "t", 0.5, 2.0) == pytest.approx(0.5, abs=1e-8)
    value = confsym.conf_integrate_value("t^2", "t", 0.6, 1.5)
    assert value == pytest.approx(1.5**2.6 / 2.6, rel=1e-9)


def test_rule_reports():
    reports = confsym.check_rules(0.5)
    assert len(reports) == 10
    assert all(r["pass"] for r in reports)


def test_symmetries_and_commutators():
    fields = confsym.symmetries("kdv", 0.7, 0.6, points=25)
    assert len(fields) == 4
    assert all(f["max_residual"] < 1e-8 for f in fields)

    table = confsym.commutators("mkdv")
    assert table["closed"] and table["jacobi"]
    v1v3 = next(b for b in table["brackets"] if b["left"] == "V1" and b["right"] == "V3")
    assert v1v3["expansion"] == [{"basis": "V1", "coefficient": "3"}]


def test_pipelines_and_reduction():
    keys = confsym.pipelines()
    assert len(keys) == 7 and "mkdv/V3" in keys
    report = confsym.reduce_check("mkdv/V3", 0.7, 0.6)
    assert report["pass"]


def test_lift_residual():
    report = confsym.lift_residual("burgers/V4", grid_n=12, tolerance=1e-7)
    assert report["pass"]
    assert report["flagged_nodes"] == 0
    assert math.isfinite(report["max_abs_residual"])
