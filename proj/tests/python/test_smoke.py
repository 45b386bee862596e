"""Smoke tests for the sl2rlab extension module."""

import math

import pytest

import sl2rlab


def test_nak_round_trip():
    (a, b), (c, d) = sl2rlab.compose_nak(0.0, 4.0, math.pi / 2)
    assert abs(a) < 1e-12 and abs(b - 2.0) < 1e-12
    assert abs(c + 0.5) < 1e-12 and abs(d) < 1e-12
    x, y, theta = sl2rlab.decompose_nak(a, b, c, d)
    assert abs(x) < 1e-12
    assert abs(y - 4.0) < 1e-12
    assert abs(theta - math.pi / 2) < 1e-12


def test_classification_and_mobius():
    assert sl2rlab.classify(1, 3, 0, 1) == "Parabolic"
    assert sl2rlab.classify(2, 0, 0, 0.5) == "Hyperbolic"
    z = sl2rlab.mobius(1, 1, 0, 1, 1j)
    assert abs(z - (1 + 1j)) < 1e-15
    with pytest.raises(Exception):
        sl2rlab.mobius(1, 0, 0, 1, -1j)


def test_metric_and_frame():
    g = sl2rlab.metric(0.0, 1.0, 0.0)
    assert g[0][0] == 0.5 and g[1][1] == 0.25 and g[2][2] == 1.0 and g[0][2] == 0.5
    e1, e2, e3 = sl2rlab.frame(0.0, 1.0, 0.0)
    assert e1 == [2.0, 0.0, -1.0]
    assert e2 == [0.0, 2.0, 0.0]
    assert e3 == [0.0, 0.0, 1.0]
    with pytest.raises(Exception):
        sl2rlab.metric(0.0, -1.0, 0.0)


def test_killing_fields_and_certification():
    assert sl2rlab.killing("dtheta", 2.0, 0.7, 1.0) == (0.0, 0.0, 1.0)
    v = sl2rlab.killing("v", 2.0, 1.0, 0.0)
    assert v == (1.0, 0.5, 1.0)
    # the corrected fourth field satisfies the Killing equation; the printed
    # drift variant does not
    good = sl2rlab.killing_equation_residual("w-corrected", 0.4, 1.0, 0.0, (1, 0, 0), (0, 1, 0))
    bad = sl2rlab.killing_equation_residual("w", 0.4, 1.0, 0.0, (1, 0, 0), (0, 1, 0))
    assert good < 1e-6
    assert abs(bad - 0.25) < 1e-6


def test_surface_curvatures():
    assert abs(sl2rlab.surface_mean_curvature("sigma-y0:1", 0.3, 1.0) - 1.0) < 1e-12
    assert abs(sl2rlab.surface_mean_curvature("sigma-theta0", 0.3, 1.0, oracle=True)) < 1e-12
    assert abs(sl2rlab.gauss_curvature("sigma-theta0", 0.1, 1.0) + 4.0) < 1e-4
    n = sl2rlab.surface_normal("sigma-x0:1", 0.0, 1.0)
    assert abs(n[0] + 1.0) < 1e-12 and abs(n[1]) < 1e-12 and abs(n[2]) < 1e-12


def test_residual_reports():
    ok = sl2rlab.residual_report("sigma-theta0", "v")
    assert ok["certified"] and ok["consistent"]
    assert ok["max_abs_residual_closed"] < 1e-10
    bad = sl2rlab.residual_report("sigma-y0:1", "dx")
    assert not bad["certified"]
    assert bad["max_abs_residual_closed"] == pytest.approx(1.0)


def test_solve_reduction():
    out = sl2rlab.solve("K", "dx", {"x": 0.0, "y": 1.0, "phi": 0.0}, 0.0, 3.0)
    assert out["termination"] == "ReachedEnd"
    rows = out["records"]
    assert len(rows) > 10
    assert all(abs(r["residual"]) < 1e-9 for r in rows)
    assert rows[-1]["y"] < 1.0  # the profile sinks toward the boundary


def test_direction_field_and_catalog():
    field = sl2rlab.direction_field(1.0, 1.0, 1, 0.0, 0.0, 1)
    assert len(field) == 1
    y, phi, dy, dphi = field[0]
    assert (dy, dphi) == (0.0, -1.0)
    names = {entry["name"] for entry in sl2rlab.catalog()}
    assert len(names) >= 12
    assert "nx-minimal" in names and "rot-cmc-super" in names


def test_suites_run():
    result = sl2rlab.run_suite("frame-metric")
    assert result["pass"]
    assert all(c["pass"] for c in result["checks"])
    verdict = sl2rlab.cmc_consistency(0.5)
    assert not verdict["consistent"]
    assert verdict["generic_min_abs_residual"] > 0.1
