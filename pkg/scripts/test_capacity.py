#!/usr/bin/env python3
"""Test dei quadrilateri, della p-capacità e della dualità"""

import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from capacity.p_capacity import duality_components, duality_product, p_capacity
from capacity.quadrilateral import Quadrilateral
from config.errors import ConfigError, RegionError, UnsupportedExponent
from solvers.boundary import SolverConfig

RECT = Quadrilateral.rectangle(2.0, 1.0)
CFG = SolverConfig(residual_tolerance=1e-9, max_outer_iterations=300)


def test_rectangle_arcs():
    assert RECT.arc_index("left") == 0 and RECT.arc_index("top") == 3
    assert RECT.arc_line(0).length == pytest.approx(1.0)
    assert RECT.arc_line(1).length == pytest.approx(2.0)
    with pytest.raises(ConfigError):
        RECT.arc_index("diagonal")


def test_invalid_quadrilaterals():
    with pytest.raises(RegionError):
        Quadrilateral(((0, 0), (0, 1), (1, 1), (1, 0)), ((0, 1), (1, 2), (2, 3), (3, 4)))
    with pytest.raises(RegionError):
        Quadrilateral(((0, 0), (1, 0), (1, 1), (0, 1)), ((0, 1), (1, 2), (2, 3)))
    with pytest.raises(RegionError):
        Quadrilateral.l_shape().embed(0.4)


def test_harmonic_capacity_of_rectangle():
    """Cap_2(sinistra, destra) = altezza / larghezza"""
    result = p_capacity(RECT, ("left", "right"), 2.0, CFG, h=1.0 / 16)
    assert result.value == pytest.approx(0.5, rel=1e-10)
    assert result.arcs == (0, 2) and result.converged
    other = p_capacity(RECT, (1, 3), 2.0, CFG, h=1.0 / 16)
    assert other.value == pytest.approx(2.0, rel=1e-10)


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 3.0, 5.0])
def test_rectangle_duality(p):
    product = duality_product(RECT, p, CFG, h=1.0 / 16)
    assert product == pytest.approx(1.0, abs=1e-8)


def test_l_shape_duality():
    parts = duality_components(Quadrilateral.l_shape(), 2.0, CFG, h=1.0 / 64)
    print(f"L: {parts}")
    assert parts["q"] == pytest.approx(2.0)
    assert parts["product"] == pytest.approx(1.0, abs=0.03)


@pytest.mark.slow
def test_l_shape_duality_improves_under_refinement():
    errors = [abs(duality_product(Quadrilateral.l_shape(), 2.0, CFG, h=h) - 1.0) for h in (1.0 / 64, 1.0 / 128)]
    print(f"Errore di dualità sulla L: {errors}")
    assert errors[1] < errors[0]


def test_direct_rectangle_capacities():
    """Cap_p(sinistra, destra) = b / a^{p-1}, Cap_p(basso, alto) = a / b^{p-1} per il rettangolo a x b"""
    assert p_capacity(RECT, ("left", "right"), 3.0, CFG, h=1.0 / 16).value == pytest.approx(0.25, rel=1e-9)
    assert p_capacity(RECT, ("bottom", "top"), 3.0, CFG, h=1.0 / 16).value == pytest.approx(2.0, rel=1e-9)


def test_capacity_scaling_under_dilation():
    """Cap_p(lambda Q) = lambda^{2-p} Cap_p(Q)"""
    double = RECT.scaled(2.0)
    assert double.arc_names == RECT.arc_names
    cap3 = p_capacity(double, ("left", "right"), 3.0, CFG, h=1.0 / 16).value
    assert cap3 == pytest.approx(0.125, rel=1e-9)
    small = p_capacity(RECT, ("left", "right"), 1.5, CFG, h=1.0 / 16).value
    large = p_capacity(double, ("left", "right"), 1.5, CFG, h=1.0 / 16).value
    assert large / small == pytest.approx(math.sqrt(2.0), rel=1e-9)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_capacity_is_symmetric_in_the_arcs(p):
    quad = Quadrilateral.l_shape()
    forward = p_capacity(quad, (0, 2), p, CFG, h=1.0 / 16).value
    backward = p_capacity(quad, (2, 0), p, CFG, h=1.0 / 16).value
    assert backward == pytest.approx(forward, rel=1e-6)


def test_unsupported_exponents_and_arcs():
    with pytest.raises(UnsupportedExponent):
        p_capacity(RECT, (0, 2), 1.0, CFG)
    with pytest.raises(UnsupportedExponent):
        p_capacity(RECT, (0, 2), float("inf"), CFG)
    with pytest.raises(UnsupportedExponent):
        duality_product(RECT, 1.0, CFG)
    with pytest.raises(UnsupportedExponent):
        p_capacity(RECT, (0, 1), 2.0, CFG)


def test_geometry_from_json(tmp_path):
    path = tmp_path / "quad.json"
    path.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
                                "arcs": [[0, 1], [1, 2], [2, 3], [3, 4]], "name": "square"}))
    quad = Quadrilateral.from_json(path)
    assert quad.name == "square"
    assert Quadrilateral.from_dict({"l_shape": {}}).name == "l_shape"
    assert Quadrilateral.from_dict({"rectangle": {"width": 2.0, "height": 1.0}}) == RECT


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
