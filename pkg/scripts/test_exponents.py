#!/usr/bin/env python3
"""Test delle soglie di integrabilità sugli integrali diadici"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from analytic.exponents import (
    DyadicIntegrals,
    combined_exponent,
    critical_exponent_estimate,
    dyadic_slope,
    log_speed_exponent_estimate,
    target_exponent,
)
from config.errors import InsufficientLevels


def test_target_exponents():
    assert target_exponent(0.5, "origin") == pytest.approx(2.4)
    assert target_exponent(1.0, "origin") == pytest.approx(3.0)
    assert math.isinf(target_exponent(3.0, "origin"))
    assert target_exponent(0.5, "axis") == 3.0
    assert combined_exponent(0.5) == pytest.approx(2.4)
    assert combined_exponent(2.0) == 3.0


def test_slope_sign_changes_at_threshold():
    assert dyadic_slope(1.0, "axis", 2.5) < 0
    assert dyadic_slope(1.0, "axis", 3.5) > 0


@pytest.mark.parametrize("alpha,mode,expected", [(1.0, "axis", 3.0), (0.5, "origin", 2.4)])
def test_critical_exponent(alpha, mode, expected):
    fit = critical_exponent_estimate(alpha, mode)
    print(f"alpha={alpha} {mode}: p*={fit.fitted_critical_p:.4f} (stderr {fit.stderr:.2g})")
    assert fit.fitted_critical_p == pytest.approx(expected, abs=0.1)
    assert fit.passed()


def test_no_threshold_for_large_alpha():
    fit = critical_exponent_estimate(3.0, "origin")
    assert math.isinf(fit.fitted_critical_p)
    assert fit.passed()
    assert fit.to_record()["pass"]


def test_log_speed_threshold():
    fit = log_speed_exponent_estimate()
    assert fit.quantity == "log_speed"
    assert fit.fitted_critical_p == pytest.approx(2.0, abs=0.1)


def test_insufficient_levels():
    with pytest.raises(InsufficientLevels):
        DyadicIntegrals("speed_power", 1.0, "origin", levels=4)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
