import cmath
import math

import pytest

import mulcalc

UNIT_CIRCLE = {"segments": [{"kind": "arc", "center": [0, 0], "radius": 1,
                             "theta": [-math.pi, math.pi]}]}


def test_star_derivative_of_z():
    assert mulcalc.star_derivative("z", 2) == pytest.approx(cmath.exp(0.5), rel=1e-14)


def test_star_derivative_with_params():
    c = 2 - 1j
    got = mulcalc.star_derivative("exp(c*z)", 0.4 + 1.1j, {"c": c})
    assert abs(got - cmath.exp(c)) < 1e-12


def test_expr_round_trip():
    f = mulcalc.Expr("exp(z)*z^2+1")
    assert mulcalc.Expr(str(f)) == f
    assert f(1) == pytest.approx(math.e + 1)


def test_zero_of_f_raises():
    with pytest.raises(mulcalc.DomainError):
        mulcalc.star_derivative("z", 0)
    with pytest.raises(mulcalc.ParseError):
        mulcalc.Expr("exp(")


def test_unit_circle_integral():
    I = mulcalc.complex_star_integral("exp(1/z)", mulcalc.curve(UNIT_CIRCLE))
    assert I.single_valued
    for n in range(-5, 6):
        assert abs(I.value(n) - 1) < 1e-8


def test_half_step_has_two_values():
    seg = mulcalc.curve({"segments": [{"kind": "line", "from": [0, 0], "to": [0.5, 0]}]})
    I = mulcalc.complex_star_integral("exp(1)", seg)
    assert I.distinct_count == 2
    assert abs(I.value(1) + math.exp(0.5)) < 1e-9


def test_real_integrals():
    seg = mulcalc.curve({"segments": [{"kind": "line", "from": [0, 0], "to": [3, 1]}]})
    assert mulcalc.line_star("2", seg, "dx") == pytest.approx(8.0, rel=1e-12)
    assert mulcalc.double_star("exp(x*y)") == pytest.approx(math.exp(0.25), rel=1e-10)


def test_verifiers_and_cr():
    assert mulcalc.verify_closed("z", mulcalc.curve(UNIT_CIRCLE))["passed"]
    seg = mulcalc.curve({"segments": [{"kind": "line", "from": [1, 0], "to": [2, 1]}]})
    assert mulcalc.verify_ftc("exp(z)*(z+1)", seg)["passed"]
    assert mulcalc.check_cr("exp(z)", 0.3 + 0.7j)["passes"]
    assert not mulcalc.check_cr("conj(z)", 1 + 1j)["passes"]


def test_reference_suite_and_cli():
    assert all(case["passed"] for case in mulcalc.reference_suite())
    code, out, _ = mulcalc.run_cli(["star-deriv", "--f", "z", "--z", "2"])
    assert code == 0
    assert "value: 1.64872127070013+0i" in out
