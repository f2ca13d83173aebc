from fractions import Fraction

import mpmath
import pytest

from puiseux_branches.branchlog import (
	critical_angles,
	critical_report,
	ic_sign,
	ln_constant_power,
	ln_naive,
	ln_product,
	ln_series,
)
from puiseux_branches.exactcore import GaussianRational, const, const_eval, const_ln
from puiseux_branches.piecewise import Constraint, CorrectionTerm
from puiseux_branches.series import Series
from puiseux_branches.vocabulary import Mode, SplitLevel

from conftest import as_complex, circle

Z = Series.variable()
HALF = Fraction(1, 2)


def value(s: Series, z0) -> complex:
	return as_complex(s.evaluate(z0))


def principal_ln(w: complex) -> complex:
	return complex(mpmath.log(mpmath.mpc(w)))


def test_critical_angles_of_z_squared():
	assert critical_angles(Fraction(0), Fraction(2), Constraint()).thetas() == [-HALF, HALF]


def test_no_critical_angles_for_small_exponents():
	assert critical_angles(Fraction(0), HALF, Constraint()).thetas() == []


def test_critical_angles_of_three_halves():
	assert critical_angles(Fraction(0), Fraction(3, 2), Constraint()).thetas() == [Fraction(-2, 3), Fraction(2, 3)]


def test_negative_real_axis_is_reported_once():
	assert critical_angles(Fraction(0), Fraction(1), Constraint()).thetas() == [Fraction(1)]


def test_unknown_coefficient_angle():
	assert not critical_angles(mpmath.mpf(0.3), Fraction(2), Constraint()).known


def test_arg_range_filters_angles():
	upper = Constraint(lo=Fraction(0), hi=Fraction(1))
	assert critical_angles(Fraction(0), Fraction(2), upper).thetas() == [HALF]


def test_ic_sign():
	assert ic_sign(Z, HALF) == 1
	assert ic_sign(Z, -HALF) == -1
	assert ic_sign(Z.scale(GaussianRational(0, 1)), Fraction(0)) == 1


def test_critical_report_carries_tail_side():
	report = critical_report(Series.of({2: 1, 3: 1}), 4)
	assert [(a.theta, a.ic) for a in report.angles] == [(-HALF, -1), (HALF, 1)]


def test_ln_z_squared_plus_z_cubed_on_a_circle():
	s = ln_series(Series.of({2: 1, 3: 1}), 4)
	for z0 in circle(Fraction(1, 100), 16):
		assert abs(value(s, z0) - principal_ln(z0**2 + z0**3)) < 1e-8


def test_ln_z_squared_plus_z_cubed_on_the_imaginary_axis():
	logand = Series.of({2: 1, 3: 1})
	z0 = GaussianRational(0, Fraction(1, 10))
	assert value(ln_series(logand, 4), z0).imag == pytest.approx(-3.04192, abs=1e-4)
	assert value(ln_naive(logand, 4), z0).imag == pytest.approx(3.24126, abs=1e-4)


def test_naive_ln_is_off_by_two_pi():
	logand = Series.of({2: 1, 3: 1})
	z0 = complex(-0.01, 0.1)
	truth = principal_ln(z0**2 + z0**3)
	assert abs(value(ln_series(logand, 4), z0) - truth) < 1e-3
	assert abs(value(ln_naive(logand, 4), z0) - truth) == pytest.approx(2 * mpmath.pi, abs=1e-3)


@pytest.mark.parametrize('split', [SplitLevel.NONE, SplitLevel.COEF, SplitLevel.FULL])
def test_split_levels_agree(split):
	s = ln_series(Series.of({2: -1, 3: GaussianRational(0, 1)}), 4, split)
	for z0 in circle(Fraction(1, 100), 12):
		w = -(z0**2) + 1j * z0**3
		assert abs(value(s, z0) - principal_ln(w)) < 1e-8


def test_cusps_cancel_for_minus_z_squared():
	s = ln_series(Series.of({2: -1, 3: 1}), 4)
	assert not any(isinstance(atom, CorrectionTerm) for atom in s.coefficient(0).specials())
	for z0 in circle(Fraction(1, 100), 12):
		assert abs(value(s, z0) - principal_ln(-(z0**2) + z0**3)) < 1e-8


def test_negative_constant_logand():
	s = ln_series(-1 + Z, 3)
	for z0 in (complex(0.01, 0.01), complex(0.01, -0.01), complex(-0.01, 0)):
		assert abs(value(s, z0) - principal_ln(-1 + z0)) < 1e-6


def test_real_mode_logarithm():
	x = Series.variable('x', Mode.REAL)
	logand = x * x + x * x * x
	s = ln_series(logand, 3)
	for x0 in (Fraction(1, 100), Fraction(-1, 100)):
		x1 = float(x0)
		assert value(s, x0) == pytest.approx(principal_ln(x1**2 + x1**3), abs=1e-6)


def test_ln_of_a_constant_power():
	multiple, xi = ln_constant_power(const(-8), Fraction(2, 3))
	expected = 2 * mpmath.log(2) + 2j * mpmath.pi / 3
	assert as_complex(const_eval(multiple + xi)) == pytest.approx(complex(expected), abs=1e-14)

	multiple, xi = ln_constant_power(const(-8), Fraction(2, 3), Mode.REAL_BRANCH)
	assert as_complex(const_eval(multiple + xi)) == pytest.approx(complex(2 * mpmath.log(2)), abs=1e-14)
	assert multiple + xi == const_ln(const(4))


def test_ln_product_restores_the_principal_value():
	s = -1 + Z
	t = -1 + Z.scale(2)
	result = ln_product(s, t, 3)
	for z0 in (complex(0.01, 0.01), complex(0.01, -0.01), complex(-0.02, 0.005)):
		assert abs(value(result, z0) - principal_ln((-1 + z0) * (-1 + 2 * z0))) < 1e-5


def test_zero_logand_is_rejected():
	with pytest.raises(ValueError):
		ln_series(Series.zero(), 2)
