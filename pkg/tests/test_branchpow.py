from fractions import Fraction

import mpmath
import pytest

from puiseux_branches.branchpow import pow_series, power_of_power, sqrt_series, strip_unit, unit_factor, zippel_factor
from puiseux_branches.errors import DomainError
from puiseux_branches.exactcore import ONE, GaussianRational, const_is_zero
from puiseux_branches.piecewise import unit_eval
from puiseux_branches.series import Series
from puiseux_branches.vocabulary import Mode

from conftest import as_complex, circle, point

Z = Series.variable()
THREE_HALVES = Fraction(3, 2)


def value(s: Series, z0) -> complex:
	return as_complex(s.evaluate(z0))


def principal(w: complex, q: Fraction) -> complex:
	return complex(mpmath.power(mpmath.mpc(w), mpmath.mpf(q.numerator) / q.denominator))


def test_three_halves_power_at_a_negative_point():
	s = Series.of({2: 1, 3: 1})
	z0 = Fraction(-1, 100)
	truth = principal(complex(z0**2 + z0**3), THREE_HALVES)
	corrected = value(pow_series(s, THREE_HALVES, 6), z0)
	naive = value(pow_series(s, THREE_HALVES, 6, naive=True), z0)
	assert abs(corrected - truth) / abs(truth) <= 1e-6
	assert naive / truth == pytest.approx(-1, abs=1e-6)


def test_three_halves_power_on_a_circle():
	s = pow_series(Series.of({2: 1, 3: 1}), THREE_HALVES, 6)
	for z0 in circle(Fraction(1, 100), 24):
		truth = principal(z0**2 + z0**3, THREE_HALVES)
		assert abs(value(s, z0) - truth) <= 1e-6 * abs(truth)


@pytest.mark.parametrize(
	('items', 'beta', 'build'),
	[
		({Fraction(-1, 2): -1}, Fraction(1, 2), lambda z: -principal(z, Fraction(-1, 2))),
		({1: GaussianRational(0, 1), 2: 1}, THREE_HALVES, lambda z: 1j * z + z**2),
		({-1: 1, 0: 1}, THREE_HALVES, lambda z: 1 / z + 1),
	],
)
def test_powers_match_the_principal_branch(items, beta, build):
	s = pow_series(Series.of(items), beta, 4)
	for z0 in circle(Fraction(1, 100), 16):
		truth = principal(build(z0), beta)
		assert abs(value(s, z0) - truth) <= 1e-4 * abs(truth)


def test_integer_powers_have_no_unit_factor():
	s = Series.of({0: -1, 1: GaussianRational(0, 1), 2: 1})
	squared = pow_series(s, 2, 4)
	assert squared.global_factor is None
	assert squared == (s * s).truncate(4)


def test_negative_constant_base_in_real_mode():
	x = Series.variable('x', Mode.REAL)
	s = pow_series(-2 + x, THREE_HALVES, 3)
	assert s.global_factor is None
	for x0 in (Fraction(1, 100), Fraction(-1, 100)):
		assert value(s, x0) == pytest.approx(principal(complex(-2 + x0), THREE_HALVES), abs=1e-8)


def test_real_mode_unit_factor_flips_for_negative_x():
	base = Series.of({Fraction(4, 3): 1, 2: 1}, 'x', Mode.REAL)
	s = pow_series(base, THREE_HALVES, 5)
	for x0 in (Fraction(1, 100), Fraction(-1, 100)):
		x1 = complex(float(x0))
		truth = principal(principal(x1, Fraction(4, 3)) + x1**2, THREE_HALVES)
		assert abs(value(s, x0) - truth) <= 1e-4 * abs(truth)


def test_real_branch_powers_stay_real():
	base = Series.of({Fraction(4, 3): 1, 2: 1}, 'x', Mode.REAL_BRANCH)
	s = pow_series(base, THREE_HALVES, 5)
	for x0 in (Fraction(1, 100), Fraction(-1, 100)):
		x1 = float(x0)
		truth = (abs(x1) ** (4 / 3) + x1**2) ** 1.5
		assert value(s, x0) == pytest.approx(truth, rel=1e-4)


def test_power_of_power():
	factor, exponent = power_of_power(Z, 2, Fraction(1, 2))
	assert exponent == 1
	assert unit_eval(factor, point(Fraction(-1, 100), Fraction(1, 100))) == -ONE
	assert unit_eval(factor, point(Fraction(1, 100), Fraction(1, 100))) == ONE


def test_zippel_factor_of_two_negative_bases():
	s = -1 + Z
	factor = zippel_factor(s, s, Fraction(1, 2), n=3)
	for z0 in (point(Fraction(1, 100), Fraction(1, 100)), point(Fraction(1, 100), Fraction(-1, 100)), point(Fraction(-1, 100))):
		assert unit_eval(factor, z0) == -ONE
	assert zippel_factor(s, s, 2).is_one()


def test_sqrt_and_strip_unit():
	s = sqrt_series(Series.of({2: 1, 3: 1}), 4)
	body, unit = strip_unit(s)
	assert body.global_factor is None
	assert unit == s.global_factor
	for z0 in circle(Fraction(1, 100), 8):
		assert abs(value(s, z0) - principal(z0**2 + z0**3, Fraction(1, 2))) < 1e-8


def test_zero_base():
	assert pow_series(Series.zero(order=2), Fraction(1, 2), 3).order == 1
	with pytest.raises(DomainError):
		pow_series(Series.zero(), Fraction(-1, 2), 3)


@pytest.mark.parametrize(
	('s', 'beta', 'z0', 'expected'),
	[
		(Series.of({2: 1, 3: 1}), THREE_HALVES, point(Fraction(-1, 100)), -ONE),
		(Series.of({2: 1, 3: 1}), THREE_HALVES, point(Fraction(1, 100)), ONE),
		(Series.of({1: GaussianRational(0, 1), 2: 1}), THREE_HALVES, point(Fraction(-1, 100), Fraction(1, 100)), -ONE),
		(Series.of({1: GaussianRational(0, 1), 2: 1}), THREE_HALVES, point(Fraction(1, 100), Fraction(1, 100)), ONE),
		(Series.of({1: GaussianRational(0, 1), 2: 1}), THREE_HALVES, point(Fraction(-1, 100), Fraction(-1, 100)), ONE),
		(Series.of({-1: 1, 0: 1}), THREE_HALVES, point(Fraction(-1, 100)), -ONE),
		(Series.of({Fraction(-1, 2): -1}), Fraction(1, 2), point(Fraction(1, 100), Fraction(-1, 100)), -ONE),
		(Series.of({Fraction(-1, 2): -1}), Fraction(1, 2), point(Fraction(1, 100), Fraction(1, 100)), ONE),
	],
)
def test_unit_factor_values(s, beta, z0, expected):
	assert const_is_zero(unit_eval(unit_factor(s.split_dominant(), beta), z0) - expected)


@pytest.mark.parametrize(('x0', 'expected'), [(Fraction(-1, 100), -ONE), (Fraction(1, 100), ONE)])
def test_unit_factor_of_a_real_cusp(x0, expected):
	s = Series.of({Fraction(4, 3): 1, 2: 1}, var='x', mode=Mode.REAL)
	assert const_is_zero(unit_eval(unit_factor(s.split_dominant(), THREE_HALVES, Mode.REAL), x0) - expected)


@pytest.mark.parametrize('x0', [Fraction(-1, 100), Fraction(1, 100)])
def test_unit_factor_of_a_negative_constant_on_the_real_line(x0):
	s = Series.of({0: -2, 1: 1}, var='x', mode=Mode.REAL)
	assert const_is_zero(unit_eval(unit_factor(s.split_dominant(), THREE_HALVES, Mode.REAL), x0) - ONE)
