from fractions import Fraction

import mpmath
import pytest

from puiseux_branches.errors import DomainError, EvaluationError
from puiseux_branches.exactcore import (
	HALF,
	I,
	ONE,
	PI,
	ZERO,
	GaussianRational,
	const,
	const_arccosh,
	const_arcsinh,
	const_arctan,
	const_arctanh,
	const_eval,
	const_exp,
	const_is_zero,
	const_ln,
	const_pow,
	const_sign,
	check_precision,
	mods,
	mpf_to_fraction,
	principal_power,
	rational_power,
	unit_power,
)
from puiseux_branches.vocabulary import Part

from conftest import as_complex


def test_mods_rationals():
	assert mods(Fraction(7, 2), 2) == Fraction(-1, 2)
	assert mods(3, 2) == 1
	assert mods(-1, 2) == 1
	assert mods(0, 2) == 0


def test_mods_pi_multiples_keep_upper_endpoint():
	assert mods(PI.scale(3), PI.scale(2)) == PI
	assert mods(-PI, PI.scale(2)) == PI


def test_mods_rejects_non_positive_modulus():
	with pytest.raises(DomainError):
		mods(Fraction(1), Fraction(0))


def test_unit_power_folds_to_gaussian_units():
	assert unit_power(2) == ONE
	assert unit_power(Fraction(7, 2)) == -I
	assert unit_power(Fraction(1, 2)) == I
	assert unit_power(1) == -ONE


def test_i_squared():
	assert I * I == -ONE


def test_unit_power_value():
	value = as_complex(const_eval(unit_power(Fraction(3, 4))))
	assert value == pytest.approx(complex(-0.7071067811865476, 0.7071067811865476), abs=1e-15)


def test_pi_value():
	assert as_complex(const_eval(PI)).real == pytest.approx(3.141592653589793, abs=1e-15)


def test_ln_two_plus_sqrt_three_at_two_precisions():
	value = const_ln(const(2) + rational_power(3, HALF))
	low = const_eval(value, 64)
	high = const_eval(value, 256)
	assert float(low.real) == pytest.approx(1.316957896924817, abs=1e-14)
	assert abs(low.value - high.value) < mpmath.mpf(2) ** -60


def test_rational_power_principal_and_real_branch():
	assert rational_power(-8, Fraction(1, 3), real_branch=True) == const(-2)
	principal = as_complex(const_eval(rational_power(-8, Fraction(1, 3))))
	assert principal == pytest.approx(1 + 1.7320508075688772j, abs=1e-14)
	assert rational_power(4, HALF) == const(2)


def test_zero_power_needs_positive_exponent():
	assert rational_power(0, HALF) == ZERO
	with pytest.raises(DomainError):
		rational_power(0, Fraction(-1, 2))
	with pytest.raises(DomainError):
		const_pow(ZERO, 0)


def test_const_pow_of_negative_eight():
	principal = as_complex(const_eval(const_pow(const(-8), Fraction(2, 3))))
	assert principal == pytest.approx(4 * complex(mpmath.expjpi(mpmath.mpf(2) / 3)), abs=1e-13)
	assert const_pow(const(-8), Fraction(2, 3), real_branch=True) == const(4)


def test_const_ln_of_negative_eight_to_two_thirds():
	value = const_ln(const_pow(const(-8), Fraction(2, 3)))
	expected = 2 * mpmath.log(2) + 2j * mpmath.pi / 3
	assert as_complex(const_eval(value)) == pytest.approx(complex(expected), abs=1e-14)


def test_const_ln_exact_forms():
	assert const_ln(ONE) == ZERO
	assert const_ln(const(-1)) == I * PI
	assert const_ln(I) == (I * PI).scale(HALF)
	with pytest.raises(DomainError):
		const_ln(ZERO)


def test_inverse_constants_match_numerics():
	checks = [
		(const_arctanh(-2), mpmath.mpc(-mpmath.log(3) / 2, mpmath.pi / 2)),
		(const_arctan(GaussianRational(0, 2)), mpmath.mpc(mpmath.pi / 2, mpmath.log(3) / 2)),
		(const_arcsinh(GaussianRational(0, 2)), mpmath.mpc(mpmath.log(2 + mpmath.sqrt(3)), mpmath.pi / 2)),
		(const_arccosh(Fraction(1, 2)), mpmath.mpc(0, mpmath.pi / 3)),
		(const_arccosh(-2), mpmath.mpc(mpmath.log(2 + mpmath.sqrt(3)), mpmath.pi)),
	]
	for value, expected in checks:
		assert as_complex(const_eval(value)) == pytest.approx(complex(expected), abs=1e-14)


def test_arctanh_is_singular_at_one():
	with pytest.raises(DomainError):
		const_arctanh(1)


def test_const_exp_folds_pi_i_and_logs():
	assert const_exp((I * PI).scale(HALF)) == I
	assert const_exp(const_ln(const(3))) == const(3)


def test_zero_and_sign_tests():
	assert const_is_zero(PI - PI)
	assert not const_is_zero(PI - const(3))
	assert const_sign(PI - const(3)) == 1
	assert const_sign(I.scale(-2), Part.IM) == -1


def test_gaussian_rational_arithmetic():
	a = GaussianRational(1, 2)
	b = GaussianRational(3, -1)
	assert a * b == GaussianRational(5, 5)
	assert (a * b) / b == a
	assert a.conjugate() == GaussianRational(1, -2)
	with pytest.raises(EvaluationError):
		a / GaussianRational()


def test_principal_power_real_branch():
	assert complex(principal_power(mpmath.mpc(-8), Fraction(1, 3), real_branch=True)) == pytest.approx(-2)
	with pytest.raises(EvaluationError):
		principal_power(mpmath.mpc(0), Fraction(-1, 2))


def test_precision_bounds():
	assert check_precision(53) == 53
	with pytest.raises(DomainError):
		check_precision(52)
	with pytest.raises(DomainError):
		check_precision(4097)


@pytest.mark.parametrize('value', [-3.0, -0.01, -2.5e-300, 1e300, 0.1])
def test_float_to_fraction_keeps_the_sign(value):
	assert mpf_to_fraction(mpmath.mpf(value)) == Fraction(value)


def test_float_to_fraction_rejects_infinities():
	with pytest.raises(DomainError):
		mpf_to_fraction(mpmath.inf)
