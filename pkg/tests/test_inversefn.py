import cmath
import math
from fractions import Fraction

import pytest

from puiseux_branches.errors import DomainError
from puiseux_branches.exactcore import ONE, I, const
from puiseux_branches.frontend import expand_text
from puiseux_branches.inversefn import PI_HALF, arctan_series, arctanh_series, inverse_case
from puiseux_branches.series import Series
from puiseux_branches.vocabulary import Func, InverseCase

from conftest import as_complex, circle, series_error


def constants(s: Series) -> list[tuple[Fraction, object]]:
	return [(e, c.as_constant()) for e, c in s.terms]


def rationals(*pairs) -> list[tuple[Fraction, object]]:
	return [(Fraction(e), const(Fraction(c))) for e, c in pairs]


@pytest.mark.parametrize(
	('text', 'expected'),
	[
		('arctanh(z)', ((1, 1), (3, Fraction(1, 3)))),
		('arctan(z)', ((1, 1), (3, Fraction(-1, 3)))),
		('arcsin(z)', ((1, 1), (3, Fraction(1, 6)))),
		('arcsinh(z)', ((1, 1), (3, Fraction(-1, 6)))),
	],
)
def test_maclaurin_series(text, expected):
	assert constants(expand_text(text, 3)) == rationals(*expected)


def test_arccos_starts_at_half_pi():
	assert constants(expand_text('arccos(z)', 3)) == [
		(Fraction(0), PI_HALF),
		*rationals((1, -1), (3, Fraction(-1, 6))),
	]


def test_arctanh_of_a_logarithmic_argument():
	z0 = Fraction(-1, 100)
	text = 'arctanh(-2+ln(z)*z)'
	err, _, _ = series_error(text, 3, z0)
	assert err <= 1e-3
	naive_err, _, _ = series_error(text, 3, z0, naive=True)
	assert naive_err == pytest.approx(math.pi, abs=0.05)


def test_arctan_on_the_imaginary_cut():
	text = 'arctan(2*i+z^(1/4)*exp(z))'
	s = expand_text(text, 1)
	near_zero = as_complex(s.evaluate(Fraction(1, 10**8)))
	assert abs(near_zero - complex(math.pi / 2, math.log(3) / 2)) < 0.02
	for z0 in circle(Fraction(1, 10**4), 16):
		err, _, _ = series_error(text, 1, z0)
		assert err < 1e-3


@pytest.mark.parametrize('x', [Fraction(1, 1000), Fraction(-1, 1000)])
def test_arccosh_inside_the_unit_interval_in_real_mode(x):
	err, value, _ = series_error('arccosh(1/2+x)', 3, x, var='x', mode='real')
	assert err < 1e-5
	expected = complex(0, math.pi / 3 - 2 * float(x) / math.sqrt(3))
	assert abs(value - expected) < 1e-5


@pytest.mark.parametrize('x', [Fraction(1, 1000), Fraction(-1, 1000)])
def test_arccosh_left_of_minus_one_in_real_mode(x):
	err, value, _ = series_error('arccosh(-2+x)', 3, x, var='x', mode='real')
	assert err < 1e-5
	assert abs(value - complex(math.log(2 + math.sqrt(3)), math.pi)) < 1e-2


def test_arccosh_of_a_vanishing_argument():
	err, value, _ = series_error('arccosh(2*x-x^(3/2))', 3, Fraction(1, 1000), var='x', mode='real')
	assert err < 1e-5
	assert abs(value - 1j * (math.pi / 2 - 2e-3)) < 1e-4


@pytest.mark.parametrize('text', ['arcsinh(2*i+z)', 'arccosh(1/2+z)', 'arccosh(-2+z)', 'arcsinh(1/z)'])
def test_inverse_functions_match_the_principal_branch_on_a_circle(text):
	for z0 in circle(Fraction(1, 1000), 12):
		err, _, oracle = series_error(text, 3, z0)
		assert err <= 1e-5 * max(1.0, abs(oracle))


@pytest.mark.parametrize(
	('func', 'text', 'case'),
	[
		(Func.ARCCOSH, '1/2+z', InverseCase.ACOSH_K),
		(Func.ARCCOSH, '-2+z', InverseCase.ACOSH_J),
		(Func.ARCCOSH, '1+z', InverseCase.ACOSH_BE),
		(Func.ARCCOSH, '-1+z', InverseCase.ACOSH_C),
		(Func.ARCCOSH, '1/z', InverseCase.ACOSH_D1M),
		(Func.ARCCOSH, 'z', InverseCase.ACOSH_D2G),
		(Func.ARCCOSH, '2+z', InverseCase.ANALYTIC),
		(Func.ARCTANH, '1+1/z', InverseCase.ARCTANH_NEG_ALPHA),
		(Func.ARCTAN, '2*i+z', InverseCase.ARCTAN_NINE_CASE),
		(Func.ARCTAN, 'z', InverseCase.ANALYTIC),
		(Func.ARCSINH, '2*i+z', InverseCase.ASINH_T),
		(Func.ARCSINH, 'i+z', InverseCase.ASINH_PQ),
		(Func.ARCSINH, '1/z', InverseCase.ASINH_WN),
		(Func.ARCSINH, 'i/z', InverseCase.ASINH_UGLY),
		(Func.ARCSIN, '2+z', InverseCase.ASINH_T),
	],
)
def test_inverse_case_tags(func, text, case):
	assert inverse_case(func, expand_text(text, 3)).case is case


def test_singular_constants_are_rejected():
	with pytest.raises(DomainError):
		arctanh_series(Series.constant(ONE), 3)
	with pytest.raises(DomainError):
		arctan_series(Series.constant(I), 3)


def test_arccosh_branch_point_gives_a_square_root_series():
	s = expand_text('arccosh(1+z)', 2)
	assert Fraction(1, 2) in s.exponents()
	z0 = 1e-4 + 1e-4j
	assert abs(as_complex(s.evaluate(z0)) - cmath.acosh(1 + z0)) < 1e-5
