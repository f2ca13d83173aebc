import math
from fractions import Fraction

import pytest

from puiseux_branches.errors import DomainError, EssentialSingularityError, SeriesParseError, UnsupportedError
from puiseux_branches.exactcore import ONE, const
from puiseux_branches.frontend import branch_report, expand, expand_text, format_series, parse, parse_series, to_text
from puiseux_branches.frontend.expr import Add, Call, Div, Mul, Neg, Num, Pow, Var
from puiseux_branches.models import ExpandRequest
from puiseux_branches.series import LogPoly, Series
from puiseux_branches.vocabulary import Func, InverseCase

from conftest import as_complex, circle, series_error

Z = Var('z')
HALF = Fraction(1, 2)


def test_parse_logarithm_of_a_sum():
	assert parse('ln(z^2+z^3)') == Call(Func.LN, Add(Pow(Z, Fraction(2)), Pow(Z, Fraction(3))))


def test_parse_rational_exponent():
	assert parse('(z^2+z^3)^(3/2)') == Pow(Add(Pow(Z, Fraction(2)), Pow(Z, Fraction(3))), Fraction(3, 2))


def test_parse_precedence_and_unary_minus():
	assert parse('arctanh(-2+ln(z)*z)') == Call(
		Func.ARCTANH, Add(Neg(Num(Fraction(2))), Mul(Call(Func.LN, Z), Z))
	)
	assert parse('-z^2') == Neg(Pow(Z, Fraction(2)))
	assert parse('1/2/z') == Div(Div(Num(Fraction(1)), Num(Fraction(2))), Z)


def test_decimals_are_exact():
	assert parse('0.25*z') == Mul(Num(Fraction(1, 4)), Z)


def test_function_aliases():
	assert parse('log(z)') == parse('ln(z)')
	assert parse('atanh(z)') == parse('arctanh(z)')


@pytest.mark.parametrize(
	'text',
	['ln(z^2+z^3)', '(z^2+z^3)^(3/2)', 'arctanh(-2+ln(z)*z)', 'arctan(2*i+z^(1/4)*exp(z))', '0.25*z - (1 - z)/pi'],
)
def test_printed_expressions_parse_back(text):
	e = parse(text)
	assert parse(to_text(e)) == e


@pytest.mark.parametrize(
	('text', 'offset'),
	[
		('ln(z^2+', 7),
		('z + $', 4),
		('z + )', 4),
	],
)
def test_syntax_errors_carry_byte_offsets(text, offset):
	with pytest.raises(SeriesParseError) as info:
		parse(text)
	assert info.value.offset == offset


def test_unknown_function_and_name():
	with pytest.raises(SeriesParseError) as info:
		parse('foo(z)')
	assert info.value.offset == 0
	with pytest.raises(SeriesParseError, match="Unknown name 'y'"):
		parse('z + y', var='z')


def test_exponents_must_be_rational():
	with pytest.raises(SeriesParseError):
		parse('z^z')


def test_format_series():
	assert format_series(expand_text('z^2+z^3', 4)) == '(1*z^2 + 1*z^3 + o(z^4))'


def test_expand_ln_one_plus_z():
	s = expand_text('ln(1+z)', 3)
	assert s.exponents() == [1, 2, 3]
	assert [c.as_constant() for _, c in s.terms] == [const(1), const(Fraction(-1, 2)), const(Fraction(1, 3))]
	assert s.order == 3


def test_expansion_reports_its_order():
	expansion = expand(ExpandRequest(text='z^2+z^3', order='4'))
	assert expansion.delivered == 4
	assert expansion.complete


def test_products_are_expanded_deep_enough():
	s = expand_text('(1/z)*ln(1+z)', 2)
	assert s.exponents() == [0, 1, 2]
	assert s.order == 2


def test_log_degree_cap():
	with pytest.raises(UnsupportedError, match='log-degree cap'):
		expand(ExpandRequest(text='ln(z)*ln(z)*ln(z)', max_log_degree=2))


def test_division_by_zero_series():
	with pytest.raises(DomainError):
		expand_text('1/(z-z)')


def test_exp_of_a_pole():
	with pytest.raises(EssentialSingularityError):
		expand_text('exp(1/z)')


def test_inverse_tag_of_outer_call():
	assert expand(ExpandRequest(text='arccosh(1/2+z)')).inverse_tag().case is InverseCase.ACOSH_K
	assert expand(ExpandRequest(text='ln(1+z)')).inverse_tag() is None


def test_branch_report_lists_logands_and_radicands():
	report = branch_report(ExpandRequest(text='ln(z^2+z^3)*(z^2+z^3)^(3/2)'))
	assert [label for label, _ in report] == ['ln(z^2 + z^3)', '(z^2 + z^3)^(3/2)']
	assert report[0][1].thetas() == [-HALF, HALF]


def test_branch_report_respects_arg_range():
	request = ExpandRequest(text='ln(z^2+z^3)', assume='arg-range', arg_lo='0', arg_hi='1')
	[(_, angles)] = branch_report(request)
	assert angles.thetas() == [HALF]


@pytest.mark.parametrize('x0', [Fraction(1, 10), Fraction(-1, 10)])
def test_logarithm_of_a_high_power_is_not_lost_to_truncation(x0):
	err, value, _ = series_error('ln(x^12)', 4, x0, var='x', mode='real-branch')
	assert err < 1e-9
	assert value.real == pytest.approx(12 * math.log(0.1))
	assert value.imag == pytest.approx(0, abs=1e-9)


def test_logand_with_a_late_leading_term():
	s = expand_text('ln(z^7+z^8)', 2)
	assert not s.is_zero()
	for z0 in circle(Fraction(1, 100), 12):
		err, _, _ = series_error('ln(z^7+z^8)', 2, z0)
		assert err < 1e-5


def test_unexpanded_logarithms_count_towards_the_degree():
	corrected = format_series(expand_text('ln(z)*ln(z)*ln(z)', 2))
	naive = format_series(expand(ExpandRequest(text='ln(z)*ln(z)*ln(z)', order='2', naive=True)).series)
	assert 'ln(z)^3' in corrected
	assert 'ln(z)*ln(z)' not in corrected
	assert 'ln(z)^3' in naive
	assert max(c.log_degree for _, c in expand_text('ln(z)*ln(z)', 2).terms) == 2


@pytest.mark.parametrize(('text', 'order'), [('ln(1+z)', 4), ('(1+z)^(1/2)', 3), ('exp(z)', 4), ('z^(-1)+ln(1+z)', 3)])
def test_rational_series_text_reads_back_exactly(text, order):
	s = expand_text(text, order)
	text = format_series(s)
	assert parse_series(text) == s
	assert format_series(parse_series(text)) == text


@pytest.mark.parametrize(('text', 'order'), [('ln(2+z)', 3), ('(2+z)^(1/2)', 2), ('(1+z)^(1/3)+i*z', 3)])
def test_series_text_with_constants_reads_back(text, order):
	s = expand_text(text, order)
	parsed = parse_series(format_series(s))
	assert parsed.exponents() == s.exponents()
	assert parsed.order == s.order
	for z0 in circle(Fraction(1, 10), 6):
		assert as_complex(parsed.evaluate(z0)) == pytest.approx(as_complex(s.evaluate(z0)), rel=1e-12)


def test_series_text_with_a_log_coefficient():
	s = Series.of({2: LogPoly.of({0: -ONE, 1: ONE}), 3: 1}, order=4)
	assert parse_series(format_series(s)) == s


def test_series_text_without_terms():
	s = parse_series('(o(z^4))')
	assert s.is_zero()
	assert s.order == 4


def test_series_text_to_series():
	assert parse_series('(1*z^2 + 1*z^3 + o(z^4))') == Series.of({2: 1, 3: 1}, order=4)
	assert parse_series('(x^(1/2) - 2*x)', var='x') == Series.of({HALF: 1, 1: -2}, var='x')


@pytest.mark.parametrize('text', ['(o(z^4) + z)', '{z}', '(1 + y)', '(ln(1+z))', '(z^z)'])
def test_series_text_outside_the_grammar(text):
	with pytest.raises(SeriesParseError):
		parse_series(text)
