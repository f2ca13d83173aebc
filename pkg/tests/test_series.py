from fractions import Fraction

import pytest

from puiseux_branches.branchlog import ln_series
from puiseux_branches.branchpow import pow_series
from puiseux_branches.errors import DomainError, EssentialSingularityError, NotSmallSeriesError, UsageError
from puiseux_branches.exactcore import ONE, GaussianRational, const
from puiseux_branches.series import LN1P, Series, analytic_compose, binomial, exp_series
from puiseux_branches.vocabulary import Mode

Z = Series.variable()


def constants(s: Series) -> list[tuple[Fraction, object]]:
	return [(e, c.as_constant()) for e, c in s.terms]


def rationals(*pairs) -> list[tuple[Fraction, object]]:
	return [(Fraction(e), const(Fraction(c))) for e, c in pairs]


def test_addition_keeps_the_smaller_order():
	s = Series.of({2: 1}, order=4) + Series.of({3: 1}, order=4)
	assert constants(s) == rationals((2, 1), (3, 1))
	assert s.order == 4


def test_product_order_follows_leading_terms():
	a = Series.of({1: 1}, order=3)
	s = a * a
	assert constants(s) == rationals((2, 1))
	assert s.order == 4


def test_difference_with_itself_is_zero_to_order():
	s = Series.of({0: 1, 1: 2}, order=3)
	d = s - s
	assert d.is_zero()
	assert d.order == 3


def test_reciprocals():
	assert constants((1 + Z).recip(3)) == rationals((0, 1), (1, -1), (2, 1), (3, -1))
	inverse_square = Series.of({2: 1}).recip()
	assert constants(inverse_square) == rationals((-2, 1))
	assert inverse_square.order is None
	assert constants((2 + Z).recip(2)) == rationals((0, Fraction(1, 2)), (1, Fraction(-1, 4)), (2, Fraction(1, 8)))


def test_reciprocal_needs_a_target_for_exact_sums():
	with pytest.raises(UsageError):
		(1 + Z).recip()
	with pytest.raises(DomainError):
		Series.zero().recip(2)


def test_ln1p_maclaurin():
	s = analytic_compose(LN1P, Z, 4)
	assert constants(s) == rationals((1, 1), (2, Fraction(-1, 2)), (3, Fraction(1, 3)), (4, Fraction(-1, 4)))


def test_binomial_series():
	assert [binomial(Fraction(3, 2), k) for k in range(4)] == [1, Fraction(3, 2), Fraction(3, 8), Fraction(-1, 16)]
	s = pow_series(1 + Z, Fraction(3, 2), 3)
	assert constants(s) == rationals((0, 1), (1, Fraction(3, 2)), (2, Fraction(3, 8)), (3, Fraction(-1, 16)))


def test_exp_of_z_squared():
	s = exp_series(Series.of({2: 1}), 4)
	assert constants(s) == rationals((0, 1), (2, 1), (4, Fraction(1, 2)))
	assert s.order == 4


def test_exp_of_a_pole_is_essential():
	with pytest.raises(EssentialSingularityError):
		exp_series(Series.of({-1: 1}), 2)


def test_composition_needs_a_small_argument():
	with pytest.raises(NotSmallSeriesError):
		analytic_compose(LN1P, 1 + Z, 2)


def test_split_dominant():
	sp = Series.of({2: 1, 3: 1}).split_dominant()
	assert (sp.alpha, sp.sigma) == (2, 3)
	assert sp.c.as_constant() == ONE
	assert sp.b.as_constant() == ONE

	sp = Series.of({0: -1, Fraction(1, 2): GaussianRational(0, -1), 1: 1}).split_dominant()
	assert (sp.alpha, sp.sigma) == (0, Fraction(1, 2))
	assert sp.c.as_constant() == const(-1)
	assert sp.b.as_constant() == const(GaussianRational(0, -1))

	sp = Series.of({-2: 1}).split_dominant()
	assert sp.alpha == -2
	assert sp.g.is_zero()


def test_evaluate():
	s = Series.of({1: 1, 2: Fraction(-1, 2)})
	assert complex(s.evaluate(Fraction(1, 10)).value) == pytest.approx(0.095, abs=1e-15)


def test_mixing_variables_is_an_error():
	with pytest.raises(UsageError):
		Z + Series.variable('x')
	with pytest.raises(UsageError):
		Z + Series.variable('z', Mode.REAL)


def test_exp_undoes_ln(rng):
	for _ in range(30):
		c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
		items = {0: c}
		for k in range(1, 5):
			a = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
			if a:
				items[k] = a
		s = Series.of(items)
		back = exp_series(ln_series(s, 4), 4)
		assert constants(back) == constants(s.truncate(4))
