"""Seeded randomized checks of the exact layers."""

import random
from fractions import Fraction

import pytest

from puiseux_branches.branchlog import TWO_PI_I, critical_angles, omega_generic, omega_simplify
from puiseux_branches.branchpow import pow_series, unit_factor
from puiseux_branches.exactcore import (
	HALF,
	I,
	PI,
	ZERO,
	ConstantExpr,
	GaussianRational,
	const,
	const_eval,
	const_is_zero,
	const_ln,
	const_normalize,
	const_pow,
	mods,
)
from puiseux_branches.frontend import expand_text, parse, to_text
from puiseux_branches.frontend.expr import Add, Call, Div, Expr, ImagUnit, Mul, Neg, Num, Pi, Pow, Sub, Var
from puiseux_branches.piecewise import Constraint, correction_eval, unit_eval
from puiseux_branches.series import Series
from puiseux_branches.vocabulary import Func

from conftest import as_complex, circle

ROUNDS = 50
N = Fraction(4)

LOGANDS = [
	'z^2+z^3',
	'z^2+z^3*exp(z)',
	'-z^(-7/6)-z^(7/3)',
	'-1-z^2-z^3',
	'-1-z^2*exp(z)',
	'-1+i*z^(1/4)',
	'-1-i*z^(1/4)+z',
	'-1+i*z^(1/2)+z',
	'-2+z^2',
	'3*i+z^2',
]

RADICANDS = [
	('z^2+z^3', Fraction(3, 2)),
	('z^2-i*z^3', Fraction(3, 2)),
	('z^2+z^3', Fraction(7, 4)),
	('-1+i*z^(1/4)+z', Fraction(3, 2)),
	('-2+z^2', Fraction(3, 4)),
	('3*i+z^2', Fraction(3, 4)),
	('-z^(-1/2)', HALF),
	('i*z+z^2', Fraction(3, 2)),
	('z^(-1)+1', Fraction(3, 2)),
]

EXPONENTS = [Fraction(-1), -HALF, Fraction(0), Fraction(1, 3), Fraction(1), Fraction(3, 2), Fraction(2)]


def gaussian(rng: random.Random) -> GaussianRational:
	return GaussianRational(Fraction(rng.randint(1, 3) * rng.choice((-1, 1)), rng.randint(1, 2)), rng.randint(-3, 3))


def positive(rng: random.Random) -> Fraction:
	return Fraction(rng.randint(1, 12), rng.randint(1, 5))


def constant_tree(rng: random.Random, depth: int = 3) -> ConstantExpr:
	if depth == 0:
		return rng.choice(
			[
				lambda: const(gaussian(rng)),
				lambda: PI.scale(gaussian(rng)),
				lambda: const_ln(const(positive(rng))),
				lambda: const_pow(const(positive(rng)), HALF),
				lambda: I,
			]
		)()
	a, b = constant_tree(rng, depth - 1), constant_tree(rng, depth - 1)
	return rng.choice([a + b, a - b, a * b])


def exact_series(rng: random.Random) -> Series:
	exponents = rng.sample(EXPONENTS, rng.randint(1, 3))
	return Series.of({e: gaussian(rng) for e in exponents})


def expression(rng: random.Random, depth: int = 4) -> Expr:
	if depth == 0 or rng.random() < 0.2:
		return rng.choice(
			[
				lambda: Num(Fraction(rng.randint(0, 40), rng.choice((1, 2, 4, 5, 8)))),
				lambda: Var('z'),
				lambda: ImagUnit(),
				lambda: Pi(),
			]
		)()
	match rng.randint(0, 7):
		case 0:
			return Neg(expression(rng, depth - 1))
		case 1:
			return Pow(expression(rng, depth - 1), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
		case 2:
			return Call(rng.choice([Func.LN, Func.EXP, Func.ARCTAN, Func.ARCCOSH]), expression(rng, depth - 1))
		case _:
			node = rng.choice([Add, Sub, Mul, Div])
			return node(expression(rng, depth - 1), expression(rng, depth - 1))


def test_constants_agree_across_precisions(rng):
	for _ in range(ROUNDS):
		e = constant_tree(rng)
		low, high = as_complex(const_eval(e, 128)), as_complex(const_eval(e, 256))
		assert abs(low - high) <= 1e-30 * max(1.0, abs(high))


def test_normalizing_constants_is_idempotent_and_keeps_the_value(rng):
	for _ in range(ROUNDS):
		e = constant_tree(rng)
		once = const_normalize(e)
		assert const_normalize(once) == once
		assert const_is_zero(once - e)


def test_rational_residues(rng):
	for _ in range(ROUNDS):
		u = Fraction(rng.randint(-60, 60), rng.randint(1, 7))
		v = positive(rng)
		r = mods(u, v)
		assert -v / 2 < r <= v / 2
		assert ((u - r) / v).denominator == 1
		assert mods(u + 3 * v, v) == r
		assert mods(PI.scale(u), PI.scale(v)) == PI.scale(r)


def test_critical_angles_match_a_direct_count(rng):
	checked = 0
	while checked < ROUNDS:
		eta = Fraction(rng.randint(-5, 6), 6)
		alpha = Fraction(rng.randint(1, 9) * rng.choice((-1, 1)), rng.randint(1, 4))
		if any(q.denominator == 1 and q.numerator % 2 for q in (eta + alpha, eta - alpha)):
			continue
		expected = {
			(m - eta) / alpha for m in range(-13, 14, 2) if -1 < (m - eta) / alpha <= 1
		}
		assert set(critical_angles(eta, alpha, Constraint()).thetas()) == expected
		checked += 1


@pytest.mark.parametrize('logand', LOGANDS)
def test_omega_takes_three_values(logand):
	sp = expand_text(logand, N).split_dominant()
	omega = omega_generic(sp, N)
	for z0 in circle(Fraction(1, 1000), 36):
		value = correction_eval(omega, z0)
		assert any(const_is_zero(value - k) for k in (TWO_PI_I, ZERO, -TWO_PI_I))


@pytest.mark.parametrize('logand', LOGANDS)
def test_simplified_omega_agrees_with_the_generic_form(logand):
	sp = expand_text(logand, N).split_dominant()
	generic = omega_generic(sp, N)
	simplified = omega_simplify(sp, Constraint(), N)
	for z0 in circle(Fraction(1, 1000), 36):
		assert const_is_zero(correction_eval(simplified, z0) - correction_eval(generic, z0))


@pytest.mark.parametrize(('radicand', 'beta'), RADICANDS)
def test_unit_factors_have_modulus_one(radicand, beta):
	unit = unit_factor(expand_text(radicand, N).split_dominant(), beta)
	for z0 in circle(Fraction(1, 100), 24):
		assert abs(as_complex(const_eval(unit_eval(unit, z0)))) == pytest.approx(1)


@pytest.mark.parametrize('root', [2, 3])
def test_roots_raised_back(rng, root):
	beta = Fraction(1, root)
	for _ in range(ROUNDS // 5):
		lead = rng.choice([Fraction(-1), -HALF, Fraction(0), Fraction(1, 3), Fraction(1), Fraction(3, 2)])
		s = Series.of({lead + k: gaussian(rng) for k in range(3)})
		p = pow_series(s, beta, lead * beta + 3)
		for z0 in circle(Fraction(1, 100), 12):
			truth = as_complex(s.evaluate(z0))
			assert as_complex(p.evaluate(z0)) ** root == pytest.approx(truth, rel=1e-5)


def test_series_ring_laws(rng):
	for _ in range(ROUNDS):
		a, b, c = exact_series(rng), exact_series(rng), exact_series(rng)
		assert a + b == b + a
		assert a * b == b * a
		assert (a + b) + c == a + (b + c)
		assert (a * b) * c == a * (b * c)
		assert a * (b + c) == a * b + a * c
		assert (a - a).is_zero()


def test_printed_random_expressions_parse_back(rng):
	for _ in range(200):
		e = expression(rng)
		assert parse(to_text(e)) == e, to_text(e)
