from fractions import Fraction

import pytest

from puiseux_branches.branchlog import TWO_PI_I
from puiseux_branches.exactcore import ONE, ZERO, GaussianRational, const
from puiseux_branches.piecewise import (
	TRUE,
	And,
	ArgCmp,
	ArgSum,
	Case,
	CaseAtom,
	CasePow,
	Constraint,
	CorrectionTerm,
	FloorAtom,
	FloorPow,
	PartCmp,
	Point,
	UnitFactor,
	VarSign,
	cond_eval,
	correction_eval,
	unit_eval,
	unit_from_correction,
)
from puiseux_branches.series import Series
from puiseux_branches.vocabulary import Part, Relop, Role

from conftest import point

Z = Series.variable()


def test_imaginary_part_condition():
	assert not cond_eval(PartCmp(Part.IM, Z, Relop.LT), point(0, Fraction(1, 10)))
	assert cond_eval(PartCmp(Part.IM, Z, Relop.LT), point(0, Fraction(-1, 10)))


def test_conjunction_of_sign_conditions():
	upper = PartCmp(Part.IM, Z, Relop.GE)
	right = VarSign('z', Relop.GE)
	z0 = point(Fraction(-1, 100), Fraction(1, 10))
	assert cond_eval(upper, z0)
	assert not cond_eval(And((upper, right)), z0)


def test_arg_of_negative_real_is_pi_exactly():
	condition = ArgCmp(ArgSum(((Fraction(1), Z),)), Relop.LE, Fraction(1))
	assert cond_eval(condition, point(Fraction(-1, 100)))
	strict = ArgCmp(ArgSum(((Fraction(1), Z),)), Relop.LT, Fraction(1))
	assert not cond_eval(strict, point(Fraction(-1, 100)))


def test_arg_of_zero_is_zero():
	condition = ArgCmp(ArgSum(((Fraction(1), Z),)), Relop.EQ, Fraction(0))
	assert cond_eval(condition, Point.of(0))


def test_floor_atom_value():
	term = CorrectionTerm(Role.XI, (FloorAtom(TWO_PI_I, ArgSum(((Fraction(2), Z),))),))
	assert correction_eval(term, point(Fraction(-1, 100), Fraction(1, 10))) == -TWO_PI_I
	assert correction_eval(term, point(Fraction(1, 100), Fraction(1, 10))) == ZERO


def test_omega_roles_vanish_at_zero():
	always = CorrectionTerm(Role.OMEGA, (CaseAtom((Case(TRUE, TWO_PI_I),)),))
	assert correction_eval(always, Point.of(0)) == ZERO
	assert correction_eval(always, point(Fraction(1, 10))) == TWO_PI_I


def test_first_true_case_wins():
	cases = CaseAtom(
		(
			Case(VarSign('z', Relop.LT), TWO_PI_I),
			Case(VarSign('z', Relop.LE), -TWO_PI_I),
			Case(TRUE, ZERO),
		)
	)
	term = CorrectionTerm(Role.UPSILON, (cases,))
	assert correction_eval(term, point(-1)) == TWO_PI_I
	assert correction_eval(term, point(0)) == -TWO_PI_I
	assert correction_eval(term, point(1)) == ZERO


def test_unit_factors_multiply():
	negative = UnitFactor((CasePow((Case(VarSign('z', Relop.LT), -ONE), Case(TRUE, ONE))),))
	assert unit_eval(negative, point(Fraction(-1, 100))) == -ONE
	assert unit_eval(negative, point(Fraction(1, 100))) == ONE
	assert (UnitFactor() * UnitFactor()).is_one()
	assert unit_eval(negative * negative, point(Fraction(-1, 100))) == ONE


def test_unit_from_floor_correction():
	term = CorrectionTerm(Role.XI, (FloorAtom(TWO_PI_I, ArgSum(((Fraction(2), Z),))),))
	factor = unit_from_correction(term, Fraction(1, 2))
	assert isinstance(factor.atoms[0], FloorPow)
	# (z^2)^(1/2) = -z in the left half plane
	assert unit_eval(factor, point(Fraction(-1, 100), Fraction(1, 100))) == -ONE
	assert unit_eval(factor, point(Fraction(1, 100), Fraction(1, 100))) == ONE


def test_unit_from_correction_rejects_non_pi_i_values():
	with pytest.raises(ValueError):
		unit_from_correction(CorrectionTerm(Role.XI, constant=const(1)), Fraction(1, 2))


def test_rendering_of_cases():
	cases = CaseAtom((Case(PartCmp(Part.IM, Z, Relop.LT), TWO_PI_I), Case(TRUE, ZERO)))
	text = CorrectionTerm(Role.OMEGA, (cases,)).render()
	assert text.startswith('piecewise{2*pi*i if Im(z) < 0')
	assert text.endswith('0 otherwise}')


def test_constraint_bounds():
	assert Constraint().contains(Fraction(1))
	assert not Constraint().contains(Fraction(-1))
	assert Constraint.positive().directions() == [Fraction(0)]
	with pytest.raises(ValueError):
		Constraint(lo=Fraction(1, 2), hi=Fraction(1, 4))


def test_float_points_keep_their_quadrant():
	z0 = Point.of(complex(-0.01, -0.1))
	assert z0.exact == GaussianRational(Fraction(-0.01), Fraction(-0.1))
	assert z0.exact.re < 0
	assert z0.exact.im < 0
	assert Point.of(-0.5).is_negative_real()
