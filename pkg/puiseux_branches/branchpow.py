"""Rational powers of series with the unit factor that keeps them on the principal branch.

S^beta = exp(beta*ln S) = L * c^beta * z^(alpha*beta) * (1 + W)^beta with
L = exp(beta*Psi), Psi being the correction of the fully split logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from . import logger
from .branchlog import (
	TWO_PI_I,
	condition_operand,
	ln_power_extract,
	merge_corrections,
	omega_simplify,
	phi_simplify,
	wrap_cases,
)
from .errors import DomainError, UnsupportedError
from .exactcore import ONE, ConstantExpr, const, const_pow, const_sign, mods, to_fraction, unit_power
from .piecewise import (
	ArgCmp,
	ArgLinPow,
	ArgSum,
	Case,
	CaseAtom,
	CasePow,
	Constraint,
	CorrectionTerm,
	FloorPow,
	TRUE,
	UnitFactor,
	VarSign,
	arg_over_pi_guarded,
	simplify_correction,
	simplify_unit,
	unit_from_correction,
	value_at_zero_only,
)
from .series import Coefficient, PowOf, Series, SplitSeries, analytic_compose, binom
from .vocabulary import Mode, Part, Relop, Role


@dataclass(frozen=True, slots=True)
class PowContext:
	"""Everything decided about the unit factor of S^beta.

	``unit`` is L. ``coefficient_unit`` and ``omega_unit`` are the factors
	coming from Phi + xi and from Omega; their product equals L.
	``at_zero`` and ``elsewhere`` are set when L only differs at z = 0.
	"""

	beta: Fraction
	psi: CorrectionTerm
	unit: UnitFactor
	coefficient_unit: UnitFactor = UnitFactor()
	omega_unit: UnitFactor = UnitFactor()
	at_zero: Optional[ConstantExpr] = None
	elsewhere: Optional[ConstantExpr] = None


def _atom_count(u: UnitFactor) -> int:
	return len(u.atoms)


def pow_context(
	sp: SplitSeries,
	beta: object,
	constraint: Constraint,
	n: Optional[Fraction] = None,
	var: str = 'z',
	mode: Mode = Mode.COMPLEX,
) -> PowContext:
	"""Build Psi for a constant dominant coefficient and turn it into L."""
	beta = to_fraction(beta)
	phi = phi_simplify(sp, constraint, var, mode)
	xi = ln_power_extract(Series.variable(var, mode), sp.alpha, Mode.COMPLEX).xi
	omega = omega_simplify(sp, constraint, n, var, mode)
	role = Role.PSI_REAL if constraint.real else Role.PSI
	psi = merge_corrections(role, phi, xi, omega)
	if not psi.is_constant():
		psi = simplify_correction(psi, constraint, var)
	if beta.denominator == 1:
		return PowContext(beta, psi, UnitFactor())
	coefficient_unit = simplify_unit(unit_from_correction(merge_corrections(role, phi, xi), beta), constraint, var)
	omega_unit = simplify_unit(unit_from_correction(omega, beta), constraint, var)
	unit = simplify_unit(unit_from_correction(psi, beta), constraint, var)
	product = simplify_unit(coefficient_unit * omega_unit, constraint, var)
	if _atom_count(product) < _atom_count(unit):
		unit = product
	split = value_at_zero_only(unit)
	at_zero, elsewhere = split if split is not None else (None, None)
	logger.debug('Unit factor for beta=%s: %s', beta, unit.render())
	return PowContext(beta, psi, unit, coefficient_unit, omega_unit, at_zero, elsewhere)


def unit_factor(
	sp: SplitSeries,
	beta: object,
	mode: Mode = Mode.COMPLEX,
	constraint: Optional[Constraint] = None,
	n: Optional[Fraction] = None,
) -> UnitFactor:
	"""L for S = c*z^alpha*(1 + W) raised to beta."""
	constraint = constraint or Constraint.for_mode(mode)
	return pow_context(sp, beta, constraint, n, sp.g.var, mode).unit


# Real-branch powers


def arg_real_branch(exponent: object) -> Optional[Fraction]:
	"""arg(t^q) as a multiple of arg(t) for real t under real-branch powers.

	Even numerator over odd denominator gives 0, odd over odd gives 1;
	even denominators are left to the principal rule (None).
	"""
	q = to_fraction(exponent)
	if q.denominator % 2 == 0:
		return None
	return Fraction(q.numerator % 2)


def _rb_phase(arg: Fraction, q: Fraction) -> Fraction:
	"""Phase/pi of w^q for a real-branch power, given arg(w)/pi."""
	if arg == 1:
		factor = arg_real_branch(q)
		if factor is not None:
			return factor
	return q * arg


def _real_along(s: Series, theta: Fraction) -> Optional[int]:
	"""Sign of S along a real direction when S is real there, else None."""
	try:
		ray = s.along_ray(theta)
	except UnsupportedError:
		return None
	if any(const_sign(c, Part.IM) for _, _, c in ray.terms):
		return None
	return ray.part_sign(Part.RE)


def _real_branch_unit(
	s: Series, sp: SplitSeries, beta: Fraction, c: ConstantExpr, constraint: Constraint, var: str
) -> Optional[UnitFactor]:
	"""L per sign of x when S and W are real along every allowed direction."""
	arg_c = arg_over_pi_guarded(c)
	if not isinstance(arg_c, Fraction):
		return None
	w = condition_operand(sp.ratio())
	values: dict[Fraction, ConstantExpr] = {}
	for theta in constraint.directions():
		sign = _real_along(condition_operand(s), theta)
		if not sign or _real_along(w, theta) is None:
			return None
		arg_s = Fraction(0) if sign > 0 else Fraction(1)
		phase_z = _rb_phase(Fraction(theta), sp.alpha * beta) if theta else Fraction(0)
		mismatch = _rb_phase(arg_s, beta) - _rb_phase(arg_c, beta) - phase_z
		values[theta] = unit_power(mods(mismatch, 2))
	distinct = set(values.values())
	if len(distinct) == 1:
		return UnitFactor((), distinct.pop())
	negative = values[Fraction(1)]
	positive = values[Fraction(0)]
	return UnitFactor((CasePow((Case(VarSign(var, Relop.LT), negative), Case(TRUE, positive))),))


def _real_branch_fallback(
	s: Series, sp: SplitSeries, beta: Fraction, c_power: ConstantExpr, constraint: Constraint, var: str, mode: Mode
) -> UnitFactor:
	"""L as an unconditional arg difference: beta*arg S - arg(c^beta) - arg(z^(alpha*beta)) - beta*arg(1 + W)."""
	argsum = ArgSum(
		(
			(beta, condition_operand(s)),
			(Fraction(-1), Series.constant(c_power, var, mode)),
			(Fraction(-1), Series.monomial(ONE, sp.alpha * beta, var, mode)),
			(-beta, condition_operand(sp.one_plus_ratio())),
		)
	)
	logger.debug('Real-branch unit factor left as an arg difference for %s', s.render())
	return simplify_unit(UnitFactor((ArgLinPow(Fraction(1), argsum),)), constraint, var)


# Powers


def _body(sp: SplitSeries, beta: Fraction, c_power: ConstantExpr, n: Fraction) -> Series:
	exponent = sp.alpha * beta
	tail = analytic_compose(binom(beta), sp.ratio(), n - exponent)
	return tail.scale(c_power).shift(exponent).truncate(n)


def _apply_unit(
	body: Series, unit: UnitFactor, elsewhere: Optional[ConstantExpr] = None
) -> Series:
	"""Multiply by L; a factor that only differs at 0 leaves positive-degree terms with its other value."""
	if unit.is_constant():
		return body.scale(unit.constant)
	if elsewhere is not None:
		if all(e > 0 for e, _ in body.terms):
			return body.scale(elsewhere)
		degree_zero = Series.build(body.var, body.mode, {e: c for e, c in body.terms if e == 0})
		rest = Series.build(body.var, body.mode, {e: c for e, c in body.terms if e != 0}, body.order)
		return rest.scale(elsewhere) + degree_zero.times_coefficient(Coefficient.special(unit))
	return body.times_unit(unit)


def pow_series(
	s: Series,
	beta: object,
	n: object,
	constraint: Optional[Constraint] = None,
	naive: bool = False,
) -> Series:
	"""S^beta + o(z^n) on the principal branch (or the real branch in real-branch mode)."""
	beta = to_fraction(beta)
	n = to_fraction(n)
	var, mode = s.var, s.mode
	if s.is_zero():
		if beta <= 0:
			raise DomainError(f'Zero series raised to the power {beta}')
		order = None if s.order is None else min(n, s.order * beta)
		return Series.zero(var, mode, order)
	if beta.denominator == 1:
		return s.power_int(int(beta), n).truncate(n)
	constraint = constraint or Constraint.for_mode(mode)
	sp = s.split_dominant()
	c = sp.c.as_constant()

	if c is None:
		return _pow_unsplit(s, sp, beta, n, constraint, naive)

	if mode is Mode.REAL_BRANCH:
		c_power = const_pow(c, beta, real_branch=True)
		body = _body(sp, beta, c_power, n)
		if naive:
			return body
		unit = _real_branch_unit(s, sp, beta, c, constraint, var)
		if unit is None:
			c_power = const_pow(c, beta)
			body = _body(sp, beta, c_power, n)
			unit = _real_branch_fallback(s, sp, beta, c_power, constraint, var, mode)
		split = value_at_zero_only(unit)
		return _apply_unit(body, unit, None if split is None else split[1])

	body = _body(sp, beta, const_pow(c, beta), n)
	if naive:
		return body
	ctx = pow_context(sp, beta, constraint, n, var, mode)
	return _apply_unit(body, ctx.unit, ctx.elsewhere)


def _pow_unsplit(
	s: Series, sp: SplitSeries, beta: Fraction, n: Fraction, constraint: Constraint, naive: bool
) -> Series:
	"""c(z)^beta kept whole for a coefficient that is not constant, with generic corrections."""
	var, mode = s.var, s.mode
	coefficient = Series.constant(sp.c, var, mode)
	head = Coefficient.special(PowOf(coefficient, beta))
	exponent = sp.alpha * beta
	body = analytic_compose(binom(beta), sp.ratio(), n - exponent).times_coefficient(head).shift(exponent)
	if naive:
		return body.truncate(n)
	role = Role.PSI_REAL if constraint.real else Role.PSI
	phi = wrap_cases(
		ArgSum(((Fraction(1), coefficient), (Fraction(1), Series.monomial(ONE, sp.alpha, var, mode)))), role
	)
	xi = ln_power_extract(Series.variable(var, mode), sp.alpha, Mode.COMPLEX).xi
	omega = omega_simplify(sp, constraint, n, var, mode)
	psi = simplify_correction(merge_corrections(role, phi, xi, omega), constraint, var)
	unit = simplify_unit(unit_from_correction(psi, beta), constraint, var)
	logger.debug('Coefficient %s is not constant; its power is kept whole', sp.c.render(var))
	split = value_at_zero_only(unit)
	return _apply_unit(body.truncate(n), unit, None if split is None else split[1])


def power_of_power(w: Series, alpha: object, beta: object) -> tuple[UnitFactor, Fraction]:
	"""(w^alpha)^beta = (-1)^zeta * w^(alpha*beta) on the principal branch.

	zeta = (beta/pi)*(arg(w^alpha) - alpha*arg(w)) = 2*beta*floor(1/2 - alpha*arg(w)/(2*pi)).
	"""
	alpha = to_fraction(alpha)
	beta = to_fraction(beta)
	if (alpha * beta).denominator == 1 and beta.denominator == 1:
		return UnitFactor(), alpha * beta
	if alpha.denominator == 1 and alpha in (0, 1):
		return UnitFactor(), alpha * beta
	operand = condition_operand(w)
	factor = UnitFactor.of_atoms([FloorPow(2 * beta, ArgSum(((alpha, operand),)))])
	return factor, alpha * beta


def zippel_factor(
	s: Series, t: Series, beta: object, constraint: Optional[Constraint] = None, n: Optional[object] = None
) -> UnitFactor:
	"""(S*T)^beta / (S^beta * T^beta), a unit factor that is 1 for integer beta."""
	beta = to_fraction(beta)
	if beta.denominator == 1:
		return UnitFactor()
	constraint = constraint or Constraint.for_mode(s.mode)
	order = None if n is None else to_fraction(n)
	argsum = ArgSum(((Fraction(1), condition_operand(s, order)), (Fraction(1), condition_operand(t, order))))
	upsilon = CorrectionTerm(
		Role.UPSILON,
		(
			CaseAtom(
				(
					Case(ArgCmp(argsum, Relop.LE, Fraction(-1)), TWO_PI_I),
					Case(ArgCmp(argsum, Relop.GT, Fraction(1)), -TWO_PI_I),
					Case(TRUE, const(0)),
				)
			),
		),
	)
	return simplify_unit(unit_from_correction(upsilon, beta), constraint, s.var)


def sqrt_series(s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False) -> Series:
	return pow_series(s, Fraction(1, 2), n, constraint, naive)


def strip_unit(s: Series) -> tuple[Series, Optional[UnitFactor]]:
	"""Separate a series from its global unit factor."""
	return replace(s, global_factor=None), s.global_factor


__all__ = [
	'PowContext',
	'arg_real_branch',
	'pow_context',
	'pow_series',
	'power_of_power',
	'sqrt_series',
	'strip_unit',
	'unit_factor',
	'zippel_factor',
]
