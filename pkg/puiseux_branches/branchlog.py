"""Logarithms of series with a branch-correct degree-0 term.

For S = c*z^alpha*(1 + W) the principal logarithm is

	ln S = ln(c*z^alpha) + ln(1 + W) + Omega

where Omega is 2*pi*i, -2*pi*i or 0 depending on where arg(c*z^alpha) +
arg(1 + W) falls. Splitting ln(c*z^alpha) further into ln(c) + ln(z^alpha)
adds a correction Phi, and ln(z^alpha) = alpha*ln(z) + xi adds a floor
term; the fully split form carries the sum of all three as Psi.

The generic corrections are always available. Before falling back to them
the ladder below tries cheaper statements that hold in a punctured
neighbourhood of 0: a zero tail, real tails on real lines, the absence of
critical angles, the signs of the tail along each critical angle, and the
rules for a negative real constant term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from . import logger
from .errors import DomainError, UnsupportedError
from .exactcore import I, ONE, PI, ZERO, ConstantExpr, const, const_ln, const_pow, const_sign, mods, to_fraction
from .piecewise import (
	Angle,
	ArgCmp,
	ArgLinAtom,
	ArgSum,
	Case,
	CaseAtom,
	Constraint,
	CorrectionTerm,
	FloorAtom,
	PartCmp,
	TRUE,
	angle_mpf,
	arg_over_pi_guarded,
	bound_args,
	simplify_correction,
)
from .series import (
	LN1P,
	Coefficient,
	LogOf,
	LogPoly,
	Series,
	SplitSeries,
	analytic_compose,
)
from .vocabulary import Mode, Part, Relop, Role, SplitLevel

TWO_PI_I = (I * PI).scale(2)


def condition_operand(s: Series, n: Optional[Fraction] = None) -> Series:
	"""The polynomial a condition compares: S truncated at n with its order dropped."""
	s = s.materialize()
	if n is not None and (s.order is None or s.order > n):
		s = s.truncate(n)
	return replace(s, order=None)


def _zero(role: Role) -> CorrectionTerm:
	return CorrectionTerm(role)


def merge_corrections(role: Role, *terms: CorrectionTerm) -> CorrectionTerm:
	atoms = tuple(atom for t in terms for atom in t.atoms)
	constant = ZERO
	for t in terms:
		constant = constant + t.constant
	return CorrectionTerm(role, atoms, constant)


def wrap_cases(
	argsum: ArgSum, role: Role, keep_plus: bool = True, keep_minus: bool = True
) -> CorrectionTerm:
	"""{2*pi*i if S <= -pi; -2*pi*i if S > pi; 0 otherwise} with cases optionally dropped."""
	cases = []
	if keep_plus:
		cases.append(Case(ArgCmp(argsum, Relop.LE, Fraction(-1)), TWO_PI_I))
	if keep_minus:
		cases.append(Case(ArgCmp(argsum, Relop.GT, Fraction(1)), -TWO_PI_I))
	if not cases:
		return _zero(role)
	cases.append(Case(TRUE, ZERO))
	return CorrectionTerm(role, (CaseAtom(tuple(cases)),))


def _above(a: Angle, b: Angle) -> bool:
	if isinstance(a, Fraction) and isinstance(b, Fraction):
		return a > b
	return angle_mpf(a) > angle_mpf(b)


# Critical angles


@dataclass(frozen=True, slots=True)
class CriticalAngle:
	"""A direction along which arg(c*z^alpha) sits on the cut, with the tail's side."""

	theta: Fraction
	ic: Optional[int]
	role: Role = Role.OMEGA


@dataclass(frozen=True, slots=True)
class CriticalAngleSet:
	angles: tuple[CriticalAngle, ...] = ()
	known: bool = True

	def thetas(self) -> list[Fraction]:
		return [a.theta for a in self.angles]

	def with_signs(self, ratio: Series) -> CriticalAngleSet:
		"""Fill in the sign of Im(W) along each angle."""
		return replace(
			self, angles=tuple(replace(a, ic=ic_sign(ratio, a.theta)) for a in self.angles)
		)


def critical_angles(
	eta_hat: Optional[Angle],
	alpha: Fraction,
	constraint: Constraint,
	mode: Mode = Mode.COMPLEX,
	role: Role = Role.OMEGA,
) -> CriticalAngleSet:
	"""Directions theta*pi with eta_hat + alpha*theta an odd integer, inside the constraint."""
	alpha = Fraction(alpha)
	if alpha == 0:
		return CriticalAngleSet()
	if not isinstance(eta_hat, Fraction):
		return CriticalAngleSet(known=False)
	found: set[Fraction] = set()
	if constraint.real:
		for theta in constraint.directions():
			if mode is Mode.REAL_BRANCH and theta == 1 and alpha.denominator % 2 == 1:
				angle = mods(eta_hat + alpha.numerator % 2, 2)
			else:
				angle = mods(eta_hat + alpha * theta, 2)
			if angle == 1:
				found.add(theta)
	else:
		span = abs(alpha) * max(abs(constraint.lo), abs(constraint.hi))
		k_lo = math.floor((eta_hat - span - 1) / 2) - 1
		k_hi = math.ceil((eta_hat + span - 1) / 2) + 1
		for k in range(k_lo, k_hi + 1):
			theta = (2 * k + 1 - eta_hat) / alpha
			if theta == -1 and constraint.lo == -1 and constraint.hi == 1:
				theta = Fraction(1)
			if constraint.lo <= theta <= constraint.hi:
				found.add(theta)
	angles = tuple(CriticalAngle(theta, None, role) for theta in sorted(found))
	logger.debug('Critical angles for eta=%s, alpha=%s: %s', eta_hat, alpha, [str(a.theta) for a in angles])
	return CriticalAngleSet(angles)


def ic_sign(ratio: Series, theta: Fraction) -> Optional[int]:
	"""Sign of the leading imaginary part of W along z = r*exp(i*pi*theta); None when unknown."""
	try:
		return ratio.along_ray(theta).part_sign(Part.IM)
	except UnsupportedError:
		return None


def critical_report(s: Series, n: object, constraint: Optional[Constraint] = None) -> CriticalAngleSet:
	"""Critical angles of the dominant term of a logand, with the tail's side along each."""
	n = to_fraction(n)
	constraint = constraint or Constraint.for_mode(s.mode)
	sp = s.split_dominant()
	c = sp.c.as_constant()
	if c is None:
		return CriticalAngleSet(known=False)
	angles = critical_angles(arg_over_pi_guarded(c), sp.alpha, constraint, s.mode)
	return angles.with_signs(condition_operand(sp.ratio(), n))


# Omega


def _real_along(w: Series, constraint: Constraint) -> bool:
	try:
		for theta in constraint.directions():
			ray = w.along_ray(theta)
			if any(const_sign(c, Part.IM) for _, _, c in ray.terms):
				return False
	except UnsupportedError:
		return False
	return True


def omega_generic(
	sp: SplitSeries,
	n: Optional[Fraction] = None,
	role: Role = Role.OMEGA,
	keep_plus: bool = True,
	keep_minus: bool = True,
) -> CorrectionTerm:
	"""Omega over arg(1 + W) + arg(c*z^alpha) with the tail truncated at n."""
	p = condition_operand(sp.dominant())
	q = condition_operand(sp.one_plus_ratio(), n)
	return wrap_cases(ArgSum(((Fraction(1), q), (Fraction(1), p))), role, keep_plus, keep_minus)


def omega_simplify(
	sp: SplitSeries,
	constraint: Constraint,
	n: Optional[Fraction] = None,
	var: str = 'z',
	mode: Mode = Mode.COMPLEX,
) -> CorrectionTerm:
	"""Omega after the simplification ladder; the generic form is the last resort."""
	if sp.g.is_zero():
		logger.debug('Omega is 0: the tail vanishes')
		return _zero(Role.OMEGA_SIMPLIFIED)
	w = condition_operand(sp.ratio(), n)
	if constraint.real and _real_along(w, constraint):
		logger.debug('Omega is 0: 1 + W is real on the real line')
		return _zero(Role.OMEGA_REAL)
	c = sp.c.as_constant()
	keep_plus = keep_minus = True
	if c is not None:
		eta = arg_over_pi_guarded(c)
		if sp.alpha == 0:
			if eta == 1:
				return omega_pi0(sp, constraint, n, var)
			logger.debug('Omega is 0: constant dominant term off the cut')
			return _zero(Role.OMEGA_SIMPLIFIED)
		angles = critical_angles(eta, sp.alpha, constraint, mode)
		if angles.known:
			if not angles.angles:
				logger.debug('Omega is 0: no critical angles')
				return _zero(Role.OMEGA_SIMPLIFIED)
			signs = [ic_sign(w, theta) for theta in angles.thetas()]
			keep_plus = any(s is None or s < 0 for s in signs)
			keep_minus = any(s is None or s > 0 for s in signs)
			logger.debug('Tail signs along critical angles: %s', signs)
			if not (keep_plus or keep_minus):
				return _zero(Role.OMEGA_SIMPLIFIED)
	generic = omega_generic(sp, n, Role.OMEGA, keep_plus, keep_minus)
	return simplify_correction(generic, constraint, var)


def omega_pi0(
	sp: SplitSeries, constraint: Constraint, n: Optional[Fraction] = None, var: str = 'z'
) -> CorrectionTerm:
	"""Omega when the dominant term is a negative real constant: -2*pi*i exactly where Im(W) > 0."""
	w = condition_operand(sp.ratio(), n)
	term = CorrectionTerm(
		Role.OMEGA_PI0,
		(CaseAtom((Case(PartCmp(Part.IM, w, Relop.GT), -TWO_PI_I), Case(TRUE, ZERO))),),
	)
	return simplify_correction(term, constraint, var)


# Phi and xi


def phi_simplify(
	sp: SplitSeries, constraint: Constraint, var: str = 'z', mode: Mode = Mode.COMPLEX
) -> CorrectionTerm:
	"""ln(c*z^alpha) - ln(c) - ln(z^alpha) for a constant c."""
	role = Role.PHI_REAL if constraint.real else Role.PHI
	c = sp.c.as_constant()
	if c is None:
		raise UnsupportedError('Splitting the logarithm needs a constant dominant coefficient')
	if sp.alpha == 0:
		return _zero(role)
	keep_plus = keep_minus = True
	if mode is not Mode.REAL_BRANCH:
		bounds = bound_args({0: c}, sp.alpha, constraint)
		if bounds.eta_hat is not None:
			keep_plus = not _above(angle_sum(bounds.eta_lo, bounds.ups_lo), Fraction(-1))
			keep_minus = not _above(Fraction(1), angle_sum(bounds.eta_hi, bounds.ups_hi))
	argsum = ArgSum(
		(
			(Fraction(1), Series.constant(c, var, mode)),
			(Fraction(1), Series.monomial(ONE, sp.alpha, var, mode)),
		)
	)
	term = wrap_cases(argsum, role, keep_plus, keep_minus)
	return simplify_correction(term, constraint, var)


def angle_sum(a: Angle, b: Angle) -> Angle:
	if isinstance(a, Fraction) and isinstance(b, Fraction):
		return a + b
	return angle_mpf(a) + angle_mpf(b)


@dataclass(frozen=True, slots=True)
class PowerLog:
	"""ln(w^alpha) = multiple * ln(base) + xi."""

	multiple: Fraction
	base: Series
	xi: CorrectionTerm = field(default_factory=lambda: CorrectionTerm(Role.XI))


def xi_term(w: Series, alpha: Fraction, role: Role = Role.XI) -> CorrectionTerm:
	"""ln(w^alpha) - alpha*ln(w) on the principal branch: 2*pi*i*floor(1/2 - alpha*arg(w)/(2*pi))."""
	if alpha == 0 or alpha == 1:
		return _zero(role)
	return CorrectionTerm(role, (FloorAtom(TWO_PI_I, ArgSum(((Fraction(alpha), w),))),))


def ln_power_extract(w: Series, alpha: object, mode: Mode, force: bool = False) -> PowerLog:
	"""Pull the exponent out of ln(w^alpha).

	With real-branch powers a reduced fraction with odd denominator is left in
	place unless ``force`` asks for the arg-difference correction, and an even
	integer exponent 2k becomes k*ln(w^2).
	"""
	alpha = to_fraction(alpha)
	if mode is not Mode.REAL_BRANCH or alpha.denominator % 2 == 0:
		return PowerLog(alpha, w, xi_term(w, alpha))
	if alpha.denominator == 1:
		if alpha % 2 == 0 and alpha != 0:
			return PowerLog(alpha / 2, w * w)
		return PowerLog(alpha, w, xi_term(w, alpha))
	powered = Series.monomial(ONE, alpha, w.var, mode) if _is_variable(w) else None
	if not force or powered is None:
		logger.debug('Keeping ln(%s^(%s)) whole under real-branch powers', w.render(), alpha)
		return PowerLog(Fraction(1), powered if powered is not None else w, _zero(Role.XI))
	xi = CorrectionTerm(
		Role.XI, (ArgLinAtom(I * PI, ArgSum(((Fraction(1), powered), (-alpha, w)))),)
	)
	return PowerLog(alpha, w, xi)


def _is_variable(w: Series) -> bool:
	return w == Series.variable(w.var, w.mode)


def ln_constant_power(u: ConstantExpr, alpha: object, mode: Mode = Mode.COMPLEX) -> tuple[ConstantExpr, ConstantExpr]:
	"""ln(u^alpha) = alpha*ln(u) + xi for a constant u; returns (alpha*ln(u), xi)."""
	alpha = to_fraction(alpha)
	u = const(u)
	multiple = const_ln(u).scale(alpha)
	value = const_ln(const_pow(u, alpha, mode is Mode.REAL_BRANCH))
	return multiple, value - multiple


# ln of a series


@dataclass(frozen=True, slots=True)
class LnResult:
	"""The pieces of ln(S): degree-0 parts, one correction and the ln(1 + W) tail."""

	tail: Series
	correction: CorrectionTerm
	split: SplitLevel = SplitLevel.NONE
	constant: ConstantExpr = ZERO
	log_multiple: Fraction = Fraction(0)
	log_base: Optional[Series] = None
	unsplit: Optional[Series] = None

	def degree_zero(self) -> Coefficient:
		coef = Coefficient.constant(self.constant)
		if self.log_multiple:
			if self.log_base is None or _is_variable(self.log_base):
				coef = coef + Coefficient.log_poly(LogPoly.of({1: const(self.log_multiple)}))
			else:
				coef = coef + Coefficient.special(LogOf(self.log_base), self.log_multiple)
		if self.unsplit is not None:
			coef = coef + Coefficient.special(LogOf(self.unsplit))
		return coef + Coefficient.special(self.correction)

	def to_series(self) -> Series:
		head = Series.build(self.tail.var, self.tail.mode, {Fraction(0): self.degree_zero()})
		return head + self.tail


def ln_parts(
	s: Series,
	n: object,
	split: SplitLevel = SplitLevel.NONE,
	constraint: Optional[Constraint] = None,
	naive: bool = False,
) -> LnResult:
	"""ln(S) to order n, split as requested, with the simplified correction."""
	n = to_fraction(n)
	if s.is_zero():
		raise DomainError('Logarithm of a zero series')
	constraint = constraint or Constraint.for_mode(s.mode)
	var, mode = s.var, s.mode
	sp = s.split_dominant()
	tail = analytic_compose(LN1P, sp.ratio(), n)
	c = sp.c.as_constant()
	variable = Series.variable(var, mode)
	if naive:
		if c is None:
			return LnResult(tail, _zero(Role.OMEGA), SplitLevel.NONE, unsplit=condition_operand(sp.dominant()))
		return LnResult(tail, _zero(Role.OMEGA), SplitLevel.FULL, const_ln(c), sp.alpha)

	omega = omega_simplify(sp, constraint, n, var, mode)
	if c is None or split is SplitLevel.NONE:
		if split is not SplitLevel.NONE:
			logger.debug('Dominant coefficient is not constant; keeping ln(c*z^alpha) whole')
		if sp.alpha == 0 and c is not None:
			return LnResult(tail, omega, SplitLevel.NONE, const_ln(c))
		return LnResult(tail, omega, SplitLevel.NONE, unsplit=condition_operand(sp.dominant()))

	ln_c = const_ln(c)
	phi = phi_simplify(sp, constraint, var, mode)
	if split is SplitLevel.COEF or sp.alpha == 0:
		correction = _simplified(merge_corrections(phi.role, phi, omega), constraint, var)
		unsplit = None if sp.alpha == 0 else Series.monomial(ONE, sp.alpha, var, mode)
		return LnResult(tail, correction, split, ln_c, unsplit=unsplit)

	power = ln_power_extract(variable, sp.alpha, mode)
	role = Role.PSI_REAL if constraint.real else Role.PSI
	correction = _simplified(merge_corrections(role, phi, power.xi, omega), constraint, var)
	if power.multiple == 1 and not _is_variable(power.base):
		return LnResult(tail, correction, split, ln_c, unsplit=power.base)
	return LnResult(tail, correction, split, ln_c, power.multiple, power.base)


def _simplified(t: CorrectionTerm, constraint: Constraint, var: str) -> CorrectionTerm:
	if t.is_constant():
		return t
	return simplify_correction(t, constraint, var)


def ln_series(
	s: Series,
	n: object,
	split: SplitLevel = SplitLevel.NONE,
	constraint: Optional[Constraint] = None,
	naive: bool = False,
) -> Series:
	"""Principal ln(S) + o(z^n); a negative n leaves only the order marker."""
	n = to_fraction(n)
	if s.is_zero():
		raise DomainError('Logarithm of a zero series')
	if n < 0:
		return Series.zero(s.var, s.mode, n)
	return ln_parts(s, n, split, constraint, naive).to_series()


def ln_naive(s: Series, n: object) -> Series:
	"""The textbook ln(c) + alpha*ln(z) + ln(1 + W), without corrections."""
	return ln_series(s, n, naive=True)


def ln_product(
	s: Series,
	t: Series,
	n: object,
	constraint: Optional[Constraint] = None,
	naive: bool = False,
) -> Series:
	"""ln(S*T) as ln(S) + ln(T) + Upsilon."""
	n = to_fraction(n)
	constraint = constraint or Constraint.for_mode(s.mode)
	total = ln_series(s, n, constraint=constraint, naive=naive) + ln_series(t, n, constraint=constraint, naive=naive)
	if naive:
		return total
	argsum = ArgSum(((Fraction(1), condition_operand(s, n)), (Fraction(1), condition_operand(t, n))))
	upsilon = simplify_correction(wrap_cases(argsum, Role.UPSILON), constraint, s.var)
	return total + Series.special(upsilon, s.var, s.mode)


__all__ = [
	'TWO_PI_I',
	'CriticalAngle',
	'CriticalAngleSet',
	'LnResult',
	'PowerLog',
	'condition_operand',
	'critical_angles',
	'critical_report',
	'ic_sign',
	'ln_constant_power',
	'ln_naive',
	'ln_parts',
	'ln_power_extract',
	'ln_product',
	'merge_corrections',
	'ln_series',
	'omega_generic',
	'omega_pi0',
	'omega_simplify',
	'phi_simplify',
	'wrap_cases',
	'xi_term',
]
