"""Inverse trigonometric and hyperbolic functions of series, with Kahan branch cuts.

Every function is dispatched on the dominant term c*z^alpha of its argument U:

- alpha > 0: U -> 0 and the Maclaurin series applies directly (arccosh goes
  through +-i*arccos).
- alpha = 0: U = c + g. Off the branch cuts f is analytic at c and its Taylor
  series is composed with g. On a cut the Taylor series describes the side
  the cut is continuous with; a piecewise factor or term switches to the
  other side. Branch points go through the logarithmic identities.
- alpha < 0: U is large and the identities are rearranged so that nothing
  cancels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import logger
from .branchlog import condition_operand, ln_series
from .branchpow import pow_series, strip_unit
from .errors import DomainError, UnsupportedError
from .exactcore import (
	HALF,
	I,
	ONE,
	PI,
	ZERO,
	ConstantExpr,
	GaussianRational,
	const,
	const_arccosh,
	const_arcsinh,
	const_arctanh,
	const_pow,
	to_fraction,
)
from .piecewise import (
	And,
	ArgCmp,
	ArgSum,
	Case,
	CaseAtom,
	CasePow,
	Constraint,
	CorrectionTerm,
	Or,
	PartCmp,
	TRUE,
	UnitFactor,
	simplify_correction,
	simplify_unit,
)
from .series import ASIN0, ASINH0, ATAN0, ATANH0, Series, analytic_compose, binom, compose_coefficients
from .vocabulary import Func, InverseCase, Part, Relop, Role, SplitLevel

PI_HALF = PI.scale(HALF)


@dataclass(frozen=True, slots=True)
class InverseCaseTag:
	"""Which analysis produced the degree-0 term of an inverse function."""

	func: Func
	case: InverseCase
	alpha: Optional[Fraction] = None
	c: Optional[ConstantExpr] = None

	def render(self) -> str:
		if self.alpha is None:
			return f'{self.func}: {self.case}'
		return f'{self.func}: {self.case} (alpha={self.alpha}, c={self.c})'


def _dominant(s: Series) -> tuple[Fraction, Optional[ConstantExpr]]:
	sp = s.split_dominant()
	return sp.alpha, sp.c.as_constant()


def _gaussian(c: Optional[ConstantExpr]) -> Optional[GaussianRational]:
	return None if c is None else c.as_gaussian()


def inverse_case(func: Func, s: Series) -> InverseCaseTag:
	"""Classify the argument of an inverse function by its dominant term."""
	if s.is_zero():
		return InverseCaseTag(func, InverseCase.ANALYTIC)
	alpha, c = _dominant(s)
	g = _gaussian(c)
	case = InverseCase.ANALYTIC
	match func:
		case Func.ARCTANH:
			if alpha < 0:
				case = InverseCase.ARCTANH_NEG_ALPHA
		case Func.ARCTAN:
			if alpha < 0 or (alpha == 0 and g is not None and g.re == 0 and abs(g.im) >= 1):
				case = InverseCase.ARCTAN_NINE_CASE
		case Func.ARCSINH | Func.ARCSIN | Func.ARCCOS:
			if func is not Func.ARCSINH and g is not None:
				g = GaussianRational(0, 1) * g
			if alpha < 0:
				case = InverseCase.ASINH_UGLY if g is not None and g.re == 0 else InverseCase.ASINH_WN
			elif alpha == 0 and g is not None and g.re == 0 and abs(g.im) == 1:
				case = InverseCase.ASINH_PQ
			elif alpha == 0 and g is not None and g.re == 0 and abs(g.im) > 1:
				case = InverseCase.ASINH_T
		case Func.ARCCOSH:
			if alpha < 0:
				case = InverseCase.ACOSH_D1M
			elif alpha > 0:
				case = InverseCase.ACOSH_D2G
			elif g is not None and g.is_real():
				if g.re < -1:
					case = InverseCase.ACOSH_J
				elif g.re == -1:
					case = InverseCase.ACOSH_C
				elif g.re == 1:
					case = InverseCase.ACOSH_BE
				elif g.re < 1:
					case = InverseCase.ACOSH_K
	return InverseCaseTag(func, case, alpha, c)


# Taylor series about a regular point


def _shifted_power(a: ConstantExpr, b: ConstantExpr, c2: ConstantExpr, gamma: Fraction, count: int) -> list[ConstantExpr]:
	"""Coefficients of (a + b*t + c2*t^2)^gamma about t = 0, principal at t = 0."""
	w = Series.of({1: b / a, 2: c2 / a}, var='t')
	expansion = analytic_compose(binom(gamma), w, max(count - 1, 0))
	lead = const_pow(a, gamma)
	out = []
	for k in range(count):
		value = expansion.coefficient(k).as_constant()
		out.append(ZERO if value is None else value * lead)
	return out


def _convolve(a: list[ConstantExpr], b: list[ConstantExpr]) -> list[ConstantExpr]:
	out = [ZERO] * len(a)
	for i, x in enumerate(a):
		for j, y in enumerate(b[: len(a) - i]):
			out[i + j] = out[i + j] + x * y
	return out


def _derivative(func: Func, c: ConstantExpr, count: int) -> list[ConstantExpr]:
	"""Taylor coefficients of f'(c + t)."""
	two_c = c.scale(2)
	match func:
		case Func.ARCTANH:
			return _shifted_power(ONE - c * c, -two_c, const(-1), Fraction(-1), count)
		case Func.ARCTAN:
			return _shifted_power(ONE + c * c, two_c, ONE, Fraction(-1), count)
		case Func.ARCSINH:
			return _shifted_power(ONE + c * c, two_c, ONE, -HALF, count)
		case Func.ARCSIN:
			return _shifted_power(ONE - c * c, -two_c, const(-1), -HALF, count)
		case Func.ARCCOSH:
			left = _shifted_power(c - ONE, ONE, ZERO, -HALF, count)
			right = _shifted_power(c + ONE, ONE, ZERO, -HALF, count)
			return _convolve(left, right)
	raise UnsupportedError(f'No derivative rule for {func}')


_VALUES: dict[Func, Callable[[GaussianRational], ConstantExpr]] = {
	Func.ARCTANH: const_arctanh,
	Func.ARCSINH: const_arcsinh,
	Func.ARCCOSH: const_arccosh,
}


def taylor_about(func: Func, c: ConstantExpr, g: Series, n: object) -> Series:
	"""f(c + g) for small g, by integrating the Taylor series of f' at c."""
	value = c.as_gaussian()
	if value is None or func not in _VALUES:
		raise UnsupportedError(f'{func}({c}) needs a Gaussian rational point')
	f0 = _VALUES[func](value)

	def coefficients(count: int) -> list[ConstantExpr]:
		d = _derivative(func, c, max(count - 1, 0))
		return [f0] + [d[k].scale(Fraction(1, k + 1)) for k in range(count - 1)]

	return compose_coefficients(coefficients, g, n)


# Helpers for side factors


def _side_unit(condition, value: ConstantExpr, constraint: Constraint, var: str) -> UnitFactor:
	u = UnitFactor((CasePow((Case(condition, value), Case(TRUE, ONE))),))
	return simplify_unit(u, constraint, var)


def _side_term(condition, value: ConstantExpr, constraint: Constraint, var: str) -> CorrectionTerm:
	t = CorrectionTerm(Role.INVERSE, (CaseAtom((Case(condition, value), Case(TRUE, ZERO))),))
	return simplify_correction(t, constraint, var)


def _times_unit(s: Series, u: UnitFactor) -> Series:
	if u.is_constant():
		return s.scale(u.constant)
	return s.times_unit(u)


def _with_term(s: Series, t: CorrectionTerm) -> Series:
	if t.is_zero():
		return s
	return s + Series.special(t, s.var, s.mode)


def _constraint(s: Series, constraint: Optional[Constraint]) -> Constraint:
	return constraint or Constraint.for_mode(s.mode)


def _constant_like(s: Series, value: ConstantExpr, n: Fraction) -> Series:
	result = Series.constant(value, s.var, s.mode)
	return result if s.order is None else result.truncate(min(n, s.order))


def _square_root_of_one_plus(v: Series, n: Fraction) -> Series:
	"""sqrt(1 + V) for small V."""
	return analytic_compose(binom(HALF), v, n)


# arctanh and arctan


def arctanh_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""(ln(1 + U) - ln(1 - U))/2 with branch-correct logarithms."""
	n = to_fraction(n)
	if s.is_zero():
		return Series.zero(s.var, s.mode, s.order)
	if s.is_exact and s.is_constant() and s.coefficient(0).as_constant() in (ONE, const(-1)):
		raise DomainError(f'arctanh({s.render()}) is singular')
	alpha, _ = _dominant(s)
	if alpha > 0:
		return analytic_compose(ATANH0, s, n)
	constraint = _constraint(s, constraint)
	split = SplitLevel.FULL if alpha < 0 else SplitLevel.NONE
	plus = ln_series(1 + s, n, split, constraint, naive)
	minus = ln_series(1 - s, n, split, constraint, naive)
	logger.debug('arctanh through logarithms, alpha=%s', alpha)
	return (plus - minus).scale(HALF)


def arctan_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""-i*arctanh(i*U)."""
	n = to_fraction(n)
	if s.is_zero():
		return Series.zero(s.var, s.mode, s.order)
	if s.is_exact and s.is_constant() and s.coefficient(0).as_constant() in (I, -I):
		raise DomainError(f'arctan({s.render()}) is singular')
	alpha, _ = _dominant(s)
	if alpha > 0:
		return analytic_compose(ATAN0, s, n)
	return arctanh_series(s.scale(I), n, constraint, naive).scale(-I)


# arcsinh, arcsin and arccos


def arcsinh_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""ln(U + sqrt(1 + U^2)) arranged per case."""
	n = to_fraction(n)
	if s.is_zero():
		return Series.zero(s.var, s.mode, s.order)
	constraint = _constraint(s, constraint)
	alpha, c = _dominant(s)
	if alpha > 0:
		return analytic_compose(ASINH0, s, n)
	if alpha < 0:
		return _arcsinh_large(s, n, constraint, naive)
	g = _gaussian(c)
	if c is None or g is None:
		raise UnsupportedError(f'arcsinh of {s.render()}: the constant term is not a Gaussian rational')
	if g.re == 0 and abs(g.im) == 1:
		root = pow_series(1 + s * s, HALF, n, constraint, naive)
		return ln_series(s + root, n, constraint=constraint, naive=naive)
	taylor = taylor_about(Func.ARCSINH, c, s - c, n)
	if g.re == 0 and abs(g.im) > 1 and not naive:
		sign = 1 if g.im > 0 else -1
		# Continuous with Re(U) > 0 above +i and with Re(U) < 0 below -i.
		other = PartCmp(Part.RE, condition_operand(s, n), Relop.LT if sign > 0 else Relop.GT)
		unit = _side_unit(other, const(-1), constraint, s.var)
		if unit.is_one():
			return taylor
		half = (I * PI_HALF).scale(sign)
		return _times_unit(taylor - half, unit) + half
	return taylor


def _arcsinh_large(s: Series, n: Fraction, constraint: Constraint, naive: bool) -> Series:
	"""N*ln(U*(1 + sqrt(1 + U^-2))) + Delta, N = +-1 chosen by the principal square root."""
	alpha, _ = _dominant(s)
	inverse = s.recip(n + alpha)
	root = _square_root_of_one_plus((inverse * inverse).truncate(n), n)
	x = s * (root + 1)
	logarithm = ln_series(x, n, constraint=constraint, naive=naive)
	if naive:
		return logarithm
	y = ArgSum(((Fraction(1), condition_operand(s * root, n + alpha)),))
	flipped = Or((ArgCmp(y, Relop.GT, HALF), ArgCmp(y, Relop.LE, -HALF)))
	arg_x = ArgSum(((Fraction(1), condition_operand(x, n + alpha)),))
	delta = CorrectionTerm(
		Role.INVERSE,
		(
			CaseAtom(
				(
					Case(And((flipped, ArgCmp(arg_x, Relop.LE, Fraction(0)))), -(I * PI)),
					Case(flipped, I * PI),
					Case(TRUE, ZERO),
				)
			),
		),
	)
	delta = simplify_correction(delta, constraint, s.var)
	unit = _side_unit(flipped, const(-1), constraint, s.var)
	return _with_term(_times_unit(logarithm, unit), delta)


def arcsin_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""-i*arcsinh(i*U)."""
	n = to_fraction(n)
	if s.is_zero():
		return Series.zero(s.var, s.mode, s.order)
	alpha, _ = _dominant(s)
	if alpha > 0:
		return analytic_compose(ASIN0, s, n)
	return arcsinh_series(s.scale(I), n, constraint, naive).scale(-I)


def arccos_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""pi/2 - arcsin(U)."""
	n = to_fraction(n)
	if s.is_zero():
		return _constant_like(s, PI_HALF, n)
	return PI_HALF - arcsin_series(s, n, constraint, naive)


# arccosh


def arccosh_series(
	s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""Kahan arccosh, 2*ln(sqrt((U + 1)/2) + sqrt((U - 1)/2)), per case."""
	n = to_fraction(n)
	var = s.var
	constraint = _constraint(s, constraint)
	if s.is_zero():
		return _constant_like(s, I * PI_HALF, n)
	tag = inverse_case(Func.ARCCOSH, s)
	alpha, c = tag.alpha, tag.c
	below = PartCmp(Part.IM, condition_operand(s, n), Relop.LT)
	match tag.case:
		case InverseCase.ACOSH_D1M:
			assert alpha is not None
			inverse = s.recip(n + alpha)
			root = _square_root_of_one_plus((-(inverse * inverse)).truncate(n), n)
			return ln_series(s * (root + 1), n, constraint=constraint, naive=naive)
		case InverseCase.ACOSH_D2G | InverseCase.ACOSH_C:
			arccos = arccos_series(s, n, constraint, naive).scale(I)
			if naive:
				return arccos
			return _times_unit(arccos, _side_unit(below, const(-1), constraint, var))
		case InverseCase.ACOSH_BE:
			half = (s - 1).scale(HALF)
			root = pow_series(half, HALF, n, constraint, naive)
			body, unit = strip_unit(root)
			result = analytic_compose(ASINH0, body, n).scale(2)
			return result if unit is None else result.times_unit(unit)
	if c is None or c.as_gaussian() is None:
		raise UnsupportedError(f'arccosh of {s.render()}: the constant term is not a Gaussian rational')
	taylor = taylor_about(Func.ARCCOSH, c, s - c, n)
	if naive:
		return taylor
	if tag.case is InverseCase.ACOSH_K:
		return _times_unit(taylor, _side_unit(below, const(-1), constraint, var))
	if tag.case is InverseCase.ACOSH_J:
		return _with_term(taylor, _side_term(below, -(I * PI).scale(2), constraint, var))
	return taylor


INVERSE_FUNCTIONS: dict[Func, Callable[..., Series]] = {
	Func.ARCTANH: arctanh_series,
	Func.ARCTAN: arctan_series,
	Func.ARCSINH: arcsinh_series,
	Func.ARCSIN: arcsin_series,
	Func.ARCCOS: arccos_series,
	Func.ARCCOSH: arccosh_series,
}


def inverse_series(
	func: Func, s: Series, n: object, constraint: Optional[Constraint] = None, naive: bool = False
) -> Series:
	"""Dispatch to the series of an inverse function."""
	try:
		handler = INVERSE_FUNCTIONS[func]
	except KeyError as e:
		raise UnsupportedError(f'{func} is not an inverse function') from e
	logger.debug('Expanding %s', inverse_case(func, s).render())
	return handler(s, n, constraint, naive)


__all__ = [
	'INVERSE_FUNCTIONS',
	'PI_HALF',
	'InverseCaseTag',
	'arccos_series',
	'arccosh_series',
	'arcsin_series',
	'arcsinh_series',
	'arctan_series',
	'arctanh_series',
	'inverse_case',
	'inverse_series',
	'taylor_about',
]
