"""Bottom-up expansion of expression trees into corrected series."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .. import logger
from ..branchlog import CriticalAngleSet, critical_report, ln_series
from ..branchpow import pow_series, sqrt_series
from ..errors import DomainError, UnsupportedError
from ..exactcore import I, PI, const
from ..inversefn import InverseCaseTag, inverse_case, inverse_series
from ..models import ExpandRequest
from ..piecewise import Constraint
from ..series import Series, exp_series
from ..vocabulary import Func, Mode, SplitLevel
from .expr import Add, Call, Div, Expr, ImagUnit, Mul, Neg, Num, Pi, Pow, Sub, Var, to_text
from .parser import parse

MAX_GUARD = Fraction(256)
INVERSE = (Func.ARCTAN, Func.ARCTANH, Func.ARCSIN, Func.ARCCOS, Func.ARCSINH, Func.ARCCOSH)


class Expander:
	"""Expands an expression tree to o(var^n).

	Operands of products, quotients and functions are expanded ``guard``
	orders deeper than their parent needs. When a node still comes out short,
	its operands are expanded again with a larger guard.
	"""

	def __init__(
		self,
		var: str = 'z',
		mode: Mode = Mode.COMPLEX,
		split: SplitLevel = SplitLevel.NONE,
		constraint: Optional[Constraint] = None,
		naive: bool = False,
		guard: Fraction = Fraction(2),
		attempts: int = 4,
	) -> None:
		self.var = var
		self.mode = mode
		self.split = split
		self.constraint = constraint or Constraint.for_mode(mode)
		self.naive = naive
		self.guard = Fraction(guard)
		self.attempts = attempts

	def expand(self, e: Expr, n: object) -> Series:
		n = Fraction(n)
		return self._expand(e, n).truncate(n)

	def _expand(self, e: Expr, n: Fraction) -> Series:
		match e:
			case Num(value=v):
				return self._constant(const(v))
			case ImagUnit():
				return self._constant(I)
			case Pi():
				return self._constant(PI)
			case Var(name=name):
				if name != self.var:
					raise UnsupportedError(f"'{name}' is not the expansion variable '{self.var}'")
				return Series.variable(self.var, self.mode)
			case Neg(arg=a):
				return -self._expand(a, n)
			case Add(left=a, right=b):
				return self._expand(a, n) + self._expand(b, n)
			case Sub(left=a, right=b):
				return self._expand(a, n) - self._expand(b, n)
			case Mul(left=a, right=b):
				return self._node(n, lambda x, y: _cut(x * y, n), a, b)
			case Div(left=a, right=b):
				return self._node(n, lambda x, y: _divide(x, y, n), a, b)
			case Pow(base=b, exponent=q):
				return self._node(n, lambda x: pow_series(x, q, n, self.constraint, self.naive), b)
			case Call(func=func, arg=a):
				return self._node(n, self._function(func, n), a)
		raise UnsupportedError(f'Cannot expand {e!r}')

	def _constant(self, value) -> Series:
		return Series.constant(value, self.var, self.mode)

	def _function(self, func: Func, n: Fraction) -> Callable[[Series], Series]:
		match func:
			case Func.LN:
				return lambda x: ln_series(x, n, self.split, self.constraint, self.naive)
			case Func.EXP:
				return lambda x: exp_series(x, n)
			case Func.SQRT:
				return lambda x: sqrt_series(x, n, self.constraint, self.naive)
		return lambda x: inverse_series(func, x, n, self.constraint, self.naive)

	def _node(self, n: Fraction, build: Callable[..., Series], *args: Expr) -> Series:
		extra = self.guard
		result: Optional[Series] = None
		for _ in range(self.attempts):
			operands = self._operands(args, n, extra)
			result = build(*operands)
			if result.order is None or result.order >= n or all(op.order is None for op in operands):
				return result
			logger.debug('Order %s short of %s, deepening operands by %s', result.order, n, extra)
			extra += max(n - result.order, Fraction(1))
		assert result is not None
		return result

	def _operands(self, args: tuple[Expr, ...], n: Fraction, extra: Fraction) -> list[Series]:
		"""Operands to o(var^(n+extra)), deepened until none has vanished by truncation."""
		while True:
			operands = [self._expand(a, n + extra) for a in args]
			vanished = [op for op in operands if op.is_zero() and op.order is not None]
			if not vanished or extra > MAX_GUARD:
				return operands
			extra = 2 * extra + max(n, Fraction(1))
			logger.debug('Operand vanished to o(%s^%s), deepening by %s', self.var, vanished[0].order, extra)

	def operand(self, e: Expr, n: object) -> Series:
		"""The series of a sub-expression, deep enough for a branch analysis at order n."""
		return self._operands((e,), Fraction(n), self.guard)[0]


def _cut(s: Series, n: Fraction) -> Series:
	return s if s.order is None else s.truncate(n)


def _divide(x: Series, y: Series, n: Fraction) -> Series:
	if y.is_zero():
		raise DomainError('Division by a zero series')
	return x.div(y, n)


@dataclass(frozen=True, slots=True)
class Expansion:
	"""An expanded request with what it delivered."""

	request: ExpandRequest
	expr: Expr
	series: Series

	@property
	def delivered(self) -> Optional[Fraction]:
		return self.series.order

	@property
	def complete(self) -> bool:
		return self.delivered is None or self.delivered >= self.request.n

	def inverse_tag(self) -> Optional[InverseCaseTag]:
		"""Case analysis of the outermost inverse function, if the expression is one."""
		if isinstance(self.expr, Call) and self.expr.func in INVERSE:
			expander = expander_for(self.request)
			return inverse_case(self.expr.func, expander.operand(self.expr.arg, self.request.n))
		return None


def expander_for(request: ExpandRequest) -> Expander:
	return Expander(request.var, request.mode, request.split, request.constraint, request.naive)


def _check_log_degree(s: Series, cap: int) -> None:
	degree = max((c.log_degree for _, c in s.materialize().terms), default=0)
	if degree > cap:
		raise UnsupportedError(f'ln({s.var})^{degree} exceeds the log-degree cap of {cap}')


def expand(request: ExpandRequest) -> Expansion:
	"""Parse and expand a request.

	Raises:
		SeriesParseError: if the expression does not parse.
		SeriesError: for essential singularities, unsupported constructs and
			zero denominators.
	"""
	with logger.expression(request.text):
		expr = parse(request.text, request.var)
		series = expander_for(request).expand(expr, request.n)
	_check_log_degree(series, request.max_log_degree)
	result = Expansion(request, expr, series)
	if not result.complete:
		logger.warning('Delivered o(%s^%s), short of the requested order %s', request.var, result.delivered, request.n)
	return result


def expand_text(text: str, order: object = 4, **options) -> Series:
	"""Shorthand for ``expand(ExpandRequest(text=..., order=...)).series``."""
	return expand(ExpandRequest(text=text, order=str(order), **options)).series


def _branch_operands(e: Expr) -> list[tuple[str, Expr]]:
	"""Logands and radicands, outermost first; inverse functions contribute their argument."""
	found: list[tuple[str, Expr]] = []
	match e:
		case Call(func=func, arg=a):
			if func is Func.LN or func is Func.SQRT or func in INVERSE:
				found.append((to_text(e), a))
			found.extend(_branch_operands(a))
		case Pow(base=b, exponent=q):
			if q.denominator != 1:
				found.append((to_text(e), b))
			found.extend(_branch_operands(b))
		case Neg(arg=a):
			found.extend(_branch_operands(a))
		case Add(left=a, right=b) | Sub(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
			found.extend(_branch_operands(a))
			found.extend(_branch_operands(b))
	return found


def branch_report(request: ExpandRequest) -> list[tuple[str, CriticalAngleSet]]:
	"""Critical angles of every logand and radicand in the expression."""
	expr = parse(request.text, request.var)
	expander = expander_for(request)
	report = []
	for label, operand in _branch_operands(expr):
		s = expander.operand(operand, request.n)
		if s.is_zero():
			continue
		report.append((label, critical_report(s, request.n, request.constraint)))
	return report


__all__ = [
	'Expander',
	'Expansion',
	'branch_report',
	'expand',
	'expand_text',
	'expander_for',
]
