"""Expression and series-text grammars with their LALR parsers."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from ..errors import SeriesError, SeriesParseError
from ..exactcore import (
	HALF,
	I,
	ONE,
	PI,
	ConstantExpr,
	GaussianRational,
	const_arccos,
	const_arccosh,
	const_arcsin,
	const_arcsinh,
	const_arctan,
	const_arctanh,
	const_exp,
	const_ln,
	const_normalize,
	const_pow,
)
from ..series import Coefficient, LogPoly, Series
from ..vocabulary import Func, Mode
from .expr import Add, Call, Div, Expr, ImagUnit, Mul, Neg, Num, Pi, Pow, Sub, Var

GRAMMAR = r"""
	?start: sum

	?sum: product
		| sum "+" product   -> add
		| sum "-" product   -> sub

	?product: unary
		| product "*" unary  -> mul
		| product "/" unary  -> div

	?unary: power
		| "-" unary          -> neg
		| "+" unary

	?power: atom
		| atom "^" exponent  -> pow

	?exponent: power
		| "-" exponent       -> neg
		| "+" exponent

	?atom: NUMBER            -> number
		| NAME "(" sum ")"   -> call
		| NAME               -> name
		| "(" sum ")"

	NAME: /[A-Za-z_][A-Za-z0-9_]*/
	%import common.NUMBER
	%import common.WS
	%ignore WS
"""

CONSTANT_NAMES = {'i': ImagUnit(), 'I': ImagUnit(), 'pi': Pi(), 'Pi': Pi()}


def rational_value(e: Expr) -> Optional[Fraction]:
	"""Fold an expression built from rational literals, or None."""
	match e:
		case Num(value=v):
			return v
		case Neg(arg=a):
			v = rational_value(a)
			return None if v is None else -v
		case Add(left=a, right=b) | Sub(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
			x, y = rational_value(a), rational_value(b)
			if x is None or y is None:
				return None
			match e:
				case Add():
					return x + y
				case Sub():
					return x - y
				case Mul():
					return x * y
			return None if y == 0 else x / y
		case Pow(base=b, exponent=q) if q.denominator == 1:
			v = rational_value(b)
			if v is None or (v == 0 and q < 0):
				return None
			return v ** int(q)
	return None


def _offset(text: str, position: int) -> int:
	return len(text[: max(position, 0)].encode('utf-8'))


@v_args(inline=True)
class _ExprBuilder(Transformer):
	"""Turns the parse tree into expression nodes."""

	def __init__(self, text: str, var: Optional[str]) -> None:
		super().__init__()
		self.text = text
		self.var = var

	def number(self, token: Token) -> Num:
		return Num(Fraction(str(token)))

	def name(self, token: Token) -> Expr:
		name = str(token)
		if name in CONSTANT_NAMES:
			return CONSTANT_NAMES[name]
		if self.var is not None and name != self.var:
			raise SeriesParseError(
				f"Unknown name '{name}'; the expansion variable is '{self.var}'",
				_offset(self.text, token.start_pos or 0),
			)
		return Var(name)

	def call(self, token: Token, arg: Expr) -> Call:
		func = Func.from_name(str(token))
		if func is None:
			raise SeriesParseError(f"Unknown function '{token}'", _offset(self.text, token.start_pos or 0))
		return Call(func, arg)

	def pow(self, base: Expr, exponent: Expr) -> Pow:
		q = rational_value(exponent)
		if q is None:
			raise SeriesParseError('Exponents must be rational constants')
		return Pow(base, q)

	def neg(self, arg: Expr) -> Neg:
		return Neg(arg)

	def add(self, a: Expr, b: Expr) -> Add:
		return Add(a, b)

	def sub(self, a: Expr, b: Expr) -> Sub:
		return Sub(a, b)

	def mul(self, a: Expr, b: Expr) -> Mul:
		return Mul(a, b)

	def div(self, a: Expr, b: Expr) -> Div:
		return Div(a, b)


_parser = Lark(GRAMMAR, parser='lalr')


def _build(parser: Lark, builder: Transformer, text: str) -> Any:
	try:
		tree = parser.parse(text)
	except UnexpectedEOF as e:
		raise SeriesParseError('Unexpected end of expression', len(text.encode('utf-8'))) from e
	except UnexpectedCharacters as e:
		raise SeriesParseError(f"Unexpected character '{text[e.pos_in_stream]}'", _offset(text, e.pos_in_stream)) from e
	except UnexpectedToken as e:
		if e.token.type == '$END':
			raise SeriesParseError('Unexpected end of expression', len(text.encode('utf-8'))) from e
		raise SeriesParseError(f"Unexpected '{e.token}'", _offset(text, e.token.start_pos or 0)) from e
	except UnexpectedInput as e:
		raise SeriesParseError('Syntax error', _offset(text, e.pos_in_stream or 0)) from e
	try:
		result = builder.transform(tree)
	except VisitError as e:
		if isinstance(e.orig_exc, SeriesError):
			raise e.orig_exc from e
		raise
	if isinstance(result, Token):
		raise SeriesParseError('Syntax error', _offset(text, result.start_pos or 0))
	return result


def parse(text: str, var: Optional[str] = None) -> Expr:
	"""Parse an expression; with ``var`` given, every other bare name is rejected.

	Raises:
		SeriesParseError: on syntax errors (with byte offset), unknown
			functions and names, and non-rational exponents.
	"""
	return _build(_parser, _ExprBuilder(text, var), text)


# Series text, as printed by ``format_series``

SERIES_GRAMMAR = GRAMMAR.replace('?start: sum', 'start: "(" sum ")"')

_CONSTANT_FUNCTIONS: dict[Func, Callable[[GaussianRational], ConstantExpr]] = {
	Func.ARCTAN: const_arctan,
	Func.ARCTANH: const_arctanh,
	Func.ARCSIN: const_arcsin,
	Func.ARCCOS: const_arccos,
	Func.ARCSINH: const_arcsinh,
	Func.ARCCOSH: const_arccosh,
}


@dataclass(frozen=True, slots=True)
class _LittleO:
	order: Fraction


def _normalized(s: Series) -> Series:
	"""Rebuild every constant of a parsed series in canonical form."""
	items = {}
	for e, coef in s.terms:
		poly = coef.plain()
		if poly is None:
			raise SeriesParseError(f'Coefficient {coef.render(s.var)} is not a log-polynomial')
		items[e] = Coefficient.log_poly(LogPoly.of({k: const_normalize(c) for k, c in poly.items}))
	return Series.build(s.var, s.mode, items, s.order)


@v_args(inline=True)
class _SeriesBuilder(Transformer):
	"""Folds series text into an exact series, truncated by its trailing o(var^n)."""

	def __init__(self, text: str, var: str, mode: Mode) -> None:
		super().__init__()
		self.text = text
		self.var = var
		self.mode = mode

	def _constant(self, value: object) -> Series:
		return Series.constant(value, self.var, self.mode)

	def _series(self, value: object, what: str) -> Series:
		if not isinstance(value, Series):
			raise SeriesParseError(f'o({self.var}^...) can only close the series, not be used in {what}')
		return value

	def _as_constant(self, value: object, what: str) -> ConstantExpr:
		s = self._series(value, what)
		c = s.coefficient(0).as_constant() if all(e == 0 for e in s.exponents()) else None
		if c is None:
			raise SeriesParseError(f'{what} needs a constant, got {s.render()}')
		return c

	def _rational(self, value: object, what: str) -> Fraction:
		g = self._as_constant(value, what).as_gaussian()
		if g is None or not g.is_real():
			raise SeriesParseError(f'{what} must be a rational constant')
		return g.re

	def start(self, value: object) -> Series:
		if isinstance(value, _LittleO):
			return Series.zero(self.var, self.mode, value.order)
		return value

	def number(self, token: Token) -> Series:
		return self._constant(Fraction(str(token)))

	def name(self, token: Token) -> Series:
		name = str(token)
		if name == self.var:
			return Series.variable(self.var, self.mode)
		match CONSTANT_NAMES.get(name):
			case ImagUnit():
				return self._constant(I)
			case Pi():
				return self._constant(PI)
		raise SeriesParseError(
			f"Unknown name '{name}'; the series variable is '{self.var}'", _offset(self.text, token.start_pos or 0)
		)

	def call(self, token: Token, arg: object) -> Union[Series, _LittleO]:
		name = str(token)
		if name == 'o':
			s = self._series(arg, 'o(...)')
			if len(s.terms) != 1 or s.terms[0][1].as_constant() != ONE:
				raise SeriesParseError(f'o(...) takes a power of {self.var}', _offset(self.text, token.start_pos or 0))
			return _LittleO(s.terms[0][0])
		func = Func.from_name(name)
		if func is Func.LN and self._series(arg, 'ln') == Series.variable(self.var, self.mode):
			return Series.log_var(self.var, self.mode)
		if func is None:
			raise SeriesParseError(f"Unknown function '{name}'", _offset(self.text, token.start_pos or 0))
		c = self._as_constant(arg, name)
		match func:
			case Func.LN:
				return self._constant(const_ln(c))
			case Func.EXP:
				return self._constant(const_exp(c))
			case Func.SQRT:
				return self._constant(const_pow(c, HALF))
		g = c.as_gaussian()
		if g is None:
			raise SeriesParseError(f'{name} of {c} is outside the constant grammar')
		return self._constant(_CONSTANT_FUNCTIONS[func](g))

	def pow(self, base: object, exponent: object) -> Series:
		q = self._rational(exponent, 'An exponent')
		b = self._series(base, 'a power')
		if b == Series.variable(self.var, self.mode):
			return Series.monomial(ONE, q, self.var, self.mode)
		if all(e == 0 for e in b.exponents()) and b.coefficient(0).as_constant() is not None:
			return self._constant(const_pow(self._as_constant(b, 'a power'), q))
		if q.denominator != 1 or q < 0:
			raise SeriesParseError(f'Only {self.var} and constants take the power {q}')
		return b.power_int(int(q))

	def neg(self, arg: object) -> Series:
		return -self._series(arg, 'a negation')

	def add(self, a: object, b: object) -> Series:
		left = self._series(a, 'a sum')
		if isinstance(b, _LittleO):
			return left.truncate(b.order)
		return left + b

	def sub(self, a: object, b: object) -> Series:
		return self._series(a, 'a difference') - self._series(b, 'a difference')

	def mul(self, a: object, b: object) -> Series:
		return self._series(a, 'a product') * self._series(b, 'a product')

	def div(self, a: object, b: object) -> Series:
		c = self._as_constant(b, 'A divisor')
		if c.is_zero():
			raise SeriesParseError('Division by zero')
		return self._series(a, 'a quotient').scale(c.reciprocal())


_series_parser = Lark(SERIES_GRAMMAR, parser='lalr')


def parse_series(text: str, var: str = 'z', mode: Mode = Mode.COMPLEX) -> Series:
	"""Read back the text of ``format_series`` for series with log-polynomial coefficients.

	The trailing ``o(var^n)`` sets the order; without it the series is exact.
	Piecewise corrections and unit factors are not part of the grammar.

	Raises:
		SeriesParseError: on syntax errors and on text outside the grammar.
	"""
	result = _build(_series_parser, _SeriesBuilder(text, var, mode), text)
	return _normalized(result)


__all__ = ['GRAMMAR', 'SERIES_GRAMMAR', 'parse', 'parse_series', 'rational_value']
