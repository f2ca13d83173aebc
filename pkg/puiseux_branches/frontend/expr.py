"""Expression trees accepted by the expander, and their printer."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..exactcore import format_rational
from ..vocabulary import Func


@dataclass(frozen=True, slots=True)
class Num:
	"""Non-negative rational literal; decimals are read exactly."""

	value: Fraction


@dataclass(frozen=True, slots=True)
class ImagUnit:
	pass


@dataclass(frozen=True, slots=True)
class Pi:
	pass


@dataclass(frozen=True, slots=True)
class Var:
	name: str


@dataclass(frozen=True, slots=True)
class Neg:
	arg: Expr


@dataclass(frozen=True, slots=True)
class Add:
	left: Expr
	right: Expr


@dataclass(frozen=True, slots=True)
class Sub:
	left: Expr
	right: Expr


@dataclass(frozen=True, slots=True)
class Mul:
	left: Expr
	right: Expr


@dataclass(frozen=True, slots=True)
class Div:
	left: Expr
	right: Expr


@dataclass(frozen=True, slots=True)
class Pow:
	base: Expr
	exponent: Fraction


@dataclass(frozen=True, slots=True)
class Call:
	func: Func
	arg: Expr


Expr = Union[Num, ImagUnit, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Call]

# Binding strength, loosest first
_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = range(5)


def _precedence(e: Expr) -> int:
	match e:
		case Add() | Sub():
			return _SUM
		case Mul() | Div():
			return _PRODUCT
		case Neg():
			return _UNARY
		case Pow():
			return _POWER
	return _ATOM


def _decimal(q: Fraction) -> str:
	"""Exact decimal text of a rational with a terminating expansion."""
	digits = 0
	scaled = q
	while scaled.denominator != 1:
		scaled *= 10
		digits += 1
		if digits > 64:
			return format_rational(q)
	text = str(scaled.numerator).rjust(digits + 1, '0')
	return f'{text[:-digits]}.{text[-digits:]}' if digits else text


def _wrap(e: Expr, floor: int) -> str:
	text = to_text(e)
	return f'({text})' if _precedence(e) < floor else text


def _exponent_text(q: Fraction) -> str:
	if q.denominator == 1 and q >= 0:
		return str(q.numerator)
	return f'({format_rational(q)})'


def to_text(e: Expr) -> str:
	"""Print an expression so that ``parse(to_text(e)) == e``."""
	match e:
		case Num(value=v):
			return _decimal(v)
		case ImagUnit():
			return 'i'
		case Pi():
			return 'pi'
		case Var(name=name):
			return name
		case Neg(arg=a):
			return f'-{_wrap(a, _UNARY)}'
		case Add(left=a, right=b):
			return f'{_wrap(a, _SUM)} + {_wrap(b, _PRODUCT)}'
		case Sub(left=a, right=b):
			return f'{_wrap(a, _SUM)} - {_wrap(b, _PRODUCT)}'
		case Mul(left=a, right=b):
			return f'{_wrap(a, _PRODUCT)}*{_wrap(b, _UNARY)}'
		case Div(left=a, right=b):
			return f'{_wrap(a, _PRODUCT)}/{_wrap(b, _UNARY)}'
		case Pow(base=b, exponent=q):
			return f'{_wrap(b, _ATOM)}^{_exponent_text(q)}'
		case Call(func=f, arg=a):
			return f'{f.value}({to_text(a)})'
	raise TypeError(f'Not an expression: {e!r}')


def variables(e: Expr) -> set[str]:
	"""Names of the variables occurring in an expression."""
	match e:
		case Var(name=name):
			return {name}
		case Neg(arg=a) | Pow(base=a) | Call(arg=a):
			return variables(a)
		case Add(left=a, right=b) | Sub(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
			return variables(a) | variables(b)
	return set()


__all__ = [
	'Add',
	'Call',
	'Div',
	'Expr',
	'ImagUnit',
	'Mul',
	'Neg',
	'Num',
	'Pi',
	'Pow',
	'Sub',
	'Var',
	'to_text',
	'variables',
]
