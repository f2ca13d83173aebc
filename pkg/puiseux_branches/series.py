"""Truncated generalized Puiseux series about 0.

A series is a finite sum of c_e(l) * z^e over rational exponents e, where
each coefficient is a polynomial in l = ln(z) whose coefficients are exact
constants, optionally multiplied by piecewise atoms (corrections, unit
factors, or logarithms and powers of other series kept whole). The order
marker o(z^n) records what the truncation proves; every operation derives
the order of its result from the orders of its inputs.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import groupby
from typing import Optional, Union

import mpmath

from .errors import (
	DomainError,
	EssentialSingularityError,
	EvaluationError,
	NotSmallSeriesError,
	SingularAtZeroError,
	UnsupportedError,
	UsageError,
)
from .exactcore import (
	DEFAULT_PRECISION,
	MAX_PRECISION,
	MIN_PRECISION,
	ONE,
	PI,
	ZERO,
	ComplexFloat,
	ConstantExpr,
	GaussianRational,
	I,
	check_precision,
	const,
	const_arg_over_pi,
	const_exp,
	const_is_zero,
	const_sign,
	format_rational,
	principal_ln,
	principal_power,
	to_fraction,
	unit_power,
)
from .piecewise import (
	CorrectionTerm,
	Point,
	RayExpansion,
	UnitFactor,
	correction_eval,
	unit_eval,
	unit_from_correction,
)
from .vocabulary import Mode, Part

LOG_DEGREE_CAP = 8

_GUARD_BITS = 16
_ANGLE_TERMS = 4

Scalar = Union[ConstantExpr, GaussianRational, int, Fraction]


def _min_order(*orders: Optional[Fraction]) -> Optional[Fraction]:
	known = [o for o in orders if o is not None]
	return min(known) if known else None


def _power_text(var: str, e: Fraction) -> str:
	if e == 0:
		return ''
	if e == 1:
		return var
	if e.denominator == 1 and e > 0:
		return f'{var}^{e}'
	return f'{var}^({format_rational(e)})'


def _factor_text(c: ConstantExpr) -> str:
	text = str(c)
	return f'({text})' if len(c.terms) > 1 else text


# Log polynomials


@dataclass(frozen=True, slots=True)
class LogPoly:
	"""sum c_k * ln(var)^k with constant coefficients."""

	items: tuple[tuple[int, ConstantExpr], ...] = ()

	@classmethod
	def of(cls, items: Mapping[int, ConstantExpr]) -> LogPoly:
		kept = sorted(
			((k, const(c)) for k, c in items.items() if not const_is_zero(const(c))), key=lambda t: t[0]
		)
		if kept and kept[-1][0] > LOG_DEGREE_CAP:
			raise UnsupportedError(f'ln(z)^{kept[-1][0]} exceeds the log-degree cap of {LOG_DEGREE_CAP}')
		return cls(tuple(kept))

	@classmethod
	def constant(cls, c: Scalar) -> LogPoly:
		return cls.of({0: const(c)})

	@property
	def degree(self) -> int:
		return self.items[-1][0] if self.items else -1

	def top(self) -> ConstantExpr:
		return self.items[-1][1] if self.items else ZERO

	def is_zero(self) -> bool:
		return not self.items

	def as_constant(self) -> Optional[ConstantExpr]:
		if self.degree > 0:
			return None
		return self.items[0][1] if self.items else ZERO

	def as_dict(self) -> dict[int, ConstantExpr]:
		return dict(self.items)

	def __add__(self, other: LogPoly) -> LogPoly:
		merged = self.as_dict()
		for k, c in other.items:
			merged[k] = merged.get(k, ZERO) + c
		return LogPoly.of(merged)

	def __neg__(self) -> LogPoly:
		return LogPoly(tuple((k, -c) for k, c in self.items))

	def __mul__(self, other: LogPoly) -> LogPoly:
		out: dict[int, ConstantExpr] = {}
		for k1, c1 in self.items:
			for k2, c2 in other.items:
				out[k1 + k2] = out.get(k1 + k2, ZERO) + c1 * c2
		return LogPoly.of(out)

	def scale(self, factor: Scalar) -> LogPoly:
		factor = const(factor)
		return LogPoly.of({k: c * factor for k, c in self.items})

	def evaluate_mp(self, ell: Optional[mpmath.mpc]) -> mpmath.mpc:
		if self.degree > 0 and ell is None:
			raise SingularAtZeroError('ln of the variable is undefined at 0')
		total = mpmath.mpc(0)
		for k, c in self.items:
			term = c.evaluate_mp()
			if k:
				term *= ell**k
			total += term
		return total

	def render(self, var: str) -> str:
		parts = []
		for k, c in self.items:
			log = '' if k == 0 else (f'ln({var})' if k == 1 else f'ln({var})^{k}')
			if not log:
				parts.append(str(c))
			elif c == ONE:
				parts.append(log)
			elif c == -ONE:
				parts.append(f'-{log}')
			else:
				parts.append(f'{_factor_text(c)}*{log}')
		return _join_signed(parts) if parts else '0'


def _join_signed(parts: list[str]) -> str:
	out = parts[0]
	for text in parts[1:]:
		out += f' - {text[1:]}' if text.startswith('-') else f' + {text}'
	return out


# Special atoms


@dataclass(frozen=True, slots=True)
class LogOf:
	"""Principal logarithm of a series, kept unexpanded."""

	operand: Series

	def render(self) -> str:
		return f'ln({self.operand.render()})'

	def evaluate_mp(self, point: Point) -> mpmath.mpc:
		value = self.operand.evaluate_mp(point)
		if value == 0:
			raise EvaluationError(f'ln({self.operand.render()}) is singular here')
		return principal_ln(value)


@dataclass(frozen=True, slots=True)
class PowOf:
	"""Principal power of a series, kept unexpanded."""

	operand: Series
	exponent: Fraction

	def render(self) -> str:
		return f'({self.operand.render()})^({format_rational(self.exponent)})'

	def evaluate_mp(self, point: Point) -> mpmath.mpc:
		value = self.operand.evaluate_mp(point)
		return principal_power(value, self.exponent, self.operand.mode is Mode.REAL_BRANCH)


Special = Union[CorrectionTerm, UnitFactor, LogOf, PowOf]
Key = tuple[Special, ...]

_SPECIAL_RANK = {UnitFactor: 0, CorrectionTerm: 1, LogOf: 2, PowOf: 3}


def _special_sort(atom: Special) -> tuple[int, str]:
	return (_SPECIAL_RANK[type(atom)], atom.render())


def _special_text(atom: Special) -> str:
	if isinstance(atom, CorrectionTerm) and len(atom.atoms) + (not atom.constant.is_zero()) > 1:
		return f'({atom.render()})'
	return atom.render()


def _key_text(key: Key) -> str:
	texts: list[str] = []
	for atom, run in groupby(key):
		count = len(list(run))
		text = _special_text(atom)
		texts.append(f'{text}^{count}' if count > 1 and isinstance(atom, LogOf) else text)
	return '*'.join(texts)


def _log_weight(atom: Special) -> int:
	"""1 for an unexpanded logarithm that grows like ln(var) towards 0."""
	if not isinstance(atom, LogOf) or atom.operand.is_zero():
		return 0
	return int(atom.operand.dominant_exponent != 0 or atom.operand.has_logs())


def _merge_keys(a: Key, b: Key) -> tuple[Key, ConstantExpr]:
	"""Product of two keys; unit factors collapse into one, their constant is returned."""
	units = [s for s in (*a, *b) if isinstance(s, UnitFactor)]
	rest: list[Special] = [s for s in (*a, *b) if not isinstance(s, UnitFactor)]
	factor = ONE
	if units:
		product = units[0]
		for u in units[1:]:
			product = product * u
		factor = product.constant
		if not product.pure().is_one():
			rest.append(product.pure())
	return tuple(sorted(rest, key=_special_sort)), factor


def _special_value(atom: Special, point: Point) -> mpmath.mpc:
	precision = min(max(mpmath.mp.prec, MIN_PRECISION), MAX_PRECISION)
	match atom:
		case CorrectionTerm():
			return correction_eval(atom, point, precision).evaluate_mp()
		case UnitFactor():
			return unit_eval(atom, point, precision).evaluate_mp()
		case _:
			return atom.evaluate_mp(point)


@dataclass(frozen=True, slots=True)
class Coefficient:
	"""sum over keys of LogPoly * product of special atoms."""

	parts: tuple[tuple[Key, LogPoly], ...] = ()

	@classmethod
	def of(cls, items: Mapping[Key, LogPoly]) -> Coefficient:
		kept = [(k, p) for k, p in items.items() if not p.is_zero()]
		kept.sort(key=lambda item: _key_text(item[0]))
		return cls(tuple(kept))

	@classmethod
	def constant(cls, c: Scalar) -> Coefficient:
		return cls.of({(): LogPoly.constant(c)})

	@classmethod
	def log_poly(cls, poly: LogPoly) -> Coefficient:
		return cls.of({(): poly})

	@classmethod
	def special(cls, atom: Special, factor: Scalar = ONE) -> Coefficient:
		factor = const(factor)
		if isinstance(atom, UnitFactor):
			factor = factor * atom.constant
			atom = atom.pure()
			if atom.is_one():
				return cls.constant(factor)
		if isinstance(atom, CorrectionTerm):
			if atom.is_zero():
				return cls()
			if atom.is_constant():
				return cls.constant(atom.constant * factor)
		return cls.of({(atom,): LogPoly.constant(factor)})

	def is_zero(self) -> bool:
		return not self.parts

	def plain(self) -> Optional[LogPoly]:
		"""The coefficient as a bare log-polynomial, when it has no special atoms."""
		if not self.parts:
			return LogPoly()
		if len(self.parts) == 1 and not self.parts[0][0]:
			return self.parts[0][1]
		return None

	def as_constant(self) -> Optional[ConstantExpr]:
		poly = self.plain()
		return None if poly is None else poly.as_constant()

	def has_specials(self) -> bool:
		return any(key for key, _ in self.parts)

	def specials(self) -> list[Special]:
		return [atom for key, _ in self.parts for atom in key]

	@property
	def log_degree(self) -> int:
		return max((p.degree + sum(map(_log_weight, key)) for key, p in self.parts), default=-1)

	def __add__(self, other: Coefficient) -> Coefficient:
		merged = dict(self.parts)
		for key, poly in other.parts:
			merged[key] = merged[key] + poly if key in merged else poly
		return Coefficient.of(merged)

	def __neg__(self) -> Coefficient:
		return Coefficient(tuple((k, -p) for k, p in self.parts))

	def __sub__(self, other: Coefficient) -> Coefficient:
		return self + (-other)

	def __mul__(self, other: Coefficient) -> Coefficient:
		out: dict[Key, LogPoly] = {}
		for k1, p1 in self.parts:
			for k2, p2 in other.parts:
				key, factor = _merge_keys(k1, k2)
				product = p1 * p2
				if factor != ONE:
					product = product.scale(factor)
				out[key] = out[key] + product if key in out else product
		return Coefficient.of(out)

	def scale(self, factor: Scalar) -> Coefficient:
		factor = const(factor)
		if factor.is_zero():
			return Coefficient()
		return Coefficient.of({k: p.scale(factor) for k, p in self.parts})

	def inverse(self) -> Coefficient:
		"""1/c for a constant possibly times a unit factor."""
		if len(self.parts) != 1:
			raise UnsupportedError(f'Cannot divide by the coefficient {self.render("z")}')
		key, poly = self.parts[0]
		c = poly.as_constant()
		if c is None or not all(isinstance(atom, UnitFactor) for atom in key):
			raise UnsupportedError(f'Cannot divide by the coefficient {self.render("z")}')
		if const_is_zero(c):
			raise DomainError('Division by zero')
		inverse_key = tuple(atom.inverse() for atom in key if isinstance(atom, UnitFactor))
		return Coefficient.of({inverse_key: LogPoly.constant(c.reciprocal())})

	def evaluate_mp(self, point: Point, ell: Optional[mpmath.mpc]) -> mpmath.mpc:
		total = mpmath.mpc(0)
		for key, poly in self.parts:
			value = poly.evaluate_mp(ell)
			for atom in key:
				value *= _special_value(atom, point)
			total += value
		return total

	def is_sum(self) -> bool:
		if len(self.parts) != 1:
			return True
		key, poly = self.parts[0]
		if len(poly.items) != 1:
			return True
		return len(poly.items[0][1].terms) > 1

	def render(self, var: str) -> str:
		if not self.parts:
			return '0'
		parts = []
		for key, poly in self.parts:
			poly_text = poly.render(var)
			if not key:
				parts.append(poly_text)
				continue
			key_text = _key_text(key)
			c = poly.as_constant()
			if c == ONE:
				parts.append(key_text)
			elif c == -ONE:
				parts.append(f'-{key_text}')
			elif len(poly.items) == 1 and len(poly.items[0][1].terms) == 1:
				parts.append(f'{poly_text}*{key_text}')
			else:
				parts.append(f'({poly_text})*{key_text}')
		return _join_signed(parts)


def _lift_coefficient(value: Union[Coefficient, LogPoly, Scalar]) -> Coefficient:
	if isinstance(value, Coefficient):
		return value
	if isinstance(value, LogPoly):
		return Coefficient.log_poly(value)
	return Coefficient.constant(value)


# Series


@dataclass(frozen=True, slots=True)
class Series:
	"""sum c_e(ln z) * z^e + o(z^order); an order of None means the sum is exact."""

	var: str = 'z'
	mode: Mode = Mode.COMPLEX
	terms: tuple[tuple[Fraction, Coefficient], ...] = ()
	order: Optional[Fraction] = None
	global_factor: Optional[UnitFactor] = None

	@classmethod
	def build(
		cls,
		var: str,
		mode: Mode,
		items: Mapping[Fraction, Coefficient],
		order: Optional[Fraction] = None,
		global_factor: Optional[UnitFactor] = None,
	) -> Series:
		order = None if order is None else Fraction(order)
		scale = ONE
		if global_factor is not None:
			scale = global_factor.constant
			global_factor = global_factor.pure()
			if global_factor.is_one():
				global_factor = None
		kept = []
		for e, c in items.items():
			e = Fraction(e)
			if order is not None and e > order:
				continue
			if scale != ONE:
				c = c.scale(scale)
			if not c.is_zero():
				kept.append((e, c))
		kept.sort(key=lambda item: item[0])
		if not kept:
			global_factor = None
		return cls(var, mode, tuple(kept), order, global_factor)

	@classmethod
	def of(
		cls,
		items: Mapping[object, Union[Coefficient, LogPoly, Scalar]],
		var: str = 'z',
		mode: Mode = Mode.COMPLEX,
		order: Optional[object] = None,
	) -> Series:
		"""Series from {exponent: coefficient}, e.g. ``Series.of({2: 1, 3: 1})``."""
		return cls.build(
			var,
			mode,
			{to_fraction(e): _lift_coefficient(c) for e, c in items.items()},
			None if order is None else to_fraction(order),
		)

	@classmethod
	def constant(cls, value: Union[Coefficient, Scalar], var: str = 'z', mode: Mode = Mode.COMPLEX) -> Series:
		return cls.build(var, mode, {Fraction(0): _lift_coefficient(value)})

	@classmethod
	def monomial(
		cls,
		coef: Union[Coefficient, LogPoly, Scalar],
		exponent: object,
		var: str = 'z',
		mode: Mode = Mode.COMPLEX,
	) -> Series:
		return cls.build(var, mode, {to_fraction(exponent): _lift_coefficient(coef)})

	@classmethod
	def variable(cls, var: str = 'z', mode: Mode = Mode.COMPLEX) -> Series:
		return cls.monomial(ONE, 1, var, mode)

	@classmethod
	def log_var(cls, var: str = 'z', mode: Mode = Mode.COMPLEX) -> Series:
		return cls.monomial(LogPoly.of({1: ONE}), 0, var, mode)

	@classmethod
	def zero(cls, var: str = 'z', mode: Mode = Mode.COMPLEX, order: Optional[object] = None) -> Series:
		return cls(var, mode, (), None if order is None else to_fraction(order))

	@classmethod
	def special(cls, atom: Special, var: str = 'z', mode: Mode = Mode.COMPLEX) -> Series:
		return cls.build(var, mode, {Fraction(0): Coefficient.special(atom)})

	def _like(
		self,
		items: Mapping[Fraction, Coefficient],
		order: Optional[Fraction],
		global_factor: Optional[UnitFactor] = None,
	) -> Series:
		return Series.build(self.var, self.mode, items, order, global_factor)

	def _lift(self, other: object) -> Optional[Series]:
		if isinstance(other, Series):
			if other.var != self.var or other.mode is not self.mode:
				raise UsageError(f'Cannot combine series in {self.var} ({self.mode}) and {other.var} ({other.mode})')
			return other
		if isinstance(other, (ConstantExpr, GaussianRational, int, Fraction, Coefficient)):
			return Series.constant(other, self.var, self.mode)
		return None

	# Inspection

	def is_zero(self) -> bool:
		return not self.terms

	@property
	def is_exact(self) -> bool:
		return self.order is None

	@property
	def dominant_exponent(self) -> Optional[Fraction]:
		return self.terms[0][0] if self.terms else None

	def exponents(self) -> list[Fraction]:
		return [e for e, _ in self.terms]

	def coefficient(self, exponent: object) -> Coefficient:
		e = to_fraction(exponent)
		for exp, c in self.terms:
			if exp == e:
				return c
		return Coefficient()

	def has_specials(self) -> bool:
		return self.global_factor is not None or any(c.has_specials() for _, c in self.terms)

	def has_logs(self) -> bool:
		return any(c.log_degree > 0 for _, c in self.terms)

	def has_real_coefficients(self) -> bool:
		"""Whether every coefficient is a log-polynomial with real constants."""
		if self.has_specials():
			return False
		for _, coef in self.terms:
			poly = coef.plain()
			if poly is None or any(const_sign(c, Part.IM) for _, c in poly.items):
				return False
		return True

	def is_constant(self) -> bool:
		return all(e == 0 for e, _ in self.terms) and not self.has_logs()

	# Arithmetic

	def __add__(self, other: object) -> Series:
		o = self._lift(other)
		if o is None:
			return NotImplemented
		a, b = self, o
		global_factor = None
		if a.global_factor is not None and a.global_factor == b.global_factor:
			global_factor = a.global_factor
		else:
			a, b = a.materialize(), b.materialize()
		merged = dict(a.terms)
		for e, c in b.terms:
			merged[e] = merged[e] + c if e in merged else c
		return self._like(merged, _min_order(a.order, b.order), global_factor)

	__radd__ = __add__

	def __neg__(self) -> Series:
		return replace(self, terms=tuple((e, -c) for e, c in self.terms))

	def __sub__(self, other: object) -> Series:
		o = self._lift(other)
		if o is None:
			return NotImplemented
		return self + (-o)

	def __rsub__(self, other: object) -> Series:
		o = self._lift(other)
		if o is None:
			return NotImplemented
		return o - self

	def _lead_or_order(self) -> Fraction:
		if self.terms:
			return self.terms[0][0]
		assert self.order is not None
		return self.order

	def __mul__(self, other: object) -> Series:
		if isinstance(other, (ConstantExpr, GaussianRational, int, Fraction)):
			return self.scale(other)
		o = self._lift(other)
		if o is None:
			return NotImplemented
		if (self.is_zero() and self.order is None) or (o.is_zero() and o.order is None):
			return self._like({}, None)
		candidates = []
		if self.order is not None:
			candidates.append(self.order + o._lead_or_order())
		if o.order is not None:
			candidates.append(o.order + self._lead_or_order())
		order = min(candidates) if candidates else None
		out: dict[Fraction, Coefficient] = {}
		for e1, c1 in self.terms:
			for e2, c2 in o.terms:
				e = e1 + e2
				if order is not None and e > order:
					continue
				product = c1 * c2
				out[e] = out[e] + product if e in out else product
		if self.global_factor is None:
			global_factor = o.global_factor
		elif o.global_factor is None:
			global_factor = self.global_factor
		else:
			global_factor = self.global_factor * o.global_factor
		return self._like(out, order, global_factor)

	__rmul__ = __mul__

	def scale(self, factor: Scalar) -> Series:
		factor = const(factor)
		return self._like({e: c.scale(factor) for e, c in self.terms}, self.order, self.global_factor)

	def times_coefficient(self, coef: Coefficient) -> Series:
		return self._like({e: c * coef for e, c in self.terms}, self.order, self.global_factor)

	def times_unit(self, u: UnitFactor) -> Series:
		"""Multiply by a unit factor; a non-constant one becomes (part of) the global factor."""
		if u.is_constant():
			return self.scale(u.constant)
		factor = u if self.global_factor is None else self.global_factor * u
		return self._like(dict(self.terms), self.order, factor)

	def shift(self, exponent: object) -> Series:
		"""Multiply by z^exponent."""
		e0 = to_fraction(exponent)
		order = None if self.order is None else self.order + e0
		return self._like({e + e0: c for e, c in self.terms}, order, self.global_factor)

	def truncate(self, n: object) -> Series:
		n = to_fraction(n)
		return self._like(dict(self.terms), n if self.order is None else min(self.order, n), self.global_factor)

	def materialize(self) -> Series:
		"""Distribute the global factor into the coefficients."""
		if self.global_factor is None:
			return self
		unit = Coefficient.special(self.global_factor)
		return self._like({e: c * unit for e, c in self.terms}, self.order)

	def split_dominant(self) -> SplitSeries:
		"""c*z^alpha + g, with g = b*z^sigma + h."""
		s = self.materialize()
		if not s.terms:
			raise UnsupportedError('A zero series has no dominant term')
		alpha, c = s.terms[0]
		g = s._like(dict(s.terms[1:]), s.order)
		if len(s.terms) > 1:
			sigma, b = s.terms[1]
			h = s._like(dict(s.terms[2:]), s.order)
			return SplitSeries(c, alpha, g, b, sigma, h)
		return SplitSeries(c, alpha, g, None, None, g)

	def recip(self, n: Optional[object] = None) -> Series:
		"""1/S as c^-1 z^-alpha (1 - W + W^2 - ...), W = g/(c z^alpha)."""
		if self.is_zero():
			raise DomainError('Division by a zero series')
		body = replace(self, global_factor=None)
		sp = body.split_dominant()
		inverse = sp.c.inverse()
		global_factor = None if self.global_factor is None else self.global_factor.inverse()
		if sp.g.is_zero() and sp.g.order is None:
			return self._like({-sp.alpha: inverse}, None, global_factor)
		inherited = None if body.order is None else body.order - 2 * sp.alpha
		target = _min_order(None if n is None else to_fraction(n), inherited)
		if target is None:
			raise UsageError('The reciprocal of a non-monomial needs a target order')
		geometric = compose_coefficients(
			lambda count: [const((-1) ** k) for k in range(count)], sp.ratio(), target + sp.alpha
		)
		result = geometric.times_coefficient(inverse).shift(-sp.alpha)
		if global_factor is not None:
			result = result.times_unit(global_factor)
		return result

	def div(self, other: Series, n: Optional[object] = None) -> Series:
		result = self * other.recip(n)
		return result if n is None else result.truncate(n)

	def power_int(self, k: int, n: Optional[object] = None) -> Series:
		"""S^k by binary exponentiation; negative k goes through recip."""
		if k == 0:
			return Series.constant(ONE, self.var, self.mode)
		base = self.recip(n) if k < 0 else self
		k = abs(k)
		result: Optional[Series] = None
		while k:
			if k & 1:
				result = base if result is None else result * base
				if n is not None:
					result = result.truncate(n)
			k >>= 1
			if k:
				base = base * base
				if n is not None:
					base = base.truncate(n)
		assert result is not None
		return result

	# Evaluation

	def evaluate_mp(self, point: Point) -> mpmath.mpc:
		"""Value at a point at the current mpmath working precision."""
		point = Point.of(point)
		if point.is_zero():
			return self._value_at_zero(point)
		z = point.mp()
		ell = principal_ln(z)
		real_branch = self.mode is Mode.REAL_BRANCH
		total = mpmath.mpc(0)
		for e, coef in self.terms:
			total += coef.evaluate_mp(point, ell) * principal_power(z, e, real_branch)
		if self.global_factor is not None:
			total *= _special_value(self.global_factor, point)
		return total

	def _value_at_zero(self, point: Point) -> mpmath.mpc:
		total = mpmath.mpc(0)
		for e, coef in self.terms:
			if e < 0:
				raise SingularAtZeroError(f'{self.render()} has a pole at {self.var} = 0')
			if e == 0:
				if coef.log_degree > 0:
					raise SingularAtZeroError(f'{self.render()} has a logarithmic singularity at {self.var} = 0')
				total += coef.evaluate_mp(point, None)
		if self.global_factor is not None and total != 0:
			total *= _special_value(self.global_factor, point)
		return total

	def evaluate(self, z0: object, precision: int = DEFAULT_PRECISION) -> ComplexFloat:
		"""Value at z0 with principal branches, correction atoms decided exactly."""
		check_precision(precision)
		point = Point.of(z0)
		try:
			with mpmath.workprec(precision + _GUARD_BITS):
				value = self.evaluate_mp(point)
		except ZeroDivisionError as e:
			raise EvaluationError('Division by zero') from e
		return ComplexFloat(value, precision)

	# Operand protocol used by piecewise conditions

	def exact_value(self, point: Point) -> Optional[GaussianRational]:
		if self.has_specials():
			return None
		point = Point.of(point)
		total = GaussianRational()
		for e, coef in self.terms:
			c = coef.as_constant()
			g = None if c is None else c.as_gaussian()
			if g is None:
				return None
			if point.is_zero():
				if e < 0:
					return None
				if e == 0:
					total = total + g
				continue
			if e.denominator != 1:
				return None
			total = total + g * point.exact ** int(e)
		return total

	def known_real(self, point: Point) -> bool:
		if not self.has_real_coefficients():
			return False
		point = Point.of(point)
		if point.exact.im != 0:
			return False
		if point.is_zero() or point.exact.re > 0:
			return True
		for e, coef in self.terms:
			if coef.log_degree > 0:
				return False
			if e.denominator == 1:
				continue
			if self.mode is Mode.REAL_BRANCH and e.denominator % 2 == 1:
				continue
			return False
		return True

	def along_ray(self, theta: Fraction) -> RayExpansion:
		"""Expansion in r^e ln(r)^m along z = r*exp(i*pi*theta)."""
		if self.has_specials():
			raise UnsupportedError('Directional expansion of a series with piecewise coefficients')
		theta = Fraction(theta)
		shift = I * PI.scale(theta)
		items: dict[tuple[Fraction, int], ConstantExpr] = {}
		for e, coef in self.terms:
			poly = coef.plain()
			assert poly is not None
			if self.mode is Mode.REAL_BRANCH and theta == 1 and e.denominator % 2 == 1:
				rotation = const(-1 if e.numerator % 2 else 1)
			else:
				rotation = unit_power(e * theta)
			for j, c in poly.items:
				for m in range(j + 1):
					term = c * rotation * (shift ** (j - m)).scale(math.comb(j, m))
					items[(e, m)] = items.get((e, m), ZERO) + term
		return RayExpansion.from_dict(items)

	def angle_data(self) -> Optional[list[tuple[Fraction, Fraction]]]:
		"""(arg/pi of the leading ln-coefficient as r -> 0, exponent) for the first terms."""
		if self.has_specials():
			return None
		out = []
		for e, coef in self.terms[:_ANGLE_TERMS]:
			poly = coef.plain()
			assert poly is not None
			eta = const_arg_over_pi(poly.top().scale(-1 if poly.degree % 2 else 1))
			if eta is None:
				return None
			out.append((eta, e))
		return out

	def render(self) -> str:
		if not self.terms:
			return '0'
		parts = [_term_text(e, c, self.var) for e, c in self.terms]
		body = _join_signed(parts)
		if self.global_factor is not None:
			return f'{self.global_factor.render()}*({body})'
		return body

	def __str__(self) -> str:
		return self.render()


def _term_text(e: Fraction, coef: Coefficient, var: str) -> str:
	power = _power_text(var, e)
	c = coef.as_constant()
	if c is not None:
		if not power:
			return str(c)
		if c == ONE:
			return power
		if c == -ONE:
			return f'-{power}'
		return f'{_factor_text(c)}*{power}'
	text = coef.render(var)
	if not power:
		return text
	return f'({text})*{power}' if coef.is_sum() else f'{text}*{power}'


@dataclass(frozen=True, slots=True)
class SplitSeries:
	"""S = c*z^alpha + g with g = b*z^sigma + h."""

	c: Coefficient
	alpha: Fraction
	g: Series
	b: Optional[Coefficient] = None
	sigma: Optional[Fraction] = None
	h: Optional[Series] = None

	def dominant(self) -> Series:
		return Series.monomial(self.c, self.alpha, self.g.var, self.g.mode)

	def ratio(self) -> Series:
		"""W = g / (c z^alpha)."""
		return self.g.times_coefficient(self.c.inverse()).shift(-self.alpha)

	def one_plus_ratio(self) -> Series:
		return self.ratio() + 1

	def constant_coefficient(self) -> Optional[ConstantExpr]:
		return self.c.as_constant()


# Analytic functions of small series


def _factorial_inverse(count: int, _: Optional[Fraction]) -> list[Fraction]:
	return [Fraction(1, math.factorial(k)) for k in range(count)]


def _ln1p(count: int, _: Optional[Fraction]) -> list[Fraction]:
	return [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, count)]


def _odd(rule: Callable[[int], Fraction]) -> Callable[[int, Optional[Fraction]], list[Fraction]]:
	def coefficients(count: int, _: Optional[Fraction]) -> list[Fraction]:
		return [rule(k) if k % 2 else Fraction(0) for k in range(count)]

	return coefficients


def _arcsin_rule(k: int) -> Fraction:
	m = (k - 1) // 2
	return Fraction(math.comb(2 * m, m), 4**m * (2 * m + 1))


def binomial(beta: Fraction, k: int) -> Fraction:
	"""Generalized binomial coefficient C(beta, k)."""
	result = Fraction(1)
	for i in range(k):
		result = result * (beta - i) / (i + 1)
	return result


def _binom(count: int, beta: Optional[Fraction]) -> list[Fraction]:
	assert beta is not None
	return [binomial(beta, k) for k in range(count)]


_RULES: dict[str, Callable[[int, Optional[Fraction]], list[Fraction]]] = {
	'exp': _factorial_inverse,
	'ln1p': _ln1p,
	'atan0': _odd(lambda k: Fraction((-1) ** ((k - 1) // 2), k)),
	'atanh0': _odd(lambda k: Fraction(1, k)),
	'asin0': _odd(_arcsin_rule),
	'asinh0': _odd(lambda k: _arcsin_rule(k) * (-1) ** ((k - 1) // 2)),
	'binom': _binom,
}


@dataclass(frozen=True, slots=True)
class Maclaurin:
	"""A function analytic at 0, known by its Maclaurin coefficients."""

	name: str
	beta: Optional[Fraction] = None

	def coefficients(self, count: int) -> list[ConstantExpr]:
		return [const(q) for q in _RULES[self.name](count, self.beta)]

	def render(self) -> str:
		if self.name == 'binom':
			return f'(1 + w)^({format_rational(self.beta or Fraction(0))})'
		return self.name


EXP = Maclaurin('exp')
LN1P = Maclaurin('ln1p')
ATAN0 = Maclaurin('atan0')
ATANH0 = Maclaurin('atanh0')
ASIN0 = Maclaurin('asin0')
ASINH0 = Maclaurin('asinh0')


def binom(beta: object) -> Maclaurin:
	"""(1 + w)^beta on the principal branch near w = 0."""
	return Maclaurin('binom', to_fraction(beta))


def compose_coefficients(
	coefficients: Callable[[int], Sequence[ConstantExpr]], w: Series, n: object
) -> Series:
	"""sum a_k W^k for W with positive dominant exponent, by Horner's rule."""
	n = to_fraction(n)
	w = w.materialize()
	if w.is_zero():
		a0 = coefficients(1)[0]
		result = Series.constant(a0, w.var, w.mode)
		return result if w.order is None else result.truncate(min(n, w.order))
	d = w.dominant_exponent
	assert d is not None
	if d <= 0:
		raise NotSmallSeriesError(f'{w.render()} does not vanish at {w.var} = 0')
	target = n if w.order is None else min(n, w.order)
	count = max(math.floor(target / d), 0) + 1
	a = list(coefficients(count))
	result = Series.constant(a[-1], w.var, w.mode).truncate(target)
	for k in range(count - 2, -1, -1):
		result = (result * w).truncate(target) + Series.constant(a[k], w.var, w.mode)
	return result.truncate(target)


def analytic_compose(f: Maclaurin, w: Series, n: object) -> Series:
	"""f(W) to order n for f analytic at 0 and W -> 0."""
	return compose_coefficients(f.coefficients, w, n)


def exp_series(s: Series, n: object) -> Series:
	"""exp(S); the degree-0 part is folded into constants, powers and unit factors."""
	n = to_fraction(n)
	s = s.materialize()
	if any(e < 0 for e, _ in s.terms):
		raise EssentialSingularityError(f'exp({s.render()}) has an essential singularity at {s.var} = 0')
	rest = s._like({e: c for e, c in s.terms if e != 0}, s.order)
	constant = ONE
	shift = Fraction(0)
	units: list[UnitFactor] = []
	factors: list[Series] = []
	for key, poly in s.coefficient(0).parts:
		if not key:
			for k, c in poly.items:
				if k == 0:
					constant = constant * const_exp(c)
					continue
				g = c.as_gaussian()
				if k > 1 or g is None or not g.is_real():
					raise UnsupportedError(f'exp({poly.render(s.var)}) is not a power of {s.var}')
				shift += g.re
			continue
		c = poly.as_constant()
		g = None if c is None else c.as_gaussian()
		if len(key) != 1 or g is None or not g.is_real():
			raise UnsupportedError(f'exp of {_key_text(key)} is not supported')
		k = g.re
		atom = key[0]
		match atom:
			case CorrectionTerm():
				units.append(unit_from_correction(atom, k))
			case LogOf() if k.denominator == 1:
				factors.append(atom.operand.power_int(int(k), n))
			case LogOf():
				factors.append(Series.special(PowOf(atom.operand, k), s.var, s.mode))
			case _:
				raise UnsupportedError(f'exp of {_key_text(key)} is not supported')
	result = analytic_compose(EXP, rest, n - shift).scale(constant).shift(shift)
	for factor in factors:
		result = result * factor
	for u in units:
		result = result.times_unit(u)
	return result.truncate(n)


__all__ = [
	'ASIN0',
	'ASINH0',
	'ATAN0',
	'ATANH0',
	'EXP',
	'LN1P',
	'LOG_DEGREE_CAP',
	'Coefficient',
	'LogOf',
	'LogPoly',
	'Maclaurin',
	'PowOf',
	'Series',
	'Special',
	'SplitSeries',
	'analytic_compose',
	'binom',
	'binomial',
	'compose_coefficients',
	'exp_series',
]
