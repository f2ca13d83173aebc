"""Piecewise-constant corrections: conditions, additive terms and unit factors.

Angles are stored as rational multiples of pi. Operands of conditions are
truncated series (anything implementing ``Operand``); this module never
imports the series module.

Besides point evaluation the module decides what a piecewise value does in
a punctured neighbourhood of 0. Along a fixed direction z = r*exp(i*pi*t)
every operand is a finite sum of r^e*ln(r)^m terms, so the limit as r -> 0+
of each arg(), Re() and Im() is exact, and the side from which an arg
approaches its limit comes from the leading imaginary term of ln(1 + Q).
Sampling these limits on every critical direction and between them tells
whether a value is constant near 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Protocol, Union

import mpmath

from . import logger
from .errors import BoundaryUndecidableWarning, SingularAtZeroError
from .exactcore import (
	DEFAULT_PRECISION,
	GUARD_PRECISION,
	HALF,
	MAX_PRECISION,
	ONE,
	PI,
	ZERO,
	ComplexFloat,
	ConstantExpr,
	GaussianRational,
	check_precision,
	const,
	const_arg_over_pi,
	const_is_zero,
	const_sign,
	format_rational,
	mods,
	unit_power,
)
from .vocabulary import Mode, Part, Relop, Role

Angle = Union[Fraction, mpmath.mpf]

_GUARD = 16
_RAY_POWERS = 5
_RAY_TERMS = 6
_ANGLE_TERMS = 4


@dataclass(frozen=True, slots=True)
class Point:
	"""An evaluation point, held exactly (binary floats are Gaussian rationals)."""

	exact: GaussianRational

	@classmethod
	def of(cls, z0: object) -> Point:
		if isinstance(z0, Point):
			return z0
		if isinstance(z0, GaussianRational):
			return cls(z0)
		if isinstance(z0, (int, Fraction)):
			return cls(GaussianRational(z0))
		if isinstance(z0, ComplexFloat):
			z0 = z0.value
		return cls(GaussianRational.from_mpc(mpmath.mpc(z0)))

	def mp(self) -> mpmath.mpc:
		return self.exact.to_mpc()

	def is_zero(self) -> bool:
		return self.exact.is_zero()

	def is_positive_real(self) -> bool:
		return self.exact.im == 0 and self.exact.re > 0

	def is_negative_real(self) -> bool:
		return self.exact.im == 0 and self.exact.re < 0


class Operand(Protocol):
	"""What a condition needs from a truncated series."""

	def evaluate_mp(self, point: Point) -> mpmath.mpc: ...

	def exact_value(self, point: Point) -> Optional[GaussianRational]: ...

	def known_real(self, point: Point) -> bool: ...

	def along_ray(self, theta: Fraction) -> RayExpansion: ...

	def angle_data(self) -> Optional[list[tuple[Fraction, Fraction]]]: ...

	def render(self) -> str: ...


@dataclass(frozen=True, slots=True)
class Constraint:
	"""Assumptions on the expansion variable near 0."""

	real: bool = False
	lo: Fraction = Fraction(-1)
	hi: Fraction = Fraction(1)
	sign: Optional[int] = None

	def __post_init__(self) -> None:
		object.__setattr__(self, 'lo', Fraction(self.lo))
		object.__setattr__(self, 'hi', Fraction(self.hi))
		if not (-1 <= self.lo < self.hi <= 1):
			raise ValueError(f'Invalid arg range ({self.lo}*pi, {self.hi}*pi]')

	@classmethod
	def for_mode(cls, mode: Mode) -> Constraint:
		return cls(real=mode.is_real)

	@classmethod
	def positive(cls) -> Constraint:
		return cls(real=True, sign=1)

	def directions(self) -> list[Fraction]:
		"""The rays a real variable can approach 0 along."""
		if self.sign == 1:
			return [Fraction(0)]
		if self.sign == -1:
			return [Fraction(1)]
		return [Fraction(1), Fraction(0)]

	def contains(self, theta: Fraction) -> bool:
		if self.real:
			return theta in self.directions()
		return self.lo < theta <= self.hi


# Directional expansions


RayKey = tuple[Fraction, int]


def _size_key(key: RayKey) -> tuple[Fraction, int]:
	"""Sort key putting larger terms (smaller e, larger m) first."""
	return (key[0], -key[1])


def _part_of(value: ConstantExpr, part: Part) -> int:
	return const_sign(value, part)


def _ray_multiply(a: dict[RayKey, ConstantExpr], b: dict[RayKey, ConstantExpr]) -> dict[RayKey, ConstantExpr]:
	out: dict[RayKey, ConstantExpr] = {}
	for (e1, m1), c1 in a.items():
		for (e2, m2), c2 in b.items():
			key = (e1 + e2, m1 + m2)
			out[key] = out.get(key, ZERO) + c1 * c2
	return out


@dataclass(frozen=True, slots=True)
class Perturbation:
	"""Leading term of Im ln(1 + Q): value * r^e * L^m with L = ln r < 0."""

	key: RayKey
	value: mpmath.mpf


@dataclass(frozen=True, slots=True)
class RayExpansion:
	"""sum a * r^e * ln(r)^m along a fixed direction, largest terms first."""

	terms: tuple[tuple[Fraction, int, ConstantExpr], ...] = ()

	@classmethod
	def from_dict(cls, items: dict[RayKey, ConstantExpr]) -> RayExpansion:
		kept = [(e, m, c) for (e, m), c in items.items() if not const_is_zero(c)]
		kept.sort(key=lambda t: (t[0], -t[1]))
		return cls(tuple(kept))

	def is_zero(self) -> bool:
		return not self.terms

	def part_sign(self, part: Part) -> int:
		"""Exact sign of Re or Im as r -> 0+."""
		for _, m, coef in self.terms:
			s = _part_of(coef, part)
			if s:
				return s * (-1 if m % 2 else 1)
		return 0

	def first_imaginary_sign(self) -> int:
		return self.part_sign(Part.IM)

	def limit_arg(self) -> Optional[Angle]:
		"""Limit of arg/pi, before any wrap at pi."""
		if not self.terms:
			return Fraction(0)
		_, m, coef = self.terms[0]
		direction = coef.scale(-1 if m % 2 else 1)
		return arg_over_pi_guarded(direction)

	def perturbation(self) -> Union[Perturbation, None, bool]:
		"""Leading Im ln(1 + Q) term; False when it is identically zero, None when unknown."""
		if len(self.terms) <= 1:
			return False
		e0, m0, c0 = self.terms[0]
		inverse = c0.reciprocal()
		q_terms = [((e - e0, m - m0), c * inverse) for e, m, c in self.terms[1:]]
		if all(_part_of(c, Part.IM) == 0 for _, c in q_terms):
			return False
		used = q_terms[:_RAY_TERMS]
		bound_keys = []
		if len(q_terms) > _RAY_TERMS:
			bound_keys.append(_size_key(q_terms[_RAY_TERMS][0]))
		lead_e, lead_m = used[0][0]
		bound_keys.append(_size_key(((_RAY_POWERS + 1) * lead_e, (_RAY_POWERS + 1) * lead_m)))
		bound = min(bound_keys)
		q = dict(used)
		series: dict[RayKey, ConstantExpr] = {}
		power = dict(q)
		for k in range(1, _RAY_POWERS + 1):
			factor = Fraction((-1) ** (k + 1), k)
			for key, c in power.items():
				series[key] = series.get(key, ZERO) + c.scale(factor)
			power = _ray_multiply(power, q)
		for key in sorted(series, key=_size_key):
			if _size_key(key) >= bound:
				break
			c = series[key]
			if _part_of(c, Part.IM):
				with mpmath.workprec(GUARD_PRECISION):
					value = c.evaluate_mp().imag * (-1 if key[1] % 2 else 1)
				return Perturbation(key, value)
		return None


def angle_mpf(a: Angle) -> mpmath.mpf:
	"""An angle (in units of pi) as an mpf at the working precision."""
	if isinstance(a, Fraction):
		return mpmath.mpf(a.numerator) / a.denominator
	return mpmath.mpf(a)


def arg_over_pi_guarded(value: ConstantExpr) -> Optional[Angle]:
	"""arg/pi, exact when the value sits on an axis or a diagonal."""
	exact = const_arg_over_pi(value)
	if exact is not None:
		return exact
	im = const_sign(value, Part.IM)
	re = const_sign(value, Part.RE)
	if im == 0:
		return Fraction(1) if re < 0 else Fraction(0)
	if re == 0:
		return HALF if im > 0 else -HALF
	with mpmath.workprec(GUARD_PRECISION):
		return mpmath.arg(value.evaluate_mp()) / mpmath.pi


# Arg sums and conditions


def _render_coef(q: Fraction, text: str) -> str:
	if q == 1:
		return text
	if q == -1:
		return f'-{text}'
	return f'{format_rational(q)}*{text}'


def _render_pi(q: Fraction) -> str:
	return str(PI.scale(q))


@dataclass(frozen=True, slots=True)
class RayArg:
	value: Angle
	side: int


@dataclass(frozen=True, slots=True)
class ArgSum:
	"""sum_k q_k*arg(P_k) + offset*pi."""

	terms: tuple[tuple[Fraction, Operand], ...]
	offset: Fraction = Fraction(0)

	def operands(self) -> list[Operand]:
		return [operand for _, operand in self.terms]

	def render(self) -> str:
		out = ''
		for q, operand in self.terms:
			text = _render_coef(abs(q), f'arg({operand.render()})')
			if not out:
				out = f'-{text}' if q < 0 else text
			else:
				out += f' - {text}' if q < 0 else f' + {text}'
		if self.offset:
			text = _render_pi(abs(self.offset))
			out = (out + (' - ' if self.offset < 0 else ' + ') + text) if out else _render_pi(self.offset)
		return out or '0'

	def at_point(self, point: Point) -> tuple[mpmath.mpf, Optional[Fraction], mpmath.mpf]:
		"""(value, exact value/pi when known, scale) at the current working precision."""
		total = mpmath.pi * (mpmath.mpf(self.offset.numerator) / self.offset.denominator)
		scale = abs(total) + 1
		exact: Optional[Fraction] = self.offset
		for q, operand in self.terms:
			value, exact_arg = operand_arg(operand, point)
			total += value * mpmath.mpf(q.numerator) / q.denominator
			scale += abs(value * angle_mpf(q))
			if exact is not None and exact_arg is not None:
				exact += q * exact_arg
			else:
				exact = None
		return total, exact, scale

	def along_ray(self, theta: Fraction) -> Optional[RayArg]:
		total: Angle = self.offset
		perturbations: list[tuple[RayKey, mpmath.mpf]] = []
		for q, operand in self.terms:
			ray = operand.along_ray(theta)
			limit = ray.limit_arg()
			if limit is None:
				return None
			pert = ray.perturbation()
			if pert is None:
				return None
			if isinstance(pert, Perturbation):
				if limit == 1 and pert.value > 0:
					limit = Fraction(-1)
				perturbations.append((pert.key, pert.value * angle_mpf(q)))
			if isinstance(total, Fraction) and isinstance(limit, Fraction):
				total = total + q * limit
			else:
				total = angle_mpf(total) + angle_mpf(limit) * angle_mpf(q)
		if not perturbations:
			return RayArg(total, 0)
		lead = min(perturbations, key=lambda item: _size_key(item[0]))[0]
		with mpmath.workprec(GUARD_PRECISION):
			s = sum((v for k, v in perturbations if k == lead), mpmath.mpf(0))
			if abs(s) < mpmath.mpf(2) ** (40 - GUARD_PRECISION):
				return None
		return RayArg(total, 1 if s > 0 else -1)


def operand_arg(operand: Operand, point: Point) -> tuple[mpmath.mpf, Optional[Fraction]]:
	"""arg of an operand at a point with arg(0) = 0, plus arg/pi when exactly known."""
	exact = operand.exact_value(point)
	if exact is not None:
		a = exact.arg_over_pi()
		if a is not None:
			return mpmath.pi * (mpmath.mpf(a.numerator) / a.denominator), a
	try:
		value = operand.evaluate_mp(point)
	except SingularAtZeroError:
		return mpmath.mpf(0), Fraction(0)
	if value == 0:
		return mpmath.mpf(0), Fraction(0)
	if operand.known_real(point):
		if value.real < 0:
			return +mpmath.pi, Fraction(1)
		return mpmath.mpf(0), Fraction(0)
	return mpmath.arg(value), None


def operand_part(operand: Operand, point: Point, part: Part) -> tuple[mpmath.mpf, Optional[int]]:
	"""Re or Im of an operand at a point, plus its exact sign when known."""
	exact = operand.exact_value(point)
	if exact is not None:
		x = exact.re if part is Part.RE else exact.im
		return mpmath.mpf(x.numerator) / x.denominator, (x > 0) - (x < 0)
	try:
		value = operand.evaluate_mp(point)
	except SingularAtZeroError:
		return mpmath.mpf(0), 0
	x = value.real if part is Part.RE else value.imag
	if part is Part.IM and operand.known_real(point):
		return mpmath.mpf(0), 0
	return x, None


@dataclass(frozen=True, slots=True)
class ArgCmp:
	lhs: ArgSum
	relop: Relop
	bound: Fraction

	def render(self) -> str:
		return f'{self.lhs.render()} {self.relop.value} {_render_pi(self.bound)}'


@dataclass(frozen=True, slots=True)
class PartCmp:
	part: Part
	operand: Operand
	relop: Relop

	def render(self) -> str:
		return f'{self.part.value}({self.operand.render()}) {self.relop.value} 0'


@dataclass(frozen=True, slots=True)
class VarSign:
	var: str
	relop: Relop

	def render(self) -> str:
		return f'{self.var} {self.relop.value} 0'


@dataclass(frozen=True, slots=True)
class IsZero:
	var: str

	def render(self) -> str:
		return f'{self.var} = 0'


@dataclass(frozen=True, slots=True)
class TrueCond:
	def render(self) -> str:
		return 'otherwise'


@dataclass(frozen=True, slots=True)
class And:
	items: tuple[Condition, ...]

	def render(self) -> str:
		return ' and '.join(_wrap(item) for item in self.items)


@dataclass(frozen=True, slots=True)
class Or:
	items: tuple[Condition, ...]

	def render(self) -> str:
		return ' or '.join(_wrap(item) for item in self.items)


@dataclass(frozen=True, slots=True)
class Not:
	item: Condition

	def render(self) -> str:
		return f'not {_wrap(self.item)}'


Condition = Union[ArgCmp, PartCmp, VarSign, IsZero, TrueCond, And, Or, Not]

TRUE = TrueCond()


def _wrap(c: Condition) -> str:
	text = c.render()
	return f'({text})' if isinstance(c, (And, Or)) else text


def cond_operands(c: Condition) -> list[Operand]:
	match c:
		case ArgCmp():
			return c.lhs.operands()
		case PartCmp():
			return [c.operand]
		case And() | Or():
			return [o for item in c.items for o in cond_operands(item)]
		case Not():
			return cond_operands(c.item)
		case _:
			return []


def cond_argsums(c: Condition) -> list[tuple[ArgSum, list[Fraction]]]:
	match c:
		case ArgCmp():
			return [(c.lhs, [c.bound])]
		case And() | Or():
			return [a for item in c.items for a in cond_argsums(item)]
		case Not():
			return cond_argsums(c.item)
		case _:
			return []


# Point evaluation with precision escalation


class _PointEvaluator:
	"""Evaluates conditions at one point, escalating precision near boundaries."""

	def __init__(self, point: Point, precision: int) -> None:
		self.point = point
		self.precision = check_precision(precision)

	def truth(self, c: Condition) -> bool:
		match c:
			case TrueCond():
				return True
			case IsZero():
				return self.point.is_zero()
			case VarSign():
				x = self.point.exact.re
				return c.relop.holds((x > 0) - (x < 0))
			case And():
				return all(self.truth(item) for item in c.items)
			case Or():
				return any(self.truth(item) for item in c.items)
			case Not():
				return not self.truth(c.item)
			case ArgCmp():
				return self._decide_arg(c)
			case PartCmp():
				return self._decide_part(c)
		raise TypeError(f'Unknown condition {c!r}')

	def _decide_arg(self, c: ArgCmp) -> bool:
		bound = mpmath.mpf(c.bound.numerator) / c.bound.denominator

		def compute() -> tuple[mpmath.mpf, Optional[int], mpmath.mpf]:
			value, exact, scale = c.lhs.at_point(self.point)
			exact_sign = None
			if exact is not None:
				exact_sign = (exact > c.bound) - (exact < c.bound)
			return value - bound * mpmath.pi, exact_sign, scale

		return self._decide(compute, c.relop, c.render())

	def _decide_part(self, c: PartCmp) -> bool:
		def compute() -> tuple[mpmath.mpf, Optional[int], mpmath.mpf]:
			x, exact_sign = operand_part(c.operand, self.point, c.part)
			return x, exact_sign, abs(x) + mpmath.mpf(2) ** -60

		return self._decide(compute, c.relop, c.render())

	def _decide(self, compute, relop: Relop, text: str) -> bool:
		precision = self.precision
		while True:
			with mpmath.workprec(precision + _GUARD):
				diff, exact_sign, scale = compute()
				if exact_sign is not None:
					return relop.holds(exact_sign)
				if abs(diff) > scale * mpmath.mpf(2) ** (8 - precision):
					return relop.holds(1 if diff > 0 else -1)
			if precision >= MAX_PRECISION:
				break
			precision = min(2 * precision, MAX_PRECISION)
			logger.debug('Escalating precision to %d bits for %s', precision, text)
		logger.warning('%s', BoundaryUndecidableWarning(self.point.exact, text))
		return relop.closed

	def floor_of(self, s: ArgSum) -> int:
		"""floor(1/2 - S/(2*pi))."""
		precision = self.precision
		while True:
			with mpmath.workprec(precision + _GUARD):
				value, exact, scale = s.at_point(self.point)
				if exact is not None:
					return math.floor(HALF - exact / 2)
				y = mpmath.mpf(0.5) - value / (2 * mpmath.pi)
				nearest = mpmath.nint(y)
				if abs(y - nearest) > scale * mpmath.mpf(2) ** (8 - precision):
					return int(mpmath.floor(y))
			if precision >= MAX_PRECISION:
				break
			precision = min(2 * precision, MAX_PRECISION)
		logger.warning('%s', BoundaryUndecidableWarning(self.point.exact, f'floor of {s.render()}'))
		return int(nearest)

	def multiple_of_pi(self, s: ArgSum) -> Fraction:
		"""S/pi, exact when every arg is; otherwise rounded to an integer."""
		with mpmath.workprec(self.precision + _GUARD):
			value, exact, _ = s.at_point(self.point)
			if exact is not None:
				return exact
			return Fraction(int(mpmath.nint(value / mpmath.pi)))


def cond_eval(
	c: Condition, z0: object, precision: int = DEFAULT_PRECISION, mode: Mode = Mode.COMPLEX
) -> bool:
	"""Decide a condition at a point; arg(0) = 0 and first-true-wins apply."""
	return _PointEvaluator(Point.of(z0), precision).truth(c)


# Correction atoms


@dataclass(frozen=True, slots=True)
class Case:
	condition: Condition
	value: ConstantExpr
	ambiguous: bool = False

	def render(self) -> str:
		value = f'+-({self.value})' if self.ambiguous else str(self.value)
		if isinstance(self.condition, TrueCond):
			return f'{value} otherwise'
		return f'{value} if {self.condition.render()}'


def _select(cases: tuple[Case, ...], truth) -> Optional[ConstantExpr]:
	for case in cases:
		t = truth(case.condition)
		if t is None:
			return None
		if t:
			return case.value
	return ZERO


def _render_cases(cases: tuple[Case, ...]) -> str:
	return 'piecewise{' + ', '.join(case.render() for case in cases) + '}'


@dataclass(frozen=True, slots=True)
class FloorAtom:
	"""coef * floor(1/2 - S/(2*pi))."""

	coef: ConstantExpr
	argsum: ArgSum

	def render(self) -> str:
		return f'{_paren(self.coef)}*floor(1/2 - ({self.argsum.render()})/(2*pi))'


@dataclass(frozen=True, slots=True)
class CaseAtom:
	cases: tuple[Case, ...]

	def render(self) -> str:
		return _render_cases(self.cases)


@dataclass(frozen=True, slots=True)
class ArgLinAtom:
	"""coef * S/pi where S/pi is rational at every point."""

	coef: ConstantExpr
	argsum: ArgSum

	def render(self) -> str:
		return f'{_paren(self.coef)}*({self.argsum.render()})/pi'


CorrectionAtom = Union[FloorAtom, CaseAtom, ArgLinAtom]


def _paren(e: ConstantExpr) -> str:
	text = str(e)
	return f'({text})' if len(e.terms) > 1 else text


@dataclass(frozen=True, slots=True)
class CorrectionTerm:
	"""Additive piecewise-constant correction: constant + sum of atoms."""

	role: Role
	atoms: tuple[CorrectionAtom, ...] = ()
	constant: ConstantExpr = ZERO

	def is_zero(self) -> bool:
		return not self.atoms and self.constant.is_zero()

	def is_constant(self) -> bool:
		return not self.atoms

	def render(self) -> str:
		parts = [atom.render() for atom in self.atoms]
		if not self.constant.is_zero() or not parts:
			parts.insert(0, _paren(self.constant))
		return ' + '.join(parts)

	def operands(self) -> list[Operand]:
		return _atom_operands(self.atoms)

	def scale(self, factor: ConstantExpr) -> CorrectionTerm:
		factor = const(factor)
		atoms: list[CorrectionAtom] = []
		for atom in self.atoms:
			match atom:
				case FloorAtom():
					atoms.append(FloorAtom(atom.coef * factor, atom.argsum))
				case ArgLinAtom():
					atoms.append(ArgLinAtom(atom.coef * factor, atom.argsum))
				case CaseAtom():
					atoms.append(
						CaseAtom(tuple(Case(c.condition, c.value * factor, c.ambiguous) for c in atom.cases))
					)
		return CorrectionTerm(self.role, tuple(atoms), self.constant * factor)


def _atom_operands(atoms) -> list[Operand]:
	out: list[Operand] = []
	for atom in atoms:
		if isinstance(atom, (FloorAtom, ArgLinAtom, FloorPow, ArgLinPow)):
			out.extend(atom.argsum.operands())
		else:
			for case in atom.cases:
				out.extend(cond_operands(case.condition))
	return out


def _atom_argsums(atoms) -> list[tuple[ArgSum, list[Fraction]]]:
	out: list[tuple[ArgSum, list[Fraction]]] = []
	for atom in atoms:
		if isinstance(atom, (FloorAtom, FloorPow)):
			out.append((atom.argsum, [Fraction(2 * j + 1) for j in range(-4, 4)]))
		elif isinstance(atom, (ArgLinAtom, ArgLinPow)):
			out.append((atom.argsum, [Fraction(j) for j in range(-6, 7)]))
		else:
			for case in atom.cases:
				out.extend(cond_argsums(case.condition))
	return out


def correction_eval(
	t: CorrectionTerm, z0: object, precision: int = DEFAULT_PRECISION
) -> ConstantExpr:
	"""Exact value of a correction at a point (a multiple of pi*i)."""
	point = Point.of(z0)
	if t.role.is_omega and point.is_zero():
		return ZERO
	ev = _PointEvaluator(point, precision)
	total = t.constant
	for atom in t.atoms:
		match atom:
			case FloorAtom():
				total = total + atom.coef.scale(ev.floor_of(atom.argsum))
			case ArgLinAtom():
				total = total + atom.coef.scale(ev.multiple_of_pi(atom.argsum))
			case CaseAtom():
				total = total + _select(atom.cases, ev.truth)
	return total


# Unit factors


@dataclass(frozen=True, slots=True)
class FloorPow:
	"""(-1)^(q * floor(1/2 - S/(2*pi)))."""

	exponent: Fraction
	argsum: ArgSum

	def render(self) -> str:
		inner = f'floor(1/2 - ({self.argsum.render()})/(2*pi))'
		if self.exponent != 1:
			inner = f'{format_rational(self.exponent)}*{inner}'
		return f'(-1)^({inner})'


@dataclass(frozen=True, slots=True)
class CasePow:
	cases: tuple[Case, ...]

	def render(self) -> str:
		return _render_cases(self.cases)


@dataclass(frozen=True, slots=True)
class ArgLinPow:
	"""(-1)^(q * S/pi) where S/pi is rational at every point."""

	exponent: Fraction
	argsum: ArgSum

	def render(self) -> str:
		return f'(-1)^({format_rational(self.exponent)}*({self.argsum.render()})/pi)'


UnitAtomT = Union[FloorPow, CasePow, ArgLinPow]


@dataclass(frozen=True, slots=True)
class UnitFactor:
	"""Multiplicative piecewise factor of magnitude 1."""

	atoms: tuple[UnitAtomT, ...] = ()
	constant: ConstantExpr = ONE

	@classmethod
	def of_atoms(cls, atoms: list[UnitAtomT], constant: ConstantExpr = ONE) -> UnitFactor:
		merged: dict[tuple[type, ArgSum], Fraction] = {}
		others: list[UnitAtomT] = []
		for atom in atoms:
			if isinstance(atom, (FloorPow, ArgLinPow)):
				key = (type(atom), atom.argsum)
				merged[key] = merged.get(key, Fraction(0)) + atom.exponent
			else:
				others.append(atom)
		out: list[UnitAtomT] = list(others)
		for (kind, argsum), q in merged.items():
			if kind is FloorPow:
				q = mods(q, 2)
			if q:
				out.append(kind(q, argsum))
		out.sort(key=lambda a: a.render())
		return cls(tuple(out), constant)

	def is_one(self) -> bool:
		return not self.atoms and self.constant == ONE

	def is_constant(self) -> bool:
		return not self.atoms

	def pure(self) -> UnitFactor:
		return UnitFactor(self.atoms)

	def __mul__(self, other: UnitFactor) -> UnitFactor:
		return UnitFactor.of_atoms(list(self.atoms) + list(other.atoms), self.constant * other.constant)

	def inverse(self) -> UnitFactor:
		atoms: list[UnitAtomT] = []
		for atom in self.atoms:
			match atom:
				case FloorPow() | ArgLinPow():
					atoms.append(type(atom)(-atom.exponent, atom.argsum))
				case CasePow():
					atoms.append(
						CasePow(tuple(Case(c.condition, c.value.reciprocal(), c.ambiguous) for c in atom.cases))
					)
		return UnitFactor.of_atoms(atoms, self.constant.reciprocal())

	def render(self) -> str:
		parts = [atom.render() for atom in self.atoms]
		if self.constant != ONE or not parts:
			parts.insert(0, _paren(self.constant))
		return '*'.join(parts)

	def operands(self) -> list[Operand]:
		return _atom_operands(self.atoms)


def unit_eval(u: UnitFactor, z0: object, precision: int = DEFAULT_PRECISION) -> ConstantExpr:
	"""Exact value of a unit factor at a point."""
	ev = _PointEvaluator(Point.of(z0), precision)
	total = u.constant
	for atom in u.atoms:
		match atom:
			case FloorPow():
				total = total * unit_power(atom.exponent * ev.floor_of(atom.argsum))
			case ArgLinPow():
				total = total * unit_power(atom.exponent * ev.multiple_of_pi(atom.argsum))
			case CasePow():
				total = total * _select(atom.cases, ev.truth)
	return total


def unit_from_correction(term: CorrectionTerm, beta: Fraction) -> UnitFactor:
	"""exp(beta * term) for a correction whose values are multiples of pi*i."""
	beta = Fraction(beta)
	atoms: list[UnitAtomT] = []
	k = term.constant.i_pi_multiple()
	if k is None:
		raise ValueError(f'Correction constant is not a multiple of pi*i: {term.constant}')
	constant = unit_power(beta * k)
	for atom in term.atoms:
		match atom:
			case FloorAtom():
				m = atom.coef.i_pi_multiple()
				if m is None:
					raise ValueError(f'Floor coefficient is not a multiple of pi*i: {atom.coef}')
				atoms.append(FloorPow(beta * m, atom.argsum))
			case ArgLinAtom():
				m = atom.coef.i_pi_multiple()
				if m is None:
					raise ValueError(f'Coefficient is not a multiple of pi*i: {atom.coef}')
				atoms.append(ArgLinPow(beta * m, atom.argsum))
			case CaseAtom():
				cases = []
				for case in atom.cases:
					v = case.value.i_pi_multiple()
					if v is None:
						raise ValueError(f'Case value is not a multiple of pi*i: {case.value}')
					cases.append(Case(case.condition, unit_power(beta * v), case.ambiguous))
				atoms.append(CasePow(tuple(cases)))
	return UnitFactor.of_atoms(atoms, constant)


# Behaviour near 0


class _RayEvaluator:
	"""Three-valued evaluation of conditions and atoms as r -> 0+ along a direction."""

	def __init__(self, theta: Fraction) -> None:
		self.theta = theta

	def truth(self, c: Condition) -> Optional[bool]:
		match c:
			case TrueCond():
				return True
			case IsZero():
				return False
			case VarSign():
				sign = -1 if self.theta == 1 else (1 if self.theta == 0 else 0)
				return c.relop.holds(sign)
			case And():
				values = [self.truth(item) for item in c.items]
				if any(v is False for v in values):
					return False
				return None if any(v is None for v in values) else True
			case Or():
				values = [self.truth(item) for item in c.items]
				if any(v is True for v in values):
					return True
				return None if any(v is None for v in values) else False
			case Not():
				v = self.truth(c.item)
				return None if v is None else not v
			case ArgCmp():
				ray = c.lhs.along_ray(self.theta)
				if ray is None:
					return None
				diff = ray.value - c.bound if isinstance(ray.value, Fraction) else ray.value - angle_mpf(c.bound)
				if isinstance(diff, Fraction):
					if diff != 0:
						return c.relop.holds(1 if diff > 0 else -1)
					return c.relop.holds(ray.side)
				if abs(diff) > mpmath.mpf(2) ** -100:
					return c.relop.holds(1 if diff > 0 else -1)
				return None
			case PartCmp():
				return c.relop.holds(c.operand.along_ray(self.theta).part_sign(c.part))
		return None

	def floor_of(self, s: ArgSum) -> Optional[int]:
		ray = s.along_ray(self.theta)
		if ray is None:
			return None
		if isinstance(ray.value, Fraction):
			y = HALF - ray.value / 2
			if y.denominator == 1:
				return int(y) - 1 if ray.side > 0 else int(y)
			return math.floor(y)
		y = mpmath.mpf(0.5) - ray.value / 2
		if abs(y - mpmath.nint(y)) < mpmath.mpf(2) ** -100:
			return None
		return int(mpmath.floor(y))

	def multiple_of_pi(self, s: ArgSum) -> Optional[Fraction]:
		ray = s.along_ray(self.theta)
		if ray is None:
			return None
		if isinstance(ray.value, Fraction):
			return ray.value
		return Fraction(int(mpmath.nint(ray.value)))

	def correction(self, t: CorrectionTerm) -> Optional[ConstantExpr]:
		total = t.constant
		for atom in t.atoms:
			match atom:
				case FloorAtom():
					k = self.floor_of(atom.argsum)
					if k is None:
						return None
					total = total + atom.coef.scale(k)
				case ArgLinAtom():
					k = self.multiple_of_pi(atom.argsum)
					if k is None:
						return None
					total = total + atom.coef.scale(k)
				case CaseAtom():
					v = _select(atom.cases, self.truth)
					if v is None:
						return None
					total = total + v
		return total

	def unit(self, u: UnitFactor) -> Optional[ConstantExpr]:
		total = u.constant
		for atom in u.atoms:
			match atom:
				case FloorPow():
					k = self.floor_of(atom.argsum)
					if k is None:
						return None
					total = total * unit_power(atom.exponent * k)
				case ArgLinPow():
					k = self.multiple_of_pi(atom.argsum)
					if k is None:
						return None
					total = total * unit_power(atom.exponent * k)
				case CasePow():
					v = _select(atom.cases, self.truth)
					if v is None:
						return None
					total = total * v
		return total


def _operand_angles(operand: Operand, lo: Fraction, hi: Fraction) -> Optional[set[Fraction]]:
	data = operand.angle_data()
	if data is None:
		return None
	out: set[Fraction] = set()
	for eta, e in data[:_ANGLE_TERMS]:
		if e == 0:
			continue
		# eta + e*theta hits a multiple of pi/2
		k_lo = math.floor(2 * min(eta + e * lo, eta + e * hi)) - 1
		k_hi = math.ceil(2 * max(eta + e * lo, eta + e * hi)) + 1
		for k in range(k_lo, k_hi + 1):
			theta = (Fraction(k, 2) - eta) / e
			if lo < theta <= hi:
				out.add(theta)
	return out


def _argsum_angles(
	s: ArgSum, targets: list[Fraction], lo: Fraction, hi: Fraction
) -> Optional[set[Fraction]]:
	leading: list[tuple[Fraction, Fraction, Fraction]] = []
	for q, operand in s.terms:
		data = operand.angle_data()
		if data is None:
			return None
		eta, e = data[0] if data else (Fraction(0), Fraction(0))
		leading.append((q, eta, e))
	breaks = {lo, hi}
	for _, eta, e in leading:
		if e == 0:
			continue
		for n in range(-8, 9):
			theta = (Fraction(2 * n + 1) - eta) / e
			if lo < theta < hi:
				breaks.add(theta)
	points = sorted(breaks)
	out: set[Fraction] = set()
	for a, b in zip(points, points[1:]):
		mid = (a + b) / 2
		value = s.offset + sum((q * mods(eta + e * mid, 2) for q, eta, e in leading), Fraction(0))
		slope = sum((q * e for q, _, e in leading), Fraction(0))
		if slope == 0:
			continue
		base = value - slope * mid
		for target in targets:
			theta = (target - base) / slope
			if a < theta < b:
				out.add(theta)
	return out | {p for p in points if lo < p <= hi}


def sample_directions(
	operands: list[Operand],
	argsums: list[tuple[ArgSum, list[Fraction]]],
	constraint: Constraint,
) -> Optional[list[Fraction]]:
	"""Directions sampling every behaviour a piecewise value can show near 0."""
	if constraint.real:
		return constraint.directions()
	lo, hi = constraint.lo, constraint.hi
	critical: set[Fraction] = {hi}
	for operand in operands:
		angles = _operand_angles(operand, lo, hi)
		if angles is None:
			return None
		critical |= angles
	for s, targets in argsums:
		angles = _argsum_angles(s, targets, lo, hi)
		if angles is None:
			return None
		critical |= angles
	ordered = sorted(critical)
	mids = [(a + b) / 2 for a, b in zip([lo, *ordered], ordered)]
	return sorted(set(ordered) | set(mids))


def _assemble_real(
	values: dict[Fraction, ConstantExpr], at_zero: ConstantExpr, var: str
) -> list[tuple[Condition, ConstantExpr]]:
	"""Per-sign values recombined into as few cases as possible."""
	negative = values.get(Fraction(1))
	positive = values.get(Fraction(0))
	if negative is None:
		assert positive is not None
		if positive == at_zero:
			return [(TRUE, positive)]
		return [(IsZero(var), at_zero), (TRUE, positive)]
	if positive is None:
		if negative == at_zero:
			return [(TRUE, negative)]
		return [(IsZero(var), at_zero), (TRUE, negative)]
	if negative == positive == at_zero:
		return [(TRUE, positive)]
	if negative == at_zero:
		return [(VarSign(var, Relop.GT), positive), (TRUE, negative)]
	if positive == at_zero:
		return [(VarSign(var, Relop.LT), negative), (TRUE, positive)]
	if negative == positive:
		return [(IsZero(var), at_zero), (TRUE, positive)]
	return [(VarSign(var, Relop.LT), negative), (IsZero(var), at_zero), (TRUE, positive)]


def _near_zero_cases(
	ray_value,
	zero_value: ConstantExpr,
	operands: list[Operand],
	argsums: list[tuple[ArgSum, list[Fraction]]],
	constraint: Constraint,
	var: str,
) -> Optional[list[tuple[Condition, ConstantExpr]]]:
	directions = sample_directions(operands, argsums, constraint)
	if directions is None:
		return None
	values: dict[Fraction, ConstantExpr] = {}
	for theta in directions:
		v = ray_value(_RayEvaluator(theta))
		if v is None:
			logger.debug('Direction %s*pi undecided; keeping generic form', theta)
			return None
		values[theta] = v
	if constraint.real:
		return _assemble_real(values, zero_value, var)
	distinct = set(values.values())
	if len(distinct) != 1:
		return None
	value = distinct.pop()
	if value == zero_value:
		return [(TRUE, value)]
	return [(IsZero(var), zero_value), (TRUE, value)]


def simplify_correction(t: CorrectionTerm, constraint: Constraint, var: str) -> CorrectionTerm:
	"""Replace a correction by a constant or a short case list when its behaviour near 0 allows."""
	if t.is_constant():
		return t
	operands = t.operands()
	argsums = _atom_argsums(t.atoms)
	zero_value = ZERO if t.role.is_omega else correction_eval(t, 0)
	cases = _near_zero_cases(
		lambda ev: ev.correction(t), zero_value, operands, argsums, constraint, var
	)
	if cases is None:
		return t
	return _cases_to_correction(t.role, cases)


def _cases_to_correction(role: Role, cases: list[tuple[Condition, ConstantExpr]]) -> CorrectionTerm:
	if len(cases) == 1:
		return CorrectionTerm(role, (), cases[0][1])
	return CorrectionTerm(role, (CaseAtom(tuple(Case(c, v) for c, v in cases)),))


def simplify_unit(u: UnitFactor, constraint: Constraint, var: str) -> UnitFactor:
	"""Collapse a unit factor to a constant or a short case list when possible."""
	if u.is_constant():
		return u
	operands = u.operands()
	argsums = _atom_argsums(u.atoms)
	zero_value = unit_eval(u, 0)
	cases = _near_zero_cases(lambda ev: ev.unit(u), zero_value, operands, argsums, constraint, var)
	if cases is None:
		return u
	if len(cases) == 1:
		return UnitFactor((), cases[0][1])
	return UnitFactor((CasePow(tuple(Case(c, v) for c, v in cases)),))


def simplify_real(v, constraint: Constraint, var: str = 'x'):
	"""Simplify under x < 0, x = 0 and x > 0 separately and recombine."""
	if not constraint.real:
		raise ValueError('simplify_real needs a real-variable constraint')
	if isinstance(v, UnitFactor):
		return simplify_unit(v, constraint, var)
	return simplify_correction(v, constraint, var)


def value_at_zero_only(u: UnitFactor) -> Optional[tuple[ConstantExpr, ConstantExpr]]:
	"""(value at 0, value elsewhere) when the factor is {v0 if z = 0; v otherwise}."""
	if u.constant != ONE or len(u.atoms) != 1 or not isinstance(u.atoms[0], CasePow):
		return None
	cases = u.atoms[0].cases
	if len(cases) == 2 and isinstance(cases[0].condition, IsZero) and isinstance(cases[1].condition, TrueCond):
		return cases[0].value, cases[1].value
	return None


# Angle bounds


@dataclass(frozen=True, slots=True)
class AngleBounds:
	"""Bounds on arg(c), arg(z^alpha) and arg(b) near 0, all divided by pi."""

	eta_lo: Angle
	eta_hi: Angle
	eta_hat: Optional[Angle]
	ups_lo: Angle
	ups_hi: Angle
	tau_lo: Angle = Fraction(-1)
	tau_hi: Angle = Fraction(1)
	tau_hat: Optional[Angle] = None


def coefficient_limit_arg(poly: dict[int, ConstantExpr]) -> Optional[Angle]:
	"""Limit of arg(c(z))/pi for c = sum c_k ln(z)^k, independent of direction."""
	if not poly:
		return None
	top = max(poly)
	return arg_over_pi_guarded(poly[top].scale(-1 if top % 2 else 1))


def bound_args(
	poly: Optional[dict[int, ConstantExpr]],
	alpha: Fraction,
	constraint: Constraint,
	tail_poly: Optional[dict[int, ConstantExpr]] = None,
) -> AngleBounds:
	"""Angle bounds for the dominant coefficient and for z^alpha under a constraint.

	A coefficient that is not a log-polynomial (it carries piecewise atoms)
	widens the bounds to (-pi, pi].
	"""
	alpha = Fraction(alpha)
	eta_hat = coefficient_limit_arg(poly) if poly is not None else None
	if eta_hat is None:
		eta_lo, eta_hi = Fraction(-1), Fraction(1)
	else:
		eta_lo = eta_hi = eta_hat
	tau_hat = coefficient_limit_arg(tail_poly) if tail_poly else None
	if constraint.real:
		values = [mods(alpha * theta, 2) for theta in constraint.directions()]
		ups_lo, ups_hi = min(values), max(values)
	else:
		a, b = sorted((alpha * constraint.lo, alpha * constraint.hi))
		if -1 <= a and b <= 1:
			ups_lo, ups_hi = a, b
		else:
			m = min(Fraction(1), abs(alpha))
			ups_lo, ups_hi = -m, m
	return AngleBounds(
		eta_lo,
		eta_hi,
		eta_hat,
		ups_lo,
		ups_hi,
		tau_hat if tau_hat is not None else Fraction(-1),
		tau_hat if tau_hat is not None else Fraction(1),
		tau_hat,
	)


__all__ = [
	'AngleBounds',
	'And',
	'ArgCmp',
	'ArgLinAtom',
	'ArgLinPow',
	'ArgSum',
	'Case',
	'CaseAtom',
	'CasePow',
	'Condition',
	'Constraint',
	'CorrectionTerm',
	'FloorAtom',
	'FloorPow',
	'IsZero',
	'Not',
	'Or',
	'PartCmp',
	'Point',
	'RayExpansion',
	'TRUE',
	'TrueCond',
	'UnitFactor',
	'VarSign',
	'bound_args',
	'cond_eval',
	'correction_eval',
	'simplify_correction',
	'simplify_real',
	'simplify_unit',
	'unit_eval',
	'unit_from_correction',
]
