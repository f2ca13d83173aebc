"""Exact scalars, closed-form constants and precision-controlled evaluation.

Constants are canonical sums of monomials over a small set of atoms: pi,
radicals of integers, powers of -1, logarithms, a few inverse functions of
Gaussian rationals and principal powers of constants that do not reduce
further. Canonical form makes structural equality meaningful. A 256-bit
numeric guard catches identities canonical form cannot see, such as
1 + i against sqrt(2)*(-1)^(1/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Optional, Union

import mpmath

from .errors import DomainError, EvaluationError, UnsupportedError
from .vocabulary import Part

DEFAULT_PRECISION = 128
MIN_PRECISION = 53
MAX_PRECISION = 4096
GUARD_PRECISION = 256
_GUARD_BITS = 16

HALF = Fraction(1, 2)

RationalLike = Union[int, Fraction, str]


def to_fraction(value: RationalLike) -> Fraction:
	"""Parse an int, Fraction or ``p/q`` string into a Fraction."""
	if isinstance(value, Fraction):
		return value
	if isinstance(value, int):
		return Fraction(value)
	try:
		return Fraction(str(value).strip())
	except (ValueError, ZeroDivisionError) as e:
		raise DomainError(f'Not a rational number: {value!r}') from e


def format_rational(q: Fraction) -> str:
	"""Render ``p`` or ``p/q``."""
	q = Fraction(q)
	if q.denominator == 1:
		return str(q.numerator)
	return f'{q.numerator}/{q.denominator}'


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
	"""Exact rational value of a binary floating point number."""
	x = mpmath.mpf(x)
	if not mpmath.isfinite(x):
		raise DomainError(f'Not a finite number: {x}')
	# man_exp carries the magnitude only
	man, exp = x.man_exp
	man = -abs(int(man)) if x < 0 else abs(int(man))
	if exp >= 0:
		return Fraction(man * 2 ** int(exp))
	return Fraction(man, 2 ** int(-exp))


def _to_mpf(q: Fraction) -> mpmath.mpf:
	return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True, slots=True)
class GaussianRational:
	"""Exact complex number with rational real and imaginary parts."""

	re: Fraction = Fraction(0)
	im: Fraction = Fraction(0)

	def __post_init__(self) -> None:
		object.__setattr__(self, 're', Fraction(self.re))
		object.__setattr__(self, 'im', Fraction(self.im))

	@classmethod
	def of(cls, value: Union[GaussianRational, int, Fraction]) -> GaussianRational:
		if isinstance(value, GaussianRational):
			return value
		return cls(Fraction(value))

	@classmethod
	def from_mpc(cls, value: mpmath.mpc) -> GaussianRational:
		"""Exact value of a binary floating point complex number."""
		value = mpmath.mpc(value)
		return cls(mpf_to_fraction(value.real), mpf_to_fraction(value.imag))

	@staticmethod
	def _coerce(other: object) -> Optional[GaussianRational]:
		if isinstance(other, GaussianRational):
			return other
		if isinstance(other, (int, Fraction)):
			return GaussianRational(Fraction(other))
		return None

	def __add__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return GaussianRational(self.re + o.re, self.im + o.im)

	__radd__ = __add__

	def __neg__(self) -> GaussianRational:
		return GaussianRational(-self.re, -self.im)

	def __sub__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return GaussianRational(self.re - o.re, self.im - o.im)

	def __rsub__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return o - self

	def __mul__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

	__rmul__ = __mul__

	def __truediv__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		if o.is_zero():
			raise EvaluationError('Division by zero')
		n = o.norm()
		num = self * o.conjugate()
		return GaussianRational(num.re / n, num.im / n)

	def __rtruediv__(self, other: object) -> GaussianRational:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return o / self

	def __pow__(self, k: int) -> GaussianRational:
		if k < 0:
			return GaussianRational(1) / self**-k
		result = GaussianRational(1)
		base = self
		while k:
			if k & 1:
				result = result * base
			base = base * base
			k >>= 1
		return result

	def conjugate(self) -> GaussianRational:
		return GaussianRational(self.re, -self.im)

	def norm(self) -> Fraction:
		return self.re * self.re + self.im * self.im

	def is_zero(self) -> bool:
		return self.re == 0 and self.im == 0

	def is_real(self) -> bool:
		return self.im == 0

	def is_imaginary(self) -> bool:
		return self.re == 0 and self.im != 0

	def arg_over_pi(self) -> Optional[Fraction]:
		"""arg/pi when it is rational (axes and diagonals); arg(0) is 0."""
		a, b = self.re, self.im
		if b == 0:
			return Fraction(1) if a < 0 else Fraction(0)
		if a == 0:
			return HALF if b > 0 else -HALF
		if abs(a) == abs(b):
			if a > 0:
				return Fraction(1, 4) if b > 0 else Fraction(-1, 4)
			return Fraction(3, 4) if b > 0 else Fraction(-3, 4)
		return None

	def to_mpc(self) -> mpmath.mpc:
		return mpmath.mpc(_to_mpf(self.re), _to_mpf(self.im))

	def __str__(self) -> str:
		if self.im == 0:
			return format_rational(self.re)
		imag = _imag_text(abs(self.im))
		if self.re == 0:
			return f'-{imag}' if self.im < 0 else imag
		sign = '-' if self.im < 0 else '+'
		return f'({format_rational(self.re)} {sign} {imag})'


def _imag_text(q: Fraction) -> str:
	if q == 1:
		return 'i'
	if q.numerator == 1:
		return f'i/{q.denominator}'
	if q.denominator == 1:
		return f'{q.numerator}*i'
	return f'{q.numerator}*i/{q.denominator}'


# Kahan branch definitions, shared by constant evaluation and the oracle


def principal_ln(w: mpmath.mpc) -> mpmath.mpc:
	if w == 0:
		raise EvaluationError('Logarithm of zero')
	return mpmath.log(mpmath.mpc(w))


def kahan_arctanh(w: mpmath.mpc) -> mpmath.mpc:
	return (principal_ln(1 + w) - principal_ln(1 - w)) / 2


def kahan_arctan(w: mpmath.mpc) -> mpmath.mpc:
	return -1j * kahan_arctanh(1j * w)


def kahan_arcsinh(w: mpmath.mpc) -> mpmath.mpc:
	w = mpmath.mpc(w)
	return principal_ln(w + mpmath.sqrt(1 + w * w))


def kahan_arcsin(w: mpmath.mpc) -> mpmath.mpc:
	return -1j * kahan_arcsinh(1j * mpmath.mpc(w))


def kahan_arccos(w: mpmath.mpc) -> mpmath.mpc:
	return mpmath.pi / 2 - kahan_arcsin(w)


def kahan_arccosh(w: mpmath.mpc) -> mpmath.mpc:
	w = mpmath.mpc(w)
	return 2 * principal_ln(mpmath.sqrt((w - 1) / 2) + mpmath.sqrt((w + 1) / 2))


def kahan_arccosh_product(w: mpmath.mpc) -> mpmath.mpc:
	w = mpmath.mpc(w)
	return principal_ln(w + mpmath.sqrt(w - 1) * mpmath.sqrt(w + 1))


KAHAN_FUNCTIONS = {
	'arctan': kahan_arctan,
	'arctanh': kahan_arctanh,
	'arcsin': kahan_arcsin,
	'arccos': kahan_arccos,
	'arcsinh': kahan_arcsinh,
	'arccosh': kahan_arccosh,
}


def principal_power(w: mpmath.mpc, q: Fraction, real_branch: bool = False) -> mpmath.mpc:
	"""w**q on the principal branch, or the real root for odd denominators when asked."""
	q = Fraction(q)
	w = mpmath.mpc(w)
	if w == 0:
		if q > 0:
			return mpmath.mpc(0)
		raise EvaluationError('Zero raised to a non-positive power')
	if q.denominator == 1:
		return w ** int(q)
	if real_branch and w.imag == 0 and w.real < 0 and q.denominator % 2 == 1:
		magnitude = mpmath.power(-w.real, _to_mpf(q))
		return mpmath.mpc(-magnitude if q.numerator % 2 else magnitude)
	return mpmath.power(w, _to_mpf(q))


# Atoms


class _Atom:
	"""Shared ordering and rendering for constant atoms."""

	__slots__ = ()
	rank: ClassVar[int] = 0

	def label(self) -> str:
		raise NotImplementedError

	def is_positive(self) -> bool:
		"""Whether the atom is a positive real number."""
		return False

	def value(self) -> mpmath.mpc:
		raise NotImplementedError

	def power_value(self, power: Fraction) -> mpmath.mpc:
		if power == 1:
			return self.value()
		if power.denominator == 1:
			return self.value() ** int(power)
		return mpmath.power(self.value(), _to_mpf(power))

	def render(self, power: Fraction) -> str:
		if power == 1:
			return self.label()
		return f'{self.label()}^({format_rational(power)})'

	@property
	def sort_key(self) -> tuple[int, str]:
		return (self.rank, self.label())


@dataclass(frozen=True, slots=True)
class PiAtom(_Atom):
	rank: ClassVar[int] = 0

	def label(self) -> str:
		return 'pi'

	def is_positive(self) -> bool:
		return True

	def value(self) -> mpmath.mpc:
		return mpmath.mpc(mpmath.pi)


@dataclass(frozen=True, slots=True)
class PrimeAtom(_Atom):
	"""An integer base carrying a fractional power in (0, 1)."""

	base: int
	rank: ClassVar[int] = 1

	def label(self) -> str:
		return str(self.base)

	def is_positive(self) -> bool:
		return True

	def value(self) -> mpmath.mpc:
		return mpmath.mpc(self.base)

	def render(self, power: Fraction) -> str:
		if power == HALF:
			return f'sqrt({self.base})'
		return f'{self.base}^({format_rational(power)})'


@dataclass(frozen=True, slots=True)
class UnitAtom(_Atom):
	"""(-1)^q = exp(i*pi*q) with q kept in (-1/2, 1/2)."""

	rank: ClassVar[int] = 2

	def label(self) -> str:
		return '(-1)'

	def value(self) -> mpmath.mpc:
		return mpmath.mpc(-1)

	def power_value(self, power: Fraction) -> mpmath.mpc:
		return mpmath.expjpi(_to_mpf(power))

	def render(self, power: Fraction) -> str:
		return f'(-1)^({format_rational(power)})'


@dataclass(frozen=True, slots=True)
class LogAtom(_Atom):
	"""Principal logarithm of a constant."""

	argument: ConstantExpr
	rank: ClassVar[int] = 3

	def label(self) -> str:
		return f'ln({self.argument})'

	def is_positive(self) -> bool:
		g = self.argument.as_gaussian()
		return g is not None and g.is_real() and g.re > 1

	def value(self) -> mpmath.mpc:
		return principal_ln(self.argument.evaluate_mp())


@dataclass(frozen=True, slots=True)
class FuncAtom(_Atom):
	"""An inverse trigonometric or hyperbolic function of a Gaussian rational."""

	name: str
	argument: GaussianRational
	rank: ClassVar[int] = 4

	def label(self) -> str:
		return f'{self.name}({self.argument})'

	def is_positive(self) -> bool:
		if self.name == 'exp':
			return self.argument.is_real()
		return self.name == 'arctan' and self.argument.is_real() and self.argument.re > 0

	def value(self) -> mpmath.mpc:
		if self.name == 'exp':
			return mpmath.exp(self.argument.to_mpc())
		return KAHAN_FUNCTIONS[self.name](self.argument.to_mpc())


@dataclass(frozen=True, slots=True)
class ExprAtom(_Atom):
	"""Principal power of a constant that does not reduce to simpler atoms."""

	base: ConstantExpr
	rank: ClassVar[int] = 5

	def label(self) -> str:
		return f'({self.base})'

	def value(self) -> mpmath.mpc:
		return self.base.evaluate_mp()

	def power_value(self, power: Fraction) -> mpmath.mpc:
		base = self.value()
		if base == 0:
			raise EvaluationError('Division by zero')
		return principal_power(base, power)

	def render(self, power: Fraction) -> str:
		if power == HALF:
			return f'sqrt({self.base})'
		return f'({self.base})^({format_rational(power)})'


Atom = Union[PiAtom, PrimeAtom, UnitAtom, LogAtom, FuncAtom, ExprAtom]
Monomial = tuple[tuple[Atom, Fraction], ...]

UNIT = UnitAtom()


def _monomial_key(mono: Monomial) -> tuple:
	return tuple((atom.sort_key, power) for atom, power in mono)


def _fold_unit(q: Fraction) -> tuple[GaussianRational, Fraction]:
	"""Split (-1)^q into a Gaussian factor in {1, -1, i, -i} and a residual exponent in (-1/2, 1/2)."""
	rest = mods(Fraction(q), 2)
	sign = 1
	if rest > HALF:
		rest -= 1
		sign = -1
	elif rest <= -HALF:
		rest += 1
		sign = -1
	if rest == HALF:
		return GaussianRational(0, sign), Fraction(0)
	return GaussianRational(sign), rest


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
	"""Prime factorization by trial division; a large cofactor is kept whole."""
	factors: dict[int, int] = {}
	d = 2
	while d * d <= n and d < 100_000:
		while n % d == 0:
			factors[d] = factors.get(d, 0) + 1
			n //= d
		d += 1 if d == 2 else 2
	if n > 1:
		factors[n] = factors.get(n, 0) + 1
	return tuple(sorted(factors.items()))


def _collect(powers: dict[Atom, Fraction]) -> ConstantExpr:
	"""Canonical constant for a product of atom powers."""
	coef = GaussianRational(1)
	atoms: dict[Atom, Fraction] = {}
	expanded: Optional[ConstantExpr] = None
	for atom, power in powers.items():
		power = Fraction(power)
		if power == 0:
			continue
		if isinstance(atom, PrimeAtom):
			whole = math.floor(power)
			coef = coef * Fraction(atom.base) ** whole
			if power != whole:
				atoms[atom] = power - whole
		elif isinstance(atom, UnitAtom):
			factor, rest = _fold_unit(power)
			coef = coef * factor
			if rest:
				atoms[atom] = rest
		elif isinstance(atom, ExprAtom) and power.denominator == 1 and power > 0:
			term = atom.base ** int(power)
			expanded = term if expanded is None else expanded * term
		else:
			atoms[atom] = power
	mono = tuple(sorted(atoms.items(), key=lambda item: item[0].sort_key))
	single = ConstantExpr._from_items({mono: coef})
	return single if expanded is None else expanded * single


@dataclass(frozen=True, slots=True)
class ConstantExpr:
	"""Canonical sum of Gaussian-rational multiples of atom monomials."""

	terms: tuple[tuple[Monomial, GaussianRational], ...] = ()

	@classmethod
	def _from_items(cls, items: dict[Monomial, GaussianRational]) -> ConstantExpr:
		kept = [(m, c) for m, c in items.items() if not c.is_zero()]
		kept.sort(key=lambda item: _monomial_key(item[0]))
		return cls(tuple(kept))

	@staticmethod
	def _coerce(other: object) -> Optional[ConstantExpr]:
		if isinstance(other, ConstantExpr):
			return other
		if isinstance(other, (int, Fraction, GaussianRational)):
			return const(other)
		return None

	def __add__(self, other: object) -> ConstantExpr:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		items = dict(self.terms)
		for mono, coef in o.terms:
			items[mono] = items.get(mono, GaussianRational()) + coef
		return ConstantExpr._from_items(items)

	__radd__ = __add__

	def __neg__(self) -> ConstantExpr:
		return ConstantExpr(tuple((m, -c) for m, c in self.terms))

	def __sub__(self, other: object) -> ConstantExpr:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return self + (-o)

	def __rsub__(self, other: object) -> ConstantExpr:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return o - self

	def scale(self, factor: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
		f = GaussianRational.of(factor)
		if f.is_zero():
			return ZERO
		return ConstantExpr(tuple((m, c * f) for m, c in self.terms))

	def __mul__(self, other: object) -> ConstantExpr:
		if isinstance(other, (int, Fraction, GaussianRational)):
			return self.scale(other)
		if not isinstance(other, ConstantExpr):
			return NotImplemented
		if len(other.terms) == 1 and not other.terms[0][0]:
			return self.scale(other.terms[0][1])
		if len(self.terms) == 1 and not self.terms[0][0]:
			return other.scale(self.terms[0][1])
		result = ZERO
		for m1, c1 in self.terms:
			for m2, c2 in other.terms:
				powers: dict[Atom, Fraction] = dict(m1)
				for atom, power in m2:
					powers[atom] = powers.get(atom, Fraction(0)) + power
				result = result + _collect(powers).scale(c1 * c2)
		return result

	__rmul__ = __mul__

	def reciprocal(self) -> ConstantExpr:
		if not self.terms:
			raise EvaluationError('Division by zero')
		if len(self.terms) == 1:
			mono, coef = self.terms[0]
			inverse = GaussianRational(1) / coef
			return _collect({atom: -power for atom, power in mono}).scale(inverse)
		return _collect({ExprAtom(self): Fraction(-1)})

	def __truediv__(self, other: object) -> ConstantExpr:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return self * o.reciprocal()

	def __rtruediv__(self, other: object) -> ConstantExpr:
		o = self._coerce(other)
		if o is None:
			return NotImplemented
		return o * self.reciprocal()

	def __pow__(self, k: int) -> ConstantExpr:
		if k < 0:
			return self.reciprocal() ** -k
		result = ONE
		base = self
		while k:
			if k & 1:
				result = result * base
			base = base * base
			k >>= 1
		return result

	def is_zero(self) -> bool:
		"""Structural zero test; see ``const_is_zero`` for the guarded test."""
		return not self.terms

	def as_gaussian(self) -> Optional[GaussianRational]:
		if not self.terms:
			return GaussianRational()
		if len(self.terms) == 1 and not self.terms[0][0]:
			return self.terms[0][1]
		return None

	def pi_multiple(self) -> Optional[Fraction]:
		"""q when the constant is exactly q*pi."""
		if not self.terms:
			return Fraction(0)
		if len(self.terms) == 1:
			mono, coef = self.terms[0]
			if mono == ((PiAtom(), Fraction(1)),) and coef.is_real():
				return coef.re
		return None

	def i_pi_multiple(self) -> Optional[Fraction]:
		"""q when the constant is exactly q*pi*i."""
		if not self.terms:
			return Fraction(0)
		if len(self.terms) == 1:
			mono, coef = self.terms[0]
			if mono == ((PiAtom(), Fraction(1)),) and coef.re == 0:
				return coef.im
		return None

	def evaluate_mp(self) -> mpmath.mpc:
		"""Value at the current mpmath working precision."""
		total = mpmath.mpc(0)
		for mono, coef in self.terms:
			term = coef.to_mpc()
			for atom, power in mono:
				term *= atom.power_value(power)
			total += term
		return total

	def term_magnitudes(self) -> mpmath.mpf:
		total = mpmath.mpf(0)
		for mono, coef in self.terms:
			term = coef.to_mpc()
			for atom, power in mono:
				term *= atom.power_value(power)
			total += abs(term)
		return total

	def __str__(self) -> str:
		if not self.terms:
			return '0'
		out = ''
		for index, (mono, coef) in enumerate(self.terms):
			text, negative = _render_term(mono, coef)
			if index == 0:
				out = f'-{text}' if negative else text
			else:
				out += f' - {text}' if negative else f' + {text}'
		return out


def _render_term(mono: Monomial, coef: GaussianRational) -> tuple[str, bool]:
	atoms = '*'.join(atom.render(power) for atom, power in mono)
	if coef.re != 0 and coef.im != 0:
		return (f'{coef}*{atoms}' if atoms else str(coef)), False
	imaginary = coef.re == 0
	value = coef.im if imaginary else coef.re
	magnitude = abs(value)
	parts = []
	if magnitude.numerator != 1 or not (atoms or imaginary):
		parts.append(str(magnitude.numerator))
	if atoms:
		parts.append(atoms)
	if imaginary:
		parts.append('i')
	text = '*'.join(parts)
	if magnitude.denominator != 1:
		text = f'{text}/{magnitude.denominator}'
	return text, value < 0


def const(value: Union[ConstantExpr, GaussianRational, int, Fraction]) -> ConstantExpr:
	"""Lift a scalar into a ConstantExpr."""
	if isinstance(value, ConstantExpr):
		return value
	g = GaussianRational.of(value)
	if g.is_zero():
		return ConstantExpr()
	return ConstantExpr((((), g),))


ZERO = ConstantExpr()
ONE = const(1)
I = const(GaussianRational(0, 1))
PI = ConstantExpr(((((PiAtom(), Fraction(1)),), GaussianRational(1)),))


def unit_power(q: RationalLike) -> ConstantExpr:
	"""(-1)^q on the principal branch, i.e. exp(i*pi*q)."""
	return _collect({UNIT: to_fraction(q)})


def const_normalize(e: ConstantExpr) -> ConstantExpr:
	"""Rebuild every monomial through the canonicalizer."""
	result = ZERO
	for mono, coef in e.terms:
		result = result + _collect(dict(mono)).scale(coef)
	return result


def mods(u, v):
	"""Residue of ``u`` modulo ``v`` in the near-symmetric interval (-v/2, v/2].

	Rationals give rationals, pi multiples give pi multiples, anything else an mpf.
	"""
	if isinstance(u, (int, Fraction)) and isinstance(v, (int, Fraction)):
		u, v = Fraction(u), Fraction(v)
		if v <= 0:
			raise DomainError(f'mods needs a positive modulus, got {v}')
		k = math.ceil(u / v - HALF)
		return u - k * v
	if isinstance(u, ConstantExpr) or isinstance(v, ConstantExpr):
		cu, cv = const(u), const(v)
		pu, pv = cu.pi_multiple(), cv.pi_multiple()
		if pu is not None and pv is not None:
			if pv <= 0:
				raise DomainError('mods needs a positive modulus')
			return PI.scale(mods(pu, pv))
		with mpmath.workprec(GUARD_PRECISION):
			u = cu.evaluate_mp().real
			v = cv.evaluate_mp().real
	x = _to_mpf(u) if isinstance(u, Fraction) else mpmath.mpf(u)
	w = _to_mpf(v) if isinstance(v, Fraction) else mpmath.mpf(v)
	if w <= 0:
		raise DomainError(f'mods needs a positive modulus, got {w}')
	k = mpmath.ceil(x / w - mpmath.mpf(0.5))
	return x - k * w


# Closed-form constructors


def _ln_positive_rational(r: Fraction) -> ConstantExpr:
	result = ZERO
	for p, e in _factor(r.numerator):
		result = result + _log_prime(p).scale(e)
	for p, e in _factor(r.denominator):
		result = result - _log_prime(p).scale(e)
	return result


def _log_prime(p: int) -> ConstantExpr:
	return _collect({LogAtom(const(p)): Fraction(1)})


def rational_power(r: RationalLike, q: RationalLike, real_branch: bool = False) -> ConstantExpr:
	"""r**q for rational r, principal unless ``real_branch`` asks for the real odd root."""
	r, q = to_fraction(r), to_fraction(q)
	if r == 0:
		if q > 0:
			return ZERO
		raise DomainError('Zero raised to a non-positive power')
	if q.denominator == 1:
		return const(r ** int(q))
	powers: dict[Atom, Fraction] = {}
	for p, e in _factor(abs(r.numerator)):
		powers[PrimeAtom(p)] = powers.get(PrimeAtom(p), Fraction(0)) + e * q
	for p, e in _factor(r.denominator):
		powers[PrimeAtom(p)] = powers.get(PrimeAtom(p), Fraction(0)) - e * q
	sign = 1
	if r < 0:
		if real_branch and q.denominator % 2 == 1:
			sign = -1 if q.numerator % 2 else 1
		else:
			powers[UNIT] = q
	return _collect(powers).scale(sign)


def _split_monomial(mono: Monomial) -> tuple[dict[Atom, Fraction], Fraction, dict[Atom, Fraction]]:
	positive: dict[Atom, Fraction] = {}
	unit = Fraction(0)
	other: dict[Atom, Fraction] = {}
	for atom, power in mono:
		if isinstance(atom, UnitAtom):
			unit = power
		elif atom.is_positive():
			positive[atom] = power
		else:
			other[atom] = power
	return positive, unit, other


def const_pow(e: ConstantExpr, q: RationalLike, real_branch: bool = False) -> ConstantExpr:
	"""Principal e**q (real odd roots of negative reals when ``real_branch``)."""
	e, q = const(e), to_fraction(q)
	if q.denominator == 1:
		if e.is_zero() and q <= 0:
			raise DomainError('Zero raised to a non-positive power')
		return e ** int(q)
	if e.is_zero():
		if q > 0:
			return ZERO
		raise DomainError('Zero raised to a non-positive power')
	if len(e.terms) == 1:
		mono, coef = e.terms[0]
		positive, unit, other = _split_monomial(mono)
		t = coef.arg_over_pi()
		if not other and t is not None:
			magnitude = abs(coef.re) if coef.re != 0 else abs(coef.im)
			powered = rational_power(magnitude, q)
			if coef.re != 0 and coef.im != 0:
				powered = powered * rational_power(2, q / 2)
			for atom, power in positive.items():
				powered = powered * _collect({atom: power * q})
			angle = mods(t + unit, 2)
			if real_branch and angle == 1 and q.denominator % 2 == 1:
				return powered.scale(-1 if q.numerator % 2 else 1)
			return powered * unit_power(q * angle)
	return _collect({ExprAtom(e): q})


def _arctan_rational(r: Fraction) -> ConstantExpr:
	if r == 0:
		return ZERO
	if abs(r) == 1:
		return PI.scale(Fraction(1, 4) * (1 if r > 0 else -1))
	if r < 0:
		return -_collect({FuncAtom('arctan', GaussianRational(-r)): Fraction(1)})
	return _collect({FuncAtom('arctan', GaussianRational(r)): Fraction(1)})


def _principal_arg(g: GaussianRational) -> ConstantExpr:
	"""Exact principal argument of a nonzero Gaussian rational."""
	t = g.arg_over_pi()
	if t is not None:
		return PI.scale(t)
	base = _arctan_rational(g.im / g.re)
	if g.re > 0:
		return base
	return base + PI if g.im > 0 else base - PI


def const_ln(e: ConstantExpr) -> ConstantExpr:
	"""Principal logarithm, distributed over atoms where the arguments add exactly."""
	e = const(e)
	if e.is_zero():
		raise DomainError('Logarithm of zero')
	if len(e.terms) == 1:
		mono, coef = e.terms[0]
		positive, unit, other = _split_monomial(mono)
		if not other:
			result = ZERO
			for atom, power in positive.items():
				if isinstance(atom, PrimeAtom):
					result = result + _log_prime(atom.base).scale(power)
				else:
					result = result + _collect({LogAtom(_collect({atom: Fraction(1)})): Fraction(1)}).scale(power)
			result = result + _ln_positive_rational(coef.norm()).scale(HALF)
			angle = _principal_arg(coef) + PI.scale(unit)
			result = result + _wrap_angle(angle) * I
			return result
	g = e.as_gaussian()
	if g is not None and g.is_real() and g.re > 0:
		return _ln_positive_rational(g.re)
	return _collect({LogAtom(e): Fraction(1)})


def _wrap_angle(angle: ConstantExpr) -> ConstantExpr:
	"""Shift a real angle by a multiple of 2*pi into (-pi, pi]."""
	q = angle.pi_multiple()
	if q is not None:
		return PI.scale(mods(q, 2))
	with mpmath.workprec(GUARD_PRECISION):
		value = angle.evaluate_mp().real
		k = int(mpmath.ceil(value / (2 * mpmath.pi) - mpmath.mpf(0.5)))
	return angle - PI.scale(2 * k)


def const_arctanh(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	g = GaussianRational.of(value)
	if g.is_real() and abs(g.re) == 1:
		raise DomainError(f'arctanh({g}) is singular')
	return (const_ln(const(1 + g)) - const_ln(const(1 - g))).scale(HALF)


def const_arctan(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	g = GaussianRational.of(value)
	if g.is_real():
		return _arctan_rational(g.re)
	return const_arctanh(GaussianRational(0, 1) * g) * const(GaussianRational(0, -1))


_ARCSIN_SPECIAL = {Fraction(0): Fraction(0), HALF: Fraction(1, 6), Fraction(1): HALF}


def const_arcsin(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	g = GaussianRational.of(value)
	if g.is_real():
		r = g.re
		sign = -1 if r < 0 else 1
		if abs(r) in _ARCSIN_SPECIAL:
			return PI.scale(sign * _ARCSIN_SPECIAL[abs(r)])
		if abs(r) < 1:
			return _collect({FuncAtom('arcsin', GaussianRational(abs(r))): Fraction(1)}).scale(sign)
		return (PI.scale(HALF) - I * const_arccosh(abs(r))).scale(sign)
	return const_arcsinh(GaussianRational(0, 1) * g) * const(GaussianRational(0, -1))


def const_arccos(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	return PI.scale(HALF) - const_arcsin(value)


def const_arcsinh(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	g = GaussianRational.of(value)
	if g.is_zero():
		return ZERO
	if g.is_real():
		r = abs(g.re)
		positive = const_ln(const(r) + rational_power(r * r + 1, HALF))
		return positive if g.re > 0 else -positive
	if g.re == 0:
		y = g.im
		if abs(y) <= 1:
			return I * const_arcsin(y)
		sign = 1 if y > 0 else -1
		return (I * PI.scale(HALF) + const_arccosh(abs(y))).scale(sign)
	return _collect({FuncAtom('arcsinh', g): Fraction(1)})


def const_arccosh(value: Union[GaussianRational, int, Fraction]) -> ConstantExpr:
	g = GaussianRational.of(value)
	if g.is_real():
		r = g.re
		if r == 1:
			return ZERO
		if r > 1:
			return const_ln(const(r) + rational_power(r * r - 1, HALF))
		if r >= -1:
			return I * const_arccos(r)
		return const_ln(const(-r) + rational_power(r * r - 1, HALF)) + I * PI
	return _collect({FuncAtom('arccosh', g): Fraction(1)})


# Numeric evaluation


@dataclass(frozen=True, slots=True)
class ComplexFloat:
	"""A complex binary floating point value with its precision in bits."""

	value: mpmath.mpc
	precision: int

	@property
	def real(self) -> mpmath.mpf:
		return self.value.real

	@property
	def imag(self) -> mpmath.mpf:
		return self.value.imag

	def __abs__(self) -> mpmath.mpf:
		return abs(self.value)

	def __sub__(self, other: ComplexFloat) -> ComplexFloat:
		return ComplexFloat(self.value - other.value, min(self.precision, other.precision))

	def to_complex(self) -> complex:
		return complex(self.value)

	def __str__(self) -> str:
		return mpmath.nstr(self.value, max(6, int(self.precision * 0.301) - 2))


def check_precision(precision: int) -> int:
	if not MIN_PRECISION <= precision <= MAX_PRECISION:
		raise DomainError(f'Precision must be {MIN_PRECISION}-{MAX_PRECISION} bits, got {precision}')
	return precision


def const_eval(e: ConstantExpr, precision: int = DEFAULT_PRECISION) -> ComplexFloat:
	"""Evaluate a constant with principal branches and a few guard bits."""
	check_precision(precision)
	try:
		with mpmath.workprec(precision + _GUARD_BITS):
			value = mpmath.mpc(const(e).evaluate_mp())
	except ZeroDivisionError as e:
		raise EvaluationError('Division by zero') from e
	return ComplexFloat(value, precision)


def const_is_zero(e: ConstantExpr) -> bool:
	"""Zero test: structural, then a 256-bit numeric guard for multi-term sums."""
	e = const(e)
	if e.is_zero():
		return True
	if len(e.terms) == 1:
		return False
	with mpmath.workprec(GUARD_PRECISION):
		value = e.evaluate_mp()
		scale = e.term_magnitudes()
		return abs(value) <= scale * mpmath.mpf(2) ** (24 - GUARD_PRECISION)


def const_sign(e: ConstantExpr, part: Part = Part.RE) -> int:
	"""Sign of the real or imaginary part, 0 when it vanishes within the guard."""
	e = const(e)
	g = e.as_gaussian()
	if g is not None:
		x = g.re if part is Part.RE else g.im
		return (x > 0) - (x < 0)
	with mpmath.workprec(GUARD_PRECISION):
		value = e.evaluate_mp()
		x = value.real if part is Part.RE else value.imag
		if abs(x) <= e.term_magnitudes() * mpmath.mpf(2) ** (24 - GUARD_PRECISION):
			return 0
		return 1 if x > 0 else -1


def const_arg_over_pi(e: ConstantExpr) -> Optional[Fraction]:
	"""Exact principal arg/pi for monomials with axis or diagonal coefficients."""
	e = const(e)
	if e.is_zero():
		return Fraction(0)
	if len(e.terms) != 1:
		return None
	mono, coef = e.terms[0]
	_, unit, other = _split_monomial(mono)
	t = coef.arg_over_pi()
	if other or t is None:
		return None
	return mods(t + unit, 2)


def const_exp(e: ConstantExpr) -> ConstantExpr:
	"""exp of a constant; pi*i multiples and logarithms fold back into powers."""
	result = ONE
	for mono, coef in const(e).terms:
		if not mono:
			result = result * _collect({FuncAtom('exp', coef): Fraction(1)})
			continue
		if len(mono) == 1 and mono[0][1] == 1:
			atom = mono[0][0]
			if isinstance(atom, PiAtom) and coef.re == 0:
				result = result * unit_power(coef.im)
				continue
			if isinstance(atom, LogAtom) and coef.is_real():
				result = result * const_pow(atom.argument, coef.re)
				continue
		raise UnsupportedError(f'exp({const(e)}) has no closed form here')
	return result
