"""Shared vocabulary: modes, split levels, correction roles and case identifiers."""

from __future__ import annotations

from enum import Enum
from typing import Optional


class _Word(str, Enum):
	"""String-valued enum that prints as its value."""

	def __str__(self) -> str:
		return self.value


class Mode(_Word):
	"""How the expansion variable and fractional powers are interpreted."""

	COMPLEX = 'complex'
	REAL = 'real'
	REAL_BRANCH = 'real-branch'

	@classmethod
	def _members(cls) -> list[Mode]:
		"""Get all members as a list (workaround for ty type checker)."""
		return list(cls.__members__.values())

	@property
	def is_real(self) -> bool:
		"""Whether the variable is restricted to the real line."""
		return self is not Mode.COMPLEX


class SplitLevel(_Word):
	"""How far ln(c*z^alpha) is distributed."""

	NONE = 'none'
	COEF = 'coef'
	FULL = 'full'

	@classmethod
	def _members(cls) -> list[SplitLevel]:
		"""Get all members as a list (workaround for ty type checker)."""
		return list(cls.__members__.values())


class Role(_Word):
	"""What a piecewise-constant correction stands for."""

	UPSILON = 'Upsilon'
	OMEGA = 'Omega'
	OMEGA_SIMPLIFIED = 'omega'
	OMEGA_REAL = 'omega_real'
	OMEGA_PI0 = 'omega_pi0'
	PHI = 'Phi'
	PHI_REAL = 'phi'
	PSI = 'Psi'
	PSI_REAL = 'psi'
	XI = 'xi'
	INVERSE = 'inverse-additive'

	@property
	def is_omega(self) -> bool:
		"""Omega-like roles vanish at z = 0."""
		return self in (Role.OMEGA, Role.OMEGA_SIMPLIFIED, Role.OMEGA_REAL, Role.OMEGA_PI0)


class Relop(_Word):
	"""Comparison operators used by conditions."""

	LE = '<='
	LT = '<'
	GE = '>='
	GT = '>'
	EQ = '='

	@property
	def closed(self) -> bool:
		"""Whether equality satisfies the comparison."""
		return self in (Relop.LE, Relop.GE, Relop.EQ)

	def holds(self, sign: int) -> bool:
		"""Decide ``lhs relop rhs`` from the sign of ``lhs - rhs``."""
		match self:
			case Relop.LE:
				return sign <= 0
			case Relop.LT:
				return sign < 0
			case Relop.GE:
				return sign >= 0
			case Relop.GT:
				return sign > 0
			case _:
				return sign == 0


class Part(_Word):
	"""Real or imaginary part."""

	RE = 'Re'
	IM = 'Im'


class Func(_Word):
	"""Functions accepted by the expression grammar."""

	LN = 'ln'
	EXP = 'exp'
	SQRT = 'sqrt'
	ARCTAN = 'arctan'
	ARCTANH = 'arctanh'
	ARCSIN = 'arcsin'
	ARCCOS = 'arccos'
	ARCSINH = 'arcsinh'
	ARCCOSH = 'arccosh'

	@classmethod
	def _members(cls) -> list[Func]:
		"""Get all members as a list (workaround for ty type checker)."""
		return list(cls.__members__.values())

	@classmethod
	def from_name(cls, name: str) -> Optional[Func]:
		"""Look a function up by name, accepting ``log`` and ``atan``-style aliases."""
		aliases = {
			'log': 'ln',
			'atan': 'arctan',
			'atanh': 'arctanh',
			'asin': 'arcsin',
			'acos': 'arccos',
			'asinh': 'arcsinh',
			'acosh': 'arccosh',
		}
		name = aliases.get(name, name)
		for func in cls._members():
			if func.value == name:
				return func
		return None


class InverseCase(_Word):
	"""Which branch analysis produced an inverse-function degree-0 term."""

	ANALYTIC = 'analytic'
	ARCTANH_NEG_ALPHA = 'arctanh-neg-alpha'
	ARCTAN_NINE_CASE = 'arctan-9-case'
	ASINH_T = 'asinh-T'
	ASINH_PQ = 'asinh-PQ'
	ASINH_UGLY = 'asinh-ugly'
	ASINH_WN = 'asinh-WN'
	ACOSH_J = 'acosh-J'
	ACOSH_K = 'acosh-K'
	ACOSH_BE = 'acosh-BE'
	ACOSH_C = 'acosh-C'
	ACOSH_D1M = 'acosh-D1M'
	ACOSH_D2G = 'acosh-D2G'


class ArccoshForm(_Word):
	"""Which logarithmic identity defines the arccosh expansion."""

	TWO_ROOTS = 'two-roots'
	PRODUCT = 'product'


class Assume(_Word):
	"""What the caller asserts about the expansion variable."""

	NONE = 'none'
	REAL = 'real'
	POSITIVE = 'positive'
	ARG_RANGE = 'arg-range'

	@classmethod
	def _members(cls) -> list[Assume]:
		"""Get all members as a list (workaround for ty type checker)."""
		return list(cls.__members__.values())


class SweepKind(_Word):
	"""Angular sweeps circle the origin; radial sweeps cross it along a critical direction."""

	ANGULAR = 'angular'
	RADIAL = 'radial'
