"""Pydantic models for settings, expansion requests and sweep reports."""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Optional

from pydantic import AfterValidator, BaseModel, Field, field_serializer, model_validator

from .exactcore import DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION
from .piecewise import Constraint
from .series import LOG_DEGREE_CAP
from .vocabulary import ArccoshForm, Assume, Mode, SplitLevel, SweepKind

MAX_RADIUS = Fraction(1, 2)


def _rational(text: str) -> str:
	try:
		Fraction(text.strip())
	except (ValueError, ZeroDivisionError) as e:
		raise ValueError(f"'{text}' is not a rational number") from e
	return text.strip()


def _radius(text: str) -> str:
	r = Fraction(_rational(text))
	if not 0 < r < MAX_RADIUS:
		raise ValueError(f'Radius {text} must lie in (0, 1/2)')
	return text.strip()


Rational = Annotated[str, AfterValidator(_rational)]
Radius = Annotated[str, AfterValidator(_radius)]


class Settings(BaseModel):
	"""Persisted defaults for the spx command."""

	precision: int = Field(default=DEFAULT_PRECISION, ge=MIN_PRECISION, le=MAX_PRECISION)
	order: Rational = '4'
	mode: Mode = Mode.COMPLEX
	split: SplitLevel = SplitLevel.NONE
	radii: list[Radius] = Field(default_factory=lambda: ['1/100', '1/1000'], min_length=1)
	angles: int = Field(default=720, ge=1)
	max_log_degree: int = Field(default=LOG_DEGREE_CAP, ge=1)
	factored: bool = False
	arccosh_form: ArccoshForm = ArccoshForm.TWO_ROOTS


class ExpandRequest(BaseModel):
	"""One expansion: expression text, variable, target order and assumptions."""

	text: str = Field(min_length=1)
	var: str = Field(default='z', pattern=r'^[A-Za-z_][A-Za-z0-9_]*$')
	order: Rational = '4'
	mode: Mode = Mode.COMPLEX
	split: SplitLevel = SplitLevel.NONE
	assume: Assume = Assume.NONE
	arg_lo: Optional[Rational] = None
	arg_hi: Optional[Rational] = None
	factored: bool = False
	naive: bool = False
	max_log_degree: int = Field(default=LOG_DEGREE_CAP, ge=1)

	@model_validator(mode='after')
	def validate_assumption(self) -> ExpandRequest:
		"""An arg range needs both ends and only makes sense for a complex variable."""
		if self.var in ('i', 'I', 'pi', 'Pi'):
			raise ValueError(f"'{self.var}' is reserved for a constant")
		if self.assume is Assume.ARG_RANGE:
			if self.arg_lo is None or self.arg_hi is None:
				raise ValueError('arg-range needs both LO and HI')
			if self.mode.is_real:
				raise ValueError('arg-range applies to complex mode only')
			if not -1 <= Fraction(self.arg_lo) < Fraction(self.arg_hi) <= 1:
				raise ValueError('arg-range must satisfy -1 <= LO < HI <= 1 (units of pi)')
		if self.assume is Assume.POSITIVE and self.mode is Mode.COMPLEX:
			raise ValueError("'positive' needs a real mode")
		return self

	@property
	def n(self) -> Fraction:
		return Fraction(self.order)

	@property
	def constraint(self) -> Constraint:
		match self.assume:
			case Assume.POSITIVE:
				return Constraint.positive()
			case Assume.REAL:
				return Constraint(real=True)
			case Assume.ARG_RANGE:
				assert self.arg_lo is not None and self.arg_hi is not None
				return Constraint(lo=Fraction(self.arg_lo), hi=Fraction(self.arg_hi))
		return Constraint.for_mode(self.mode)


class SweepConfig(BaseModel):
	"""Where to compare the series with the principal-branch oracle."""

	radii: list[Radius] = Field(default_factory=lambda: ['1/100', '1/1000'], min_length=1)
	angles: int = Field(default=720, ge=1)
	critical_directions: list[Rational] = Field(default_factory=list)
	radial_samples: int = Field(default=40, ge=2)
	precision: int = Field(default=DEFAULT_PRECISION, ge=MIN_PRECISION, le=MAX_PRECISION)
	relative: bool = False
	clip: float = Field(default=1e-30, gt=0)
	arccosh_form: ArccoshForm = ArccoshForm.TWO_ROOTS

	@property
	def radius_values(self) -> list[Fraction]:
		return [Fraction(r) for r in self.radii]


class SweepRow(BaseModel):
	"""One sample; errors are None where the oracle or the series is undefined."""

	kind: SweepKind = SweepKind.ANGULAR
	r: float
	theta: float
	re: float
	im: float
	abs_err: Optional[float] = None
	rel_err: Optional[float] = None
	case_id: str = ''

	@property
	def excluded(self) -> bool:
		return self.abs_err is None


class RadiusSummary(BaseModel):
	"""Per-radius figures of an angular sweep."""

	radius: float
	samples: int = Field(ge=0)
	excluded: int = Field(ge=0)
	max_abs_err: Optional[float] = None
	max_rel_err: Optional[float] = None
	truncation_bound: float = Field(ge=0)
	jump: bool = False


class SweepReport(BaseModel):
	"""All samples of a verification run and what they add up to."""

	expression: str
	series: str
	order: Optional[Rational] = None
	naive: bool = False
	rows: list[SweepRow] = Field(default_factory=list)
	radii: list[RadiusSummary] = Field(default_factory=list)
	max_abs_err: Optional[float] = None
	max_rel_err: Optional[float] = None
	jump_detected: bool = False
	jump_location: Optional[tuple[float, float]] = None
	jump_gap: Optional[float] = None

	@field_serializer('rows', when_used='json')
	def serialize_rows(self, rows: list[SweepRow]) -> list[dict]:
		"""Leave undefined errors out of the JSON rows instead of writing nulls."""
		return [row.model_dump(mode='json', exclude_none=True) for row in rows]

	@property
	def samples(self) -> int:
		return len(self.rows)

	@property
	def excluded(self) -> int:
		return sum(1 for row in self.rows if row.excluded)
