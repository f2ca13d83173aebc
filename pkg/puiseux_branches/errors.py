"""Exception hierarchy for series expansion, evaluation and verification."""

from __future__ import annotations

from typing import Optional


class SeriesError(ValueError):
	"""Base class for every error raised by puiseux_branches."""


class DomainError(SeriesError):
	"""An operation was applied outside its mathematical domain."""


class UsageError(SeriesError):
	"""Operands that cannot be combined (different variables or modes)."""


class UnsupportedError(SeriesError):
	"""A construct outside what the expander can represent."""


class EssentialSingularityError(UnsupportedError):
	"""exp of a series with a negative dominant exponent."""


class NotSmallSeriesError(SeriesError):
	"""A Maclaurin composition was requested for a series that does not vanish at 0."""


class SingularAtZeroError(SeriesError):
	"""A series with negative exponents or logarithms was evaluated at 0."""


class EvaluationError(SeriesError):
	"""Numeric evaluation failed (division by zero, logarithm of zero)."""


class SeriesParseError(SeriesError):
	"""Syntax error in an expression, carrying the byte offset when known."""

	def __init__(self, message: str, offset: Optional[int] = None) -> None:
		self.offset = offset
		if offset is not None:
			message = f'{message} (at byte {offset})'
		super().__init__(message)


class VerificationFailure(SeriesError):
	"""A sweep found a discrepancy between the series and the oracle."""


class BoundaryUndecidableWarning(UserWarning):
	"""A comparison that stayed within rounding at the highest precision; logged, not raised."""

	def __init__(self, point: object, text: str) -> None:
		self.point = point
		self.text = text
		super().__init__(f'Boundary-undecidable comparison at {point}: {text}')
