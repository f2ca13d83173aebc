"""Numeric checks of expansions against a direct principal-branch evaluation.

A corrected series agrees with the oracle up to its truncation error at every
sample near 0. A branch bug shows up as a jump: neighbouring samples whose
errors differ by a factor over ten while the larger one is far above the
truncation bound.
"""

from __future__ import annotations

import csv
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import IO, Optional, Union

import mpmath

from . import logger
from .errors import EvaluationError, SeriesError, VerificationFailure
from .exactcore import (
	DEFAULT_PRECISION,
	MAX_PRECISION,
	KAHAN_FUNCTIONS,
	ComplexFloat,
	check_precision,
	kahan_arccosh_product,
	principal_ln,
	principal_power,
)
from .frontend.expand import Expansion
from .frontend.expr import Add, Call, Div, Expr, ImagUnit, Mul, Neg, Num, Pi, Pow, Sub, Var
from .frontend.render import format_series
from .models import RadiusSummary, SweepConfig, SweepReport, SweepRow
from .piecewise import CorrectionTerm, Point, correction_eval, unit_eval
from .series import Series
from .vocabulary import ArccoshForm, Func, Mode, SweepKind

CSV_HEADER = ('r', 'theta', 're', 'im', 'abs_err', 'rel_err', 'case_id')
UNDEFINED = 'undefined'
JUMP_RATIO = 10
_GUARD_BITS = 16


def _mpf(q: Fraction) -> mpmath.mpf:
	return mpmath.mpf(q.numerator) / q.denominator


class _Oracle:
	"""Evaluates an expression tree directly, keeping the largest intermediate magnitude."""

	def __init__(self, z: mpmath.mpc, mode: Mode, arccosh_form: ArccoshForm) -> None:
		self.z = z
		self.real_branch = mode is Mode.REAL_BRANCH
		self.arccosh_form = arccosh_form
		self.peak = mpmath.mpf(0)

	def __call__(self, e: Expr) -> mpmath.mpc:
		value = mpmath.mpc(self._eval(e))
		self.peak = max(self.peak, abs(value))
		return value

	def _eval(self, e: Expr) -> mpmath.mpc:
		match e:
			case Num(value=v):
				return mpmath.mpc(_mpf(v))
			case ImagUnit():
				return mpmath.mpc(0, 1)
			case Pi():
				return mpmath.mpc(mpmath.pi)
			case Var():
				return self.z
			case Neg(arg=a):
				return -self(a)
			case Add(left=a, right=b):
				return self(a) + self(b)
			case Sub(left=a, right=b):
				return self(a) - self(b)
			case Mul(left=a, right=b):
				return self(a) * self(b)
			case Div(left=a, right=b):
				denominator = self(b)
				if denominator == 0:
					raise EvaluationError('Division by zero')
				return self(a) / denominator
			case Pow(base=b, exponent=q):
				return principal_power(self(b), q, self.real_branch)
			case Call(func=func, arg=a):
				return self._call(func, self(a))
		raise EvaluationError(f'Cannot evaluate {e!r}')

	def _call(self, func: Func, w: mpmath.mpc) -> mpmath.mpc:
		match func:
			case Func.LN:
				return principal_ln(w)
			case Func.EXP:
				return mpmath.exp(w)
			case Func.SQRT:
				return principal_power(w, Fraction(1, 2))
			case Func.ARCCOSH if self.arccosh_form is ArccoshForm.PRODUCT:
				return kahan_arccosh_product(w)
		try:
			return KAHAN_FUNCTIONS[func.value](w)
		except ZeroDivisionError as e:
			raise EvaluationError(f'{func}({mpmath.nstr(w, 8)}) is singular') from e


def oracle_eval(
	expr: Expr,
	z0: object,
	precision: int = DEFAULT_PRECISION,
	mode: Mode = Mode.COMPLEX,
	arccosh_form: ArccoshForm = ArccoshForm.TWO_ROOTS,
) -> ComplexFloat:
	"""Principal-branch value of an expression at a point, arg(0) = 0.

	Precision is doubled once when the result is much smaller than an
	intermediate value.

	Raises:
		EvaluationError: where the expression is undefined.
	"""
	check_precision(precision)
	z = Point.of(z0).mp()
	for attempt in range(2):
		with mpmath.workprec(precision + _GUARD_BITS):
			oracle = _Oracle(mpmath.mpc(z), mode, arccosh_form)
			try:
				value = oracle(expr)
			except ZeroDivisionError as e:
				raise EvaluationError('Division by zero') from e
			cancelled = abs(value) < mpmath.mpf(2) ** (-precision // 2) * oracle.peak
		if attempt or not cancelled or precision >= MAX_PRECISION:
			break
		precision = min(2 * precision, MAX_PRECISION)
		logger.debug('Cancellation in the oracle, escalating to %d bits', precision)
	return ComplexFloat(value, precision)


def compare_at(
	expansion: Expansion, z0: object, precision: int = DEFAULT_PRECISION, arccosh_form: ArccoshForm = ArccoshForm.TWO_ROOTS
) -> tuple[ComplexFloat, ComplexFloat]:
	"""(series value, oracle value) at a point."""
	mode = expansion.request.mode
	return expansion.series.evaluate(z0, precision), oracle_eval(expansion.expr, z0, precision, mode, arccosh_form)


# Sweeps


def truncation_bound(series: Series, r: Fraction, precision: int = DEFAULT_PRECISION) -> float:
	"""Size of the neglected terms at radius r, r^n * max(1, |ln r|)^d, plus rounding."""
	rounding = 2.0 ** (-precision / 2)
	if series.order is None:
		return rounding
	degree = max((c.log_degree for _, c in series.materialize().terms), default=0)
	x = float(r)
	return x ** float(series.order) * max(1.0, abs(math.log(x))) ** degree + rounding


def _case_id(series: Series, point: Point, precision: int) -> str:
	parts = []
	for atom in series.coefficient(0).specials():
		if isinstance(atom, CorrectionTerm):
			parts.append(f'{atom.role}={correction_eval(atom, point, precision)}')
	if series.global_factor is not None:
		parts.append(f'L={unit_eval(series.global_factor, point, precision)}')
	return ';'.join(parts)


def _sample(
	expansion: Expansion, point: Point, r: float, theta: float, kind: SweepKind, cfg: SweepConfig
) -> tuple[SweepRow, Optional[complex]]:
	z = point.mp()
	row = SweepRow(kind=kind, r=r, theta=theta, re=float(z.real), im=float(z.imag))
	try:
		u = oracle_eval(expansion.expr, point, cfg.precision, expansion.request.mode, cfg.arccosh_form)
		U = expansion.series.evaluate(point, cfg.precision)
		case_id = _case_id(expansion.series, point, cfg.precision)
	except SeriesError as e:
		logger.debug('Excluding %s: %s', point.exact, e)
		return row, None
	difference = U.value - u.value
	abs_err = float(abs(difference))
	magnitude = float(abs(u))
	rel_err = abs_err / magnitude if magnitude > cfg.clip else None
	row = row.model_copy(update={'abs_err': abs_err, 'rel_err': rel_err, 'case_id': case_id})
	return row, complex(difference)


def _metric(row: SweepRow, relative: bool) -> Optional[float]:
	if relative and row.rel_err is not None:
		return row.rel_err
	return row.abs_err


def _find_jump(
	rows: list[SweepRow], differences: list[Optional[complex]], bound: float, relative: bool, cyclic: bool
) -> Optional[tuple[int, int]]:
	count = len(rows)
	pairs = [(k, k + 1) for k in range(count - 1)]
	if cyclic and count > 2:
		pairs.append((count - 1, 0))
	for i, j in pairs:
		a, b = _metric(rows[i], relative), _metric(rows[j], relative)
		if a is None or b is None or differences[i] is None or differences[j] is None:
			continue
		lo, hi = min(a, b), max(a, b)
		if hi > JUMP_RATIO * bound and (lo == 0 or hi / lo > JUMP_RATIO):
			return i, j
	return None


def _on_circle(r: Fraction, turn: Fraction) -> Point:
	with mpmath.workprec(2 * DEFAULT_PRECISION):
		x = _mpf(r)
		angle = _mpf(turn)
		return Point.of(mpmath.mpc(x * mpmath.cospi(angle), x * mpmath.sinpi(angle)))


def run_sweeps(expansion: Expansion, cfg: Optional[SweepConfig] = None) -> SweepReport:
	"""Angular sweeps at each radius, then radial sweeps through 0 along critical directions."""
	cfg = cfg or SweepConfig()
	series = expansion.series
	rows: list[SweepRow] = []
	summaries: list[RadiusSummary] = []
	jump: Optional[tuple[SweepRow, SweepRow, float]] = None

	def sweep(samples: list[tuple[Point, float, float]], kind: SweepKind, bound: float) -> tuple[list[SweepRow], bool]:
		nonlocal jump
		sampled = [_sample(expansion, point, r, theta, kind, cfg) for point, r, theta in samples]
		swept = [row for row, _ in sampled]
		differences = [d for _, d in sampled]
		found = _find_jump(swept, differences, bound, cfg.relative, cyclic=kind is SweepKind.ANGULAR)
		if found is not None and jump is None:
			i, j = found
			gap = abs(differences[i] - differences[j])  # type: ignore[operator]
			jump = (swept[i], swept[j], gap)
		return swept, found is not None

	real = expansion.request.mode.is_real
	for r in cfg.radius_values:
		bound = truncation_bound(series, r, cfg.precision)
		if real:
			turns = [Fraction(0), Fraction(1)]
		else:
			turns = [1 - Fraction(2 * k, cfg.angles) for k in range(cfg.angles)]
		samples = [(_on_circle(r, t), float(r), float(t) * math.pi) for t in turns]
		swept, jumped = sweep(samples, SweepKind.ANGULAR, bound)
		rows.extend(swept)
		defined = [row for row in swept if not row.excluded]
		summaries.append(
			RadiusSummary(
				radius=float(r),
				samples=len(swept),
				excluded=len(swept) - len(defined),
				max_abs_err=max((row.abs_err for row in defined if row.abs_err is not None), default=None),
				max_rel_err=max((row.rel_err for row in defined if row.rel_err is not None), default=None),
				truncation_bound=bound,
				jump=jumped,
			)
		)

	outer = max(cfg.radius_values)
	bound = truncation_bound(series, outer, cfg.precision)
	for direction in (Fraction(d) for d in cfg.critical_directions):
		steps = range(-cfg.radial_samples, cfg.radial_samples + 1)
		samples = []
		for k in steps:
			if k == 0:
				continue
			r = outer * Fraction(k, cfg.radial_samples)
			samples.append((_on_circle(r, direction), float(r), float(direction) * math.pi))
		swept, _ = sweep(samples, SweepKind.RADIAL, bound)
		rows.extend(swept)

	defined = [row for row in rows if not row.excluded]
	report = SweepReport(
		expression=expansion.request.text,
		series=format_series(series),
		order=None if series.order is None else str(series.order),
		naive=expansion.request.naive,
		rows=rows,
		radii=summaries,
		max_abs_err=max((row.abs_err for row in defined if row.abs_err is not None), default=None),
		max_rel_err=max((row.rel_err for row in defined if row.rel_err is not None), default=None),
		jump_detected=jump is not None,
		jump_location=None if jump is None else (jump[0].re, jump[0].im),
		jump_gap=None if jump is None else jump[2],
	)
	if jump is not None:
		logger.warning('Jump of %.6g between z=%s and z=%s', jump[2], (jump[0].re, jump[0].im), (jump[1].re, jump[1].im))
	return report


# Output


def _number(x: Optional[float]) -> str:
	return UNDEFINED if x is None else format(x, '.17g')


def _write_csv(report: SweepReport, stream: IO[str]) -> None:
	writer = csv.writer(stream, lineterminator='\n')
	writer.writerow(CSV_HEADER)
	for row in report.rows:
		writer.writerow(
			(
				_number(row.r),
				_number(row.theta),
				_number(row.re),
				_number(row.im),
				_number(row.abs_err),
				_number(row.rel_err),
				row.case_id,
			)
		)
	stream.write(f'# expression: {report.expression}\n')
	stream.write(f'# series: {report.series}\n')
	stream.write(f'# max_abs_err: {_number(report.max_abs_err)}\n')
	stream.write(f'# max_rel_err: {_number(report.max_rel_err)}\n')
	stream.write(f'# jump_detected: {str(report.jump_detected).lower()}\n')
	if report.jump_location is not None:
		stream.write(f'# jump_location: {_number(report.jump_location[0])},{_number(report.jump_location[1])}\n')
		stream.write(f'# jump_gap: {_number(report.jump_gap)}\n')


def emit_csv(report: SweepReport, path: Union[Path, str, None] = None) -> None:
	"""Write the samples as CSV (radius-major, angle-minor) with a commented summary.

	Writes to standard output when no path is given.
	"""
	if path is None or str(path) == '-':
		_write_csv(report, sys.stdout)
		return
	target = Path(path)
	try:
		with target.open('w', encoding='utf-8', newline='') as stream:
			_write_csv(report, stream)
	except OSError as e:
		raise OSError(f'Failed to write CSV to {target}: {e}') from e


def emit_json(report: SweepReport) -> str:
	return report.model_dump_json(indent=2)


def require_no_jump(report: SweepReport) -> None:
	"""Raise when a sweep crossed a branch jump."""
	if not report.jump_detected:
		return
	x, y = report.jump_location or (math.nan, math.nan)
	gap = math.nan if report.jump_gap is None else report.jump_gap
	raise VerificationFailure(f'Branch jump in {report.expression} near {x:.6g}{y:+.6g}i, gap {gap:.6g}')


__all__ = [
	'CSV_HEADER',
	'compare_at',
	'emit_csv',
	'emit_json',
	'oracle_eval',
	'require_no_jump',
	'run_sweeps',
	'truncation_bound',
]
