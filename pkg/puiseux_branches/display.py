"""Rich tables and panels for expansions, sweeps and critical angles."""

from typing import Optional

from rich.panel import Panel
from rich.table import Table

from . import console, logger
from .branchlog import CriticalAngleSet
from .exactcore import format_rational
from .frontend.expand import Expansion
from .frontend.render import correction_roles, format_series
from .inversefn import InverseCaseTag
from .models import SweepReport


def _error_text(x: Optional[float]) -> str:
	return '-' if x is None else f'{x:.3e}'


def _side_text(ic: Optional[int]) -> str:
	if ic is None:
		return '[yellow]?[/yellow]'
	return {1: '+', -1: '-', 0: '0'}[ic]


def display_expansion(expansion: Expansion, tag: Optional[InverseCaseTag] = None) -> None:
	"""Show the series with its delivered order and the corrections in its constant term."""
	request = expansion.request
	series = expansion.series
	lines = [format_series(series, request.factored), '']
	delivered = 'exact' if expansion.delivered is None else f'o({request.var}^{format_rational(expansion.delivered)})'
	if expansion.complete:
		lines.append(f'[dim]Order:[/dim] {delivered}')
	else:
		lines.append(f'[yellow]Order: {delivered} (requested {request.order})[/yellow]')
	roles = correction_roles(series)
	lines.append(f'[dim]Corrections:[/dim] {", ".join(str(r) for r in roles) if roles else "none"}')
	if tag is not None:
		lines.append(f'[dim]Case:[/dim] {tag.render()}')
	mode = f'{request.mode}, naive' if request.naive else str(request.mode)
	console.print(Panel('\n'.join(lines), title=f'{request.text} ({mode})', border_style='green'))


def display_sweep_summary(report: SweepReport) -> None:
	"""One row per radius: samples, excluded points, worst errors and the jump flag."""
	if not report.radii:
		logger.warning('No samples taken.')
		return

	table = Table(title=f'🔎 Sweep of {report.expression}', show_header=True, header_style='bold cyan')
	table.add_column('Radius', justify='right')
	table.add_column('Samples', justify='right')
	table.add_column('Excluded', justify='right', style='dim')
	table.add_column('Max abs err', justify='right')
	table.add_column('Max rel err', justify='right')
	table.add_column('Bound', justify='right', style='dim')
	table.add_column('Jump', justify='center')

	for summary in report.radii:
		jump = '[red]✗ jump[/red]' if summary.jump else '[green]✓[/green]'
		table.add_row(
			f'{summary.radius:g}',
			str(summary.samples),
			str(summary.excluded),
			_error_text(summary.max_abs_err),
			_error_text(summary.max_rel_err),
			_error_text(summary.truncation_bound),
			jump,
		)

	console.print(table)
	if report.jump_detected and report.jump_location is not None:
		x, y = report.jump_location
		logger.warning('Jump of %.6g near z = %.6g%+.6gi', report.jump_gap or 0.0, x, y)


def display_critical_angles(report: list[tuple[str, CriticalAngleSet]]) -> None:
	"""Critical directions of each logand, with the side of the tail along each."""
	table = Table(title='📐 Critical angles', show_header=True, header_style='bold cyan')
	table.add_column('Operand')
	table.add_column('θ_c', justify='right')
	table.add_column('I_c', justify='center')
	table.add_column('Role', style='dim')

	for label, angles in report:
		if not angles.known:
			table.add_row(label, '[yellow]undecided[/yellow]', '', '')
		elif not angles.angles:
			table.add_row(label, '[dim]none[/dim]', '', '')
		for angle in angles.angles:
			table.add_row(label, f'{format_rational(angle.theta)}*pi', _side_text(angle.ic), str(angle.role))

	console.print(table)
