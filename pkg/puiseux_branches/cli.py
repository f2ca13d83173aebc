"""Command-line interface for branch-correct series expansion."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError
from rich.panel import Panel

from . import __version__, console, enable_debug_logging, logger
from .config import (
	config_exists,
	create_settings_interactive,
	get_config_path,
	load_settings,
	save_settings,
)
from .display import display_critical_angles, display_expansion, display_sweep_summary
from .errors import SeriesError, SeriesParseError, VerificationFailure
from .exactcore import GaussianRational
from .frontend import Expander, branch_report, expand, format_series, parse
from .models import ExpandRequest, Settings, SweepConfig
from .verify import compare_at, emit_csv, emit_json, require_no_jump, run_sweeps
from .vocabulary import ArccoshForm, Assume, Mode, SplitLevel

EXIT_PARSE = 1
EXIT_UNSUPPORTED = 2
EXIT_VERIFICATION = 3


class RationalType(click.ParamType):
	"""Accepts integers, p/q fractions and exact decimals."""

	name = 'rational'

	def convert(self, value: object, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> str:
		if isinstance(value, Fraction):
			return str(value)
		text = str(value).strip()
		try:
			Fraction(text)
		except (ValueError, ZeroDivisionError):
			self.fail(f"'{value}' is not a rational number", param, ctx)
		return text


class PointType(click.ParamType):
	"""A point of the complex plane written as a constant expression, e.g. ``-1/100+i/10``."""

	name = 'point'

	def convert(
		self, value: object, param: Optional[click.Parameter], ctx: Optional[click.Context]
	) -> GaussianRational:
		if isinstance(value, GaussianRational):
			return value
		try:
			series = Expander().expand(parse(str(value), var='_'), 0)
			constant = series.coefficient(0).as_constant()
			point = None if constant is None or len(series.terms) > 1 else constant.as_gaussian()
		except SeriesError as e:
			self.fail(f"'{value}': {e}", param, ctx)
		if point is None:
			self.fail(f"'{value}' is not a Gaussian rational", param, ctx)
		return point


RATIONAL = RationalType()
POINT = PointType()

_MODES = [m.value for m in Mode._members()]
_SPLITS = [s.value for s in SplitLevel._members()]


def expansion_options(func):
	"""Options shared by every command that expands an expression."""
	options = [
		click.option('--expr', '-e', 'text', required=True, help='Expression, e.g. "ln(z^2+z^3)".'),
		click.option('--var', default='z', show_default=True, help='Expansion variable.'),
		click.option('--order', '-n', type=RATIONAL, help='Truncation order n of o(var^n).'),
		click.option('--mode', '-m', type=click.Choice(_MODES), help='Variable mode.'),
		click.option('--split', '-s', type=click.Choice(_SPLITS), help='How far ln(c*z^alpha) is split.'),
		click.option(
			'--assume',
			type=click.Choice([a.value for a in Assume._members()]),
			default=Assume.NONE.value,
			help='Assumption on the variable; arg-range takes its bounds from --arg-range.',
		),
		click.option(
			'--arg-range',
			nargs=2,
			type=RATIONAL,
			default=None,
			help='Restrict arg(var) to (LO*pi, HI*pi]; implies --assume arg-range.',
		),
		click.option('--naive', is_flag=True, help='Textbook expansion without branch corrections.'),
	]
	for option in reversed(options):
		func = option(func)
	return func


def _settings(ctx: click.Context) -> Settings:
	return load_settings(ctx.obj.get('config_path'))


def _request(settings: Settings, **options) -> ExpandRequest:
	arg_range = options.pop('arg_range', None)
	assume = Assume(options.pop('assume', Assume.NONE.value))
	if arg_range:
		if assume not in (Assume.NONE, Assume.ARG_RANGE):
			raise click.UsageError(f'--arg-range cannot be combined with --assume {assume.value}')
		assume = Assume.ARG_RANGE
	elif assume is Assume.ARG_RANGE:
		raise click.UsageError('--assume arg-range needs --arg-range LO HI')
	return ExpandRequest(
		text=options['text'],
		var=options['var'],
		order=options.get('order') or settings.order,
		mode=Mode(options.get('mode') or settings.mode),
		split=SplitLevel(options.get('split') or settings.split),
		assume=assume,
		arg_lo=arg_range[0] if arg_range else None,
		arg_hi=arg_range[1] if arg_range else None,
		factored=options.get('factored') or settings.factored,
		naive=options.get('naive', False),
		max_log_degree=settings.max_log_degree,
	)


@contextmanager
def _exit_codes(ctx: click.Context) -> Iterator[None]:
	"""Log library errors and leave with the matching exit code."""
	try:
		yield
	except SeriesParseError as e:
		logger.error('%s', e)
		ctx.exit(EXIT_PARSE)
	except VerificationFailure as e:
		logger.error('✗ %s', e)
		ctx.exit(EXIT_VERIFICATION)
	except ValidationError as e:
		logger.error('Invalid request: %s', e)
		ctx.exit(EXIT_PARSE)
	except (SeriesError, OSError) as e:
		logger.error('%s', e)
		ctx.exit(EXIT_UNSUPPORTED)
	except ValueError as e:
		logger.error('%s', e)
		ctx.exit(EXIT_PARSE)


@click.group(invoke_without_command=True, context_settings={'help_option_names': ['-h', '--help']})
@click.option('--version', '-v', is_flag=True, help='Show version and exit.')
@click.option('--config', '-c', type=click.Path(exists=True), help='Settings file path.')
@click.option('--verbose', is_flag=True, help='Enable verbose/debug logging.')
@click.pass_context
def main(ctx: click.Context, version: bool, config: Optional[str], verbose: bool) -> None:
	"""∑ spx: branch-correct Puiseux series about 0

	Expands logarithms, fractional powers and inverse functions of series
	with the piecewise corrections that keep them equal to the principal
	branch near 0.

	\b
	Quick start:
		spx expand -e "ln(z^2+z^3)" -n 4
		spx verify -e "(z^2+z^3)^(3/2)" -n 6
		spx angles -e "ln(-z^2+z^3)"

	\b
	Settings file: ~/.config/spx.json (optional)
	"""
	if verbose:
		enable_debug_logging()
	ctx.ensure_object(dict)
	ctx.obj['config_path'] = Path(config) if config else None

	if version:
		logger.info('puiseux-branches version %s', __version__)
		return

	if ctx.invoked_subcommand is None:
		click.echo(ctx.get_help())


@main.command(context_settings={'help_option_names': ['-h', '--help']})
@click.option('--force', '-f', is_flag=True, help='Overwrite existing settings.')
@click.option('--interactive', '-i', is_flag=True, help='Prompt for each setting.')
@click.pass_context
def init(ctx: click.Context, force: bool, interactive: bool) -> None:
	"""Write a settings file with the defaults.

	Creates ~/.config/spx.json (or the file given with -c).
	"""
	config_path = ctx.obj.get('config_path') or get_config_path()

	if config_exists(config_path) and not force:
		logger.warning('Settings already exist at %s', config_path)
		logger.info('Use --force to overwrite.')
		return

	settings = create_settings_interactive() if interactive else Settings()
	with _exit_codes(ctx):
		save_settings(settings, config_path)

	console.print(
		Panel(
			f'[green]✓ Settings written[/green]\n\n'
			f'File: [cyan]{config_path}[/cyan]\n\n'
			f"[dim]Run 'spx expand -e \"ln(z^2+z^3)\"' to try it.[/dim]",
			title='🎉 Ready',
			border_style='green',
		)
	)


@main.command('expand', context_settings={'help_option_names': ['-h', '--help']})
@expansion_options
@click.option('--factored', is_flag=True, help='Keep the unit factor in front of the series.')
@click.option('--plain', '-p', is_flag=True, help='Print only the series text.')
@click.option('--at', 'points', type=POINT, multiple=True, help='Compare with the oracle at a point.')
@click.pass_context
def expand_command(ctx: click.Context, plain: bool, points: tuple[GaussianRational, ...], **options) -> None:
	"""Expand an expression about 0.

	\b
	Examples:
		spx expand -e "ln(z^2+z^3)" -n 4
		spx expand -e "(z^2+z^3)^(3/2)" -n 6 --factored
		spx expand -e "arctanh(-2+ln(z)*z)" -n 3 --at=-1/100
		spx expand -e "x^(4/3)+x^2" --var x -m real-branch
	"""
	with _exit_codes(ctx):
		settings = _settings(ctx)
		request = _request(settings, **options)
		expansion = expand(request)
		if plain:
			click.echo(format_series(expansion.series, request.factored))
		else:
			display_expansion(expansion, expansion.inverse_tag())
		for point in points:
			value, oracle = compare_at(expansion, point, settings.precision, settings.arccosh_form)
			logger.info('%s = %s: series %s, oracle %s, |diff| %s', request.var, point, value, oracle, abs(value - oracle))


@main.command(context_settings={'help_option_names': ['-h', '--help']})
@expansion_options
@click.option('--radius', '-r', 'radii', type=RATIONAL, multiple=True, help='Sweep radius (repeatable).')
@click.option('--angles', '-k', type=click.IntRange(min=1), help='Samples per circle.')
@click.option('--precision', type=click.IntRange(53, 4096), help='Working precision in bits.')
@click.option('--relative', is_flag=True, help='Detect jumps on relative errors.')
@click.option('--arccosh-form', type=click.Choice([f.value for f in ArccoshForm]), help='Oracle arccosh identity.')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False, writable=True), help="Write samples as CSV ('-' for stdout).")
@click.option('--json', 'as_json', is_flag=True, help='Print the sweep report as JSON.')
@click.pass_context
def verify(
	ctx: click.Context,
	radii: tuple[str, ...],
	angles: Optional[int],
	precision: Optional[int],
	relative: bool,
	arccosh_form: Optional[str],
	csv_path: Optional[str],
	as_json: bool,
	**options,
) -> None:
	"""Compare the expansion with a direct principal-branch evaluation.

	Samples circles around 0 and lines through 0 along critical directions;
	exits with status 3 when a branch jump is found.

	\b
	Examples:
		spx verify -e "ln(z^2+z^3)" -n 4
		spx verify -e "ln(z^2+z^3)" -n 4 --naive
		spx verify -e "(z^2+z^3)^(3/2)" -n 6 --csv sweep.csv
	"""
	with _exit_codes(ctx):
		settings = _settings(ctx)
		request = _request(settings, **options)
		expansion = expand(request)
		directions: list[str] = []
		if not request.mode.is_real:
			for _, found in branch_report(request):
				directions.extend(str(t) for t in found.thetas() if str(t) not in directions)
		cfg = SweepConfig(
			radii=list(radii) or settings.radii,
			angles=angles or settings.angles,
			critical_directions=directions,
			precision=precision or settings.precision,
			relative=relative,
			arccosh_form=ArccoshForm(arccosh_form or settings.arccosh_form),
		)
		report = run_sweeps(expansion, cfg)
		if csv_path:
			emit_csv(report, csv_path)
		if as_json:
			click.echo(emit_json(report))
		elif csv_path != '-':
			display_sweep_summary(report)
		require_no_jump(report)

	logger.success('✓ No branch jumps in %d samples', report.samples - report.excluded)


@main.command(context_settings={'help_option_names': ['-h', '--help']})
@expansion_options
@click.pass_context
def angles(ctx: click.Context, **options) -> None:
	"""List the critical angles of every logarithm and root in an expression.

	\b
	Examples:
		spx angles -e "ln(-z^2+z^3)"
		spx angles -e "(z^2+z^3)^(3/2)" --arg-range 0 1
	"""
	with _exit_codes(ctx):
		request = _request(_settings(ctx), **options)
		display_critical_angles(branch_report(request))


if __name__ == '__main__':
	main()
