import json

import pytest
from click.testing import CliRunner

from puiseux_branches.cli import EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_VERIFICATION, main
from puiseux_branches.config import load_settings, save_settings
from puiseux_branches.models import Settings


@pytest.fixture
def runner() -> CliRunner:
	return CliRunner()


@pytest.fixture
def settings_file(config_file):
	return save_settings(Settings(), config_file)


def spx(runner: CliRunner, settings_file, *args: str):
	return runner.invoke(main, ['-c', str(settings_file), *args])


def test_help(runner):
	result = runner.invoke(main, [])
	assert result.exit_code == 0
	assert 'spx expand' in result.output


def test_plain_expansion(runner, settings_file):
	result = spx(runner, settings_file, 'expand', '-e', 'z^2+z^3', '-n', '4', '--plain')
	assert result.exit_code == 0
	assert result.output.strip() == '(1*z^2 + 1*z^3 + o(z^4))'


def test_expansion_panel_and_point(runner, settings_file):
	result = spx(runner, settings_file, 'expand', '-e', 'ln(z^2+z^3)', '--at=-1/100+i/10')
	assert result.exit_code == 0
	assert 'Corrections' in result.output


def test_real_mode_expansion(runner, settings_file):
	result = spx(runner, settings_file, 'expand', '-e', 'arccosh(1/2+x)', '--var', 'x', '-m', 'real', '-n', '3', '-p')
	assert result.exit_code == 0
	assert 'o(x^3)' in result.output


@pytest.mark.parametrize(
	('args', 'code'),
	[
		(['expand', '-e', 'ln(z^2+'], EXIT_PARSE),
		(['expand', '-e', 'ln(z)', '--var', 'i'], EXIT_PARSE),
		(['expand', '-e', 'ln(z)', '-m', 'real', '--arg-range', '0', '1'], EXIT_PARSE),
		(['expand', '-e', 'exp(1/z)'], EXIT_UNSUPPORTED),
		(['expand', '-e', '1/(z-z)'], EXIT_UNSUPPORTED),
	],
)
def test_error_exit_codes(runner, settings_file, args, code):
	assert spx(runner, settings_file, *args).exit_code == code


def test_bad_option_values(runner, settings_file):
	assert spx(runner, settings_file, 'expand', '-e', 'z', '-n', 'abc').exit_code == 2
	assert spx(runner, settings_file, 'expand', '-e', 'z', '--at', 'ln(z)').exit_code == 2


def test_invalid_settings_file(runner, config_file):
	config_file.write_text('{"angles": 0}', encoding='utf-8')
	result = runner.invoke(main, ['-c', str(config_file), 'expand', '-e', 'z'])
	assert result.exit_code == EXIT_PARSE


def test_verify_clean(runner, settings_file):
	result = spx(runner, settings_file, 'verify', '-e', 'ln(z^2+z^3)', '-r', '1/100', '-k', '16', '--json')
	assert result.exit_code == 0
	assert json.loads(result.output)['jump_detected'] is False


def test_verify_naive_reports_a_jump(runner, settings_file):
	result = spx(runner, settings_file, 'verify', '-e', 'ln(z^2+z^3)', '-r', '1/100', '-k', '16', '--naive', '--json')
	assert result.exit_code == EXIT_VERIFICATION
	assert json.loads(result.output)['jump_detected'] is True


def test_verify_csv_to_stdout(runner, settings_file):
	result = spx(runner, settings_file, 'verify', '-e', 'ln(1+z)', '-r', '1/100', '-k', '8', '--csv', '-')
	assert result.exit_code == 0
	assert result.output.startswith('r,theta,re,im,abs_err,rel_err,case_id')


def test_verify_table(runner, settings_file):
	result = spx(runner, settings_file, 'verify', '-e', '(z^2+z^3)^(3/2)', '-n', '6', '-r', '1/100', '-k', '16')
	assert result.exit_code == 0
	assert 'Sweep' in result.output


def test_angles(runner, settings_file):
	result = spx(runner, settings_file, 'angles', '-e', 'ln(z^2+z^3)')
	assert result.exit_code == 0
	assert 'Critical angles' in result.output


def test_arg_range_assumption(runner, settings_file):
	result = spx(runner, settings_file, 'angles', '-e', 'ln(z^2+z^3)', '--assume', 'arg-range', '--arg-range', '0', '1')
	assert result.exit_code == 0
	assert 'Critical angles' in result.output


@pytest.mark.parametrize(
	'args',
	[
		['--assume', 'arg-range'],
		['--assume', 'real', '--arg-range', '0', '1'],
	],
)
def test_arg_range_needs_consistent_options(runner, settings_file, args):
	result = spx(runner, settings_file, 'angles', '-e', 'ln(z^2+z^3)', *args)
	assert result.exit_code == 2


def test_init_respects_existing_file(runner, config_file):
	config_file.write_text('{}', encoding='utf-8')
	result = runner.invoke(main, ['-c', str(config_file), 'init'])
	assert result.exit_code == 0
	assert config_file.read_text(encoding='utf-8') == '{}'


def test_init_force_writes_defaults(runner, config_file):
	config_file.write_text('{"precision": 256}', encoding='utf-8')
	result = runner.invoke(main, ['-c', str(config_file), 'init', '--force'])
	assert result.exit_code == 0
	assert load_settings(config_file) == Settings()
