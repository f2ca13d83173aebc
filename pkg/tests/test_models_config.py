import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from puiseux_branches.config import config_exists, load_settings, save_settings
from puiseux_branches.models import ExpandRequest, Settings, SweepConfig, SweepReport, SweepRow
from puiseux_branches.piecewise import Constraint
from puiseux_branches.vocabulary import Assume, Mode, SplitLevel


def test_settings_defaults():
	settings = Settings()
	assert settings.precision == 128
	assert settings.order == '4'
	assert settings.radii == ['1/100', '1/1000']
	assert settings.angles == 720
	assert settings.mode is Mode.COMPLEX


@pytest.mark.parametrize(
	'fields',
	[
		{'precision': 10},
		{'precision': 5000},
		{'order': 'three'},
		{'radii': ['1/2']},
		{'radii': []},
		{'angles': 0},
	],
)
def test_invalid_settings(fields):
	with pytest.raises(ValidationError):
		Settings(**fields)


def test_request_order_and_default_constraint():
	request = ExpandRequest(text='ln(z)', order=' 3/2 ')
	assert request.n == Fraction(3, 2)
	assert request.constraint == Constraint()
	assert ExpandRequest(text='x', var='x', mode=Mode.REAL).constraint == Constraint(real=True)


def test_request_constraints():
	assert ExpandRequest(text='x', var='x', mode='real', assume='positive').constraint == Constraint.positive()
	upper = ExpandRequest(text='ln(z)', assume=Assume.ARG_RANGE, arg_lo='0', arg_hi='1')
	assert upper.constraint == Constraint(lo=Fraction(0), hi=Fraction(1))


@pytest.mark.parametrize(
	'fields',
	[
		{'assume': 'arg-range', 'arg_lo': '0'},
		{'assume': 'arg-range', 'arg_lo': '1/2', 'arg_hi': '1/2'},
		{'assume': 'arg-range', 'arg_lo': '-2', 'arg_hi': '0'},
		{'assume': 'arg-range', 'arg_lo': '0', 'arg_hi': '1', 'mode': 'real'},
		{'assume': 'positive'},
		{'var': 'pi'},
		{'var': '2z'},
		{'text': ''},
	],
)
def test_invalid_requests(fields):
	with pytest.raises(ValidationError):
		ExpandRequest(**{'text': 'ln(z)', **fields})


def test_sweep_config_radii():
	assert SweepConfig(radii=['1/100', '0.001']).radius_values == [Fraction(1, 100), Fraction(1, 1000)]
	with pytest.raises(ValidationError):
		SweepConfig(radii=['0'])


def test_report_counts_excluded_rows():
	rows = [SweepRow(r=0.01, theta=0.0, re=0.01, im=0.0, abs_err=1e-9), SweepRow(r=0.01, theta=3.14, re=-0.01, im=0.0)]
	report = SweepReport(expression='ln(z)', series='(ln(z) + o(z^4))', rows=rows)
	assert report.samples == 2
	assert report.excluded == 1
	data = json.loads(report.model_dump_json())
	assert 'abs_err' not in data['rows'][1]
	assert data['rows'][0]['abs_err'] == 1e-9


def test_settings_round_trip(config_file):
	settings = Settings(precision=256, order='6', split=SplitLevel.FULL, radii=['1/50'])
	assert save_settings(settings, config_file) == config_file
	assert config_exists(config_file)
	assert load_settings(config_file) == settings


def test_save_creates_parent_directories(tmp_path):
	path = tmp_path / 'nested' / 'spx.json'
	save_settings(Settings(), path)
	assert path.exists()


def test_missing_settings_file_gives_defaults(config_file):
	assert not config_exists(config_file)
	assert load_settings(config_file) == Settings()


def test_invalid_settings_file(config_file):
	config_file.write_text('{"precision": 1}', encoding='utf-8')
	with pytest.raises(ValueError, match='Invalid config'):
		load_settings(config_file)
