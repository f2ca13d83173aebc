"""Settings file management for the spx command."""

from pathlib import Path
from typing import Optional

from pydantic import ValidationError
from rich.prompt import Confirm, IntPrompt, Prompt

from . import logger
from .models import Settings
from .vocabulary import Mode, SplitLevel

DEFAULT_CONFIG_PATH = Path.home() / '.config' / 'spx.json'


def get_config_path() -> Path:
	"""Get the settings file path."""
	return DEFAULT_CONFIG_PATH


def config_exists(path: Optional[Path] = None) -> bool:
	"""Check if the settings file exists."""
	return (path or get_config_path()).exists()


def load_settings(path: Optional[Path] = None) -> Settings:
	"""Load settings from JSON, falling back to the defaults when there is no file."""
	config_path = path or get_config_path()

	if not config_path.exists():
		logger.debug('No settings at %s, using defaults', config_path)
		return Settings()

	try:
		return Settings.model_validate_json(config_path.read_text(encoding='utf-8'))
	except ValidationError as e:
		raise ValueError(f'Invalid config: {e}') from e


def save_settings(settings: Settings, path: Optional[Path] = None) -> Path:
	"""Save settings to JSON."""
	config_path = path or get_config_path()

	try:
		config_path.parent.mkdir(parents=True, exist_ok=True)
		config_path.write_text(settings.model_dump_json(indent=2), encoding='utf-8')
	except OSError as e:
		raise OSError(f'Failed to save config to {config_path}: {e}') from e
	return config_path


def create_settings_interactive() -> Settings:
	"""Ask for each setting, offering the defaults."""
	defaults = Settings()
	logger.info('🔧 spx setup\n')

	while True:
		precision = IntPrompt.ask('[yellow]Working precision in bits[/yellow]', default=defaults.precision)
		order = Prompt.ask('[yellow]Default truncation order[/yellow]', default=defaults.order)
		mode = Prompt.ask(
			'[yellow]Variable mode[/yellow]',
			choices=[m.value for m in Mode._members()],
			default=defaults.mode.value,
		)
		split = Prompt.ask(
			'[yellow]Logarithm split level[/yellow]',
			choices=[s.value for s in SplitLevel._members()],
			default=defaults.split.value,
		)
		radii = Prompt.ask('[yellow]Sweep radii (comma separated)[/yellow]', default=','.join(defaults.radii))
		angles = IntPrompt.ask('[yellow]Angles per sweep[/yellow]', default=defaults.angles)
		factored = Confirm.ask('[yellow]Print unit factors in front of the series?[/yellow]', default=False)
		try:
			return Settings(
				precision=precision,
				order=order,
				mode=Mode(mode),
				split=SplitLevel(split),
				radii=[r.strip() for r in radii.split(',') if r.strip()],
				angles=angles,
				factored=factored,
			)
		except ValidationError as e:
			logger.error('Invalid settings: %s', e)
