import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from typing import IO, Any, Optional

from rich.console import Console

__version__ = '1.0.0'
__all__ = ['__version__', 'SeriesLogger', 'logger', 'console', 'enable_debug_logging']

_expression: ContextVar[str] = ContextVar('expression', default='')


class SeriesLogger(logging.Logger):
	"""Package logger with a SUCCESS level and the expression under expansion."""

	SUCCESS = 25

	class _StageFormatter(logging.Formatter):
		"""Debug records name the module and expression they came from; colour only on a terminal."""

		COLORS = {
			logging.DEBUG: '\033[90m',
			logging.INFO: '\033[0m',
			25: '\033[32m',
			logging.WARNING: '\033[33m',
			logging.ERROR: '\033[31m',
			logging.CRITICAL: '\033[1;31m',
		}
		RESET = '\033[0m'

		def __init__(self, colour: bool) -> None:
			super().__init__('%(message)s')
			self.colour = colour

		def format(self, record: logging.LogRecord) -> str:
			message = super().format(record)
			if record.levelno <= logging.DEBUG:
				expression = getattr(record, 'expression', '')
				where = f'{record.module} [{expression}]' if expression else record.module
				message = f'{where}: {message}'
			if not self.colour:
				return message
			return f'{self.COLORS.get(record.levelno, self.RESET)}{message}{self.RESET}'

	class _ExpressionFilter(logging.Filter):
		def filter(self, record: logging.LogRecord) -> bool:
			record.expression = _expression.get()
			return True

	def __init__(self, name: str, level: int = logging.NOTSET) -> None:
		super().__init__(name, level)
		logging.addLevelName(self.SUCCESS, 'SUCCESS')

	def success(self, message: str, *args: Any, **kwargs: Any) -> None:
		"""Log a message at SUCCESS level."""
		self.log(self.SUCCESS, message, *args, **kwargs)

	@contextmanager
	def expression(self, text: str) -> Iterator[None]:
		"""Tag the records logged inside the block with the expression being expanded."""
		token = _expression.set(text)
		try:
			yield
		finally:
			_expression.reset(token)

	@classmethod
	def setup_logger(cls, name: str, level: int = logging.INFO, stream: Optional[IO[str]] = None) -> 'SeriesLogger':
		"""Create a logger writing to ``stream`` (stderr by default)."""
		logging.setLoggerClass(cls)
		logger = logging.getLogger(name)
		if not isinstance(logger, cls):
			raise TypeError(f'Expected {cls.__name__}, got {type(logger).__name__}')

		target = stream or sys.stderr
		handler = logging.StreamHandler(target)
		isatty = getattr(target, 'isatty', None)
		handler.setFormatter(cls._StageFormatter(colour=bool(isatty and isatty())))
		handler.addFilter(cls._ExpressionFilter())
		logger.addHandler(handler)
		logger.setLevel(level)

		return logger


# Diagnostics go to stderr so that series text on stdout stays clean
logger = SeriesLogger.setup_logger('puiseux_branches')

console = Console()


def enable_debug_logging() -> None:
	"""Show ladder decisions, critical angles and precision escalation."""
	logger.setLevel(logging.DEBUG)
