"""Expression parsing, expansion and series output."""

from .expand import Expander, Expansion, branch_report, expand, expand_text, expander_for
from .expr import Expr, to_text
from .parser import parse, parse_series
from .render import correction_roles, format_series

__all__ = [
	'Expander',
	'Expansion',
	'Expr',
	'branch_report',
	'correction_roles',
	'expand',
	'expand_text',
	'expander_for',
	'format_series',
	'parse',
	'parse_series',
	'to_text',
]
