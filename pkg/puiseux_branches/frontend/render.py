"""Series text output."""

from __future__ import annotations

from fractions import Fraction

from ..exactcore import format_rational
from ..piecewise import CorrectionTerm, UnitFactor
from ..series import Coefficient, Series
from ..vocabulary import Role


def _power(var: str, e: Fraction) -> str:
	if e.denominator == 1 and e >= 0:
		return f'{var}^{e.numerator}'
	return f'{var}^({format_rational(e)})'


def _coefficient(coef: Coefficient, var: str) -> str:
	c = coef.as_constant()
	text = str(c) if c is not None else coef.render(var)
	if ' + ' in text or ' - ' in text[1:]:
		return f'({text})'
	return text


def format_series(s: Series, factored: bool = False) -> str:
	"""Render ``[unit*](c*z^e + ... + o(z^n))`` with terms by ascending exponent.

	The unit factor is kept in front only when ``factored`` is set; otherwise
	it is distributed into the coefficients.
	"""
	unit = s.global_factor if factored else None
	body = s if factored else s.materialize()
	terms = []
	for e, coef in body.terms:
		text = _coefficient(coef, s.var)
		terms.append(text if e == 0 else f'{text}*{_power(s.var, e)}')
	if s.order is not None:
		terms.append(f'o({_power(s.var, s.order)})')
	text = '(' + (' + '.join(terms) if terms else '0') + ')'
	if unit is not None:
		return f'{unit.render()} * {text}'
	return text


def correction_roles(s: Series) -> list[Role]:
	"""Roles of the piecewise corrections in the degree-0 coefficient and the unit factor."""
	roles: list[Role] = []
	for atom in s.coefficient(0).specials():
		if isinstance(atom, CorrectionTerm) and atom.role not in roles:
			roles.append(atom.role)
	if isinstance(s.global_factor, UnitFactor) and not s.global_factor.is_constant():
		roles.append(Role.PSI)
	return roles


__all__ = ['correction_roles', 'format_series']
