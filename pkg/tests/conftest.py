"""Shared fixtures and numeric helpers."""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from puiseux_branches.exactcore import ComplexFloat, GaussianRational
from puiseux_branches.frontend import expand
from puiseux_branches.models import ExpandRequest
from puiseux_branches.verify import compare_at


def as_complex(value: object) -> complex:
	if isinstance(value, ComplexFloat):
		return value.to_complex()
	return complex(value)


def point(re: object, im: object = 0) -> GaussianRational:
	return GaussianRational(Fraction(re), Fraction(im))


def circle(r: Fraction, count: int) -> list[complex]:
	"""Points on |z| = r, avoiding the axes where a cut would be hit exactly."""
	with mpmath.workprec(80):
		radius = mpmath.mpf(r.numerator) / r.denominator
		return [complex(radius * mpmath.expjpi(mpmath.mpf(2 * k + 1) / count - 1)) for k in range(count)]


def series_error(text: str, order: object, z0: object, **options) -> tuple[float, complex, complex]:
	"""|series - oracle| at a point, with both values."""
	expansion = expand(ExpandRequest(text=text, order=str(order), **options))
	value, oracle = compare_at(expansion, z0)
	return float(abs(value - oracle)), as_complex(value), as_complex(oracle)


@pytest.fixture
def rng() -> random.Random:
	return random.Random(20240601)


@pytest.fixture
def config_file(tmp_path):
	return tmp_path / 'spx.json'
