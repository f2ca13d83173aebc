import io
import logging

from puiseux_branches import SeriesLogger, logger


def test_debug_records_carry_the_expression():
	stream = io.StringIO()
	log = SeriesLogger.setup_logger('puiseux_branches.tagged', logging.DEBUG, stream=stream)
	log.propagate = False
	with log.expression('ln(z^2+z^3)'):
		log.debug('Omega is 0: no critical angles')
	log.debug('untagged')
	lines = stream.getvalue().splitlines()
	assert lines == ['test_logging [ln(z^2+z^3)]: Omega is 0: no critical angles', 'test_logging: untagged']


def test_plain_stream_gets_no_colour_codes():
	stream = io.StringIO()
	log = SeriesLogger.setup_logger('puiseux_branches.plain', stream=stream)
	log.propagate = False
	log.success('✓ No branch jumps in %d samples', 16)
	log.warning('Delivered o(z^3)')
	assert stream.getvalue() == '✓ No branch jumps in 16 samples\nDelivered o(z^3)\n'
	assert logging.getLevelName(SeriesLogger.SUCCESS) == 'SUCCESS'


def test_package_logger_is_a_series_logger():
	assert isinstance(logger, SeriesLogger)
