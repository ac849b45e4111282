from fractions import Fraction

import pytest

from alequot.formats import (
    ParseError,
    parse_rational,
    parse_run_file,
    parse_subdivision_file,
    rational_str,
    real_str,
)

FAN_74 = """\
# five-cone family fan for order 7, weights (1, 1, 4)
dim 3
quotient 7 1 4
cone 1 1 1 | 0 1 0 | 0 0 1
cone 7 6 3 | 1 1 1 | 0 0 1
cone 2 2 1 | 0 1 0 | 1 1 1
cone 7 6 3 | 2 2 1 | 1 1 1
cone 7 6 3 | 0 1 0 | 2 2 1
"""

RUN_OK = """\
n = 3
r = 7
C = 1.0
s0 = 5.0
w = 2.0
c = -0.25
nodes = 256
"""


def test_rational_round_trip():
    for value in (Fraction(4, 7), Fraction(-3, 7), Fraction(5), Fraction(-19, 49), Fraction(0)):
        assert parse_rational(rational_str(value)) == value


def test_real_str_significant_digits():
    assert real_str(1.0 / 3.0) == 0.333333333333
    assert real_str(2.0) == 2.0
    assert real_str(1.23456789012345e-7) == 1.23456789012e-7


def test_parse_subdivision_file():
    quotient, cones = parse_subdivision_file(FAN_74)
    assert quotient.r == 7 and quotient.weights == (1, 4)
    assert len(cones) == 5
    assert cones[0].generators == ((1, 1, 1), (0, 1, 0), (0, 0, 1))


def test_parse_subdivision_comments_and_blanks():
    text = "\n# leading comment\n\ndim 2\nquotient 7 3  # trailing comment\ncone 7 4 | 0 1\n"
    quotient, cones = parse_subdivision_file(text)
    assert quotient.r == 7
    assert cones[0].generators == ((7, 4), (0, 1))


@pytest.mark.parametrize(
    "text, bad_line",
    [
        ("dim 2\nquotient 7 3\ncone 7 4 | 0\n", 3),          # short generator
        ("dim 2\nquotient 7 3\ncone 7 4\n", 3),               # missing separator
        ("dim 2\nquotient 7 3 9\ncone 7 4 | 0 1\n", 2),       # too many weights
        ("dim 2\nquotient 4 2\ncone 4 2 | 0 1\n", 2),         # non-free action
        ("quotient 7 3\ncone 7 4 | 0 1\n", 1),                # missing dim
        ("dim 2\nquotient 7 3\nwedge 1 1\n", 3),              # unknown keyword
        ("dim 2\nquotient 7 3\ncone 7 4 | 0 x\n", 3),         # non-integer entry
    ],
)
def test_parse_subdivision_errors_carry_line_numbers(text, bad_line):
    with pytest.raises(ParseError) as err:
        parse_subdivision_file(text)
    assert err.value.line == bad_line


def test_parse_subdivision_requires_cones():
    with pytest.raises(ParseError):
        parse_subdivision_file("dim 2\nquotient 7 3\n")


def test_parse_run_file():
    config, grid = parse_run_file(RUN_OK)
    assert config.n == 3 and config.r_order == 7
    assert config.calabi_c == 1.0 and config.c == -0.25
    assert grid.m == 256
    assert grid.s_min == 1e-2 and grid.s_max == 1e4   # defaults
    assert config.t_steps == 10 and config.newton_tol == 1e-11


@pytest.mark.parametrize(
    "text, bad_line",
    [
        ("n = 3\nC = 1.0\ns0 = 5.0\nw = 2.0\nc = oops\n", 5),
        ("n = 3\nC = 1.0\nbogus = 4\ns0 = 5.0\nw = 2.0\nc = 0.0\n", 3),
        ("n = 3\nn = 4\nC = 1.0\ns0 = 5.0\nw = 2.0\nc = 0.0\n", 2),
        ("n = 3\nC 1.0\n", 2),
    ],
)
def test_parse_run_file_errors(text, bad_line):
    with pytest.raises(ParseError) as err:
        parse_run_file(text)
    assert err.value.line == bad_line


def test_parse_run_file_missing_keys():
    with pytest.raises(ParseError, match="missing required"):
        parse_run_file("n = 3\nC = 1.0\n")


def test_parse_run_file_rejects_exterior_bump():
    with pytest.raises(ParseError):
        parse_run_file("n = 3\nC = 1.0\ns0 = 5.0\nw = 2.0\nc = -0.25\ns_min = 4.0\n")
