from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalent.formats import (FormatError, format_space, parse_config, parse_int_list,
                             parse_partition, parse_points, parse_rational_list, parse_space)
from scalent.instances import random_space
from scalent.semimetric import eps_entropy_exact

TWO_ATOMS = """\
# two atoms at distance 1
atoms 2
a 1/2
b 1/2
dist a b 1
"""


def test_parse_two_atoms():
    sp = parse_space(TWO_ATOMS)
    assert sp.atoms == ["a", "b"] or tuple(sp.atoms) == ("a", "b")
    assert list(sp.mass) == [Fraction(1, 2)] * 2 and sp.rho[0, 1] == 1
    assert eps_entropy_exact(sp, Fraction(1, 4)).blocks == 2


@pytest.mark.parametrize("text, line, fragment", [
    ("", 1, "empty"),
    ("atom 2\n", 1, "header"),
    ("atoms 2\na 1/2\nb 1/3\ndist a b 1\n", 3, "sum"),
    ("atoms 2\na 1/2\nb x\n", 3, "rational"),
    ("atoms 2\na 1/2\nb 1/2\ndist a c 1\n", 4, "unknown"),
    ("atoms 2\na 1/2\nb 1/2\ndist a b -1\n", 4, "nonnegative"),
    ("atoms 2\na 1/2\nb 1/2\ndist a b 1\ndist b a 2\n", 5, "conflicting"),
    ("atoms 3\na 1/3\nb 1/3\nc 1/3\ndist a b 1\ndist a c 1\n", 6, "missing"),
    ("atoms 2\na 1/2\na 1/2\n", 3, "duplicate"),
])
def test_space_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatError) as err:
        parse_space(text, source="f.space")
    assert err.value.line == line
    assert str(err.value).startswith(f"f.space:{line}:") and fragment in str(err.value)


def test_triangle_check_is_optional():
    text = "atoms 3\na 1/3\nb 1/3\nc 1/3\ndist a b 1\ndist b c 1\ndist a c 3\n"
    parse_space(text)
    with pytest.raises(ValueError):
        parse_space(text, check_triangle=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_space_round_trip(seed):
    rng = np.random.default_rng(seed)
    sp = random_space(rng, int(rng.integers(1, 9)))
    back = parse_space(format_space(sp))
    assert list(back.mass) == list(sp.mass)
    assert back.rho == sp.rho


def test_parse_partition():
    sp = parse_space(TWO_ATOMS)
    p = parse_partition("block left: a\nblock right: b\n", sp)
    assert len(p) == 2
    with pytest.raises(FormatError) as err:
        parse_partition("block left: a\nblock right: z\n", sp)
    assert err.value.line == 2
    with pytest.raises(FormatError):
        parse_partition("block left: a\n", sp)  # b is not covered


def test_parse_points():
    assert parse_points("0 0\n1, 0\n# comment\n0 1\n") == [(0, 0), (1, 0), (0, 1)]
    with pytest.raises(FormatError) as err:
        parse_points("0 0\n1\n")
    assert err.value.line == 2
    with pytest.raises(FormatError):
        parse_points("# nothing\n")


def test_int_and_rational_lists():
    assert parse_int_list("0..3,7") == [0, 1, 2, 3, 7]
    assert parse_int_list("5") == [5]
    assert parse_rational_list("1/4, 1/8") == [Fraction(1, 4), Fraction(1, 8)]
    with pytest.raises(ValueError):
        parse_int_list(",")
    with pytest.raises(ValueError):
        parse_rational_list("1/0")


def test_parse_config():
    cfg = parse_config("# run\nsigma = alternating\nmax-n = 16  # inline\n\n")
    assert cfg == {"sigma": "alternating", "max_n": "16"}
    with pytest.raises(FormatError) as err:
        parse_config("sigma = ones\nbogus\n")
    assert err.value.line == 2
