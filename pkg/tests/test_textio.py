from __future__ import annotations

import random

import pytest

from iterforms import suites
from iterforms.errors import ParseError
from iterforms.forms import coord, gen
from iterforms.grading import ChartSpec
from iterforms.textio import BinOp, Gen, parse, parse_element, to_text

K1 = ChartSpec(1, 1)
N2 = ChartSpec(2, 2)


def test_product_node():
    e = parse("d[1]x1 * d[2]x1", K1)
    assert e == BinOp("*", Gen((1,), "x1"), Gen((2,), "x1"))


def test_examples_evaluate():
    assert parse_element("d1(x1^2)", K1) == 2 * coord(K1, 1) * gen(K1, (1,), 1)
    assert parse_element("d[1]x1 * d[1]x1", K1) == 0


def test_labels_are_normalised():
    assert parse_element("d[2,1]x1", K1) == gen(K1, (1, 2), 1)


@pytest.mark.parametrize("text, column", [
    ("x1 + ", 6),
    ("d[4]x1", 1),
    ("x1 * y", 6),
    ("d[1,1]x1", 1),
    ("D[2]x1", 1),
    ("x1 $ 2", 4),
    ("d9(x1)", 1),
])
def test_parse_errors_carry_positions(text, column):
    with pytest.raises(ParseError) as info:
        parse(text, K1)
    assert info.value.column == column


def test_multiline_error_position():
    with pytest.raises(ParseError) as info:
        parse("x1 +\n  )", K1)
    assert (info.value.line, info.value.column) == (2, 3)


def test_projection_with_symbolic_n():
    a = parse_element("p(1,n)(x1 + d[1]x1*d[1]x2)", N2)
    assert a == gen(N2, (1,), 1) * gen(N2, (1,), 2)


def test_generated_corpus_round_trips():
    rng = random.Random(7)
    for _ in range(300):
        e = suites.random_expr(rng, N2)
        text = to_text(e)
        assert parse(text, N2) == e
        assert to_text(parse(text, N2)) == text


def test_hatd_in_expressions():
    assert parse_element("hatd1(D[1]x1)", K1) == -parse_element("D[]x1", K1)
    assert parse_element("hatd2(x1^2*D[]x1)", K1) == -2 * coord(K1, 1)
