import json

import pytest
from hypothesis import given, strategies as st

from cycnorm.arith import CycElem, CycInt
from cycnorm.expr import ParseError, elem_from_json, elem_to_json, format_elem, parse_elem
from conftest import fractions_


def test_grammar_example():
    x = parse_elem("(3+w)/2", 3)
    assert x * 2 == CycElem.of(CycInt((3, 1), 3), 3)
    assert parse_elem("w*w + w + 1", 3) == 0
    assert parse_elem("-7", 2) == CycElem.of(-7, 2)


@pytest.mark.parametrize("text", ["(1", "x", "1/0", "import os", "1.5"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_elem(text, 3)


@given(st.sampled_from((2, 3)).flatmap(fractions_))
def test_text_round_trip(x):
    assert parse_elem(format_elem(x), x.ell) == x


@given(st.sampled_from((2, 3)).flatmap(fractions_))
def test_json_round_trip(x):
    obj = json.loads(json.dumps(elem_to_json(x)))
    assert set(obj) == {"num", "den", "ell"}
    assert elem_from_json(obj) == x
