from __future__ import annotations

import pytest

from verdd.errors import ParseError, TokenizeError
from verdd.fst import Arc, parse_att, tokenize

CAT_ATT = "0\t1\tc\tc\n1\t2\ta\ta\n2\t3\tt\tt\n3\t4\t+N\t@0@\n4\t0.0"


def test_minimal_two_state_machine():
    t = parse_att("0\t1\ta\ta\n1")
    assert t.states == {0, 1}
    assert t.arcs[0] == [Arc(1, "a", "a", 0.0)]
    assert t.finals == {1: 0.0}
    assert t.input_alphabet == {"a"}


def test_cat_machine_alphabet_and_states():
    t = parse_att(CAT_ATT)
    assert len(t.states) == 5
    assert t.input_alphabet == {"c", "a", "t", "+N"}
    assert t.finals == {4: 0.0}


def test_three_fields_is_a_parse_error():
    with pytest.raises(ParseError) as exc:
        parse_att("0\t1\ta")
    assert exc.value.line == 1


def test_six_fields_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_att("0\t1\ta\ta\t0.0\textra")


def test_non_integer_state():
    with pytest.raises(ParseError) as exc:
        parse_att("0\t1\ta\ta\nx\t0.5")
    assert exc.value.line == 2


def test_non_numeric_weight():
    with pytest.raises(ParseError) as exc:
        parse_att("0\t1\ta\ta\t heavy\n1")
    assert exc.value.line == 1


def test_empty_input():
    with pytest.raises(ParseError, match="no states"):
        parse_att("")


def test_missing_state_zero():
    with pytest.raises(ParseError, match="state 0"):
        parse_att("1\t2\ta\ta\n2")


def test_arc_weights_parsed():
    t = parse_att("0\t1\ta\tb\t1.5\n1\t0.25")
    assert t.arcs[0][0].weight == 1.5
    assert t.finals[1] == 0.25


def test_epsilon_symbols_not_in_alphabet():
    t = parse_att("0\t1\t@0@\ta\n1\t2\t@_EPSILON_SYMBOL_@\tb\n2")
    assert t.input_alphabet == set()


def test_flag_symbols_not_in_alphabet():
    t = parse_att("0\t1\t@U.X.A@\t@U.X.A@\n1\t2\ta\ta\n2")
    assert t.input_alphabet == {"a"}


def test_invalid_flag_operator_rejected():
    with pytest.raises(ParseError):
        parse_att("0\t1\t@Q.X.A@\t@Q.X.A@\n1")


def test_flag_arity_enforced():
    # P needs a value, C must not carry one
    with pytest.raises(ParseError):
        parse_att("0\t1\t@P.X@\t@P.X@\n1")
    with pytest.raises(ParseError):
        parse_att("0\t1\t@C.X.A@\t@C.X.A@\n1")


def test_at_sign_in_plain_symbol_ok():
    t = parse_att("0\t1\ta@b\ta@b\n1")
    assert t.input_alphabet == {"a@b"}


def test_tokenize_unique_segmentation():
    t = parse_att(CAT_ATT)
    assert tokenize(t, "cat+N") == ["c", "a", "t", "+N"]


def test_tokenize_greedy_longest_match():
    t = parse_att("0\t1\ta\ta\n0\t1\tab\tab\n0\t1\tb\tb\n1")
    assert tokenize(t, "abb") == ["ab", "b"]


def test_tokenize_failure_offset():
    t = parse_att("0\t1\ta\ta\n1")
    with pytest.raises(TokenizeError) as exc:
        tokenize(t, "ax")
    assert exc.value.offset == 1


def test_tokenize_empty_string():
    t = parse_att(CAT_ATT)
    assert tokenize(t, "") == []


def test_tokenize_is_pure():
    t = parse_att(CAT_ATT)
    assert tokenize(t, "cat+N") == tokenize(t, "cat+N")
