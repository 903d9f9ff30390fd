import pytest

from curvepart import InputError, format_rational, parse_rational, rat


def test_lowest_terms_positive_denominator():
    x = rat(-4, -6)
    assert x.numerator == 2 and x.denominator == 3
    y = rat(4, -6)
    assert y.numerator == -2 and y.denominator == 3


def test_exact_arithmetic():
    assert rat(1, 3) + rat(1, 6) == rat(1, 2)
    assert rat(1, 3) * 3 == 1
    assert rat(7, 2) - rat(3) == rat(1, 2)
    assert rat(1, 7) / rat(2, 7) == rat(1, 2)


def test_parse_forms():
    assert parse_rational("4/9") == rat(4, 9)
    assert parse_rational("-3/6") == rat(-1, 2)
    assert parse_rational("0.1") == rat(1, 10)
    assert parse_rational("1e-9") == rat(1, 10**9)
    assert parse_rational(7) == rat(7)


def test_parse_rejects_junk():
    with pytest.raises(InputError):
        parse_rational("one half")
    with pytest.raises(InputError):
        parse_rational("1/0")


def test_format_always_has_denominator():
    assert format_rational(rat(1, 2)) == "1/2"
    assert format_rational(rat(3)) == "3/1"
    assert format_rational(rat(0)) == "0/1"
    assert format_rational(rat(-5, 10)) == "-1/2"


def test_round_trip():
    for p, q in [(0, 1), (22, 7), (-13, 11), (10**30 + 1, 10**15)]:
        x = rat(p, q)
        assert parse_rational(format_rational(x)) == x
