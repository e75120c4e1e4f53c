import pytest

from qdstrata.strata import (HSingularityData, QSingularityData, StratumError, genus,
                             is_empty, parse_stratum, strip_zeros)


def test_orders_are_sorted():
    assert QSingularityData((-1, 2, -1)).orders == (2, -1, -1)
    assert str(QSingularityData((1, 2, 1))) == "Q(2,1,1)"


@pytest.mark.parametrize("orders, g", [((2, 2), 2), ((2, 1, 1), 2), ((1, 1, 1, 1), 2),
                                       ((2, -1, -1), 1), ((-1, -1, -1, -1), 0),
                                       ((30, 8, 4, 4, 2), 13)])
def test_quadratic_genus(orders, g):
    assert genus(QSingularityData(orders)) == g


@pytest.mark.parametrize("degrees, g", [((0,), 1), ((1, 1), 2), ((6, 2, 2), 6), ((2,), 2)])
def test_abelian_genus(degrees, g):
    assert genus(HSingularityData(degrees)) == g


@pytest.mark.parametrize("orders", [(), (1, -1), (3, 1), (4,)])
def test_empty_quadratic_strata(orders):
    assert is_empty(QSingularityData(orders))


@pytest.mark.parametrize("orders", [(2, 2), (2, -1, -1), (-1, -1, -1, -1), (4, -1, -1, -1, -1)])
def test_nonempty_quadratic_strata(orders):
    assert not is_empty(QSingularityData(orders))


def test_invalid_data_reported():
    assert not QSingularityData((1, 1)).is_valid()
    assert not QSingularityData((2, -2)).is_valid()
    assert QSingularityData((2, 2)).problems() == []


def test_parse_stratum():
    assert parse_stratum("Q(2,-1,-1)") == QSingularityData((2, -1, -1))
    assert parse_stratum("2, 2") == QSingularityData((2, 2))
    assert parse_stratum("H(1,1)") == HSingularityData((1, 1))
    with pytest.raises(StratumError):
        parse_stratum("Q(2,x)")


def test_strip_zeros():
    assert strip_zeros(HSingularityData((0, 0))) == HSingularityData(())
    assert strip_zeros(QSingularityData((2, 0, -1, -1))) == QSingularityData((2, -1, -1))
