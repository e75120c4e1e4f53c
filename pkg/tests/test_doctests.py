import doctest
import importlib

import pytest

MODULES = ["qdstrata", "qdstrata.strata", "qdstrata.confgraph", "qdstrata.ribbon",
           "qdstrata.configuration", "qdstrata.enumerator", "qdstrata.flatsurface",
           "qdstrata.counter", "qdstrata.cli"]


@pytest.mark.parametrize("name", MODULES)
def test_doctests(name):
    result = doctest.testmod(importlib.import_module(name), optionflags=doctest.ELLIPSIS)
    assert result.failed == 0
