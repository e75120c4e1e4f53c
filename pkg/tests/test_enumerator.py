import json

import pytest

from qdstrata.configuration import (Configuration, canonical_form, principal_boundary,
                                    singularity_data, validate)
from qdstrata.enumerator import (enumerate_configurations, enumerate_exhaustive, genus2_table,
                                 graph_min_mass, shape_graphs, stratum_mass)
from qdstrata.strata import QSingularityData, genus

from conftest import GOLDEN

SMALL = [(2, 2), (2, 1, 1), (1, 1, 1, 1), (2, -1, -1), (-1, -1, -1, -1), (1, 1, -1, -1),
         (4, -1, -1, -1, -1), (3, 1, 1, -1)]


@pytest.fixture(scope="module")
def golden():
    return json.loads((GOLDEN / "genus2_table.json").read_text())


def test_golden_table(golden):
    table = genus2_table(jobs=1)
    assert {str(a): len(cs) for a, cs in table.items()} == {
        "Q(2,2)": 3, "Q(2,1,1)": 5, "Q(1,1,1,1)": 4}
    for alpha, configs in table.items():
        assert [canonical_form(c) for c in configs] == \
            [entry["canonical"] for entry in golden[str(alpha)]]


def test_golden_entries_reparse(golden):
    for alpha, entries in golden.items():
        for entry in entries:
            c = Configuration.from_dict(entry["configuration"])
            assert validate(c).ok
            assert str(singularity_data(c)) == alpha
            assert canonical_form(c) == entry["canonical"]


@pytest.mark.parametrize("alpha", SMALL)
def test_agrees_with_exhaustive_search(alpha):
    primary = [canonical_form(c) for c in enumerate_configurations(alpha, jobs=1)]
    assert primary == [canonical_form(c) for c in enumerate_exhaustive(alpha, jobs=1)]
    assert len(set(primary)) == len(primary)


@pytest.mark.parametrize("alpha", SMALL)
def test_every_configuration_is_valid(alpha):
    target = QSingularityData(alpha)
    for c in enumerate_configurations(alpha, jobs=1):
        assert validate(c).ok
        assert singularity_data(c) == target


@pytest.mark.parametrize("alpha", [(4,), (3, 1), (1, -1), ()])
def test_empty_strata(alpha):
    assert enumerate_configurations(alpha) == []


def test_invalid_data_gives_nothing():
    assert enumerate_configurations((1, 1)) == []


def test_example_one_configuration_listed():
    listed = enumerate_configurations((2, -1, -1))
    kinds = sorted("".join(c.kinds) for c in listed)
    assert "oo" in kinds


def test_parallel_matches_serial():
    serial = [canonical_form(c) for c in enumerate_configurations((3, 1, 1, -1), jobs=1)]
    parallel = [canonical_form(c) for c in enumerate_configurations((3, 1, 1, -1), jobs=2)]
    assert serial == parallel


def test_mass_bound_is_respected():
    budget = stratum_mass(QSingularityData((2, 1, 1)))
    assert budget == 10
    for g in shape_graphs(budget):
        assert graph_min_mass(g) <= budget


@pytest.mark.parametrize("alpha", SMALL)
def test_genus_and_pole_windows(alpha):
    data = QSingularityData(alpha)
    g = genus(data)
    poles = alpha.count(-1)
    for c in enumerate_configurations(alpha, jobs=1):
        parts = principal_boundary(c)
        total = sum(genus(st) for _, st in parts)
        assert total <= g <= total + 2
        interior_poles = sum(ints.count(-1) for ints in c.interior)
        assert interior_poles <= poles <= interior_poles + 4
