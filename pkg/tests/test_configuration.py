import copy
import json

import pytest

from qdstrata.configuration import (EXCEPTIONAL_TABLE, Configuration, ConfigurationError,
                                    boundary_text, canonical_form, exceptional_equivalence,
                                    global_ribbon_graph, newborn_order, principal_boundary,
                                    relabel, singularity_data, validate)
from qdstrata.strata import QSingularityData


def modified(c, edit):
    data = copy.deepcopy(c.to_dict())
    edit(data)
    return Configuration.from_dict(data)


def test_worked_example_is_valid(worked_example):
    assert validate(worked_example).ok


def test_worked_example_boundary_types(worked_example):
    codes = [worked_example.boundary_type(v) for v in range(7)]
    assert codes == ["+4.2c", "+2.1", "+2.1", "o2.2", "+2.1", "+2.1", "o2.2"]


def test_worked_example_newborn_singularities(worked_example):
    grg = global_ribbon_graph(worked_example)
    assert sorted(grg.newborn_orders()) == [8, 30]
    assert sorted(map(sorted, grg.orders), key=len) == [sorted((0, 1, 1, 1, 1, 0)),
                                                        sorted((2, 1, 1, 5, 0, 9, 0, 0, 1, 3))]


def test_newborn_order_formula():
    assert newborn_order([0, 1, 1, 1, 1, 0]) == 8
    assert newborn_order([2, 1, 1, 5, 0, 9, 0, 0, 1, 3]) == 30
    assert newborn_order([0, 0]) == 0
    assert newborn_order([0]) == -1
    assert newborn_order([1]) == 0


def test_worked_example_singularities(worked_example):
    assert singularity_data(worked_example) == QSingularityData((2, 4, 4, 8, 30))


def test_worked_example_boundary(worked_example):
    text = boundary_text(principal_boundary(worked_example))
    assert text == "H(0,0) ⊔ H(1,1) ⊔ H(6,2,2) ⊔ H(0) ⊔ H(0)"


def test_json_round_trip(worked_example):
    again = Configuration.from_json(worked_example.to_json(indent=2))
    assert again == worked_example
    commented = "# a comment line\n" + worked_example.to_json()
    assert Configuration.from_json(commented) == worked_example


def test_malformed_json():
    with pytest.raises(ConfigurationError):
        Configuration.from_json("{not json")
    with pytest.raises(ConfigurationError):
        Configuration.from_json(json.dumps({"vertices": []}))


def test_condition_one_bad_graph(worked_example):
    def edit(d):
        d["vertices"][3]["kind"] = "-"
    assert 1 in validate(modified(worked_example, edit)).conditions()


def test_condition_two_missing_side(worked_example):
    def edit(d):
        d["ribbon"][1] = [[["e0-", 1]]]
    assert 2 in validate(modified(worked_example, edit)).conditions()


def test_condition_four_parity(worked_example):
    def edit(d):
        d["ribbon"][4] = [[["e4-", 2], ["e5+", 0]]]
    res = validate(modified(worked_example, edit))
    assert 4 in res.conditions()


def test_condition_four_cylinder_corner(worked_example):
    def edit(d):
        d["ribbon"][3] = [[["e3-", 1]], [["e4+", 0]]]
    assert 4 in validate(modified(worked_example, edit)).conditions()


def test_condition_five_interior(worked_example):
    def edit(d):
        d["vertices"][1]["interior"] = [3]
    assert 5 in validate(modified(worked_example, edit)).conditions()


def test_condition_six_exceptional():
    c = Configuration.from_dict({
        "vertices": [{"kind": "-", "interior": []}],
        "edges": [[0, 0]],
        "ribbon": [[[["e0+", 2], ["e0-", 0]]]],
    })
    res = validate(c)
    assert res.conditions() == [6]
    assert "condition 6" in str(res)


def test_canonical_form_is_invariant(worked_example):
    c = worked_example
    n, m = c.graph.num_vertices, c.graph.num_edges
    vperm = list(reversed(range(n)))
    eperm = [(e + 3) % m for e in range(m)]
    other = relabel(c, vperm, eperm, flip_edges=[1, 4])
    assert other != c
    assert validate(other).ok
    assert canonical_form(other) == canonical_form(c)


def test_canonical_form_tells_apart(worked_example):
    def edit(d):
        d["vertices"][2]["interior"] = [6, 2]
    assert canonical_form(modified(worked_example, edit)) != canonical_form(worked_example)


def test_rotation_of_corner_orders_is_irrelevant():
    a = Configuration.from_dict({"vertices": [{"kind": "+", "interior": []}, {"kind": "-", "interior": [-1, -1]}],
                                 "edges": [[0, 1], [1, 0]],
                                 "ribbon": [[[["e0+", 3], ["e1-", 1]]], [[["e0-", 1]], [["e1+", 1]]]]})
    b = Configuration.from_dict({"vertices": [{"kind": "+", "interior": []}, {"kind": "-", "interior": [-1, -1]}],
                                 "edges": [[0, 1], [1, 0]],
                                 "ribbon": [[[["e1-", 1], ["e0+", 3]]], [[["e0-", 1]], [["e1+", 1]]]]})
    assert canonical_form(a) == canonical_form(b)


@pytest.mark.parametrize("code", sorted(EXCEPTIONAL_TABLE))
def test_exceptional_entries_give_empty_strata(code):
    for interior, corners in EXCEPTIONAL_TABLE[code]:
        assert exceptional_equivalence(code, interior, corners)


def test_exceptional_equivalence_rejects_other_codes():
    with pytest.raises(ConfigurationError):
        exceptional_equivalence("+2.1", (), (1, 1))
