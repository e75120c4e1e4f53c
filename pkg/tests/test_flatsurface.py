from fractions import Fraction

import pytest

from qdstrata.configuration import canonical_form, singularity_data, validate
from qdstrata.enumerator import enumerate_configurations
from qdstrata.flatsurface import (BUNDLED_SURFACES, FlatSurface, SurfaceError,
                                  are_homologous_hat, bundled_surface, cut, double_cover,
                                  extract_configuration, hat_homology_classes,
                                  homologous_on_double_cover, lift)
from qdstrata.strata import QSingularityData

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def square_surface(gluings):
    return FlatSurface([("S", SQUARE)], gluings)


# -- parsing and validation of polygons -------------------------------------

def test_parse_round_trip(threesquare):
    again = FlatSurface.from_text(threesquare.to_text())
    assert again.cone_angles() == threesquare.cone_angles()
    assert again.to_text() == threesquare.to_text()


@pytest.mark.parametrize("text, fragment", [
    ("polygon A (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.2\n", "not glued"),
    ("polygon A (0,0) (0,1) (1,1) (1,0)\n", "counterclockwise"),
    ("polygon A (0,0) (2,0) (1,1) (2,2) (0,2)\n", "convex"),
    ("polygon A (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.1\nglue A.2 A.3\n", "cannot be matched"),
    ("polygon A (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.0\nglue A.1 A.3\n", "glued to itself"),
    ("polygon A (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.2\nglue A.0 A.2\n", "glued twice"),
    ("polygon A (0,0) (1,0)\n", "fewer than three"),
    ("polygon A (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.9\n", "no edge"),
    ("triangle A (0,0)\n", "unknown statement"),
    ("polygon A (0,0) (1,0) (1,1) (0,1)\npolygon B (0,0) (1,0) (1,1) (0,1)\n"
     "glue A.0 A.2\nglue A.1 A.3\nglue B.0 B.2\nglue B.1 B.3\n", "not connected"),
])
def test_rejected_descriptions(text, fragment):
    with pytest.raises(SurfaceError, match=fragment):
        FlatSurface.from_text(text)


def test_missing_file():
    with pytest.raises(SurfaceError):
        FlatSurface.load("/nonexistent/file.surf")


# -- angles and holonomy ---------------------------------------------------------

def test_threesquare_angles(threesquare):
    assert sorted(threesquare.cone_angles()) == [1, 1, 4]
    assert threesquare.singularity_data() == QSingularityData((2, -1, -1))
    assert threesquare.genus() == 1
    assert threesquare.area() == 3
    assert not threesquare.holonomy_trivial()


def test_square_torus_is_a_translation_surface():
    s = bundled_surface("square")
    assert s.holonomy_trivial()
    assert s.cone_angles() == [2]
    with pytest.raises(SurfaceError):
        double_cover(s)


def test_pillowcase(pillowcase):
    assert sorted(pillowcase.cone_angles()) == [1, 1, 1, 1]
    assert pillowcase.genus() == 0


def test_flip_needs_equal_edge_vectors():
    with pytest.raises(SurfaceError, match="flip"):
        square_surface([((0, 0), (0, 2), True), ((0, 1), (0, 3), True)])


@pytest.mark.parametrize("name", [n for n in BUNDLED_SURFACES if n != "square"])
def test_bundled_fixtures_are_consistent(name):
    s = bundled_surface(name)
    data = s.singularity_data()
    assert data.is_valid()
    assert sum(a - 2 for a in s.cone_angles()) == 4 * s.genus() - 4
    assert not s.holonomy_trivial()


def test_rational_coordinates_are_scaled():
    text = bundled_surface("threesquare").to_text()
    half = FlatSurface.from_text(text.replace("(1,", "(1/2,").replace("(2,", "(1,")
                                 .replace(",1)", ",1/2)"))
    assert half.area() == Fraction(3, 4)
    assert sorted(half.cone_angles()) == [1, 1, 4]
    conns = half.saddle_connections((1, 0), Fraction(1, 2))
    assert len(conns) == 3
    assert all(c.length_squared == Fraction(1, 4) for c in conns)


# -- saddle connections ---------------------------------------------------------

def test_horizontal_family(threesquare):
    conns = threesquare.saddle_connections((1, 0), 1)
    assert len(conns) == 3
    assert {c.holonomy for c in conns} == {(1, 0)}
    assert sorted(c.is_loop for c in conns) == [False, True, True]
    assert threesquare.saddle_connections((1, 0), Fraction(1, 2)) == []


def test_rays_count_equals_angle(threesquare):
    for v in [(1, 0), (0, 1), (1, 1), (2, -3)]:
        for cls in range(len(threesquare.classes)):
            assert len(threesquare.rays_at(cls, v)) == threesquare.angles[cls]


def test_each_connection_found_from_both_ends(threesquare):
    for v in [(1, 0), (1, 1), (1, -2)]:
        conns = threesquare.saddle_connections(v, 4)
        ends = [c.start for c in conns] + [c.end for c in conns]
        assert len(set(ends)) == len(ends)
        for c in conns:
            idx = threesquare.ray_index(c.end.point, c.end.corner, c.end.direction)
            back = threesquare.trace(c.end.point, idx, c.end.direction, max_length_squared=16)
            assert back == c
            assert back.length_squared == c.length_squared


def test_trace_respects_the_bound(threesquare):
    idx = 0
    cls = threesquare.singular_points()[0]
    v = (1, 3)
    full = threesquare.trace(cls, idx, v)
    assert full is not None
    assert threesquare.trace(cls, idx, v, max_length_squared=full.length_squared) == full
    smaller = full.length_squared - Fraction(1, 100)
    assert threesquare.trace(cls, idx, v, max_length_squared=smaller) is None


# -- cuts -----------------------------------------------------------------

def test_cut_into_two_cylinders(threesquare):
    conns = threesquare.saddle_connections((1, 0), 1)
    result = cut(threesquare, conns)
    assert result.num_components == 2
    assert all(comp.is_cylinder for comp in result.components)
    assert sum(result.area(k) for k in range(2)) == threesquare.area()
    assert sorted(result.area(k) for k in range(2)) == [1, 2]


def test_cut_along_single_loop(threesquare):
    conns = threesquare.saddle_connections((0, 1), 1)
    loops = [c for c in conns if c.is_loop]
    result = cut(threesquare, loops)
    assert result.num_components == 1
    assert not result.components[0].trivial_holonomy
    assert sorted(result.components[0].interior_orders) == [-1, -1]


def test_cut_requires_parallel_connections(threesquare):
    a = threesquare.saddle_connections((1, 0), 1)[0]
    b = threesquare.saddle_connections((0, 1), 1)[0]
    with pytest.raises(SurfaceError):
        cut(threesquare, [a, b])


def test_cut_areas_add_up():
    for name in ["threesquare", "foursquare_q22", "fivesquare_q3"]:
        s = bundled_surface(name)
        for v in [(1, 0), (1, 2), (2, -1)]:
            conns = s.saddle_connections(v, 3)
            if not conns:
                continue
            result = cut(s, conns)
            assert sum(result.area(k) for k in range(result.num_components)) == s.area()


# -- hat-homology -----------------------------------------------------------

def test_example_one_pairs(threesquare):
    g1, g2, g3 = threesquare.saddle_connections((1, 0), 1)
    for a, b in [(g1, g2), (g1, g3), (g2, g3)]:
        assert are_homologous_hat(threesquare, a, b)
        assert homologous_on_double_cover(threesquare, a, b)


def test_non_parallel_pairs_are_not_homologous(threesquare):
    a = threesquare.saddle_connections((1, 0), 1)[0]
    b = threesquare.saddle_connections((0, 1), 1)[0]
    assert not are_homologous_hat(threesquare, a, b)
    assert not homologous_on_double_cover(threesquare, a, b)


def test_vertical_connections_split(threesquare):
    conns = threesquare.saddle_connections((0, 1), 1)
    classes = sorted(len(c) for c in hat_homology_classes(threesquare, conns))
    assert classes == [1, 2]


def test_same_connection_rejected(threesquare):
    a = threesquare.saddle_connections((1, 0), 1)[0]
    with pytest.raises(SurfaceError):
        are_homologous_hat(threesquare, a, a)


def test_trivial_holonomy_rejected(threesquare):
    s = bundled_surface("square")
    # the only vertex of the square torus is regular: no saddle connections
    assert s.singular_points() == []
    a, b = threesquare.saddle_connections((1, 0), 1)[:2]
    with pytest.raises(SurfaceError):
        are_homologous_hat(s, a, b)


def test_double_cover_of_threesquare(threesquare):
    cover = threesquare.double_cover
    assert cover.holonomy_trivial()
    assert cover.area() == 2 * threesquare.area()
    assert cover.genus() == 2
    angles = sorted(cover.angles[c] for c in cover.singular_points())
    # the zero of order two lifts to two simple zeros, each pole to one marked point
    assert angles == [2, 2, 4, 4]
    assert len(cover.marked) == 4


def test_lifts_project_back(threesquare):
    for g in threesquare.saddle_connections((1, 2), 3):
        a, b = lift(threesquare, g, 0), lift(threesquare, g, 1)
        assert a != b
        assert a.length_squared == b.length_squared == g.length_squared


# -- extraction -------------------------------------------------------------

def test_example_one_extraction(threesquare):
    conns = threesquare.saddle_connections((1, 0), 1)
    c = extract_configuration(threesquare, conns)
    assert validate(c).ok
    assert c.kinds == ("o", "o")
    assert c.graph.num_edges == 3
    assert singularity_data(c) == QSingularityData((2, -1, -1))
    listed = {canonical_form(x) for x in enumerate_configurations((2, -1, -1))}
    assert canonical_form(c) in listed


def test_extraction_checks_homology(threesquare):
    conns = threesquare.saddle_connections((0, 1), 1)
    with pytest.raises(Exception):
        extract_configuration(threesquare, conns)
