"""Acceptance criteria, one check per criterion.

Run with pytest, or directly with ``python tests/test_acceptance.py`` to
print one PASS/FAIL line per criterion.  Under pytest the same lines are
printed in the terminal summary.
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import DATA, GOLDEN  # noqa: E402

from qdstrata.configuration import (EXCEPTIONAL_TABLE, Configuration, boundary_text,  # noqa: E402
                                    canonical_form, exceptional_equivalence, is_exceptional,
                                    newborn_order, principal_boundary, singularity_data, validate)
from qdstrata.confgraph import PLUS  # noqa: E402
from qdstrata.counter import collections_up_to, growth_rows  # noqa: E402
from qdstrata.enumerator import enumerate_configurations, genus2_table  # noqa: E402
from qdstrata.flatsurface import (BUNDLED_SURFACES, are_homologous_hat, bundled_surface,  # noqa: E402
                                  cut, extract_configuration, homologous_on_double_cover)
from qdstrata.counter import saddle_connections_up_to  # noqa: E402
from qdstrata.strata import QSingularityData, genus  # noqa: E402

RESULTS: list[str] = []


def record(number, title, ok, detail):
    line = "%s criterion %d: %s (%s)" % ("PASS" if ok else "FAIL", number, title, detail)
    RESULTS.append(line)
    return line


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


# -- criterion checks -----------------------------------------------------------------
# Each returns (ok, detail).  They never raise on a mismatch.


def check_worked_example():
    with Timer() as t:
        c = Configuration.from_json((DATA / "worked_example.json").read_text())
        valid = validate(c).ok
        alpha = singularity_data(c)
        boundary = boundary_text(principal_boundary(c))
    ok = (valid and alpha == QSingularityData((2, 4, 4, 8, 30)) and genus(alpha) == 13
          and boundary == "H(0,0) ⊔ H(1,1) ⊔ H(6,2,2) ⊔ H(0) ⊔ H(0)" and t.seconds < 1)
    return ok, "%s, genus %d, %s, %.2fs" % (alpha, genus(alpha), boundary, t.seconds)


def check_newborn_orders():
    with Timer() as t:
        a = newborn_order((0, 1, 1, 1, 1, 0))
        b = newborn_order((2, 1, 1, 5, 0, 9, 0, 0, 1, 3))
    return (a, b) == (8, 30) and t.seconds < 1, "orders %d and %d" % (a, b)


def check_genus2_table():
    golden = json.loads((GOLDEN / "genus2_table.json").read_text())
    with Timer() as t:
        table = genus2_table()
        same = all([canonical_form(c) for c in cs] == [e["canonical"] for e in golden[str(a)]]
                   for a, cs in table.items()) and len(table) == len(golden)
        doubled = all([canonical_form(c) for c in enumerate_configurations(a, bound_scale=2)]
                      == [canonical_form(c) for c in cs] for a, cs in table.items())
    counts = ", ".join("%s: %d" % (a, len(cs)) for a, cs in table.items())
    return (same and doubled and t.seconds < 60,
            "%s; golden %s, doubled bounds %s, %.1fs"
            % (counts, "equal" if same else "differ", "agree" if doubled else "differ",
               t.seconds))


def _conditions_hold(code, interior, corners):
    ds = [sum(corners) - 2] if code == "-2.1" else [k - 2 for k in corners]
    total = sum(interior) + sum(ds)
    return (all(d >= -1 for d in ds) and all(d == -1 or d >= 1 for d in interior)
            and total >= -4 and total % 4 == 0)


def check_exceptional_list():
    with Timer() as t:
        listed_ok = all(exceptional_equivalence(code, a, b)
                        for code, rows in EXCEPTIONAL_TABLE.items() for a, b in rows)
        rng = random.Random(20240607)
        samples = []
        while len(samples) < 200:
            code = rng.choice(sorted(EXCEPTIONAL_TABLE))
            corners = [rng.randint(0, 8) for _ in range(1 if code == "-1.1" else 2)]
            interior = [rng.choice([-1, 1, 2, 3, 4, 5, 6]) for _ in range(rng.randint(0, 3))]
            if _conditions_hold(code, interior, corners) and \
                    not is_exceptional(code, interior, corners):
                samples.append((code, interior, corners))
        bad = [s for s in samples if exceptional_equivalence(*s)]
    return (listed_ok and not bad and t.seconds < 5,
            "%d listed entries empty, %d random unlisted nonempty, %d bad, %.2fs"
            % (sum(len(r) for r in EXCEPTIONAL_TABLE.values()), len(samples) - len(bad),
               len(bad), t.seconds))


def check_example_one():
    with Timer() as t:
        s = bundled_surface("threesquare")
        angles = sorted(s.cone_angles())
        conns = s.saddle_connections((1, 0), 1)
        pairs = all(are_homologous_hat(s, a, b) for a, b in itertools.combinations(conns, 2))
        result = cut(s, conns)
        cylinders = result.num_components == 2 and \
            all(comp.is_cylinder for comp in result.components)
        c = extract_configuration(s, conns)
        theta = c.kinds == ("o", "o") and c.graph.num_edges == 3
        listed = canonical_form(c) in {canonical_form(x)
                                       for x in enumerate_configurations((2, -1, -1))}
        alpha = singularity_data(c)
    ok = (angles == [1, 1, 4] and len(conns) == 3 and pairs and cylinders and theta
          and alpha == QSingularityData((2, -1, -1)) and listed and t.seconds < 5)
    return ok, ("angles %s pi, %d connections, pairs %s, %d components, graph %s, %s, %s, %.2fs"
                % (angles, len(conns), "homologous" if pairs else "split",
                   result.num_components, c.graph.text().replace("\n", "; "), alpha,
                   "listed" if listed else "unlisted", t.seconds))


def check_double_cover_and_lengths():
    mismatches = pairs = families = 0
    dichotomy_bad = []
    with Timer() as t:
        for name in BUNDLED_SURFACES:
            s = bundled_surface(name)
            if s.holonomy_trivial():
                continue
            conns = saddle_connections_up_to(s, 3)
            for a, b in itertools.combinations(conns, 2):
                pairs += 1
                if are_homologous_hat(s, a, b) != homologous_on_double_cover(s, a, b):
                    mismatches += 1
            for col in collections_up_to(s, 3):
                families += 1
                lengths = sorted(set(col.lengths_squared))
                if len(lengths) > 2 or (len(lengths) == 2 and lengths[1] != 4 * lengths[0]):
                    dichotomy_bad.append((name, col.direction, lengths))
    cover = (mismatches == 0 and t.seconds < 120,
             "%d pairs, %d mismatches, %.1fs" % (pairs, mismatches, t.seconds))
    dichotomy = (not dichotomy_bad,
                 "%d families, %d with other length ratios" % (families, len(dichotomy_bad)))
    return cover, dichotomy


def check_growth():
    s = bundled_surface("threesquare")
    with Timer() as t:
        cols = collections_up_to(s, 64)
    rows = growth_rows(cols, [8, 16, 32, 64])
    by_L = {int(r.L): r.total for r in rows}
    ratios = [by_L[2 * L] / by_L[L] for L in (8, 16, 32)]
    monotone = all(a.total <= b.total for a, b in zip(rows, rows[1:]))
    failures = sum(1 for c in cols if c.configuration is None)
    validated = all(validate(c.configuration).ok for c in cols if c.configuration is not None)
    ok = (all(3.4 <= r <= 4.6 for r in ratios) and monotone and validated and failures == 0
          and t.seconds < 300)
    return ok, ("N = %s, ratios %s, %d extraction failures, %.0fs at L = 64"
                % ([r.total for r in rows], ", ".join("%.3f" % r for r in ratios), failures,
                   t.seconds))


PLUS_STRATA = [(12,), (14, -1, -1), (10, 2), (16,)]
WINDOW_STRATA = [(2, 2), (2, 1, 1), (1, 1, 1, 1), (2, -1, -1), (1, 1, -1, -1), (3, 1, 1, -1),
                 (4, -1, -1, -1, -1), (8,), (6, 2), (4, 4), (12,), (14, -1, -1), (10, 2), (16,)]


def check_vertex_lemmas():
    with Timer() as t:
        configs = {a: enumerate_configurations(a) for a in WINDOW_STRATA}
        plus = [(c, v) for a in PLUS_STRATA for c in configs[a]
                for v, kind in enumerate(c.kinds) if kind == PLUS][:1000]
        lemma_bad = 0
        for c, v in plus:
            comps = c.ribbon[v]
            r = len(comps)
            total = sum(c.interior[v]) + sum(k for comp in comps for _, k in comp)
            even = all(sum(k for _, k in comp) % 2 == 0 for comp in comps)
            if not (even and total >= 2 * r - 4 and (total - 2 * r) % 4 == 0):
                lemma_bad += 1
        window_bad = checked = 0
        for a, cs in configs.items():
            data = QSingularityData(a)
            g, poles = genus(data), a.count(-1)
            for c in cs:
                checked += 1
                total = sum(genus(st) for _, st in principal_boundary(c))
                inner = sum(ints.count(-1) for ints in c.interior)
                if not (total <= g <= total + 2 and inner <= poles <= inner + 4):
                    window_bad += 1
    ok = len(plus) == 1000 and lemma_bad == 0 and window_bad == 0 and t.seconds < 10
    return ok, ("%d plus vertices, %d lemma failures; %d configurations, %d window failures, "
                "%.1fs" % (len(plus), lemma_bad, checked, window_bad, t.seconds))


# -- pytest entry points --------------------------------------------------------------


def _run(number, title, check):
    ok, detail = check()
    print(record(number, title, ok, detail))
    assert ok, detail


def test_criterion_1_worked_example():
    _run(1, "worked example pipeline", check_worked_example)


def test_criterion_2_newborn_orders():
    _run(2, "newborn-order arithmetic", check_newborn_orders)


def test_criterion_3_genus2_table():
    _run(3, "genus-2 golden table", check_genus2_table)


def test_criterion_4_exceptional_list():
    _run(4, "exceptional-list coherence", check_exceptional_list)


def test_criterion_5_example_one():
    _run(5, "threesquare geometry", check_example_one)


@pytest.fixture(scope="module")
def cover_run():
    return check_double_cover_and_lengths()


def test_criterion_6_double_cover(cover_run):
    _run(6, "double-cover agreement", lambda: cover_run[0])


def test_criterion_7_length_dichotomy(cover_run):
    _run(7, "length dichotomy", lambda: cover_run[1])


def test_criterion_8_growth():
    _run(8, "quadratic growth", check_growth)


def test_criterion_9_vertex_lemmas():
    _run(9, "per-vertex arithmetic and windows", check_vertex_lemmas)


def main() -> int:
    cover, dichotomy = check_double_cover_and_lengths()
    checks = [(1, "worked example pipeline", check_worked_example),
              (2, "newborn-order arithmetic", check_newborn_orders),
              (3, "genus-2 golden table", check_genus2_table),
              (4, "exceptional-list coherence", check_exceptional_list),
              (5, "threesquare geometry", check_example_one),
              (6, "double-cover agreement", lambda: cover),
              (7, "length dichotomy", lambda: dichotomy),
              (8, "quadratic growth", check_growth),
              (9, "per-vertex arithmetic and windows", check_vertex_lemmas)]
    failed = 0
    for number, title, check in checks:
        ok, detail = check()
        print(record(number, title, ok, detail), flush=True)
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
