"""End-to-end acceptance checks.

Each criterion function computes a JSON-serializable report; the test
wrappers assert the criterion and print one PASS/FAIL line (visible with
-s, and in the failure output otherwise).  The final criterion replays
all the others and demands byte-identical reports.

The radius-9 search balls for the disjointness criterion are the
expensive part; they are enumerated once and shared through a module
cache.
"""

import itertools
import json
import math
import time

import coxwall as cw
from coxwall import coxeter_core as core
from coxwall.automorphisms import (
    StarFixingWitness,
    build_wall_fixing_automorphism,
    compute_H,
    halfspace_A,
    star_fixing_automorphisms,
    verify_disjoint,
)
from coxwall.ball import enumerate_ball
from coxwall.classification import (
    DiagramAutomorphism,
    SpecialSubset,
    is_hyperbolic,
    is_rigid,
    order_of_finite,
    rigidity_witnesses,
)
from coxwall.even_polytopes import (
    andreev_check,
    coxeter_cell,
    even_polyhedra_table,
    parallel_classes,
)
from coxwall.walls import check_axiom_M, is_geodesic_path

from conftest import bipartite_system, dihedral, h3bar_system, path_system, pentagon_system

INF = math.inf

BIG_BALL_CAP = 8_000_000

_systems = None
_ball_cache = {}


def catalog():
    global _systems
    if _systems is None:
        _systems = {
            "A2": dihedral(3),
            "B2": dihedral(4),
            "I2(5)": dihedral(5),
            "A3": path_system([3, 3]),
            "B3": path_system([4, 3]),
            "H3": path_system([5, 3]),
            "A~2": cw.new_system([[1, 3, 3], [3, 1, 3], [3, 3, 1]]),
            "W(4,C5)": pentagon_system(2),
            "W(6,K33)": bipartite_system(6, 3, 3),
            "A1^3": cw.new_system([[1, 2, 2], [2, 1, 2], [2, 2, 1]]),
            "H3bar": h3bar_system(),
            "DinfxDinf": cw.new_system(
                [[1, INF, 2, 2], [INF, 1, 2, 2], [2, 2, 1, INF], [2, 2, INF, 1]]
            ),
        }
    return _systems


def shared_ball(name, radius):
    key = (name, radius)
    if key not in _ball_cache:
        _ball_cache[key] = enumerate_ball(
            catalog()[name], radius, max_vertices=BIG_BALL_CAP
        )
    return _ball_cache[key]


# -- criterion 1: separating-wall count equals word distance ---------------------


CRITERION_1_SYSTEMS = (
    "A2",
    "B2",
    "I2(5)",
    "A3",
    "B3",
    "H3",
    "A~2",
    "W(4,C5)",
    "W(6,K33)",
)


def criterion_01():
    out = {}
    for name in CRITERION_1_SYSTEMS:
        ball = enumerate_ball(catalog()[name], 4)
        rep = check_axiom_M(ball)
        n = ball.size
        assert rep["pairs_checked"] == n * (n - 1) // 2
        out[name] = {
            "ball_size": n,
            "pairs": rep["pairs_checked"],
            "max_separating": rep["max_separating"],
            "violations": rep["violations"],
        }
    return {"systems": out}


def test_criterion_01_wall_length_identity():
    t0 = time.perf_counter()
    report = criterion_01()
    elapsed = time.perf_counter() - t0
    bad = {k: v["violations"] for k, v in report["systems"].items() if v["violations"]}
    pairs = sum(v["pairs"] for v in report["systems"].values())
    ok = not bad and elapsed < 60.0
    line = "criterion 1: wall count = distance on %d pairs across %d systems (%.1fs)" % (
        pairs,
        len(report["systems"]),
        elapsed,
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert not bad, bad
    assert elapsed < 60.0, "criterion 1 took %.1fs, budget is 60s" % elapsed


# -- criterion 2: three routes agree on geodesity ---------------------------------


CRITERION_2_SYSTEMS = ("A2", "B2", "I2(5)", "A3", "B3", "H3", "A~2")


def _graph_tables(ball):
    """Plain-dict adjacency of the ball: step table and neighbor lists."""
    step = {}
    nbrs = {}
    for u, s, v in ball.edge_array.tolist():
        step[(u, s)] = v
        step[(v, s)] = u
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    return step, nbrs


def _bfs_distances(nbrs, n):
    dist = [-1] * n
    dist[0] = 0
    frontier = [0]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in nbrs.get(u, ()):
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist

MAX_WORD_LEN = 7


def criterion_02():
    out = {}
    for name in CRITERION_2_SYSTEMS:
        system = catalog()[name]
        rank = system.rank
        ball = enumerate_ball(system, MAX_WORD_LEN)
        step, nbrs = _graph_tables(ball)
        dist = _bfs_distances(nbrs, ball.size)
        words = 0
        geodesics = 0
        mismatches = 0
        stack = [()]
        while stack:
            w = stack.pop()
            words += 1
            reduced = core.is_reduced(system, w)
            geodesic = is_geodesic_path(system, w)
            cur = 0
            for a in w:
                cur = step[(cur, a)]
            bfs_match = dist[cur] == len(w)
            if reduced == geodesic == bfs_match:
                geodesics += int(reduced)
            else:
                mismatches += 1
            if len(w) < MAX_WORD_LEN:
                for a in range(rank):
                    stack.append(w + (a,))
        expected = sum(rank**k for k in range(MAX_WORD_LEN + 1))
        assert words == expected
        out[name] = {"words": words, "geodesics": geodesics, "mismatches": mismatches}
    return {"systems": out}


def test_criterion_02_geodesic_three_way():
    report = criterion_02()
    total = sum(v["words"] for v in report["systems"].values())
    mism = sum(v["mismatches"] for v in report["systems"].values())
    ok = mism == 0
    line = "criterion 2: geodesic = reduced = BFS distance on %d words, %d mismatches" % (
        total,
        mism,
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, report


# -- criterion 3: enumerated sizes equal catalog orders ----------------------------


def criterion_03():
    cases = {}
    for m in range(2, 13):
        cases["I2(%d)" % m] = (dihedral(m), 2 * m)
    cases["A3"] = (catalog()["A3"], 24)
    cases["B3"] = (catalog()["B3"], 48)
    cases["H3"] = (catalog()["H3"], 120)
    cases["A1^3"] = (catalog()["A1^3"], 8)
    out = {}
    for name, (system, order) in sorted(cases.items()):
        ball = enumerate_ball(system, order)  # radius past any diameter
        out[name] = {
            "expected": order,
            "enumerated": ball.size,
            "catalog": order_of_finite(system),
        }
    return {"orders": out}


def test_criterion_03_finite_orders():
    report = criterion_03()
    bad = {
        k: v
        for k, v in report["orders"].items()
        if not (v["expected"] == v["enumerated"] == v["catalog"])
    }
    ok = not bad
    line = "criterion 3: %d finite orders match enumeration and catalog" % len(
        report["orders"]
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, bad


# -- criterion 4: cell face vectors and parallel classes ---------------------------


def _face_vector(cell):
    counts = cell.face_counts()
    return [counts[k] for k in sorted(counts)]


def _coset_formula_agrees(system, cell):
    """Count faces per spanning subset by the subgroup-index formula."""
    total = order_of_finite(system)
    for size in range(system.rank + 1):
        for T in itertools.combinations(range(system.rank), size):
            expected = total // order_of_finite(SpecialSubset(system, T))
            got = sum(1 for f in cell.faces if f.T == T)
            if expected != got:
                return False
    return True


def criterion_04():
    out = {}

    a3 = catalog()["A3"]
    cell = coxeter_cell(a3)
    squares = [f for f in cell.faces_of_dim(2) if a3.matrix.rows[f.T[0]][f.T[1]] == 2]
    hexagons = [f for f in cell.faces_of_dim(2) if a3.matrix.rows[f.T[0]][f.T[1]] == 3]
    classes = parallel_classes(cell)
    out["A3"] = {
        "face_vector": _face_vector(cell),
        "squares": len(squares),
        "hexagons": len(hexagons),
        "classes": [len(classes), len(classes[0].edges) if classes else 0],
        "coset_formula": _coset_formula_agrees(a3, cell),
    }

    cube = catalog()["A1^3"]
    cell = coxeter_cell(cube)
    classes = parallel_classes(cell)
    out["A1^3"] = {
        "face_vector": _face_vector(cell),
        "classes": [len(classes), len(classes[0].edges)],
        "coset_formula": _coset_formula_agrees(cube, cell),
    }

    for m in (2, 3, 4, 5, 6, 7):
        system = dihedral(m)
        cell = coxeter_cell(system)
        classes = parallel_classes(cell)
        out["I2(%d)" % m] = {
            "face_vector": _face_vector(cell),
            "classes": [len(classes), len(classes[0].edges)],
            "coset_formula": _coset_formula_agrees(system, cell),
        }

    return {"cells": out}


def test_criterion_04_cell_census():
    report = criterion_04()
    cells = report["cells"]
    ok = (
        cells["A3"]["face_vector"] == [24, 36, 14, 1]
        and cells["A3"]["squares"] == 6
        and cells["A3"]["hexagons"] == 8
        and cells["A3"]["classes"] == [6, 6]
        and cells["A1^3"]["face_vector"] == [8, 12, 6, 1]
        and cells["A1^3"]["classes"] == [3, 4]
        and all(
            cells["I2(%d)" % m]["face_vector"] == [2 * m, 2 * m, 1]
            and cells["I2(%d)" % m]["classes"] == [m, 2]
            for m in (2, 3, 4, 5, 6, 7)
        )
        and all(v["coset_formula"] for v in cells.values())
    )
    line = "criterion 4: face vectors, 2-face shapes, and parallel classes for %d cells" % len(
        cells
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, cells


# -- criterion 5: hyperbolicity fixtures --------------------------------------------


def criterion_05():
    out = {}
    for name in ("A~2", "DinfxDinf", "W(4,C5)", "W(6,K33)"):
        rep = is_hyperbolic(catalog()[name])
        out[name] = rep.as_dict()
    return {"systems": out}


def test_criterion_05_hyperbolicity_fixtures():
    report = criterion_05()
    systems = report["systems"]
    ok = (
        systems["A~2"]["hyperbolic"] is False
        and systems["A~2"]["witness"]["kind"] == "affine_subset"
        and systems["DinfxDinf"]["hyperbolic"] is False
        and systems["DinfxDinf"]["witness"]["kind"] == "commuting_infinite_pair"
        and systems["W(4,C5)"] == {"hyperbolic": True, "witness": None}
        and systems["W(6,K33)"] == {"hyperbolic": True, "witness": None}
    )
    line = "criterion 5: two flat witnesses found, two systems verified hyperbolic"
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, systems


# -- criterion 6: rigidity fixtures ---------------------------------------------------


def _replay_witness(system, witness_dict):
    """Rebuild the reported witness from its serialized form and revalidate."""
    perm = tuple(
        system.index(witness_dict["f"][nm]) for nm in system.generator_names
    )
    rebuilt = StarFixingWitness(
        system, witness_dict["s"], DiagramAutomorphism(system, perm)
    )
    return rebuilt.as_dict() == witness_dict


def criterion_06():
    out = {}
    rep = is_rigid(catalog()["A2"])
    out["A2"] = {"rigid": rep.rigid, "witness": None}
    for name in ("W(6,K33)", "H3bar"):
        system = catalog()[name]
        rep = is_rigid(system)
        witness = {"s": rep.witness[0], "f": rep.witness[1].as_dict()}
        out[name] = {
            "rigid": rep.rigid,
            "witness": witness,
            "witness_count": len(rigidity_witnesses(system)),
            "replay_ok": _replay_witness(system, witness),
        }
    return {"systems": out}


def test_criterion_06_rigidity_fixtures():
    report = criterion_06()
    systems = report["systems"]
    ok = (
        systems["A2"]["rigid"] is True
        and systems["W(6,K33)"]["rigid"] is False
        and systems["W(6,K33)"]["replay_ok"]
        and systems["H3bar"]["rigid"] is False
        and systems["H3bar"]["replay_ok"]
    )
    line = "criterion 6: A2 rigid; both product fixtures non-rigid with replayable witnesses"
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, systems


# -- criterion 7: half-space propagation set avoids the far side ----------------------


def criterion_07():
    out = {}
    # the larger fixture first: its radius-9 enumeration wants all the
    # memory headroom this process has
    for name in ("H3bar", "W(6,K33)"):
        system = catalog()[name]
        search = shared_ball(name, 9)
        report_ball = enumerate_ball(system, 5)
        entries = []
        for wit in star_fixing_automorphisms(system):
            h2 = compute_H(system, wit.s, 5, margin=2, ball=search)
            h4 = compute_H(system, wit.s, 5, margin=4, ball=search)
            aset = halfspace_A(system, wit.s, report_ball)
            disjoint = verify_disjoint(h2, aset)
            entries.append(
                {
                    "s": wit.s_name,
                    "f": wit.f.as_dict(),
                    "h_size": len(h2),
                    "far_side_size": len(aset),
                    "offenders": list(disjoint.offenders),
                    "margins_agree": h2.members == h4.members
                    and h2.stages == h4.stages,
                }
            )
        out[name] = entries
    return {"fixtures": out}


def test_criterion_07_halfspace_disjointness():
    report = criterion_07()
    bad = []
    n_wit = 0
    for name, entries in report["fixtures"].items():
        n_wit += len(entries)
        for e in entries:
            if e["offenders"] or not e["margins_agree"]:
                bad.append((name, e["s"]))
    ok = not bad and n_wit == 12
    line = (
        "criterion 7: H and the far side disjoint for %d witnesses, margins 2 and 4 agree"
        % n_wit
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, (bad, n_wit)


# -- criterion 8: the glued map on a radius-4 ball -------------------------------------


def criterion_08():
    system = catalog()["W(6,K33)"]
    wit = star_fixing_automorphisms(system)[0]
    phi = build_wall_fixing_automorphism(wit, 4, ball=shared_ball("W(6,K33)", 9))
    moved = phi.moved_pairs()
    swapped = {i for i, p in enumerate(wit.f.perm) if p != i}
    touch = all(set(phi.ball.word_indices_of(i)) & swapped for i, _ in moved)
    return {
        "s": wit.s_name,
        "f": wit.f.as_dict(),
        "checks": dict(phi.checks),
        "is_identity": phi.is_identity,
        "moved_pairs": len(moved),
        "moved_words_touch_swapped_letters": touch,
        "validity_radius": phi.validity_radius,
    }


def test_criterion_08_wall_fixing_map():
    report = criterion_08()
    ok = (
        all(report["checks"].values())
        and len(report["checks"]) == 4
        and report["is_identity"] is False
        and report["moved_pairs"] > 0
        and report["moved_words_touch_swapped_letters"]
    )
    line = (
        "criterion 8: glued map passes all four checks and moves %d vertices"
        % report["moved_pairs"]
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, report


# -- criterion 9: angle conditions across the table -------------------------------------


def criterion_09():
    families = 0
    failures = []
    for entry in even_polyhedra_table(3):
        if entry.n_constraint["kind"] == "set":
            ns = entry.n_constraint["values"]
        else:
            ns = (3, 4, 5, 6, 7, 12)
        if "2m" in entry.cellulation:
            cell_ids = [entry.cellulation.replace("2m", str(2 * m)) for m in (5, 7, 9)]
        else:
            cell_ids = [entry.cellulation]
        for cid in cell_ids:
            for n in ns:
                families += 1
                rep = andreev_check(cid, entry.angle_values(n))
                if not rep.ok:
                    failures.append([entry.coxeter_type, cid, n])
    flat_cube = andreev_check("cube", ("1/2", "1/2", "1/2"))
    thin_dode = andreev_check("dodecahedron", ("1/2", "1/6", "1/3"))
    return {
        "positive_cases": families,
        "failures": failures,
        "negative_cube": flat_cube.as_dict(),
        "negative_dodecahedron": thin_dode.as_dict(),
    }


def test_criterion_09_angle_table_consistency():
    report = criterion_09()
    ok = (
        not report["failures"]
        and report["negative_cube"]["ok"] is False
        and report["negative_cube"]["condition"] == 3
        and report["negative_dodecahedron"]["ok"] is False
        and report["negative_dodecahedron"]["condition"] == 2
    )
    line = (
        "criterion 9: %d table angle assignments admissible, both negative controls caught"
        % report["positive_cases"]
    )
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, report


# -- criterion 10: byte-identical reruns --------------------------------------------------


CRITERIA = {
    1: criterion_01,
    2: criterion_02,
    3: criterion_03,
    4: criterion_04,
    5: criterion_05,
    6: criterion_06,
    7: criterion_07,
    8: criterion_08,
    9: criterion_09,
}


def test_criterion_10_determinism():
    differing = []
    for idx, fn in sorted(CRITERIA.items()):
        first = json.dumps(fn(), sort_keys=True).encode()
        second = json.dumps(fn(), sort_keys=True).encode()
        if first != second:
            differing.append(idx)
    ok = not differing
    line = "criterion 10: criteria 1-9 rerun byte-identically"
    print(("PASS " if ok else "FAIL ") + line)
    assert ok, "criteria with differing reruns: %s" % differing
