"""Coxeter cells of finite systems and the even hyperbolic polyhedra table.

The cell of a finite system is the face poset of cosets wW_T over all
subsets T of the generators, each face keyed by its minimal-length coset
representative.  The 1-skeleton recovers the Cayley graph; edges fall into
parallelism classes indexed by the reflections.

The rank-2/3 table of even hyperbolic Coxeter polyhedra is shipped as
data, together with the fixed catalog of dual cellulations (tetrahedron,
cube, dodecahedron, and the lune cellulations "bigon-N") on whose
barycentric subdivisions the three cycle-sum angle conditions are checked
with exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .ball import enumerate_ball
from .classification import classify, order_of_finite
from .coxeter_core import CoxeterSystem, append_letter, new_system
from .errors import AngleRange, BadRank, NotFinite, UnknownCellulation
from .walls import wall_of_edge


def _min_coset_rep(system: CoxeterSystem, word: tuple, T: tuple) -> tuple:
    """Minimal-length representative of word * W_T, by descent stripping."""
    while True:
        for t in T:
            shorter = append_letter(system, word, t)
            if len(shorter) < len(word):
                word = shorter
                break
        else:
            return word


def _group_words(system: CoxeterSystem) -> list:
    dt = classify(system)
    if dt.tag != "finite":
        raise NotFinite(
            "not a finite system (%s)" % (", ".join(dt.component_names()) or "empty")
        )
    order = order_of_finite(system)
    ball = enumerate_ball(system, radius=order, max_vertices=order + 1)
    assert ball.size == order, "catalog order %d != enumerated %d" % (order, ball.size)
    return list(ball.iter_word_tuples())


@dataclass(frozen=True)
class Face:
    """One face: minimal coset representative plus the spanning subset."""

    rep: tuple  # reduced word, generator indices
    T: tuple    # sorted generator indices

    @property
    def dim(self) -> int:
        return len(self.T)


class CoxeterCell:
    """Face poset of a finite system's even polytope."""

    def __init__(self, system: CoxeterSystem, faces, words):
        self.system = system
        self.faces = tuple(faces)
        self._index = {(f.rep, f.T): i for i, f in enumerate(self.faces)}
        self._words = words

    def face_counts(self) -> dict:
        out = {}
        for f in self.faces:
            out[f.dim] = out.get(f.dim, 0) + 1
        return out

    def faces_of_dim(self, k: int) -> tuple:
        return tuple(f for f in self.faces if f.dim == k)

    def face_index(self, rep: tuple, T: tuple) -> int:
        return self._index[(tuple(rep), tuple(sorted(T)))]

    def contains(self, i: int, j: int) -> bool:
        """Face i lies in face j."""
        a, b = self.faces[i], self.faces[j]
        if not set(a.T) <= set(b.T):
            return False
        return _min_coset_rep(self.system, a.rep, b.T) == b.rep

    def covers(self) -> list:
        """Pairs (i, j): face j has one more spanning generator and contains i."""
        n = self.system.rank
        out = []
        for i, f in enumerate(self.faces):
            if f.dim == n:
                continue
            have = set(f.T)
            for s in range(n):
                if s in have:
                    continue
                T2 = tuple(sorted(f.T + (s,)))
                rep2 = _min_coset_rep(self.system, f.rep, T2)
                out.append((i, self._index[(rep2, T2)]))
        return out

    def boundary_euler_characteristic(self) -> int:
        counts = self.face_counts()
        return sum(
            (-1) ** k * c for k, c in counts.items() if k < self.system.rank
        )

    def vertex_edges(self, word: tuple) -> list:
        """Edge-face ids at the given vertex, one per generator."""
        out = []
        for s in range(self.system.rank):
            rep = _min_coset_rep(self.system, word, (s,))
            out.append(self._index[(rep, (s,))])
        return out

    def export_json_dict(self) -> dict:
        names = self.system.generator_names
        faces = [
            {
                "rep": [names[i] for i in f.rep],
                "T": [names[i] for i in f.T],
                "dim": f.dim,
            }
            for f in self.faces
        ]
        return {"faces": faces, "covers": [list(p) for p in self.covers()]}


def coxeter_cell(system: CoxeterSystem) -> CoxeterCell:
    """Build the full face poset; raises NotFinite on infinite systems."""
    words = _group_words(system)
    n = system.rank
    faces = []
    for size in range(n + 1):
        for T in itertools.combinations(range(n), size):
            seen = set()
            for w in words:
                rep = _min_coset_rep(system, w, T)
                if rep not in seen:
                    seen.add(rep)
                    faces.append(Face(rep, T))
    faces.sort(key=lambda f: (f.dim, f.T, len(f.rep), f.rep))
    return CoxeterCell(system, faces, words)


@dataclass(frozen=True)
class ParallelClass:
    """Edges sharing one wall; the wall's reflection swaps each edge's ends."""

    wall: object
    edges: tuple  # face indices into the owning cell


def parallel_classes(cell: CoxeterCell) -> list:
    system = cell.system
    groups = {}
    for i, f in enumerate(cell.faces):
        if f.dim != 1:
            continue
        u = system.element(f.rep)
        w = wall_of_edge(u, f.T[0])
        groups.setdefault(w, []).append(i)
    classes = [ParallelClass(w, tuple(ids)) for w, ids in groups.items()]
    classes.sort(key=lambda c: c.edges[0])
    return classes


def verify_simple(cell: CoxeterCell) -> bool:
    """Every vertex link is the full simplex on the generator set.

    Checks, for each vertex w and each subset T, that the T-face at w
    exists and that the edges of the cell lying in it at w are exactly the
    T-labeled ones.
    """
    system = cell.system
    n = system.rank
    for w in cell._words:
        edge_ids = cell.vertex_edges(w)
        vertex_id = cell._index[(w, ())]
        for size in range(n + 1):
            for T in itertools.combinations(range(n), size):
                rep = _min_coset_rep(system, w, T)
                key = (rep, T)
                if key not in cell._index:
                    return False
                fid = cell._index[key]
                if not cell.contains(vertex_id, fid):
                    return False
                inside = {
                    s for s in range(n) if cell.contains(edge_ids[s], fid)
                }
                if inside != set(T):
                    return False
    return True


# ---------------------------------------------------------------------------
# dual cellulations and the angle conditions


def _cellulation_from_system(system, T_V, T_E, T_F, slots) -> dict:
    """Typed barycentric-subdivision data from the flag structure of a
    finite rank-3 system.

    Vertices of the subdivision are the cosets of the three rank-2
    standard subgroups (types V, E, F by the given subsets); triangles are
    the per-element flags; 4-cycle data lists the chordless quadrilaterals.
    """
    words = _group_words(system)

    def coset_ids(T):
        reps = sorted(
            {_min_coset_rep(system, w, T) for w in words},
            key=lambda r: (len(r), r),
        )
        return {r: k for k, r in enumerate(reps)}

    ids = {"V": coset_ids(T_V), "E": coset_ids(T_E), "F": coset_ids(T_F)}
    subsets = {"V": T_V, "E": T_E, "F": T_F}
    flags = set()
    for w in words:
        flags.add(
            tuple(
                "%s%d" % (typ, ids[typ][_min_coset_rep(system, w, subsets[typ])])
                for typ in ("V", "E", "F")
            )
        )
    assert len(flags) == len(words), "flags must biject with group elements"

    adjacency = {}
    edge_types = {}
    for v, e, f in flags:
        for x, y in ((v, e), (v, f), (e, f)):
            adjacency.setdefault(x, set()).add(y)
            adjacency.setdefault(y, set()).add(x)
            edge_types[frozenset((x, y))] = x[0] + y[0] if x[0] < y[0] else y[0] + x[0]
    # tau-edge type names in V < E < F letter order: VE, EF, VF
    rename = {"EV": "VE", "FV": "VF", "FE": "EF"}
    edge_types = {k: rename.get(t, t) for k, t in edge_types.items()}

    vertices = sorted(adjacency)
    flag_set = {frozenset(fl) for fl in flags}
    for a, b, c in itertools.combinations(vertices, 3):
        if b in adjacency[a] and c in adjacency[a] and c in adjacency[b]:
            assert frozenset((a, b, c)) in flag_set, (
                "3-cycle not bounding a triangle: %s" % ((a, b, c),)
            )

    four_cycles = []
    seen = set()
    for x, y in itertools.combinations(vertices, 2):
        if y in adjacency[x]:
            continue
        common = sorted(adjacency[x] & adjacency[y])
        for u, w in itertools.combinations(common, 2):
            if w in adjacency[u]:
                continue
            key = frozenset((frozenset((x, y)), frozenset((u, w))))
            if key in seen:
                continue
            seen.add(key)
            cycle = (x, u, y, w)
            types = [
                edge_types[frozenset((cycle[i], cycle[(i + 1) % 4]))]
                for i in range(4)
            ]
            four_cycles.append({"cycle": list(cycle), "types": types})
    four_cycles.sort(key=lambda d: d["cycle"])

    edges = sorted(
        [sorted(k) + [t] for k, t in edge_types.items()],
        key=lambda e: (e[2], e[0], e[1]),
    )
    return {
        "counts": {typ: len(ids[typ]) for typ in ("V", "E", "F")},
        "edges": edges,
        "three_cycles": sorted(list(fl) for fl in flags),
        "four_cycles": four_cycles,
        "slots": slots,
    }


def _polyhedron_cellulation(m: int) -> dict:
    """tetrahedron / cube / dodecahedron: flags of the a-3-b-m-c system."""
    system = new_system([[1, 3, 2], [3, 1, m], [2, m, 1]], "abc")
    return _cellulation_from_system(
        system, (0, 1), (0, 2), (1, 2), {"VE": 0, "VF": 1, "EF": 2}
    )


def _bigon_cellulation(sides: int) -> dict:
    """bigon-N: the N/2-lune cellulation, flags of A1 x I2(N/2)."""
    k = sides // 2
    system = new_system([[1, 2, 2], [2, 1, k], [2, k, 1]], "abc")
    return _cellulation_from_system(
        system, (1, 2), (0, 1), (0, 2), {"VE": 1, "VF": 2, "EF": 0}
    )


_CELLULATION_BUILDERS = {
    "tetrahedron": lambda: _polyhedron_cellulation(3),
    "cube": lambda: _polyhedron_cellulation(4),
    "dodecahedron": lambda: _polyhedron_cellulation(5),
}

_cellulation_cache = {}


def cellulation_data(cellulation_id: str) -> dict:
    """Cycle data for one catalog cellulation.

    The fixed ids (tetrahedron, cube, dodecahedron, bigon-4/6/8/12) load
    from the shipped data file; other bigon-N ids are generated on demand
    for any even N >= 4.
    """
    if cellulation_id in _cellulation_cache:
        return _cellulation_cache[cellulation_id]
    shipped = _load_shipped_cellulations()
    if cellulation_id in shipped:
        data = shipped[cellulation_id]
    elif cellulation_id.startswith("bigon-"):
        try:
            sides = int(cellulation_id[6:])
        except ValueError:
            raise UnknownCellulation("bad cellulation id %r" % cellulation_id)
        if sides < 4 or sides % 2:
            raise UnknownCellulation(
                "bigon cellulations need an even side count >= 4, got %r"
                % cellulation_id
            )
        data = _bigon_cellulation(sides)
    else:
        raise UnknownCellulation("unknown cellulation id %r" % cellulation_id)
    _cellulation_cache[cellulation_id] = data
    return data


_shipped = None


def _load_shipped_cellulations() -> dict:
    global _shipped
    if _shipped is None:
        path = resources.files("coxwall.data").joinpath("cellulations.json")
        with path.open() as fh:
            _shipped = json.load(fh)
    return _shipped


@dataclass(frozen=True)
class AndreevReport:
    """Outcome of the three cycle-sum conditions; angles in units of pi."""

    ok: bool
    condition: int | None
    cycle: tuple | None
    total: Fraction | None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "condition": self.condition,
            "cycle": list(self.cycle) if self.cycle else None,
            "angle_sum_over_pi": str(self.total) if self.total is not None else None,
        }


def _parse_angle(value) -> Fraction:
    if isinstance(value, Fraction):
        f = value
    elif isinstance(value, str):
        f = Fraction(value)
    elif isinstance(value, (tuple, list)) and len(value) == 2:
        f = Fraction(value[0], value[1])
    else:
        raise AngleRange(
            "angles must be exact rationals (Fraction, 'p/q', or (p, q)), got %r"
            % (value,)
        )
    if not 0 < f <= Fraction(1, 2):
        raise AngleRange("angle %s*pi outside (0, pi/2]" % f)
    return f


def andreev_check(cellulation_id: str, angle_assignment) -> AndreevReport:
    """Evaluate the three cycle-sum conditions on a catalog cellulation.

    angle_assignment is either a mapping with keys "VE", "VF", "EF" or a
    length-3 sequence read through the cellulation's slot table (one angle
    per generator of the matching rank-3 system).  Angles are exact
    rational multiples of pi in (0, pi/2].

    Condition 1: 3-cycles not bounding a triangle must sum below pi
    (vacuous on this catalog, checked anyway).  Condition 2: triangle
    boundaries must sum above pi.  Condition 3: 4-cycles not bounding two
    adjacent triangles must sum below 2*pi.  The first violated cycle, in
    stored order, is reported.
    """
    data = cellulation_data(cellulation_id)
    if isinstance(angle_assignment, dict):
        missing = {"VE", "VF", "EF"} - set(angle_assignment)
        if missing:
            raise AngleRange("missing angle for tau-edge types %s" % sorted(missing))
        angles = {k: _parse_angle(angle_assignment[k]) for k in ("VE", "VF", "EF")}
    else:
        triple = list(angle_assignment)
        if len(triple) != 3:
            raise AngleRange("expected three angles, got %d" % len(triple))
        angles = {k: _parse_angle(triple[slot]) for k, slot in data["slots"].items()}

    flag_sum = angles["VE"] + angles["VF"] + angles["EF"]
    # condition 1 has no instances on this catalog (asserted at data
    # generation); it is kept for completeness via the stored lists
    for entry in data.get("non_bounding_three_cycles", ()):
        total = sum(angles[t] for t in entry["types"])
        if total >= 1:
            return AndreevReport(False, 1, tuple(entry["cycle"]), total)
    if data["three_cycles"] and flag_sum <= 1:
        # every bounding 3-cycle carries one edge of each type, so the
        # first stored flag is the first violation
        return AndreevReport(False, 2, tuple(data["three_cycles"][0]), flag_sum)
    for entry in data["four_cycles"]:
        total = sum(angles[t] for t in entry["types"])
        if total >= 2:
            return AndreevReport(False, 3, tuple(entry["cycle"]), total)
    return AndreevReport(True, None, None, None)


# ---------------------------------------------------------------------------
# the rank-2/3 table


@dataclass(frozen=True)
class PolyhedronTableEntry:
    """One row family of the even hyperbolic polyhedra table.

    Angles are strings in units of pi ("1/2", "1/n"); n_constraint tells
    which n are admitted.  Rank-2 entries record the side count and carry
    the free side-length parameter as an annotation only (it has no
    combinatorial shadow).
    """

    rank: int
    coxeter_type: str
    angles: tuple
    n_constraint: dict | None
    sides: object = None
    cellulation: str | None = None
    m_constraint: str | None = None
    annotation: str | None = None

    def allows(self, n: int) -> bool:
        c = self.n_constraint
        if c is None:
            return False
        if c["kind"] == "set":
            return n in c["values"]
        return n >= c["min"]

    def angle_values(self, n: int) -> tuple:
        if not self.allows(n):
            raise AngleRange(
                "n = %d outside the family %r for %s"
                % (n, self.n_constraint, self.coxeter_type)
            )
        return tuple(
            Fraction(1, n) if a == "1/n" else Fraction(a) for a in self.angles
        )

    def as_dict(self) -> dict:
        out = {
            "rank": self.rank,
            "coxeter_type": self.coxeter_type,
            "angles": list(self.angles),
            "n_constraint": self.n_constraint,
        }
        if self.rank == 2:
            out["sides"] = self.sides
            out["annotation"] = self.annotation
        else:
            out["cellulation"] = self.cellulation
        if self.m_constraint:
            out["m_constraint"] = self.m_constraint
        return out


_LENGTH_NOTE = "free side length parameter, any positive real"


def even_polyhedra_table(rank: int) -> list:
    """The classified even hyperbolic Coxeter polygons (rank 2) and
    polyhedra (rank 3), as symbolic families.

    Raises BadRank outside {2, 3}.
    """
    if rank == 2:
        ge3 = {"kind": "range", "min": 3}
        ge2 = {"kind": "range", "min": 2}
        rows = [
            ("A1xA1", 4, ge3, None),
            ("A2", 6, ge2, None),
            ("B2", 8, ge2, None),
            ("G2", 12, ge2, None),
            ("I2(m)", "2m", ge2, "m = 5 or m >= 7"),
        ]
        return [
            PolyhedronTableEntry(
                2,
                name,
                ("1/n",),
                constraint,
                sides=sides,
                m_constraint=mc,
                annotation=_LENGTH_NOTE,
            )
            for name, sides, constraint, mc in rows
        ]
    if rank == 3:
        n345 = {"kind": "set", "values": (3, 4, 5)}
        ge3 = {"kind": "range", "min": 3}
        out = []
        for w_name, cell_id, mc in (
            ("A1xA2", "bigon-6", None),
            ("A1xB2", "bigon-8", None),
            ("A1xG2", "bigon-12", None),
            ("A1xI2(m)", "bigon-2m", "m = 5 or m >= 7"),
        ):
            out.append(
                PolyhedronTableEntry(
                    3,
                    w_name,
                    ("1/2", "1/3", "1/n"),
                    n345,
                    cellulation=cell_id,
                    m_constraint=mc,
                )
            )
        for name, cell_id in (
            ("A3", "tetrahedron"),
            ("B3", "cube"),
            ("H3", "dodecahedron"),
        ):
            out.append(
                PolyhedronTableEntry(
                    3, name, ("1/2", "1/n", "1/2"), ge3, cellulation=cell_id
                )
            )
            out.append(
                PolyhedronTableEntry(
                    3, name, ("1/2", "1/n", "1/3"), n345, cellulation=cell_id
                )
            )
        return out
    raise BadRank("polyhedra table covers ranks 2 and 3, got %r" % rank)
