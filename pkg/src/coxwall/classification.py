"""Diagram classification and what hangs off it.

Finiteness and affineness of standard subgroups are decided by matching
connected diagram components against the classical catalogs.  Matching is
integer-only: shapes are compared by label-preserving graph isomorphism, so
there is no algebraic sign analysis anywhere on the main path.  An exact
definiteness oracle for the (doubled) cosine form is provided separately as
a cross-check for small rank.

On top of the classifier sit the nerve (all subsets generating a finite
standard subgroup), the word-hyperbolicity test by forbidden-subdiagram
scan, diagram automorphisms, and the rigidity test.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from importlib import resources

from .coxeter_core import INFINITY, CoxeterMatrix, CoxeterSystem, new_system
from .errors import NotFinite, ResourceLimit
from .field import FieldElement


def _load_catalog() -> dict:
    with resources.files("coxwall.data").joinpath("catalog.json").open() as fh:
        return json.load(fh)


_CATALOG = _load_catalog()

#: diagram automorphism search refuses ranks above this by default
DEFAULT_AUTOMORPHISM_RANK_BOUND = 12

#: subset scans (nerve restriction checks, hyperbolicity) refuse ranks above this
_SUBSET_SCAN_RANK_BOUND = 14


class SpecialSubset:
    """A subset of the generating set together with its induced label matrix.

    The induced matrix is the literal restriction of the parent matrix to
    the chosen rows and columns; members are stored as sorted indices.
    """

    __slots__ = ("system", "members", "matrix")

    def __init__(self, system: CoxeterSystem, members):
        idx = sorted({system.index(g) for g in members})
        self.system = system
        self.members = tuple(idx)
        if idx:
            rows = [[system.matrix.rows[i][j] for j in idx] for i in idx]
            self.matrix = CoxeterMatrix(rows)
        else:
            self.matrix = None

    @property
    def names(self) -> tuple:
        return tuple(self.system.name(i) for i in self.members)

    def __repr__(self) -> str:  # pragma: no cover
        return "SpecialSubset(%s)" % (", ".join(self.names) or "empty")


@dataclass(frozen=True)
class ComponentType:
    """One connected diagram component with its catalog verdict."""

    name: str        # catalog name like "A3", "I2(7)", "A~2", or "indefinite"
    members: tuple   # generator names in this component
    kind: str        # "finite" | "affine" | "indefinite"


@dataclass(frozen=True)
class DiagramType:
    """Classification of a subset: overall tag plus per-component names.

    The tag is "finite" when every component is finite, "affine" when every
    component is finite or affine and at least one is affine, and
    "indefinite" otherwise.
    """

    tag: str
    components: tuple

    def component_names(self) -> tuple:
        return tuple(c.name for c in self.components)


def _path_edges(labels) -> list:
    return [(i, i + 1, m) for i, m in enumerate(labels)]


def _rank_of_edges(edges) -> int:
    return 1 + max(max(e[0], e[1]) for e in edges)


def _adjacency(edges, k) -> list:
    adj = [dict() for _ in range(k)]
    for i, j, m in edges:
        adj[i][j] = m
        adj[j][i] = m
    return adj


def _finite_candidates(k):
    if k >= 1:
        yield "A%d" % k, _path_edges([3] * (k - 1))
    if k >= 3:
        yield "B%d" % k, _path_edges([4] + [3] * (k - 2))
    if k >= 4:
        edges = _path_edges([3] * (k - 2))
        edges.append((k - 3, k - 1, 3))
        yield "D%d" % k, edges
    for name, entry in _CATALOG["finite_exceptional"].items():
        edges = [tuple(e) for e in entry["edges"]]
        if _rank_of_edges(edges) == k:
            yield name, edges


def _affine_candidates(k):
    n = k - 1
    if k >= 3:
        yield "A~%d" % n, [(i, (i + 1) % k, 3) for i in range(k)]
        yield "C~%d" % n, _path_edges([4] + [3] * (k - 3) + [4])
    if k >= 4:
        edges = [(0, 2, 3), (1, 2, 3)]
        edges += [(i, i + 1, 3) for i in range(2, k - 2)]
        edges.append((k - 2, k - 1, 4))
        yield "B~%d" % n, edges
    if k >= 5:
        edges = [(0, 2, 3), (1, 2, 3)]
        edges += [(i, i + 1, 3) for i in range(2, k - 3)]
        edges += [(k - 3, k - 2, 3), (k - 3, k - 1, 3)]
        yield "D~%d" % n, edges
    for name, entry in _CATALOG["affine_exceptional"].items():
        edges = [tuple(e) for e in entry["edges"]]
        if _rank_of_edges(edges) == k:
            yield name, edges


def _bfs_vertex_order(adj) -> list:
    k = len(adj)
    seen = [False] * k
    order = []
    for start in range(k):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def _isomorphic(adj_a, adj_b) -> bool:
    """Label-preserving graph isomorphism by backtracking.

    Both graphs are tiny (catalog diagrams), so plain backtracking with a
    per-vertex incident-label-multiset filter is plenty.
    """
    k = len(adj_a)
    if len(adj_b) != k:
        return False
    prof_a = [tuple(sorted(d.values())) for d in adj_a]
    prof_b = [tuple(sorted(d.values())) for d in adj_b]
    if sorted(prof_a) != sorted(prof_b):
        return False
    order = _bfs_vertex_order(adj_a)
    image = [-1] * k
    used = [False] * k

    def place(pos: int) -> bool:
        if pos == k:
            return True
        v = order[pos]
        for w in range(k):
            if used[w] or prof_a[v] != prof_b[w]:
                continue
            ok = True
            for u, m in adj_a[v].items():
                iu = image[u]
                if iu >= 0 and adj_b[iu].get(w) != m:
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            if place(pos + 1):
                return True
            image[v] = -1
            used[w] = False
        return False

    return place(0)


def _components_of_matrix(rows) -> list:
    k = len(rows)
    seen = [False] * k
    comps = []
    for start in range(k):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        comp = []
        while queue:
            v = queue.pop(0)
            comp.append(v)
            for w in range(k):
                if w != v and not seen[w] and rows[v][w] != 2:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _rank2_name(m) -> tuple:
    if m == INFINITY:
        return "A~1", "affine"
    if m == 3:
        return "A2", "finite"
    if m == 4:
        return "B2", "finite"
    if m == 6:
        return "G2", "finite"
    return "I2(%d)" % m, "finite"


def _match_component(rows, comp) -> tuple:
    k = len(comp)
    if k == 1:
        return "A1", "finite"
    if k == 2:
        return _rank2_name(rows[comp[0]][comp[1]])
    labels = [rows[i][j] for i, j in itertools.combinations(comp, 2) if rows[i][j] != 2]
    if any(m == INFINITY for m in labels):
        # no finite or affine diagram on 3+ vertices carries an infinite label
        return "indefinite", "indefinite"
    pos = {g: t for t, g in enumerate(comp)}
    edges = [
        (pos[i], pos[j], rows[i][j])
        for i, j in itertools.combinations(comp, 2)
        if rows[i][j] != 2
    ]
    adj = _adjacency(edges, k)
    n_edges = len(edges)
    for name, cand in _finite_candidates(k):
        if len(cand) == n_edges and _isomorphic(adj, _adjacency(cand, k)):
            return name, "finite"
    for name, cand in _affine_candidates(k):
        if len(cand) == n_edges and _isomorphic(adj, _adjacency(cand, k)):
            return name, "affine"
    return "indefinite", "indefinite"


def _as_subset(subset) -> SpecialSubset:
    if isinstance(subset, CoxeterSystem):
        return SpecialSubset(subset, range(subset.rank))
    if isinstance(subset, SpecialSubset):
        return subset
    raise TypeError("expected a SpecialSubset or a CoxeterSystem")


def classify(subset) -> DiagramType:
    """Classify a standard subset by catalog matching, component by component."""
    subset = _as_subset(subset)
    if not subset.members:
        return DiagramType("finite", ())
    rows = subset.matrix.rows
    names = subset.names
    parts = []
    kinds = set()
    for comp in _components_of_matrix(rows):
        name, kind = _match_component(rows, comp)
        kinds.add(kind)
        parts.append(ComponentType(name, tuple(names[i] for i in comp), kind))
    if "indefinite" in kinds:
        tag = "indefinite"
    elif "affine" in kinds:
        tag = "affine"
    else:
        tag = "finite"
    return DiagramType(tag, tuple(parts))


_FAMILY_RE = re.compile(r"^([ABD])(\d+)$")


def _component_order(name: str) -> int:
    if name == "A1":
        return 2
    if name == "G2":
        return 12
    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    entry = _CATALOG["finite_exceptional"].get(name)
    if entry is not None:
        return entry["order"]
    m = _FAMILY_RE.match(name)
    if m is None:
        raise NotFinite("no order formula for component %r" % name)
    letter, n = m.group(1), int(m.group(2))
    if letter == "A":
        return math.factorial(n + 1)
    if letter == "B":
        return 2**n * math.factorial(n)
    return 2 ** (n - 1) * math.factorial(n)


def order_of_finite(subset) -> int:
    """Order of the standard subgroup, from catalog formulas.

    Raises NotFinite when the subset is not of finite type.
    """
    dt = classify(subset)
    if dt.tag != "finite":
        raise NotFinite(
            "subset classifies as %s (%s), not finite"
            % (dt.tag, ", ".join(dt.component_names()) or "empty")
        )
    total = 1
    for comp in dt.components:
        total *= _component_order(comp.name)
    return total


@dataclass(frozen=True)
class Nerve:
    """Simplicial complex of subsets generating finite standard subgroups.

    Faces are stored as sorted index tuples, ordered by (size, lex); every
    singleton is present, the empty face is implicit.
    """

    vertex_names: tuple
    faces: tuple

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def is_face(self, members) -> bool:
        key = tuple(sorted(self._indices(members)))
        return not key or key in set(self.faces)

    def _indices(self, members):
        lookup = {nm: i for i, nm in enumerate(self.vertex_names)}
        out = []
        for g in members:
            if isinstance(g, str):
                out.append(lookup[g])
            else:
                out.append(int(g))
        return out

    def maximal_faces(self) -> tuple:
        face_set = set(self.faces)
        out = []
        for f in self.faces:
            fs = set(f)
            cover = False
            for g in face_set:
                if len(g) == len(f) + 1 and fs <= set(g):
                    cover = True
                    break
            if not cover:
                out.append(f)
        return tuple(out)

    def faces_as_names(self) -> tuple:
        return tuple(tuple(self.vertex_names[i] for i in f) for f in self.faces)


def nerve(system: CoxeterSystem) -> Nerve:
    """All subsets of the generators spanning a finite standard subgroup.

    Monotone search: once a subset fails to be finite no superset is ever
    tested, since finiteness is inherited by standard subgroups of standard
    subgroups.
    """
    n = system.rank
    faces = [(i,) for i in range(n)]
    face_set = set(faces)
    layer = faces[:]
    while layer:
        nxt = []
        for f in layer:
            for s in range(f[-1] + 1, n):
                cand = f + (s,)
                if any(
                    cand[:i] + cand[i + 1 :] not in face_set
                    for i in range(len(cand) - 1)
                ):
                    continue
                if classify(SpecialSubset(system, cand)).tag == "finite":
                    nxt.append(cand)
                    face_set.add(cand)
        faces.extend(sorted(nxt))
        layer = nxt
    return Nerve(system.generator_names, tuple(faces))


@dataclass(frozen=True)
class HyperbolicityReport:
    """Verdict of the forbidden-subdiagram scan, with a witness when false."""

    hyperbolic: bool
    witness: dict | None

    def as_dict(self) -> dict:
        return {"hyperbolic": self.hyperbolic, "witness": self.witness}


def is_hyperbolic(system: CoxeterSystem) -> HyperbolicityReport:
    """Word-hyperbolicity by scanning for the two forbidden configurations.

    The group is not hyperbolic exactly when some subset induces a single
    affine component on 3 or more generators, or two disjoint subsets both
    generate infinite subgroups and commute (every cross label equals 2).
    Subsets are scanned in (size, lexicographic) order so the reported
    witness is deterministic.
    """
    n = system.rank
    if n > _SUBSET_SCAN_RANK_BOUND:
        raise ResourceLimit(
            "hyperbolicity scan over %d generators exceeds the 2**%d subset bound"
            % (n, _SUBSET_SCAN_RANK_BOUND)
        )
    rows = system.matrix.rows
    names = system.generator_names
    subsets = []
    for size in range(1, n + 1):
        subsets.extend(itertools.combinations(range(n), size))
    types = {T: classify(SpecialSubset(system, T)) for T in subsets}
    for T in subsets:
        dt = types[T]
        if len(T) >= 3 and dt.tag == "affine" and len(dt.components) == 1:
            return HyperbolicityReport(
                False,
                {
                    "kind": "affine_subset",
                    "members": [names[i] for i in T],
                    "type": dt.components[0].name,
                },
            )
    infinite = [T for T in subsets if types[T].tag != "finite"]
    for T1 in infinite:
        t1 = set(T1)
        commutant = {
            j for j in range(n) if j not in t1 and all(rows[i][j] == 2 for i in T1)
        }
        if not commutant:
            continue
        for T2 in infinite:
            if set(T2) <= commutant:
                return HyperbolicityReport(
                    False,
                    {
                        "kind": "commuting_infinite_pair",
                        "first": [names[i] for i in T1],
                        "second": [names[i] for i in T2],
                    },
                )
    return HyperbolicityReport(True, None)


@dataclass(frozen=True)
class DiagramAutomorphism:
    """A permutation of the generators preserving every label."""

    system: CoxeterSystem
    perm: tuple

    def apply_index(self, i: int) -> int:
        return self.perm[i]

    def apply_name(self, nm: str) -> str:
        return self.system.name(self.perm[self.system.index(nm)])

    def apply_word(self, word) -> tuple:
        return tuple(self.perm[i] for i in self.system.parse_word(word))

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm))

    def compose(self, other: "DiagramAutomorphism") -> "DiagramAutomorphism":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        return DiagramAutomorphism(
            self.system, tuple(self.perm[p] for p in other.perm)
        )

    def inverse(self) -> "DiagramAutomorphism":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return DiagramAutomorphism(self.system, tuple(inv))

    def as_dict(self) -> dict:
        return {
            self.system.name(i): self.system.name(p) for i, p in enumerate(self.perm)
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagramAutomorphism):
            return NotImplemented
        return self.system is other.system and self.perm == other.perm

    def __hash__(self) -> int:
        return hash((id(self.system), self.perm))


def diagram_automorphisms(
    system: CoxeterSystem, max_rank: int = DEFAULT_AUTOMORPHISM_RANK_BOUND
) -> list:
    """All label-preserving permutations of the generators.

    Backtracking with an incident-label-multiset filter; the resulting set
    is verified to be closed under composition before returning.  Raises
    ResourceLimit above max_rank generators.
    """
    n = system.rank
    if n > max_rank:
        raise ResourceLimit(
            "diagram automorphism search limited to rank <= %d, got %d"
            % (max_rank, n)
        )
    rows = system.matrix.rows
    prof = [tuple(sorted(rows[i][j] for j in range(n) if j != i)) for i in range(n)]
    found = []
    image = [-1] * n
    used = [False] * n

    def place(v: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for w in range(n):
            if used[w] or prof[v] != prof[w]:
                continue
            if any(
                image[u] >= 0 and rows[v][u] != rows[w][image[u]]
                for u in range(n)
                if u != v
            ):
                continue
            image[v] = w
            used[w] = True
            place(v + 1)
            image[v] = -1
            used[w] = False

    place(0)
    found.sort()
    perms = set(found)
    assert tuple(range(n)) in perms
    for a in found:
        for b in found:
            composed = tuple(a[p] for p in b)
            assert composed in perms, "automorphism set not closed under composition"
    return [DiagramAutomorphism(system, p) for p in found]


@dataclass(frozen=True)
class RigidityReport:
    """Outcome of the rigidity test; witness is (generator name, automorphism)."""

    rigid: bool
    witness: tuple | None


def rigidity_witnesses(system: CoxeterSystem) -> list:
    """All pairs (s, f): f a non-trivial diagram automorphism fixing s and
    every generator joined to s by a finite label."""
    n = system.rank
    rows = system.matrix.rows
    autos = diagram_automorphisms(system)
    out = []
    for s in range(n):
        finite_star = [t for t in range(n) if t != s and rows[s][t] != INFINITY]
        for f in autos:
            if f.is_identity or f.perm[s] != s:
                continue
            if all(f.perm[t] == t for t in finite_star):
                out.append((system.name(s), f))
    return out


def is_rigid(system: CoxeterSystem) -> RigidityReport:
    """A system is rigid when no non-trivial diagram automorphism fixes some
    generator together with its whole finite-label star."""
    witnesses = rigidity_witnesses(system)
    if witnesses:
        return RigidityReport(False, witnesses[0])
    return RigidityReport(True, None)


def _field_matrix(subset: SpecialSubset):
    sub_system = new_system(subset.matrix, subset.names)
    fld = sub_system.field
    k = sub_system.rank
    return [
        [FieldElement(fld, sub_system.twoB[i][j]) for j in range(k)] for i in range(k)
    ], fld


def _det(mat) -> FieldElement:
    k = len(mat)
    if k == 1:
        return mat[0][0]
    total = None
    for col in range(k):
        if mat[0][col].is_zero():
            continue
        minor = [
            [mat[r][c] for c in range(k) if c != col] for r in range(1, k)
        ]
        term = mat[0][col] * _det(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        fld = mat[0][0].field
        return FieldElement(fld, fld.zero)
    return total


def gram_definiteness(subset) -> str:
    """Exact definiteness of the doubled cosine form, rank <= 4 only.

    Returns "positive-definite", "positive-semidefinite", or "indefinite".
    This is the secondary oracle backing the catalog classifier: finite
    type must coincide with positive-definite, affine type with
    semidefinite.  Uses exact arithmetic in the cyclotomic-cosine ring, via
    cofactor determinants of all principal minors.
    """
    subset = _as_subset(subset)
    k = len(subset.members)
    if k == 0:
        return "positive-definite"
    if k > 4:
        raise ResourceLimit("definiteness oracle limited to rank <= 4, got rank %d" % k)
    mat, _ = _field_matrix(subset)
    leading_positive = True
    for size in range(1, k + 1):
        sub = [[mat[r][c] for c in range(size)] for r in range(size)]
        if _det(sub).sign() <= 0:
            leading_positive = False
            break
    if leading_positive:
        return "positive-definite"
    for size in range(1, k + 1):
        for rows_sel in itertools.combinations(range(k), size):
            sub = [[mat[r][c] for c in rows_sel] for r in rows_sel]
            if _det(sub).sign() < 0:
                return "indefinite"
    return "positive-semidefinite"
