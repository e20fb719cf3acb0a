"""Link-graph constructions and Davis-ball cell censuses.

W(k,L) turns a simple graph into a Coxeter system: edges become k/2
labels, non-edges become infinite ones.  The vertex link of the resulting
polygonal complex recovers L; the Bourdon-building systems are the
complete-bipartite special case.  Censuses count cosets wW_T with minimal
representative inside a Cayley ball, one count per nerve face.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .ball import enumerate_ball
from .classification import is_hyperbolic, nerve
from .coxeter_core import INFINITY, CoxeterMatrix, CoxeterSystem, new_system
from .errors import KTooSmall, OddK, OddP
from .even_polytopes import _min_coset_rep


class LinkGraph:
    """A finite simple graph with labeled vertices.

    Loops and repeated edges are rejected; vertex order fixes the
    generator order of any system built from the graph.
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        known = set(self.vertices)
        seen = set()
        out = []
        for a, b in edges:
            a, b = str(a), str(b)
            if a == b:
                raise ValueError("loop at %r" % a)
            if a not in known or b not in known:
                raise ValueError("edge (%r, %r) uses an unknown vertex" % (a, b))
            key = frozenset((a, b))
            if key in seen:
                raise ValueError("repeated edge (%r, %r)" % (a, b))
            seen.add(key)
            out.append((a, b) if self.vertices.index(a) < self.vertices.index(b) else (b, a))
        out.sort(key=lambda e: (self.vertices.index(e[0]), self.vertices.index(e[1])))
        self.edges = tuple(out)

    def _nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def girth(self):
        """Length of a shortest cycle; math.inf for forests."""
        return nx.girth(self._nx())

    def is_connected(self) -> bool:
        return nx.is_connected(self._nx())

    def has_edge(self, a, b) -> bool:
        return (str(a), str(b)) in self.edges or (str(b), str(a)) in self.edges

    @classmethod
    def from_json_dict(cls, data: dict) -> "LinkGraph":
        return cls(data["vertices"], data["edges"])

    def to_json_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    def __repr__(self) -> str:  # pragma: no cover
        return "LinkGraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))


def link_cycle(n: int) -> LinkGraph:
    """The n-cycle on vertices v0..v(n-1)."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    names = ["v%d" % i for i in range(n)]
    return LinkGraph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def link_complete_bipartite(q: int, r: int) -> LinkGraph:
    """K_{q,r} on vertices s1..sq / t1..tr."""
    left = ["s%d" % (i + 1) for i in range(q)]
    right = ["t%d" % (j + 1) for j in range(r)]
    return LinkGraph(left + right, [(a, b) for a in left for b in right])


def _check_k(k: int) -> None:
    if k % 2:
        raise OddK("polygon parameter k must be even, got %d" % k)
    if k < 4:
        raise KTooSmall("polygon parameter k must be at least 4, got %d" % k)


def matrix_from_graph(link: LinkGraph, k: int) -> CoxeterMatrix:
    """Labels k/2 on the edges of the graph, infinity elsewhere."""
    _check_k(k)
    n = len(link.vertices)
    half = k // 2
    edge_set = {frozenset(e) for e in link.edges}
    rows = [
        [
            1
            if i == j
            else (
                half
                if frozenset((link.vertices[i], link.vertices[j])) in edge_set
                else INFINITY
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return CoxeterMatrix(rows)


def system_from_graph(link: LinkGraph, k: int) -> CoxeterSystem:
    """matrix_from_graph with the graph's vertex labels as generator names."""
    return new_system(matrix_from_graph(link, k), link.vertices)


def davis_vertex_link(system: CoxeterSystem) -> LinkGraph:
    """Graph on the generators with an edge wherever the label is finite."""
    n = system.rank
    rows = system.matrix.rows
    names = system.generator_names
    edges = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rows[i][j] != INFINITY
    ]
    return LinkGraph(names, edges)


def validate_kL(link: LinkGraph, k: int) -> dict:
    """Girth admissibility of (k, L) plus the hyperbolicity verdict.

    Girth at least 5 is required at k = 4 and at least 4 at k = 6; no
    girth constraint applies from k = 8 on.
    """
    _check_k(k)
    girth = link.girth()
    required = {4: 5, 6: 4}.get(k)
    ok = required is None or girth >= required
    system = system_from_graph(link, k)
    hyp = is_hyperbolic(system)
    return {
        "k": k,
        "girth": girth,
        "required_girth": required,
        "ok": ok,
        "hyperbolic": hyp.hyperbolic,
        "hyperbolicity_witness": hyp.witness,
    }


def bourdon_system(p: int, q: int) -> CoxeterSystem:
    """The W(p, K_{q,q}) system underlying the right-angled building I_{p,q}."""
    if p % 2:
        raise OddP("Bourdon parameter p must be even, got %d" % p)
    if q < 2:
        raise ValueError("Bourdon parameter q must be at least 2, got %d" % q)
    return system_from_graph(link_complete_bipartite(q, q), p)


@dataclass(frozen=True)
class CellCensus:
    """Coset counts per nerve face inside one Cayley ball."""

    radius: int
    vertex_names: tuple
    counts: dict  # face (sorted generator-index tuple, () for the empty face) -> count

    def count(self, T) -> int:
        lookup = {nm: i for i, nm in enumerate(self.vertex_names)}
        key = tuple(sorted(lookup[g] if isinstance(g, str) else int(g) for g in T))
        return self.counts[key]

    def by_dimension(self) -> dict:
        out = {}
        for T, c in self.counts.items():
            out[len(T)] = out.get(len(T), 0) + c
        return out

    def as_dict(self) -> dict:
        items = sorted(self.counts.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {
            "radius": self.radius,
            "counts": {
                ",".join(self.vertex_names[i] for i in T): c for T, c in items
            },
        }


def cell_census(system: CoxeterSystem, radius: int, max_vertices=None) -> CellCensus:
    """Count cosets wW_T meeting the radius-R ball, per nerve face T.

    A coset is counted when its minimal-length representative lies in the
    ball; stripping within W_T never increases length, so this is the same
    as meeting the ball at all.  The empty face counts the vertices.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    ball = enumerate_ball(system, radius, max_vertices=max_vertices)
    words = list(ball.iter_word_tuples())
    counts = {(): ball.size}
    for T in nerve(system).faces:
        seen = set()
        for w in words:
            seen.add(_min_coset_rep(system, w, T))
        counts[T] = len(seen)
    return CellCensus(radius, system.generator_names, counts)
