"""Walls of a Coxeter group: separation, betweenness, geodesics.

Every reflection t (conjugate of a generator) splits the group into the
half-space A+ of elements w with l(w) < l(tw) and its complement A-.
The reflection, the pair {A+, A-}, and the positive root sent negative
by t all determine one another, so walls are keyed internally by their
positive root while equality is, mathematically, equality of the
reflections.

walls_separating and the axiom check both rest on the same fact: the
walls crossed by a reduced path are pairwise distinct and are exactly
the walls separating its endpoints, and their number is the distance.
The axiom check verifies that on every pair of a ball.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import coxeter_core as core
from .ball import CayleyBall, enumerate_ball, resolved_max_vertices
from .errors import RadiusTooSmall, ResourceLimit


class Wall:
    """The wall of a reflection u*s*u^{-1}.

    Keyed by the positive root of the reflection; two walls are equal
    exactly when their reflections are equal, since reflections and
    positive roots correspond one to one.
    """

    __slots__ = ("system", "root", "_witness", "_reflection")

    def __init__(self, system: core.CoxeterSystem, root: tuple, witness: tuple):
        self.system = system
        self.root = root
        self._witness = witness
        self._reflection = None

    @property
    def reflection(self) -> core.GroupElement:
        refl = self._reflection
        if refl is None:
            u_word, s = self._witness
            spelled = u_word + (s,) + tuple(reversed(u_word))
            refl = core.normal_form(self.system, spelled)
            self._reflection = refl
        return refl

    @property
    def witness(self) -> tuple:
        """(u, s): a vertex u and generator name s with wall u*s*u^{-1}."""
        u_word, s = self._witness
        return (
            core.GroupElement(self.system, u_word),
            self.system.name(s),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Wall):
            return NotImplemented
        if self.system is not other.system and self.system != other.system:
            return False
        return self.root == other.root

    def __hash__(self) -> int:
        return hash((self.system._signature, self.root))

    def __repr__(self) -> str:
        return "Wall(%r)" % (".".join(self.reflection.canonical_word()) or "?",)


class HalfSpace:
    """One side of a wall; the + side contains the identity."""

    __slots__ = ("wall", "sign")

    def __init__(self, wall: Wall, sign: str):
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        self.wall = wall
        self.sign = sign

    def contains(self, w: core.GroupElement) -> bool:
        return side_of(self.wall, w) == self.sign

    def opposite(self) -> "HalfSpace":
        return HalfSpace(self.wall, "-" if self.sign == "+" else "+")

    def __repr__(self) -> str:
        return "HalfSpace(%r, %s)" % (self.wall, self.sign)


def _normalized_root(system: core.CoxeterSystem, vec: tuple) -> tuple:
    sg = core.root_sign(system, vec)
    if sg < 0:
        fld = system.field
        return tuple(fld.neg(x) for x in vec)
    return vec


def wall_of_edge(u: core.GroupElement, s) -> Wall:
    """Wall of the Cayley edge from u to u*s, i.e. of u*s*u^{-1}."""
    system = u.system
    si = system.index(s)
    root = core.apply_word(system, u.word_indices(), system.basis_root(si))
    return Wall(system, _normalized_root(system, root), (u.word_indices(), si))


def wall_of_generator(system: core.CoxeterSystem, s) -> Wall:
    si = system.index(s)
    return Wall(system, system.basis_root(si), ((), si))


def side_of(wall: Wall, w: core.GroupElement) -> str:
    """'+' when w is on the identity side of the wall.

    That is: + iff l(w) < l(tw) for the wall's reflection t, which is
    equivalent to w^{-1} sending the wall's positive root to a positive
    root.
    """
    wall.system.check_same(w.system)
    vec = core.apply_word_inverse(wall.system, w.word_indices(), wall.root)
    sg = core.root_sign(wall.system, vec)
    if sg == 0:
        raise AssertionError("wall root mapped to zero, not a root")
    return "+" if sg > 0 else "-"


def walls_separating(x: core.GroupElement, y: core.GroupElement) -> list:
    """The walls separating x from y, in the order a geodesic from x
    crosses them.  There are exactly l(x^{-1}y), pairwise distinct."""
    x.system.check_same(y.system)
    system = x.system
    z = x.inverse() * y
    out = []
    cur = x.word_indices()
    for a in z.word_indices():
        root = core.apply_word(system, cur, system.basis_root(a))
        out.append(Wall(system, _normalized_root(system, root), (cur, a)))
        cur = core.append_letter(system, cur, a)
    return out


def is_between(z: core.GroupElement, x: core.GroupElement, y: core.GroupElement) -> bool:
    """Whether z lies between x and y: the walls separating x from y
    split as those separating x from z plus those separating z from y,
    which happens exactly when the lengths add."""
    z.system.check_same(x.system)
    z.system.check_same(y.system)
    xz = x.inverse() * z
    zy = z.inverse() * y
    xy = x.inverse() * y
    return xz.length + zy.length == xy.length


# ---------------------------------------------------------------------------
# geodesic words


def crossed_walls(system: core.CoxeterSystem, word) -> list:
    """Walls crossed by the combinatorial path 1, w1, w1w2, ... in order.

    The path need not be reduced; the i-th crossed wall is the wall of
    the i-th edge.
    """
    letters = system.parse_word(word)
    out = []
    for i, a in enumerate(letters):
        prefix = letters[:i]
        root = core.apply_word(system, prefix, system.basis_root(a))
        out.append(Wall(system, _normalized_root(system, root), (core.reduce_word(system, prefix), a)))
    return out


def geodesic_report(system: core.CoxeterSystem, word) -> dict:
    """Report on a combinatorial path: is it geodesic, and if not,
    which two of its steps cross the same wall (1-based positions)."""
    letters = system.parse_word(word)
    walls = crossed_walls(system, letters)
    seen: dict = {}
    repeat = None
    for pos, wl in enumerate(walls, start=1):
        if wl.root in seen and repeat is None:
            repeat = {
                "first": seen[wl.root],
                "second": pos,
                "reflection": list(wl.reflection.canonical_word()),
            }
        else:
            seen.setdefault(wl.root, pos)
    geodesic = repeat is None
    return {
        "word": list(system.word_names(letters)),
        "length": len(letters),
        "geodesic": geodesic,
        "reduced_length": core.normal_form(system, letters).length,
        "repeat": repeat,
    }


def is_geodesic_path(system: core.CoxeterSystem, word) -> bool:
    """True iff the path from the identity spelled by the word crosses
    pairwise distinct walls; agrees with is_reduced."""
    letters = system.parse_word(word)
    seen = set()
    for i, a in enumerate(letters):
        root = core.apply_word(system, letters[:i], system.basis_root(a))
        key = _normalized_root(system, root)
        if key in seen:
            return False
        seen.add(key)
    return True


# ---------------------------------------------------------------------------
# the axiom check


def _crossed_root_verdicts_rational(ball: CayleyBall) -> np.ndarray:
    """For every vertex (over a degree-1 ground ring): do the walls
    crossed by its canonical word repeat?  Vectorized per level.

    Returns a boolean array, True where a repeat occurs (violation).
    """
    system = ball.system
    r = system.rank
    twoB = np.array([[system.twoB[s][t][0] for t in range(r)] for s in range(r)], dtype=np.int64)
    bad = np.zeros(ball.size, dtype=bool)
    for lev in range(1, len(ball.level_sizes)):
        words = ball.words_at_level(lev)
        n = words.shape[0]
        if n == 0:
            continue
        cols = np.broadcast_to(np.eye(r, dtype=np.int64), (n, r, r)).copy()
        roots = np.empty((n, lev, r), dtype=np.int64)
        rows = np.arange(n)
        for k in range(lev):
            sk = words[:, k].astype(np.int64)
            colsk = cols[rows, sk]
            roots[:, k, :] = colsk
            coefs = twoB[sk]
            cols = cols - coefs[:, :, None] * colsk[:, None, :]
        lev_bad = np.zeros(n, dtype=bool)
        for i in range(lev):
            for j in range(i + 1, lev):
                lev_bad |= (roots[:, i, :] == roots[:, j, :]).all(axis=1)
        bad[ball.offsets[lev] : ball.offsets[lev] + n] = lev_bad
    return bad


def _crossed_root_verdicts_generic(ball: CayleyBall) -> np.ndarray:
    system = ball.system
    bad = np.zeros(ball.size, dtype=bool)
    for idx, word in enumerate(ball.iter_word_tuples()):
        seen = set()
        ok = True
        for i, a in enumerate(word):
            root = core.apply_word(system, word[:i], system.basis_root(a))
            if root in seen:
                ok = False
                break
            seen.add(root)
        bad[idx] = not ok
    return bad


def _bfs_distances(ball: CayleyBall, source: int, out: np.ndarray):
    indptr, nbr, _ = ball.adjacency()
    out.fill(-1)
    out[source] = 0
    frontier = np.array([source], dtype=np.int64)
    dist = 0
    while frontier.size:
        dist += 1
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        base = np.repeat(starts, counts)
        shift = np.arange(total, dtype=np.int64) - np.repeat(
            np.cumsum(counts) - counts, counts
        )
        nxt = nbr[base + shift]
        nxt = nxt[out[nxt] < 0]
        if nxt.size == 0:
            break
        nxt = np.unique(nxt)
        out[nxt] = dist
        frontier = nxt


def check_axiom_M(ball: CayleyBall, max_vertices: Optional[int] = None) -> dict:
    """Verify, for every pair x != y in the ball, that the walls
    separating x and y are at least one and exactly l(x^{-1}y) many.

    Distances are read off breadth-first searches in an ambient ball of
    twice the radius, where every geodesic between ball points stays
    (an interior point z has l(z) <= min(l(x), l(y)) + half the
    distance).  The repeated-wall check runs once per quotient element
    x^{-1}y, which all lie in the ambient ball; a deterministic
    subsample of pairs is re-checked against the wall objects
    themselves.

    Returns {"pairs_checked", "max_separating", "violations"}.
    """
    system = ball.system
    n = ball.size
    if n <= 1:
        return {"pairs_checked": 0, "max_separating": 0, "violations": []}
    ambient = enumerate_ball(system, 2 * ball.radius, max_vertices=resolved_max_vertices(max_vertices))

    if system.field.degree == 1:
        bad = _crossed_root_verdicts_rational(ambient)
    else:
        bad = _crossed_root_verdicts_generic(ambient)

    dist = np.empty(ambient.size, dtype=np.int16)
    max_sep = 0
    violations = []
    any_bad = bool(bad.any())
    # dual route on roughly 200 deterministically chosen pairs: build the
    # wall objects themselves and compare against the distances
    step = max(1, (n * (n - 1) // 2) // 200)
    counter = 0
    for i in range(n - 1):
        _bfs_distances(ambient, i, dist)
        local = dist[i + 1 : n]
        if (local < 0).any():
            raise AssertionError("ambient ball failed to connect two ball vertices")
        m = int(local.max())
        if m > max_sep:
            max_sep = m
        xi = None
        for j in range(i + 1, n):
            if any_bad:
                if xi is None:
                    xi = ball.element_of(i).inverse()
                z = xi * ball.element_of(j)
                if bad[ambient.index_of(z)]:
                    violations.append(
                        {
                            "x": list(ball.element_of(i).word()),
                            "y": list(ball.element_of(j).word()),
                            "length": int(dist[j]),
                            "problem": "walls crossed by a reduced word repeat",
                        }
                    )
            counter += 1
            if counter % step == 0:
                x = ball.element_of(i)
                y = ball.element_of(j)
                ws = walls_separating(x, y)
                if len(ws) != int(dist[j]) or len(set(ws)) != len(ws) or not ws:
                    violations.append(
                        {
                            "x": list(x.word()),
                            "y": list(y.word()),
                            "length": int(dist[j]),
                            "problem": "wall objects disagree with distances",
                        }
                    )

    return {
        "pairs_checked": n * (n - 1) // 2,
        "max_separating": max_sep,
        "violations": violations,
    }


# ---------------------------------------------------------------------------
# the graph recovered from betweenness


def wallspace_graph(ball: CayleyBall) -> set:
    """Edges of the wall-space graph on the radius-(R-1) core: x and y
    are adjacent when no third ball point lies between them.  Asserts
    that these are exactly the Cayley edges on the core.

    The core is used because a betweenness witness for boundary
    vertices can lie outside the ball.
    """
    if ball.radius < 2:
        raise RadiusTooSmall("wallspace_graph needs a ball of radius at least 2")
    if ball.size > 6000:
        raise ResourceLimit(
            "betweenness scan is cubic in the ball size, %d vertices is too many" % ball.size
        )
    n = ball.size
    n_core = ball.subball_size(ball.radius - 1)
    words = list(ball.iter_word_tuples())
    system = ball.system

    dist = np.empty((n, n), dtype=np.int16)
    for i in range(n):
        wi_rev = tuple(reversed(words[i]))
        for j in range(n):
            if j < i:
                dist[i, j] = dist[j, i]
                continue
            word = wi_rev
            for a in words[j]:
                word = core.append_letter(system, word, a)
            dist[i, j] = len(word)

    edges = set()
    for i in range(n_core):
        row = dist[i]
        through = row[:, None] + dist
        counts = (through == row[None, :]).sum(axis=0)
        for j in range(i + 1, n_core):
            if row[j] >= 1 and counts[j] == 2:
                edges.add(frozenset((ball.element_of(i), ball.element_of(j))))

    cayley = set()
    for u, s, v in ball.edge_array:
        u = int(u)
        v = int(v)
        if u < n_core and v < n_core:
            cayley.add(frozenset((ball.element_of(u), ball.element_of(v))))
    if edges != cayley:
        missing = cayley - edges
        extra = edges - cayley
        raise AssertionError(
            "betweenness graph differs from the Cayley graph on the core: "
            "%d missing, %d extra" % (len(missing), len(extra))
        )
    return edges
