"""Half-space machinery around a single wall.

For a generator s, the wall of s splits the group into the identity side
and the far side A_s.  A diagram automorphism that fixes s together with
every generator finitely linked to s can be propagated over the set H_s
of elements reachable from the identity without stepping through the
blocked edges at the subgroup of the finite star.  Gluing that
propagation to the identity off H_s yields a vertex map of a Cayley ball
that fixes the wall of s and both of its sides.
"""

from __future__ import annotations

import numpy as np

from . import coxeter_core as core
from .ball import CayleyBall, enumerate_ball
from .classification import DiagramAutomorphism, rigidity_witnesses
from .errors import NotAWitness, RadiusTooSmall, SystemMismatch
from .walls import side_of, wall_of_edge, wall_of_generator

DEFAULT_MARGIN = 2


def finite_star(system: core.CoxeterSystem, s) -> tuple:
    """Indices of the generators joined to s by a finite label, s included."""
    si = system.index(s)
    row = system.matrix.rows[si]
    return tuple(t for t in range(system.rank) if row[t] != core.INFINITY)


class StarFixingWitness:
    """A generator s plus a non-trivial diagram automorphism fixing s and
    its whole finite star pointwise."""

    __slots__ = ("system", "s", "f")

    def __init__(self, system: core.CoxeterSystem, s, f: DiagramAutomorphism):
        si = system.index(s)
        system.check_same(f.system)
        if f.is_identity:
            raise NotAWitness("the automorphism must be non-trivial")
        if f.perm[si] != si:
            raise NotAWitness("the automorphism must fix %s" % system.name(si))
        for t in finite_star(system, si):
            if f.perm[t] != t:
                raise NotAWitness(
                    "the automorphism moves %s, which carries a finite label at %s"
                    % (system.name(t), system.name(si))
                )
        self.system = system
        self.s = si
        self.f = f

    @property
    def s_name(self) -> str:
        return self.system.name(self.s)

    @property
    def star(self) -> tuple:
        return finite_star(self.system, self.s)

    def as_dict(self) -> dict:
        return {"s": self.s_name, "f": self.f.as_dict()}

    def __repr__(self) -> str:
        return "StarFixingWitness(s=%s, f=%s)" % (self.s_name, self.f.as_dict())


def star_fixing_automorphisms(system: core.CoxeterSystem) -> list:
    """All witnesses (s, f): f non-trivial, fixing s and every generator
    joined to s by a finite label.  Empty exactly when the system is
    rigid in the half-space sense."""
    return [
        StarFixingWitness(system, name, f) for name, f in rigidity_witnesses(system)
    ]


def halfspace_A(system: core.CoxeterSystem, s, ball: CayleyBall) -> tuple:
    """Vertex ids of the ball on the far side of the wall of s.

    These are the w with l(sw) < l(w); the identity is never among them
    and s always is.
    """
    system.check_same(ball.system)
    wall = wall_of_generator(system, s)
    out = []
    for idx in range(ball.size):
        if side_of(wall, ball.element_of(idx)) == "-":
            out.append(idx)
    return tuple(out)


class HSet:
    """The members of H_s inside a radius-R ball, with their stages.

    H_s collects the elements reachable from the identity along edges
    that either carry a label other than s, or carry s but start outside
    the subgroup generated by the finite star of s.  The stage of a
    member is the count of blocked-subgroup coset hops its construction
    needs; stage 1 is the subgroup generated by everything except s.
    """

    __slots__ = ("system", "s", "radius", "margin", "members", "stages", "_mset")

    def __init__(self, system, s, radius, margin, members, stages):
        self.system = system
        self.s = s
        self.radius = radius
        self.margin = margin
        self.members = tuple(members)
        self.stages = tuple(stages)
        self._mset = frozenset(self.members)

    @property
    def s_name(self) -> str:
        return self.system.name(self.s)

    def __contains__(self, idx) -> bool:
        return idx in self._mset

    def __len__(self) -> int:
        return len(self.members)

    def stage_of(self, idx: int) -> int:
        pos = self.members.index(idx)
        return self.stages[pos]

    def as_dict(self) -> dict:
        return {
            "s": self.s_name,
            "radius": self.radius,
            "margin": self.margin,
            "members": list(self.members),
            "stages": list(self.stages),
        }

    def __repr__(self) -> str:
        return "HSet(s=%s, radius=%d, members=%d)" % (
            self.s_name,
            self.radius,
            len(self.members),
        )


def _closure(indptr, nbr, lab, seeds, allowed_labels, n):
    """Members reachable from the seed mask along edges whose label mask
    is set, staying inside the cutoff."""
    reach = seeds.copy()
    frontier = np.flatnonzero(seeds)
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        base = np.repeat(starts, counts)
        shift = np.arange(total, dtype=np.int64) - np.repeat(
            np.cumsum(counts) - counts, counts
        )
        edge_ids = base + shift
        nxt = nbr[edge_ids]
        keep = allowed_labels[lab[edge_ids]] & (nxt < n)
        nxt = nxt[keep]
        nxt = nxt[~reach[nxt]]
        if nxt.size == 0:
            break
        nxt = np.unique(nxt)
        reach[nxt] = True
        frontier = nxt
    return reach


def compute_H(
    system: core.CoxeterSystem,
    s,
    radius: int,
    margin: int = DEFAULT_MARGIN,
    *,
    ball: CayleyBall = None,
    max_vertices=None,
) -> HSet:
    """Members of H_s within the radius-R ball, with stage indices.

    The reachability search runs in the larger radius-(R + margin) ball
    so that paths may leave the reported ball and come back; the margin
    is a soundness buffer, not a proven bound.  Members are reported
    only within radius R.  Stages are computed by the alternating
    closure recursion and the member set is cross-checked against a
    direct search over allowed edges.
    """
    if radius < 1:
        raise RadiusTooSmall("compute_H needs radius >= 1, got %d" % radius)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    si = system.index(s)
    if ball is None:
        ball = enumerate_ball(system, radius + margin, max_vertices=max_vertices)
    else:
        system.check_same(ball.system)
        if ball.radius < radius + margin:
            raise RadiusTooSmall(
                "ball of radius %d cannot host radius %d with margin %d"
                % (ball.radius, radius, margin)
            )
    n = ball.subball_size(radius + margin)
    report_n = ball.subball_size(radius)
    rank = system.rank
    star = finite_star(system, si)
    in_wts = ball.membership_in_standard_subgroup(frozenset(star))[:n].copy()
    indptr, nbr, lab = ball.adjacency()

    # Direct route: search over allowed edges.  An s-edge is allowed
    # exactly when it misses the finite-star subgroup, and such an edge
    # never has just one endpoint in that subgroup.
    reach = np.zeros(n, dtype=bool)
    reach[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        base = np.repeat(starts, counts)
        shift = np.arange(total, dtype=np.int64) - np.repeat(
            np.cumsum(counts) - counts, counts
        )
        edge_ids = base + shift
        nxt = nbr[edge_ids]
        src = np.repeat(frontier, counts)
        ok = nxt < n
        labels = lab[edge_ids]
        allowed = labels != si
        both_out = ok & ~in_wts[nxt % n] & ~in_wts[src]
        keep = ok & (allowed | both_out)
        nxt = nxt[keep]
        nxt = nxt[~reach[nxt]]
        if nxt.size:
            nxt = np.unique(nxt)
            reach[nxt] = True
            frontier = nxt
        else:
            break

    # Stage route: alternate subgroup closures.
    no_s = np.ones(rank, dtype=bool)
    no_s[si] = False
    star_labels = np.zeros(rank, dtype=bool)
    for t in star:
        star_labels[t] = True
    stage = np.full(n, -1, dtype=np.int32)
    seeds = np.zeros(n, dtype=bool)
    seeds[0] = True
    h_prev = np.zeros(n, dtype=bool)
    level = 1
    while True:
        h_cur = _closure(indptr, nbr, lab, seeds, no_s, n)
        fresh = h_cur & (stage < 0)
        stage[fresh] = level
        h_all = h_cur | h_prev
        if not fresh.any() and level > 1:
            break
        k_seeds = h_all & ~in_wts
        if not k_seeds.any():
            break
        k_next = _closure(indptr, nbr, lab, k_seeds, star_labels, n)
        if not (k_next & (stage < 0)).any() and (k_next <= h_all).all():
            break
        seeds = k_next
        h_prev = h_all
        level += 1
        if level > n + 1:
            raise AssertionError("stage recursion failed to terminate")

    staged = stage >= 0
    if not np.array_equal(staged, reach):
        raise AssertionError(
            "stage recursion and allowed-edge search disagree on H membership"
        )

    members = np.flatnonzero(reach[:report_n])
    return HSet(
        system,
        si,
        radius,
        margin,
        [int(i) for i in members],
        [int(stage[i]) for i in members],
    )


class DisjointnessReport:
    """Outcome of an emptiness check of an intersection."""

    __slots__ = ("ok", "offenders")

    def __init__(self, ok: bool, offenders: tuple):
        self.ok = ok
        self.offenders = offenders

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "offenders": list(self.offenders)}

    def __repr__(self) -> str:
        return "DisjointnessReport(ok=%s, offenders=%s)" % (self.ok, self.offenders)


def verify_disjoint(hset: HSet, aset) -> DisjointnessReport:
    """Check that the H members and the far-side vertex ids are disjoint.

    Both id collections must refer to the same system's ball; ids are
    stable under enlarging the radius, so balls of different radii over
    one system are compatible.  A non-empty intersection signals an
    implementation bug, and the offenders are returned for diagnosis.
    """
    bad = sorted(set(hset.members) & set(aset))
    return DisjointnessReport(not bad, tuple(bad))


class PartialAutomorphism:
    """A vertex map of a Cayley ball: letterwise image under the witness
    automorphism on H_s, the identity elsewhere.

    The map is checked within validity_radius (one less than the ball
    radius, so every edge check has both endpoints' data): it is a
    bijection there, compatible with edges and labels, fixes the far
    side of the wall of s pointwise, and fixes both endpoints of every
    edge crossing that wall.
    """

    __slots__ = ("witness", "ball", "radius", "validity_radius", "mapping", "hset", "checks")

    def __init__(self, witness, ball, radius, validity_radius, mapping, hset, checks):
        self.witness = witness
        self.ball = ball
        self.radius = radius
        self.validity_radius = validity_radius
        self.mapping = mapping
        self.hset = hset
        self.checks = checks

    def apply(self, idx: int) -> int:
        return int(self.mapping[idx])

    @property
    def is_identity(self) -> bool:
        return bool((self.mapping == np.arange(self.mapping.shape[0])).all())

    def fixed_ids(self) -> list:
        return [int(i) for i in np.flatnonzero(self.mapping == np.arange(self.mapping.shape[0]))]

    def moved_pairs(self) -> list:
        moved = np.flatnonzero(self.mapping != np.arange(self.mapping.shape[0]))
        return [(int(i), int(self.mapping[i])) for i in moved]

    def as_dict(self) -> dict:
        return {
            "s": self.witness.s_name,
            "f": self.witness.f.as_dict(),
            "radius": self.radius,
            "validity_radius": self.validity_radius,
            "fixed": self.fixed_ids(),
            "moved": [{"from": a, "to": b} for a, b in self.moved_pairs()],
            "checks": dict(self.checks),
        }

    def __repr__(self) -> str:
        return "PartialAutomorphism(s=%s, radius=%d, moved=%d)" % (
            self.witness.s_name,
            self.radius,
            len(self.moved_pairs()),
        )


def build_wall_fixing_automorphism(
    witness: StarFixingWitness,
    radius: int,
    *,
    ball: CayleyBall = None,
    max_vertices=None,
) -> PartialAutomorphism:
    """Assemble and verify the glued vertex map for a witness.

    The map sends a member w of H_s to the renormalized letterwise image
    of its word under the witness automorphism and fixes every other
    vertex.  Verification runs within radius - 1.
    """
    if not isinstance(witness, StarFixingWitness):
        raise NotAWitness("expected a StarFixingWitness, got %r" % (witness,))
    # re-derive the invariants; a hand-built object could have gone stale
    StarFixingWitness(witness.system, witness.s, witness.f)
    if radius < 2:
        raise RadiusTooSmall(
            "build_wall_fixing_automorphism needs radius >= 2, got %d" % radius
        )
    system = witness.system
    si = witness.s
    f = witness.f
    if ball is None:
        ball = enumerate_ball(
            system, radius + DEFAULT_MARGIN, max_vertices=max_vertices
        )
    else:
        system.check_same(ball.system)
    hset = compute_H(system, si, radius, ball=ball)
    size_r = ball.subball_size(radius)
    size_v = ball.subball_size(radius - 1)

    mapping = np.arange(size_r, dtype=np.int64)
    perm = f.perm
    for idx in hset.members:
        word = ball.word_indices_of(idx)
        image = core.shortlex_word(system, tuple(perm[a] for a in word))
        mapping[idx] = ball.index_of(image)

    checks = {}

    # (a) bijection on the validity ball
    checks["bijection"] = bool(
        np.array_equal(np.sort(mapping[:size_v]), np.arange(size_v))
    )

    # (b) edges map to edges with the witness-permuted label on H
    in_h = np.zeros(size_r, dtype=bool)
    for idx in hset.members:
        in_h[idx] = True
    edge_ok = True
    wall_s = wall_of_generator(system, si)
    wall_edges = []
    e = ball.edge_array
    inner = (e[:, 0] < size_v) & (e[:, 2] < size_v)
    for u, t, v in e[inner]:
        u = int(u)
        t = int(t)
        v = int(v)
        label = perm[t] if in_h[u] else t
        pu_word = ball.word_indices_of(int(mapping[u]))
        image = core.shortlex_word(system, core.append_letter(system, pu_word, label))
        if ball.index_of(image) != int(mapping[v]):
            edge_ok = False
        if wall_of_edge(ball.element_of(u), t) == wall_s:
            wall_edges.append((u, v))
    checks["edge_labels"] = edge_ok

    # (c) the far side of the wall of s is fixed pointwise
    far_ok = True
    for a in range(size_v):
        if side_of(wall_s, ball.element_of(a)) == "-" and int(mapping[a]) != a:
            far_ok = False
    checks["fixes_far_side"] = far_ok

    # (d) both endpoints of every edge crossing the wall of s are fixed
    checks["fixes_wall_edges"] = all(
        int(mapping[u]) == u and int(mapping[v]) == v for u, v in wall_edges
    )

    for nm, val in checks.items():
        if not val:
            raise AssertionError("glued map failed its %s check" % nm)

    return PartialAutomorphism(witness, ball, radius, radius - 1, mapping, hset, checks)
