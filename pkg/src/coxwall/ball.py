"""Metric balls in the Cayley graph, enumerated exactly at scale.

The enumerator is a level-synchronized breadth-first search.  Group
elements are represented by their action matrices on the root space;
entries live in the ground ring and are stored as integer coordinate
vectors.  All bulk arithmetic runs in float64, which is exact as long
as every integer stays below 2**53; a growth guard enforces that with
room to spare and fails loudly instead of silently rounding.

Each level is produced in two passes so the full set of candidate
matrices never has to sit in memory at once:

- pass one replays every (parent, generator) expansion chunk by chunk,
  keeps two independent 64-bit hash keys per candidate plus the parent
  row and generator label, and drops the matrices;
- the keys are grouped; the first occurrence of each group, in
  (parent, generator) order, names the new vertex, which makes the
  discovery word of every vertex its ShortLex normal form;
- pass two replays the same chunks, writes each group representative's
  matrix into the level store, and compares every duplicate against
  its representative byte for byte.

Hashing therefore only buckets; equality of matrices is always decided
exactly.  A hash collision (two distinct matrices in one bucket) is
detected by the comparison pass and the level is redone with fresh
hash multipliers.

Levels beyond the current frontier keep only their packed words, so
peak memory is one level of matrices plus chunk-sized transients.  A
frontier too large for memory spills to a temporary memmap.
"""

from __future__ import annotations

import math
import os
import shutil
import tempfile
from typing import Iterable, Optional

import numpy as np

from . import coxeter_core as core
from .errors import ResourceLimit

DEFAULT_MAX_VERTICES = 2_000_000
MAX_VERTICES_ENV = "COXWALL_MAX_VERTICES"

_CHUNK_PARENTS = 12288
_SPILL_BYTES = 700 * 2**20
_FLOAT_EXACT_LIMIT = float(2**52)


def resolved_max_vertices(max_vertices: Optional[int]) -> int:
    if max_vertices is not None:
        return int(max_vertices)
    env = os.environ.get(MAX_VERTICES_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_MAX_VERTICES


class _SystemArrays:
    """Numpy constants of a system used by the bulk engine."""

    __slots__ = ("rank", "degree", "mult", "powers", "powers_abs", "growth_factor")

    def __init__(self, system: core.CoxeterSystem):
        fld = system.field
        r = system.rank
        d = fld.degree
        self.rank = r
        self.degree = d
        mult = np.zeros((r, r, d, d), dtype=np.float64)
        for s in range(r):
            for t in range(r):
                beta = system.twoB[s][t]
                for a in range(d):
                    unit = tuple(1 if k == a else 0 for k in range(d))
                    prod = fld.mul(unit, beta)
                    mult[s, t, a, :] = prod
        self.mult = mult
        # powers of the ring generator, for fast approximate evaluation
        c = fld.c_float
        self.powers = np.array([c**k for k in range(d)], dtype=np.float64)
        self.powers_abs = np.abs(self.powers)
        colsums = np.abs(mult).sum(axis=2)
        self.growth_factor = 1.0 + float(colsums.max()) if colsums.size else 2.0


def _system_arrays(system: core.CoxeterSystem) -> _SystemArrays:
    cached = system._numpy_cache
    if cached is None:
        cached = _SystemArrays(system)
        system._numpy_cache = cached
    return cached


def _hash_multipliers(retry: int, width: int) -> tuple:
    rng = np.random.default_rng(0x5EED0 + 7919 * retry)
    a1 = rng.integers(1, 2**63, size=width, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    a2 = rng.integers(1, 2**63, size=width, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    return a1, a2


class _LevelStore:
    """Matrices of one level, in RAM or spilled to a memmap file."""

    def __init__(self, count: int, width: int, dtype, tmpdir: str, tag: str):
        self.count = count
        self.width = width
        nbytes = count * width * np.dtype(dtype).itemsize
        self.path = None
        if nbytes > _SPILL_BYTES:
            self.path = os.path.join(tmpdir, "level_%s.dat" % tag)
            self.data = np.memmap(self.path, dtype=dtype, mode="w+", shape=(count, width))
        else:
            self.data = np.empty((count, width), dtype=dtype)

    def close(self):
        data = self.data
        self.data = None
        if self.path is not None:
            # release the mapping before unlinking the backing file
            del data
            try:
                os.unlink(self.path)
            except OSError:
                pass
        self.path = None


class _SignResolver:
    """Exact fallback for coordinate signs the float screen cannot call."""

    def __init__(self, system: core.CoxeterSystem):
        self.field = system.field
        self.ambiguous = 0

    def resolve(self, ints_rows: np.ndarray) -> np.ndarray:
        out = np.empty(len(ints_rows), dtype=np.int8)
        for k, row in enumerate(ints_rows):
            out[k] = self.field.sign(tuple(int(x) for x in row))
        self.ambiguous += len(ints_rows)
        return out


def _coordinate_negative(chunk: np.ndarray, arrays: _SystemArrays, resolver: _SignResolver):
    """Boolean array [parent, column, row]: coordinate sign is negative.

    chunk has shape (n, rank, rank, degree) with row-major matrix axes
    (row, column, coefficient).  Exact zero is decided by the all-zero
    coefficient test; nonzero signs come from a float screen with an
    interval-style error bound, falling back to exact ring arithmetic
    when the screen cannot decide.
    """
    cols = chunk.transpose(0, 2, 1, 3)
    vals = cols @ arrays.powers
    bound = (np.abs(cols) @ arrays.powers_abs) * (arrays.degree * 2.0**-50)
    nonzero = cols.any(axis=3)
    neg = (vals < -bound) & nonzero
    pos = (vals > bound) & nonzero
    unsure = nonzero & ~neg & ~pos
    if unsure.any():
        where = np.argwhere(unsure)
        rows = cols[unsure]
        signs = resolver.resolve(rows.astype(np.int64))
        neg[where[:, 0], where[:, 1], where[:, 2]] = signs < 0
    return neg


def _expand_chunk(chunk_f64: np.ndarray, arrays: _SystemArrays, resolver: _SignResolver):
    """All ascending (parent, generator) products of one parent chunk.

    Returns (products, parent_rows, labels) in parent-major,
    generator-minor order; products has shape (m, rank, rank, degree).
    A pair ascends when the parent matrix's generator column is a
    positive root, i.e. has no negative coordinate.
    """
    n, r, _, d = chunk_f64.shape
    neg = _coordinate_negative(chunk_f64, arrays, resolver)
    ascending = ~neg.any(axis=2)
    prods = []
    parents = []
    labels = []
    for s in range(r):
        rows = np.nonzero(ascending[:, s])[0]
        if rows.size == 0:
            continue
        sub = chunk_f64[rows]
        col = sub[:, :, s, :]
        delta = np.einsum("nid,tde->nite", col, arrays.mult[s], optimize=True)
        prods.append(sub - delta)
        parents.append(rows)
        labels.append(np.full(rows.size, s, dtype=np.int64))
    if not prods:
        empty = np.empty((0, r, r, d), dtype=np.float64)
        return empty, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    prod = np.concatenate(prods, axis=0)
    parent = np.concatenate(parents)
    label = np.concatenate(labels)
    order = np.lexsort((label, parent))
    return prod[order], parent[order], label[order]


def _keys_of(flat_f64: np.ndarray, a1: np.ndarray, a2: np.ndarray):
    # hash two's-complement integer values, not float bit patterns: the
    # float sign bit sits alone in the top bit, so matrices differing by
    # an even number of sign flips would collide for every choice of odd
    # multipliers (x and -x float patterns differ only in bit 63)
    u = flat_f64.astype(np.int64).view(np.uint64)
    k1 = (u * a1).sum(axis=1, dtype=np.uint64)
    k2 = (u * a2).sum(axis=1, dtype=np.uint64)
    return k1, k2


class _HashCollision(Exception):
    pass


class CayleyBall:
    """All elements of length at most `radius`, with the edges between them.

    Vertices are indexed globally: levels in order of length, ShortLex
    order inside each level, so index 0 is the identity and indices are
    stable under enlarging the radius.  Words are stored packed; action
    matrices are not retained after construction.
    """

    def __init__(self, system: core.CoxeterSystem, radius: int, words_by_level, edges: np.ndarray):
        self.system = system
        self.radius = radius
        self._words = words_by_level
        self.level_sizes = tuple(int(w.shape[0]) for w in words_by_level)
        offsets = [0]
        for n in self.level_sizes:
            offsets.append(offsets[-1] + n)
        self.offsets = tuple(offsets)
        self.size = offsets[-1]
        self.edge_array = edges
        self._index_maps = [None] * len(words_by_level)
        self._csr = None
        self._wts_cache = {}

    # -- indexing ---------------------------------------------------------

    def level_of(self, idx: int) -> int:
        if idx < 0 or idx >= self.size:
            raise IndexError("vertex index %d out of range" % idx)
        lo = 0
        for lev, off in enumerate(self.offsets[1:]):
            if idx < off:
                return lev
        raise IndexError("vertex index %d out of range" % idx)

    def word_indices_of(self, idx: int) -> tuple:
        lev = self.level_of(idx)
        row = self._words[lev][idx - self.offsets[lev]]
        return tuple(int(x) for x in row)

    def element_of(self, idx: int) -> core.GroupElement:
        # discovery words are ShortLex normal forms by construction
        return core.GroupElement(self.system, self.word_indices_of(idx), canonical=True)

    def index_of(self, element) -> int:
        if isinstance(element, core.GroupElement):
            self.system.check_same(element.system)
            word = element.canonical_indices()
        else:
            word = tuple(element)
        lev = len(word)
        if lev >= len(self._words):
            raise KeyError("element of length %d lies outside the radius-%d ball" % (lev, self.radius))
        table = self._index_maps[lev]
        if table is None:
            arr = self._words[lev]
            table = {arr[i].tobytes(): i for i in range(arr.shape[0])}
            self._index_maps[lev] = table
        key = np.asarray(word, dtype=np.uint8).tobytes()
        local = table.get(key)
        if local is None:
            raise KeyError("element %s not present in the ball" % (word,))
        return self.offsets[lev] + local

    def contains(self, element) -> bool:
        try:
            self.index_of(element)
            return True
        except KeyError:
            return False

    def words_at_level(self, lev: int) -> np.ndarray:
        return self._words[lev]

    def iter_word_tuples(self) -> Iterable[tuple]:
        for lev, arr in enumerate(self._words):
            for row in arr:
                yield tuple(int(x) for x in row)

    # -- public views -----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return self.size

    @property
    def num_edges(self) -> int:
        return int(self.edge_array.shape[0])

    @property
    def vertices(self) -> tuple:
        return tuple(
            core.GroupElement(self.system, w, canonical=True) for w in self.iter_word_tuples()
        )

    @property
    def edges(self) -> tuple:
        """Edge triples (u, s, u*s) as elements and a generator name,
        in discovery order."""
        out = []
        for u, s, v in self.edge_array:
            out.append(
                (
                    self.element_of(int(u)),
                    self.system.name(int(s)),
                    self.element_of(int(v)),
                )
            )
        return tuple(out)

    @property
    def edge_wall(self):
        """Mapping from each edge triple to its wall u*s*u^{-1}."""
        from .walls import wall_of_edge

        out = {}
        for u, s, v in self.edge_array:
            ue = self.element_of(int(u))
            name = self.system.name(int(s))
            out[(ue, name, self.element_of(int(v)))] = wall_of_edge(ue, name)
        return out

    def subball_size(self, radius: int) -> int:
        if radius < 0:
            return 0
        if radius >= len(self.level_sizes):
            return self.size
        return self.offsets[radius + 1]

    # -- exports ------------------------------------------------------------

    def export_json_dict(self) -> dict:
        """Vertices as normal words of generator names, edges as
        [source word, generator name], both in discovery order."""
        names = self.system.word_names
        verts = [list(names(w)) for w in self.iter_word_tuples()]
        edges = [
            [verts[int(u)], self.system.name(int(s))] for u, s, _ in self.edge_array
        ]
        return {"radius": self.radius, "vertices": verts, "edges": edges}

    def _render_word(self, word: tuple) -> str:
        if not word:
            return "e"
        parts = self.system.word_names(word)
        if all(len(nm) == 1 for nm in self.system.generator_names):
            return "".join(parts)
        return ".".join(parts)

    def export_dot(self) -> str:
        """Undirected DOT graph: vertex label = normal word, edge label =
        generator."""
        lines = ["graph ball {"]
        for i, w in enumerate(self.iter_word_tuples()):
            lines.append('  v%d [label="%s"];' % (i, self._render_word(w)))
        for u, s, v in self.edge_array:
            lines.append(
                '  v%d -- v%d [label="%s"];'
                % (int(u), int(v), self.system.name(int(s)))
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- bulk helpers for the half-space machinery ------------------------

    def membership_in_standard_subgroup(self, generators: frozenset) -> np.ndarray:
        """Boolean mask over vertices: every letter of the word lies in
        the given generator index set."""
        key = frozenset(generators)
        cached = self._wts_cache.get(key)
        if cached is not None:
            return cached
        allowed = np.zeros(self.system.rank, dtype=bool)
        for g in key:
            allowed[g] = True
        parts = []
        for arr in self._words:
            if arr.shape[1] == 0:
                parts.append(np.ones(arr.shape[0], dtype=bool))
            else:
                parts.append(allowed[arr].all(axis=1))
        mask = np.concatenate(parts) if parts else np.zeros(0, dtype=bool)
        self._wts_cache[key] = mask
        return mask

    def adjacency(self):
        """CSR arrays (indptr, neighbors, labels) over both edge directions."""
        if self._csr is None:
            e = self.edge_array
            u = e[:, 0].astype(np.int64)
            s = e[:, 1].astype(np.uint8)
            v = e[:, 2].astype(np.int64)
            src = np.concatenate([u, v])
            dst = np.concatenate([v, u])
            lab = np.concatenate([s, s])
            order = np.argsort(src, kind="stable")
            src = src[order]
            dst = dst[order].astype(np.int64)
            lab = lab[order]
            counts = np.bincount(src, minlength=self.size)
            indptr = np.zeros(self.size + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._csr = (indptr, dst, lab)
        return self._csr

    def __repr__(self) -> str:
        return "CayleyBall(radius=%d, vertices=%d, edges=%d)" % (
            self.radius,
            self.size,
            self.num_edges,
        )


def _storage_dtype(max_abs: int):
    if max_abs < 2**15:
        return np.int16
    if max_abs < 2**31:
        return np.int32
    return np.int64


def _build_level(
    system: core.CoxeterSystem,
    arrays: _SystemArrays,
    frontier_store,
    frontier_count: int,
    parent_words: np.ndarray,
    level_offset_prev: int,
    next_offset: int,
    tmpdir: str,
    tag: str,
    retry: int,
    resolver: _SignResolver,
    vertex_budget: int,
):
    """One BFS level: returns (store, words, edge_block, max_abs).

    Raises _HashCollision if two distinct matrices landed in one key
    group (the caller retries with fresh multipliers) and ResourceLimit
    if the level would push the vertex count past the budget.
    """
    r = arrays.rank
    d = arrays.degree
    width = r * r * d
    a1, a2 = _hash_multipliers(retry, width)

    key1_parts = []
    key2_parts = []
    parent_parts = []
    label_parts = []
    max_abs = 0

    def chunks():
        for i0 in range(0, frontier_count, _CHUNK_PARENTS):
            i1 = min(i0 + _CHUNK_PARENTS, frontier_count)
            block = np.asarray(frontier_store.data[i0:i1], dtype=np.float64).reshape(
                i1 - i0, r, r, d
            )
            yield i0, block

    for i0, block in chunks():
        prod, parent, label = _expand_chunk(block, arrays, resolver)
        if prod.shape[0]:
            flat = prod.reshape(prod.shape[0], width)
            m = int(np.abs(flat).max())
            if m > max_abs:
                max_abs = m
            k1, k2 = _keys_of(flat, a1, a2)
            key1_parts.append(k1)
            key2_parts.append(k2)
            parent_parts.append(parent + i0)
            label_parts.append(label)

    if not key1_parts:
        empty_words = np.zeros((0, parent_words.shape[1] + 1), dtype=np.uint8)
        return None, empty_words, np.zeros((0, 3), dtype=np.int32), 0

    key1 = np.concatenate(key1_parts)
    key2 = np.concatenate(key2_parts)
    parents = np.concatenate(parent_parts)
    labels = np.concatenate(label_parts)
    del key1_parts, key2_parts, parent_parts, label_parts
    m_total = key1.shape[0]

    order = np.lexsort((key2, key1))
    k1s = key1[order]
    k2s = key2[order]
    boundary = np.empty(m_total, dtype=bool)
    boundary[0] = True
    boundary[1:] = (k1s[1:] != k1s[:-1]) | (k2s[1:] != k2s[:-1])
    group_sorted = np.cumsum(boundary) - 1
    n_groups = int(group_sorted[-1]) + 1
    group_of = np.empty(m_total, dtype=np.int64)
    group_of[order] = group_sorted
    del k1s, k2s, order, boundary, group_sorted, key1, key2

    if n_groups > vertex_budget:
        raise ResourceLimit(
            "ball exceeds the vertex bound: %d new vertices at this level alone, "
            "budget %d remaining" % (n_groups, vertex_budget)
        )

    _, first_occ = np.unique(group_of, return_index=True)
    rep_order = np.argsort(first_occ, kind="stable")
    new_id_of_group = np.empty(n_groups, dtype=np.int64)
    new_id_of_group[rep_order] = np.arange(n_groups, dtype=np.int64)
    cand_new_id = new_id_of_group[group_of]
    rep_positions = first_occ[rep_order]

    # words for the new level, in discovery order
    rep_parents = parents[rep_positions]
    rep_labels = labels[rep_positions]
    words = np.concatenate(
        [parent_words[rep_parents], rep_labels[:, None].astype(np.uint8)], axis=1
    )

    edge_block = np.empty((m_total, 3), dtype=np.int32)
    edge_block[:, 0] = parents + level_offset_prev
    edge_block[:, 1] = labels
    edge_block[:, 2] = cand_new_id + next_offset

    rep_mask = np.zeros(m_total, dtype=bool)
    rep_mask[rep_positions] = True

    dtype = _storage_dtype(max_abs)
    store = _LevelStore(n_groups, width, dtype, tmpdir, tag)

    cursor = 0
    chunks_done = 0
    spilled = store.path is not None
    for i0, block in chunks():
        prod, _, _ = _expand_chunk(block, arrays, resolver)
        m = prod.shape[0]
        if m == 0:
            continue
        flat = prod.reshape(m, r * r * d)
        local_rep = rep_mask[cursor : cursor + m]
        local_ids = cand_new_id[cursor : cursor + m]
        if local_rep.any():
            store.data[local_ids[local_rep]] = flat[local_rep].astype(dtype)
        dup = ~local_rep
        if dup.any():
            vid = local_ids[dup]
            claimed = flat[dup].astype(dtype)
            locality = np.argsort(vid, kind="stable")
            stored = np.asarray(store.data[vid[locality]])
            if not np.array_equal(stored, claimed[locality]):
                store.close()
                raise _HashCollision()
        cursor += m
        chunks_done += 1
        if spilled and chunks_done % 16 == 0:
            # keep dirty pages of the spilled level evictable
            store.data.flush()
    assert cursor == m_total

    return store, words, edge_block, max_abs


def enumerate_ball(
    system: core.CoxeterSystem, radius: int, max_vertices: Optional[int] = None
) -> CayleyBall:
    """Enumerate the ball of the given radius around the identity.

    Raises ResourceLimit when the vertex count would exceed the bound
    (argument, else the COXWALL_MAX_VERTICES environment variable, else
    2_000_000), and when integer growth would leave the exactly
    representable float range.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    bound = resolved_max_vertices(max_vertices)
    arrays = _system_arrays(system)
    resolver = _SignResolver(system)
    r = arrays.rank
    d = arrays.degree
    width = r * r * d

    words_by_level = [np.zeros((1, 0), dtype=np.uint8)]
    edge_blocks = []
    total = 1
    if total > bound:
        raise ResourceLimit("vertex bound %d is below the ball size" % bound)

    tmpdir = tempfile.mkdtemp(prefix="coxwall_ball_")
    try:
        ident = np.zeros((1, width), dtype=np.int16)
        eye = np.zeros((r, r, d), dtype=np.int64)
        one = system.field.one
        for i in range(r):
            eye[i, i, : len(one)] = one
        ident[0] = eye.reshape(width).astype(np.int16)

        class _Mem:
            def __init__(self, data):
                self.data = data

            def close(self):
                self.data = None

        frontier = _Mem(ident)
        frontier_count = 1
        frontier_max = 1

        for lev in range(1, radius + 1):
            if frontier_count == 0:
                break
            if frontier_max * arrays.growth_factor >= _FLOAT_EXACT_LIMIT:
                raise ResourceLimit(
                    "matrix entries near 2**52 at level %d, exact float arithmetic would overflow"
                    % lev
                )
            parent_words = words_by_level[lev - 1]
            level_offset_prev = total - frontier_count
            for retry in range(4):
                try:
                    store, words, edge_block, max_abs = _build_level(
                        system,
                        arrays,
                        frontier,
                        frontier_count,
                        parent_words,
                        level_offset_prev,
                        total,
                        tmpdir,
                        "%d_%d" % (lev, retry),
                        retry,
                        resolver,
                        bound - total,
                    )
                    break
                except _HashCollision:
                    if retry == 3:
                        raise AssertionError(
                            "hash collisions persisted through 4 multiplier sets"
                        )
            n_new = words.shape[0]
            frontier.close()
            if n_new == 0:
                break
            words_by_level.append(words)
            edge_blocks.append(edge_block)
            total += n_new
            frontier = store
            frontier_count = n_new
            frontier_max = max_abs

        frontier.close()
    finally:
        shutil.rmtree(tmpdir, ignore_errors=True)

    if edge_blocks:
        edges = np.concatenate(edge_blocks, axis=0)
    else:
        edges = np.zeros((0, 3), dtype=np.int32)
    return CayleyBall(system, radius, words_by_level, edges)
