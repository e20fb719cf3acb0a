"""Coxeter systems, group elements, and exact word arithmetic.

A Coxeter system is given by a symmetric matrix of orders m(s,t) with
1 on the diagonal and entries in {2, 3, ...} or infinity off it.  The
group acts on the root space by the standard geometric representation,
which we run over the ring Z[c] (see `field`) so every sign decision
is exact.

Conventions used throughout:

- the bilinear form is stored doubled, ``twoB[s][t] = 2*B(e_s, e_t)``,
  so all matrix entries are ring integers (no denominators appear when
  applying generators);
- ``twoB[s][s] = 2``, ``twoB[s][t] = -2*cos(pi/m)`` for finite m, and
  ``-2`` when m is infinite;
- a generator acts by ``s(v) = v - <doubled form, v> e_s``, so only the
  s-th coordinate of a vector changes;
- words are tuples of generator indices; the canonical form of an
  element is its ShortLex-least reduced word (letters compared by
  generator index).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MatrixShape, SystemMismatch, UnknownGenerator
from .field import FieldElement, NumberField

INFINITY = math.inf

_DEFAULT_LETTERS = "stuvwxyz"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class CoxeterMatrix:
    """Symmetric matrix of pairwise orders defining a Coxeter system."""

    __slots__ = ("rank", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise MatrixShape("matrix must have at least one row")
        for r in rows:
            if len(r) != n:
                raise MatrixShape("matrix must be square, row has length %d, expected %d" % (len(r), n))
        for i in range(n):
            for j in range(n):
                e = rows[i][j]
                if e == INFINITY:
                    if i == j:
                        raise MatrixShape("diagonal entry (%d,%d) must be 1" % (i, i))
                    continue
                if not _is_int(e):
                    raise MatrixShape("entry (%d,%d) is %r, expected integer or infinity" % (i, j, e))
                if i == j:
                    if e != 1:
                        raise MatrixShape("diagonal entry (%d,%d) must be 1, got %d" % (i, i, e))
                elif e < 2:
                    raise MatrixShape("off-diagonal entry (%d,%d) must be >= 2, got %d" % (i, j, e))
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise MatrixShape("matrix must be symmetric, entries (%d,%d) and (%d,%d) differ" % (i, j, j, i))
        self.rank = n
        self.rows = rows

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def to_json_dict(self) -> dict:
        labels = [["inf" if e == INFINITY else e for e in row] for row in self.rows]
        return {"rank": self.rank, "labels": labels}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoxeterMatrix":
        from .errors import ParseError

        if not isinstance(data, dict) or "labels" not in data:
            raise ParseError("expected an object with a 'labels' key")
        labels = data["labels"]
        if not isinstance(labels, list):
            raise ParseError("'labels' must be a list of rows")
        rows = []
        for row in labels:
            if not isinstance(row, list):
                raise ParseError("'labels' must be a list of rows")
            out = []
            for e in row:
                if e == "inf":
                    out.append(INFINITY)
                elif _is_int(e):
                    out.append(e)
                else:
                    raise ParseError("matrix entry %r is neither an integer nor \"inf\"" % (e,))
            rows.append(out)
        if "rank" in data and data["rank"] != len(rows):
            raise ParseError("declared rank %r does not match %d rows" % (data["rank"], len(rows)))
        try:
            return cls(rows)
        except MatrixShape as exc:
            raise ParseError(str(exc)) from exc

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxeterMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "CoxeterMatrix(%r)" % (list(list(r) for r in self.rows),)


def _default_names(rank: int) -> tuple:
    if rank <= len(_DEFAULT_LETTERS):
        return tuple(_DEFAULT_LETTERS[:rank])
    return tuple("g%d" % i for i in range(rank))


_FIELD_CACHE: dict = {}


def _field_for(level: int) -> NumberField:
    fld = _FIELD_CACHE.get(level)
    if fld is None:
        fld = NumberField(level)
        _FIELD_CACHE[level] = fld
    return fld


class CoxeterSystem:
    """A Coxeter matrix with named generators and a prepared ground ring.

    Instances are immutable.  Two systems built from equal matrices and
    equal name tuples are interchangeable; elements refuse to mix
    across systems whose (matrix, names) signatures differ.
    """

    __slots__ = (
        "matrix",
        "generator_names",
        "rank",
        "field",
        "twoB",
        "_signature",
        "_name_index",
        "_basis",
        "_numpy_cache",
    )

    def __init__(self, matrix: CoxeterMatrix, generator_names=None):
        if generator_names is None:
            generator_names = _default_names(matrix.rank)
        generator_names = tuple(str(x) for x in generator_names)
        if len(generator_names) != matrix.rank:
            raise MatrixShape(
                "got %d generator names for rank %d" % (len(generator_names), matrix.rank)
            )
        if len(set(generator_names)) != matrix.rank:
            raise MatrixShape("generator names must be distinct")
        for nm in generator_names:
            if not nm:
                raise MatrixShape("generator names must be nonempty")
        self.matrix = matrix
        self.generator_names = generator_names
        self.rank = matrix.rank
        self._name_index = {nm: i for i, nm in enumerate(generator_names)}
        level = 1
        for i in range(self.rank):
            for j in range(i):
                m = matrix.rows[i][j]
                if m != INFINITY:
                    level = math.lcm(level, m)
        fld = _field_for(level)
        self.field = fld
        rows = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                if i == j:
                    row.append(fld.reduce((2,)))
                else:
                    m = matrix.rows[i][j]
                    if m == INFINITY:
                        row.append(fld.reduce((-2,)))
                    else:
                        row.append(fld.neg(fld.two_cos_pi_over(m)))
            rows.append(tuple(row))
        self.twoB = tuple(rows)
        zero = fld.zero
        one = fld.one
        self._basis = tuple(
            tuple(one if j == i else zero for j in range(self.rank)) for i in range(self.rank)
        )
        self._signature = (matrix.rows, generator_names)
        self._numpy_cache = None

    @property
    def ground_field_modulus(self) -> tuple:
        """Coefficients, constant term first, of the minimal polynomial
        of the ring generator over the rationals."""
        return self.field.minpoly

    def index(self, g) -> int:
        if _is_int(g):
            if 0 <= g < self.rank:
                return g
            raise UnknownGenerator("generator index %d out of range for rank %d" % (g, self.rank))
        i = self._name_index.get(g)
        if i is None:
            raise UnknownGenerator("unknown generator %r, have %s" % (g, ", ".join(self.generator_names)))
        return i

    def name(self, i: int) -> str:
        return self.generator_names[i]

    def parse_word(self, word) -> tuple:
        """Turn a word given as a string of single-letter names, or as an
        iterable of names / indices, into a tuple of generator indices."""
        if isinstance(word, str):
            return tuple(self.index(ch) for ch in word)
        return tuple(self.index(g) for g in word)

    def word_names(self, indices: Iterable[int]) -> tuple:
        return tuple(self.generator_names[i] for i in indices)

    def basis_root(self, s: int) -> tuple:
        return self._basis[s]

    def identity(self) -> "GroupElement":
        return GroupElement(self, ())

    def generator(self, g) -> "GroupElement":
        return GroupElement(self, (self.index(g),))

    def element(self, word) -> "GroupElement":
        return GroupElement(self, reduce_word(self, self.parse_word(word)))

    def check_same(self, other: "CoxeterSystem"):
        if self is other:
            return
        if self._signature != other._signature:
            raise SystemMismatch("elements belong to different Coxeter systems")

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxeterSystem) and self._signature == other._signature

    def __hash__(self) -> int:
        return hash(self._signature)

    def __repr__(self) -> str:
        return "CoxeterSystem(rank=%d, names=%s)" % (self.rank, "".join(self.generator_names))


def new_system(matrix, generator_names=None) -> CoxeterSystem:
    """Build a Coxeter system from a matrix of orders.

    `matrix` may be a CoxeterMatrix or any nested sequence acceptable to
    its constructor; use math.inf (or float("inf")) for infinite orders.
    """
    if not isinstance(matrix, CoxeterMatrix):
        matrix = CoxeterMatrix(matrix)
    return CoxeterSystem(matrix, generator_names)


# ---------------------------------------------------------------------------
# vector arithmetic in the root space


def apply_generator(system: CoxeterSystem, s: int, vec: tuple) -> tuple:
    """Image of a root-space vector under the generator s.

    Only coordinate s changes: s(v) = v - (sum_t twoB[s][t] * v_t) e_s.
    """
    fld = system.field
    row = system.twoB[s]
    acc = None
    for t, vt in enumerate(vec):
        if vt == fld.zero:
            continue
        term = fld.mul(row[t], vt)
        acc = term if acc is None else fld.add(acc, term)
    if acc is None:
        return vec
    new_s = fld.sub(vec[s], acc)
    return vec[:s] + (new_s,) + vec[s + 1 :]


def apply_word(system: CoxeterSystem, word: Sequence[int], vec: tuple) -> tuple:
    """Image of a vector under the element spelled by `word`.

    The rightmost letter acts first, as in function composition.
    """
    for s in reversed(word):
        vec = apply_generator(system, s, vec)
    return vec


def apply_word_inverse(system: CoxeterSystem, word: Sequence[int], vec: tuple) -> tuple:
    """Image of a vector under the inverse of the element spelled by `word`."""
    for s in word:
        vec = apply_generator(system, s, vec)
    return vec


def root_sign(system: CoxeterSystem, vec: tuple) -> int:
    """Sign of a root: +1 if positive, -1 if negative.

    Roots have all coordinates of one sign, so the first nonzero
    coordinate decides.  Returns 0 for the zero vector (not a root).
    """
    fld = system.field
    for coord in vec:
        sg = fld.sign(coord)
        if sg != 0:
            return sg
    return 0


# ---------------------------------------------------------------------------
# word arithmetic


def append_letter(system: CoxeterSystem, word: tuple, a: int) -> tuple:
    """Reduced word for (element of `word`) * a, given `word` reduced.

    Walks the word from the right, tracking the image of the simple
    root of `a` under ever longer suffixes.  If the image ever equals
    the simple root of the letter about to be applied, the exchange
    condition deletes that letter; otherwise the product is reduced
    and `a` is appended.
    """
    fld = system.field
    beta = system.basis_root(a)
    zero = fld.zero
    for idx in range(len(word) - 1, -1, -1):
        s = word[idx]
        hit = True
        for t, coord in enumerate(beta):
            want = fld.one if t == s else zero
            if coord != want:
                hit = False
                break
        if hit:
            return word[:idx] + word[idx + 1 :]
        beta = apply_generator(system, s, beta)
    return word + (a,)


def reduce_word(system: CoxeterSystem, letters: Sequence[int]) -> tuple:
    """Reduced word equal, as a group element, to the given letters."""
    word: tuple = ()
    for a in letters:
        word = append_letter(system, word, a)
    return word


def is_reduced(system: CoxeterSystem, word) -> bool:
    """Whether the word, parsed by the system, is a reduced expression.

    A word is reduced exactly when appending each successive letter to
    the reduced prefix lengthens it, i.e. when each prefix sends the
    next letter's simple root to a positive root.
    """
    letters = system.parse_word(word)
    acc: tuple = ()
    for a in letters:
        nxt = append_letter(system, acc, a)
        if len(nxt) <= len(acc):
            return False
        acc = nxt
    return True


def _inverse_columns(system: CoxeterSystem, word: Sequence[int]) -> list:
    """Columns col[t] = (element of word)^{-1} applied to basis root t."""
    cols = [system.basis_root(t) for t in range(system.rank)]
    for s in word:
        cols = [apply_generator(system, s, col) for col in cols]
    return cols


def shortlex_word(system: CoxeterSystem, word: tuple) -> tuple:
    """ShortLex-least reduced word for the element of a reduced word.

    Greedily picks the smallest left descent: s is a left descent of v
    exactly when v^{-1} sends the simple root of s to a negative root.
    Maintains all rank columns of the inverse action and updates them
    by one column operation per extracted letter.
    """
    fld = system.field
    rank = system.rank
    cols = _inverse_columns(system, word)
    out = []
    remaining = len(word)
    for _ in range(remaining):
        pick = -1
        for s in range(rank):
            if root_sign(system, cols[s]) < 0:
                pick = s
                break
        if pick < 0:
            raise AssertionError("reduced word ran out of descents early")
        out.append(pick)
        # v := pick * v, so v^{-1} := v^{-1} * pick and each new column is
        # col[t] - twoB[pick][t] * col[pick]
        base = cols[pick]
        row = system.twoB[pick]
        new_cols = []
        for t in range(rank):
            coef = row[t]
            if coef == fld.zero:
                new_cols.append(cols[t])
            else:
                new_cols.append(
                    tuple(
                        fld.sub(ct, fld.mul(coef, cb)) for ct, cb in zip(cols[t], base)
                    )
                )
        cols = new_cols
    return tuple(out)


def _left_descent_set(system: CoxeterSystem, word: Sequence[int]) -> tuple:
    cols = _inverse_columns(system, word)
    return tuple(s for s in range(system.rank) if root_sign(system, cols[s]) < 0)


# ---------------------------------------------------------------------------
# group elements


class GroupElement:
    """An element of a Coxeter group, held as a reduced word.

    Equality and hashing go through the ShortLex canonical word, which
    is computed once on demand.  The stored word is always reduced but
    not necessarily canonical.
    """

    __slots__ = ("system", "_word", "_canon")

    def __init__(self, system: CoxeterSystem, reduced_word: tuple, canonical: bool = False):
        self.system = system
        self._word = reduced_word
        self._canon = reduced_word if canonical else None

    @property
    def length(self) -> int:
        return len(self._word)

    def word_indices(self) -> tuple:
        return self._word

    def word(self) -> tuple:
        """The stored reduced word, as generator names."""
        return self.system.word_names(self._word)

    def canonical_indices(self) -> tuple:
        canon = self._canon
        if canon is None:
            canon = shortlex_word(self.system, self._word)
            self._canon = canon
        return canon

    def canonical_word(self) -> tuple:
        """The ShortLex-least reduced word, as generator names."""
        return self.system.word_names(self.canonical_indices())

    def is_identity(self) -> bool:
        return not self._word

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        self.system.check_same(other.system)
        word = self._word
        for a in other._word:
            word = append_letter(self.system, word, a)
        return GroupElement(self.system, word)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.system, tuple(reversed(self._word)))

    def apply_to_root(self, vec: tuple) -> tuple:
        return apply_word(self.system, self._word, vec)

    def action_matrix(self) -> tuple:
        """Matrix of the element on the root space, as FieldElement rows.

        Column t is the image of basis root t.
        """
        fld = self.system.field
        cols = [
            apply_word(self.system, self._word, self.system.basis_root(t))
            for t in range(self.system.rank)
        ]
        return tuple(
            tuple(FieldElement(fld, cols[t][i], 1) for t in range(self.system.rank))
            for i in range(self.system.rank)
        )

    def left_descents(self) -> tuple:
        """Names of generators s with length(s * self) < length(self)."""
        return self.system.word_names(_left_descent_set(self.system, self._word))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.system is not other.system and self.system._signature != other.system._signature:
            return False
        return self.canonical_indices() == other.canonical_indices()

    def __hash__(self) -> int:
        return hash((self.system._signature, self.canonical_indices()))

    def __repr__(self) -> str:
        if not self._word:
            return "<identity>"
        return "<%s>" % ".".join(self.word())


def normal_form(system: CoxeterSystem, word) -> GroupElement:
    """Element of the (possibly unreduced) word, canonicalized eagerly.

    Two words spell the same element exactly when their normal forms
    compare equal.
    """
    letters = system.parse_word(word)
    reduced = reduce_word(system, letters)
    canon = shortlex_word(system, reduced)
    return GroupElement(system, canon, canonical=True)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def invert(a: GroupElement) -> GroupElement:
    return a.inverse()


def length(a: GroupElement) -> int:
    return a.length


def left_descents(a: GroupElement) -> tuple:
    return a.left_descents()
