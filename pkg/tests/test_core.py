import math
import random

import pytest

import coxwall as cw
from coxwall import coxeter_core as core
from coxwall.errors import MatrixShape, ParseError, UnknownGenerator

from conftest import dihedral, path_system

INF = math.inf


# -- matrix validation ------------------------------------------------------


def test_matrix_rejects_bad_shapes():
    with pytest.raises(MatrixShape):
        cw.CoxeterMatrix([[1, 3]])
    with pytest.raises(MatrixShape):
        cw.CoxeterMatrix([[1, 3], [4, 1]])
    with pytest.raises(MatrixShape):
        cw.CoxeterMatrix([[2, 3], [3, 1]])
    with pytest.raises(MatrixShape):
        cw.CoxeterMatrix([[1, 1], [1, 1]])


def test_matrix_json_round_trip():
    m = cw.CoxeterMatrix([[1, 3, INF], [3, 1, 2], [INF, 2, 1]])
    d = m.to_json_dict()
    assert d["rank"] == 3
    assert d["labels"][0][2] == "inf"
    back = cw.CoxeterMatrix.from_json_dict(d)
    assert back.rows == m.rows
    with pytest.raises(ParseError):
        cw.CoxeterMatrix.from_json_dict({"labels": [[1, "x"], ["x", 1]]})
    with pytest.raises(ParseError):
        cw.CoxeterMatrix.from_json_dict({"rank": 5, "labels": [[1]]})
    with pytest.raises(ParseError):
        cw.CoxeterMatrix.from_json_dict([1, 2])


def test_system_names_and_lookup():
    s = cw.new_system([[1, 3], [3, 1]], ["x", "y"])
    assert s.generator_names == ("x", "y")
    assert s.index("y") == 1
    assert s.index(0) == 0
    assert s.name(1) == "y"
    with pytest.raises(UnknownGenerator):
        s.index("z")
    with pytest.raises(UnknownGenerator):
        s.index(5)
    with pytest.raises(core.MatrixShape):
        cw.new_system([[1, 3], [3, 1]], ["x"])
    with pytest.raises(core.MatrixShape):
        cw.new_system([[1, 3], [3, 1]], ["x", "x"])


def test_parse_word_forms(A2):
    assert A2.parse_word("sts") == (0, 1, 0)
    assert A2.parse_word(["s", "t"]) == (0, 1)
    assert A2.parse_word((0, 1, 0)) == (0, 1, 0)
    with pytest.raises(UnknownGenerator):
        A2.parse_word("sx")


def test_field_level_is_lcm():
    # lcm of the finite labels drives the ground field
    s = cw.new_system([[1, 4, 2], [4, 1, 6], [2, 6, 1]])
    assert s.field.N == 12
    t = dihedral(INF)
    assert t.field.N == 1


# -- words ------------------------------------------------------------------


def test_append_letter_exchange(A2):
    assert core.append_letter(A2, (), 0) == (0,)
    assert core.append_letter(A2, (0,), 0) == ()
    assert core.append_letter(A2, (0, 1), 0) == (0, 1, 0)
    # braid: sts = tst, so appending t cancels the trailing t of tst
    assert core.append_letter(A2, (0, 1, 0), 1) == (1, 0)


def test_reduce_word_braid(A2, B2):
    assert core.reduce_word(A2, (0, 0)) == ()
    assert core.normal_form(A2, "sts") == core.normal_form(A2, "tst")
    assert core.normal_form(B2, "stst") == core.normal_form(B2, "tsts")
    assert core.normal_form(B2, "sts") != core.normal_form(B2, "tst")
    assert core.reduce_word(A2, (0, 1, 0, 1)) == core.reduce_word(A2, (1, 0))


def test_shortlex_picks_least(A2):
    # tst equals sts; the canonical form starts with the smaller letter
    assert core.shortlex_word(A2, (1, 0, 1)) == (0, 1, 0)
    assert core.shortlex_word(A2, (0, 1)) == (0, 1)


def test_is_reduced(A2, B2):
    assert core.is_reduced(A2, "sts")
    assert not core.is_reduced(A2, "stst")
    assert not core.is_reduced(A2, "ss")
    assert core.is_reduced(B2, "stst")
    assert not core.is_reduced(B2, "ststs")


def test_group_element_algebra(A2):
    s = core.normal_form(A2, "s")
    t = core.normal_form(A2, "t")
    e = core.normal_form(A2, "")
    assert (s * s) == e
    assert (s * t * s) == (t * s * t)
    assert s.inverse() == s
    st = s * t
    assert st.inverse() == t * s
    assert cw.length(st) == 2
    assert st != t * s
    assert len({s * t, t * s, s * t}) == 2
    assert e.is_identity() and not s.is_identity()


def test_left_descents(A2):
    st = core.normal_form(A2, "st")
    assert cw.left_descents(st) == ("s",)
    w0 = core.normal_form(A2, "sts")
    assert cw.left_descents(w0) == ("s", "t")
    assert cw.left_descents(core.normal_form(A2, "")) == ()


def test_full_group_enumeration_small():
    # all reduced words of I2(m) give 2m distinct elements
    for m in (2, 3, 4, 5, 7):
        sys_m = dihedral(m)
        seen = {core.normal_form(sys_m, w) for w in _all_words(2, 2 * m + 1)}
        assert len(seen) == 2 * m


def _all_words(rank, max_len):
    stack = [()]
    while stack:
        w = stack.pop()
        yield w
        if len(w) < max_len:
            for a in range(rank):
                stack.append(w + (a,))


def test_infinite_label_free_product():
    d = dihedral(INF)
    # st has infinite order: powers stay distinct and lengths grow
    acc = ()
    for k in range(1, 10):
        acc = core.reduce_word(d, acc + (0, 1))
        assert len(acc) == 2 * k


def test_random_word_properties(A3, B3, H3):
    rng = random.Random(20260819)
    for system in (A3, B3, H3, dihedral(INF), path_system([3, INF])):
        n = system.rank
        for _ in range(120):
            letters = tuple(rng.randrange(n) for _ in range(rng.randint(0, 12)))
            red = core.reduce_word(system, letters)
            assert len(red) <= len(letters)
            assert (len(letters) - len(red)) % 2 == 0
            assert core.is_reduced(system, red)
            canon = core.shortlex_word(system, red)
            assert core.shortlex_word(system, canon) == canon
            assert core.normal_form(system, canon) == core.normal_form(system, letters)
            # appending a letter changes length by exactly one
            a = rng.randrange(n)
            nxt = core.append_letter(system, red, a)
            assert abs(len(nxt) - len(red)) == 1
            # w * w^{-1} collapses to the identity
            wv = core.normal_form(system, letters)
            assert (wv * wv.inverse()).is_identity()


def test_word_inverse_against_reversal(A3):
    rng = random.Random(4)
    for _ in range(60):
        letters = tuple(rng.randrange(3) for _ in range(rng.randint(0, 9)))
        w = core.normal_form(A3, letters)
        rev = core.normal_form(A3, tuple(reversed(letters)))
        assert w.inverse() == rev


def test_apply_word_roots(A2):
    # the identity-adjacent reflection roots of A2 land on known floats
    alpha = A2.basis_root(0)
    img = core.apply_generator(A2, 0, alpha)
    # s sends its own root to the negative
    assert core.root_sign(A2, img) == -1
    beta = core.apply_generator(A2, 1, alpha)
    assert core.root_sign(A2, beta) == 1
    assert core.root_sign(A2, tuple(A2.field.zero for _ in range(2))) == 0


def test_root_sign_all_positive_or_negative(B3):
    # every w^{-1}(alpha_s) is a genuine root: all nonzero coordinates agree
    rng = random.Random(9)
    for _ in range(80):
        letters = tuple(rng.randrange(3) for _ in range(rng.randint(0, 8)))
        vec = core.apply_word(B3, letters, B3.basis_root(rng.randrange(3)))
        assert core.root_sign(B3, vec) in (-1, 1)


def test_check_same_rejects_foreign(A2, B2):
    s = core.normal_form(A2, "s")
    t = core.normal_form(B2, "t")
    with pytest.raises(cw.SystemMismatch):
        s * t
