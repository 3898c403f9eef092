from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from openchainq.exactq import GenericityError, sample_params
from openchainq.fock import (BlockError, EmptyWindowError, FockOp, FockSpace, agree_on_window,
                             compose, diagonal, dump, embed, flip_legs, identity, invert, load,
                             make_generator, restrict_to_block, scale, tensor, truncation_agrees)
from openchainq.linalg import mat_inverse, nullspace, rank
from openchainq.operators import build_L

Q = F(2, 3)
P = Q * Q


def W(n=6):
    return FockSpace(n, ("W",))


def WW(n=6):
    return FockSpace(n, ("W", "W"))


class TestGenerators:
    def test_a_kills_vacuum(self):
        assert make_generator("a", 0, W()).column((0,)) == {}

    def test_adag_on_vacuum(self):
        assert make_generator("adag", 0, W(), Q).column((0,)) == {(1,): 1 - Q**2}

    def test_abardag_on_vacuum(self):
        assert make_generator("abardag", 0, W(), Q).column((0,)) == {(1,): 1 - Q**-2}

    def test_commutator(self):
        a, ad = make_generator("a", 0, W()), make_generator("adag", 0, W(), Q)
        comm = compose(a, ad) - compose(ad, a)
        for j in range(6):
            assert comm.column((j,)) == {(j,): Q ** (2 * j) - Q ** (2 * (j + 1))}
        # the top column is outside the window
        assert not comm.in_window((6,))

    def test_shift_relation(self):
        a = make_generator("a", 0, W())
        f = lambda j: (j + 2) * F(3, 7) ** j
        lhs = compose(a, make_generator("diag", 0, W(), f=f))
        rhs = compose(make_generator("diag", 0, W(), f=lambda j: f(j + 1)), a)
        assert agree_on_window(lhs, rhs)

    def test_wrong_leg(self):
        with pytest.raises(ValueError):
            make_generator("a", 1, FockSpace(3, ("W", "C2")))


class TestWindows:
    def test_witness(self):
        a = make_generator("a", 0, W())
        cmp = agree_on_window(a, scale(a, 2))
        assert not cmp and cmp.witness.basis == (1,)
        assert cmp.witness.left == {(0,): 1} and cmp.witness.right == {(0,): 2}

    def test_witness_serialises(self):
        a = make_generator("a", 0, W())
        d = agree_on_window(a, scale(a, 2)).witness.to_dict()
        assert d == {"basis": [1], "left": {"0": "1/1"}, "right": {"0": "2/1"}}

    def test_guards_accumulate(self):
        ad = make_generator("adag", 0, W(), Q)
        word = compose(ad, compose(ad, ad))
        assert word.guard == (3,) and word.window() == [(j,) for j in range(4)]

    def test_empty_window(self):
        ad = make_generator("adag", 0, W(2), Q)
        word = compose(ad, compose(ad, ad))
        with pytest.raises(EmptyWindowError):
            agree_on_window(word, word)

    def test_flip_twice(self):
        x = compose(make_generator("adag", 0, WW(), Q), make_generator("a", 1, WW()))
        assert agree_on_window(flip_legs(flip_legs(x)), x)

    def test_embed_matches_tensor(self):
        ad = make_generator("adag", 0, W(), Q)
        assert agree_on_window(embed(ad, WW(), (0,)), tensor(ad, identity(W())))

    def test_invert_l_operator(self):
        l = build_L("rho", sample_params(0), F(5, 7), 6)
        assert agree_on_window(compose(invert(l), l), identity(l.dom))

    def test_invert_singular(self):
        with pytest.raises(GenericityError):
            invert(diagonal(W(), lambda b: b[0]))


class TestBlocks:
    def test_identity_block(self):
        assert restrict_to_block(identity(WW()), 3) == [[int(i == j) for j in range(4)] for i in range(4)]

    def test_lower_raise_block_one(self):
        x = compose(make_generator("a", 0, WW()), make_generator("abardag", 1, WW(), Q))
        # basis order: w0 (x) w1, w1 (x) w0
        assert restrict_to_block(x, 1) == [[0, 1 - Q**-2], [0, 0]]

    def test_block_nilpotent(self):
        s = WW(10)
        x = compose(make_generator("a", 0, s), make_generator("abardag", 1, s, Q))
        for m in range(4):
            power = identity(s)
            for _ in range(m + 1):
                power = compose(x, power)
            assert restrict_to_block(power, m) == [[0] * (m + 1) for _ in range(m + 1)]

    def test_not_block_preserving(self):
        with pytest.raises(BlockError):
            restrict_to_block(make_generator("a", 0, WW()), 1)


alphabet = ["a1", "a2", "ad1", "ad2", "ab1", "ab2", "d"]


def build_word(word):
    def build(n):
        s = WW(n)
        gens = {"a1": make_generator("a", 0, s), "a2": make_generator("a", 1, s),
                "ad1": make_generator("adag", 0, s, Q), "ad2": make_generator("adag", 1, s, Q),
                "ab1": make_generator("abardag", 0, s, Q), "ab2": make_generator("abardag", 1, s, Q),
                "d": diagonal(s, lambda b: F(3, 5) ** b[0] - b[1])}
        out = identity(s)
        for w in word:
            out = compose(gens[w], out)
        return out
    return build


class TestSoundness:
    @given(st.lists(st.sampled_from(alphabet), min_size=1, max_size=6))
    def test_words_agree_across_truncations(self, word):
        assert truncation_agrees(build_word(word), 7, 4)

    def test_unsound_metadata_is_caught(self):
        # claiming no guard for a raising operator exposes the truncation edge
        bad = lambda n: make_generator("adag", 0, W(n), Q).with_meta(guard=(0,))
        assert not truncation_agrees(bad, 5, 4)


sparse_ops = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 1)),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 1)),
                    st.fractions(max_denominator=20).filter(bool), max_size=3),
    max_size=6)


@given(sparse_ops)
def test_dump_round_trip(cols):
    op = FockOp(FockSpace(3, ("W", "C2")), cols)
    back = load(dump(op))
    assert back.dom == op.dom and back.cols == op.cols


def test_dump_header():
    text = dump(identity(FockSpace(2, ("C2", "W"))))
    assert text.splitlines()[0] == "2 1 1 CW"


class TestLinalg:
    def test_inverse(self):
        a = [[F(2), F(1)], [F(1), F(1)]]
        assert mat_inverse(a) == [[1, -1], [-1, 2]]

    @given(st.lists(st.lists(st.fractions(max_denominator=7, min_value=-4, max_value=4),
                             min_size=5, max_size=5), min_size=1, max_size=4))
    def test_nullspace(self, dense):
        rows = [{j: v for j, v in enumerate(r) if v} for r in dense]
        basis = nullspace(rows, 5)
        assert len(basis) + rank(rows) == 5
        for x in basis:
            for r in dense:
                assert sum(a * b for a, b in zip(r, x)) == 0
