import warnings

import pytest
from hypothesis import given, strategies as st

from khtorsion import braid as br
from khtorsion.braid import BraidWord, BraidPermutation


@st.composite
def braid_words(draw, max_strands=6, max_length=12):
    n = draw(st.integers(2, max_strands))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda k: st.sampled_from((k, -k))),
                            max_size=max_length))
    return BraidWord(n, tuple(letters))


def test_parse_braid():
    assert br.parse_braid("1 1 1", 2) == BraidWord(2, (1, 1, 1))
    assert br.parse_braid("", 3) == br.identity(3)
    assert br.parse_braid(" 1  -2\n1 ", 3).letters == (1, -2, 1)


@pytest.mark.parametrize("text", ["3", "0", "1 x", "-3"])
def test_parse_braid_rejects(text):
    with pytest.raises(br.MalformedWordError):
        br.parse_braid(text, 3)


def test_w_word_examples():
    assert br.w_word(1, 4, 5).letters == (1, 2, 3, 4, 4, 3, 2, 1)
    assert br.w_word(1, 3, 4, inverted=True).letters == (-1, -2, -3, -3, -2, -1)
    assert br.w_word(3, 1, 4).letters == (3, 2, 1, 1, 2, 3)


@pytest.mark.parametrize("args", [(2, 2, 4), (0, 2, 4), (1, 4, 4), (1, 5, 5)])
def test_w_word_domain(args):
    with pytest.raises(br.BraidDomainError):
        br.w_word(*args)


def test_w_word_is_pure():
    for n in range(3, 9):
        for i in range(1, n):
            for j in range(1, n):
                if i == j:
                    continue
                for inv in (False, True):
                    w = br.w_word(i, j, n, inv)
                    assert len(w) == 2 * (abs(i - j) + 1)
                    assert w.permutation().is_identity()


def test_torus_word():
    assert br.torus_word(2, 3).letters == (1, 1, 1)
    w = br.torus_word(6, 7)
    assert len(w) == 35 and w.letters[:5] == (1, 2, 3, 4, 5) and w.letters[-5:] == (1, 2, 3, 4, 5)
    assert br.torus_word(3, 4).letters == (1, 2) * 4


def test_concat_power_shift():
    w = br.power(BraidWord(5, (1, 2, 3, 4)), 5) * br.power(br.w_word(1, 4, 5), 5)
    assert len(w) == 20 + 40 and w.strands == 5
    assert br.shift(BraidWord(3, (1, 2)), 3, 6).letters == (4, 5)
    assert br.shift(BraidWord(3, (-1, 2)), 3, 6).letters == (-4, 5)
    assert br.power(w, 0) == br.identity(5)
    with pytest.raises(br.BraidDomainError):
        br.concat(BraidWord(2, (1,)), BraidWord(3, (1,)))
    with pytest.raises(br.BraidDomainError):
        br.shift(BraidWord(3, (1, 2)), 4, 6)


def test_connected_sum():
    granny = br.connected_sum(br.torus_word(2, 3), br.torus_word(2, 3))
    assert granny == BraidWord(3, (1, 1, 1, 2, 2, 2))
    assert granny.components() == 1
    t56 = br.torus_word(5, 6)
    s = br.connected_sum(t56, t56)
    assert s.strands == 9 and s.letters == t56.letters + tuple(k + 4 for k in t56.letters)
    w = BraidWord(3, (1, -2))
    assert br.connected_sum(w, br.identity(1)) == w


def test_connected_sum_warns_on_links():
    with pytest.warns(br.SplitSummandWarning):
        br.connected_sum(br.torus_word(2, 2), br.torus_word(2, 3))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        br.connected_sum(br.torus_word(2, 3), br.torus_word(2, 5))


def test_overlapping_sum():
    block = lambda s: tuple(range(s, s + 4)) * 6  # noqa: E731
    w3 = br.overlapping_sum(5, 6, 3)
    assert w3.strands == 11
    assert w3.letters == block(1) + block(4) + block(7)
    assert br.overlapping_sum(5, 6, 1) == BraidWord(5, block(1))
    w2 = br.overlapping_sum(5, 6, 2)
    assert w2 == BraidWord(8, block(1) + block(4))
    starts = [w3.letters[24 * k] for k in range(3)]
    assert [b - a for a, b in zip(starts, starts[1:])] == [3, 3]


def test_closure_examples():
    D = br.closure(br.identity(1))
    assert D.n == 0 and D.components() == 1
    hopf = br.closure(BraidWord(2, (1, 1)))
    assert (hopf.n, hopf.components(), hopf.writhe) == (2, 2, 2)
    w = br.torus_word(6, 7) * br.w_word(1, 5, 6)
    D = br.closure(w)
    # 35 torus letters plus 10 wrap letters, all positive
    assert (D.n, D.writhe, D.components()) == (45, 45, 1)


def test_expansion_identity_n3():
    w, expanded = br.expansion_identity(3)
    assert w.letters == (1, 2, 2, 1)
    assert expanded.letters == (1, 2, 1, 2, 1, 2, -1, -1)
    assert w.exponent_sum == expanded.exponent_sum == 4
    assert br.alternating_expansion(3) == expanded


@pytest.mark.parametrize("n", range(3, 7))
def test_expansion_identity_permutations(n):
    w, expanded = br.expansion_identity(n)
    assert w.permutation() == expanded.permutation()
    assert w.exponent_sum == expanded.exponent_sum == 2 * (n - 1)


def test_alternating_expansion_drifts_for_n4():
    # the literal alternating product picks up extra twists beyond n = 3
    assert br.alternating_expansion(4).exponent_sum == 8
    assert br.w_word(1, 3, 4).exponent_sum == 6


def _compose_oracle(word):
    """Track each strand's position letter by letter (independent of BraidPermutation)."""
    pos = {s: s for s in range(word.strands)}
    for k in word.letters:
        i = abs(k) - 1
        for s, p in pos.items():
            if p == i:
                a = s
            elif p == i + 1:
                b = s
        pos[a], pos[b] = i + 1, i
    return tuple(pos[s] for s in range(word.strands))


@given(braid_words())
def test_permutation_matches_oracle(w):
    assert w.permutation().images == _compose_oracle(w)


@given(braid_words())
def test_permutation_inverse(w):
    assert w.permutation().compose(w.inverse().permutation()).is_identity()


@given(braid_words())
def test_components_match_cycles(w):
    assert br.closure(w).components() == w.permutation().cycle_count()


@given(braid_words(), braid_words(), st.integers(0, 4))
def test_exponent_sum_laws(w1, w2, k):
    w2 = BraidWord(w1.strands, tuple(x for x in w2.letters if abs(x) < w1.strands))
    assert (w1 * w2).exponent_sum == w1.exponent_sum + w2.exponent_sum
    assert br.power(w1, k).exponent_sum == k * w1.exponent_sum
    assert br.shift(w1, 2, w1.strands + 2).exponent_sum == w1.exponent_sum


@given(braid_words(max_strands=4), braid_words(max_strands=4))
def test_connected_sum_counts(w1, w2):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", br.SplitSummandWarning)
        s = br.connected_sum(w1, w2)
    assert s.strands == w1.strands + w2.strands - 1
    assert s.exponent_sum == w1.exponent_sum + w2.exponent_sum


def test_permutation_of_wrap_word_identity_small():
    assert BraidPermutation.of(br.identity(4)).is_identity()
    assert BraidPermutation.of(BraidWord(3, (1,))).images == (1, 0, 2)


def test_rotation_rep_and_reduction():
    assert br.rotation_class_rep((2, 1, -2)) == (-2, 2, 1)
    assert not br.is_cyclically_reduced((1, -1))
    assert not br.is_cyclically_reduced((1, 2, -1))
    assert br.is_cyclically_reduced((1, 2, 1))
    assert sum(1 for _ in br.words(3, 2)) == 16
