import pytest
from hypothesis import given, strategies as st

from relcurr.errors import InputError
from relcurr.words import (
    Alphabet,
    Automorphism,
    CyclicWord,
    canonical,
    cyclic_reduce,
    format_word,
    invert,
    is_cyclically_reduced,
    is_reduced,
    multiply,
    occurrences,
    parse_word,
    primitive_root,
    reduce,
)

from conftest import W

raw_words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14)


def test_reduce_examples():
    assert reduce((1, -1)) == ()
    assert reduce(W("a") + (2, -2) + W("a")) == W("aa")
    assert reduce(W("aba")) == W("aba")


def test_parse_and_format_round_trip():
    assert format_word(parse_word("abBa")) == "aa"
    assert parse_word("") == ()
    assert format_word(parse_word("AbC")) == "AbC"


@pytest.mark.parametrize("text", ["a#", "a1", "ä", "a b"])
def test_parse_rejects_unknown_symbols(text):
    with pytest.raises(InputError):
        parse_word(text)


def test_parse_respects_rank():
    with pytest.raises(InputError):
        parse_word("abc", rank=2)


def test_invert_examples():
    assert invert(W("ab")) == W("BA")
    assert invert(()) == ()
    assert invert(W("a")) == W("A")


def test_cyclic_reduce_examples():
    core, conj = cyclic_reduce(W("baB"))
    assert core == CyclicWord(W("a")) and conj == W("b")
    core, conj = cyclic_reduce(W("ab"))
    assert core.word == W("ab") and conj == ()
    core, _ = cyclic_reduce((1, 2, -2, -1))
    assert core is None


def test_primitive_root_examples():
    assert primitive_root(CyclicWord(W("abab"))) == (CyclicWord(W("ab")), 2)
    assert primitive_root(CyclicWord(W("ab"))) == (CyclicWord(W("ab")), 1)
    assert primitive_root(CyclicWord(W("aaa"))) == (CyclicWord(W("a")), 3)


def test_occurrences_examples():
    assert occurrences(W("a"), CyclicWord(W("ab"))) == 1
    assert occurrences(W("aa"), CyclicWord(W("a"))) == 1
    assert occurrences(W("b"), CyclicWord(W("a"))) == 0


def test_occurrences_wrap_around_when_longer_than_period():
    assert occurrences(W("abab"), CyclicWord(W("ab"))) == 1
    assert occurrences(W("babab"), CyclicWord(W("ab"))) == 1


def test_automorphism_examples():
    phi = Automorphism.parse(2, "a:ab", "a:aB")
    assert phi(W("a")) == W("ab")
    assert phi(()) == ()
    assert phi(W("aB")) == W("a")


def test_automorphism_rejects_wrong_inverse():
    with pytest.raises(InputError):
        Automorphism.parse(2, "a:ab", "a:ab")


def test_automorphism_then_inverse_is_identity_on_ball():
    phi = Automorphism.parse(2, "a:ab,b:b", "a:aB,b:b")
    psi = Automorphism.parse(2, "a:a,b:ba", "a:a,b:bA")
    chi = phi.compose(psi)
    inverse = chi.inverse()
    for w in Alphabet(2).words_up_to(8):
        assert inverse(chi(w)) == w
        assert chi(inverse(w)) == w


def test_compose_applies_right_factor_first():
    phi = Automorphism.parse(2, "a:ab", "a:aB")
    psi = Automorphism.parse(2, "b:ba", "b:bA")
    for w in Alphabet(2).words_up_to(4):
        assert phi.compose(psi)(w) == phi(psi(w))


def test_alphabet_order_and_counts():
    alphabet = Alphabet(2)
    assert [format_word((x,)) for x in alphabet.letters] == ["a", "A", "b", "B"]
    for m in range(1, 6):
        assert len(alphabet.reduced_words(m)) == 4 * 3 ** (m - 1)
    with pytest.raises(InputError):
        Alphabet(0)


@given(raw_words)
def test_reduce_is_idempotent_and_shortening(raw):
    w = reduce(raw)
    assert reduce(w) == w
    assert len(w) <= len(raw)
    assert is_reduced(w)


@given(raw_words)
def test_invert_is_an_involution_commuting_with_reduce(raw):
    assert invert(invert(tuple(raw))) == tuple(raw)
    assert reduce(invert(tuple(raw))) == invert(reduce(raw))
    assert multiply(reduce(raw), invert(reduce(raw))) == ()


@given(raw_words)
def test_cyclic_reduce_recovers_the_word(raw):
    w = reduce(raw)
    core, conj = cyclic_reduce(w)
    if core is None:
        assert w == ()
    else:
        assert is_cyclically_reduced(core.word)
        assert multiply(conj, core.word, invert(conj)) == w


@given(raw_words.filter(lambda r: reduce(r) != ()), st.integers(0, 6))
def test_occurrences_rotation_invariant(raw, shift):
    core, _ = cyclic_reduce(reduce(raw))
    if core is None:
        return
    w = core.word
    rotated = CyclicWord(w[shift % len(w):] + w[:shift % len(w)])
    for u in Alphabet(3).words_up_to(3):
        if u:
            assert occurrences(u, core) == occurrences(u, rotated)


@given(raw_words)
def test_primitive_root_power_reconstructs(raw):
    core, _ = cyclic_reduce(reduce(raw))
    if core is None:
        return
    root, k = primitive_root(core)
    assert root.word * k == core.word
    assert primitive_root(root) == (root, 1)


@given(raw_words)
def test_canonical_is_flip_invariant(raw):
    w = reduce(raw)
    assert canonical(w) == canonical(invert(w))
    assert canonical(w) in (w, invert(w))


def test_cyclic_word_equality_is_by_class():
    assert CyclicWord(W("ab")) == CyclicWord(W("ba"))
    assert CyclicWord(W("ab")) != CyclicWord(W("BA"))
    assert hash(CyclicWord(W("aab"))) == hash(CyclicWord(W("aba")))
    with pytest.raises(InputError):
        CyclicWord(W("abA"))
