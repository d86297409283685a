import random

import pytest

from phonotale.distance import (
    feature_edit_distance,
    feature_edit_distance_units,
    pfer,
    substitution_cost,
)
from phonotale.errors import EmptyReference, UnknownSymbol
from phonotale.phonology import PhoneSeq

from oracle import recursive_distance_units

UNIT = 1 / 24


def seq(*symbols):
    return PhoneSeq.from_symbols(symbols)


@pytest.mark.parametrize(
    ("a", "b", "units"),
    [
        ("p", "p", 0),
        ("p", "b", 1),   # voicing only
        ("ʐ", "ʃ", 2),
        ("t", "p", 3),
        ("s", "ʃ", 2),
        ("ɪ", "ɛ", 1),
        ("o", "ʊ", 2),
    ],
)
def test_substitution_cost_pinned_pairs(table, a, b, units):
    assert substitution_cost(a, b, table) == pytest.approx(units * UNIT)
    assert substitution_cost(b, a, table) == substitution_cost(a, b, table)


def test_substitution_cost_zero_iff_identical_vector(table):
    assert substitution_cost("ɡ", "g", table) == 0.0  # alias rows share a vector
    assert substitution_cost("p", "b", table) > 0.0


def test_substitution_cost_unknown_symbol(table):
    with pytest.raises(UnknownSymbol):
        substitution_cost("p", "ʘ", table)


@pytest.mark.parametrize(
    ("ref", "hyp", "units"),
    [
        (("ʐ", "e", "ɪ", "t", "s"), ("ʃ", "e", "ɪ", "p", "s"), 5),
        (("ʐ", "e", "ɪ", "t", "s"), ("ʃ", "e", "ɪ", "t"), 26),
        (("o", "t", "o"), ("o", "ʊ", "t", "o", "ʊ"), 48),  # two insertions
        (("f", "ɪ", "s"), ("f", "ɪ", "ʃ"), 2),
        ((), (), 0),
        (("p",), (), 24),
        ((), ("p", "b"), 48),
    ],
)
def test_feature_edit_distance_pinned(table, ref, hyp, units):
    assert feature_edit_distance(seq(*ref), seq(*hyp), table) == pytest.approx(units * UNIT)


def test_distance_identity_on_any_sequence(table):
    for symbols in [("r", "e", "t"), ("t͡ʃ", "ɪ", "p"), ("ɚ",)]:
        assert feature_edit_distance(seq(*symbols), seq(*symbols), table) == 0.0


def test_unknown_symbol_propagates_even_for_indel_only_paths(table):
    with pytest.raises(UnknownSymbol):
        feature_edit_distance(seq("ʘ"), seq(), table)


ALPHABET_20 = ["p", "b", "t", "d", "k", "ɡ", "m", "n", "f", "s",
               "z", "ʃ", "l", "r", "w", "j", "i", "æ", "o", "u"]


def random_seq(rng, alphabet, max_len=4):
    return seq(*(rng.choice(alphabet) for _ in range(rng.randint(0, max_len))))


def test_metric_properties_randomized(table):
    rng = random.Random(20250809)
    for _ in range(300):
        a = random_seq(rng, ALPHABET_20)
        b = random_seq(rng, ALPHABET_20)
        c = random_seq(rng, ALPHABET_20)
        dab = feature_edit_distance(a, b, table)
        assert feature_edit_distance(a, a, table) == 0.0
        assert dab == feature_edit_distance(b, a, table)
        dac = feature_edit_distance(a, c, table)
        dbc = feature_edit_distance(b, c, table)
        assert dac <= dab + dbc + 1e-12


def test_every_distance_is_a_multiple_of_one_24th(table):
    rng = random.Random(7)
    for _ in range(200):
        a = random_seq(rng, ALPHABET_20)
        b = random_seq(rng, ALPHABET_20)
        units = feature_edit_distance_units(a, b, table)
        assert feature_edit_distance(a, b, table) * 24 == pytest.approx(units)


def test_dp_equals_recursive_oracle_sampled(table):
    rng = random.Random(99)
    alphabet = ALPHABET_20[:10]
    for _ in range(300):
        a = random_seq(rng, alphabet, max_len=3)
        b = random_seq(rng, alphabet, max_len=3)
        got = feature_edit_distance_units(a, b, table)
        want = recursive_distance_units(tuple(a.symbols()), tuple(b.symbols()))
        assert got == want


@pytest.mark.parametrize(
    ("ref", "hyp", "rate"),
    [
        (("f", "ɪ", "s"), ("f", "ɪ", "ʃ"), (2 / 24) / 3),
        (("r", "e", "t"), ("r", "e", "t"), 0.0),
        (("p",), (), 1.0),
    ],
)
def test_pfer(table, ref, hyp, rate):
    assert pfer(seq(*ref), seq(*hyp), table) == pytest.approx(rate)


def test_pfer_empty_reference(table):
    with pytest.raises(EmptyReference):
        pfer(seq(), seq("p"), table)
