import json
from itertools import product

import pytest
from hypothesis import given

from khovlat.classify import (
    CompositionMatrix,
    Verdict,
    composition_matrix,
    contains_2plus2,
    downset_chain,
    is_1plus1plus1_free,
    is_2plus2_free,
    is_free,
    poset_from_composition_matrix,
    predict_khovanskii,
    recognize_snake,
    snake_covers,
    snake_poset,
)
from khovlat.poset import (
    Poset,
    PosetError,
    antichain,
    build_lattice,
    chain,
    enumerate_posets,
    is_isomorphic,
    join_irreducibles,
    ordinal_decompose,
    width,
)
from khovlat.toric import cocomparability_graph, is_bipartite

import oracles
from strategies import posets

FIG7 = Poset("123456", [("1", "2"), ("2", "3"), ("3", "4"), ("5", "4"), ("5", "6"), ("2", "6")])
TWO_PLUS_TWO = Poset("abcd", [("a", "b"), ("c", "d")])
THREE = antichain(3)

# cover set of the 12-element snake lattice for the word LLRL, fixed by hand
FIG5_COVERS = {
    (0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (4, 5), (3, 5), (4, 6),
    (6, 7), (5, 7), (5, 8), (8, 9), (7, 9), (7, 10), (9, 11), (10, 11),
}


# -- forbidden subposets -----------------------------------------------


def test_forbidden_examples():
    assert not is_2plus2_free(TWO_PLUS_TWO)
    assert is_2plus2_free(FIG7) and is_2plus2_free(chain(4))
    assert not is_1plus1plus1_free(THREE)
    assert is_1plus1plus1_free(TWO_PLUS_TWO) and is_1plus1plus1_free(FIG7)
    assert is_free(FIG7) and not is_free(TWO_PLUS_TWO)


@given(posets(max_size=6))
def test_two_2plus2_tests_agree(p):
    less = lambda a, b: p.lt(a, b)
    expected = not oracles.brute_has_2plus2(list(p.labels), less)
    assert is_2plus2_free(p) == expected
    assert (not contains_2plus2(p)) == expected
    assert is_1plus1plus1_free(p) == (oracles.brute_width(list(p.labels), less) <= 2)


# -- downsets and composition matrices ---------------------------------


def test_downset_chain_fig7():
    rows = downset_chain(FIG7)
    assert [sorted(d) for d, _, _ in rows] == [[], ["1"], ["1", "2"], ["1", "2", "5"], ["1", "2", "3", "5"]]
    assert [sorted(lev) for _, lev, _ in rows] == [["1", "5"], ["2"], ["3"], ["6"], ["4"]]
    assert [sorted(k) for _, _, k in rows] == [["1"], ["2"], ["5"], ["3"], ["4", "6"]]


def test_downset_chain_small():
    c = chain(2, "x")
    assert [(set(d), set(lev)) for d, lev, _ in downset_chain(c)] == [(set(), {"x0"}), ({"x0"}, {"x1"})]
    a = antichain(2)
    assert [(set(d), set(lev)) for d, lev, _ in downset_chain(a)] == [(set(), {"a0", "a1"})]
    with pytest.raises(PosetError):
        downset_chain(TWO_PLUS_TWO)


def test_composition_matrix_fig7():
    e = []
    expected = [
        [["1"], e, ["5"], e, e],
        [e, ["2"], e, e, e],
        [e, e, e, ["3"], e],
        [e, e, e, e, ["6"]],
        [e, e, e, e, ["4"]],
    ]
    m = composition_matrix(FIG7)
    assert m.to_json() == expected
    assert is_isomorphic(poset_from_composition_matrix(m), FIG7)
    assert CompositionMatrix.from_json(json.loads(m.dumps())) == m


def test_composition_matrix_small():
    assert composition_matrix(chain(1, "a")).to_json() == [[["a0"]]]
    assert composition_matrix(antichain(2)).to_json() == [[["a0", "a1"]]]
    assert poset_from_composition_matrix(CompositionMatrix.from_json([[["a"]]])) == Poset("a")
    assert poset_from_composition_matrix(CompositionMatrix.from_json([[["a", "b"]]])) == Poset("ab")
    with pytest.raises(PosetError):
        composition_matrix(TWO_PLUS_TWO)


@pytest.mark.parametrize(
    "cells,needle",
    [
        ([[["a"], []], [["b"], ["c"]]], "below the diagonal"),
        ([[["a"], ["a"]], [[], ["b"]]], "two cells"),
        ([[["a"], ["b"]], [[], []]], "row 2"),
        ([[["a"]], [["b"]]], "square"),
    ],
)
def test_composition_matrix_validation(cells, needle):
    with pytest.raises(PosetError, match=needle):
        CompositionMatrix.from_json(cells)


def test_composition_round_trip_up_to_seven():
    for n in range(1, 8):
        for p in enumerate_posets(n):
            if not is_2plus2_free(p):
                continue
            m = composition_matrix(p)
            assert is_isomorphic(poset_from_composition_matrix(m), p)


def test_free_irreducible_matrix_shape():
    for n in range(2, 8):
        for p in enumerate_posets(n):
            if not is_free(p) or len(ordinal_decompose(p)) > 1:
                continue
            m = composition_matrix(p)
            assert m.size == n - 1
            assert len(m.row_union(0)) == 2 and len(m.column_union(n - 2)) == 2
            for k in range(1, n - 1):
                assert len(m.row_union(k)) == 1
            for k in range(n - 2):
                assert len(m.column_union(k)) == 1


# -- snake lattices ----------------------------------------------------


def test_snake_of_empty_word():
    lat = snake_poset("")
    assert lat.covers() == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert snake_poset("ε").covers() == lat.covers()


def test_snake_fig5():
    lat = snake_poset("εLLRL")
    assert len(lat) == 12
    assert set(lat.covers()) == FIG5_COVERS
    assert is_isomorphic(join_irreducibles(lat), FIG7)


def test_snake_single_letter_matches_ideals():
    p = Poset(["a0", "b0", "a1"], [("a0", "a1")])
    lat = snake_poset("L")
    assert len(lat) == 6
    assert is_isomorphic(lat.to_poset(), build_lattice(p).to_poset())


def test_snake_rejects_bad_letters():
    with pytest.raises(ValueError):
        snake_poset("LX")


@pytest.mark.parametrize("length", range(0, 9))
def test_snake_round_trip_and_shape(length):
    for w in ("".join(t) for t in product("LR", repeat=length)):
        lat = snake_poset(w)
        assert recognize_snake(lat) == w
        assert len(lat) == 2 * len(w) + 4
        assert width(lat.to_poset()) == 2
        assert is_bipartite(cocomparability_graph(lat))
        assert lat.is_distributive()
        assert set(lat.covers()) == set(snake_covers(w))


def test_recognize_rejects_non_snakes():
    assert recognize_snake(build_lattice(THREE)) is None
    assert recognize_snake(build_lattice(TWO_PLUS_TWO)) is None
    assert recognize_snake(build_lattice(chain(3))) is None
    assert recognize_snake(build_lattice(Poset([]))) is None


def test_recognize_on_relabelled_lattice():
    # the same lattice reached as ideals of its join-irreducibles, so element indices differ
    lat = snake_poset("RRLR")
    again = build_lattice(join_irreducibles(lat))
    w = recognize_snake(again)
    assert w is not None
    assert is_isomorphic(snake_poset(w).to_poset(), lat.to_poset())


def test_recognize_iff_free_and_irreducible():
    for n in range(2, 8):
        for p in enumerate_posets(n):
            found = recognize_snake(build_lattice(p)) is not None
            assert found == (is_free(p) and len(ordinal_decompose(p)) == 1), p


# -- prediction --------------------------------------------------------


def test_predict_examples():
    assert not predict_khovanskii(TWO_PLUS_TWO)
    assert not predict_khovanskii(THREE)
    assert predict_khovanskii(FIG7)
    assert predict_khovanskii(chain(1))
    assert predict_khovanskii(Poset([]))


def test_verdict_witness_rule():
    Verdict(True)
    Verdict(False, "predicted")
    Verdict(False, witness={"walk": []})
    with pytest.raises(ValueError):
        Verdict(False)
    with pytest.raises(ValueError):
        Verdict(True, witness={})
    with pytest.raises(ValueError):
        Verdict(True, method="guess")
