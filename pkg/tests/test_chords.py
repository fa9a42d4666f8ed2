from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddkh.chords import (
    ChordDiagram,
    LinkingData,
    SeedError,
    certify_mutant_seed,
    chord_diagram,
    intersection_graph,
    linking_data,
    linking_matrix,
    mutation_equivalent,
    mutation_sequence,
    relabel,
    reverse_arcs,
)
from oddkh.corpus import corpus_names, load_diagram
from oddkh.diagram import DiagramError, resolve


def test_kink_seed(kink):
    ld = linking_data(kink)
    assert ld.a == ((0,),)
    assert ld.base_vertex == 1
    assert (ld.n_plus, ld.n_minus) == (1, 0)


def test_trefoil_seed(trefoil):
    ld = linking_data(trefoil)
    assert ld.n == 3
    assert ld.base_vertex == 0b110
    # around the circle: 0t 1h 2h 0h 2t 1t, so chord 0 crosses both others and 1, 2 are nested
    cd = chord_diagram(resolve(trefoil, ld.base_vertex))
    assert [i for i, _ in cd.order] == [0, 1, 2, 0, 2, 1]
    assert intersection_graph(ld) == ((0, 1, 1), (1, 0, 0), (1, 0, 0))


@pytest.mark.parametrize("name", corpus_names(max_crossings=8))
def test_linking_matrix_symmetric(name):
    d = load_diagram(name)
    ld = linking_data(d)
    cd = chord_diagram(resolve(d, ld.base_vertex))
    for i in range(ld.n):
        assert ld.a[i][i] == 0
        for j in range(ld.n):
            assert ld.a[i][j] == ld.a[j][i]
            assert abs(ld.a[i][j]) == (i != j and cd.interleaved(i, j))
            if ld.a[i][j]:
                assert cd.sides[i] != cd.sides[j]


def test_chord_diagram_needs_one_circle(trefoil):
    with pytest.raises(DiagramError):
        chord_diagram(resolve(trefoil, 0))


def test_seed_json_round_trip(trefoil):
    ld = linking_data(trefoil)
    again = LinkingData.loads(ld.dumps())
    assert again == ld
    obj = json.loads(ld.dumps())
    assert obj["schema"] == "oddkh.seed/1"
    assert set(obj) >= {"n", "a", "base_vertex", "n_plus", "n_minus"}


@pytest.mark.parametrize(
    "mutate, match",
    [
        (lambda o: o["a"][0].__setitem__(1, 5), "outside"),
        (lambda o: o["a"][0].__setitem__(0, 1), "diagonal"),
        (lambda o: o["a"][0].__setitem__(1, -o["a"][1][0] or 1), "asymmetric"),
        (lambda o: o.__setitem__("n_plus", 7), "n_plus"),
        (lambda o: o.__setitem__("base_vertex", "01"), "invalid seed"),
        (lambda o: o.pop("a"), "invalid seed"),
    ],
)
def test_seed_validation(trefoil, mutate, match):
    obj = linking_data(trefoil).to_json()
    mutate(obj)
    with pytest.raises(SeedError, match=match):
        LinkingData.from_json(obj)


def _random_perm_and_flips(n, rng):
    perm = list(range(n))
    rng.shuffle(perm)
    flips = {i for i in range(n) if rng.random() < 0.5}
    return tuple(perm), flips


@pytest.mark.parametrize("name", ["4_1", "6_2", "7_4", "8_17"])
def test_certify_finds_hidden_relabelling(name):
    ld = linking_data(load_diagram(name))
    rng = random.Random(name)
    for _ in range(5):
        perm, flips = _random_perm_and_flips(ld.n, rng)
        other = reverse_arcs(relabel(ld, perm), flips)
        w = certify_mutant_seed(ld, other)
        assert w is not None
        assert w.apply(other) == ld


def test_certify_with_pairing(trefoil):
    ld = linking_data(trefoil)
    perm = (2, 0, 1)
    other = relabel(ld, perm)
    inv = tuple(perm.index(i) for i in range(3))
    w = certify_mutant_seed(ld, other, pairing=inv)
    assert w is not None and w.perm == inv


def test_certify_rejects_different_seeds():
    a = linking_data(load_diagram("5_1"))
    b = linking_data(load_diagram("5_2"))
    assert certify_mutant_seed(a, b) is None
    with pytest.raises(SeedError):
        certify_mutant_seed(a, linking_data(load_diagram("4_1")))


def test_reverse_arcs_is_involution():
    ld = linking_data(load_diagram("6_1"))
    assert reverse_arcs(reverse_arcs(ld, {1, 3}), {1, 3}) == ld
    assert intersection_graph(reverse_arcs(ld, {0, 2, 5})) == intersection_graph(ld)


def _random_cd(n, rng):
    slots = [(i, e) for i in range(n) for e in (0, 1)]
    rng.shuffle(slots)
    return ChordDiagram(tuple(slots), tuple(rng.randint(0, 1) for _ in range(n)))


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_mutation_equivalence_is_an_equivalence(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    a, b, c = (_random_cd(n, rng) for _ in range(3))
    assert mutation_equivalent(a, a)
    assert mutation_equivalent(a, b) == mutation_equivalent(b, a)
    if mutation_equivalent(a, b) and mutation_equivalent(b, c):
        assert mutation_equivalent(a, c)


def test_mutation_equivalent_detects_difference():
    # three mutually crossing chords vs three disjoint chords
    star = ChordDiagram(((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)), (0, 1, 0))
    flat = ChordDiagram(((0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)), (0, 0, 0))
    assert not mutation_equivalent(star, flat)


def test_mutation_sequence_connects_equivalent_diagrams():
    rng = random.Random(11)
    found = 0
    for _ in range(40):
        a, b = _random_cd(4, rng), _random_cd(4, rng)
        if mutation_equivalent(a, b):
            path = mutation_sequence(a, b)
            assert path is not None
            found += 1
        else:
            assert mutation_sequence(a, b, max_states=2000) is None
    assert found > 0


def test_chord_diagram_validation():
    with pytest.raises(ValueError):
        ChordDiagram(((0, 0), (0, 0)), (0,))


def test_linking_matrix_sign_parameter(trefoil):
    cd = chord_diagram(resolve(trefoil, linking_data(trefoil).base_vertex))
    plus, minus = linking_matrix(cd, 1), linking_matrix(cd, -1)
    assert all(plus[i][j] == -minus[i][j] for i in range(3) for j in range(3))
