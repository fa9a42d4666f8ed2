from __future__ import annotations

import pytest

from oddkh.corpus import corpus_names, load_diagram
from oddkh.diagram import (
    DiagramError,
    black_graph,
    build_diagram,
    hypercube_order,
    one_circle_vertex,
    parse_pd,
    parse_vertex,
    resolve,
    vertex_bits,
)

from conftest import FIGURE_EIGHT, TREFOIL_LEFT


def test_parse_formats_agree():
    a = parse_pd(TREFOIL_LEFT)
    b = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]")
    c = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]  # trefoil")
    assert a == b == c
    assert a.n == 3


@pytest.mark.parametrize(
    "text",
    ["", "   # only a comment", "X(1,2,3)", "X(1,1,2,2) garbage", "[[1,2,3]]", "{]"],
)
def test_parse_errors(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_label_multiplicity_error():
    with pytest.raises(DiagramError, match="exactly twice"):
        parse_pd("X(1,1,1,2)")


def test_inconsistent_orientation_error():
    with pytest.raises(DiagramError, match="orientation"):
        build_diagram([(1, 1, 2, 3), (3, 2, 4, 4)])


def test_planarity_error():
    with pytest.raises(DiagramError, match="planar"):
        build_diagram([(1, 4, 2, 3), (2, 3, 1, 4)])


def test_kink(kink):
    assert kink.signs == (1,)
    assert kink.component_count == 1
    assert [resolve(kink, v).circle_count for v in (0, 1)] == [2, 1]
    assert one_circle_vertex(kink) == 1


def test_left_trefoil(trefoil):
    assert trefoil.signs == (-1, -1, -1)
    assert trefoil.writhe == -3
    assert len(trefoil.faces.cycles) == 5
    # all-0 smoothing of a negative trefoil is the 3-circle state
    assert resolve(trefoil, 0).circle_count == 3
    assert resolve(trefoil, 0b111).circle_count == 2
    v = one_circle_vertex(trefoil)
    assert resolve(trefoil, v).circle_count == 1


def test_figure_eight_signs():
    d = parse_pd(FIGURE_EIGHT)
    assert sorted(d.signs) == [-1, -1, 1, 1]
    assert d.writhe == 0


def test_hopf_components(hopf):
    assert hopf.component_count == 2
    assert resolve(hopf, one_circle_vertex(hopf)).circle_count == 1


def test_mirror_and_reverse(trefoil):
    m = trefoil.mirror()
    assert m.signs == (1, 1, 1)
    assert m.mirror().signs == trefoil.signs
    r = trefoil.reversed()
    assert r.signs == trefoil.signs


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_structure(name):
    d = load_diagram(name)
    assert len(d.faces.cycles) == d.n + 2 * d.connected_pieces
    colors = d.face_colors
    # adjacent faces across every edge differ in colour
    for x in range(d.n):
        for k in range(4):
            f1 = d.faces.face_of[(x, k)]
            f2 = d.faces.face_of[(x, (k + 1) % 4)]
            assert colors[f1] != colors[f2]
    g = black_graph(d)
    assert g.number_of_edges() == d.n
    v = one_circle_vertex(d)
    assert resolve(d, v).circle_count == 1


def test_disconnected_diagram_has_no_one_circle_vertex():
    d = parse_pd("X(1,1,2,2) X(3,3,4,4)")
    assert not d.is_connected
    assert d.connected_pieces == 2
    with pytest.raises(DiagramError, match="connected"):
        one_circle_vertex(d)


def test_resolution_arcs_and_json(trefoil):
    r = resolve(trefoil, 0b011)
    js = r.to_json()
    assert js["vertex"] == "110"
    assert js["circle_count"] == r.circle_count
    assert len(js["arcs"]) == 3
    labels = sorted(lab for c in js["circles"] for lab in c)
    assert labels == list(range(1, 7))


def test_circle_counts_change_by_one():
    d = load_diagram("6_2")
    for v in range(1 << d.n):
        c = resolve(d, v).circle_count
        for i in range(d.n):
            if not v >> i & 1:
                assert abs(resolve(d, v | 1 << i).circle_count - c) == 1


def test_vertex_helpers():
    assert vertex_bits(0b011, 3) == "110"
    assert parse_vertex("110") == 0b011
    with pytest.raises(DiagramError):
        parse_vertex("12")
    with pytest.raises(DiagramError):
        parse_vertex("10", 3)
    order = hypercube_order(3)
    assert order[0] == 0 and order[-1] == 7
    assert [bin(v).count("1") for v in order] == sorted(bin(v).count("1") for v in order)


def test_arrows_flip(trefoil):
    f = trefoil.flip_arrows({1})
    assert f.arrows == (0, 1, 0)
    r0, r1 = resolve(trefoil, 0), resolve(f, 0)
    assert r0.arcs[1] == (r1.arcs[1][1], r1.arcs[1][0])
