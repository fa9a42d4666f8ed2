"""Sign conventions pinned by exact checks rather than by reading pictures."""

from __future__ import annotations

import pytest

from oddkh.chords import LINK_SIGN, chord_diagram, linking_data, linking_matrix
from oddkh.complex import _thrifty_relations, build_geometric, build_thrifty, check_canonical_iso
from oddkh.corpus import load_diagram
from oddkh.diagram import resolve
from oddkh.exactalg import elementary_divisors

from conftest import small_corpus


def _kernel_violations(d, sign):
    ld = linking_data(d)
    a = linking_matrix(chord_diagram(resolve(d, ld.base_vertex)), sign)
    ld = type(ld)(a, ld.base_vertex, ld.n_plus, ld.n_minus)
    bad = 0
    for v in range(1 << d.n):
        r = resolve(d, v)
        rel = _thrifty_relations(ld, v)
        for col in rel.columns():
            image = [0] * r.circle_count
            for j, x in enumerate(col):
                t, h = r.arc_circles(j)
                image[t] += x
                image[h] -= x
            bad += any(image)
        divs = elementary_divisors(rel)
        bad += len(divs) != d.n - r.circle_count + 1 or any(x != 1 for x in divs)
    return bad


@pytest.mark.parametrize("name,d", small_corpus(6))
def test_relations_span_boundary_kernel(name, d):
    assert _kernel_violations(d, LINK_SIGN) == 0


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "6_3"])
def test_opposite_sign_fails(name):
    assert _kernel_violations(load_diagram(name), -LINK_SIGN) > 0


@pytest.mark.parametrize("arrows", [(0, 0, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1), (0, 1, 1, 0)])
def test_calibration_independent_of_arrows(arrows):
    d = load_diagram("4_1").with_arrows(arrows)
    assert _kernel_violations(d, LINK_SIGN) == 0
    ld = linking_data(d)
    assert check_canonical_iso(build_thrifty(ld), build_geometric(d))


def test_reduced_unknot_grading(kink):
    from oddkh.homology import compute_homology

    hom = compute_homology(build_thrifty(linking_data(kink))).homology
    assert hom.groups == {(0, 0): (1, ())}
