from __future__ import annotations

import pytest

from oddkh.chords import linking_data
from oddkh.complex import build_geometric, build_thrifty
from oddkh.corpus import corpus_names, goldens, load_diagram
from oddkh.diagram import parse_pd
from oddkh.exactalg import IntMatrix
from oddkh.homology import (
    BigradedHomology,
    HomologyError,
    LaurentPoly,
    bigraded_homology,
    check_splitting,
    check_universal_coefficients,
    compute_homology,
    determinant_from_jones,
    homology_mod2,
    jones_oracle,
    poincare_and_euler,
    torsion_chain,
)

q = lambda coeffs: LaurentPoly.one_var("q", coeffs)  # noqa: E731


def reduced(d):
    return compute_homology(build_thrifty(linking_data(d)), mod2=True)


def test_torsion_chain():
    assert torsion_chain([2, 3]) == (6,)
    assert torsion_chain([2, 2]) == (2, 2)
    assert torsion_chain([4, 6]) == (2, 12)
    assert torsion_chain([]) == ()


def test_zero_differential():
    hom = bigraded_homology({(0, 0): IntMatrix(0, 1)})
    assert hom.groups == {(0, 0): (1, ())}
    p, e = poincare_and_euler(hom)
    assert str(p) == "1" and str(e) == "1"


def test_torsion_from_matrix():
    mats = {(0, 0): IntMatrix.from_dense([[2]]), (1, 0): IntMatrix(0, 1)}
    hom = bigraded_homology(mats)
    assert hom.groups == {(1, 0): (0, (2,))}
    assert homology_mod2(mats) == {(0, 0): 1, (1, 0): 1}
    assert check_universal_coefficients(hom, homology_mod2(mats)) == (True, None)


def test_d_squared_detected():
    mats = {(0, 0): IntMatrix.from_dense([[1]]), (1, 0): IntMatrix.from_dense([[1]])}
    with pytest.raises(HomologyError):
        bigraded_homology(mats)


def test_kink_reduced(kink):
    assert reduced(kink).homology.groups == {(0, 0): (1, ())}


def test_left_trefoil_golden(trefoil):
    # mirror of the KnotInfo table q^2 + t^2 q^6 + t^3 q^8
    run = reduced(trefoil)
    assert run.homology.groups == {(-3, -8): (1, ()), (-2, -6): (1, ()), (0, -2): (1, ())}
    geo = compute_homology(build_geometric(trefoil)).homology
    assert geo == run.homology


def test_trefoil_jones(trefoil):
    assert jones_oracle(trefoil) == q({-8: -1, -6: 1, -2: 1})
    _, euler = poincare_and_euler(reduced(trefoil).homology)
    assert euler == jones_oracle(trefoil)


def test_mirror_inverts_euler_characteristic(trefoil):
    e1 = poincare_and_euler(reduced(trefoil).homology)[1]
    e2 = poincare_and_euler(reduced(trefoil.mirror()).homology)[1]
    assert e2 == e1.substitute_inverse()


def test_hopf_link(hopf):
    j = jones_oracle(hopf)
    assert poincare_and_euler(reduced(hopf).homology)[1] == j
    assert determinant_from_jones(j) == 2
    assert reduced(hopf).homology.total_rank() == 2


def test_unknot_diagrams_have_trivial_jones():
    for name in ("kink", "kink_neg", "twist_unknot"):
        assert jones_oracle(load_diagram(name)) == q({0: 1})


def test_unlink_jones():
    d = parse_pd("X(1,1,2,2) X(3,3,4,4)")
    assert jones_oracle(d) == q({-1: 1, 1: 1})


@pytest.mark.parametrize("name", [n for n in corpus_names(max_crossings=7) if n in goldens()])
def test_knotinfo_tables(name):
    g = goldens()[name]
    run = reduced(load_diagram(name))
    assert run.homology == BigradedHomology.from_json(g["odd_reduced"])
    jt = {2 * int(k): v for k, v in g["jones_t"].items()}
    assert jones_oracle(load_diagram(name)) == q(jt)


def test_torsion_example_8_19():
    run = reduced(load_diagram("8_19"))
    assert run.homology.torsion(4, 12) == (2,)
    assert run.homology.torsion(5, 14) == (3,)
    assert check_universal_coefficients(run.homology, run.mod2) == (True, None)
    # Z/2 in degree 4 shows up over the two-element field in degrees 3 and 4
    assert run.mod2[(4, 12)] == 1 and run.mod2[(3, 12)] == 1


@pytest.mark.parametrize("name", ["kink", "trefoil_left", "4_1", "5_2", "hopf", "8_19"])
def test_splitting(name):
    d = load_diagram(name)
    red = reduced(d).homology
    un = compute_homology(build_geometric(d, reduced=False)).homology
    assert check_splitting(un, red) == (True, None)
    assert check_splitting(un, red.shifted(0, 2))[0] is False


@pytest.mark.parametrize("name", ["4_1", "6_1", "7_7"])
def test_mod2_at_least_free_rank(name):
    run = reduced(load_diagram(name))
    for key, (rank, _) in run.homology.groups.items():
        assert run.mod2.get(key, 0) >= rank


def test_homology_json_round_trip(trefoil):
    hom = reduced(trefoil).homology
    assert BigradedHomology.from_json(hom.to_json()) == hom
    assert "Z" in hom.table()


def test_laurent_poly_formatting():
    assert str(q({-2: 1, 0: -3, 1: 2})) == "q^-2 - 3 + 2 q"
    assert str(q({})) == "0"
    assert q({1: 1}) * q({-1: 1}) == q({0: 1})


@pytest.mark.parametrize("name,det", [("3_1", 3), ("4_1", 5), ("5_1", 5), ("5_2", 7), ("8_18", 45), ("KT", 1)])
def test_determinants(name, det):
    assert determinant_from_jones(jones_oracle(load_diagram(name))) == det
