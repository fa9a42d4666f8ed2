"""Surgery presentations of branched double covers from linking data.

The arcs of a one-circle resolution lift to a framed link in the branched
double cover.  Its linking matrix is ``-a_ij`` off the diagonal with
framing ``(-1)^(m_i*)`` on the diagonal; at another vertex the arcs with
``m_i = m_i*`` get framing infinity (they are dropped) and the others get
framing 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .chords import LinkingData, intersection_graph
from .exactalg import IntMatrix, cokernel_invariants, determinant

__all__ = [
    "SurgeryMatrix",
    "surgery_matrix",
    "h1_branched_cover",
    "vertex_surgery_matrix",
    "mutant_surgery_check",
]


@dataclass(frozen=True)
class SurgeryMatrix:
    """Linking matrix ``matrix`` of the framed link; component ``i`` lifts arc ``meridians[i]``."""

    matrix: IntMatrix
    meridians: tuple[int, ...]
    seed: LinkingData

    def determinant(self) -> int:
        return determinant(self.matrix.to_dense())

    def to_json(self) -> dict:
        return {"matrix": self.matrix.to_dense(), "meridians": list(self.meridians)}


def surgery_matrix(ld: LinkingData) -> SurgeryMatrix:
    n = ld.n
    rows = [[-ld.a[i][j] if i != j else (-1) ** ld.base(i) for j in range(n)] for i in range(n)]
    return SurgeryMatrix(IntMatrix.from_dense(rows, n), tuple(range(n)), ld)


def h1_branched_cover(sm: SurgeryMatrix | IntMatrix) -> tuple[int, list[int]]:
    """``(free rank, torsion divisors)`` of the cokernel of the surgery matrix."""
    m = sm.matrix if isinstance(sm, SurgeryMatrix) else sm
    return cokernel_invariants(m)


def vertex_surgery_matrix(ld: LinkingData, vertex: int) -> IntMatrix:
    """Surgery matrix at ``vertex``: arcs with ``m_i != m_i*``, zero diagonal."""
    keep = [i for i in range(ld.n) if (vertex >> i & 1) != ld.base(i)]
    rows = [[-ld.a[i][j] if i != j else 0 for j in keep] for i in keep]
    return IntMatrix.from_dense(rows, len(keep))


def _labelled_graph(ld: LinkingData) -> nx.Graph:
    g = nx.Graph()
    adj = intersection_graph(ld)
    for i in range(ld.n):
        g.add_node(i, m=ld.base(i))
    g.add_edges_from((i, j) for i in range(ld.n) for j in range(i + 1, ld.n) if adj[i][j])
    return g


def mutant_surgery_check(ld1: LinkingData, ld2: LinkingData) -> bool:
    """Whether the intersection graphs match by a relabelling that preserves base-vertex coordinates.

    Such a match makes the two framed links isotopic, so the two seeds
    present the same branched double cover with the same surgery data.
    """
    if ld1.n != ld2.n:
        return False
    return nx.is_isomorphic(_labelled_graph(ld1), _labelled_graph(ld2), node_match=lambda a, b: a["m"] == b["m"])
