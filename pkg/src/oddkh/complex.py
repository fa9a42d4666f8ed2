"""Odd Khovanov chain complexes over the hypercube of resolutions.

Three constructions share one engine:

``thrifty``
    Generators ``x_1..x_n`` (one per crossing arc) modulo relations read
    off the linking data alone.
``compact``
    Generators ``x_j`` for ``j`` in ``K = {j : m_j != m_j*}`` only, with the
    principal minor of the signed linking matrix as relations.
``geometric``
    Generators are the circles of the resolution; an arc contributes
    ``tail circle - head circle``.  The reduced version divides by the circle
    through the smallest edge label (isomorphic to the augmentation kernel).

At each vertex the exterior algebra of the free group is a chain group.
The edge map in direction ``i`` is ``x_i ^ g`` when ``x_i`` vanishes at the
source (a split) and the induced map ``g`` otherwise (a merge), where ``g``
is a generator-level map.  Signs ``eps`` make every square anticommute.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .chords import LinkingData
from .diagram import LinkDiagram, hypercube_order, resolve, vertex_bits, weight
from .exactalg import (
    ExteriorMap,
    IntMatrix,
    PresentedGroup,
    compose,
    determinant,
    exterior_basis,
    induced_exterior_map,
)

__all__ = [
    "VARIANTS",
    "FaceType",
    "VertexGroup",
    "OddComplex",
    "EdgeAssignmentError",
    "CanonicalIsoError",
    "build_thrifty",
    "build_geometric",
    "classify_face",
    "edge_assignment",
    "gauge_transform",
    "check_edge_assignment",
    "assemble_differentials",
    "check_d_squared",
    "check_canonical_iso",
]

VARIANTS = ("thrifty", "compact", "geometric-reduced", "geometric-unreduced")


class FaceType(enum.Enum):
    TYPE_X = "X"
    TYPE_Y = "Y"
    COMMUTING = "commuting"
    ANTICOMMUTING = "anticommuting"


# required parity of the eps-product (0 means product +1) per face type
FACE_PARITY = {
    FaceType.TYPE_X: 0,
    FaceType.TYPE_Y: 1,
    FaceType.COMMUTING: 1,
    FaceType.ANTICOMMUTING: 0,
}


class EdgeAssignmentError(RuntimeError):
    """No sign assignment satisfies the face constraints (should never happen)."""


class CanonicalIsoError(RuntimeError):
    """Two complexes failed to match under the canonical identification."""


@dataclass(frozen=True)
class VertexGroup:
    """Free group at one vertex with the image of every arc generator.

    ``values[i]`` is ``x_i`` written in the ``group.k`` generators;
    ``circle_count`` is the number of circles of the resolution;
    ``arcs`` names the arc behind each generator (``None`` when generators are circles).
    """

    vertex: int
    group: PresentedGroup
    values: tuple[tuple[int, ...], ...]
    circle_count: int
    arcs: tuple[int, ...] | None = None

    @property
    def rank(self) -> int:
        return self.group.rank

    def arc_is_zero(self, i: int) -> bool:
        return self.group.is_zero(self.values[i])


class OddComplex:
    """Hypercube of vertex groups with lazily built edge maps.

    ``gen_map(I, J)`` returns the ``k_J x k_I`` generator-level matrix used for
    the edge from ``I`` to ``J``.
    """

    def __init__(self, variant: str, n: int, n_plus: int, n_minus: int, groups, gen_map, reduced: bool = True):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.variant = variant
        self.n = n
        self.n_plus = n_plus
        self.n_minus = n_minus
        self.reduced = reduced
        self.groups: list[VertexGroup] = groups
        self._gen_map = gen_map
        self._edges: dict[tuple[int, int], ExteriorMap] = {}
        self._faces: dict[tuple[int, int, int], FaceType] = {}

    def __repr__(self) -> str:
        return f"OddComplex({self.variant}, n={self.n})"

    # grading -------------------------------------------------------------

    def h(self, vertex: int) -> int:
        return weight(vertex) - self.n_minus

    def q(self, vertex: int, p: int) -> int:
        c = self.groups[vertex].circle_count
        q = c - 2 * p + weight(vertex) + self.n_plus - 2 * self.n_minus
        return q - 1 if self.reduced else q

    # edges -------------------------------------------------------------

    def is_split(self, vertex: int, i: int) -> bool:
        return self.groups[vertex].arc_is_zero(i)

    def edge_map(self, vertex: int, i: int) -> ExteriorMap:
        if vertex >> i & 1:
            raise ValueError(f"no edge from {vertex_bits(vertex, self.n)} in direction {i}")
        key = (vertex, i)
        m = self._edges.get(key)
        if m is None:
            src = self.groups[vertex]
            tgt = vertex | (1 << i)
            dst = self.groups[tgt]
            pre = dst.values[i] if src.arc_is_zero(i) else None
            m = induced_exterior_map(src.group, dst.group, self._gen_map(vertex, tgt), pre)
            self._edges[key] = m
        return m

    def edges(self):
        for v in hypercube_order(self.n):
            for i in range(self.n):
                if not v >> i & 1:
                    yield v, i

    def faces(self):
        for v in hypercube_order(self.n):
            free = [i for i in range(self.n) if not v >> i & 1]
            for a in range(len(free)):
                for b in range(a + 1, len(free)):
                    yield v, free[a], free[b]

    def to_json(self, eps: dict | None = None) -> dict:
        """Per-vertex ranks and per-edge sign and map descriptor."""
        out = {
            "schema": "oddkh.complex/1",
            "variant": self.variant,
            "n": self.n,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "vertices": [],
            "edges": [],
        }
        for v in hypercube_order(self.n):
            g = self.groups[v]
            out["vertices"].append(
                {"vertex": vertex_bits(v, self.n), "rank": g.rank, "circle_count": g.circle_count, "h": self.h(v)}
            )
        for v, i in self.edges():
            tgt = v | (1 << i)
            split = self.is_split(v, i)
            rec = {
                "from": vertex_bits(v, self.n),
                "to": vertex_bits(tgt, self.n),
                "crossing": i,
                "kind": "split" if split else "merge",
            }
            if split:
                rec["wedge"] = list(self.groups[tgt].group.coords(self.groups[tgt].values[i]))
            else:
                m = self.edge_map(v, i)
                rec["matrix"] = m.matrix(1).to_dense() if m.src_rank else []
            if eps is not None:
                rec["sign"] = -1 if eps[(v, i)] else 1
            out["edges"].append(rec)
        return out

    def dumps(self, eps: dict | None = None) -> str:
        return json.dumps(self.to_json(eps), indent=1)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _in_k(ld: LinkingData, vertex: int) -> list[int]:
    return [j for j in range(ld.n) if (vertex >> j & 1) != ld.base(j)]


def _thrifty_relations(ld: LinkingData, vertex: int) -> IntMatrix:
    n = ld.n
    k = _in_k(ld, vertex)
    cols = []
    for i in range(n):
        col = [0] * n
        if i not in k:
            col[i] = 1
        for j in k:
            col[j] += -ld.a[i][j] if ld.base(j) else ld.a[i][j]
        cols.append(col)
    return IntMatrix.from_columns(n, cols)


def build_thrifty(ld: LinkingData, compact: bool = False) -> OddComplex:
    """Complex determined by linking data alone.

    With ``compact`` the generators are restricted to ``K`` at each vertex.
    """
    n = ld.n
    groups: list[VertexGroup] = []
    for v in range(1 << n):
        if not compact:
            grp = PresentedGroup(n, _thrifty_relations(ld, v))
            values = tuple(tuple(int(j == i) for j in range(n)) for i in range(n))
            arcs = tuple(range(n))
        else:
            k = _in_k(ld, v)
            idx = {j: t for t, j in enumerate(k)}
            cols = [[(-1) ** (ld.base(i) + ld.base(j)) * ld.a[i][j] for j in k] for i in k]
            grp = PresentedGroup(len(k), IntMatrix.from_columns(len(k), cols))
            vals = []
            for i in range(n):
                vec = [0] * len(k)
                if i in idx:
                    vec[idx[i]] = 1
                else:
                    for j in k:
                        vec[idx[j]] -= -ld.a[i][j] if ld.base(j) else ld.a[i][j]
                vals.append(tuple(vec))
            values = tuple(vals)
            arcs = tuple(k)
        groups.append(VertexGroup(v, grp, values, grp.rank + 1, arcs))

    if not compact:
        ident = IntMatrix.identity(n)

        def gen_map(src, dst):
            return ident

        return OddComplex("thrifty", n, ld.n_plus, ld.n_minus, groups, gen_map)

    def gen_map_compact(src, dst):
        # generator x_j (j in K at src) goes to the value of x_j at dst
        cols = [groups[dst].values[j] for j in groups[src].arcs]
        return IntMatrix.from_columns(groups[dst].group.k, cols)

    return OddComplex("compact", n, ld.n_plus, ld.n_minus, groups, gen_map_compact)


def build_geometric(d: LinkDiagram, reduced: bool = True) -> OddComplex:
    """Circle-generated complex of the resolutions of ``d``.

    Reduced: circles modulo the circle containing the smallest edge label.
    """
    n = d.n
    resolutions = [resolve(d, v) for v in range(1 << n)]
    smallest = min(min(x) for x in d.crossings)
    groups = []
    for v, r in enumerate(resolutions):
        c = r.circle_count
        if reduced:
            marked = r.circle_of_label[smallest]
            rel = IntMatrix.from_columns(c, [[int(t == marked) for t in range(c)]])
        else:
            rel = IntMatrix(c, 0)
        vals = []
        for i in range(n):
            t, h = r.arc_circles(i)
            vec = [0] * c
            vec[t] += 1
            vec[h] -= 1
            vals.append(tuple(vec))
        groups.append(VertexGroup(v, PresentedGroup(c, rel), tuple(vals), c))

    first_label = []
    for r in resolutions:
        lab = {}
        for label, ci in r.circle_of_label.items():
            if ci not in lab or label < lab[ci]:
                lab[ci] = label
        first_label.append([lab[ci] for ci in range(r.circle_count)])

    def gen_map(src, dst):
        # each circle goes to the descendant through its smallest label
        where = resolutions[dst].circle_of_label
        cols = []
        for label in first_label[src]:
            col = [0] * resolutions[dst].circle_count
            col[where[label]] = 1
            cols.append(col)
        return IntMatrix.from_columns(resolutions[dst].circle_count, cols)

    variant = "geometric-reduced" if reduced else "geometric-unreduced"
    return OddComplex(variant, n, d.n_plus, d.n_minus, groups, gen_map, reduced=reduced)


# ---------------------------------------------------------------------------
# Faces and edge signs
# ---------------------------------------------------------------------------


def _neg(e: dict[int, int]) -> dict[int, int]:
    return {k: -v for k, v in e.items()}


def _ladybug_type(cx: OddComplex, vertex: int, i: int, j: int) -> FaceType:
    kinds = set()
    for mid in (vertex | 1 << i, vertex | 1 << j):
        g = cx.groups[mid]
        xi, xj = g.values[i], g.values[j]
        minus = g.group.is_zero([a - b for a, b in zip(xi, xj)])
        plus = g.group.is_zero([a + b for a, b in zip(xi, xj)])
        if minus == plus:
            raise RuntimeError(f"ladybug face at {vertex_bits(vertex, cx.n)} ({i},{j}) has no sign relation")
        kinds.add(FaceType.TYPE_X if minus else FaceType.TYPE_Y)
    if len(kinds) != 1:
        raise RuntimeError(f"ladybug face at {vertex_bits(vertex, cx.n)} ({i},{j}) is inconsistent")
    return kinds.pop()


def classify_face(cx: OddComplex, face: tuple[int, int, int], full: bool = False) -> FaceType:
    """Type of the square above ``vertex`` in directions ``i`` and ``j``.

    By default the two composites are compared on the unit ``1``; ``full``
    compares them on every basis element and raises if they are neither
    equal, opposite, nor both zero.
    """
    vertex, i, j = face
    if i == j or vertex >> i & 1 or vertex >> j & 1 or not (0 <= i < cx.n and 0 <= j < cx.n):
        raise ValueError(f"not a face: {face}")
    if i > j:
        i, j = j, i
    key = (vertex, i, j)
    if not full and key in cx._faces:
        return cx._faces[key]
    path_i = (cx.edge_map(vertex, i), cx.edge_map(vertex | 1 << i, j))
    path_j = (cx.edge_map(vertex, j), cx.edge_map(vertex | 1 << j, i))
    if full:
        a = compose(path_i[1], path_i[0]).images
        b = compose(path_j[1], path_j[0]).images
        if not a and not b:
            t = _ladybug_type(cx, vertex, i, j)
        elif a == b:
            t = FaceType.COMMUTING
        elif a == {m: _neg(e) for m, e in b.items()}:
            t = FaceType.ANTICOMMUTING
        else:
            raise RuntimeError(f"face {face} neither commutes nor anticommutes")
    else:
        a = path_i[1].apply_element(path_i[0].apply(0))
        b = path_j[1].apply_element(path_j[0].apply(0))
        if not a and not b:
            t = _ladybug_type(cx, vertex, i, j)
        elif a == b:
            t = FaceType.COMMUTING
        elif a == _neg(b):
            t = FaceType.ANTICOMMUTING
        else:
            raise RuntimeError(f"face {face} neither commutes nor anticommutes on 1")
    cx._faces[key] = t
    return t


def edge_assignment(cx: OddComplex) -> dict[tuple[int, int], int]:
    """Edge signs as bits (1 means -1) making every face anticommute.

    Edges ``(I, i)`` where ``I`` has no set bit below ``i`` form a spanning
    tree and are fixed to 0; the rest follow from one face each, after which
    every face is verified.
    """
    n = cx.n
    eps: dict[tuple[int, int], int] = {}
    for v in range(1 << n):
        for i in range(n):
            if v >> i & 1:
                continue
            low = v & ((1 << i) - 1)
            if not low:
                eps[(v, i)] = 0
                continue
            j = (low & -low).bit_length() - 1
            base = v ^ (1 << j)
            need = FACE_PARITY[classify_face(cx, (base, j, i))]
            # (base, j) and (base + e_i, j) are tree edges, hence 0
            eps[(v, i)] = need ^ eps[(base, i)]
    bad = check_edge_assignment(cx, eps)
    if bad:
        raise EdgeAssignmentError(f"{len(bad)} faces violate the sign constraints, first {bad[0]}")
    return eps


def check_edge_assignment(cx: OddComplex, eps) -> list[tuple[int, int, int]]:
    """Faces whose eps-product has the wrong parity."""
    bad = []
    for v, i, j in cx.faces():
        got = eps[(v, i)] ^ eps[(v | 1 << i, j)] ^ eps[(v, j)] ^ eps[(v | 1 << j, i)]
        if got != FACE_PARITY[classify_face(cx, (v, i, j))]:
            bad.append((v, i, j))
    return bad


def gauge_transform(eps, gauge) -> dict[tuple[int, int], int]:
    """Another valid assignment: flip every edge whose endpoints have different gauge bits."""
    return {(v, i): s ^ gauge(v) ^ gauge(v | 1 << i) for (v, i), s in eps.items()}


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def chain_bases(cx: OddComplex) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Basis ``(vertex, mask)`` of each bigraded chain group, in hypercube then lexicographic order."""
    bases: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for v in hypercube_order(cx.n):
        for mask in exterior_basis(cx.groups[v].rank):
            key = (cx.h(v), cx.q(v, bin(mask).count("1")))
            bases.setdefault(key, []).append((v, mask))
    return bases


def assemble_differentials(cx: OddComplex, eps) -> tuple[dict, dict]:
    """``(bases, matrices)``: ``matrices[(h, q)]`` maps ``C^{h,q} -> C^{h+1,q}``."""
    bases = chain_bases(cx)
    index = {key: {b: t for t, b in enumerate(lst)} for key, lst in bases.items()}
    mats: dict[tuple[int, int], IntMatrix] = {}
    for (h, q), lst in bases.items():
        tgt = index.get((h + 1, q), {})
        m = IntMatrix(len(tgt), len(lst))
        for col, (v, mask) in enumerate(lst):
            for i in range(cx.n):
                if v >> i & 1:
                    continue
                sign = -1 if eps[(v, i)] else 1
                w = v | 1 << i
                for tmask, x in cx.edge_map(v, i).apply(mask).items():
                    row = tgt[(w, tmask)]
                    val = m.data.setdefault(row, {}).get(col, 0) + sign * x
                    if val:
                        m.data[row][col] = val
                    else:
                        del m.data[row][col]
        m.data = {r: c for r, c in m.data.items() if c}
        mats[(h, q)] = m
    return bases, mats


def check_d_squared(bases, mats) -> bool:
    for (h, q), m in mats.items():
        nxt = mats.get((h + 1, q))
        if nxt is not None and nxt.ncols == m.nrows and not (nxt @ m).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical identification of two constructions
# ---------------------------------------------------------------------------


def _arc_map(src: OddComplex, dst: OddComplex, vertex: int) -> ExteriorMap:
    """Exterior map sending the source generators to their values in ``dst``."""
    gs, gd = src.groups[vertex], dst.groups[vertex]
    if gs.arcs is None:
        raise CanonicalIsoError("source generators must be arcs")
    cols = [gd.values[j] for j in gs.arcs]
    return induced_exterior_map(gs.group, gd.group, IntMatrix.from_columns(gd.group.k, cols))


def check_canonical_iso(src: OddComplex, dst: OddComplex, eps_src=None, eps_dst=None) -> bool:
    """Check that sending arc generators to their values in ``dst`` is a chain isomorphism.

    Verifies at every vertex that the map is an isomorphism of exterior
    algebras, and on every edge that it intertwines the edge maps.  With
    signs given, also checks they agree.  Raises :class:`CanonicalIsoError`
    on the first mismatch.
    """
    if src.n != dst.n:
        raise CanonicalIsoError("different numbers of crossings")
    maps = []
    for v in range(1 << src.n):
        phi = _arc_map(src, dst, v)
        if phi.src_rank != phi.dst_rank:
            raise CanonicalIsoError(f"rank mismatch at {vertex_bits(v, src.n)}")
        if phi.src_rank:
            if abs(determinant(phi.matrix(1).to_dense())) != 1:
                raise CanonicalIsoError(f"vertex map not invertible at {vertex_bits(v, src.n)}")
        maps.append(phi)
    for v, i in src.edges():
        w = v | 1 << i
        lhs = compose(maps[w], src.edge_map(v, i)).images
        rhs = compose(dst.edge_map(v, i), maps[v]).images
        if lhs != rhs:
            raise CanonicalIsoError(f"edge {vertex_bits(v, src.n)} -> {vertex_bits(w, src.n)} does not commute")
    if eps_src is not None and eps_dst is not None and eps_src != eps_dst:
        raise CanonicalIsoError("edge signs differ")
    return True
