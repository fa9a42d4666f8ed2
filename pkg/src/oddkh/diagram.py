"""Planar diagrams: PD parsing, orientation, faces, resolutions.

PD convention
-------------
Each crossing is a 4-tuple ``(a, b, c, d)`` of edge labels read
counterclockwise around the crossing, starting at the incoming
under-strand.  The under-strand runs ``a -> c``; the over-strand runs
``d -> b`` at a positive crossing and ``b -> d`` at a negative one.  Slots
are numbered 0..3 in that order and corner ``k`` is the wedge between slot
``k`` and slot ``k+1`` (mod 4).

Resolutions
-----------
The 0-smoothing joins slots a-b and c-d; the 1-smoothing joins a-d and b-c.
At a 0-smoothing the strands turn through corners 0 and 2, at a 1-smoothing
through corners 3 and 1.  The arc at a crossing joins its two turns.  With
the default arrow (``arrow = 0``) it runs from corner 0 to corner 2 in the
0-smoothing and from corner 3 to corner 1 in the 1-smoothing, i.e. it is the
0-arrow turned a quarter turn clockwise.  ``arrow = 1`` reverses both.

Hypercube vertices are ints: bit ``i`` is the smoothing ``m_i`` at crossing
``i``.  As bit strings, character ``i`` is ``m_i``.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx

__all__ = [
    "DiagramError",
    "LinkDiagram",
    "Resolution",
    "parse_pd",
    "build_diagram",
    "resolve",
    "black_graph",
    "one_circle_vertex",
    "weight",
    "vertex_bits",
    "parse_vertex",
    "hypercube_order",
]

# slot -> partner slot within the crossing, per smoothing
SMOOTHING = ({0: 1, 1: 0, 2: 3, 3: 2}, {0: 3, 3: 0, 1: 2, 2: 1})
# corners the strands turn through, (tail corner, head corner) for arrow 0
ARC_CORNERS = ((0, 2), (3, 1))
# corners merged through the crossing square
OPEN_CORNERS = ((1, 3), (0, 2))


class DiagramError(ValueError):
    """Malformed, inconsistent, or unsupported diagram input."""


def weight(v: int) -> int:
    return bin(v).count("1")


def vertex_bits(v: int, n: int) -> str:
    return "".join("1" if v >> i & 1 else "0" for i in range(n))


def parse_vertex(bits: str, n: int | None = None) -> int:
    bits = bits.strip()
    if not bits or set(bits) - {"0", "1"}:
        raise DiagramError(f"bad vertex bit string {bits!r}")
    if n is not None and len(bits) != n:
        raise DiagramError(f"vertex {bits!r} has {len(bits)} coordinates, diagram has {n} crossings")
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def hypercube_order(n: int) -> list[int]:
    """Vertices by weight, then numeric value."""
    return sorted(range(1 << n), key=lambda v: (weight(v), v))


def _corner(s: int, t: int) -> int:
    # corner between two cyclically adjacent slots
    return s if (s + 1) % 4 == t else t


@dataclass(frozen=True)
class Faces:
    face_of: dict  # (crossing, corner) -> face id
    cycles: tuple  # face id -> tuple of (crossing, corner)


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    arrows: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @cached_property
    def ends(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        seen: dict[int, list[tuple[int, int]]] = {}
        for x, tup in enumerate(self.crossings):
            for s, lab in enumerate(tup):
                seen.setdefault(lab, []).append((x, s))
        return {lab: (p[0], p[1]) for lab, p in seen.items()}

    def other_end(self, x: int, s: int) -> tuple[int, int]:
        e0, e1 = self.ends[self.crossings[x][s]]
        return e1 if e0 == (x, s) else e0

    @cached_property
    def faces(self) -> Faces:
        face_of: dict[tuple[int, int], int] = {}
        cycles = []
        for x in range(self.n):
            for k in range(4):
                if (x, k) in face_of:
                    continue
                fid = len(cycles)
                cyc = []
                cur = (x, k)
                while cur not in face_of:
                    face_of[cur] = fid
                    cyc.append(cur)
                    y, t = self.other_end(cur[0], cur[1])
                    cur = (y, (t - 1) % 4)
                cycles.append(tuple(cyc))
        return Faces(face_of, tuple(cycles))

    @cached_property
    def connected_pieces(self) -> int:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for (x, _), (y, _) in self.ends.values():
            g.add_edge(x, y)
        return nx.number_connected_components(g)

    @property
    def is_connected(self) -> bool:
        return self.connected_pieces == 1

    @cached_property
    def face_colors(self) -> dict[int, int]:
        """Checkerboard colouring (0 white, 1 black); face 0 is the white exterior.

        For split diagrams each piece is coloured from its first-traced face.
        """
        faces = self.faces
        adj: dict[int, set[int]] = {f: set() for f in range(len(faces.cycles))}
        for x in range(self.n):
            for k in range(4):
                f, g = faces.face_of[(x, k)], faces.face_of[(x, (k - 1) % 4)]
                adj[f].add(g)
                adj[g].add(f)
        color: dict[int, int] = {}
        for start in range(len(faces.cycles)):
            if start in color:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                f = queue.popleft()
                for g in adj[f]:
                    if g not in color:
                        color[g] = 1 - color[f]
                        queue.append(g)
                    elif color[g] == color[f]:
                        raise DiagramError("faces admit no checkerboard colouring")
        return color

    def with_arrows(self, arrows) -> "LinkDiagram":
        arrows = tuple(int(a) for a in arrows)
        if len(arrows) != self.n or set(arrows) - {0, 1}:
            raise DiagramError("need one 0/1 arrow per crossing")
        return replace(self, arrows=arrows)

    def flip_arrows(self, subset) -> "LinkDiagram":
        return self.with_arrows(a ^ (i in subset) for i, a in enumerate(self.arrows))

    def reversed(self) -> "LinkDiagram":
        """Same diagram with every component's orientation reversed."""
        return build_diagram([(c, d, a, b) for a, b, c, d in self.crossings], self.arrows)

    def mirror(self) -> "LinkDiagram":
        """Switch every crossing (mirror image, same projection)."""
        out = []
        for (a, b, c, d), s in zip(self.crossings, self.signs):
            out.append((d, a, b, c) if s > 0 else (b, c, d, a))
        return build_diagram(out)

    def to_pd(self) -> str:
        return " ".join("X(%d,%d,%d,%d)" % t for t in self.crossings)


_X_TERM = re.compile(r"X\s*[\[(]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\])]")


def parse_pd(text: str) -> LinkDiagram:
    """Parse PD text: ``X(1,4,2,5) X(3,6,4,1) ...``, ``PD[X[..], ..]`` or ``[[1,5,2,4], ..]``."""
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if not body:
        raise DiagramError("empty diagram")
    tuples: list[tuple[int, int, int, int]]
    if "X" in body:
        tuples = [tuple(int(g) for g in m.groups()) for m in _X_TERM.finditer(body)]
        leftover = _X_TERM.sub("", body)
        leftover = re.sub(r"^\s*PD\s*[\[(]", "", leftover)
        if re.sub(r"[\s,\[\]()]", "", leftover):
            raise DiagramError(f"unparsed PD text: {leftover.strip()[:40]!r}")
    else:
        try:
            raw = json.loads(body)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed PD text: {exc}") from None
        if not isinstance(raw, list) or not all(
            isinstance(t, list) and len(t) == 4 and all(isinstance(v, int) for v in t) for t in raw
        ):
            raise DiagramError("expected a list of 4-integer lists")
        tuples = [tuple(t) for t in raw]
    if not tuples:
        raise DiagramError("empty diagram")
    return build_diagram(tuples)


def _orient(crossings, known: dict[tuple[int, int], int], ends) -> dict[tuple[int, int], int]:
    """Propagate directions (+1 into the crossing, -1 out of it) along strands."""
    direction = dict(known)

    def other(x, s):
        e0, e1 = ends[crossings[x][s]]
        return e1 if e0 == (x, s) else e0

    def propagate(queue):
        while queue:
            (x, s) = queue.popleft()
            dval = direction[(x, s)]
            for nb, val in ((other(x, s), -dval), ((x, (s + 2) % 4), -dval)):
                cur = direction.get(nb)
                if cur is None:
                    direction[nb] = val
                    queue.append(nb)
                elif cur != val:
                    raise DiagramError("inconsistent strand orientation")

    propagate(deque(direction))
    for x in range(len(crossings)):
        for s in range(4):
            if (x, s) not in direction:
                # strand that never passes under: orient it away from its first slot
                direction[(x, s)] = -1
                propagate(deque([(x, s)]))
    return direction


def build_diagram(tuples, arrows=None) -> LinkDiagram:
    """Validate PD tuples and derive orientation, signs and components."""
    crossings = tuple(tuple(int(v) for v in t) for t in tuples)
    n = len(crossings)
    if n == 0:
        raise DiagramError("empty diagram")
    if any(len(t) != 4 for t in crossings):
        raise DiagramError("every crossing needs four edge labels")
    seen: dict[int, list[tuple[int, int]]] = {}
    for x, t in enumerate(crossings):
        for s, lab in enumerate(t):
            seen.setdefault(lab, []).append((x, s))
    bad = sorted(lab for lab, p in seen.items() if len(p) != 2)
    if bad:
        raise DiagramError(f"edge labels not occurring exactly twice: {bad[:8]}")
    ends = {lab: (p[0], p[1]) for lab, p in seen.items()}

    known = {}
    for x in range(n):
        known[(x, 0)] = 1
        known[(x, 2)] = -1
    direction = _orient(crossings, known, ends)

    signs = tuple(1 if direction[(x, 3)] == 1 else -1 for x in range(n))

    components = []
    visited: set[int] = set()
    for lab in sorted(ends):
        if lab in visited:
            continue
        start = next(p for p in ends[lab] if direction[p] == -1)
        comp = []
        x, s = start
        while True:
            cur = crossings[x][s]
            if cur in visited:
                break
            visited.add(cur)
            comp.append(cur)
            e0, e1 = ends[cur]
            y, t = e1 if e0 == (x, s) else e0
            x, s = y, (t + 2) % 4
        components.append(tuple(comp))

    if arrows is None:
        arrows = (0,) * n
    d = LinkDiagram(crossings, signs, tuple(components), tuple(arrows))
    euler = n - 2 * n + len(d.faces.cycles)
    if euler != 2 * d.connected_pieces:
        raise DiagramError(f"not planar: V - E + F = {euler}, expected {2 * d.connected_pieces}")
    return d


# ---------------------------------------------------------------------------
# Resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    """Circles and oriented arcs of the resolution at one hypercube vertex.

    ``circles[c]`` lists steps ``(crossing, slot_in, slot_out)``: the walk
    arrives along the edge at ``slot_in``, turns through the corner, and
    leaves along ``slot_out``.  ``arcs[i] = ((c_tail, pos), (c_head, pos))``
    locates the endpoints of the arc at crossing ``i`` by circle and step.
    """

    diagram: LinkDiagram = field(repr=False)
    vertex: int
    circles: tuple[tuple[tuple[int, int, int], ...], ...]
    arcs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    @property
    def circle_count(self) -> int:
        return len(self.circles)

    @cached_property
    def circle_of_label(self) -> dict[int, int]:
        out = {}
        for ci, steps in enumerate(self.circles):
            for x, s_in, _ in steps:
                out[self.diagram.crossings[x][s_in]] = ci
        return out

    def arc_circles(self, i: int) -> tuple[int, int]:
        (ct, _), (ch, _) = self.arcs[i]
        return ct, ch

    @cached_property
    def regions(self) -> dict[int, int]:
        """Face id -> complementary region of the circles."""
        d = self.diagram
        parent = list(range(len(d.faces.cycles)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in range(d.n):
            k1, k2 = OPEN_CORNERS[self.vertex >> x & 1]
            a, b = find(d.faces.face_of[(x, k1)]), find(d.faces.face_of[(x, k2)])
            if a != b:
                parent[max(a, b)] = min(a, b)
        return {f: find(f) for f in range(len(parent))}

    def arc_region(self, i: int) -> int:
        k = OPEN_CORNERS[self.vertex >> i & 1][0]
        return self.regions[self.diagram.faces.face_of[(i, k)]]

    def left_region(self, circle: int, pos: int = 0) -> int:
        """Region to the left of the walk along the edge entering step ``pos``."""
        x, s_in, _ = self.circles[circle][pos]
        return self.regions[self.diagram.faces.face_of[(x, (s_in - 1) % 4)]]

    def to_json(self) -> dict:
        d = self.diagram
        return {
            "vertex": vertex_bits(self.vertex, d.n),
            "circle_count": self.circle_count,
            "circles": [[d.crossings[x][s] for x, s, _ in steps] for steps in self.circles],
            "arcs": [
                {"crossing": i, "tail": list(t), "head": list(h)} for i, (t, h) in enumerate(self.arcs)
            ],
        }


def resolve(d: LinkDiagram, v: int) -> Resolution:
    if not 0 <= v < (1 << d.n):
        raise DiagramError(f"vertex {v} out of range for {d.n} crossings")
    visited: set[tuple[int, int]] = set()
    circles = []
    turn_at: dict[tuple[int, int], tuple[int, int]] = {}
    for x0 in range(d.n):
        for s0 in range(4):
            if (x0, s0) in visited:
                continue
            steps = []
            x, s = x0, s0
            while (x, s) not in visited:
                s_out = SMOOTHING[v >> x & 1][s]
                visited.add((x, s))
                visited.add((x, s_out))
                turn_at[(x, _corner(s, s_out))] = (len(circles), len(steps))
                steps.append((x, s, s_out))
                x, s = d.other_end(x, s_out)
            circles.append(tuple(steps))
    arcs = []
    for i in range(d.n):
        tail, head = ARC_CORNERS[v >> i & 1]
        if d.arrows[i]:
            tail, head = head, tail
        arcs.append((turn_at[(i, tail)], turn_at[(i, head)]))
    return Resolution(d, v, tuple(circles), tuple(arcs))


# ---------------------------------------------------------------------------
# Black graph and one-circle resolutions
# ---------------------------------------------------------------------------


def _black_corners(d: LinkDiagram, x: int) -> tuple[int, int]:
    colors, face_of = d.face_colors, d.faces.face_of
    return (0, 2) if colors[face_of[(x, 0)]] == 1 else (1, 3)


def black_graph(d: LinkDiagram) -> nx.MultiGraph:
    """Black faces as nodes, one edge per crossing (``key`` = crossing index)."""
    g = nx.MultiGraph()
    colors, face_of = d.face_colors, d.faces.face_of
    g.add_nodes_from(f for f, c in sorted(colors.items()) if c == 1)
    for x in range(d.n):
        k1, k2 = _black_corners(d, x)
        g.add_edge(face_of[(x, k1)], face_of[(x, k2)], key=x)
    return g


def one_circle_vertex(d: LinkDiagram) -> int:
    """Vertex whose resolution is a single circle, from a spanning tree of the black graph.

    The tree is built greedily in crossing order; a tree crossing is smoothed
    so its two black corners merge, every other crossing so its white corners
    merge.
    """
    if not d.is_connected:
        raise DiagramError("diagram is not connected")
    g = black_graph(d)
    parent = {f: f for f in g.nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    v = 0
    for u, w, x in sorted(g.edges(keys=True), key=lambda e: e[2]):
        a, b = find(u), find(w)
        in_tree = a != b
        if in_tree:
            parent[a] = b
        black = _black_corners(d, x)
        merged = black if in_tree else tuple(sorted({0, 1, 2, 3} - set(black)))
        m = 0 if merged == OPEN_CORNERS[0] else 1
        v |= m << x
    if len({find(f) for f in g.nodes}) != 1:
        raise DiagramError("black graph is not connected")
    r = resolve(d, v)
    if r.circle_count != 1:
        raise DiagramError(f"spanning-tree resolution has {r.circle_count} circles")
    return v
