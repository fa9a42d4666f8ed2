"""Chord diagrams of one-circle resolutions, linking data, and mutation.

A one-circle resolution is a circle ``S`` with ``n`` oriented chords, each
lying on one side of ``S``.  Two chords are linked when their endpoints
interleave along ``S``; interleaved chords always lie on opposite sides.

Sign rule: orient ``S`` with chord ``i``'s side on the left and read the
circle starting from the tail of ``i``.  The pattern
``(i-tail, j-tail, i-head, j-head)`` scores ``LINK_SIGN`` and
``(i-tail, j-head, i-head, j-tail)`` scores ``-LINK_SIGN``.  Swapping the
roles of ``i`` and ``j`` reverses both the side and the reading direction,
so the result is symmetric.  ``LINK_SIGN`` is fixed by requiring that the
relations built from the matrix span the kernel of the boundary map at
every vertex (see ``tests/test_calibration.py``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import islice

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .diagram import DiagramError, LinkDiagram, Resolution, one_circle_vertex, parse_vertex, resolve, vertex_bits

__all__ = [
    "LINK_SIGN",
    "ChordDiagram",
    "LinkingData",
    "SeedError",
    "MutantWitness",
    "chord_diagram",
    "linking_matrix",
    "linking_data",
    "reverse_arcs",
    "relabel",
    "intersection_graph",
    "certify_mutant_seed",
    "mutation_equivalent",
    "mutation_sequence",
]

LINK_SIGN = 1


class SeedError(ValueError):
    """Invalid linking data."""


@dataclass(frozen=True)
class ChordDiagram:
    """``order`` lists ``(arc, end)`` around ``S`` (end 0 = tail, 1 = head);
    ``sides[i]`` is 0 when chord ``i`` lies in the region left of that walk."""

    order: tuple[tuple[int, int], ...]
    sides: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sides)
        if len(self.order) != 2 * n or sorted(self.order) != [(i, e) for i in range(n) for e in (0, 1)]:
            raise ValueError("each chord endpoint must occupy exactly one slot")

    @property
    def n(self) -> int:
        return len(self.sides)

    def slots(self) -> list[tuple[int, int]]:
        """Per chord, ``(tail_slot, head_slot)``."""
        pos = {oe: k for k, oe in enumerate(self.order)}
        return [(pos[(i, 0)], pos[(i, 1)]) for i in range(self.n)]

    def interleaved(self, i: int, j: int) -> bool:
        s = self.slots()
        (a, b), (c, d) = sorted(s[i]), s[j]
        return (a < c < b) != (a < d < b)


def chord_diagram(r: Resolution) -> ChordDiagram:
    if r.circle_count != 1:
        raise DiagramError(f"chord diagram needs a one-circle resolution, got {r.circle_count} circles")
    steps = r.circles[0]
    left = r.left_region(0, 0)
    if any(r.left_region(0, k) != left for k in range(len(steps))):
        raise DiagramError("circle does not bound a consistent region")
    at = {}
    for i, ((_, pt), (_, ph)) in enumerate(r.arcs):
        at[pt] = (i, 0)
        at[ph] = (i, 1)
    order = tuple(at[k] for k in range(len(steps)))
    sides = tuple(0 if r.arc_region(i) == left else 1 for i in range(r.diagram.n))
    return ChordDiagram(order, sides)


def linking_matrix(cd: ChordDiagram, sign: int = LINK_SIGN) -> tuple[tuple[int, ...], ...]:
    n = cd.n
    slots = cd.slots()
    size = 2 * n
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        ti, hi = slots[i]
        step = 1 if cd.sides[i] == 0 else -1
        span = (hi - ti) * step % size  # steps from i-tail to i-head in reading direction
        for j in range(n):
            if j == i:
                continue
            tj, hj = slots[j]
            dt = (tj - ti) * step % size
            dh = (hj - ti) * step % size
            if (dt < span) == (dh < span):
                continue
            a[i][j] = sign if dt < span else -sign
    return tuple(tuple(r) for r in a)


@dataclass(frozen=True)
class LinkingData:
    """Symmetric linking matrix, base vertex and crossing counts."""

    a: tuple[tuple[int, ...], ...]
    base_vertex: int
    n_plus: int
    n_minus: int

    def __post_init__(self):
        n = len(self.a)
        if any(len(r) != n for r in self.a):
            raise SeedError("linking matrix must be square")
        for i in range(n):
            if self.a[i][i]:
                raise SeedError(f"nonzero diagonal entry a[{i}][{i}]")
            for j in range(n):
                if self.a[i][j] not in (-1, 0, 1):
                    raise SeedError(f"entry a[{i}][{j}] = {self.a[i][j]} outside {{-1, 0, 1}}")
                if self.a[i][j] != self.a[j][i]:
                    raise SeedError(f"asymmetric linking matrix at ({i}, {j})")
        if not 0 <= self.base_vertex < (1 << n) and n:
            raise SeedError("base vertex out of range")
        if self.n_plus < 0 or self.n_minus < 0 or self.n_plus + self.n_minus != n:
            raise SeedError("n_plus + n_minus must equal the number of arcs")

    @property
    def n(self) -> int:
        return len(self.a)

    def base(self, i: int) -> int:
        return self.base_vertex >> i & 1

    def to_json(self) -> dict:
        return {
            "schema": "oddkh.seed/1",
            "n": self.n,
            "a": [list(r) for r in self.a],
            "base_vertex": vertex_bits(self.base_vertex, self.n),
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "LinkingData":
        try:
            n = int(obj["n"])
            a = tuple(tuple(int(v) for v in row) for row in obj["a"])
            if len(a) != n:
                raise SeedError(f"matrix has {len(a)} rows, n = {n}")
            base = parse_vertex(obj["base_vertex"], n) if n else 0
            return cls(a, base, int(obj["n_plus"]), int(obj["n_minus"]))
        except (KeyError, TypeError, DiagramError) as exc:
            raise SeedError(f"invalid seed: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "LinkingData":
        return cls.from_json(json.loads(text))


def linking_data(d: LinkDiagram, vertex: int | None = None) -> LinkingData:
    """Linking data of a one-circle resolution (the canonical one by default)."""
    if vertex is None:
        vertex = one_circle_vertex(d)
    r = resolve(d, vertex)
    a = linking_matrix(chord_diagram(r))
    return LinkingData(a, vertex, d.n_plus, d.n_minus)


def reverse_arcs(ld: LinkingData, subset) -> LinkingData:
    """Reverse the arcs in ``subset``: conjugate ``a`` by the diagonal sign matrix."""
    flip = [1] * ld.n
    for i in subset:
        flip[i] = -1
    a = tuple(tuple(flip[i] * flip[j] * ld.a[i][j] for j in range(ld.n)) for i in range(ld.n))
    return LinkingData(a, ld.base_vertex, ld.n_plus, ld.n_minus)


def relabel(ld: LinkingData, perm) -> LinkingData:
    """New data whose arc ``i`` is arc ``perm[i]`` of ``ld``."""
    n = ld.n
    a = tuple(tuple(ld.a[perm[i]][perm[j]] for j in range(n)) for i in range(n))
    base = sum(ld.base(perm[i]) << i for i in range(n))
    return LinkingData(a, base, ld.n_plus, ld.n_minus)


def intersection_graph(ld: LinkingData) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(abs(v) % 2 for v in row) for row in ld.a)


def _graph(adj, labels=None) -> nx.Graph:
    g = nx.Graph()
    for i in range(len(adj)):
        g.add_node(i, m=None if labels is None else labels[i])
    for i in range(len(adj)):
        for j in range(i + 1, len(adj)):
            if adj[i][j]:
                g.add_edge(i, j)
    return g


@dataclass(frozen=True)
class MutantWitness:
    """``relabel(reverse_arcs(ld2, flips), perm) == ld1``."""

    perm: tuple[int, ...]
    flips: frozenset

    def apply(self, ld2: LinkingData) -> LinkingData:
        return relabel(reverse_arcs(ld2, self.flips), self.perm)


def _solve_flips(ld1: LinkingData, ld2: LinkingData, perm) -> frozenset | None:
    # d[perm i] * d[perm j] * a2[perm i][perm j] == a1[i][j]; two-colour the constraint graph
    n = ld1.n
    flip: dict[int, int] = {}
    for start in range(n):
        if start in flip:
            continue
        flip[start] = 0
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                a1 = ld1.a[i][j]
                a2 = ld2.a[perm[i]][perm[j]]
                if abs(a1) != abs(a2):
                    return None
                if not a1:
                    continue
                want = flip[i] ^ (a1 != a2)
                if j not in flip:
                    flip[j] = want
                    stack.append(j)
                elif flip[j] != want:
                    return None
    return frozenset(perm[i] for i in range(n) if flip[i])


def certify_mutant_seed(
    ld1: LinkingData, ld2: LinkingData, pairing=None, max_candidates: int = 100_000
) -> MutantWitness | None:
    """Find arc relabelling and reversals taking ``ld2`` to ``ld1``.

    With ``pairing`` (``pairing[i]`` = arc of ``ld2`` matched with arc ``i``
    of ``ld1``) only that relabelling is tried; otherwise isomorphisms of
    the intersection graphs that match base-vertex coordinates are searched.
    """
    if ld1.n != ld2.n:
        raise SeedError(f"size mismatch: {ld1.n} vs {ld2.n}")
    if (ld1.n_plus, ld1.n_minus) != (ld2.n_plus, ld2.n_minus):
        return None
    if pairing is not None:
        candidates = [tuple(pairing)]
    else:
        g1 = _graph(intersection_graph(ld1), [ld1.base(i) for i in range(ld1.n)])
        g2 = _graph(intersection_graph(ld2), [ld2.base(i) for i in range(ld2.n)])
        gm = GraphMatcher(g1, g2, node_match=lambda x, y: x["m"] == y["m"])
        candidates = (tuple(m[i] for i in range(ld1.n)) for m in islice(gm.isomorphisms_iter(), max_candidates))
    for perm in candidates:
        if any(ld1.base(i) != ld2.base(perm[i]) for i in range(ld1.n)):
            continue
        flips = _solve_flips(ld1, ld2, perm)
        if flips is not None:
            w = MutantWitness(perm, flips)
            assert w.apply(ld2) == ld1
            return w
    return None


def _cd_adjacency(cd: ChordDiagram) -> list[list[int]]:
    return [[int(i != j and cd.interleaved(i, j)) for j in range(cd.n)] for i in range(cd.n)]


def mutation_equivalent(cd1: ChordDiagram, cd2: ChordDiagram) -> bool:
    """Whether the intersection graphs are isomorphic."""
    if cd1.n != cd2.n:
        return False
    return nx.is_isomorphic(_graph(_cd_adjacency(cd1)), _graph(_cd_adjacency(cd2)))


# ---------------------------------------------------------------------------
# Explicit mutation sequences (optional, bounded)
# ---------------------------------------------------------------------------


def _normal_word(word) -> tuple:
    # unsigned chord word up to relabelling, rotation and reflection
    m = len(word)
    best = None
    for seq in (list(word), list(word)[::-1]):
        for r in range(m):
            w = seq[r:] + seq[:r]
            names: dict[int, int] = {}
            key = tuple(names.setdefault(c, len(names)) for c in w)
            if best is None or key < best:
                best = key
    return best


def _mutations(word: tuple) -> list[tuple]:
    """All words obtained by one mutation of a share.

    A share is a pair of disjoint circle intervals ``A``, ``B`` containing
    both ends of every chord that touches them.  Writing the word as
    ``A X B Y``, the three involutions give ``rev(A) X rev(B) Y``,
    ``B X A Y`` and ``rev(B) X rev(A) Y``.
    """
    m = len(word)
    out = []
    for r in range(m):
        w = word[r:] + word[:r]
        for la in range(1, m - 1):
            for gap in range(1, m - la):
                for lb in range(1, m - la - gap + 1):
                    a, x, b, y = w[:la], w[la:la + gap], w[la + gap:la + gap + lb], w[la + gap + lb:]
                    inside = set(a) | set(b)
                    if sum(1 for c in w if c in inside) != la + lb:
                        continue
                    out.append(a[::-1] + x + b[::-1] + y)
                    out.append(b + x + a + y)
                    out.append(b[::-1] + x + a[::-1] + y)
    return out


def mutation_sequence(cd1: ChordDiagram, cd2: ChordDiagram, max_states: int = 20_000) -> list[tuple] | None:
    """Bounded breadth-first search for a chain of share mutations from ``cd1`` to ``cd2``.

    Works on unsigned chord words up to rotation and reflection.  Returns the
    normalised words along the path, or ``None`` if ``max_states`` words are
    explored without reaching ``cd2``.
    """
    start = _normal_word([i for i, _ in cd1.order])
    goal = _normal_word([i for i, _ in cd2.order])
    prev = {start: None}
    queue = [start]
    head = 0
    while head < len(queue) and len(prev) < max_states:
        w = queue[head]
        head += 1
        if w == goal:
            path = [w]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for nxt in _mutations(w):
            key = _normal_word(nxt)
            if key not in prev:
                prev[key] = w
                queue.append(key)
    return None
