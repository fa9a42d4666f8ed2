"""Conway mutation of planar diagrams.

A four-ended tangle is a set of crossings joined to the rest of the diagram
by exactly four edges.  Mutation cuts those edges and reglues the tangle
after a half turn about one of three axes: ``"z"`` (in the plane, boundary
positions ``k -> k + 2``), and ``"x"``/``"y"`` (flips, which also turn every
inner crossing over).  The result is re-oriented and relabelled so that each
crossing again starts at its incoming under-strand.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .diagram import DiagramError, LinkDiagram, build_diagram

__all__ = [
    "MutationError",
    "Tangle",
    "four_ended_tangles",
    "mutate",
    "pd_isomorphism",
    "find_mutation",
]

AXES = ("x", "y", "z")


class MutationError(DiagramError):
    """Tangle is not four-ended or the mutant is not a valid diagram."""


@dataclass(frozen=True)
class Tangle:
    """Crossings of a tangle and its boundary ports in cyclic order.

    ``ports[k] = ((inner_crossing, slot), (outer_crossing, slot))``.
    """

    crossings: frozenset
    ports: tuple


def _port_map(d: LinkDiagram) -> dict[tuple[int, int], tuple[int, int]]:
    return {(x, s): d.other_end(x, s) for x in range(d.n) for s in range(4)}


def tangle_ports(d: LinkDiagram, inside) -> Tangle:
    """Boundary ports of a crossing set, ordered around the tangle."""
    inside = frozenset(inside)
    ends = _port_map(d)
    ports = [((x, s), ends[(x, s)]) for x in sorted(inside) for s in range(4) if ends[(x, s)][0] not in inside]
    if len(ports) != 4:
        raise MutationError(f"tangle has {len(ports)} boundary edges, expected 4")
    # consecutive boundary edges along a face are neighbours on the tangle boundary
    index = {p[0]: k for k, p in enumerate(ports)}
    index.update({p[1]: k for k, p in enumerate(ports)})
    nbrs: dict[int, set[int]] = {k: set() for k in range(4)}
    for cycle in d.faces.cycles:
        seq = []
        for x, k in cycle:
            y, _ = ends[(x, k)]
            if (x in inside) != (y in inside):
                seq.append(index[(x, k)])
        for a, b in zip(seq, seq[1:] + seq[:1]):
            if a != b:
                nbrs[a].add(b)
                nbrs[b].add(a)
    if any(len(v) != 2 for v in nbrs.values()):
        raise MutationError("tangle boundary is not a simple four-punctured circle")
    order = [0]
    while len(order) < 4:
        nxt = sorted(nbrs[order[-1]] - set(order))
        if not nxt:
            raise MutationError("tangle boundary is not a single cycle")
        order.append(nxt[0])
    return Tangle(inside, tuple(ports[k] for k in order))


def four_ended_tangles(d: LinkDiagram, min_size: int = 2):
    """Yield every tangle with at least ``min_size`` crossings on each side."""
    ends = _port_map(d)
    for size in range(min_size, d.n - min_size + 1):
        for inside in combinations(range(d.n), size):
            s = set(inside)
            cut = sum(1 for x in inside for t in range(4) if ends[(x, t)][0] not in s)
            if cut != 4:
                continue
            try:
                yield tangle_ports(d, inside)
            except MutationError:
                continue


_FLIP = (1, 0, 3, 2)  # new slot k takes old slot _FLIP[k] when the crossing is turned over


def mutate(d: LinkDiagram, tangle: Tangle, axis: str) -> tuple[LinkDiagram, tuple[int, ...]]:
    """Mutant diagram and, per crossing of ``d``, its index in the mutant.

    Crossing indices are preserved, so the returned map is the identity; it
    is returned for symmetry with :func:`pd_isomorphism`.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    inside = tangle.crossings
    ends = _port_map(d)
    # slot permutation per crossing: new slot k is old slot perm[k]
    perm = {x: (_FLIP if axis != "z" and x in inside else (0, 1, 2, 3)) for x in range(d.n)}
    inv = {x: {old: new for new, old in enumerate(p)} for x, p in perm.items()}
    shift = {"z": 2, "x": 1, "y": 3}[axis]
    links: dict[tuple[int, int], tuple[int, int]] = {}
    for (x, s), (y, t) in ends.items():
        links[(x, inv[x][s])] = (y, inv[y][t])
    for k, (inner, outer) in enumerate(tangle.ports):
        if axis == "z":
            target = tangle.ports[(k + shift) % 4][0]
        else:
            # a flip is a reflection of the boundary circle: k -> shift - k
            target = tangle.ports[(shift - k) % 4][0]
        new_inner = (target[0], inv[target[0]][target[1]])
        new_outer = (outer[0], inv[outer[0]][outer[1]])
        links[new_outer] = new_inner
        links[new_inner] = new_outer
    return _orient_and_build(d.n, links), tuple(range(d.n))


def _orient_and_build(n: int, links) -> LinkDiagram:
    """Build a diagram from slot adjacency, orienting each strand by walking it."""
    edge_of: dict[tuple[int, int], int] = {}
    direction: dict[tuple[int, int], int] = {}  # +1 incoming, -1 outgoing
    label = 0
    for x0 in range(n):
        for s0 in (0, 1):
            if (x0, s0) in direction:
                continue
            x, s = x0, s0
            while (x, s) not in direction:
                direction[(x, s)] = 1
                out = (x, (s + 2) % 4)
                direction[out] = -1
                label += 1
                y, t = links[out]
                edge_of[out] = label
                edge_of[(y, t)] = label
                x, s = y, t
    tuples = []
    for x in range(n):
        slots = [edge_of[(x, s)] for s in range(4)]
        start = 0 if direction[(x, 0)] == 1 else 2
        tuples.append(tuple(slots[(start + k) % 4] for k in range(4)))
    try:
        return build_diagram(tuples)
    except DiagramError as exc:
        raise MutationError(f"mutant is not a valid diagram: {exc}") from None


def _codes(d: LinkDiagram):
    """Relabellings of a one-component diagram along its orientation, one per starting edge."""
    succ = {}
    for a, b, c, dd in d.crossings:
        succ[a] = c
    for x, (a, b, c, dd) in enumerate(d.crossings):
        if d.signs[x] > 0:
            succ[dd] = b
        else:
            succ[b] = dd
    labels = sorted(succ)
    for first in labels:
        new = {}
        e = first
        while e not in new:
            new[e] = len(new) + 1
            e = succ[e]
        relab = [tuple(new[v] for v in x) for x in d.crossings]
        order = sorted(range(d.n), key=lambda i: relab[i])
        yield tuple(relab[i] for i in order), tuple(order)


def pd_isomorphism(d1: LinkDiagram, d2: LinkDiagram, allow_reverse: bool = True) -> tuple[int, ...] | None:
    """Crossing map ``d1 -> d2`` if the knot diagrams agree up to relabelling edges.

    Only one-component diagrams are supported.  With ``allow_reverse`` the
    orientation of ``d2`` may also be reversed.
    """
    if d1.n != d2.n or d1.component_count != 1 or d2.component_count != 1:
        return None
    if d1.n == 0:
        return ()
    key, order1 = next(_codes(d1))
    targets = [(d2, False)] + ([(d2.reversed(), True)] if allow_reverse else [])
    for cand, _ in targets:
        for code, order2 in _codes(cand):
            if code == key:
                out = [0] * d1.n
                for a, b in zip(order1, order2):
                    out[a] = b
                return tuple(out)
    return None


def find_mutation(d1: LinkDiagram, d2: LinkDiagram):
    """Search for a single mutation taking ``d1`` to a relabelling of ``d2``.

    Returns ``(tangle, axis, pairing)`` with ``pairing[i]`` the crossing of
    ``d2`` matched to crossing ``i`` of ``d1``, or ``None``.
    """
    for tangle in four_ended_tangles(d1):
        for axis in AXES:
            try:
                mutant, _ = mutate(d1, tangle, axis)
            except MutationError:
                continue
            pairing = pd_isomorphism(mutant, d2)
            if pairing is not None:
                return tangle, axis, pairing
    return None
