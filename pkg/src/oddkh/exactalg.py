"""Exact integer linear algebra.

Smith normal form, sparse elementary divisors, finitely presented abelian
groups with a free quotient, and induced maps on exterior powers.

Exterior algebra conventions
----------------------------
A basis monomial ``e_{s1} ^ ... ^ e_{sp}`` (``s1 < ... < sp``) of the exterior
algebra on a free module with basis ``e_0 .. e_{f-1}`` is stored as the bit
mask ``sum(1 << s)``.  Bases of each exterior power are listed in
lexicographic order of the sorted index tuples (the order produced by
``itertools.combinations``), degree by degree.
"""

from __future__ import annotations

import heapq
from itertools import combinations
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "PresentedGroup",
    "ExteriorElement",
    "ExteriorMap",
    "smith_normal_form",
    "elementary_divisors",
    "rank_mod2",
    "determinant",
    "cokernel_invariants",
    "compose",
    "is_zero_in_group",
    "induced_exterior_map",
    "exterior_basis",
    "wedge_left",
    "wedge_right",
    "GroupMapError",
    "NonFreeQuotientError",
]


class GroupMapError(ValueError):
    """A generator map does not descend to the presented groups."""


class NonFreeQuotientError(ArithmeticError):
    """A presentation whose quotient has torsion."""


# ---------------------------------------------------------------------------
# Sparse integer matrices
# ---------------------------------------------------------------------------


class IntMatrix:
    """Sparse integer matrix (dict of rows) with arbitrary-precision entries."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: dict[int, dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.data: dict[int, dict[int, int]] = {}
        if data:
            for i, row in data.items():
                clean = {j: v for j, v in row.items() if v}
                if clean:
                    self.data[i] = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            r = {j: int(v) for j, v in enumerate(row) if v}
            if r:
                m.data[i] = r
        return m

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    m.data.setdefault(i, {})[j] = int(v)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.data.get(i, {}).get(j, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def column(self, j: int) -> list[int]:
        col = [0] * self.nrows
        for i, row in self.data.items():
            v = row.get(j)
            if v:
                col[i] = v
        return col

    def columns(self) -> list[list[int]]:
        cols = [[0] * self.nrows for _ in range(self.ncols)]
        for i, row in self.data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "IntMatrix":
        t = IntMatrix(self.ncols, self.nrows)
        for i, row in self.data.items():
            for j, v in row.items():
                t.data.setdefault(j, {})[i] = v
        return t

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, int]] = {}
        odata = other.data
        for i, row in self.data.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for j, w in orow.items():
                    acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        m = IntMatrix(self.nrows, other.ncols)
        m.data = out
        return m

    def __neg__(self) -> "IntMatrix":
        m = IntMatrix(self.nrows, self.ncols)
        m.data = {i: {j: -v for j, v in r.items()} for i, r in self.data.items()}
        return m

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = {i: dict(r) for i, r in self.data.items()}
        for i, r in other.data.items():
            row = out.setdefault(i, {})
            for j, v in r.items():
                s = row.get(j, 0) + v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
            if not row:
                del out[i]
        m = IntMatrix(self.nrows, self.ncols)
        m.data = out
        return m

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, tuple(sorted((i, tuple(sorted(r.items()))) for i, r in self.data.items()))))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def to_text(self) -> str:
        """Sparse text dump: header ``rows cols nnz`` then ``i j value`` lines."""
        lines = [f"{self.nrows} {self.ncols} {self.nnz}"]
        for i in sorted(self.data):
            for j in sorted(self.data[i]):
                lines.append(f"{i} {j} {self.data[i][j]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        nrows, ncols, nnz = map(int, lines[0].split())
        m = cls(nrows, ncols)
        for ln in lines[1 : 1 + nnz]:
            i, j, v = map(int, ln.split())
            m.data.setdefault(i, {})[j] = v
        return m


# ---------------------------------------------------------------------------
# Dense Smith normal form
# ---------------------------------------------------------------------------


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_dense(a: list[list[int]], nrows: int, ncols: int, track: bool = True):
    """Smith normal form of a dense matrix, in place on a copy.

    Returns ``(u, uinv, d, v, vinv)`` with ``u @ a @ v == d``; the transform
    lists are ``None`` when ``track`` is false.  Pivot rule: smallest absolute
    value in the active block, ties broken by (row, column).
    """
    d = [list(r) for r in a]
    m, n = nrows, ncols
    u = _eye(m) if track else None
    uinv = _eye(m) if track else None
    v = _eye(n) if track else None
    vinv = _eye(n) if track else None

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        if track:
            u[i], u[j] = u[j], u[i]
            for r in uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        if track:
            for r in v:
                r[i], r[j] = r[j], r[i]
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rs, rd = d[src], d[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if track:
            us, ud = u[src], u[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]
            for r in uinv:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in d:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            for r in v:
                if r[src]:
                    r[dst] += q * r[src]
            vs, vd = vinv[src], vinv[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    if d[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t into the pivot
                cand = [(abs(d[i][t]), 0, i) for i in range(t + 1, m) if d[i][t]]
                cand += [(abs(d[t][j]), 1, j) for j in range(t + 1, n) if d[t][j]]
                _, kind, k = min(cand)
                if kind == 0:
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            # row t and column t are clear; enforce divisibility of the rest
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            if track:
                u[t] = [-x for x in u[t]]
                for r in uinv:
                    r[t] = -r[t]
        t += 1
    return u, uinv, d, v, vinv


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...``.
    """
    u, _, d, v, _ = _snf_dense(m.to_dense(), m.nrows, m.ncols)
    return (
        IntMatrix.from_dense(u, m.nrows),
        IntMatrix.from_dense(d, m.ncols),
        IntMatrix.from_dense(v, m.ncols),
    )


def _dense_divisors(rows: list[list[int]], ncols: int) -> list[int]:
    _, _, d, _, _ = _snf_dense(rows, len(rows), ncols, track=False)
    return [d[i][i] for i in range(min(len(rows), ncols)) if d[i][i]]


def elementary_divisors(m: IntMatrix) -> list[int]:
    """Nonzero elementary divisors of a (possibly large, sparse) matrix.

    Unit pivots are eliminated first with a Markowitz-style choice (shortest
    row, then sparsest column), which keeps fill-in low on the +-1 matrices
    produced by cube complexes.  Whatever survives is handed to the dense
    Smith form.
    """
    rows: dict[int, dict[int, int]] = {i: dict(r) for i, r in m.data.items() if r}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)

    units = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        ln, i = heapq.heappop(heap)
        row = rows.get(i)
        if row is None or len(row) != ln:
            continue
        best = None
        for j, x in row.items():
            if x == 1 or x == -1:
                cnt = len(cols[j])
                if best is None or cnt < best[0]:
                    best = (cnt, j)
                    if cnt == 1:
                        break
        if best is None:
            continue
        pj = best[1]
        pv = row[pj]
        del rows[i]
        for j in row:
            cols[j].discard(i)
        for r2 in list(cols[pj]):
            other = rows[r2]
            f = other[pj] * pv  # pv = +-1, so other[pj] / pv == other[pj] * pv
            for j, x in row.items():
                y = other.get(j, 0) - f * x
                if y:
                    if j not in other:
                        cols[j].add(r2)
                    other[j] = y
                else:
                    if j in other:
                        del other[j]
                        cols[j].discard(r2)
            if other:
                heapq.heappush(heap, (len(other), r2))
            else:
                del rows[r2]
        del cols[pj]
        units += 1

    rest = [r for r in rows.values() if r]
    if not rest:
        return [1] * units
    used = sorted({j for r in rest for j in r})
    pos = {j: k for k, j in enumerate(used)}
    dense = []
    for r in rest:
        line = [0] * len(used)
        for j, x in r.items():
            line[pos[j]] = x
        dense.append(line)
    return [1] * units + _dense_divisors(dense, len(used))


def rank_mod2(m: IntMatrix) -> int:
    """Rank over the two-element field (rows packed into Python ints)."""
    basis: dict[int, int] = {}
    for row in m.data.values():
        bits = 0
        for j, x in row.items():
            if x & 1:
                bits |= 1 << j
        while bits:
            top = bits.bit_length() - 1
            piv = basis.get(top)
            if piv is None:
                basis[top] = bits
                break
            bits ^= piv
    return len(basis)


# ---------------------------------------------------------------------------
# Exterior algebra helpers
# ---------------------------------------------------------------------------

ExteriorElement = dict  # mask -> coefficient


def exterior_basis(f: int) -> list[int]:
    """All monomial masks of the exterior algebra on ``f`` generators."""
    out = []
    for p in range(f + 1):
        for combo in combinations(range(f), p):
            mask = 0
            for s in combo:
                mask |= 1 << s
            out.append(mask)
    return out


def wedge_left(vec: Sequence[int], elem: dict[int, int]) -> dict[int, int]:
    """``vec ^ elem`` for a degree-one vector and a homogeneous element."""
    out: dict[int, int] = {}
    for k, c in enumerate(vec):
        if not c:
            continue
        bit = 1 << k
        below = bit - 1
        for mask, x in elem.items():
            if mask & bit:
                continue
            sign = -1 if bin(mask & below).count("1") & 1 else 1
            key = mask | bit
            val = out.get(key, 0) + sign * c * x
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def wedge_right(elem: dict[int, int], vec: Sequence[int]) -> dict[int, int]:
    """``elem ^ vec`` for a homogeneous element and a degree-one vector."""
    out: dict[int, int] = {}
    for k, c in enumerate(vec):
        if not c:
            continue
        bit = 1 << k
        for mask, x in elem.items():
            if mask & bit:
                continue
            above = mask >> (k + 1)
            sign = -1 if bin(above).count("1") & 1 else 1
            key = mask | bit
            val = out.get(key, 0) + sign * c * x
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# Presented groups
# ---------------------------------------------------------------------------


class PresentedGroup:
    """Abelian group ``Z^k / (column span of relations)`` with a free quotient.

    The Smith form ``U R V = D`` supplies the free coordinates: with ``s``
    unit divisors, ``x -> (U x)[s:]`` identifies the quotient with ``Z^f``
    (``f = k - s``), and the last ``f`` columns of ``U^{-1}`` give a section.
    Any divisor other than 0 or 1 raises :class:`NonFreeQuotientError`.
    """

    def __init__(self, k: int, relations: IntMatrix | None = None):
        if relations is None:
            relations = IntMatrix(k, 0)
        if relations.nrows != k:
            raise ValueError("relation matrix must have one row per generator")
        self.k = k
        self.relations = relations
        u, uinv, d, _, _ = _snf_dense(relations.to_dense(), k, relations.ncols)
        divisors = [d[i][i] for i in range(min(k, relations.ncols)) if d[i][i]]
        if any(x != 1 for x in divisors):
            raise NonFreeQuotientError(f"quotient has torsion: divisors {divisors}")
        s = len(divisors)
        self.divisors = divisors
        self.rank = k - s
        self.projection: list[list[int]] = [list(u[i]) for i in range(s, k)]
        self.section: list[list[int]] = [[uinv[r][c] for r in range(k)] for c in range(s, k)]

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Free coordinates of the class of ``vec``."""
        return tuple(sum(p * x for p, x in zip(row, vec) if x) for row in self.projection)

    def generator_coords(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.projection)

    def is_zero(self, vec: Sequence[int]) -> bool:
        return not any(self.coords(vec))

    def lift(self, j: int) -> list[int]:
        """Representative in ``Z^k`` of the ``j``-th free basis element."""
        return self.section[j]

    def __repr__(self) -> str:
        return f"PresentedGroup(k={self.k}, rank={self.rank})"


def is_zero_in_group(g: PresentedGroup, i: int) -> bool:
    """Whether generator ``i`` lies in the integer span of the relations."""
    if not 0 <= i < g.k:
        raise IndexError(i)
    return not any(g.generator_coords(i))


# ---------------------------------------------------------------------------
# Induced maps on exterior algebras
# ---------------------------------------------------------------------------


class ExteriorMap:
    """Map ``Lambda* src -> Lambda* dst`` stored column-wise by source mask."""

    def __init__(self, src_rank: int, dst_rank: int, shift: int, images: dict[int, dict[int, int]]):
        self.src_rank = src_rank
        self.dst_rank = dst_rank
        self.shift = shift
        self.images = images

    def apply(self, mask: int) -> dict[int, int]:
        return self.images.get(mask, {})

    def apply_element(self, elem: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for mask, c in elem.items():
            for t, x in self.images.get(mask, {}).items():
                v = out.get(t, 0) + c * x
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return out

    def matrix(self, p: int) -> IntMatrix:
        """Matrix of ``Lambda^p src -> Lambda^{p+shift} dst`` in lexicographic bases."""
        src = [m for m in exterior_basis(self.src_rank) if bin(m).count("1") == p]
        dst = [m for m in exterior_basis(self.dst_rank) if bin(m).count("1") == p + self.shift]
        didx = {m: i for i, m in enumerate(dst)}
        out = IntMatrix(len(dst), len(src))
        for j, m in enumerate(src):
            for t, x in self.images.get(m, {}).items():
                out.data.setdefault(didx[t], {})[j] = x
        return out

    def degree_matrices(self) -> dict[int, IntMatrix]:
        top = self.src_rank
        return {p: self.matrix(p) for p in range(top + 1) if 0 <= p + self.shift <= self.dst_rank}

    def is_zero(self) -> bool:
        return not any(self.images.values())


def exterior_power_images(columns: Sequence[Sequence[int]], src_rank: int) -> dict[int, dict[int, int]]:
    """Images of every monomial under ``Lambda f`` where ``f`` has the given columns."""
    images: dict[int, dict[int, int]] = {0: {0: 1}}
    for mask in range(1, 1 << src_rank):
        top = mask.bit_length() - 1
        prev = images[mask ^ (1 << top)]
        images[mask] = wedge_right(prev, columns[top]) if prev else {}
    return images


def _matvec(mat: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, vec) if x) for row in mat]


def induced_exterior_map(
    src: PresentedGroup,
    dst: PresentedGroup,
    gen_map: IntMatrix,
    wedge_prefactor: Sequence[int] | None = None,
) -> ExteriorMap:
    """Exterior-algebra map induced by a generator-level map.

    ``gen_map`` is a ``dst.k x src.k`` matrix acting on generators.  Without a
    prefactor it must carry the relations of ``src`` into those of ``dst``;
    with a prefactor ``w`` (a vector in ``Z^{dst.k}``) it need only do so
    modulo ``w``, and the result is ``u -> w ^ Lambda(gen_map)(u)``.
    """
    if gen_map.shape != (dst.k, src.k):
        raise ValueError(f"gen_map has shape {gen_map.shape}, expected {(dst.k, src.k)}")
    gm = gen_map.to_dense()
    pre = dst.coords(wedge_prefactor) if wedge_prefactor is not None else None

    for col in src.relations.columns():
        image = dst.coords(_matvec(gm, col))
        if pre is None:
            if any(image):
                raise GroupMapError("generator map does not respect relations")
        else:
            for a in range(len(pre)):
                for b in range(a + 1, len(pre)):
                    if image[a] * pre[b] - image[b] * pre[a]:
                        raise GroupMapError("generator map does not respect relations modulo the prefactor")

    columns = [dst.coords(_matvec(gm, src.lift(j))) for j in range(src.rank)]
    images = exterior_power_images(columns, src.rank)
    if pre is not None:
        images = {m: wedge_left(pre, e) for m, e in images.items()}
        shift = 1
    else:
        shift = 0
    images = {m: e for m, e in images.items() if e}
    return ExteriorMap(src.rank, dst.rank, shift, images)


def compose(g: ExteriorMap, f: ExteriorMap) -> ExteriorMap:
    """``g o f``."""
    images = {}
    for m, e in f.images.items():
        img = g.apply_element(e)
        if img:
            images[m] = img
    return ExteriorMap(f.src_rank, g.dst_rank, f.shift + g.shift, images)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def cokernel_invariants(m: IntMatrix) -> tuple[int, list[int]]:
    """``(free rank, torsion divisors > 1)`` of ``Z^rows / im(m)``."""
    divs = elementary_divisors(m)
    return m.nrows - len(divs), [d for d in divs if d > 1]


def iter_masks_by_degree(f: int) -> Iterable[tuple[int, list[int]]]:
    for p in range(f + 1):
        yield p, [sum(1 << s for s in c) for c in combinations(range(f), p)]
