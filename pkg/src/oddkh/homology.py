"""Bigraded homology, Euler characteristics, and the Jones polynomial oracle."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .diagram import LinkDiagram
from .exactalg import IntMatrix, elementary_divisors, rank_mod2

__all__ = [
    "LaurentPoly",
    "BigradedHomology",
    "HomologyError",
    "bigraded_homology",
    "homology_mod2",
    "poincare_and_euler",
    "jones_oracle",
    "determinant_from_jones",
    "check_splitting",
    "check_universal_coefficients",
    "torsion_chain",
    "HomologyRun",
    "compute_homology",
]


class HomologyError(ArithmeticError):
    """The differential does not square to zero."""


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial; ``terms`` maps exponent tuples to coefficients."""

    variables: tuple[str, ...]
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: v for k, v in sorted(self.terms.items()) if v})

    @classmethod
    def one_var(cls, var: str, coeffs: dict[int, int]) -> "LaurentPoly":
        return cls((var,), {(e,): c for e, c in coeffs.items()})

    def coeffs(self) -> dict[int, int]:
        """Coefficients of a one-variable polynomial keyed by exponent."""
        return {k[0]: v for k, v in self.terms.items()}

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = Counter(self.terms)
        out.update(other.terms)
        return LaurentPoly(self.variables, dict(out))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: Counter = Counter()
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly(self.variables, dict(out))

    def substitute_inverse(self) -> "LaurentPoly":
        """Every variable replaced by its inverse."""
        return LaurentPoly(self.variables, {tuple(-e for e in k): v for k, v in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: kv[0][::-1]):
            mono = " ".join(
                var if e == 1 else f"{var}^{e}" for var, e in zip(self.variables, k) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Homology tables
# ---------------------------------------------------------------------------


def _prime_powers(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def torsion_chain(orders) -> tuple[int, ...]:
    """Invariant factors (each dividing the next) of a sum of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        for q in _prime_powers(n):
            p = min(d for d in range(2, q + 1) if q % d == 0)
            by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    chain = [1] * length
    for qs in by_prime.values():
        qs.sort(reverse=True)
        for t, q in enumerate(qs):
            chain[length - 1 - t] *= q
    return tuple(chain)


@dataclass(frozen=True)
class BigradedHomology:
    """``groups[(h, q)] = (free_rank, torsion)`` with torsion in divisor-chain form."""

    groups: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, (r, t) in sorted(self.groups.items()):
            t = torsion_chain(t)
            if r or t:
                clean[k] = (r, t)
        object.__setattr__(self, "groups", clean)

    def __eq__(self, other):
        return isinstance(other, BigradedHomology) and self.groups == other.groups

    def __hash__(self):
        return hash(tuple(self.groups.items()))

    def rank(self, h: int, q: int) -> int:
        return self.groups.get((h, q), (0, ()))[0]

    def torsion(self, h: int, q: int) -> tuple[int, ...]:
        return self.groups.get((h, q), (0, ()))[1]

    def shifted(self, dh: int, dq: int) -> "BigradedHomology":
        return BigradedHomology({(h + dh, q + dq): v for (h, q), v in self.groups.items()})

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def to_json(self) -> dict:
        return {f"({h},{q})": {"rank": r, "torsion": list(t)} for (h, q), (r, t) in self.groups.items()}

    @classmethod
    def from_json(cls, obj: dict) -> "BigradedHomology":
        groups = {}
        for key, val in obj.items():
            h, q = (int(x) for x in key.strip("()").split(","))
            groups[(h, q)] = (int(val["rank"]), tuple(val["torsion"]))
        return cls(groups)

    def table(self) -> str:
        """Plain text table, one line per nonzero bigrading."""
        lines = []
        for (h, q), (r, t) in self.groups.items():
            parts = ([f"Z^{r}" if r > 1 else "Z"] if r else []) + [f"Z/{d}" for d in t]
            lines.append(f"h={h:>3} q={q:>3}  " + " + ".join(parts))
        return "\n".join(lines) if lines else "(zero)"


def _check_squares(mats) -> None:
    for (h, q), m in mats.items():
        nxt = mats.get((h + 1, q))
        if nxt is not None and nxt.ncols == m.nrows and m.ncols and nxt.nrows and not (nxt @ m).is_zero():
            raise HomologyError(f"d^2 != 0 at (h, q) = ({h}, {q})")


def _dims(bases, mats) -> dict:
    if bases is not None:
        return {k: len(v) for k, v in bases.items()}
    return {k: m.ncols for k, m in mats.items()}


def bigraded_homology(mats: dict, bases: dict | None = None, check: bool = True) -> BigradedHomology:
    """Integer homology from differentials ``mats[(h, q)]: C^{h,q} -> C^{h+1,q}``."""
    if check:
        _check_squares(mats)
    dims = _dims(bases, mats)
    divs = {k: elementary_divisors(m) for k, m in mats.items()}
    groups = {}
    for (h, q), dim in dims.items():
        out_rank = len(divs.get((h, q), ()))
        incoming = divs.get((h - 1, q), [])
        free = dim - out_rank - len(incoming)
        groups[(h, q)] = (free, tuple(d for d in incoming if d > 1))
    return BigradedHomology(groups)


def homology_mod2(mats: dict, bases: dict | None = None) -> dict[tuple[int, int], int]:
    """Bigraded dimensions over the two-element field."""
    dims = _dims(bases, mats)
    ranks = {k: rank_mod2(m) for k, m in mats.items()}
    out = {}
    for (h, q), dim in sorted(dims.items()):
        d = dim - ranks.get((h, q), 0) - ranks.get((h - 1, q), 0)
        if d:
            out[(h, q)] = d
    return out


def poincare_and_euler(hom: BigradedHomology) -> tuple[LaurentPoly, LaurentPoly]:
    """Poincare polynomial in ``t, q`` and Euler characteristic in ``q`` (torsion ignored)."""
    p = LaurentPoly(("t", "q"), {(h, q): r for (h, q), (r, _) in hom.groups.items()})
    e: Counter = Counter()
    for (h, q), (r, _) in hom.groups.items():
        e[(q,)] += (-1) ** (h % 2) * r
    return p, LaurentPoly(("q",), dict(e))


def check_splitting(unreduced: BigradedHomology, reduced: BigradedHomology):
    """Check ``Kh(h, q) = Khr(h, q - 1) + Khr(h, q + 1)``.

    Returns ``(True, None)`` or ``(False, first_bad_bigrading)``.
    """
    keys = set(unreduced.groups)
    for h, q in reduced.groups:
        keys.update({(h, q - 1), (h, q + 1)})
    for h, q in sorted(keys):
        r1, t1 = reduced.groups.get((h, q - 1), (0, ()))
        r2, t2 = reduced.groups.get((h, q + 1), (0, ()))
        want = (r1 + r2, torsion_chain(t1 + t2))
        if unreduced.groups.get((h, q), (0, ())) != want:
            return False, (h, q)
    return True, None


def check_universal_coefficients(hom: BigradedHomology, dims2: dict):
    """Check ``dim_2(h, q) = rank(h, q) + #even(h, q) + #even(h + 1, q)``.

    The differential raises ``h``, so the Tor term comes from ``h + 1``.
    Returns ``(True, None)`` or ``(False, first_bad_bigrading)``.
    """

    def even(h, q):
        return sum(1 for d in hom.torsion(h, q) if d % 2 == 0)

    keys = set(dims2) | set(hom.groups) | {(h - 1, q) for h, q in hom.groups}
    for h, q in sorted(keys):
        if dims2.get((h, q), 0) != hom.rank(h, q) + even(h, q) + even(h + 1, q):
            return False, (h, q)
    return True, None


# ---------------------------------------------------------------------------
# Jones polynomial oracle (Kauffman bracket state sum on raw PD tuples)
# ---------------------------------------------------------------------------


def _state_circles(crossings, state: int) -> int:
    parent: dict[int, int] = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for k, (a, b, c, d) in enumerate(crossings):
        if state >> k & 1:
            union(a, d)
            union(b, c)
        else:
            union(a, b)
            union(c, d)
    return len({find(x) for x in list(parent)})


def _poly_mul(p: dict[int, int], r: dict[int, int]) -> dict[int, int]:
    out: Counter = Counter()
    for a, x in p.items():
        for b, y in r.items():
            out[a + b] += x * y
    return {k: v for k, v in out.items() if v}


def jones_oracle(d: LinkDiagram) -> LaurentPoly:
    """Jones polynomial in ``q`` with the unknot normalized to 1.

    Kauffman bracket ``sum A^(#0 - #1) (-A^2 - A^-2)^(c - 1)``, times
    ``(-A^3)^(-writhe)``, then ``A^(2k) -> (-q)^(-k)``, so ``t = q^2``.
    """
    n = d.n
    if n == 0:
        return LaurentPoly.one_var("q", {0: 1})
    loop = {2: -1, -2: -1}
    powers = [{0: 1}]
    bracket: Counter = Counter()
    for state in range(1 << n):
        c = _state_circles(d.crossings, state)
        while len(powers) < c:
            powers.append(_poly_mul(powers[-1], loop))
        ones = bin(state).count("1")
        for e, v in powers[c - 1].items():
            bracket[e + (n - ones) - ones] += v
    w = d.writhe
    sign = -1 if w % 2 else 1
    out: Counter = Counter()
    for e, v in bracket.items():
        e2 = e - 3 * w
        if e2 % 2:
            raise ValueError("odd power of A after normalization")
        k = e2 // 2
        out[-k] += sign * v * (-1) ** (k % 2)
    return LaurentPoly.one_var("q", dict(out))


def determinant_from_jones(jones: LaurentPoly) -> int:
    """``|J|`` at ``t = -1``, i.e. at ``q = i``."""
    re = im = 0
    for e, c in jones.coeffs().items():
        r = e % 4
        if r == 0:
            re += c
        elif r == 1:
            im += c
        elif r == 2:
            re -= c
        else:
            im -= c
    n2 = re * re + im * im
    root = math.isqrt(n2)
    if root * root != n2:
        raise ValueError("|J(i)| is not an integer")
    return root


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass
class HomologyRun:
    """Everything computed on the way from a complex to its homology."""

    complex: object
    eps: dict
    bases: dict
    matrices: dict
    homology: BigradedHomology
    mod2: dict | None = None


def compute_homology(cx, eps: dict | None = None, mod2: bool = False) -> HomologyRun:
    """Sign the complex, assemble differentials and take homology."""
    from .complex import assemble_differentials, edge_assignment

    if eps is None:
        eps = edge_assignment(cx)
    bases, mats = assemble_differentials(cx, eps)
    hom = bigraded_homology(mats, bases)
    dims2 = homology_mod2(mats, bases) if mod2 else None
    return HomologyRun(cx, eps, bases, mats, hom, dims2)
