"""Ladder diagram combinatorics for Gelfand-Cetlin polytopes of Fl(n).

Indices ``(i, j)`` run over ``Gamma(n) = {2 <= i + j <= n}``.  The cells with
``i + j = n + 1`` form the frozen diagonal carrying the eigenvalues
``lambda_i = n - 2i + 1``; the potential treats their variables as the
constant 1.  ``B(m)`` is the ``m x m`` box ``1 <= i, j <= m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

Index = tuple[int, int]

__all__ = [
    "DiagramShape",
    "GcPoint",
    "SchubertCycle",
    "center_point",
    "diagonal",
    "disc_intersection",
    "gamma",
    "hor_key",
    "in_box",
    "ceil_half",
    "lambdas",
    "order_hor_less",
    "order_ver_less",
    "schubert_cycles",
    "seed_index_set",
    "segment_point",
    "segment_point_symbolic",
    "TExp",
    "ver_key",
]


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 3:
        raise ValueError(f"flag size n must be an integer >= 3, got {n!r}")


def ceil_half(n: int) -> int:
    return (n + 1) // 2


def hor_key(ij: Index) -> tuple[int, int]:
    return (ij[0] + ij[1], ij[0])


def ver_key(ij: Index) -> tuple[int, int]:
    return (ij[0] + ij[1], ij[1])


def order_hor_less(a: Index, b: Index) -> bool:
    return hor_key(a) < hor_key(b)


def order_ver_less(a: Index, b: Index) -> bool:
    return ver_key(a) < ver_key(b)


def gamma(n: int) -> list[Index]:
    """All ladder indices of Fl(n), listed in increasing horizontal order."""
    _check_n(n)
    return [(i, p - i) for p in range(2, n + 1) for i in range(1, p)]


def diagonal(n: int, p: int) -> list[Index]:
    """Cells with ``i + j = p``, top row first."""
    return [(i, p - i) for i in range(1, p)]


def in_box(ij: Index, m: int) -> bool:
    return 1 <= ij[0] <= m and 1 <= ij[1] <= m


def lambdas(n: int) -> tuple[int, ...]:
    return tuple(n - 2 * i + 1 for i in range(1, n + 1))


@dataclass(frozen=True)
class DiagramShape:
    n: int
    m: int | None = None

    def __post_init__(self):
        _check_n(self.n)
        if self.m is not None and not 1 <= self.m <= self.k:
            raise ValueError(f"box size m={self.m} out of range for n={self.n}")

    @property
    def k(self) -> int:
        return ceil_half(self.n)

    def box(self) -> list[Index]:
        m = self.m or 0
        return [ij for ij in gamma(self.n) if in_box(ij, m)]


@dataclass(frozen=True)
class GcPoint:
    """A point of the Gelfand-Cetlin polytope in ladder coordinates."""

    n: int
    u: dict = field(hash=False)
    lam: tuple[int, ...] = ()

    def value(self, i: int, j: int) -> Fraction:
        if i + j == self.n + 1:
            return Fraction(self.lam[i - 1])
        return self.u[(i, j)]

    def facet_gaps(self) -> Iterator[tuple[str, Index, Fraction]]:
        """Yield ``(kind, (i, j), gap)`` for every facet inequality.

        ``hor`` gaps are ``u_{i,j} - u_{i+1,j}``, ``ver`` gaps are
        ``u_{i,j+1} - u_{i,j}``; the point lies in the polytope iff all are >= 0.
        """
        for i, j in gamma(self.n):
            yield "hor", (i, j), self.value(i, j) - self.value(i + 1, j)
            yield "ver", (i, j), self.value(i, j + 1) - self.value(i, j)

    def in_polytope(self) -> bool:
        return all(g >= 0 for _, _, g in self.facet_gaps())


def segment_point(n: int, m: int, t) -> GcPoint:
    """Point ``I_m(t)``: box coordinates shrink by ``1 - t``, the rest stay at ``j - i``.

    The box size may run up to ``ceil(n/2)``; for n = 3 and m = 2 this is the
    segment through the center of Fl(3).
    """
    _check_n(n)
    t = Fraction(t)
    if not 2 <= m <= ceil_half(n):
        raise ValueError(f"m={m} out of range 2..{ceil_half(n)} for n={n}")
    if not 0 <= t <= 1:
        raise ValueError(f"t={t} outside [0, 1]")
    u = {}
    for i, j in gamma(n):
        base = Fraction(j - i)
        u[(i, j)] = base * (1 - t) if max(i, j) <= m else base
    return GcPoint(n=n, u=u, lam=lambdas(n))


@dataclass(frozen=True)
class TExp:
    """An exponent ``const + slope*t`` kept symbolic in ``t`` for display."""

    const: Fraction
    slope: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "TExp":
        return x if isinstance(x, TExp) else TExp(Fraction(x))

    def __add__(self, other):
        o = TExp.of(other)
        return TExp(self.const + o.const, self.slope + o.slope)

    __radd__ = __add__

    def __neg__(self):
        return TExp(-self.const, -self.slope)

    def __sub__(self, other):
        return self + (-TExp.of(other))

    def __rsub__(self, other):
        return TExp.of(other) - self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.slope == 0 and self.const == other
        if isinstance(other, TExp):
            return self.const == other.const and self.slope == other.slope
        return NotImplemented

    def __hash__(self):
        return hash((self.const, self.slope))

    def at(self, t) -> Fraction:
        return self.const + self.slope * Fraction(t)

    def __str__(self):
        c, s = self.const, self.slope
        if s == 0:
            return str(c)
        tpart = "t" if abs(s) == 1 else f"{abs(s)}t"
        if c == 0:
            return tpart if s > 0 else f"-{tpart}"
        return f"{c}{'+' if s > 0 else '-'}{tpart}"


def segment_point_symbolic(n: int, m: int) -> GcPoint:
    """``I_m(t)`` with ``t`` left as a symbol (coordinates are :class:`TExp`)."""
    _check_n(n)
    if not 2 <= m <= ceil_half(n):
        raise ValueError(f"m={m} out of range 2..{ceil_half(n)} for n={n}")
    u = {}
    for i, j in gamma(n):
        base = Fraction(j - i)
        u[(i, j)] = TExp(base, -base) if max(i, j) <= m else TExp(base)
    return GcPoint(n=n, u=u, lam=lambdas(n))


def center_point(n: int) -> GcPoint:
    _check_n(n)
    u = {(i, j): Fraction(j - i) for i, j in gamma(n)}
    return GcPoint(n=n, u=u, lam=lambdas(n))


# Schubert facet unions ----------------------------------------------------

@dataclass(frozen=True)
class SchubertCycle:
    kind: str  # "hor" or "ver"
    index: int
    facets: tuple[tuple[str, int, int], ...]

    @property
    def label(self) -> str:
        i = self.index
        return f"D^hor_{{{i},{i + 1}}}" if self.kind == "hor" else f"D^ver_{{{i + 1},{i}}}"


def schubert_cycles(n: int) -> list[SchubertCycle]:
    """Horizontal and vertical facet unions, ``2(n-1)`` cycles in all."""
    _check_n(n)
    out = []
    for i in range(1, n):
        out.append(SchubertCycle("hor", i, tuple(("hor", i, s) for s in range(1, n - i + 1))))
    for j in range(1, n):
        out.append(SchubertCycle("ver", j, tuple(("ver", r, j) for r in range(1, n - j + 1))))
    return out


def disc_intersection(facet: tuple[str, int, int], cycle: SchubertCycle) -> int:
    """Intersection number of the basic disc of ``facet`` with a cycle.

    A horizontal facet ``("hor", i, j)`` meets exactly ``D^hor_{i,i+1}``; a
    vertical facet ``("ver", i, j)`` meets exactly ``D^ver_{j+1,j}``.
    """
    try:
        kind, i, j = facet
    except (TypeError, ValueError):
        raise ValueError(f"malformed facet {facet!r}") from None
    if kind not in ("hor", "ver") or not (isinstance(i, int) and isinstance(j, int)) \
            or i < 1 or j < 1:
        raise ValueError(f"malformed facet {facet!r}")
    if kind != cycle.kind:
        return 0
    return int((i if kind == "hor" else j) == cycle.index)


# seeds --------------------------------------------------------------------

def seed_index_set(n: int, m: int) -> tuple[list[Index], list[Index]]:
    """Cells whose values are prescribed when solving the leading-order system.

    Returns ``(seed, initial)`` with ``initial = seed`` minus ``(m, m)``.  The
    seed consists of ``(m, m)``, the cells ``(s, m+1)`` of Gamma(n) with
    ``s <= m``, and one pivot per diagonal ``p = 2m+2, ..., n``, namely
    ``(q, p - q)`` with ``q = ceil((p-1)/2)``.  Every diagonal beyond the box
    thus carries exactly one prescribed value and the seed has ``n - m``
    entries.
    """
    _check_n(n)
    if not 2 <= m <= ceil_half(n):
        raise ValueError(f"m={m} out of range 2..{ceil_half(n)} for n={n}")
    seed = [(m, m)]
    seed += [(s, m + 1) for s in range(1, m + 1) if s + m + 1 <= n]
    for p in range(2 * m + 2, n + 1):
        q = p // 2
        seed.append((q, p - q))
    return seed, seed[1:]
