"""Potential functions of Gelfand-Cetlin fibers and their bulk deformations.

Every facet inequality of the polytope contributes one Laurent monomial:
the vertical facet at ``(i, j)`` gives ``y[i,j+1]/y[i,j] T^(u[i,j+1]-u[i,j])``
and the horizontal facet gives ``y[i,j]/y[i+1,j] T^(u[i,j]-u[i+1,j])``.
Variables on the frozen diagonal ``i + j = n + 1`` are the constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .gcdiagram import (
    GcPoint,
    TExp,
    disc_intersection,
    gamma,
    hor_key,
    schubert_cycles,
)
from .novikov import NovikovSeries, constant, invert_unit, is_unit, to_text

Index = tuple[int, int]
Facet = tuple[str, int, int]
BulkKey = tuple[str, int]

__all__ = [
    "BulkParameter",
    "PotentialExpr",
    "Term",
    "apply_bulk",
    "build_potential",
    "evaluate",
    "gradient_offsets",
    "log_gradient",
    "normalized_gradient",
    "potential_to_json",
    "render",
]


@dataclass(frozen=True)
class Term:
    """``coeff * (bulk factors) * prod y^e * T^t_exp`` for one facet."""

    facet: Facet
    monomial: tuple[tuple[Index, int], ...]
    t_exp: Fraction | TExp
    coeff: Fraction = Fraction(1)
    bulk: tuple[BulkKey, ...] = ()

    def exponent_of(self, ij: Index) -> int:
        for v, e in self.monomial:
            if v == ij:
                return e
        return 0


@dataclass(frozen=True)
class PotentialExpr:
    n: int
    terms: tuple[Term, ...]
    flagged: tuple[Facet, ...] = ()

    def at(self, t) -> "PotentialExpr":
        """Substitute a rational ``t`` into symbolic exponents."""
        terms = tuple(replace(x, t_exp=x.t_exp.at(t)) if isinstance(x.t_exp, TExp) else x
                      for x in self.terms)
        return replace(self, terms=terms)


@dataclass(frozen=True)
class BulkParameter:
    """Bulk coefficients ``c = exp(b)``: ``hor[i]`` is c^hor_{i,i+1}, ``ver[j]`` is c^ver_{j+1,j}.

    Missing entries stand for the constant 1.
    """

    hor: Mapping[int, NovikovSeries] = field(default_factory=dict)
    ver: Mapping[int, NovikovSeries] = field(default_factory=dict)

    def get(self, key: BulkKey) -> NovikovSeries | None:
        kind, idx = key
        return (self.hor if kind == "hor" else self.ver).get(idx)

    def items(self):
        for i in sorted(self.hor):
            yield ("hor", i), self.hor[i]
        for j in sorted(self.ver):
            yield ("ver", j), self.ver[j]


def _monomial(num: Index | None, den: Index | None, n: int) -> tuple:
    mono = []
    for v, e in ((num, 1), (den, -1)):
        if v is not None and v[0] + v[1] <= n:
            mono.append((v, e))
    return tuple(sorted(mono))


def build_potential(point: GcPoint) -> PotentialExpr:
    """One term per facet, listed in horizontal order of the facet's cell."""
    n = point.n
    terms = []
    flagged = []
    for i, j in gamma(n):
        for kind in ("ver", "hor"):
            if kind == "ver":
                gap = point.value(i, j + 1) - point.value(i, j)
                mono = _monomial((i, j + 1), (i, j), n)
            else:
                gap = point.value(i, j) - point.value(i + 1, j)
                mono = _monomial((i, j), (i + 1, j), n)
            if gap == 0:
                flagged.append((kind, i, j))
            terms.append(Term(facet=(kind, i, j), monomial=mono, t_exp=gap))
    return PotentialExpr(n=n, terms=tuple(terms), flagged=tuple(flagged))


def apply_bulk(W: PotentialExpr, bulk: BulkParameter | None = None) -> PotentialExpr:
    """Attach to each term the bulk symbols of the cycles its disc meets.

    The symbols are resolved against a :class:`BulkParameter` at evaluation
    time; entries given here are only checked to be units.
    """
    if bulk is not None:
        for key, c in bulk.items():
            if not is_unit(c):
                raise ValueError(f"bulk entry {key} is not a unit: {to_text(c)}")
    cycles = schubert_cycles(W.n)
    terms = []
    for x in W.terms:
        keys = tuple((c.kind, c.index) for c in cycles if disc_intersection(x.facet, c))
        terms.append(replace(x, bulk=keys))
    return replace(W, terms=tuple(terms))


def log_gradient(Wb: PotentialExpr, at: Index) -> PotentialExpr:
    """``y[at] * dW/dy[at]``, computed by weighting each term with its exponent."""
    i, j = at
    if not (i >= 1 and j >= 1 and i + j <= Wb.n):
        raise ValueError(f"index {at} is not in Gamma({Wb.n})")
    terms = []
    for x in Wb.terms:
        e = x.exponent_of(at)
        if e:
            terms.append(replace(x, coeff=x.coeff * e))
    return replace(Wb, terms=tuple(terms), flagged=())


def gradient_offsets(expr: PotentialExpr) -> tuple[Fraction, Fraction]:
    """``(nu, largest offset)`` of the T-exponents of a rational expression."""
    exps = [x.t_exp for x in expr.terms]
    nu = min(exps)
    return nu, max(e - nu for e in exps)


class _Powers:
    # caches y and 1/y per variable for one evaluation
    def __init__(self, y: Mapping[Index, NovikovSeries]):
        self.y = y
        self.inv: dict[Index, NovikovSeries] = {}

    def get(self, v: Index, e: int) -> NovikovSeries:
        if e == 1:
            return self.y[v]
        if e == -1:
            if v not in self.inv:
                self.inv[v] = invert_unit(self.y[v])
            return self.inv[v]
        raise ValueError(f"unexpected exponent {e}")


def _term_value(x: Term, pw: _Powers, bulk: BulkParameter | None, cap) -> NovikovSeries:
    val = constant(x.coeff, cap)
    for v, e in x.monomial:
        val = val * pw.get(v, e)
    if bulk is not None:
        for key in x.bulk:
            c = bulk.get(key)
            if c is not None:
                val = val * c
    return val


def evaluate(expr: PotentialExpr, y: Mapping[Index, NovikovSeries],
             bulk: BulkParameter | None = None, shift: Fraction = Fraction(0)) -> NovikovSeries:
    """Substitute series for the variables; the result is multiplied by ``T^-shift``."""
    if not y:
        raise ValueError("empty assignment")
    cap = min(s.cap for s in y.values())
    pw = _Powers(y)
    total = None
    for x in expr.terms:
        if isinstance(x.t_exp, TExp):
            raise ValueError("substitute t before evaluating")
        v = _term_value(x, pw, bulk, cap).shift(x.t_exp - shift)
        total = v if total is None else total + v
    if total is None:
        return NovikovSeries((), cap)
    return total


def normalized_gradient(Wb: PotentialExpr, at: Index, y: Mapping[Index, NovikovSeries],
                        bulk: BulkParameter | None = None) -> NovikovSeries:
    """Evaluated log-gradient divided by ``T^nu``, ``nu`` its least T-exponent."""
    g = log_gradient(Wb, at)
    nu, _ = gradient_offsets(g)
    return evaluate(g, y, bulk, shift=nu)


# rendering ----------------------------------------------------------------

def _var(v: Index) -> str:
    return f"y_{{{v[0]},{v[1]}}}"


def _term_tex(x: Term) -> str:
    num = [v for v, e in x.monomial if e > 0]
    den = [v for v, e in x.monomial if e < 0]
    if den:
        body = f"\\frac{{{_var(num[0]) if num else '1'}}}{{{_var(den[0])}}}"
    else:
        body = _var(num[0]) if num else "1"
    for kind, idx in x.bulk:
        sym = f"c^{{hor}}_{{{idx},{idx + 1}}}" if kind == "hor" else f"c^{{ver}}_{{{idx + 1},{idx}}}"
        body = f"{sym} {body}"
    c = x.coeff
    if c == 1:
        return f"+ {body}"
    if c == -1:
        return f"- {body}"
    sign = "-" if c < 0 else "+"
    return f"{sign} {abs(c)} {body}"


def _exp_key(e):
    if isinstance(e, TExp):
        return (e.at(Fraction(1, 2)), e.const, e.slope)
    return (e, e, 0)


def render(expr: PotentialExpr) -> str:
    """Canonical text: terms grouped by T-exponent, groups ascending, facets in horizontal order.

    Within one cell the vertical facet precedes the horizontal one.
    """
    groups: dict = {}
    for x in expr.terms:
        groups.setdefault(x.t_exp, []).append(x)
    parts = []
    for e in sorted(groups, key=_exp_key):
        xs = sorted(groups[e], key=lambda x: (hor_key(x.facet[1:]), x.facet[0] == "hor"))
        inner = " ".join(_term_tex(x) for x in xs)
        inner = inner[2:] if inner.startswith("+ ") else inner
        parts.append(f"\\left( {inner} \\right) T^{{{e}}}")
    return " + ".join(parts) if parts else "0"


def potential_to_json(expr: PotentialExpr) -> dict:
    def q(v):
        if isinstance(v, TExp):
            return {"const": f"{v.const.numerator}/{v.const.denominator}",
                    "t": f"{v.slope.numerator}/{v.slope.denominator}"}
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"

    return {
        "n": expr.n,
        "terms": [
            {
                "facet": list(x.facet),
                "coeff": q(x.coeff),
                "bulk": [list(b) for b in x.bulk],
                "monomial": [[v[0], v[1], e] for v, e in x.monomial],
                "t_exp": q(x.t_exp),
            }
            for x in expr.terms
        ],
        "flagged": [list(f) for f in expr.flagged],
    }
