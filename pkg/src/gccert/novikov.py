"""Truncated Novikov series with exact rational exponents and coefficients.

A series is a finite sum ``sum c_e T^e`` together with a cap ``N``: every
term with exponent ``>= N`` is unknown and has been dropped.  Values are
immutable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from . import _kernel

Rational = Union[int, Fraction]

__all__ = [
    "NotAUnit",
    "NovikovSeries",
    "add",
    "constant",
    "equals_mod",
    "from_json",
    "from_text",
    "invert_unit",
    "is_unit",
    "monomial",
    "mul",
    "neg",
    "sqrt_unit",
    "to_json",
    "to_text",
    "truncate",
    "valuation",
]


class NotAUnit(ArithmeticError):
    """Raised when an operation needs a unit of valuation zero."""


def _frac(x: Rational | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _lcm_den(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


class NovikovSeries:
    """An element of the Novikov field known modulo ``T^cap``."""

    __slots__ = ("_exps", "_coefs", "_cap", "_hash")

    def __init__(self, terms: Mapping[Rational, Rational] | Iterable[tuple] = (),
                 cap: Rational = 1):
        cap = _frac(cap)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e = _frac(e)
            if e >= cap:
                continue
            acc[e] = acc.get(e, Fraction(0)) + _frac(c)
        keys = sorted(e for e, c in acc.items() if c)
        self._exps = tuple(keys)
        self._coefs = tuple(acc[e] for e in keys)
        self._cap = cap
        self._hash = None

    @classmethod
    def _raw(cls, exps: tuple, coefs: tuple, cap: Fraction) -> "NovikovSeries":
        # trusted constructor: exps sorted, coefs nonzero, all exps < cap
        obj = cls.__new__(cls)
        obj._exps = exps
        obj._coefs = coefs
        obj._cap = cap
        obj._hash = None
        return obj

    @property
    def cap(self) -> Fraction:
        return self._cap

    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(zip(self._exps, self._coefs))

    def coefficient(self, e: Rational) -> Fraction:
        e = _frac(e)
        for x, c in zip(self._exps, self._coefs):
            if x == e:
                return c
        return Fraction(0)

    def leading(self) -> tuple[Fraction, Fraction] | None:
        """Lowest term ``(exponent, coefficient)``, or None for zero."""
        if not self._exps:
            return None
        return self._exps[0], self._coefs[0]

    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def is_zero(self) -> bool:
        return not self._exps

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self._cap)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        other = _coerce(other, self._cap)
        if other is NotImplemented:
            return other
        return add(self, neg(other))

    def __rsub__(self, other):
        other = _coerce(other, self._cap)
        if other is NotImplemented:
            return other
        return add(other, neg(self))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _frac(other))
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return mul(self, invert_unit(other))

    def __rtruediv__(self, other):
        other = _coerce(other, self._cap)
        if other is NotImplemented:
            return other
        return mul(other, invert_unit(self))

    def scale(self, c: Rational) -> "NovikovSeries":
        c = _frac(c)
        if not c:
            return NovikovSeries._raw((), (), self._cap)
        return NovikovSeries._raw(self._exps, tuple(c * x for x in self._coefs), self._cap)

    def shift(self, e: Rational) -> "NovikovSeries":
        """Multiply by ``T^e``; the cap moves with the terms."""
        e = _frac(e)
        return NovikovSeries._raw(tuple(x + e for x in self._exps), self._coefs, self._cap + e)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self._cap == other._cap and self._exps == other._exps
                and self._coefs == other._coefs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._exps, self._coefs, self._cap))
        return self._hash

    def __repr__(self):
        return f"NovikovSeries({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def _coerce(x, cap: Fraction):
    if isinstance(x, NovikovSeries):
        return x
    if isinstance(x, (int, Fraction)):
        return constant(x, cap)
    return NotImplemented


def constant(c: Rational, cap: Rational) -> NovikovSeries:
    return NovikovSeries({0: c}, cap)


def monomial(c: Rational, e: Rational, cap: Rational) -> NovikovSeries:
    """``c T^e`` modulo ``T^cap``."""
    return NovikovSeries({e: c}, cap)


def valuation(x: NovikovSeries) -> Fraction | None:
    """Least stored exponent; None stands for the zero element."""
    return x._exps[0] if x._exps else None


def is_unit(x: NovikovSeries) -> bool:
    return bool(x._exps) and x._exps[0] == 0


def neg(x: NovikovSeries) -> NovikovSeries:
    return NovikovSeries._raw(x._exps, tuple(-c for c in x._coefs), x._cap)


def add(x: NovikovSeries, y: NovikovSeries) -> NovikovSeries:
    cap = min(x._cap, y._cap)
    acc: dict[Fraction, Fraction] = {}
    for e, c in zip(x._exps, x._coefs):
        if e < cap:
            acc[e] = c
    for e, c in zip(y._exps, y._coefs):
        if e < cap:
            acc[e] = acc.get(e, 0) + c
    keys = sorted(e for e, c in acc.items() if c)
    return NovikovSeries._raw(tuple(keys), tuple(acc[e] for e in keys), cap)


def _low(x: NovikovSeries) -> Fraction:
    # a lower bound for the true valuation: the cap stands in for zero
    return x._exps[0] if x._exps else x._cap


def mul(x: NovikovSeries, y: NovikovSeries) -> NovikovSeries:
    """Product; known modulo the smaller cap (less if a factor has negative valuation)."""
    cap = min(x._cap, y._cap, x._cap + _low(y), y._cap + _low(x))
    if not x._exps or not y._exps:
        return NovikovSeries._raw((), (), cap)
    scale = _lcm_den(x._exps + y._exps + (cap,))
    dx = _lcm_den(x._coefs)
    dy = _lcm_den(y._coefs)
    xe = [int(e * scale) for e in x._exps]
    ye = [int(e * scale) for e in y._exps]
    xc = [int(c * dx) for c in x._coefs]
    yc = [int(c * dy) for c in y._coefs]
    raw = _kernel.convolve(xe, xc, ye, yc, int(cap * scale))
    den = dx * dy
    exps = []
    coefs = []
    for e, c in raw:
        exps.append(Fraction(e, scale))
        coefs.append(Fraction(c, den))
    return NovikovSeries._raw(tuple(exps), tuple(coefs), cap)


def invert_unit(x: NovikovSeries) -> NovikovSeries:
    """Inverse of a unit, known to the same cap."""
    if not is_unit(x):
        raise NotAUnit(f"not a unit: {to_text(x)}")
    a0 = x._coefs[0]
    cap = x._cap
    if len(x._exps) == 1:
        return NovikovSeries._raw((Fraction(0),), (1 / a0,), cap)
    # x = a0 (1 + sum alpha_e T^e); alpha on an integer grid over a common denominator
    rest = [c / a0 for c in x._coefs[1:]]
    scale = _lcm_den(x._exps + (cap,))
    den = _lcm_den(rest)
    idx = [int(e * scale) for e in x._exps[1:]]
    alpha = [int(c * den) for c in rest]
    size = int(math.ceil(cap * scale))
    beta = _kernel.inverse_monic(idx, alpha, den, size)
    exps = []
    coefs = []
    inv_a0 = 1 / a0
    for k, b in beta:
        exps.append(Fraction(k, scale))
        coefs.append(Fraction(b, den ** k) * inv_a0)
    return NovikovSeries._raw(tuple(exps), tuple(coefs), cap)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def sqrt_unit(x: NovikovSeries, leading_sign: int = 1) -> NovikovSeries:
    """Square root of a unit whose leading coefficient is a rational square.

    ``leading_sign`` selects the branch by the sign of the constant term.
    """
    if leading_sign not in (1, -1):
        raise ValueError("leading_sign must be +1 or -1")
    if not is_unit(x):
        raise NotAUnit(f"not a unit: {to_text(x)}")
    r0 = _rational_sqrt(x._coefs[0])
    if r0 is None:
        raise ValueError(f"leading coefficient {x._coefs[0]} is not a rational square")
    cap = x._cap
    scale = _lcm_den(x._exps + (cap,))
    size = int(math.ceil(cap * scale))
    a = [Fraction(0)] * size
    for e, c in zip(x._exps, x._coefs):
        a[int(e * scale)] = c / x._coefs[0]
    # s^2 = a with s_0 = 1, solved degree by degree
    s = [Fraction(0)] * size
    s[0] = Fraction(1)
    support = []
    for k in range(1, size):
        acc = a[k]
        for i in support:
            if i >= k:
                break
            if s[k - i]:
                acc -= s[i] * s[k - i]
        s[k] = acc / 2
        if s[k]:
            support.append(k)
    r0 = r0 * leading_sign
    return NovikovSeries._raw(
        tuple(Fraction(k, scale) for k in range(size) if s[k]),
        tuple(r0 * s[k] for k in range(size) if s[k]),
        cap,
    )


def truncate(x: NovikovSeries, order: Rational) -> NovikovSeries:
    """Drop terms with exponent ``>= order`` and lower the cap to ``order``."""
    order = _frac(order)
    if order >= x._cap:
        return x
    n = 0
    while n < len(x._exps) and x._exps[n] < order:
        n += 1
    return NovikovSeries._raw(x._exps[:n], x._coefs[:n], order)


def equals_mod(x: NovikovSeries, y: NovikovSeries, order: Rational) -> bool:
    """True iff every term with exponent below ``order`` agrees."""
    order = _frac(order)
    a = [(e, c) for e, c in zip(x._exps, x._coefs) if e < order]
    b = [(e, c) for e, c in zip(y._exps, y._coefs) if e < order]
    return a == b


# serialization ------------------------------------------------------------

def _q(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def to_text(x: NovikovSeries) -> str:
    """Canonical text: ``c*T^(p/q) + ... (mod T^(P/Q))``."""
    body = " + ".join(f"{_q(c)}*T^({_q(e)})" for e, c in zip(x._exps, x._coefs))
    return f"{body or '0'} (mod T^({_q(x._cap)}))"


_TERM = re.compile(r"^(-?\d+/\d+)\*T\^\((-?\d+/\d+)\)$")
_TAIL = re.compile(r"^(.*) \(mod T\^\((-?\d+/\d+)\)\)$")


def from_text(s: str) -> NovikovSeries:
    m = _TAIL.match(s.strip())
    if not m:
        raise ValueError(f"malformed series text: {s!r}")
    body, cap = m.group(1), Fraction(m.group(2))
    if body == "0":
        return NovikovSeries((), cap)
    exps, coefs = [], []
    for part in body.split(" + "):
        t = _TERM.match(part)
        if not t:
            raise ValueError(f"malformed term {part!r}")
        coefs.append(Fraction(t.group(1)))
        exps.append(Fraction(t.group(2)))
    if exps != sorted(set(exps)) or any(c == 0 for c in coefs) or any(e >= cap for e in exps):
        raise ValueError(f"non-canonical series text: {s!r}")
    return NovikovSeries._raw(tuple(exps), tuple(coefs), cap)


def to_json(x: NovikovSeries) -> dict:
    return {
        "terms": [[e.numerator, e.denominator, c.numerator, c.denominator]
                  for e, c in zip(x._exps, x._coefs)],
        "cap": [x._cap.numerator, x._cap.denominator],
    }


def from_json(obj: Mapping) -> NovikovSeries:
    try:
        cap = Fraction(int(obj["cap"][0]), int(obj["cap"][1]))
        terms = [(Fraction(int(a), int(b)), Fraction(int(c), int(d)))
                 for a, b, c, d in obj["terms"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed series JSON: {exc}") from exc
    exps = [e for e, _ in terms]
    if exps != sorted(set(exps)) or any(c == 0 for _, c in terms) or any(e >= cap for e in exps):
        raise ValueError("non-canonical series JSON")
    return NovikovSeries._raw(tuple(exps), tuple(c for _, c in terms), cap)
