"""T-adic lifting of split leading term solutions to Novikov-valued critical points.

The lift runs in the z-coordinates of :mod:`gccert.sltsolve`, where every
gradient equation is free of bulk parameters and the frozen diagonal carries
unknown values ``D[s]``.  Each equation is solved exactly for one variable
(the isolated cell), diagonal by diagonal, over truncated Novikov series.
The finished point and bulk are checked by :func:`verify_certificate`, which
evaluates gradients through :mod:`gccert.potential` and shares no equation
code with the constructor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import __version__
from .gcdiagram import ceil_half, gamma, in_box, segment_point
from .novikov import (
    NovikovSeries,
    constant,
    from_json as series_from_json,
    invert_unit,
    is_unit,
    monomial,
    sqrt_unit,
    to_json as series_to_json,
    to_text,
    truncate,
    valuation,
)
from .potential import BulkParameter, apply_bulk, build_potential, gradient_offsets, log_gradient, evaluate
from .sltsolve import (
    Seed,
    SltSolution,
    _target,
    find_generic_seed,
    solve_slt,
    symmetric_inner_solution,
    verify_slt,
)

Index = tuple[int, int]

__all__ = [
    "Certificate",
    "CertificateFormatError",
    "CheckEntry",
    "CertifyError",
    "InnerLift",
    "LiftError",
    "VerificationReport",
    "certificate_from_json",
    "certificate_to_json",
    "certify",
    "certify_fl3",
    "dumps",
    "lift_inside",
    "lift_outside",
    "load_certificate",
    "save_certificate",
    "verify_certificate",
]


class LiftError(ArithmeticError):
    """An isolation step met a non-unit coefficient or ran out of precision."""


class CertifyError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


class CertificateFormatError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _q(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _key(ij: Index) -> str:
    return f"{ij[0]},{ij[1]}"


def _unkey(s: str) -> Index:
    a, b = s.split(",")
    return int(a), int(b)


# the constructor's equations ----------------------------------------------

class _Equations:
    """Gradient equations of W at a segment point, in z-coordinates.

    ``z`` holds series for cells of Gamma(n) and for the frozen diagonal.
    """

    def __init__(self, n: int, m: int, t: Fraction, cap: Fraction):
        self.n, self.m, self.t, self.cap = n, m, t, cap
        self.point = segment_point(n, m, t)
        self.z: dict[Index, NovikovSeries] = {}

    def u(self, ij: Index) -> Fraction:
        return self.point.value(*ij)

    def terms(self, a: int, b: int):
        """``(sign, numerator cell, denominator cell, T-exponent)`` of y[a,b] d/dy[a,b] W."""
        out = [(-1, (a, b + 1), (a, b), self.u((a, b + 1)) - self.u((a, b))),
               (1, (a, b), (a + 1, b), self.u((a, b)) - self.u((a + 1, b)))]
        if a > 1:
            out.append((-1, (a - 1, b), (a, b), self.u((a - 1, b)) - self.u((a, b))))
        if b > 1:
            out.append((1, (a, b), (a, b - 1), self.u((a, b)) - self.u((a, b - 1))))
        return out

    def value(self, a: int, b: int) -> NovikovSeries:
        z = self.z
        total = None
        for sign, num, den, e in self.terms(a, b):
            v = (z[num] * invert_unit(z[den])).shift(e).scale(sign)
            total = v if total is None else total + v
        return total

    def isolate(self, eq: Index, target: Index) -> NovikovSeries:
        """Solve the equation at ``eq`` exactly for the cell ``target``."""
        z = self.z
        a, b = eq
        rest = None
        hit = None
        for sign, num, den, e in self.terms(a, b):
            if target in (num, den):
                hit = (sign, num, den, e)
                continue
            v = (z[num] * invert_unit(z[den])).shift(e).scale(sign)
            rest = v if rest is None else rest + v
        if hit is None:
            raise ValueError(f"cell {target} does not occur in the equation at {eq}")
        sign, num, den, e = hit
        # sign * ratio * T^e + rest = 0
        ratio = rest.scale(-sign).shift(-e)
        if ratio.cap <= 0:
            raise LiftError(f"equation {eq}: precision exhausted while isolating {target}")
        if valuation(ratio) != 0:
            lead = "zero" if ratio.is_zero() else f"valuation {valuation(ratio)}"
            raise LiftError(f"equation {eq}: isolated coefficient for {target} is not a unit ({lead})")
        if target == num:
            return ratio * z[den]
        return z[num] * invert_unit(ratio)


def _const(v, cap) -> NovikovSeries:
    return constant(_frac(v), cap)


# inside the box -----------------------------------------------------------

@dataclass(frozen=True)
class InnerLift:
    """Series on the box and its boundary cells ``(l, m+1)``, ``(m+1, l)``.

    Values are in z-coordinates; for ``n = 2m`` the boundary cells on the
    frozen diagonal hold ``D[m]`` and ``D[m+1]``.  ``a[j-1]`` is the
    multiplier ``a_j`` of the decomposition of the ``(j, m)`` equation, or
    None when it is not a unit (always for ``j = 1``).
    """

    n: int
    m: int
    t: Fraction
    z: Mapping[Index, NovikovSeries]
    a: tuple

    @property
    def cap(self) -> Fraction:
        return min(v.cap for v in self.z.values())


def _check_t(t: Fraction) -> None:
    if not 0 < t < 1:
        raise ValueError(f"t must lie strictly between 0 and 1, got {t}")


def lift_inside(n: int, m: int, t, N, d: Mapping[Index, Fraction],
                _eqs: _Equations | None = None) -> InnerLift:
    """Solve all box equations exactly modulo ``T^cap`` with ``y[j, m+1] = d[j, m+1]``.

    ``d`` holds ``(m, m)`` and the cells ``(j, m+1)`` inside Gamma(n).  Cells
    with ``i + j <= m + 1`` keep the symmetric inner values; diagonal
    ``m+1+j`` is then filled top to bottom, the last step at ``(m+1, j)``
    losing ``(m-j+1)t`` of precision.
    """
    t, N = _frac(t), _frac(N)
    _check_t(t)
    eqs = _eqs or _Equations(n, m, t, N)
    cap = eqs.cap
    z = eqs.z
    inner = symmetric_inner_solution(m, d[(m, m)])
    for (i, j), v in inner.items():
        if i + j <= m + 1:
            z[(i, j)] = _const(v, cap)
    for j in range(1, m + 1):
        if j + m + 1 <= n:
            z[(j, m + 1)] = _const(d[(j, m + 1)], cap)
    case3 = n == 2 * m
    if case3:
        z[(m + 1, m)] = _const(1, cap)
    for j in range(1, m + 1):
        p = m + 1 + j
        if case3 and j == m:
            z[(m, m + 1)] = eqs.isolate((m, m), (m, m + 1))
            continue
        for r in range(j + 1, m + 2):
            cell = (r, p - r)
            z[cell] = eqs.isolate((r - 1, p - r), cell)
    a = []
    for j in range(1, m + 1):
        if j == 1:
            a.append(None)
            continue
        delta = (m - j + 1) * t
        den = z[(j - 1, m)] + z[(j, m + 1)].shift(delta)
        a.append(z[(j, m + 1)] * invert_unit(den) if is_unit(den) else None)
    keep = {ij: v for ij, v in z.items() if in_box(ij, m) or m + 1 in ij}
    return InnerLift(n=n, m=m, t=t, z=keep, a=tuple(a))


# outside the box ----------------------------------------------------------

def _outside_runs(n: int, m: int, p: int):
    """``(equation, cell)`` steps filling diagonal ``p`` outside the box."""
    if p <= 2 * m + 1:
        s = p - m - 1
        r, c = s, m + 1
        ups = [((r - i, c + i - 1), (r - i, c + i)) for i in range(1, r)]
        r, c = m + 1, s
        downs = [((r + i - 1, c - i), (r + i, c - i)) for i in range(1, c)]
    else:
        q = p // 2
        r, c = q, p - q
        ups = [((r - i, c + i - 1), (r - i, c + i)) for i in range(1, r)]
        downs = [((r + i - 1, c - i), (r + i, c - i)) for i in range(1, c)]
    return ups + downs


def _frozen_steps(n: int, m: int):
    k = ceil_half(n)
    fixed = [(k, k)] if n % 2 else ([(k, k + 1)] if m < k else [(k + 1, k)])
    if n % 2 or m < k:
        lows = range(k, n)
    else:
        lows = range(k + 1, n)
    order = [(i, n - i) for i in range(k - 1, 0, -1)] + [(i, n - i) for i in lows]
    return fixed, [(eq, _target(eq)) for eq in order]


def lift_outside(n: int, m: int, t, N, slt: SltSolution, inner: InnerLift,
                 _eqs: _Equations | None = None):
    """Propagate the remaining cells and the frozen diagonal; return ``(bulk, y)``.

    Seed cells off the box keep their exact rational values.  The returned
    series carry whatever precision the working cap allowed; callers
    truncate.
    """
    t, N = _frac(t), _frac(N)
    eqs = _eqs or _Equations(n, m, t, N)
    cap = eqs.cap
    z = eqs.z
    z.update(inner.z)
    for ij, v in slt.seed.d.items():
        if ij != (m, m):
            z[ij] = _const(v, cap)
    for p in range(m + 2, n + 1):
        for eq, cell in _outside_runs(n, m, p):
            z[cell] = eqs.isolate(eq, cell)
    fixed, steps = _frozen_steps(n, m)
    for ij in fixed:
        z.setdefault(ij, _const(1, cap))
    for eq, cell in steps:
        z[cell] = eqs.isolate(eq, cell)

    k = ceil_half(n)
    one = _const(1, cap)
    C = {k: one}
    R = {k: one}
    for j in range(k + 1, n + 1):
        C[j] = z[(n + 1 - j, j)]
    for i in range(k + 1, n + 1):
        R[i] = invert_unit(z[(i, n + 1 - i)])
    c_ver = {j: C[j + 1] * invert_unit(C[j]) for j in range(k, n)}
    c_hor = {i: R[i + 1] * invert_unit(R[i]) for i in range(k, n)}
    y = {}
    for a, b in gamma(n):
        v = z[(a, b)]
        if a > k:
            v = v * R[a]
        if b > k:
            v = v * invert_unit(C[b])
        y[(a, b)] = v
    return BulkParameter(hor=c_hor, ver=c_ver), y


# certificates -------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    n: int
    m: int
    t: Fraction
    N: Fraction
    bulk: BulkParameter
    point: Mapping[Index, NovikovSeries]
    slt_leading: Mapping[str, Mapping]  # "y", "c_hor", "c_ver"
    seed: Seed | None = None
    notes: tuple[str, ...] = ()
    report: "VerificationReport | None" = field(default=None, compare=False)


@dataclass(frozen=True)
class CheckEntry:
    check: str  # "unit", "gradient" or "leading"
    key: str
    ok: bool
    detail: str = ""
    n_check: Fraction | None = None

    def to_json(self) -> dict:
        out = {"check": self.check, "key": self.key, "ok": self.ok, "detail": self.detail}
        if self.n_check is not None:
            out["n_check"] = _q(self.n_check)
        return out


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[CheckEntry, ...]

    @property
    def ok(self) -> bool:
        return bool(self.entries) and all(e.ok for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.ok]

    @property
    def n_check(self) -> Fraction | None:
        orders = [e.n_check for e in self.entries if e.n_check is not None]
        return min(orders) if orders else None

    def to_json(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_json() for e in self.entries]}

    def summary(self) -> str:
        bad = self.failures()
        head = f"{len(self.entries) - len(bad)}/{len(self.entries)} checks passed"
        return head if not bad else head + "\n" + "\n".join(
            f"  FAIL {e.check} {e.key}: {e.detail}" for e in bad)


def _bulk_key(kind: str, idx: int) -> str:
    return f"c^hor_{idx},{idx + 1}" if kind == "hor" else f"c^ver_{idx + 1},{idx}"


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Check units, vanishing of every normalized gradient, and leading terms.

    The gradient at ``(i, j)`` is required to vanish modulo
    ``T^(N - largest exponent offset of that gradient)``.
    """
    entries = []
    n, m = cert.n, cert.m
    for ij in gamma(n):
        v = cert.point.get(ij)
        if v is None:
            entries.append(CheckEntry("unit", f"y_{_key(ij)}", False, "missing"))
            continue
        ok = is_unit(v)
        entries.append(CheckEntry("unit", f"y_{_key(ij)}", ok,
                                  "" if ok else f"valuation {valuation(v)}"))
    for (kind, idx), c in cert.bulk.items():
        ok = is_unit(c)
        entries.append(CheckEntry("unit", _bulk_key(kind, idx), ok,
                                  "" if ok else f"valuation {valuation(c)}"))

    units_ok = all(e.ok for e in entries)
    try:
        Wb = apply_bulk(build_potential(segment_point(n, m, cert.t))).at(cert.t)
    except ValueError as exc:
        Wb = None
        entries.append(CheckEntry("gradient", "*", False, str(exc)))
    if Wb is not None:
        for ij in gamma(n):
            g = log_gradient(Wb, ij)
            nu, offset = gradient_offsets(g)
            order = cert.N - offset
            key = f"f_{_key(ij)}"
            if not units_ok:
                entries.append(CheckEntry("gradient", key, False, "skipped: non-unit input", order))
                continue
            try:
                r = evaluate(g, cert.point, cert.bulk, shift=nu)
            except (ArithmeticError, KeyError) as exc:
                entries.append(CheckEntry("gradient", key, False, f"undefined: {exc}", order))
                continue
            if r.cap < order:
                entries.append(CheckEntry("gradient", key, False,
                                          f"known only mod T^({_q(r.cap)})", order))
                continue
            res = truncate(r, order)
            ok = res.is_zero()
            entries.append(CheckEntry("gradient", key, ok,
                                      f"0 mod T^({_q(order)})" if ok else f"residual {to_text(res)}",
                                      order))

    lead = cert.slt_leading
    for ij, want in sorted(lead.get("y", {}).items()):
        v = cert.point.get(ij)
        got = v.constant_term() if v is not None else None
        entries.append(CheckEntry("leading", f"y_{_key(ij)}", got == want,
                                  f"expected {_q(want)}, got {got}"))
    for kind in ("hor", "ver"):
        table = cert.bulk.hor if kind == "hor" else cert.bulk.ver
        for idx, want in sorted(lead.get(f"c_{kind}", {}).items()):
            c = table.get(idx)
            got = c.constant_term() if c is not None else Fraction(1)
            entries.append(CheckEntry("leading", _bulk_key(kind, idx), got == want,
                                      f"expected {_q(want)}, got {got}"))
    return VerificationReport(tuple(entries))


def _finish(cert: Certificate) -> Certificate:
    report = verify_certificate(cert)
    return Certificate(**{**cert.__dict__, "report": report})


def _truncate_all(bulk: BulkParameter, y: Mapping, N: Fraction):
    for v in list(y.values()) + [c for _, c in bulk.items()]:
        if v.cap < N:
            return None
    return (BulkParameter(hor={i: truncate(c, N) for i, c in bulk.hor.items()},
                          ver={j: truncate(c, N) for j, c in bulk.ver.items()}),
            {ij: truncate(v, N) for ij, v in y.items()})


def certify(n: int, m: int, t, N, seed: Seed | None = None, budget: int | None = None) -> Certificate:
    """Seed search, exact leading-order solve, lift and verification in one go.

    Raises :class:`CertifyError` tagged with the failing stage.
    """
    t, N = _frac(t), _frac(N)
    if n == 3:
        raise ValueError("n = 3 uses a dedicated construction; call certify_fl3(t, N)")
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"n must be an integer >= 4, got {n!r}")
    if not 2 <= m <= n // 2:
        raise ValueError(f"m={m} out of range 2..{n // 2} for n={n}")
    notes = []
    if n == 2 * m:
        notes.append("n = 2m: the box touches the frozen diagonal; c^hor_{m,m+1} is pinned to 1")
    _check_t(t)
    if N <= 0:
        raise ValueError("N must be positive")

    try:
        if seed is None:
            seed = find_generic_seed(n, m) if budget is None else find_generic_seed(n, m, budget)
    except Exception as exc:
        raise CertifyError("seed", exc) from exc
    try:
        slt = solve_slt(n, m, seed)
        rep = verify_slt(slt)
        if not rep.ok:
            raise ArithmeticError(f"leading-order residuals {dict(rep.residuals)}")
    except Exception as exc:
        raise CertifyError("slt", exc) from exc

    work = N + m * t
    for _ in range(4):
        eqs = _Equations(n, m, t, work)
        try:
            inner = lift_inside(n, m, t, work, seed.d, _eqs=eqs)
        except Exception as exc:
            raise CertifyError("lift_inside", exc) from exc
        try:
            bulk, y = lift_outside(n, m, t, work, slt, inner, _eqs=eqs)
        except Exception as exc:
            raise CertifyError("lift_outside", exc) from exc
        done = _truncate_all(bulk, y, N)
        if done is not None:
            break
        work += m * t
    else:
        raise CertifyError("lift_outside", LiftError("could not reach the requested cap"))
    bulk, y = done
    leading = {"y": dict(slt.y_c), "c_hor": dict(slt.c_hor_c), "c_ver": dict(slt.c_ver_c)}
    cert = Certificate(n=n, m=m, t=t, N=N, bulk=bulk, point=y, slt_leading=leading,
                       seed=seed, notes=tuple(notes))
    cert = _finish(cert)
    if not cert.report.ok:
        raise CertifyError("verify", AssertionError(cert.report.summary()))
    return cert


def certify_fl3(t, N) -> Certificate:
    """Certificate for the fibers of Fl(3) over the segment through the center.

    Start from ``c^ver_{2,1} = 1 + T^{2t}`` and ``y[1,2] = y[2,1] = 1``; the
    (1,1) equation forces ``y[1,1]^2 = 1 + T^{2t}`` and the (1,2), (2,1)
    equations are then solved for the two bulk entries on the frozen
    diagonal.
    """
    t, N = _frac(t), _frac(N)
    _check_t(t)
    if N <= 0:
        raise ValueError("N must be positive")
    work = N + 2 * t
    one = constant(1, work)
    c21 = one + monomial(1, 2 * t, work)
    y11 = sqrt_unit(c21, -1)
    y12 = y21 = one
    # (1,2): (y12 + c21 y12/y11) T^(1-t) - c32/y12 T^(1+t) = 0
    c32 = (y12 * y12 * (one + c21 * invert_unit(y11))).shift(-2 * t)
    # (2,1): -(c21 + y11)/y21 T^(1-t) + c23 y21 T^(1+t) = 0
    c23 = ((c21 + y11) * invert_unit(y21 * y21)).shift(-2 * t)
    point = {(1, 1): truncate(y11, N), (1, 2): truncate(y12, N), (2, 1): truncate(y21, N)}
    bulk = BulkParameter(hor={2: truncate(c23, N)},
                         ver={1: truncate(c21, N), 2: truncate(c32, N)})
    leading = {
        "y": {(1, 1): Fraction(-1), (1, 2): Fraction(1), (2, 1): Fraction(1)},
        "c_hor": {2: Fraction(1, 2)},
        "c_ver": {1: Fraction(1), 2: Fraction(-1, 2)},
    }
    cert = Certificate(n=3, m=2, t=t, N=N, bulk=bulk, point=point, slt_leading=leading,
                       notes=("bulk supported on the first vertical cycle as well",))
    return _finish(cert)


# serialization ------------------------------------------------------------

def certificate_to_json(cert: Certificate) -> dict:
    report = cert.report or verify_certificate(cert)
    lead = cert.slt_leading
    return {
        "format": "gccert-certificate",
        "version": __version__,
        "n": cert.n,
        "m": cert.m,
        "t": _q(cert.t),
        "N": _q(cert.N),
        "n_check": _q(report.n_check) if report.n_check is not None else None,
        "bulk": {
            "hor": {str(i): series_to_json(c) for i, c in sorted(cert.bulk.hor.items())},
            "ver": {str(j): series_to_json(c) for j, c in sorted(cert.bulk.ver.items())},
        },
        "point": {_key(ij): series_to_json(v) for ij, v in sorted(cert.point.items())},
        "slt_leading": {
            "y": {_key(ij): _q(v) for ij, v in sorted(lead.get("y", {}).items())},
            "c_hor": {str(i): _q(v) for i, v in sorted(lead.get("c_hor", {}).items())},
            "c_ver": {str(j): _q(v) for j, v in sorted(lead.get("c_ver", {}).items())},
        },
        "seed": cert.seed.to_json() if cert.seed is not None else None,
        "notes": list(cert.notes),
        "report": report.to_json(),
    }


def certificate_from_json(obj) -> Certificate:
    """Parse a certificate; any structural problem raises CertificateFormatError.

    The stored report is ignored: verification always recomputes it.
    """
    try:
        if obj.get("format") != "gccert-certificate":
            raise ValueError("not a certificate")
        n, m = obj["n"], obj["m"]
        if not isinstance(n, int) or not isinstance(m, int):
            raise ValueError("n and m must be integers")
        lead = obj["slt_leading"]
        return Certificate(
            n=n, m=m, t=Fraction(obj["t"]), N=Fraction(obj["N"]),
            bulk=BulkParameter(
                hor={int(i): series_from_json(c) for i, c in obj["bulk"]["hor"].items()},
                ver={int(j): series_from_json(c) for j, c in obj["bulk"]["ver"].items()}),
            point={_unkey(s): series_from_json(v) for s, v in obj["point"].items()},
            slt_leading={
                "y": {_unkey(s): Fraction(v) for s, v in lead["y"].items()},
                "c_hor": {int(i): Fraction(v) for i, v in lead["c_hor"].items()},
                "c_ver": {int(j): Fraction(v) for j, v in lead["c_ver"].items()},
            },
            seed=Seed.from_json(obj["seed"]) if obj.get("seed") else None,
            notes=tuple(obj.get("notes", ())),
        )
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, ZeroDivisionError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save_certificate(cert: Certificate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(certificate_to_json(cert)))


def load_certificate(path) -> Certificate:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from exc
    return certificate_from_json(obj)
