"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 verification or genericity
failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .diagram import render_svg, render_text, segment_sizes
from .gcdiagram import segment_point, segment_point_symbolic
from .lift import (
    CertificateFormatError,
    CertifyError,
    certificate_to_json,
    certify,
    certify_fl3,
    dumps,
    load_certificate,
    verify_certificate,
)
from .novikov import from_json as series_from_json, from_text, is_unit, to_text
from .potential import BulkParameter, apply_bulk, build_potential, potential_to_json, render
from .sltsolve import (
    GenericityFailure,
    Seed,
    SeedSearchExhausted,
    find_generic_seed,
    solution_to_json,
    solve_slt,
    verify_slt,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class UsageError(Exception):
    pass


def rational(s: str) -> Fraction:
    s = s.strip()
    if not _RATIONAL.match(s):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {s!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_seed(source: str, n: int, m: int) -> Seed:
    """A JSON seed file, or an inline comma-separated list in seed order."""
    path = Path(source)
    try:
        if path.exists():
            obj = json.loads(path.read_text(encoding="utf-8"))
            if isinstance(obj, list):
                return Seed.from_values(n, m, [rational(str(v)) for v in obj])
            if "d" in obj:
                seed = Seed.from_json({"n": n, "m": m, **obj})
                if (seed.n, seed.m) != (n, m):
                    raise UsageError("seed file was made for a different (n, m)")
                return seed
            raise UsageError("seed file must hold {'d': {...}} or a list of values")
        return Seed.from_values(n, m, [rational(v) for v in source.split(",")])
    except (argparse.ArgumentTypeError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad seed: {exc}") from exc


def _load_bulk(path: str) -> BulkParameter:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        tables = {}
        for kind in ("hor", "ver"):
            tables[kind] = {}
            for idx, v in obj.get(kind, {}).items():
                s = series_from_json(v) if isinstance(v, dict) else from_text(v)
                if not is_unit(s):
                    raise UsageError(f"bulk entry {kind}[{idx}] is not a unit: {to_text(s)}")
                tables[kind][int(idx)] = s
        return BulkParameter(hor=tables["hor"], ver=tables["ver"])
    except UsageError:
        raise
    except (OSError, ValueError, AttributeError, TypeError) as exc:
        raise UsageError(f"bad bulk file: {exc}") from exc


def _default_m(n: int, m: int | None) -> int:
    return 2 if m is None else m


# commands -----------------------------------------------------------------

def cmd_potential(args) -> int:
    n, m = args.n, _default_m(args.n, args.m)
    try:
        point = segment_point_symbolic(n, m) if args.t is None else segment_point(n, m, args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    W = build_potential(point)
    bulk = None
    if args.bulk:
        bulk = _load_bulk(args.bulk)
        W = apply_bulk(W, bulk)
    if args.format == "json":
        obj = potential_to_json(W)
        if bulk is not None:
            obj["bulk"] = {kind: {str(i): to_text(c) for i, c in sorted(table.items())}
                           for kind, table in (("hor", bulk.hor), ("ver", bulk.ver))}
        _emit(dumps(obj), args.out)
    else:
        _emit(render(W) + "\n", args.out)
    return EXIT_OK


def cmd_slt(args) -> int:
    n, m = args.n, _default_m(args.n, args.m)
    if n < 4:
        raise UsageError("the leading-order system needs n >= 4")
    try:
        seed = _load_seed(args.seed, n, m) if args.seed else find_generic_seed(n, m)
    except SeedSearchExhausted as exc:
        print(f"seed search failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        sol = solve_slt(n, m, seed)
    except GenericityFailure as exc:
        f = exc.failure
        obj = {"generic": False, "equation": list(f.equation), "cell": list(f.cell),
               "kind": f.kind, "diagonal": f.diagonal, "seed": seed.to_json()}
        _emit(dumps(obj) if args.format == "json" else f"{exc}\n", args.out)
        return EXIT_FAIL
    report = verify_slt(sol)
    if args.format == "json":
        obj = solution_to_json(sol)
        obj["generic"] = True
        obj["residuals"] = {f"{k[0]}:{k[1]}": str(v) for k, v in report.residuals.items()}
        _emit(dumps(obj), args.out)
    else:
        lines = [f"seed {seed.indices} = {[str(v) for v in seed.values()]}",
                 "generic: yes",
                 f"residuals: {'none' if report.ok else dict(report.residuals)}"]
        lines += [f"y[{i},{j}] = {v}" for (i, j), v in sorted(sol.y_c.items())]
        lines += [f"c^hor_{i},{i + 1} = {v}" for i, v in sorted(sol.c_hor_c.items())]
        lines += [f"c^ver_{j + 1},{j} = {v}" for j, v in sorted(sol.c_ver_c.items())]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def _certify(n: int, m: int | None, t: Fraction, cap: Fraction, seed: Seed | None = None):
    if n == 3:
        return certify_fl3(t, cap)
    return certify(n, _default_m(n, m), t, cap, seed=seed)


def cmd_certify(args) -> int:
    if args.t is None or args.cap is None:
        raise UsageError("certify needs --t and --cap")
    seed = None
    if args.seed:
        if args.n == 3:
            raise UsageError("Fl(3) certificates take no seed")
        seed = _load_seed(args.seed, args.n, _default_m(args.n, args.m))
    try:
        cert = _certify(args.n, args.m, args.t, args.cap, seed)
    except CertifyError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json" or args.out:
        _emit(dumps(certificate_to_json(cert)), args.out)
    if args.format != "json":
        print(cert.report.summary(), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if cert.report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        cert = load_certificate(args.path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc}") from exc
    except CertificateFormatError as exc:
        raise UsageError(str(exc)) from exc
    report = verify_certificate(cert)
    if args.format == "json":
        _emit(dumps(report.to_json()), args.out)
    else:
        _emit(("PASS " if report.ok else "FAIL ") + report.summary() + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def _parse_cycles(specs):
    out = []
    for s in specs or ():
        mo = re.fullmatch(r"(hor|ver):(\d+)", s)
        if not mo:
            raise UsageError(f"cycle must look like hor:4 or ver:3, got {s!r}")
        out.append((mo.group(1), int(mo.group(2))))
    return out if specs else None


def cmd_diagram(args) -> int:
    ms = args.m_list
    try:
        if args.format == "text":
            text = render_text(args.n, ms)
        else:
            text = render_svg(args.n, ms, _parse_cycles(args.cycle))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(text, args.out)
    return EXIT_OK


def _grid_job(job):
    n, m, t, cap = job
    try:
        cert = _certify(n, m, t, cap)
        return job, cert.report.ok, cert.report.summary().splitlines()[0], certificate_to_json(cert)
    except (CertifyError, ValueError) as exc:
        return job, False, str(exc), None


def cmd_grid(args) -> int:
    jobs = []
    for n in sorted(set(args.n_list)):
        ms = sorted(set(args.m_list)) if args.m_list else (segment_sizes(n) if n > 3 else [2])
        for m in ms:
            if n > 3 and not 2 <= m <= n // 2:
                continue
            if n == 3 and m != 2:
                continue
            for t in sorted(set(args.t_list)):
                jobs.append((n, m, t, args.cap))
    if not jobs:
        raise UsageError("the grid is empty")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_grid_job, jobs))
    else:
        results = [_grid_job(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for (n, m, t, _), ok, _, obj in results:
            if obj is not None:
                name = f"cert_n{n}_m{m}_t{t.numerator}-{t.denominator}.json"
                (outdir / name).write_text(dumps(obj), encoding="utf-8")
    rows = [{"n": n, "m": m, "t": str(t), "N": str(cap), "ok": ok, "detail": detail}
            for (n, m, t, cap), ok, detail, _ in results]
    if args.format == "json":
        sys.stdout.write(dumps({"results": rows}))
    else:
        for r in rows:
            print(f"{'PASS' if r['ok'] else 'FAIL'} n={r['n']} m={r['m']} t={r['t']} "
                  f"N={r['N']}  {r['detail']}")
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_FAIL


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gccert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gccert {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, t_required=False):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--m", type=int)
        sp.add_argument("--t", type=rational, required=t_required)
        sp.add_argument("--out")

    sp = sub.add_parser("potential", help="print the potential along a segment")
    common(sp)
    sp.add_argument("--bulk", help="JSON file with 'hor'/'ver' maps of unit series")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("slt", help="solve the leading-order system exactly")
    common(sp)
    sp.add_argument("--seed", help="seed JSON file or comma-separated p/q values")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_slt)

    sp = sub.add_parser("certify", help="build and check a critical-point certificate")
    common(sp)
    sp.add_argument("--cap", type=rational)
    sp.add_argument("--seed", help="seed JSON file or comma-separated p/q values")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify", help="re-check a certificate file")
    sp.add_argument("path")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("diagram", help="draw the ladder diagram")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, action="append", dest="m_list",
                    help="segment size to draw (repeatable; default all)")
    sp.add_argument("--cycle", action="append", help="facet union to mark, e.g. hor:4")
    sp.add_argument("--format", choices=("svg", "text"), default="svg")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("grid", help="certify every combination of the given parameters")
    sp.add_argument("--n", type=int, nargs="+", dest="n_list", required=True)
    sp.add_argument("--m", type=int, nargs="+", dest="m_list")
    sp.add_argument("--t", type=rational, nargs="+", dest="t_list", required=True)
    sp.add_argument("--cap", type=rational, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="directory for the certificate files")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_grid)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
