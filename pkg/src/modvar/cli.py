"""Command line front end: ``modvar analyze`` and ``modvar gen``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from importlib.metadata import PackageNotFoundError, version

from . import generators, quivfile
from .algebra.presentation import Presentation
from .algebra.structure import glueing_decompose, recognize_catalog
from .algebra.table import verify_admissible
from .certificates import (CertificateError, cert_high_degree_relation, cert_local_two_loops,
                           cert_primitive_cycle, verify)
from .linalg import PrimeField, parse_field
from .modules import gorenstein_check
from .quiver import cycle_report
from .varieties import count_points, strata

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_WITNESS = 10

TOP_KEYS = ("presentation", "admissible", "cycles", "glueing", "catalog", "gorenstein",
            "strata", "certificates", "meta")


def _version() -> str:
    try:
        return version("modvar")
    except PackageNotFoundError:
        return "0+unknown"


def parse_dims(text: str | None, n: int) -> list[tuple[int, ...]]:
    if not text:
        return []
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            d = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise ValueError(f"bad dimension vector {chunk!r}") from None
        if len(d) != n or min(d) < 0:
            raise ValueError(f"dimension vector {chunk!r} needs {n} non-negative entries")
        out.append(d)
    return out


def _error(exc: Exception) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


def _section(fn):
    # one failing section must not abort the others
    try:
        return fn()
    except Exception as exc:
        return _error(exc)


def _presentation_json(P: Presentation) -> dict:
    q = P.quiver
    return {
        "name": P.name,
        "field": P.field.name,
        "vertices": list(q.vertices),
        "arrows": [[a.name, a.source, a.target] for a in q.arrows],
        "relations": [quivfile.format_relation(r) for r in P.relations],
        "truncate": P.truncation,
        "nilpotent": P.nilpotency,
        "text": quivfile.format(P),
    }


def _strata_entry(P: Presentation, d, max_enum: int) -> dict:
    entry: dict = {"dims": list(d)}
    entry["strata"] = _section(lambda: [s.to_json() for s in strata(P, d)])
    if isinstance(P.field, PrimeField):
        entry["count"] = _section(lambda: count_points(P, d, P.field.p, max_enum).to_json())
    return entry


def _certificates(P: Presentation, cycles, seed: int) -> list[dict]:
    found = []

    def attempt(make):
        try:
            cert = make()
        except CertificateError as exc:
            return {"constructor": make.__name__, "refused": type(exc).__name__,
                    "message": str(exc)}
        except Exception as exc:
            return {"constructor": make.__name__, **_error(exc)}
        rep = verify(cert, seed)
        return {"constructor": make.__name__, "certificate": cert.to_json(),
                "verification": rep.to_json()}

    if not isinstance(cycles, dict):
        for c in cycles.primitive_nonloop:
            def primitive_cycle(c=c):
                return cert_primitive_cycle(P, c)
            found.append(attempt(primitive_cycle))
    if len(P.quiver.vertices) == 1:
        def local_two_loops():
            return cert_local_two_loops(P, seed)
        found.append(attempt(local_two_loops))
    def high_degree_relation():
        return cert_high_degree_relation(P)
    found.append(attempt(high_degree_relation))
    return found


def analyze(P: Presentation, dims=(), seed: int = 0, max_enum: int = 10**7) -> dict:
    random.seed(seed)
    report: dict = {"presentation": _presentation_json(P)}
    report["admissible"] = _section(lambda: verify_admissible(P).to_json())
    cyc = _section(lambda: cycle_report(P.quiver))
    report["cycles"] = cyc if isinstance(cyc, dict) else cyc.to_json()
    report["glueing"] = _section(lambda: glueing_decompose(P).to_json())
    report["catalog"] = _section(lambda: recognize_catalog(P).to_json())
    report["gorenstein"] = _section(lambda: gorenstein_check(P).to_json())
    report["strata"] = [_strata_entry(P, d, max_enum) for d in dims]
    report["certificates"] = _certificates(P, cyc, seed)
    report["meta"] = {"tool": "modvar", "version": _version(), "seed": seed,
                      "max_enum": max_enum, "dims": [list(d) for d in dims]}
    return report


def witnessed(report: dict) -> bool:
    return any(c.get("verification", {}).get("passed") for c in report["certificates"])


def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    return _text(report)


def _short(section) -> str:
    if isinstance(section, dict) and "error" in section:
        e = section["error"]
        return f"error: {e['type']}: {e['message']}"
    return ""


def _text(r: dict) -> str:
    p = r["presentation"]
    out = [f"algebra     {p['name'] or '(unnamed)'} over {p['field']}",
           f"quiver      {len(p['vertices'])} vertices, {len(p['arrows'])} arrows, "
           f"{len(p['relations'])} relations"]
    a = r["admissible"]
    out.append("admissible  " + (_short(a) or f"{a['admissible']} (levels {a['levels']}, "
                                              f"dim {a['dims'][0]})"))
    c = r["cycles"]
    out.append("cycles      " + (_short(c) or ("pass" if c["passes"] else "fail")))
    g = r["glueing"]
    out.append("minimal     " + (_short(g) or str(g["minimal_for_reduced_generators"])))
    k = r["catalog"]
    out.append("catalog     " + (_short(k) or k["label"]))
    gor = r["gorenstein"]
    out.append("gorenstein  " + (_short(gor) or f"pd D(A) = {gor['pd_D(A_A)']}, "
                                                f"id A = {gor['id_A']}"))
    for entry in r["strata"]:
        out.append(f"strata at d = {tuple(entry['dims'])}")
        rows = entry["strata"]
        if isinstance(rows, dict):
            out.append("  " + _short(rows))
        else:
            out.append(f"  {'partitions':<28}{'orbit':>6}{'fiber':>6}{'dim':>6}")
            for s in rows:
                lab = " ".join("(" + ",".join(map(str, x)) + ")" for x in s["partitions"])
                lab += " *" if s["dense"] else ""
                out.append(f"  {lab:<28}{s['orbit_dim']:>6}{s['fiber_dim']:>6}{s['dim']:>6}")
        if "count" in entry:
            cnt = entry["count"]
            out.append("  points: " + (_short(cnt) or f"{cnt['total']} over F_{cnt['p']}"))
    for cert in r["certificates"]:
        name = cert["constructor"]
        if "certificate" in cert:
            cc, v = cert["certificate"], cert["verification"]
            out.append(f"certificate {cc['kind']} at d = {tuple(cc['dims'])}: "
                       f"{'verified' if v['passed'] else 'FAILED'}")
            for chk in v["checks"]:
                out.append(f"  [{'ok' if chk['passed'] else 'no'}] {chk['name']}")
        elif "refused" in cert:
            out.append(f"certificate {name}: {cert['refused']}")
        else:
            out.append(f"certificate {name}: {_short(cert)}")
    m = r["meta"]
    out.append(f"modvar {m['version']}, seed {m['seed']}")
    return "\n".join(out) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modvar", description="Module varieties of bound quiver algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="analyze a .quiv presentation")
    an.add_argument("file", help="path to a .quiv file, or - for stdin")
    an.add_argument("--dims", default="", help='dimension vectors, e.g. "1,1;2,2"')
    an.add_argument("--field", default=None, help="Q or F<p>; overrides the file")
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--max-enum", type=int, default=10**7)
    an.add_argument("--format", choices=("json", "text"), default="json")

    gen = sub.add_parser("gen", help="print a built-in presentation as .quiv text")
    gsub = gen.add_subparsers(dest="family", required=True)
    b = gsub.add_parser("B")
    b.add_argument("m", type=int)
    b.add_argument("n", type=int)
    tp = gsub.add_parser("truncpoly")
    tp.add_argument("m", type=int)
    lin = gsub.add_parser("linear")
    lin.add_argument("n", type=int)
    lin.add_argument("c", type=int, nargs="+")
    lin.add_argument("--t", type=int, nargs="+", default=None, help="arrow multiplicities")
    lin.add_argument("--relation", action="append", default=[],
                     help="extra relation in .quiv syntax (repeatable)")
    for p in (b, tp, lin):
        p.add_argument("--field", default="Q")
    return ap


def _generate(args) -> Presentation:
    field = parse_field(args.field)
    if args.family == "B":
        return generators.build_B(args.m, args.n, field=field)
    if args.family == "truncpoly":
        return generators.truncpoly(args.m, field=field)
    return generators.linear(args.n, args.c, args.t, args.relation, field=field)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.command == "gen":
        try:
            P = _generate(args)
        except ValueError as exc:
            print(f"modvar: {exc}", file=sys.stderr)
            return EXIT_INPUT
        sys.stdout.write(quivfile.format(P))
        return EXIT_OK
    try:
        P = quivfile.parse(_read(args.file))
        if args.field:
            P = P.with_field(parse_field(args.field))
        dims = parse_dims(args.dims, len(P.quiver.vertices))
    except quivfile.ParseError as exc:
        print(f"modvar: {args.file}:{exc.line}:{exc.col}: {exc.kind}: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"modvar: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = analyze(P, dims, args.seed, args.max_enum)
    sys.stdout.write(emit(report, args.format))
    return EXIT_WITNESS if witnessed(report) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
