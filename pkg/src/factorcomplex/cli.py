"""Command-line front end.

Exit status: 0 success, 1 a verifier found violations, 2 invalid input,
3 cap exceeded, 4 internal invariant breach (witness printed to stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import field, formats
from .errors import CapExceeded, InvariantError
from .freegroup import build_truncated_CB
from .homology import homology_report, homology_report_mod_p, parse_coefficients
from .poset import check_quillen_fibers, is_order_preserving, order_complex
from .spheres.verify import verify_all


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v

    return conv


def cmd_build_cb_field(a):
    k = field.build_CB(a.n, a.q)
    _emit(formats.dumps(formats.complex_to_json(k, {"model": "CB-field", "n": a.n, "q": a.q})), a.out)


def cmd_build_pd_field(a):
    p = field.build_PD(a.n, a.q)
    _emit(formats.dumps(formats.poset_to_json(p, {"model": "PD-field", "n": a.n, "q": a.q})), a.out)


def cmd_build_fcd_field(a):
    p = field.build_FCD(a.n, a.q)
    _emit(formats.dumps(formats.poset_to_json(p, {"model": "FCD-field", "n": a.n, "q": a.q})), a.out)


def cmd_build_cb_free(a):
    k = build_truncated_CB(a.n, a.L)
    _emit(formats.dumps(formats.complex_to_json(k, {"model": "CB-free", "n": a.n, "L": a.L})), a.out)


def cmd_phi_check(a):
    f = field.phi_map(a.n, a.q)
    preserving = is_order_preserving(f)
    rep = check_quillen_fibers(f, a.coefficients, seed=a.seed)
    body = rep.to_json()
    doc = {
        "format": formats.PHI,
        "meta": {"model": "phi-field", "n": a.n, "q": a.q},
        "coefficients": a.coefficients,
        "order_preserving": preserving,
        "checked": body["checked"],
        "failures": [r for r in body["fibers"] if not r["passed"]],
        "fibers": body["fibers"],
    }
    _emit(formats.dumps(doc), a.out)
    ok = preserving and rep.passed
    print(f"fibers: {body['checked']}, failures: {len(doc['failures'])}", file=sys.stderr)
    return 0 if ok else 1


def _load_complex(path: str):
    doc = formats.load(path)
    fmt = doc["format"]
    if fmt == formats.SC:
        return formats.complex_from_json(doc), doc.get("meta", {})
    if fmt == formats.POSET:
        meta = dict(doc.get("meta", {}))
        meta["model"] = meta.get("model", "poset") + "-order-complex"
        return order_complex(formats.poset_from_json(doc)), meta
    raise formats.FormatError(f"homology needs {formats.SC} or {formats.POSET}, got {fmt!r}")


def cmd_homology(a):
    if not a.inp:
        raise UsageError("homology needs --in")
    k, meta = _load_complex(a.inp)
    p = parse_coefficients(a.coefficients)
    rep = homology_report(k, seed=a.seed) if p is None else homology_report_mod_p(k, p)
    if a.out and a.out.endswith(".csv"):
        _emit(rep.to_csv(), a.out)
    else:
        _emit(formats.dumps(rep.to_json(meta or None)), a.out)


def cmd_sphere_verify(a):
    full = verify_all(a.n, a.max_edges, threads=a.threads)
    summary = full.pop("summary")
    violations = []
    for check, per_rank in full.items():
        if check == "reading_divergences":
            continue
        for rank, rep in per_rank.items():
            violations.extend({"check": check, "n": int(rank), **v} for v in rep["violations"])
    doc = {
        "format": formats.VERIFY,
        "meta": {"model": "spheres", "n": a.n, "max_edges": a.max_edges},
        "checked": summary["checked"],
        "violations": violations,
        "checks": {
            check: {rank: {"checked": r["checked"], "violations": len(r["violations"])} for rank, r in per_rank.items()}
            for check, per_rank in full.items()
            if check != "reading_divergences"
        },
        "reading_divergences": full["reading_divergences"],
    }
    _emit(formats.dumps(doc), a.out)
    print(f"violations: {len(violations)}", file=sys.stderr if not a.out else sys.stdout)
    return 0 if not violations else 1


def cmd_report(a):
    paths = list(a.inputs) + ([a.inp] if a.inp else [])
    docs = [formats.load(p) for p in paths]
    fmt, rows = formats.bundle_rows(docs)
    if a.out and a.out.endswith(".json"):
        _emit(formats.dumps(formats.bundle_json(fmt, rows)), a.out)
    else:
        _emit(formats.bundle_csv(fmt, rows), a.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factorcomplex", description="Build and check factor complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *, n=False, q=False, L=False, edges=False, inp=False):
        sp = sub.add_parser(name)
        if n:
            sp.add_argument("--n", type=_positive("--n"), required=True)
        if q:
            sp.add_argument("--q", type=_positive("--q"), required=True)
        if L:
            sp.add_argument("--L", type=_positive("--L"), required=True)
        if edges:
            sp.add_argument("--max-edges", type=_positive("--max-edges"), required=True)
        if inp:
            sp.add_argument("--in", dest="inp")
        sp.add_argument("--coefficients", default="Q")
        sp.add_argument("--threads", type=_positive("--threads"), default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
        sp.set_defaults(func=func)
        return sp

    add("build-cb-field", cmd_build_cb_field, n=True, q=True)
    add("build-pd-field", cmd_build_pd_field, n=True, q=True)
    add("build-fcd-field", cmd_build_fcd_field, n=True, q=True)
    add("phi-check", cmd_phi_check, n=True, q=True)
    add("build-cb-free", cmd_build_cb_free, n=True, L=True)
    add("homology", cmd_homology, inp=True)
    add("sphere-verify", cmd_sphere_verify, n=True, edges=True)
    rep = add("report", cmd_report, inp=True)
    rep.add_argument("inputs", nargs="*")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        parse_coefficients(args.coefficients)
        return args.func(args) or 0
    except (UsageError, formats.FormatError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(json.dumps({"error": str(exc), "witness": exc.witness}, sort_keys=True, default=str), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
