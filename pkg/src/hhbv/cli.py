"""Command-line front end: ``hhbv {hh,model,verify,compare,reduce}``.

Exit codes: 0 success, 1 a negative answer (violation, non-isomorphism,
mismatch), 2 input/schema errors or a window that is too small, 3 a
non-conclusive comparison.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import algebra as alg
from .bv import (
    bracket_from_delta,
    load_table,
    reduce_mod_p,
    table_to_json,
    verify_bv,
    verify_gerstenhaber,
)
from .errors import HHBVError, SchemaError, WindowNonConclusive, WindowTooSmall
from .hochschild import change_ring, delta_on_HH, exterior_sphere_renaming, hh_via_dual
from .iso import bv_isomorphic, gerstenhaber_isomorphic
from .models import SphereModelConfig
from .rings import Ring


def _write(doc, path, text: str | None = None):
    body = json.dumps(doc, indent=1) + "\n" if text is None else text
    if path in (None, "-"):
        sys.stdout.write(body)
    else:
        with open(path, "w") as fh:
            fh.write(body)


def _load_algebra(spec: str, ring: Ring) -> alg.GradedAlgebra:
    m = re.fullmatch(r"sphere:(\d+)", spec)
    if m:
        return alg.make_exterior_sphere(int(m.group(1)), ring)
    return alg.load_algebra(spec)


def _matrix_json(M):
    return [[str(c) for c in row] for row in M.entries]


def _table_text(t) -> str:
    lines = [f"ring {t.ring}  window [{t.window[0]}, {t.window[1]}]"]
    width = max((len(m.name) for m in t.monomials), default=1)
    for i, m in enumerate(t.monomials):
        order = f"  (order {m.order})" if m.order else ""
        delta = t.show(dict(t.delta[i])) if i in t.delta else "?"
        lines.append(f"  {m.name:<{width}}  deg {m.degree:>4}  Delta = {delta}{order}")
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------------------


def cmd_hh(args) -> int:
    ring = Ring.parse(args.ring)
    A = change_ring(_load_algebra(args.algebra, ring), ring)
    max_deg = args.max_degree
    if max_deg is None:
        max_deg = 2 * max(abs(A.degree(i)) for i in range(A.dim))
    try:
        res = hh_via_dual(A, ring, args.max_word, degrees=list(range(0, max_deg + 1)))
    except WindowTooSmall as exc:
        print(f"error: window too small; uncertified degrees: {sorted(-m for m in exc.degrees)}", file=sys.stderr)
        return 2
    doc = {
        "ring": str(ring),
        "max_word": args.max_word,
        "groups": [
            {
                "degree": k,
                "free_rank": str(g.free_rank),
                "torsion": [str(t) for t in g.torsion],
                "orders": [str(o) for o in g.orders],
            }
            for k, g in sorted(res.groups.items())
        ],
        "delta": [{"degree": k, "matrix": _matrix_json(M)} for k, M in sorted(res.delta.items())],
    }
    table = None
    if ring.characteristic == 2 and A.dualizing is not None and args.max_word >= 1:
        try:
            table = delta_on_HH(A, args.max_word - 1)
        except WindowTooSmall:
            table = None
        if table is not None and args.algebra.startswith("sphere:"):
            table = table.renamed(exterior_sphere_renaming(table))
        if table is not None:
            doc["bv_table"] = table_to_json(table)
    if args.format == "text":
        lines = [f"HH^*(A; A^dual) over {ring}, words of length <= {args.max_word}"]
        for k, g in sorted(res.groups.items()):
            group = f"{ring}^{g.dimension}" if ring.is_field else str(g.group)
            lines.append(f"  degree {k:>3}: {group}")
        for k, M in sorted(res.delta.items()):
            if M.nrows and M.ncols:
                lines.append(f"  Delta {k} -> {k + 1}: {M.tolist()}")
        text = "\n".join(lines) + "\n"
        if table is not None:
            text += "\nBV table on HH^*(A; A):\n" + _table_text(table)
        _write(None, args.output, text)
    else:
        _write(doc, args.output)
    return 0


def cmd_model(args) -> int:
    cfg = SphereModelConfig(
        which=args.which,
        n=args.n,
        K=args.K,
        ring=Ring.parse(args.ring),
        eps=args.eps,
        lam=args.lam,
        eps0=args.eps0,
    )
    t = cfg.build()
    if args.format == "text":
        _write(None, args.output, _table_text(t))
    else:
        _write(table_to_json(t), args.output)
    return 0


def cmd_verify(args) -> int:
    t = load_table(args.table)
    bv = verify_bv(t)
    lines = [f"bv: {bv.summary()}"]
    ok = bv.passed
    if ok:
        g = verify_gerstenhaber(t, bracket_from_delta(t))
        lines.append(f"gerstenhaber: {g.summary()}")
        ok = g.passed
    print("\n".join(lines))
    return 0 if ok else 1


def cmd_compare(args) -> int:
    t1, t2 = load_table(args.first), load_table(args.second)
    decide = bv_isomorphic if args.mode == "bv" else gerstenhaber_isomorphic
    try:
        res = decide(t1, t2)
    except WindowNonConclusive as exc:
        print(f"non-conclusive: {exc}")
        ref = getattr(exc, "refutation", None)
        if args.output and ref is not None:
            _write({"isomorphic": None, "conclusive": False, **ref.to_json()}, args.output)
        return 3
    if res.isomorphic:
        print(f"isomorphic ({args.mode})")
    else:
        print(f"not isomorphic ({args.mode}): {res.refutation.reason}")
        for w, f in res.refutation.candidates:
            print(f"  candidate fails {f.check} at {', '.join(f.monomials)}")
    if args.output:
        _write(res.to_json(), args.output)
    return 0 if res.isomorphic else 1


def cmd_reduce(args) -> int:
    t = load_table(args.table)
    other = load_table(args.compare) if args.compare else None
    reduced, report = reduce_mod_p(t, args.p, other)
    if args.output:
        _write(table_to_json(reduced), args.output)
    if report is None:
        if not args.output:
            _write(table_to_json(reduced), None)
        return 0
    for r in report.rows:
        print(
            f"degree {r.degree:>4}: dim {r.dim_tensor}+{r.dim_tor} vs {r.dim_target}"
            f"  Delta rank {r.rank_tensor} vs {r.rank_target}"
        )
    print("match" if report.passed else "mismatch")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhbv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    hh = sub.add_parser("hh", help="Hochschild (co)homology and Delta of an algebra")
    hh.add_argument("--algebra", required=True, help="sphere:n or a JSON algebra file")
    hh.add_argument("--ring", default="Z")
    hh.add_argument("--max-word", type=int, default=8)
    hh.add_argument("--max-degree", type=int, default=None)
    hh.add_argument("-o", "--output")
    hh.add_argument("--format", choices=["json", "text"], default="json")
    hh.set_defaults(func=cmd_hh)

    mo = sub.add_parser("model", help="emit a closed-form sphere table")
    mo.add_argument("which", choices=["circle", "odd", "even-z", "s2-f2", "hh-f2"])
    mo.add_argument("--n", type=int, default=2, help="sphere dimension (or d for hh-f2)")
    mo.add_argument("--K", type=int, default=6, help="maximal exponent (I for the circle)")
    mo.add_argument("--ring", default="Z", help="ring for the circle and odd sphere models")
    mo.add_argument("--eps", type=int, default=1)
    mo.add_argument("--lambda", dest="lam", type=int, default=0)
    mo.add_argument("--eps0", type=int, default=None)
    mo.add_argument("-o", "--output")
    mo.add_argument("--format", choices=["json", "text"], default="json")
    mo.set_defaults(func=cmd_model)

    ve = sub.add_parser("verify", help="check BV and Gerstenhaber axioms of a table")
    ve.add_argument("table")
    ve.set_defaults(func=cmd_verify)

    co = sub.add_parser("compare", help="decide BV or Gerstenhaber isomorphism")
    co.add_argument("first")
    co.add_argument("second")
    co.add_argument("--mode", choices=["bv", "gerstenhaber"], default="bv")
    co.add_argument("-o", "--output")
    co.set_defaults(func=cmd_compare)

    re_ = sub.add_parser("reduce", help="reduce an integral table mod p (p = 0 for Q)")
    re_.add_argument("table")
    re_.add_argument("--p", type=int, required=True)
    re_.add_argument("--compare")
    re_.add_argument("-o", "--output")
    re_.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HHBVError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
