"""Command line interface.

Three subcommands: solve a catalog system, tabulate the coefficients of
the Hopf link solution, and run named verification checks.  Results go
to stdout or --out; progress and timing go to stderr so output files are
byte-reproducible for identical configurations.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 the
computation raised, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .ring import Scalar, qmono
from .skein import (BasisLabel, SkeinElement, TensorElement, Truncation,
                    apply_P, element_to_json, frame_t, label_boxes,
                    swap_branes)
from .partition import partitions_upto
from .operators import (CATALOG_NAMES, catalog, pants_identity_suite, solve,
                        star_identity_suite, verify_annihilation)
from . import curves
from . import u1

EX_USAGE = 64

CHECK_NAMES = ("annihilation", "commutator", "quiver-vs-solver",
               "pants-vs-quiver", "thm18", "star-identities",
               "pants-identities", "framing", "u1", "classical", "annulus",
               "twisted-annulus", "unknot-recap", "integrality",
               "swap-symmetry")


def _parse_framing(text):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) == 1:
        return int(parts[0])
    return tuple(int(p) for p in parts)


def _progress(stage):
    print(f"solving bidegree {stage}", file=sys.stderr, flush=True)


def closed_form_for(name: str, n: int, a_cap, framing=None):
    """The element a catalog system annihilates, built to n boxes."""
    trunc = Truncation(n)
    if name in ("ll", "ll-framed"):
        return solve(catalog(name, framing), n, progress=_progress)
    if name in ("lm", "dl", "dd"):
        return curves.hopf_closed_form(name, trunc, a_cap=a_cap)
    if name == "l0":
        return TensorElement.unit()
    if name in ("unknot-l", "unknot-l-recap"):
        return curves.unknot_Z("conormal", 0, trunc)
    if name == "unknot-l-framed":
        f = 0 if framing is None else int(framing)
        return curves.unknot_Z("conormal", f, trunc)
    if name == "unknot-m":
        return curves.unknot_Z("complement", 0, trunc)
    if name == "unknot-d":
        return curves.unknot_Z("middle", 0, trunc, a_cap=a_cap)
    if name in ("toric", "toric-framed"):
        f = 0 if framing is None or name == "toric" else int(framing)
        return curves.disk_series(f, n)
    if name == "annulus-id":
        return curves.generate(curves.CurveSpec("annulus", (0, 0)), trunc)
    if name == "twisted-annulus-B":
        return curves.generate(curves.CurveSpec("twisted_annulus", (0, 0)),
                               trunc)
    raise ValueError(f"no closed form for {name!r}")


def _needs_cap(name: str) -> bool:
    return name in ("dl", "dd", "unknot-d")


# ---------------------------------------------------------------------------
# verification checks
# ---------------------------------------------------------------------------

def check_annihilation(filling, n, a_cap, framing=None):
    cap = a_cap if _needs_cap(filling) else None
    x = closed_form_for(filling, n, cap, framing)
    sysname = filling
    r = verify_annihilation(catalog(sysname, framing), x, n, a_cap=cap)
    return {"ok": r["ok"], "max_degree": r["max_verified_bidegree"],
            "detail": r["first_failure"]}


def check_commutator(n, _cap):
    """[P_{i,j}, P_{k,l}] = (q^{il-kj} - q^{kj-il}) P_{i+k,j+l} on labels."""
    rng = range(-2, 3)
    labels = [BasisLabel(lam, mub)
              for tot in range(n + 1)
              for s1 in range(tot + 1)
              for lam in partitions_upto(s1) if sum(lam) == s1
              for mub in partitions_upto(tot - s1) if sum(mub) == tot - s1]
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    d = i * l - k * j
                    fac = Scalar.from_q(qmono(1, d) - qmono(1, -d))
                    for lab in labels:
                        x = SkeinElement.basis(lab)
                        lhs = apply_P(i, j, apply_P(k, l, x, "a1"), "a1") \
                            - apply_P(k, l, apply_P(i, j, x, "a1"), "a1")
                        rhs = apply_P(i + k, j + l, x, "a1").scale(fac)
                        if lhs != rhs:
                            return {"ok": False, "max_degree": n,
                                    "detail": {"ij": (i, j), "kl": (k, l),
                                               "label": str(lab)}}
    return {"ok": True, "max_degree": n, "detail": None}


def check_quiver_vs_solver(n, _cap):
    z = solve(catalog("ll"), n, progress=_progress)
    q = curves.hopf_closed_form("ll_quiver", Truncation(n))
    return {"ok": z == q, "max_degree": n, "detail": None}


def check_pants_vs_quiver(n, _cap):
    p = curves.hopf_closed_form("ll_pants", Truncation(n))
    q = curves.hopf_closed_form("ll_quiver", Truncation(n))
    return {"ok": p == q, "max_degree": n, "detail": None}


def _star_check(name, n):
    r = star_identity_suite(name, 3, n)
    bad = [x for x in r["identities"] if not x["ok"]]
    return {"ok": r["ok"], "max_degree": n,
            "detail": bad[0] if bad else None}


def check_framing(n, _cap):
    z = solve(catalog("ll"), n)
    for f1 in (-1, 0, 1):
        for f2 in (-1, 0, 1):
            zf = solve(catalog("ll-framed", (f1, f2)), n)
            if zf != frame_t(z, f1, f2):
                return {"ok": False, "max_degree": n,
                        "detail": {"framing": (f1, f2)}}
    return {"ok": True, "max_degree": n, "detail": None}


def check_u1(_n, _cap):
    got = [u1.specialize_u1(op) for op in catalog("ll").operators]
    for k, (g, e) in enumerate(zip(got, u1.hopf_u1_operators())):
        if not u1.proportional(g, e):
            return {"ok": False, "max_degree": None,
                    "detail": {"operator": k}}
    return {"ok": True, "max_degree": None, "detail": None}


def check_classical(_n, _cap):
    for k, op in enumerate(catalog("ll").operators):
        cl = u1.classical_limit(u1.specialize_u1(op))
        for branch in (1, 2):
            if u1.vanishes_on_branch(cl, branch) != 0:
                return {"ok": False, "max_degree": None,
                        "detail": {"operator": k, "branch": branch}}
    return {"ok": True, "max_degree": None, "detail": None}


def check_integrality(n, _cap):
    z = solve(catalog("ll"), n, progress=_progress)
    for key, v in z.sorted_items():
        if not v.is_integral_laurent():
            return {"ok": False, "max_degree": n,
                    "detail": {"label": str(key)}}
    return {"ok": True, "max_degree": n, "detail": None}


def check_swap(n, _cap):
    z = solve(catalog("ll"), n, progress=_progress)
    return {"ok": swap_branes(z) == z, "max_degree": n, "detail": None}


def run_check(name, args):
    n = args.max_boxes
    cap = args.a_cap
    if name == "annihilation":
        filling = args.filling or "ll"
        return check_annihilation(filling, n, cap, args.framing)
    if name == "commutator":
        return check_commutator(min(n, 4), cap)
    if name == "quiver-vs-solver":
        return check_quiver_vs_solver(n, cap)
    if name == "pants-vs-quiver":
        return check_pants_vs_quiver(n, cap)
    if name == "thm18":
        return _star_check("thm18", n)
    if name == "star-identities":
        for fam in ("lm", "dl", "dd"):
            r = _star_check(fam, n)
            if not r["ok"]:
                r["detail"] = {"family": fam, **(r["detail"] or {})}
                return r
        return {"ok": True, "max_degree": n, "detail": None}
    if name == "pants-identities":
        r = pants_identity_suite(n)
        bad = [x for x in r["identities"] if not x["ok"]]
        return {"ok": r["ok"], "max_degree": n,
                "detail": bad[0] if bad else None}
    if name == "framing":
        return check_framing(min(n, 4), cap)
    if name == "u1":
        return check_u1(n, cap)
    if name == "classical":
        return check_classical(n, cap)
    if name == "annulus":
        return check_annihilation("annulus-id", n, cap)
    if name == "twisted-annulus":
        return check_annihilation("twisted-annulus-B", n, cap, 1)
    if name == "unknot-recap":
        return check_annihilation("unknot-l-recap", n, cap)
    if name == "integrality":
        return check_integrality(n, cap)
    if name == "swap-symmetry":
        return check_swap(n, cap)
    raise ValueError(f"unknown check {name!r}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _element_text(x) -> str:
    lines = []
    for key, v in x.sorted_items():
        if isinstance(x, TensorElement):
            k1, k2 = key
            lines.append(f"W[{list(k1.lam)},{list(k1.mub)}] (x) "
                         f"W[{list(k2.lam)},{list(k2.mub)}]: {v}")
        else:
            lines.append(f"W[{list(key.lam)},{list(key.mub)}]: {v}")
    return "\n".join(lines) + "\n"


def _element_csv(x) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(x, TensorElement):
        w.writerow(["lam1", "mub1", "lam2", "mub2", "coeff"])
        for (k1, k2), v in x.sorted_items():
            w.writerow([list(k1.lam), list(k1.mub),
                        list(k2.lam), list(k2.mub), str(v)])
    else:
        w.writerow(["lam", "mub", "coeff"])
        for key, v in x.sorted_items():
            w.writerow([list(key.lam), list(key.mub), str(v)])
    return buf.getvalue()


def _render(x, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(element_to_json(x), indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        return _element_csv(x)
    return _element_text(x)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    try:
        x = solve(catalog(args.filling, args.framing), args.max_boxes,
                  a_cap=args.a_cap, progress=_progress)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    _emit(_render(x, args.format), args.out)
    return 0


def cmd_table(args) -> int:
    filling = args.filling or "ll"
    try:
        x = solve(catalog(filling, args.framing), args.max_boxes,
                  a_cap=args.a_cap, progress=_progress)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.format == "json":
        rows = []
        for key, v in x.sorted_items():
            if isinstance(x, TensorElement):
                k1, k2 = key
                rows.append({"lam": list(k1.lam), "mu": list(k2.lam),
                             "coeff": str(v)})
            else:
                rows.append({"lam": list(key.lam), "mu": [],
                             "coeff": str(v)})
        _emit(json.dumps({"rows": rows}, indent=1, sort_keys=True) + "\n",
              args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lam", "mu", "coeff"])
        for key, v in x.sorted_items():
            if isinstance(x, TensorElement):
                w.writerow([list(key[0].lam), list(key[1].lam), str(v)])
            else:
                w.writerow([list(key.lam), [], str(v)])
        _emit(buf.getvalue(), args.out)
    return 0


def cmd_verify(args) -> int:
    checks = args.check or list(CHECK_NAMES)
    for c in checks:
        if c not in CHECK_NAMES:
            print(f"error: unknown check {c!r}; choose from "
                  f"{', '.join(CHECK_NAMES)}", file=sys.stderr)
            return EX_USAGE
    jobs = args.jobs or int(os.environ.get("SKEINREC_JOBS", "1"))
    import time as _time
    results = []

    def run(c):
        t0 = _time.monotonic()
        try:
            r = run_check(c, args)
        except Exception as e:  # computation failure, not check failure
            r = {"ok": False, "max_degree": None,
                 "detail": {"error": str(e)}, "crashed": True}
        dt = _time.monotonic() - t0
        print(f"check {c}: {'ok' if r['ok'] else 'FAIL'} "
              f"({dt:.1f}s)", file=sys.stderr, flush=True)
        return c, r

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, checks))
    else:
        results = [run(c) for c in checks]
    crashed = any(r.get("crashed") for _, r in results)
    report = {"ok": all(r["ok"] for _, r in results),
              "checks": [{"name": c, "ok": r["ok"],
                          "max_degree": r["max_degree"],
                          "detail": r["detail"]} for c, r in results]}
    _emit(json.dumps(report, indent=1, sort_keys=True) + "\n", args.out)
    if crashed:
        return 2
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="skeinrec",
        description="Exact skein-valued recursion engine for unknot and "
                    "Hopf link conormal fillings")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_boxes):
        sp.add_argument("--filling", choices=CATALOG_NAMES, default=None)
        sp.add_argument("--name", dest="filling_alias", default=None,
                        help="alias for --filling")
        sp.add_argument("--framing", type=_parse_framing, default=None,
                        metavar="f1,f2")
        sp.add_argument("--max-boxes", type=int, default=default_boxes,
                        metavar="N")
        sp.add_argument("--a-cap", type=int, default=None, metavar="T")
        sp.add_argument("--format", choices=("json", "csv", "text"),
                        default="json")
        sp.add_argument("--out", default=None)
        sp.add_argument("--check", action="append", default=None)
        sp.add_argument("--jobs", type=int, default=None)

    s1 = sub.add_parser("solve", help="solve a catalog recursion system")
    common(s1, 4)
    s2 = sub.add_parser("table", help="coefficient table of a solution")
    common(s2, 4)
    s3 = sub.add_parser("verify", help="run verification checks")
    common(s3, 4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EX_USAGE if e.code not in (0, None) else 0
    if args.filling is None and args.filling_alias is not None:
        args.filling = args.filling_alias
    if args.max_boxes < 0:
        print("error: --max-boxes must be >= 0", file=sys.stderr)
        return EX_USAGE
    if args.command == "solve":
        if args.filling is None:
            print("error: solve needs --filling", file=sys.stderr)
            return EX_USAGE
        return cmd_solve(args)
    if args.command == "table":
        return cmd_table(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
