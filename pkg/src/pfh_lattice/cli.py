"""Command-line front end: ``pfh-lattice <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 failed certificate (for example an
optimizer/oracle disagreement), 64 bad usage.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import CertificateError, PathError
from .hofer_lab import embedding_bounds, growth_table, mu_matrix, random_pairs, separation
from .invariants import invariant_bundle, zeta_closed
from .lattice import enumerate_paths, index_by_area, index_by_count, path_from_json
from .report import csv_text, dumps
from .spectral import ORACLE_SLOPE_BUDGET, c_dk, oracle_table, spectral_table
from .twist import build_family, default_infinite_twist, load_profile, profile_to_json

EXIT_OK, EXIT_INVALID, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PFH_LATTICE_THREADS", "1")))
    except ValueError:
        return 1


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}") from exc


def _emit(args, payload, csv_table=None):
    if args.format == "csv":
        if csv_table is None:
            raise UsageError(f"{args.command} has no CSV form")
        text = csv_text(*csv_table)
    else:
        text = dumps(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------

def cmd_spectral(args) -> int:
    tp = load_profile(args.profile)
    res = c_dk(tp, args.d, args.k)
    payload = {"command": "spectral", "d": args.d, "k": args.k, "seed": args.seed,
               "value": res.value, "feasible": res.feasible,
               "value_float": None if res.value is None else float(res.value),
               "witnesses": res.witnesses, "stats": res.stats}
    status = EXIT_OK
    if args.oracle:
        orc = oracle_table(tp, args.d, [args.k], slope_budget=args.slope_budget)[args.k]
        payload["oracle"] = {"value": orc.value, "witnesses": orc.witnesses, "stats": orc.stats}
        payload["agree"] = orc.value == res.value
        if not payload["agree"]:
            status = EXIT_CERT
    _emit(args, payload, (["d", "k", "value"], [[args.d, args.k, res.value]]))
    return status


def cmd_invariants(args) -> int:
    tp = load_profile(args.profile)
    bundles = [invariant_bundle(tp, d, args.t, with_eta=not args.no_eta) for d in args.d_list]
    payload = {"command": "invariants", "t": args.t, "seed": args.seed, "bundles": bundles}
    rows = [[b.d, b.zeta, b.mu, b.eta, b.calabi, b.mean] for b in bundles]
    _emit(args, payload, (["d", "zeta", "mu", "eta", "calabi", "mean"], rows))
    return EXIT_OK


def cmd_quasiflat(args) -> int:
    fam = build_family(args.iota, args.n + 1)
    rep = mu_matrix(fam)
    worst = None
    for t, s in random_pairs(rep.n, args.pairs, args.seed):
        lo, hi = embedding_bounds(rep, t, s)
        gap = hi - lo
        worst = gap if worst is None else min(worst, gap)
    payload = {"command": "quasiflat", "iota": args.iota, "n": args.n, "seed": args.seed,
               "degrees": list(rep.degrees), "matrix_A": rep.matrix_A,
               "lower_triangular": rep.triangular_ok, "positive_diagonal": rep.diag_ok,
               "below_diagonal_at_least_3_16": rep.offdiag_ok,
               "diagonal_lower_bounds": rep.diag_lower, "smoothing_slack": rep.smoothing_slack,
               "pairs_checked": args.pairs, "min_upper_minus_lower": worst,
               "labels": {"lower": "certified lower bound ||A(t-s)||_inf",
                          "upper": "energy upper bound 2n(2||t-s||_inf+1+1/n)"}}
    rows = [[i + 1, j + 1, x] for i, row in enumerate(rep.matrix_A) for j, x in enumerate(row)]
    _emit(args, payload, (["i", "j", "A_ij"], rows))
    if not (rep.triangular_ok and rep.diag_ok):
        return EXIT_CERT
    return EXIT_OK


def cmd_coarse(args) -> int:
    fam = build_family(args.iota, 2 * args.j)
    res = separation(fam, args.r, args.i, args.j)
    payload = {"command": "coarse", "iota": args.iota, "r": args.r, "i": args.i, "j": args.j,
               "seed": args.seed, "k": res.k, "margin": res.margin, "bound": res.bound,
               "certificate": res.certificate, "ok": res.ok}
    _emit(args, payload, (["r", "i", "j", "k", "margin", "bound"],
                          [[args.r, args.i, args.j, res.k, res.margin, res.bound]]))
    return EXIT_OK if res.ok else EXIT_CERT


def cmd_growth(args) -> int:
    spec = default_infinite_twist(args.dmax)
    ds = list(range(4, args.dmax + 1, args.step))
    rep = growth_table(spec, ds, actual_max=args.actual_max)
    payload = {"command": "growth", "dmax": args.dmax, "step": args.step, "seed": args.seed,
               "rows": rep.rows, "ratio_strictly_increasing": rep.strictly_increasing,
               "actual_ok": rep.actual_ok}
    rows = [[r.d, r.value, r.slope, r.eta_lower, r.ratio, r.eta_actual] for r in rep.rows]
    _emit(args, payload, (["d", "f_zd", "df_zd", "eta_lower", "ratio", "eta_actual"], rows))
    return EXIT_OK if rep.strictly_increasing and rep.actual_ok else EXIT_CERT


def _check_profile(path, dmax, budget):
    tp = load_profile(path)
    top = tp.max_slope
    dlim = dmax if top == 0 else min(dmax, int(budget // top))
    rows = []
    for d in range(1, dlim + 1):
        ks = list(range(-3 * d, 3 * d + 1, 2))
        fast = spectral_table(tp, d, ks)
        slow = oracle_table(tp, d, ks, slope_budget=budget)
        bad = [k for k in ks if fast[k] != slow[k].value]
        idx_bad = 0
        idx_n = 0
        for P in enumerate_paths(d, top, range(-2, 3), slope_budget=budget):
            idx_n += 1
            idx_bad += index_by_count(P).I != index_by_area(P).I
        rows.append({"d": d, "ks": len(ks), "value_mismatches": bad,
                     "paths_indexed": idx_n, "index_mismatches": idx_bad})
    return {"profile": Path(path).name, "max_slope": top, "degrees": rows,
            "ok": all(not r["value_mismatches"] and not r["index_mismatches"] for r in rows)}


def _check_fixture(path):
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    P = path_from_json(obj["path"])
    ic, ia = index_by_count(P), index_by_area(P)
    ok = ic.I == ia.I == int(obj["index"])
    if "j" in obj:
        ok = ok and ic.j == int(obj["j"])
    return {"fixture": Path(path).name, "index_by_count": ic.I, "index_by_area": ia.I,
            "expected": int(obj["index"]), "ok": ok}


def cmd_oracle_check(args) -> int:
    root = Path(args.corpus)
    if not root.is_dir():
        raise UsageError(f"corpus directory {root} does not exist")
    fixtures = sorted(p for p in root.glob("*.path.json"))
    profiles = sorted(p for p in root.glob("*.json") if not p.name.endswith(".path.json"))
    if not profiles and not fixtures:
        raise UsageError(f"corpus directory {root} is empty")
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        prof_res = list(ex.map(lambda p: _check_profile(p, args.dmax, args.slope_budget), profiles))
    fix_res = [_check_fixture(p) for p in fixtures]
    ok = all(r["ok"] for r in prof_res + fix_res)
    payload = {"command": "oracle-check", "corpus": str(root), "seed": args.seed,
               "dmax": args.dmax, "profiles": prof_res, "fixtures": fix_res, "ok": ok}
    rows = [[r["profile"], row["d"], len(row["value_mismatches"]), row["index_mismatches"]]
            for r in prof_res for row in r["degrees"]]
    _emit(args, payload, (["profile", "d", "value_mismatches", "index_mismatches"], rows))
    return EXIT_OK if ok else EXIT_CERT


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pfh-lattice", description="Exact spectral invariants of monotone twists.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps (recorded)")

    p = sub.add_parser("spectral", help="c_{d,k} of a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    p.add_argument("--slope-budget", type=int, default=ORACLE_SLOPE_BUDGET)
    common(p)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("invariants", help="zeta, mu, eta and Calabi for a list of degrees")
    p.add_argument("--profile", required=True)
    p.add_argument("--d-list", type=_int_list, required=True)
    p.add_argument("--t", type=_frac, default=Fraction(1))
    p.add_argument("--no-eta", action="store_true", help="skip the spectral eta computation")
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("quasiflat", help="quasi-flat matrix and embedding sandwich")
    p.add_argument("--iota", type=int, default=3)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--pairs", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_quasiflat)

    p = sub.add_parser("coarse", help="separation certificate")
    p.add_argument("--r", type=_frac, default=Fraction(1))
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--iota", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_coarse)

    p = sub.add_parser("growth", help="eta growth table for the default infinite twist")
    p.add_argument("--dmax", type=int, default=1024)
    p.add_argument("--step", type=int, default=4)
    p.add_argument("--actual-max", type=int, default=6)
    common(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("oracle-check", help="optimizer vs brute force over a corpus")
    p.add_argument("corpus")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--slope-budget", type=int, default=ORACLE_SLOPE_BUDGET)
    common(p)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "command", None):
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pfh-lattice: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"pfh-lattice: certificate failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (ValueError, OSError, KeyError, PathError) as exc:
        print(f"pfh-lattice: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
