"""Command-line front end.

Exit codes: 0 success, 1 input could not be parsed, 2 not a regular sequence
or not a valid pencil, 3 inconclusive within the truncation bound, 4 a
reproduction item failed.
"""

import argparse
import csv
import io
import json
import sys

from .fields import parse_field
from .pencil import (InvalidPencil, SymmetricPencil, hessian_pencil, normal_form, parse_segre,
                     pencil_invariants)
from .poly import PolyParseError, parse_forms
from .regseq import (NotRegular, RegSequence, betti_truncated, freeness_up_to, hilbert_Q,
                     minors_content, rational_form, stability_bounds, syzygy_dim)
from .verdicts import (MAX_ATLAS_N, atlas, ext_support, ext_support_ambient, freeness, gpdim,
                       jacobian_report, p3_row, pdim, stability_verdict)

SCHEMA = "pencil-lab/1"

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_FAILED = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# -- input -------------------------------------------------------------------

def _field(args):
    try:
        return parse_field(args.field)
    except ValueError as exc:
        raise InputError(str(exc))


def _nvars(args):
    return args.n + 1 if args.n is not None else None


def _read_forms(args, F):
    try:
        return parse_forms(args.forms, _nvars(args), F)
    except (PolyParseError, ValueError) as exc:
        raise InputError(f"cannot parse forms: {exc}")


def _read_matrices(path, F):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")
    if "pencil" in data:
        data = data["pencil"]
    try:
        return data["A"], data["B"]
    except (KeyError, TypeError):
        raise InputError("matrix file needs keys 'A' and 'B'")


def _int_list(text, name):
    if text is None or not text.strip():
        return []
    try:
        return [int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{name} must be a comma separated list of integers")


# -- reports -------------------------------------------------------------------

def pencil_report(P, F, forms=None):
    inv = pencil_invariants(P)
    forms = forms or P.forms()
    regular = RegSequence.from_forms(forms)
    fr = freeness(inv)
    report = {"schema": SCHEMA, "command": "analyze-pencil", "field": F.name,
              "forms": [str(f) for f in forms], "pencil": P.to_json(),
              "regular_sequence": regular.regular, "regular_sequence_note": regular.regularity_note}
    report.update(inv.to_json())
    report.update({
        "free": fr.is_free,
        "exponents": list(fr.exponents) if fr.is_free else None,
        "free_table_row": fr.table_row,
        "stability": stability_verdict(inv).to_json(),
        "ext_support": sorted(ext_support(inv)),
        "ext_support_ambient": sorted(ext_support_ambient(inv)),
        "pdim": pdim(inv),
        "gpdim": gpdim(inv),
        "jacobian_scheme": jacobian_report(inv).to_json(),
    })
    if inv.n == 3:
        row = p3_row(inv)
        report["p3"] = {"chern": list(row["chern"]), "label": row["label"], "resolution": row["resolution"]}
    return report


def sequence_report(seq, D):
    report = {"schema": SCHEMA, "command": "analyze-sequence", "field": seq.field.name,
              "forms": [str(f) for f in seq.forms], "n": seq.n, "k": seq.k, "d": list(seq.d),
              "regular_sequence": seq.regular, "regular_sequence_note": seq.regularity_note,
              "syzygy_dims": {str(a): syzygy_dim(seq, a) for a in range(D + 1)}}
    content = minors_content(seq)
    report["minors"] = {"l": content.l, "common_factor": str(content.common_factor), "c1_T": content.c1_T}
    betti = betti_truncated(seq, D)
    report["betti"] = betti.to_json()
    fu = freeness_up_to(seq, betti=betti, content=content)
    report["freeness"] = fu.to_json()
    hil = hilbert_Q(seq, content=content)
    report["cokernel_hilbert"] = hil.to_json()
    if seq.k == 2:
        report["rational_form"] = [str(w) for w in rational_form(seq)]
        if seq.n == 3:
            try:
                report["stability_bounds"] = stability_bounds(seq, hilbert=hil, content=content).to_json()
            except ValueError as exc:
                report["stability_bounds"] = {"verdict": "inconclusive", "reason": str(exc)}
    inconclusive = fu.verdict == "undetermined" or betti.possibly_truncated or not hil.conclusive
    return report, inconclusive


def _render(obj, indent=0):
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict) and val:
            lines.append(f"{pad}{key}:")
            lines += _render(val, indent + 1)
        elif isinstance(val, list) and val and all(isinstance(x, dict) for x in val):
            lines.append(f"{pad}{key}:")
            for x in val:
                lines.append(f"{pad}  -")
                lines += _render(x, indent + 2)
        else:
            lines.append(f"{pad}{key}: {_flat(val)}")
    return lines


def _flat(val):
    if isinstance(val, list):
        return "[" + ", ".join(_flat(x) for x in val) + "]"
    if val is None:
        return "-"
    return str(val)


def _emit(report, as_json, out):
    if as_json:
        json.dump(report, out, indent=2, ensure_ascii=False)
        out.write("\n")
    else:
        out.write("\n".join(_render(report)) + "\n")


# -- commands --------------------------------------------------------------------

def cmd_analyze_pencil(args, out):
    F = _field(args)
    if (args.forms is None) == (args.matrices is None):
        raise InputError("give exactly one of --forms or --matrices")
    if args.forms is not None:
        forms = _read_forms(args, F)
        if len(forms) != 2:
            raise InputError("a pencil needs exactly two forms")
        P = hessian_pencil(*forms)
    else:
        A, B = _read_matrices(args.matrices, F)
        try:
            P = SymmetricPencil(A, B, F)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidPencil):
                raise
            raise InputError(f"bad matrix entries: {exc}")
        forms = None
    _emit(pencil_report(P, F, forms), args.json, out)
    return EXIT_OK


def cmd_analyze_sequence(args, out):
    F = _field(args)
    forms = _read_forms(args, F)
    try:
        seq = RegSequence.from_forms(forms)
    except NotRegular:
        raise
    except ValueError as exc:
        raise InputError(str(exc))
    if not seq.regular:
        raise NotRegular(seq.regularity_note)
    D = args.max_degree if args.max_degree is not None else sum(seq.d) + 3
    report, inconclusive = sequence_report(seq, D)
    _emit(report, args.json, out)
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def cmd_recover(args, out):
    F = _field(args)
    dv = _int_list(args.degree_vector, "--degree-vector")
    r1 = args.r1 if args.r1 is not None else len(dv)
    try:
        point_parts = parse_segre(args.segre) if args.segre else []
    except ValueError as exc:
        raise InputError(str(exc))
    points = None
    if args.points:
        try:
            points = [F(x) for x in args.points.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad points: {exc}")
    try:
        P = normal_form(r1, dv, point_parts, points, F)
    except InvalidPencil:
        raise
    except ValueError as exc:
        raise InputError(str(exc))
    report = {"schema": SCHEMA, "command": "recover", "field": F.name, "n": P.n,
              "pencil": P.to_json(), "forms": [str(f) for f in P.forms()]}
    inv = pencil_invariants(P)
    report["invariants"] = {"r1": inv.r1, "degree_vector": list(inv.degree_vector),
                            "segre_symbol": inv.segre_symbol(), "r0": inv.r0, "u": inv.u, "v": inv.v}
    _emit(report, args.json, out)
    return EXIT_OK


ATLAS_COLUMNS = {
    "segre": ["n", "r1", "degree_vector", "m", "segre", "r0", "e", "stability", "ext_support",
              "pdim", "gpdim", "free", "exponents"],
    "splitting": ["n", "r1", "u", "v", "h0_Ct", "degree_vector", "m", "compressible",
                  "completely_irregular", "realizable"],
}


def cmd_atlas(args, out):
    if args.n > MAX_ATLAS_N or args.n < 1:
        raise InputError(f"--n must be between 1 and {MAX_ATLAS_N}")
    mode = "irregular" if args.irregular else "regular"
    rows = atlas(args.n, mode, args.by)
    cols = list(ATLAS_COLUMNS[args.by])
    if args.by == "segre" and args.n == 3:
        cols += ["chern", "label"]
    fmt = "json" if args.json else args.format
    if fmt == "json":
        _emit({"schema": SCHEMA, "command": "atlas", "n": args.n, "mode": mode, "granularity": args.by,
               "rows": rows}, True, out)
        return EXIT_OK
    table = [[_flat(r.get(c)) for c in cols] for r in rows]
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        w.writerows(table)
        return EXIT_OK
    widths = [max(len(c), *(len(row[i]) for row in table)) if table else len(c) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in table:
        out.write("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")
    out.write(f"{len(rows)} rows\n")
    return EXIT_OK


def cmd_reproduce(args, out):
    from .reproduce import run
    only = _int_list(args.items, "--items") or None

    def progress(res):
        if args.json:
            return
        status = "PASS" if res.passed else "FAIL"
        out.write(f"[{status}] item {res.number}: {res.title} ({res.seconds:.2f}s, limit {res.limit:.0f}s)\n")
        if res.error:
            out.write(f"    error: {res.error}\n")
        for check, ok in res.checks:
            if args.verbose or not ok:
                out.write(f"    {'ok ' if ok else 'BAD'} {check}\n")
        out.flush()

    results = run(full=args.full, only=only, progress=progress)
    passed = all(r.passed for r in results)
    if args.json:
        _emit({"schema": SCHEMA, "command": "reproduce-paper", "passed": passed,
               "items": [r.to_json() for r in results]}, True, out)
    else:
        out.write(f"{sum(r.passed for r in results)}/{len(results)} items passed\n")
    return EXIT_OK if passed else EXIT_FAILED


# -- parser ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="pencil-lab",
                                     description="Invariants and verdicts for pencils of quadrics "
                                                 "and regular sequences of forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, forms=True):
        p.add_argument("--field", default="Q", help="Q (default) or fp:P for a prime P")
        p.add_argument("--json", action="store_true", help="emit JSON")
        if forms:
            p.add_argument("--forms", help='comma separated forms in x0..xn, e.g. "x0*x1, x2^2 + x3^2"')
            p.add_argument("--n", type=int, help="ambient P^n (default: highest variable index)")

    p = sub.add_parser("analyze-pencil", help="invariants and verdicts of a pencil of quadrics")
    common(p)
    p.add_argument("--matrices", help="JSON file with symmetric matrices A and B")
    p.set_defaults(func=cmd_analyze_pencil)

    p = sub.add_parser("analyze-sequence", help="syzygies, Betti numbers and freeness of a regular sequence")
    common(p)
    p.add_argument("--max-degree", type=int, help="truncation degree D")
    p.set_defaults(func=cmd_analyze_sequence)

    p = sub.add_parser("recover", help="explicit pencil from generic corank, degree vector and Segre data")
    common(p, forms=False)
    p.add_argument("--r1", type=int, help="generic corank (default: length of the degree vector)")
    p.add_argument("--degree-vector", default="", help="minimal indices, e.g. 0,1,2")
    p.add_argument("--segre", default="", help='Segre symbol, e.g. "[(2,1),1]"')
    p.add_argument("--points", help="rational support points, one per Segre entry")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("atlas", help="classification table for pencils in P^n")
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--regular", action="store_true", help="regular pencils (default)")
    grp.add_argument("--irregular", action="store_true", help="irregular pencils")
    p.add_argument("--by", choices=["segre", "splitting"], default="segre", help="row granularity")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--json", action="store_true", help="same as --format json")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("reproduce-paper", help="run the built-in reproduction suite")
    p.add_argument("--full", action="store_true", help="include the randomized and atlas-wide checks")
    p.add_argument("--items", help="comma separated item numbers")
    p.add_argument("--verbose", action="store_true", help="print every check")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidPencil, NotRegular) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run_cli(argv):
    """Run the CLI and capture its output (used by the tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
