"""``p2q``: enumerate, build, classify and verify groups of order p²q.

Exit codes: 0 success, 1 verification mismatch, 2 usage or condition
error, 3 resource bound exceeded. Data goes to stdout, progress to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from sympy import primerange

from . import aut, catalog
from .catalog import COMPLETE, STRICT, ConditionError, GroupSpec
from .groups import GroupError, ResourceBoundError, from_json, to_json

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _mode(args):
    return STRICT if getattr(args, "strict_paper", False) else COMPLETE


def _spec(args):
    if args.type is None or args.p is None or args.q is None:
        raise UsageError("--type, -p and -q are required")
    spec = GroupSpec(args.type, args.p, args.q, args.s)
    spec.check_mode(_mode(args))
    return spec


def _max_order(args):
    return args.max_order if args.max_order is not None else aut.default_max_order()


def _align(rows):
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# commands -----------------------------------------------------------------------


def cmd_enumerate(args):
    if args.p is None or args.q is None:
        raise UsageError("-p and -q are required")
    specs = catalog.enumerate_specs(args.p, args.q, _mode(args))
    rows = [
        {
            "spec": s.to_json(),
            "order": s.order,
            "structure": catalog.STRUCTURE[s.type],
            "aut_structure": catalog.AUT_STRUCTURE[s.type],
            "aut_order": aut.predicted_order(s),
            "extension": s.is_extension,
        }
        for s in specs
    ]
    if args.json:
        _emit(rows)
    else:
        head = [("type", "s", "order", "G", "Aut(G)", "|Aut(G)|")]
        body = [
            (
                r["spec"]["type"],
                r["spec"].get("s", "-"),
                r["order"],
                r["structure"],
                r["aut_structure"] + (" (extension)" if r["extension"] else ""),
                r["aut_order"],
            )
            for r in rows
        ]
        print(_align(head + body))
    return EXIT_OK


def cmd_build(args):
    spec = _spec(args)
    G = catalog.build(spec, _mode(args))
    if args.json:
        data = to_json(G)
        data["spec"] = spec.to_json()
        _emit(data)
    else:
        print(f"{spec}: order {G.order}")
        print("element orders: " + ", ".join(f"{o}:{c}" for o, c in G.order_profile().items()))
    return EXIT_OK


def _read_table(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not JSON: {exc}") from None
    if not isinstance(data, dict) or "table" not in data:
        raise UsageError('expected a Cayley-table object {"order", "identity", "table"}')
    return data


def cmd_classify(args):
    G = from_json(_read_table(args.file), full_check=args.full_assoc_check)
    spec = catalog.classify(G)
    if args.json:
        _emit(dict(spec.to_json(), extension=spec.is_extension))
    else:
        print(str(spec) + (" [completeness extension]" if spec.is_extension else ""))
    return EXIT_OK


def cmd_aut(args):
    spec = _spec(args)
    G = catalog.build(spec, _mode(args))
    A = aut.brute_aut(G, max_order=_max_order(args), count_only=G.order > _max_order(args))
    out = {
        "spec": spec.to_json(),
        "group_order": G.order,
        "aut_order": int(A.order),
        "materialized": A.materialized,
        "predicted_structure": catalog.AUT_STRUCTURE[spec.type],
        "predicted_order": aut.predicted_order(spec),
    }
    if args.json:
        _emit(out)
    else:
        print(f"{spec}: |Aut(G)| = {out['aut_order']} (predicted {out['predicted_structure']}, "
              f"order {out['predicted_order']})")
    return EXIT_OK


def _specs_up_to(bound, mode):
    out = []
    for p in primerange(2, int(bound**0.5) + 2):
        for q in primerange(2, bound // (p * p) + 1):
            if q != p:
                out.extend(catalog.enumerate_specs(p, q, mode))
    return sorted(out, key=GroupSpec.sort_key)


def _verify_one(job):
    spec, level, max_order = job
    return aut.verify_table_row(spec, level, max_order=max_order)


def cmd_verify(args):
    level = args.level or "order"
    if args.all:
        bound = args.max_order if args.max_order is not None else aut.default_max_order()
        specs = _specs_up_to(bound, _mode(args))
        max_order = max(bound, aut.default_max_order())
    else:
        specs = [_spec(args)]
        max_order = _max_order(args)
    # extension rows are experiments, not table claims: sweeps count them only
    jobs = [(s, "order" if args.all and s.is_extension else level, max_order) for s in specs]
    if args.jobs and args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_verify_one, jobs))
    else:
        reports = []
        for n, job in enumerate(jobs, 1):
            if args.all:
                print(f"[{n}/{len(jobs)}] {job[0]}", file=sys.stderr, flush=True)
            reports.append(_verify_one(job))
    reports.sort(key=lambda r: r.spec.sort_key())
    data = [r.to_json(timing=args.timing) for r in reports]
    _emit(data if args.all else data[0])
    failed = [r for r in reports if not r.passed and not r.extension]
    for r in failed:
        print(f"MISMATCH {r.spec}: brute {r.brute_order}, predicted {r.predicted_order}", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_table(args):
    have_pq = args.p is not None and args.q is not None
    rows = []
    for t in range(1, 12):
        row = {
            "type": t,
            "conditions": catalog.CONDITIONS[t],
            "structure": catalog.STRUCTURE[t],
            "aut_structure": catalog.AUT_STRUCTURE[t],
        }
        if have_pq:
            fail = catalog.row_condition_failure(t, args.p, args.q, _mode(args))
            row["applicable"] = fail is None
            if fail is None:
                specs = [s for s in catalog.enumerate_specs(args.p, args.q, _mode(args)) if s.type == t]
                row["order"] = args.p * args.p * args.q
                row["aut_order"] = aut.predicted_order(specs[0])
                if t == 8:
                    row["s"] = [s.s for s in specs]
        rows.append(row)
    if have_pq:
        rows = [r for r in rows if r["applicable"]]
    if args.json:
        _emit(rows)
        return EXIT_OK
    head = ("type", "conditions", "G", "Aut(G)") + (("|G|", "|Aut(G)|") if have_pq else ())
    body = [
        (r["type"], r["conditions"] or "-", r["structure"], r["aut_structure"])
        + ((r["order"], r["aut_order"]) if have_pq else ())
        for r in rows
    ]
    print(_align([head] + body))
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "build": cmd_build,
    "classify": cmd_classify,
    "aut": cmd_aut,
    "verify": cmd_verify,
    "table": cmd_table,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="p2q", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        sp.add_argument("-p", type=int)
        sp.add_argument("-q", type=int)
        if spec:
            sp.add_argument("--type", type=int)
            sp.add_argument("--s", type=int)
        sp.add_argument("--strict-paper", action="store_true", help="reproduce the table verbatim (no q = 2 scalar row)")
        sp.add_argument("--json", action="store_true")

    common(sub.add_parser("enumerate", help="one spec per isomorphism class"), spec=False)
    common(sub.add_parser("build", help="Cayley table of a spec"))
    c = sub.add_parser("classify", help="identify a Cayley table (file or stdin)")
    c.add_argument("file", nargs="?")
    c.add_argument("--json", action="store_true")
    c.add_argument("--full-assoc-check", action="store_true")
    a = sub.add_parser("aut", help="brute-force |Aut(G)|")
    common(a)
    a.add_argument("--max-order", type=int)
    v = sub.add_parser("verify", help="compare brute-force Aut(G) with the prediction")
    common(v)
    v.add_argument("--all", action="store_true", help="every spec with p^2 q <= --max-order")
    v.add_argument("--level", choices=aut.LEVELS)
    v.add_argument("--max-order", type=int)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--timing", action="store_true")
    common(sub.add_parser("table", help="the classification table"), spec=False)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConditionError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
