"""Command line interface: ``stpro <subcommand> ...``.

Every subcommand builds scenario entries and runs them through
:mod:`stpro.scenario`, so the CLI and scenario files share one code path
and one report format.  Exit status: 0 pass, 2 inconclusive, 1 fail,
3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import scenario as sc
from .checks import FAIL, PASS, encode, worst

CHECK_KINDS = ["oddform", "steinberg", "relative", "crossed-square", "cosheaf", "gluing", "weak-action",
               "crossed-module", "gauss", "colocalization"]

# flag name -> entry key
ENTRY_FLAGS = ["phi", "algebra", "base", "rank", "middle", "ideal", "s", "ks", "depth", "labels", "budget",
               "samples", "k", "n", "limit", "eliminate", "involution", "parameter"]


def _common(p):
    p.add_argument("--seed", type=int, default=None, help=f"sampling seed (default ${sc.SEED_ENV} or 0)")
    p.add_argument("--out", metavar="DIR", help="write report.jsonl and report.txt into DIR")
    p.add_argument("--figures", metavar="DIR", help="render optional matplotlib figures into DIR")
    p.add_argument("--jsonl", action="store_true", help="print the machine report instead of the text report")


def _entry_flags(p, defaults=None):
    for f in ENTRY_FLAGS:
        p.add_argument(f"--{f}", default=(defaults or {}).get(f))


def build_parser():
    ap = argparse.ArgumentParser(prog="stpro", description="Exact checks for Steinberg pro-groups over Z/N.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("roots", help="root system data and sanity checks")
    p.add_argument("--phi", required=True)
    _common(p)

    p = sub.add_parser("check", help="run one verifier")
    p.add_argument("kind", choices=CHECK_KINDS)
    _entry_flags(p)
    _common(p)

    p = sub.add_parser("extract", help="extract Chevalley commutator maps")
    p.add_argument("what", choices=["chevalley"])
    _entry_flags(p)
    p.add_argument("--pair", help="two roots 'a,b': list every extracted term for that pair")
    _common(p)

    p = sub.add_parser("enumerate", help="Todd-Coxeter enumeration of a Steinberg presentation")
    _entry_flags(p, {"phi": "A3", "algebra": "m4:f2"})
    p.add_argument("--report", choices=["summary", "table-stats"], default="summary")
    _common(p)

    p = sub.add_parser("run", help="run a scenario file (or the bundled 'paper-suite')")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("replay", help="re-evaluate one failing record of a machine report")
    p.add_argument("--report", required=True, metavar="JSONL")
    p.add_argument("--line", type=int, help="1-based record line (default: first non-passing identity)")
    p.add_argument("--scenario", help="scenario file for records without parameters")
    return ap


def _values(args):
    return {f: str(getattr(args, f)) for f in ENTRY_FLAGS if getattr(args, f, None) is not None}


def _emit(args, seed, results, extra_lines=()):
    lines = sc.records(seed, results)
    text = sc.text_report(seed, results)
    if extra_lines:
        text = text + "\n" + "\n".join(extra_lines)
    print("\n".join(lines) if args.jsonl else text)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.jsonl"), "w") as f:
            f.write("\n".join(lines) + "\n")
        with open(os.path.join(args.out, "report.txt"), "w") as f:
            f.write(text + "\n")
    if args.figures:
        from . import plotting
        for path in plotting.render(results, args.figures):
            print(f"figure: {path}", file=sys.stderr)
    statuses = [rep.status for *_x, reps in results for rep in reps]
    return sc.EXIT[worst(statuses) if statuses else PASS]


def _run_entries(args, entries):
    seed = args.seed if args.seed is not None else sc.default_seed()
    return sc.run({}, entries, seed)


def cmd_roots(args):
    seed, results = _run_entries(args, [("roots", "roots", {"phi": args.phi})])
    return _emit(args, seed, results)


def cmd_check(args):
    seed, results = _run_entries(args, [(args.kind, args.kind, _values(args))])
    return _emit(args, seed, results)


def cmd_extract(args):
    values = _values(args)
    seed, results = _run_entries(args, [("chevalley", "chevalley", values)])
    extra = []
    if args.pair:
        from .rootsys import parse_root
        from .steinberg import extract_chevalley_maps
        real = sc.realization(sc.Params("extract", values))
        a, b = (parse_root(t, real.rs.dim, real.rs) for t in args.pair.split(","))
        sa, sb = real.space(a), real.space(b)
        extra.append(f"extracted terms of [x_{args.pair.split(',')[0]}(p), x_{args.pair.split(',')[1]}(q)]:")
        for p in sa.all:
            for q in sb.all:
                terms = extract_chevalley_maps(real, a, b, p, q)
                shown = {real.rs.format_root(c): encode(v) for c, v in terms.items()}
                extra.append(f"  p={json.dumps(encode(p))} q={json.dumps(encode(q))} -> {json.dumps(shown)}")
    return _emit(args, seed, results, extra)


def cmd_enumerate(args):
    values = _values(args)
    seed, results = _run_entries(args, [("enumerate", "enumerate", values)])
    extra = []
    if args.report == "table-stats":
        from . import presentation as pres
        P = pres.steinberg_presentation(sc.realization(sc.Params("enumerate", values)))
        extra.append(f"presentation: {json.dumps(P.stats(), sort_keys=True)}")
    return _emit(args, seed, results, extra)


def cmd_run(args):
    meta, entries = sc.load_file(args.scenario)
    seed = args.seed if args.seed is not None else int(meta.get("seed", sc.default_seed()))

    def progress(name, reports):
        status = worst(r.status for r in reports) if reports else PASS
        print(f"[{status}] {name}", file=sys.stderr, flush=True)

    seed, results = sc.run(meta, entries, seed, progress)
    return _emit(args, seed, results)


def cmd_replay(args):
    records = sc.entry_records(args.report)
    if args.line is not None:
        record = records[args.line - 1]
    else:
        bad = [r for r in records if "identity" in r and r["status"] != PASS]
        if not bad:
            print("no failing record to replay")
            return 0
        record = bad[0]
    entries = sc.load_file(args.scenario)[1] if args.scenario else None
    holds, detail = sc.replay_record(record, entries)
    print(json.dumps({"holds": holds, "replayed": detail}, sort_keys=True))
    return sc.EXIT[PASS if holds else FAIL]


COMMANDS = {"roots": cmd_roots, "check": cmd_check, "extract": cmd_extract, "enumerate": cmd_enumerate,
            "run": cmd_run, "replay": cmd_replay}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except sc.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
