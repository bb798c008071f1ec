"""Command-line front end: deterministic machine-readable reports for the
counting, lattice and subgroup-growth machinery."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import counting, lattice, subgrowth
from .cohomology import build_system
from .groups import (
    CapExceeded,
    FiniteGroupTable,
    GroupSpecError,
    aut_order,
    builtin_group,
    chief_series,
    find_isomorphism,
)
from .oracle import OracleBudget, brute_epi, brute_hom
from .presentations import (
    ParseError,
    PresentationError,
    builtin_from_string,
    parse_presentation,
)


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        sys.exit(1)


# ---------------------------------------------------------------------------
# Input resolution.


def load_source(spec):
    """A presentation from 'builtin:family(args)', an inline '< ... >'
    presentation, or a file containing one."""
    text = spec.strip()
    if text.startswith("builtin:"):
        return builtin_from_string(text[len("builtin:"):]), text
    if text.startswith("<"):
        return parse_presentation(text), text
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            return parse_presentation(fh.read()), text
    raise InputError("source %r is neither builtin:, an inline presentation, "
                     "nor an existing file" % spec)


def read_table_file(path):
    """Multiplication table file: first line 'order N', then N rows of N
    space-separated 0-based indices; element 0 must be the identity."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].lower().startswith("order"):
        raise InputError("table file must start with 'order N'")
    try:
        n = int(lines[0].split()[1])
        rows = [[int(x) for x in ln.split()] for ln in lines[1 : n + 1]]
    except (IndexError, ValueError):
        raise InputError("malformed table file %r" % path)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError("table file needs %d rows of %d entries" % (n, n))
    table = FiniteGroupTable(rows, name=os.path.basename(path))
    table.check_associativity()
    return table


def write_table_file(table, fh):
    fh.write("order %d\n" % table.n)
    for row in table.mul:
        fh.write(" ".join(str(x) for x in row) + "\n")


def load_target(spec, cap):
    """A tower from a group spec or from a multiplication table file."""
    text = spec.strip()
    if os.path.exists(text):
        table = read_table_file(text)
        return chief_series(table, cap=cap, spec=text)
    return builtin_group(text, cap=cap)


# ---------------------------------------------------------------------------
# Output.


def emit_json(doc, out):
    out.write(json.dumps(doc, indent=2) + "\n")


def emit_tsv(header, rows, out):
    out.write("\t".join(header) + "\n")
    for row in rows:
        out.write("\t".join(str(x) for x in row) + "\n")


def _config(args, keys):
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


# ---------------------------------------------------------------------------
# Commands.


def cmd_count(args, want):
    P, src_label = load_source(args.source)
    tower = load_target(args.target, args.cap_order)
    rep = counting.epi_count(
        P, tower, cap=args.cap_frontier, with_hom=True, source_label=src_label
    )
    doc = rep.to_json_dict()
    doc["target"] = args.target
    doc = {"command": want, "config": _config(args, ("source", "target", "cap_order", "cap_frontier", "threads"))} | doc
    if args.tsv:
        emit_tsv(
            ["source", "target", "hom", "epi", "aut", "delta"],
            [[src_label, args.target, rep.hom, rep.epi, rep.aut, rep.delta]],
            sys.stdout,
        )
    else:
        emit_json(doc, sys.stdout)
    return 0


def cmd_aut(args):
    tower = load_target(args.target, args.cap_order)
    order = aut_order(tower.group, cap=args.cap_order)
    doc = {
        "command": "aut",
        "config": _config(args, ("target", "cap_order")),
        "target": args.target,
        "aut": order,
    }
    if args.tsv:
        emit_tsv(["target", "aut"], [[args.target, order]], sys.stdout)
    else:
        emit_json(doc, sys.stdout)
    return 0


def cmd_cocycle(args):
    P, _ = load_source(args.source)
    tower = load_target(args.target, args.cap_order)
    level = args.level if args.level is not None else len(tower.layers) - 1
    if not (0 <= level < len(tower.layers)):
        raise InputError("level %r out of range" % args.level)
    lay = tower.layers[level]
    try:
        images = tuple(int(x) for x in args.images.split(","))
    except ValueError:
        raise InputError("--images must be a comma list of integers")
    if len(images) != P.n or any(not (0 <= im < len(lay.base)) for im in images):
        raise InputError("--images needs %d base-element indices < %d"
                         % (P.n, len(lay.base)))
    try:
        sysm = build_system(P, images, lay, check=True)
    except ValueError as exc:
        raise InputError(str(exc))
    header = ["row"] + ["a%d_%d" % (i, c) for i in range(P.n) for c in range(lay.s)] + ["rhs"]
    rows = []
    for r in range(len(sysm.matrix)):
        rows.append([r] + list(sysm.matrix[r]) + [sysm.chi_vec[r]])
    emit_tsv(header, rows, sys.stdout)
    return 0


def cmd_moebius(args):
    tower = load_target(args.target, args.cap_order)
    lat = lattice.all_subgroups(tower.group, cap=args.cap_lattice)
    mu = lattice.moebius(lat)
    rows = []
    for i in range(len(lat)):
        gens = ",".join(str(g) for g in lat.generators_of(i)) or "-"
        rows.append([lat.orders[i], i, gens, mu[i]])
    rows.sort(key=lambda r: (r[0], r[1]))
    emit_tsv(["order", "index", "generators", "mu"], rows, sys.stdout)
    return 0


def cmd_growth(args):
    if args.table2:
        return cmd_table2(args)
    if args.source is None:
        raise InputError("growth needs --source (or --table2)")
    P, src_label = load_source(args.source)
    report = subgrowth.ak_sequence(
        P, args.kmax, cap=max(args.cap_k, args.kmax), threads=args.threads
    )
    if args.normal:
        report.ak_normal = [
            subgrowth.ak_normal(P, k) for k in range(1, min(args.kmax, 15) + 1)
        ]
    if args.tsv:
        header = ["k", "h_k", "t_k", "a_k"] + (["a_k_normal"] if args.normal else [])
        rows = []
        for i in range(args.kmax):
            row = [i + 1, report.hk[i], report.tk[i], report.ak[i]]
            if args.normal:
                row.append(report.ak_normal[i] if i < len(report.ak_normal) else "-")
            rows.append(row)
        emit_tsv(header, rows, sys.stdout)
    else:
        doc = {"command": "growth",
               "config": _config(args, ("source", "kmax", "normal", "threads"))}
        doc |= {"source": src_label} | report.to_json_dict()
        emit_json(doc, sys.stdout)
    return 0


def cmd_table2(args):
    import time

    from .presentations import builtin_presentation

    deadline = time.monotonic() + args.time_budget
    rows = []
    for n in range(3, args.nmax + 1):
        P = builtin_presentation("braid", n)
        row = ["B%d" % n]
        hk = []
        exhausted = False
        for k in range(1, args.kmax + 1):
            if exhausted or time.monotonic() > deadline:
                row.append("?")
                continue
            try:
                hk.append(subgrowth.hom_count_symmetric(
                    P, k, cap=args.kmax, threads=args.threads))
            except CapExceeded:
                exhausted = True
                row.append("?")
                continue
            row.append(subgrowth.ak_from_homcounts(hk)[-1])
        rows.append(row)
    emit_tsv(["group"] + ["a_%d" % k for k in range(1, args.kmax + 1)], rows, sys.stdout)
    return 0


_VERIFY_SOURCES = [
    "builtin:free(2)", "builtin:bs(1,3)", "builtin:bs(2,4)", "builtin:klein",
    "builtin:braid(3)",
]
_VERIFY_TARGETS = ["Z(6)", "S(3)", "D(8)", "Q(8)", "D(12)", "A(4)", "S(4)"]


def cmd_verify(args):
    budget = OracleBudget(max_letter_ops=args.budget)
    rows = []
    failed = False
    for src in args.sources or _VERIFY_SOURCES:
        P, _ = load_source(src)
        for tgt in args.targets or _VERIFY_TARGETS:
            tower = load_target(tgt, args.cap_order)
            hom = counting.hom_count(P, tower, cap=args.cap_frontier)
            epi = counting.epi_count(P, tower, cap=args.cap_frontier,
                                     with_aut=False).epi
            bh = brute_hom(P, tower.group, budget=budget)
            be = brute_epi(P, tower.group, budget=budget)
            if not (bh.verified and be.verified):
                status = "unverified"
            elif bh.count == hom and be.count == epi:
                status = "pass"
            else:
                status = "fail"
                failed = True
            rows.append([src, tgt, hom, bh.count if bh.verified else "-",
                         epi, be.count if be.verified else "-", status])
    emit_tsv(
        ["source", "target", "hom", "hom_brute", "epi", "epi_brute", "status"],
        rows, sys.stdout,
    )
    return 1 if failed else 0


def cmd_scan_braid_deltas(args):
    """Experimental scan of the Hall invariants of the 3- and 4-string braid
    groups over the small-group catalog; prints observations only."""
    from .groups import CATALOG_SPECS
    from .presentations import builtin_presentation

    b3 = builtin_presentation("braid", 3)
    b4 = builtin_presentation("braid", 4)
    rows = []
    for spec in CATALOG_SPECS:
        tower = builtin_group(spec)
        if tower.order > args.max_order:
            continue
        d3 = counting.epi_count(b3, tower).delta
        d4 = counting.epi_count(b4, tower).delta
        rows.append([spec, tower.order, d3, d4])
    emit_tsv(["target", "order", "delta_B3", "delta_B4"], rows, sys.stdout)
    return 0


def cmd_catalog(args):
    if args.dump:
        tower = builtin_group(args.dump, cap=args.cap_order)
        write_table_file(tower.group, sys.stdout)
        return 0
    from .groups import CATALOG_SPECS

    rows = []
    for spec in CATALOG_SPECS:
        tower = builtin_group(spec)
        rows.append([
            spec,
            tower.order,
            " ".join("%d^%d" % (l.q, l.s) for l in tower.layers),
            "".join(str(l.c_chi) for l in tower.layers),
        ])
    emit_tsv(["spec", "order", "chief_factors", "split_pattern"], rows, sys.stdout)
    return 0


def cmd_check_roundtrip(args):
    """Dump + reingest a catalog group and verify the towers agree."""
    tower = builtin_group(args.spec, cap=args.cap_order)
    import io

    buf = io.StringIO()
    write_table_file(tower.group, buf)
    buf.seek(0)
    path = args.out
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
    table = read_table_file(path)
    tower2 = chief_series(table, cap=args.cap_order)
    ok = find_isomorphism(tower2.group, tower.group) is not None
    emit_json({"spec": args.spec, "roundtrip_isomorphic": ok}, sys.stdout)
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser():
    top = _Parser(prog="solvquot",
                  description="Counting homomorphisms onto finite solvable groups")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, source=True, target=True):
        if source:
            p.add_argument("--source", required=True,
                           help="builtin:<family(args)>, inline '< ... >', or a file")
        if target:
            p.add_argument("--target", required=True,
                           help="group spec like 'S(4)' or a table file")
        p.add_argument("--cap-order", type=int, default=512,
                       help="largest allowed target group order")
        p.add_argument("--cap-frontier", type=int, default=10**7,
                       help="largest allowed homomorphism frontier")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker count (results are byte-identical for any value)")
        p.add_argument("--tsv", action="store_true", help="tabular output")

    for verb in ("hom", "epi", "delta"):
        p = sub.add_parser(verb, help="count homomorphisms/epimorphisms")
        add_common(p)

    p = sub.add_parser("aut", help="automorphism group order")
    add_common(p, source=False)

    p = sub.add_parser("cocycle", help="dump a twisted lifting system (TSV)")
    add_common(p)
    p.add_argument("--level", type=int, default=None, help="tower level (default: top)")
    p.add_argument("--images", required=True,
                   help="comma list of base-element indices, one per generator")

    p = sub.add_parser("moebius", help="subgroup lattice Moebius table (TSV)")
    add_common(p, source=False)
    p.add_argument("--cap-lattice", type=int, default=200)

    p = sub.add_parser("growth", help="index-k subgroup counts")
    add_common(p, source=False, target=False)
    p.add_argument("--source", default=None,
                   help="builtin:<family(args)>, inline '< ... >', or a file")
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--cap-k", type=int, default=8)
    p.add_argument("--normal", action="store_true",
                   help="also count normal subgroups (k <= 15)")
    p.add_argument("--table2", action="store_true",
                   help="emit the braid-group subgroup table instead")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--time-budget", type=float, default=1800.0)

    p = sub.add_parser("table2", help="low-index subgroup table for braid groups (TSV)")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--time-budget", type=float, default=1800.0,
                   help="seconds before remaining entries are marked '?'")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("verify", help="engine vs brute-force oracle matrix (TSV)")
    p.add_argument("--sources", nargs="*", default=None)
    p.add_argument("--targets", nargs="*", default=None)
    p.add_argument("--budget", type=int, default=10**8,
                   help="oracle budget in letter operations")
    p.add_argument("--cap-order", type=int, default=512)
    p.add_argument("--cap-frontier", type=int, default=10**7)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("scan-braid-deltas",
                       help="experimental: Hall invariants of B_3/B_4 over the catalog")
    p.add_argument("--max-order", type=int, default=48)

    p = sub.add_parser("catalog", help="list builtin groups or dump a table")
    p.add_argument("--dump", default=None, help="group spec to dump as a table file")
    p.add_argument("--cap-order", type=int, default=512)

    p = sub.add_parser("roundtrip", help="dump a group table and re-ingest it")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cap-order", type=int, default=512)
    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("hom", "epi", "delta"):
            return cmd_count(args, args.command)
        if args.command == "aut":
            return cmd_aut(args)
        if args.command == "cocycle":
            return cmd_cocycle(args)
        if args.command == "moebius":
            return cmd_moebius(args)
        if args.command == "growth":
            return cmd_growth(args)
        if args.command == "table2":
            return cmd_table2(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "scan-braid-deltas":
            return cmd_scan_braid_deltas(args)
        if args.command == "catalog":
            return cmd_catalog(args)
        if args.command == "roundtrip":
            return cmd_check_roundtrip(args)
        raise InputError("unknown command %r" % args.command)
    except (InputError, ParseError, PresentationError, GroupSpecError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    except CapExceeded as exc:
        sys.stderr.write("aborted: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
