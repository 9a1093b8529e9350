"""Command-line interface: ``fixmahonian <verb> ...``.

Exit status: 0 on success, 1 when a binding verification check (or a table
import) fails, 2 on usage errors such as a malformed permutation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Iterable, Sequence

from . import bijections as bij
from .decomp import (
    DecompositionError, ShuffleClassId, enumerate_derangements,
    enumerate_desarrangements, fixed_decomposition, pixed_decomposition, zder,
    zder_inverse, zdesar, zdesar_inverse,
)
from .perm import Permutation, WordParseError, ZeroWord, format_set, inverse
from .qseries import combinatorial_gf, gf_coefficients_t
from .verifier import (
    STATISTICS, BudgetExceeded, binding_ok, format_records, format_table,
    mutation_probe, run_suites,
)

SET_STATS = {"FIX", "DES", "IDES", "DEZ", "PIX"}
WORD_STATS = {"Der", "Desar"}

MAP_KINDS = {"dwloc": "dw", "f3": "f3", "f3p": "f3", "phi": "phi", "chz": "chz"}


def _word_text(word: Sequence[int]) -> str:
    return ",".join(map(str, word)) if word else "()"


def _format_stat(name: str, value) -> str:
    if name in SET_STATS:
        return format_set(value)
    if name in WORD_STATS:
        return _word_text(value)
    return str(value)


def _permutation_arg(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except WordParseError as exc:
        raise argparse.ArgumentTypeError(f"malformed permutation {text!r}: {exc}")


def _word_arg(text: str) -> ZeroWord:
    try:
        return ZeroWord.parse(text)
    except WordParseError as exc:
        raise argparse.ArgumentTypeError(f"malformed word {text!r}: {exc}")


def _read_permutations(args, parser) -> list[Permutation]:
    if args.perm is not None:
        return [args.perm]
    if args.file is None:
        parser.error("give --perm or --file")
    perms = []
    for lineno, line in enumerate(Path(args.file).read_text().splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            perms.append(Permutation.parse(line))
        except WordParseError as exc:
            parser.error(f"{args.file}:{lineno}: malformed permutation: {exc}")
    return perms


def _add_input(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--perm", type=_permutation_arg,
                       help='permutation, e.g. "3 1 2", "3,1,2" or "312"')
    group.add_argument("--file", help="file with one permutation per line")


def _load_family(kind: str, path: str | None, parser) -> bij.OracleFamily:
    family = bij.FAMILY_FACTORIES[kind]()
    if path is None:
        return family
    try:
        file_kind, tables = bij.import_tables(Path(path).read_text())
    except bij.TableImportError as exc:
        parser.error(f"{path}: {exc}")
    if file_kind != kind:
        parser.error(f"{path}: holds {file_kind} tables, this map needs {kind}")
    for key, table in tables.items():
        family.plug_in(key, table)
    return family


# --- verbs -------------------------------------------------------------------

def cmd_stat(args, parser, out) -> int:
    names = [s.strip() for s in args.stats.split(",") if s.strip()]
    unknown = [s for s in names if s not in STATISTICS]
    if unknown:
        parser.error(f"unknown statistic(s): {', '.join(unknown)}; "
                     f"choose from {', '.join(STATISTICS)}")
    perms = _read_permutations(args, parser)
    for p in perms:
        fields = [f"{name}={_format_stat(name, STATISTICS[name](p))}" for name in names]
        if args.file is not None:
            fields.insert(0, f"perm={_word_text(p)}")
        print(" ".join(fields), file=out)
    return 0


def cmd_decomp(args, parser, out) -> int:
    if args.kind in ("zder-inverse", "zdesar-inverse"):
        if args.word is None:
            parser.error(f"--kind {args.kind} needs --word")
        try:
            fn = zder_inverse if args.kind == "zder-inverse" else zdesar_inverse
            print(fn(args.word), file=out)
        except DecompositionError as exc:
            parser.error(str(exc))
        return 0
    for p in _read_permutations(args, parser):
        if args.kind == "fixed":
            d = fixed_decomposition(p)
            text = f"FIX={format_set(d.fix_set)} Der={_word_text(d.derangement_part)}"
        elif args.kind == "pixed":
            d = pixed_decomposition(p)
            text = f"PIX={format_set(d.pix_set)} Desar={_word_text(d.desarrangement_part)}"
        elif args.kind == "zder":
            text = str(zder(p))
        else:
            text = str(zdesar(p))
        print(text, file=out)
    return 0


def cmd_bij(args, parser, out) -> int:
    kind = MAP_KINDS.get(args.map)
    if args.base is not None and kind is None:
        parser.error(f"--map {args.map} takes no --base table")
    family = _load_family(kind, args.base, parser) if kind else None
    maps = {
        "f2": bij.f2,
        "f2p": bij.f2_prime,
        "f2loc": bij.f2_loc,
        "dwloc": lambda p: bij.dw_loc(p, family),
        "f3": lambda p: bij.f3(p, family),
        "f3p": lambda p: bij.f3_prime(p, family),
        "phi": family,
        "chz": family,
    }
    for p in _read_permutations(args, parser):
        print(maps[args.map](p), file=out)
    return 0


def cmd_poly(args, parser, out) -> int:
    if args.n < 0:
        parser.error("--n must be non-negative")
    if args.mode == "gf-t":
        poly = gf_coefficients_t(args.n)[args.n]
    elif args.mode == "gf-q":
        poly = gf_coefficients_t(args.n)[args.n].subs(t=1)
    else:
        poly = combinatorial_gf(args.n, "triple" if args.mode == "comb-triple" else "pair")
    print(poly.to_json() if args.json else str(poly), file=out)
    return 0


def cmd_verify(args, parser, out) -> int:
    try:
        if args.mutate_maj:
            reports = mutation_probe(args.nmax)
        elif args.dw_base or args.f3_base:
            if args.suite not in ("props", "all"):
                parser.error("--dw-base/--f3-base apply to the props suite")
            from .verifier import check_structural_maps
            dw = _load_family("dw", args.dw_base, parser)
            words = _load_family("f3", args.f3_base, parser)
            reports = []
            if args.suite == "all":
                for name in ("thm1.1", "thm1.2", "thm1.3"):
                    reports += run_suites(name, args.nmax, args.workers, args.allow_large)
            reports += check_structural_maps(args.nmax, args.allow_large, dw, words)
        else:
            reports = run_suites(args.suite, args.nmax, args.workers, args.allow_large)
    except BudgetExceeded as exc:
        parser.error(str(exc))
    out.write(format_table(reports, timing=args.timing))
    if args.report:
        Path(args.report).write_text(format_records(reports, timing=args.timing))
    return 0 if binding_ok(reports) else 1


def _export_tables(kind: str, n: int, v) -> list[bij.BijectionTable]:
    if kind == "dw":
        return [bij.dw_table(n)]
    if kind == "chz":
        return [bij.chz_table(n)]
    if kind == "phi":
        return [bij.phi_table(n)]
    if v is not None:
        return [bij.word_f3_table(ShuffleClassId(n, tuple(v)))]
    words = set()
    for m in range(n + 1):
        words.update(enumerate_derangements(m))
        words.update(inverse(k) for k in enumerate_desarrangements(m))
    return [bij.word_f3_table(ShuffleClassId(n, w)) for w in sorted(words)]


def cmd_oracle_export(args, parser, out) -> int:
    if args.v is not None and args.kind != "f3":
        parser.error("--v only applies to --kind f3")
    try:
        text = bij.export_tables(args.kind, _export_tables(args.kind, args.n, args.v))
    except (bij.FiberMismatch, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return 0


def cmd_oracle_import(args, parser, out) -> int:
    try:
        kind, tables = bij.import_tables(Path(args.path).read_text())
    except bij.TableImportError as exc:
        print(f"invalid: {exc}", file=out)
        return 1
    rows = sum(len(t) for t in tables.values())
    print(f"valid kind={kind} tables={len(tables)} rows={rows}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixmahonian",
        description="Fix-Mahonian permutation statistics, bijections and exhaustive checks.")
    subs = parser.add_subparsers(dest="verb", required=True)

    sub = subs.add_parser("stat", help="print statistics of permutations")
    _add_input(sub)
    sub.add_argument("--stats", default="fix,maj,maf,maz,mag,pix,imaj,inv",
                     help=f"comma-separated names from: {', '.join(STATISTICS)}")
    sub.set_defaults(func=cmd_stat)

    sub = subs.add_parser("decomp", help="fixed/pixed decompositions and zero-word encodings")
    _add_input(sub)
    sub.add_argument("--kind", required=True,
                     choices=["fixed", "pixed", "zder", "zdesar", "zder-inverse", "zdesar-inverse"])
    sub.add_argument("--word", type=_word_arg, help="zero-word for the *-inverse kinds")
    sub.set_defaults(func=cmd_decomp)

    sub = subs.add_parser("bij", help="apply a bijection")
    _add_input(sub)
    sub.add_argument("--map", required=True,
                     choices=["f2", "f2p", "f2loc", "dwloc", "f3", "f3p", "phi", "chz"])
    sub.add_argument("--base", help="two-column table file replacing the matched oracle")
    sub.set_defaults(func=cmd_bij)

    sub = subs.add_parser("poly", help="print a generating polynomial")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--mode", required=True, choices=["gf-t", "gf-q", "comb-triple", "comb-pair"])
    sub.add_argument("--json", action="store_true", help="structured [[exponents], coeff] output")
    sub.set_defaults(func=cmd_poly)

    sub = subs.add_parser("verify", help="run exhaustive verification suites")
    sub.add_argument("--suite", default="all", choices=["thm1.1", "thm1.2", "thm1.3", "props", "all"])
    sub.add_argument("--nmax", type=int, default=7)
    sub.add_argument("--report", help="write key=value records to this file")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--allow-large", action="store_true", help="lift the enumeration budget")
    sub.add_argument("--timing", action="store_true", help="include timings (output no longer reproducible)")
    sub.add_argument("--mutate-maj", action="store_true",
                     help="run with maj deliberately off by one; suites should fail")
    sub.add_argument("--dw-base", help="DW table file plugged into the props suite")
    sub.add_argument("--f3-base", help="word F3 table file plugged into the props suite")
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("oracle-export", help="write a matched-oracle table as two-column text")
    sub.add_argument("--kind", required=True, choices=sorted(bij.TABLE_KINDS))
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--v", type=_permutation_arg, help="positive word of a single f3 shuffle class")
    sub.add_argument("--out", help="output file (default stdout)")
    sub.set_defaults(func=cmd_oracle_export)

    sub = subs.add_parser("oracle-import", help="validate a two-column table file")
    sub.add_argument("path")
    sub.set_defaults(func=cmd_oracle_import)
    return parser


def main(argv: Iterable[str] | None = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        return args.func(args, parser, out or sys.stdout)
    except (bij.OracleDomainError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
