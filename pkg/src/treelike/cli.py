"""``tlc``: analyze, minimize, count, enumerate and render tree-like curves.

Inputs are given with ``--gauss TEXT`` or ``--tree TEXT``; ``-`` reads stdin
and ``@PATH`` reads a file.

Exit codes: 0 success, 1 domain rejection, 2 parse error, 3 size or budget
limit, 4 internal disagreement (strict census, failed realization).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import census
from .errors import (
    CollidingDirections,
    NotTreeLike,
    ParseError,
    RealizationFailed,
    SizeLimit,
    TangentialCrossing,
)
from .gauss import gauss_to_plane_tree, is_tree_like, parse_gauss_code, plane_tree_to_gauss
from .inflect import default_budget, inflecting_passages, is_nonflattening, min_inflections
from .tree import (
    NcpdTree,
    canonical_code,
    coorientation,
    parse_ncpd,
    plane_tree_code,
    whitney_index,
)

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_LIMIT, EXIT_DISAGREE = 0, 1, 2, 3, 4
ALL_DIRECTIONS_MAX_N = 8


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        try:
            return Path(value[1:]).read_text()
        except OSError as exc:
            raise CliError(f"cannot read {value[1:]}: {exc.strerror}", EXIT_PARSE) from exc
    return value


def _parse_lines(text: str, parser):
    """Parse ``text``, reporting the line of the first non-blank input line."""
    lines = [(i, ln) for i, ln in enumerate(text.splitlines() or [""], start=1) if ln.strip()]
    if len(lines) > 1:
        raise CliError(f"expected one input, got {len(lines)} lines", EXIT_PARSE)
    line, body = lines[0] if lines else (1, "")
    try:
        return parser(body)
    except ParseError as exc:
        raise ParseError(str(exc).split(" (line")[0], exc.position, line) from exc


def _load_tree(args) -> NcpdTree:
    if args.tree is None:
        raise CliError("this command needs direction data: pass --tree", EXIT_PARSE)
    return _parse_lines(_read(args.tree), parse_ncpd)


def _emit(args, payload: dict, text_lines: Sequence[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(text_lines))


# --- analyze -----------------------------------------------------------------

def _tree_summary(t: NcpdTree, budget: int, reflect: bool) -> dict:
    report = min_inflections(t, budget)
    return {
        "tree": t.to_text(),
        "canonical": canonical_code(t, reflect=reflect),
        "index": whitney_index(t),
        "nonflattening": is_nonflattening(t),
        "bounds": report.to_json(),
    }


def _summary_lines(s: dict) -> list[str]:
    b = s["bounds"]
    exact = "unknown" if b["exact"] is None else b["exact"]
    return [
        f"canonical: {s['canonical']}",
        f"index: {s['index']}",
        f"nonflattening: {str(s['nonflattening']).lower()}",
        f"inflections: lower={b['lower']} exact={exact} upper={b['upper']} "
        f"(jt={b['jt']}, bl={b['bl']})",
    ]


def cmd_analyze(args) -> int:
    budget = args.budget if args.budget is not None else default_budget()
    if args.gauss is not None:
        gd = _parse_lines(_read(args.gauss), parse_gauss_code)
        if not is_tree_like(gd):
            payload = {"input": "gauss", "word": list(gd.word), "tree_like": False}
            _emit(args, payload, [f"gauss: {gd}", "not tree-like"])
            return EXIT_DOMAIN
        base = gauss_to_plane_tree(gd).tree
        payload = {
            "input": "gauss",
            "word": list(gd.word),
            "tree_like": True,
            "dual_tree": base.to_json(),
            "plane_tree": plane_tree_code(base, reflect=args.reflect),
            "directions": None,
        }
        lines = [f"gauss: {gd}", "tree-like: true", f"dual tree: {plane_tree_code(base)}"]
        if args.all_directions:
            if base.n > ALL_DIRECTIONS_MAX_N:
                raise SizeLimit(f"--all-directions supports n <= {ALL_DIRECTIONS_MAX_N}, got {base.n}")
            rows = [_tree_summary(NcpdTree(base, d), budget, args.reflect)
                    for d in census.enumerate_ncpd(base)]
            payload["directions"] = rows
            for s in rows:
                b = s["bounds"]
                lines.append(f"  {s['tree']}: index={s['index']} "
                             f"nonflattening={str(s['nonflattening']).lower()} "
                             f"bounds={b['lower']}/{b['exact']}/{b['upper']}")
        else:
            lines.append("directions: not given (use --all-directions)")
        _emit(args, payload, lines)
        return EXIT_OK
    t = _load_tree(args)
    summary = _tree_summary(t, budget, args.reflect)
    payload = {
        "input": "tree",
        "word": list(plane_tree_to_gauss(t.base).word),
        "tree_like": True,
        "dual_tree": t.base.to_json(),
        "plane_tree": plane_tree_code(t.base, reflect=args.reflect),
        **summary,
    }
    lines = [f"tree: {t.to_text()}", f"gauss: {plane_tree_to_gauss(t.base)}",
             "tree-like: true"] + _summary_lines(summary)
    _emit(args, payload, lines)
    return EXIT_OK


# --- minimize ----------------------------------------------------------------

def cmd_minimize(args) -> int:
    t = _load_tree(args)
    report = min_inflections(t, args.budget)
    print(json.dumps(report.to_json(), sort_keys=True))
    return EXIT_LIMIT if report.exact is None else EXIT_OK


# --- count / enumerate ---------------------------------------------------------

def cmd_count(args) -> int:
    if args.gauss is None and args.tree is None:
        if args.n is None:
            raise CliError("count needs --gauss, --tree or --n", EXIT_PARSE)
        if not 1 <= args.n <= census.MAX_N:
            raise SizeLimit(f"counting supports 1 <= n <= {census.MAX_N}, got {args.n}")
        payload = {"n": args.n, "total_ncpd": census.count_total_ncpd(args.n),
                   "plane_trees": len(census.enumerate_plane_trees(args.n))}
        _emit(args, payload, [f"n: {args.n}", f"ncpd maps per plane tree: {payload['total_ncpd']}",
                              f"plane trees: {payload['plane_trees']}"])
        return EXIT_OK
    if args.gauss is not None:
        gd = _parse_lines(_read(args.gauss), parse_gauss_code)
        base = gauss_to_plane_tree(gd).tree
    else:
        base = _load_tree(args).base
    row = census.orbit_count(base, document=args.document)
    lines = [f"tree: {row.tree}", f"n: {row.n}", f"symmetry: Z/{row.p} about {row.center_kind} {row.center}",
             f"ncpd maps: {row.total_ncpd}", f"classes: {row.orbit_count}",
             f"formula: {row.formula_value} ({'agrees' if row.agreement else 'DISAGREES'})"]
    lines += census.discrepancies([row])
    _emit(args, row.to_json(), lines)
    if args.strict and _strict_failures([row]):
        return EXIT_DISAGREE
    return EXIT_OK


def _strict_failures(rows) -> list:
    return [r for r in rows
            if not r.agreement or (r.symmetry is not None and not r.symmetry.lattice_agrees)]


def cmd_enumerate(args) -> int:
    if args.n is None:
        raise CliError("enumerate needs --n", EXIT_PARSE)
    if args.n > census.MAX_N or args.n < 1:
        raise SizeLimit(f"enumeration supports 1 <= n <= {census.MAX_N}, got {args.n}")
    n_min = args.n if args.from_n is None else args.from_n
    rows = census.census_table(args.n, n_min=n_min, document=args.document, workers=args.workers)
    notes = census.discrepancies(rows)
    if args.json:
        print(json.dumps({"rows": [r.to_json() for r in rows], "discrepancies": notes},
                         sort_keys=True))
    else:
        sys.stdout.write(census.rows_to_csv(rows))
    for line in notes:
        print(f"note: {line}", file=sys.stderr)
    if args.strict and _strict_failures(rows):
        print(f"strict: {len(_strict_failures(rows))} disagreeing rows", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


# --- render ----------------------------------------------------------------------

def cmd_render(args) -> int:
    from . import render

    t = _load_tree(args)
    rc = render.realize(t, seed=args.seed)
    word = render.verify_gauss(rc)
    if word != plane_tree_to_gauss(t.base):
        raise RealizationFailed("realized Gauss word does not match the tree", t.to_text())
    sigma, marks = None, ()
    if args.coorient == "witness":
        report = min_inflections(t, args.budget)
        if report.witness is not None:
            sigma = report.witness
            marks = inflecting_passages(t, sigma) if t.n > 1 else ()
    elif args.coorient == "continuous":
        labels = coorientation(t).label
        from .tree import traversal
        sigma = [labels[v] for v, _ in traversal(t).sides]
    svg = render.to_svg(rc, width=args.width, height=args.height, coorientation=sigma,
                        inflections=marks)
    if args.svg and args.svg != "-":
        Path(args.svg).write_text(svg)
    elif not args.json:
        sys.stdout.write(svg)
    if args.json:
        payload = {
            "tree": t.to_text(),
            "crossings": len(rc.crossings),
            "word": list(word.word),
            "turning": render.turning_number(rc),
            "index": whitney_index(t),
            "numeric_inflections": render.numeric_inflections(rc),
            "convex_layout": rc.convex,
            "samples": int(len(rc.samples)),
            "svg": args.svg if args.svg and args.svg != "-" else None,
        }
        print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


# --- entry point -------------------------------------------------------------------

def _input_flags(p: argparse.ArgumentParser, gauss: bool = True) -> None:
    group = p.add_mutually_exclusive_group()
    if gauss:
        group.add_argument("--gauss", metavar="CODE", help="Gauss code ('-' stdin, '@file')")
    group.add_argument("--tree", metavar="TEXT", help="ncpd-tree text ('-' stdin, '@file')")
    if not gauss:
        p.set_defaults(gauss=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="tree-likeness, index, nonflattening and bounds")
    _input_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--all-directions", action="store_true",
                   help=f"summarize every direction map of a Gauss input (n <= {ALL_DIRECTIONS_MAX_N})")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--reflect", action="store_true", help="identify mirror images in codes")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("minimize", help="bound report as JSON")
    _input_flags(p, gauss=False)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("count", help="curve classes on one plane tree, or totals for --n")
    _input_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--document", action="store_true", help="record stabilizer counts both ways")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="census table (CSV by default)")
    p.add_argument("--n", type=int)
    p.add_argument("--from", dest="from_n", type=int)
    p.add_argument("--csv", action="store_true", help="CSV output (default)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--strict", action="store_true", help="exit 4 on any disagreement")
    p.add_argument("--document", action="store_true", help="record stabilizer counts both ways")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("render", help="realize the curve and write SVG")
    _input_flags(p, gauss=False)
    p.add_argument("--svg", metavar="PATH", help="output file ('-' or omitted: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coorient", choices=("none", "witness", "continuous"), default="none")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--width", type=int, default=480)
    p.add_argument("--height", type=int, default=480)
    p.add_argument("--json", action="store_true", help="print a summary line")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotTreeLike, CollidingDirections) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SizeLimit as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (RealizationFailed, TangentialCrossing) as exc:
        print(f"render failed: {exc}", file=sys.stderr)
        return EXIT_DISAGREE


if __name__ == "__main__":
    sys.exit(main())
