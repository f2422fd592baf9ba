"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import assoc, coords, killing, staeckel

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ROUNDTRIP_TOL = 1e-9
ORTHO_TOL = 1e-6


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}: {exc}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}: {exc}") from None


def _read_text(source: str) -> str:
    if source.startswith("@"):
        return Path(source[1:]).read_text()
    p = Path(source)
    if not source.lstrip().startswith(("(", "[", "{", "L", '"')) and p.exists():
        return p.read_text()
    return source


def load_labeled_tree(source: str) -> coords.LabeledTree:
    """A labelled tree from a file path, a JSON literal, or the tree grammar.

    Trees given in the plain grammar get evenly spaced parameters at every node.
    """
    text = _read_text(source).strip()
    if text.startswith(("{", "[", '"')):
        obj = json.loads(text)
        if isinstance(obj, list):
            return coords.LabeledTree.from_tree(assoc.tree_from_json(obj))
        return coords.labeled_from_json(obj)
    return coords.LabeledTree.from_tree(assoc.parse_tree(text))


def _coords_to_json(t: coords.LabeledTree, c: dict) -> list[dict]:
    return [{"path": list(p), "values": [float(v) for v in c[p]]} for p, _ in t.walk()]


def _coords_from_json(obj) -> dict:
    return {tuple(e["path"]): [float(v) for v in e["values"]] for e in obj}


# -- subcommands -------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if (args.sphere is None) == (args.leaves is None):
        raise UsageError("give exactly one of --sphere or --leaves")
    sphere = args.sphere if args.sphere is not None else args.leaves - 1
    if not 1 <= sphere <= 12:
        raise UsageError("sphere dimension must lie in 1..12")
    if args.brute_force and sphere > 9:
        raise UsageError("brute force is limited to sphere dimension <= 9")
    table = assoc.devadoss_read(sphere + 1)
    row = table.sphere_row(sphere)
    result = {"sphere": sphere, "leaves": sphere + 1, "counts": list(row), "total": sum(row)}
    status = EXIT_OK
    if args.brute_force:
        _, dys = assoc.face_counts_bruteforce(sphere + 1)
        brute = list(dys[::-1])
        result["bruteforce"] = {"counts": brute, "total": sum(brute)}
        result["agree"] = brute == list(row)
        status = EXIT_OK if result["agree"] else EXIT_FAIL
    if args.json:
        print(_dump(result))
    else:
        print(" ".join(map(str, row)) + f" | total {sum(row)}")
        if args.brute_force:
            flag = "agree" if result["agree"] else "DISAGREE"
            print("brute force: " + " ".join(map(str, result["bruteforce"]["counts"]))
                  + f" | total {result['bruteforce']['total']} | {flag}")
    return status


def cmd_trees(args) -> int:
    if not 1 <= args.leaves <= 9:
        raise UsageError("--leaves must lie in 1..9")
    if args.internal is not None and not 1 <= args.internal <= max(args.leaves - 1, 1):
        raise UsageError(f"--internal must lie in 1..{max(args.leaves - 1, 1)}")
    trees = assoc.enumerate_trees(args.leaves, args.internal)
    if args.dyslexic:
        trees = sorted({assoc.dyslexic_canonical(t) for t in trees})
    if args.json:
        print(_dump([assoc.tree_to_json(t) for t in trees]))
    else:
        for t in trees:
            print(assoc.format_tree(t))
    return EXIT_OK


def _emit_span(span: staeckel.StaeckelSpan) -> int:
    print(_dump(span.to_json()))
    report = staeckel.verify_span(span)
    if not report.passed:
        print(_dump(report.to_json()), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_staeckel(args) -> int:
    if args.kind == "gaudin":
        try:
            span = staeckel.gaudin_span(_rationals(args.z))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.kind == "jm":
        if args.n < 2:
            raise UsageError("--n must be >= 2")
        span = staeckel.jm_span(args.n)
    else:
        span = staeckel.staeckel_from_tree(load_labeled_tree(args.tree))
    return _emit_span(span)


def cmd_verify(args) -> int:
    try:
        obj = json.loads(Path(args.span).read_text())
        span = staeckel.StaeckelSpan.from_json(obj)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read span: {exc}") from None
    report = staeckel.verify_span(span)
    print(_dump(report.to_json()))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_relations(args) -> int:
    if not 3 <= args.N <= 8:
        raise UsageError("--N must lie in 3..8")
    report = killing.verify_kd_relations(args.N, args.bracket)
    print(_dump(report.to_json()))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_coords(args) -> int:
    t = load_labeled_tree(args.tree)
    if t.is_leaf:
        raise UsageError("the tree needs at least two leaves")
    if args.action == "eval":
        if args.x is None:
            raise UsageError("eval needs --x")
        c = coords.tree_coords_forward(t, _floats(args.x))
        print(_dump({"coords": _coords_to_json(t, c)}))
        return EXIT_OK
    if args.action == "invert":
        if args.coords is None:
            raise UsageError("invert needs --coords")
        c = _coords_from_json(json.loads(_read_text(args.coords)))
        signs = [int(s) for s in _floats(args.signs)] if args.signs else None
        x = coords.tree_coords_inverse(t, c, signs)
        print(_dump({"x": [float(v) for v in x]}))
        return EXIT_OK
    if args.seed is None:
        raise UsageError(f"{args.action} is randomized and needs --seed")
    rng = np.random.default_rng(args.seed)
    if args.action == "roundtrip":
        worst = 0.0
        for _ in range(args.samples):
            x = coords.random_generic_point(t, rng)
            c = coords.tree_coords_forward(t, x)
            y = coords.tree_coords_inverse(t, c, [1 if v >= 0 else -1 for v in x])
            back = coords.tree_coords_forward(t, y)
            err = max(
                float(np.max(np.abs(y - x))),
                max(abs(a - b) for p in c for a, b in zip(c[p], back[p])),
            )
            worst = max(worst, err)
        ok = worst <= ROUNDTRIP_TOL
        print(_dump({"samples": args.samples, "max_error": worst, "tolerance": ROUNDTRIP_TOL,
                     "status": "pass" if ok else "fail"}))
        return EXIT_OK if ok else EXIT_FAIL
    worst = 0.0
    for _ in range(args.samples):
        x = coords.random_generic_point(t, rng)
        worst = max(worst, coords.orthogonality_check(t, x))
    ok = worst <= ORTHO_TOL
    print(_dump({"samples": args.samples, "max_offdiag": worst, "tolerance": ORTHO_TOL,
                 "status": "pass" if ok else "fail"}))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepcoords", description="Separation coordinates and Stäckel systems on spheres.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="canonical-form counts for S^n")
    p.add_argument("--sphere", type=int)
    p.add_argument("--leaves", type=int)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("trees", help="list planar rooted trees")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--internal", type=int)
    p.add_argument("--dyslexic", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("staeckel", help="construct a Stäckel system")
    ssub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = ssub.add_parser("gaudin")
    g.add_argument("--z", required=True, help="comma-separated rationals, e.g. 0,1/2,3")
    j = ssub.add_parser("jm")
    j.add_argument("--n", type=int, required=True)
    f = ssub.add_parser("from-tree")
    f.add_argument("tree", help="labelled tree: JSON file, JSON literal or tree grammar")
    p.set_defaults(func=cmd_staeckel)

    p = sub.add_parser("verify", help="verify a span JSON file")
    p.add_argument("span")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("relations", help="check the Kohno-Drinfeld relations")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--bracket", choices=killing.BRACKETS, required=True)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("coords", help="tree-composed separation coordinates")
    p.add_argument("action", choices=("eval", "invert", "roundtrip", "ortho"))
    p.add_argument("--tree", required=True)
    p.add_argument("--x")
    p.add_argument("--coords")
    p.add_argument("--signs")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(func=cmd_coords)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"sepcoords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except assoc.TreeParseError as exc:
        print(f"sepcoords: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (coords.CoordinateError, json.JSONDecodeError) as exc:
        print(f"sepcoords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
