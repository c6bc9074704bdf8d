"""Batch front door: one subcommand per pipeline stage.

rprim and mksaw emit reordered terminal files so stages chain through
pipes ("-" reads stdin); the other stages print export documents.

Exit codes: 0 success, 2 usage, 3 unreadable or invalid input data,
4 no feasible full tree.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fileio
from .errors import SteinerlabError
from .fulltree import Infeasible, best_full_tree
from .geometry import Point, Tolerances
from .hull import build_steiner_hull, convex_hull
from .mst import gp_interval, prim
from .ordering import mksaw, rprim_order

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INFEASIBLE = 4


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_points(path: str, tol: Tolerances) -> list[Point]:
    return fileio.read_terminals(_read_source(path), tol)


def _tolerances(args: argparse.Namespace) -> Tolerances:
    return Tolerances(angle_tol_deg=args.angle_tol, eps_pt=args.eps)


def _add_common(sub: argparse.ArgumentParser, with_file: bool = True) -> None:
    if with_file:
        sub.add_argument("file", help="terminal file, or - for stdin")
    sub.add_argument("--angle-tol", type=float, default=2.0,
                     help="junction angle tolerance in degrees (default 2.0)")
    sub.add_argument("--eps", type=float, default=1e-9,
                     help="point coincidence tolerance (default 1e-9)")
    sub.add_argument("--format", choices=("structured", "text"), default="structured",
                     help="structured export document or terse text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinerlab",
        description="Euclidean Steiner tree workbench, stage by stage",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser("prim", help="minimum spanning tree of a terminal file"))
    _add_common(subs.add_parser("hull", help="convex hull of a terminal file"))
    _add_common(subs.add_parser("lune", help="Steiner hull (convex hull + lune refinement + markers)"))
    _add_common(subs.add_parser("rprim", help="reorder terminals along the diameter projection"))
    _add_common(subs.add_parser("mksaw", help="rearrange terminals into sawtooth order"))
    fulltree = subs.add_parser("fulltree", help="best full Steiner tree over all terminals")
    _add_common(fulltree)
    fulltree.add_argument("--cap", type=int, default=64,
                          help="topology enumeration cap (default 64)")

    bound = subs.add_parser("bound", help="interval a Steiner tree length should land in")
    bound.add_argument("lprim", type=float, help="spanning tree length")
    bound.add_argument("--format", choices=("structured", "text"), default="text")

    serve = subs.add_parser("serve", help="run the session HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8631)
    serve.add_argument("--snapshot-dir", default=None,
                       help="directory for resumable session snapshots")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except OSError as exc:
        print(f"steinerlab: cannot read input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SteinerlabError as exc:
        print(f"steinerlab: {exc}", file=sys.stderr)
        return EXIT_DATA


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "bound":
        lo, hi = gp_interval(args.lprim)
        if args.format == "text":
            print("The length of a SMT ranges from/to")
            print(f"{lo:.4f}")
            print(f"{hi:.4f}")
        else:
            sys.stdout.write(fileio.export_interval(lo, hi))
        return EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(create_app(snapshot_dir=args.snapshot_dir), host=args.host, port=args.port)
        return EXIT_OK

    tol = _tolerances(args)
    pts = _load_points(args.file, tol)

    if args.command == "prim":
        tree = prim(pts)
        if args.format == "text":
            lo, hi = gp_interval(tree.length)
            print(f"Lprim = {tree.length:.4f}")
            print(f"SMT bounds: {lo:.4f} .. {hi:.4f}")
            for i, j in tree.edges:
                print(f"{i} {j}")
        else:
            sys.stdout.write(fileio.export_mst(tree, pts))
        return EXIT_OK

    if args.command == "hull":
        vertices = convex_hull(pts)
        if args.format == "text":
            print(" ".join(str(v) for v in vertices))
        else:
            sys.stdout.write(fileio.export_hull(vertices, pts))
        return EXIT_OK

    if args.command == "lune":
        shull = build_steiner_hull(pts)
        if args.format == "text":
            print(" ".join(str(v) for v in shull.vertex_indices))
            print(shull.markers)
        else:
            sys.stdout.write(fileio.export_steiner_hull(shull, pts))
        return EXIT_OK

    if args.command == "rprim":
        order = rprim_order(pts)
        sys.stdout.write(fileio.write_terminals([pts[i] for i in order]))
        return EXIT_OK

    if args.command == "mksaw":
        order = mksaw(pts)
        sys.stdout.write(fileio.write_terminals([pts[i] for i in order]))
        return EXIT_OK

    if args.command == "fulltree":
        out = best_full_tree(pts, tol, cap=args.cap)
        if isinstance(out, Infeasible):
            print(f"steinerlab: no valid full tree: {out.reason}", file=sys.stderr)
            return EXIT_INFEASIBLE
        if args.format == "text":
            print(f"length = {out.length:.4f}")
            print(f"steiner points = {len(out.steiner_points)}")
        else:
            sys.stdout.write(fileio.export_tree(out, tol))
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
