"""Terminal files and export documents.

Terminal files hold one point per line, two reals separated by
whitespace; blank lines are skipped. Export documents are canonical JSON
(sorted keys, two-space indent, trailing newline) carrying a
format_version so downstream parsers can evolve.
"""

from __future__ import annotations

import json
import warnings
from typing import Any

from .errors import DuplicatePointWarning, ParseError
from .fulltree import SteinerTree, validate_tree
from .geometry import DEFAULT_TOLERANCES, Point, Tolerances, dist
from .hull import SteinerHull
from .mst import SpanningTree, gp_interval
from .session import Session, residual_hull, total_length

FORMAT_VERSION = 1


def read_terminals(text: str, tol: Tolerances = DEFAULT_TOLERANCES) -> list[Point]:
    """Parse a terminal file, preserving input order.

    Raises ParseError with the line number on malformed lines; coincident
    points only warn, since the workflow tolerates (and later flags) them.
    """
    pts: list[Point] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two coordinates, got {len(tokens)}", line=lineno)
        try:
            x, y = float(tokens[0]), float(tokens[1])
            p = Point(x, y)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        for q in pts:
            if dist(p, q) < tol.eps_pt:
                warnings.warn(
                    f"line {lineno}: point ({p.x}, {p.y}) coincides with an earlier terminal",
                    DuplicatePointWarning,
                    stacklevel=2,
                )
                break
        pts.append(p)
    return pts


def write_terminals(pts: list[Point]) -> str:
    """Inverse of read_terminals up to formatting (values round-trip exactly)."""
    return "".join(f"{p.x!r} {p.y!r}\n" for p in pts)


def _dump(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _tree_payload(tree: SteinerTree) -> dict[str, Any]:
    return {
        "terminal_indices": list(tree.terminal_indices),
        "terminals": [[p.x, p.y] for p in tree.terminals],
        "steiner_points": [[p.x, p.y] for p in tree.steiner_points],
        "edges": [[list(a), list(b)] for a, b in tree.edges],
        "length": tree.length,
        "valid": tree.valid,
    }


def export_tree(obj: SteinerTree | Session, tol: Tolerances = DEFAULT_TOLERANCES) -> str:
    """Canonical export document for a tree or a whole session."""
    if isinstance(obj, SteinerTree):
        doc = {"format_version": FORMAT_VERSION, "kind": "tree", **_tree_payload(obj)}
        doc["violations"] = [
            {"kind": v.kind, "at": list(v.at), "value": v.value, "detail": v.detail}
            for v in validate_tree(obj, tol)
        ]
        return _dump(doc)
    return _dump(session_document(obj))


def session_document(session: Session) -> dict[str, Any]:
    """The session render model: everything a client needs to draw the
    current state, deterministic in the state alone."""
    lo, hi = gp_interval(session.prim_tree.length)
    hull_doc = None
    if session.hull is not None:
        hull_doc = {
            "vertices": list(session.hull.vertex_indices),
            "interior": list(session.hull.interior_indices),
            "markers": session.hull.markers,
        }
    return {
        "format_version": FORMAT_VERSION,
        "kind": "session",
        "phase": session.phase.value,
        "terminals": [[p.x, p.y] for p in session.terminals],
        "prim_edges": [list(e) for e in session.prim_tree.edges],
        "lprim": session.prim_tree.length,
        "gp_lower": lo,
        "gp_upper": hi,
        "ltree": total_length(session),
        "hull": hull_doc,
        "residual_hull": list(residual_hull(session)),
        "omitted": sorted(session.omitted),
        "connected_components": [list(c) for c in session.connection.components()],
        "subtrees": [
            {"kind": sub.kind, **_tree_payload(sub.tree)} for sub in session.committed
        ],
        "undo_depth": len(session.undo_stack),
    }


def export_mst(tree: SpanningTree, pts: list[Point]) -> str:
    lo, hi = gp_interval(tree.length)
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "kind": "mst",
            "terminals": [[p.x, p.y] for p in pts],
            "edges": [list(e) for e in tree.edges],
            "length": tree.length,
            "gp_lower": lo,
            "gp_upper": hi,
        }
    )


def export_hull(vertices: list[int], pts: list[Point]) -> str:
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "kind": "hull",
            "terminals": [[p.x, p.y] for p in pts],
            "vertices": list(vertices),
        }
    )


def export_steiner_hull(hull: SteinerHull, pts: list[Point]) -> str:
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "kind": "steiner_hull",
            "terminals": [[p.x, p.y] for p in pts],
            "vertices": list(hull.vertex_indices),
            "interior": list(hull.interior_indices),
            "markers": hull.markers,
        }
    )


def export_interval(lower: float, upper: float) -> str:
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "kind": "gp_interval",
            "lower": lower,
            "upper": upper,
        }
    )


def import_tree(text: str) -> SteinerTree:
    """Rebuild a SteinerTree from its export document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a valid export document: {exc}") from None
    if doc.get("kind") != "tree":
        raise ParseError(f"expected a tree document, got kind={doc.get('kind')!r}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        return SteinerTree(
            terminal_indices=tuple(doc["terminal_indices"]),
            terminals=tuple(Point(x, y) for x, y in doc["terminals"]),
            steiner_points=tuple(Point(x, y) for x, y in doc["steiner_points"]),
            edges=tuple(
                ((a[0], int(a[1])), (b[0], int(b[1]))) for a, b in doc["edges"]
            ),
            length=float(doc["length"]),
            valid=bool(doc["valid"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tree document: {exc}") from None
