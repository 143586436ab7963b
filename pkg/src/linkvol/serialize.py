"""JSON and PD-code serializations of diagrams.

JSON layout::

    {
      "crossings": [{"id": 1, "slots": ["x1.0", "x1.1", "x1.2", "x1.3"], "over_axis": 0}, ...],
      "disks": [{"id": 1, "legs": {"NE": "b1.NE", "NW": ..., "SW": ..., "SE": ...},
                 "content": null | "p/q"}, ...],
      "pairing": [["x1.0", "x2.3"], ...],
      "coloring": {"x1.0": "12", ...}          (optional; keyed by arc id)
    }

Half-edge ids are opaque strings or integers; they only have to be used
consistently.  Slots are listed counterclockwise.  An arc id is the id of the
smallest half-edge (in the package's internal order) on the arc.
"""
from __future__ import annotations

import json
from typing import Optional

from .covers import Color, Coloring, arc_colors, arcs, validate_coloring
from .diagram import LEG_INDEX, LEG_NAMES, Diagram, DiagramError, expand, slots
from .tangles import Slope, SlopeError


class ParseError(ValueError):
    """Malformed input; ``location`` says where (a JSON path or line:column)."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def half_edge_name(h) -> str:
    kind, vid, slot = h
    if kind == "X":
        return f"x{vid}.{slot}"
    return f"b{vid}.{LEG_NAMES[slot]}"


def to_dict(d: Diagram, coloring: Optional[Coloring] = None) -> dict:
    out = {
        "crossings": [
            {"id": x, "slots": [half_edge_name(("X", x, s)) for s in range(4)],
             "over_axis": d.crossings[x]}
            for x in sorted(d.crossings)
        ],
        "disks": [
            {"id": b,
             "legs": {name: half_edge_name(("B", b, i)) for i, name in enumerate(LEG_NAMES)},
             "content": None if d.disks[b] is None else str(d.disks[b])}
            for b in sorted(d.disks)
        ],
        "pairing": [[half_edge_name(h), half_edge_name(p)] for h, p in d.edges()],
    }
    if coloring is not None:
        out["coloring"] = {half_edge_name(a): col.value
                           for a, col in sorted(arc_colors(d, coloring).items())}
    return out


def to_json(d: Diagram, coloring: Optional[Coloring] = None) -> str:
    return json.dumps(to_dict(d, coloring), indent=2)


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field '{key}'", where)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"field '{key}' has the wrong type", f"{where}.{key}")
    return val


def _hid(val, where):
    if isinstance(val, bool) or not isinstance(val, (str, int)):
        raise ParseError("half-edge ids must be strings or integers", where)
    return val


def from_dict(data) -> tuple:
    """Inverse of :func:`to_dict`; returns ``(diagram, coloring or None)``."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "$")
    names = {}
    crossings = {}
    for i, cx in enumerate(_need(data, "crossings", "$", list)):
        where = f"$.crossings[{i}]"
        cid = _need(cx, "id", where, int)
        sl = _need(cx, "slots", where, list)
        if len(sl) != 4:
            raise ParseError("a crossing has exactly four slots", f"{where}.slots")
        ax = _need(cx, "over_axis", where, int)
        if ax not in (0, 1):
            raise ParseError("over_axis must be 0 or 1", f"{where}.over_axis")
        if cid in crossings:
            raise ParseError(f"duplicate crossing id {cid}", where)
        crossings[cid] = ax
        for s, h in enumerate(sl):
            h = _hid(h, f"{where}.slots[{s}]")
            if h in names:
                raise ParseError(f"half-edge {h!r} used twice", f"{where}.slots[{s}]")
            names[h] = ("X", cid, s)
    disks = {}
    for i, dk in enumerate(data.get("disks", [])):
        where = f"$.disks[{i}]"
        bid = _need(dk, "id", where, int)
        legs = _need(dk, "legs", where, dict)
        if set(legs) != set(LEG_NAMES):
            raise ParseError("legs must be exactly NE, NW, SW, SE", f"{where}.legs")
        content = dk.get("content")
        if content is not None:
            try:
                content = Slope.parse(str(content))
            except (SlopeError, ValueError) as exc:
                raise ParseError(str(exc), f"{where}.content") from None
        if bid in disks:
            raise ParseError(f"duplicate disk id {bid}", where)
        disks[bid] = content
        for name, h in legs.items():
            h = _hid(h, f"{where}.legs.{name}")
            if h in names:
                raise ParseError(f"half-edge {h!r} used twice", f"{where}.legs.{name}")
            names[h] = ("B", bid, LEG_INDEX[name])
    pairing = {}
    for i, pr in enumerate(_need(data, "pairing", "$", list)):
        where = f"$.pairing[{i}]"
        if not isinstance(pr, list) or len(pr) != 2:
            raise ParseError("each pairing entry is a two-element list", where)
        a, b = (_hid(x, where) for x in pr)
        for x in (a, b):
            if x not in names:
                raise ParseError(f"unknown half-edge {x!r}", where)
        ha, hb = names[a], names[b]
        if ha in pairing or hb in pairing:
            raise ParseError("half-edge paired twice", where)
        pairing[ha] = hb
        pairing[hb] = ha
    try:
        d = Diagram(crossings, disks, pairing)
    except DiagramError as exc:
        raise ParseError(str(exc), "$.pairing") from None
    coloring = None
    if "coloring" in data:
        coloring = _coloring_from(d, data["coloring"], names)
    return d, coloring


def _coloring_from(d: Diagram, raw, names) -> Coloring:
    if not isinstance(raw, dict):
        raise ParseError("coloring must be an object", "$.coloring")
    by_id = {a.id: a for a in arcs(d)}
    cols = {}
    for name, val in raw.items():
        where = f"$.coloring.{name}"
        h = names.get(name)
        if h is None:
            # JSON object keys are strings; allow integer half-edge ids
            try:
                h = names.get(int(name))
            except ValueError:
                h = None
        if h is None:
            raise ParseError(f"unknown half-edge {name!r}", where)
        arc = by_id.get(d.edge_key(h))
        if arc is None:
            raise ParseError(f"{name!r} is not the id of an arc", where)
        try:
            col = Color(str(val))
        except ValueError:
            raise ParseError(f"unknown color {val!r}", where) from None
        for k in arc.edges:
            cols[k] = col
    missing = [a.id for a in by_id.values() if a.id not in cols]
    if missing:
        raise ParseError(f"{len(missing)} arc(s) without a color", "$.coloring")
    c = Coloring(cols)
    if not validate_coloring(d, c):
        raise ParseError("coloring violates the crossing relation", "$.coloring")
    return c


def from_json(text: str) -> tuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return from_dict(data)


# -- PD code ----------------------------------------------------------------------

def to_pd_code(d: Diagram) -> str:
    """PD code: ``X[a,b,c,d]`` per crossing, starting with the incoming
    under-strand and going counterclockwise.

    Filled disks are expanded first; empty disks are rejected.  Components are
    oriented from their smallest half-edge and numbered in order; crossings are
    listed by their incoming under-label.
    """
    if any(t is None for t in d.disks.values()):
        raise DiagramError("PD code needs every disk filled")
    if d.disks:
        d = expand(d)[0]
    label = {}
    incoming = set()
    n = 0
    for h in sorted(h for h in d.pairing if h[0] == "X"):
        if d.edge_key(h) in label:
            continue
        cur = h
        while d.edge_key(cur) not in label:
            n += 1
            label[d.edge_key(cur)] = n
            arrive = d.pairing[cur]
            incoming.add(arrive)
            cur = ("X", arrive[1], (arrive[2] + 2) % 4)
    out = []
    for x in sorted(d.crossings):
        ax = d.crossings[x]
        under = [s for s in (1 - ax, 3 - ax) if ("X", x, s) in incoming]
        s0 = under[0]
        labels = [label[d.edge_key(("X", x, (s0 + i) % 4))] for i in range(4)]
        out.append(labels)
    out.sort()
    return " ".join("X[" + ",".join(map(str, labels)) + "]" for labels in out)
