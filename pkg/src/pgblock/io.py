"""Text formats for points, subspaces, point sets, spreads and tower descriptors."""

from __future__ import annotations

import json

from .gf import tower_from_descriptor
from .pg import Subspace, ProjPoint, space
from .reduction import PointSet

SPREAD_FORMAT_VERSION = 1


def format_vector(vec):
    return " ".join(str(int(x)) for x in vec)


def parse_vector(text):
    return [int(x) for x in text.replace(",", " ").split()]


def format_subspace(S):
    return "; ".join(format_vector(r) for r in S.rows)


def parse_subspace(line, sp):
    rows = [parse_vector(part) for part in line.split(";") if part.strip()]
    return Subspace(sp, rows)


def _object_lines(text):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line


def read_subspaces(path, sp):
    with open(path) as fh:
        return [parse_subspace(line, sp) for line in _object_lines(fh.read())]


def read_points(path, sp):
    """Points, one coordinate vector per line (not necessarily normalized)."""
    out = []
    with open(path) as fh:
        for line in _object_lines(fh.read()):
            out.append(ProjPoint.from_vector(sp, parse_vector(line)))
    return out


def write_subspaces(path, subs):
    with open(path, "w") as fh:
        for S in subs:
            fh.write(format_subspace(S) + "\n")


def pointset_text(B, tower):
    head = {"n": B.space.n, "tower": tower.descriptor(), "size": len(B)}
    lines = ["# pointset " + json.dumps(head, sort_keys=True)]
    lines += [str(int(i)) for i in B.members]
    return "\n".join(lines) + "\n"


def parse_pointset(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# pointset "):
        raise ValueError("missing point set header")
    head = json.loads(lines[0][len("# pointset "):])
    tower = tower_from_descriptor(head["tower"])
    sp = space(head["n"], tower.top)
    members = [int(x) for x in _object_lines("\n".join(lines[1:]))]
    B = PointSet(sp, members)
    if len(B) != head.get("size", len(B)):
        raise ValueError("point set size does not match header")
    return B, tower


def write_pointset(path, B, tower):
    with open(path, "w") as fh:
        fh.write(pointset_text(B, tower))


def read_pointset(path):
    with open(path) as fh:
        return parse_pointset(fh.read())


def spread_document(spread):
    T = spread.tower
    manifest = {"p": T.p, "h": T.h, "t": T.t, "n": spread.n,
                "format-version": SPREAD_FORMAT_VERSION}
    records = [{"index": i, "rows": [list(map(int, r)) for r in spread.element_rows(i)]}
               for i in range(len(spread))]
    return {"manifest": manifest, "tower": T.descriptor(), "elements": records}


def tower_json(tower):
    return json.dumps(tower.descriptor(), sort_keys=True)


def tower_from_json(text):
    return tower_from_descriptor(json.loads(text))
