"""Plain-text instance files.

One record per line::

    root <id>
    v <id> <prize>
    e <id> <u> <v> <cost>

Rationals are written ``num/den``; a bare integer is shorthand for ``n/1``.
Blank lines and ``#`` comments are ignored. :func:`serialize_instance` emits
a canonical form (root, then vertices and edges by id) so that parsing and
re-serializing is byte-stable.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import InstanceFormatError
from .graph import Instance, build_instance, format_rational, parse_rational


def parse_instance(text: str) -> Instance:
    vertices: list[tuple[int, object]] = []
    edges: list[tuple[int, int, int, object]] = []
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *fields = line.split()
        try:
            if tag == "v" and len(fields) == 2:
                vertices.append((int(fields[0]), parse_rational(fields[1])))
            elif tag == "e" and len(fields) == 4:
                eid, u, v = (int(x) for x in fields[:3])
                edges.append((eid, u, v, parse_rational(fields[3])))
            elif tag == "root" and len(fields) == 1:
                if root is not None:
                    raise InstanceFormatError("root given twice")
                root = int(fields[0])
            else:
                raise InstanceFormatError(f"unrecognised record {line!r}")
        except ValueError as exc:
            raise InstanceFormatError(f"line {lineno}: {exc}") from None
    if root is None:
        raise InstanceFormatError("missing root record")
    return build_instance(vertices, edges, root)


def serialize_instance(g: Instance) -> str:
    lines = [f"root {g.root}"]
    lines += [f"v {v} {format_rational(g.prizes[v])}" for v in sorted(g.prizes)]
    for eid in sorted(g.edges):
        e = g.edges[eid]
        lines.append(f"e {eid} {e.u} {e.v} {format_rational(e.cost)}")
    return "\n".join(lines) + "\n"


def read_instance(path: str | os.PathLike[str]) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(g: Instance, path: str | os.PathLike[str]) -> None:
    Path(path).write_text(serialize_instance(g), encoding="utf-8")
