"""Hasse diagrams in DOT: one rank per level, cover edges only, retraction
arrows dashed."""

from __future__ import annotations

from typing import Sequence

from .poset import Poset, bits


def to_dot(P: Poset, retraction: Sequence[int] | None = None, name: str | None = None) -> str:
    ls = P.ls
    title = name or P.name or "P"
    out = [f'digraph "{title}" {{', "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    image = set(retraction) if retraction is not None else set()
    for k in range(ls.height + 1):
        pts = ls.level_points(k)
        out.append(f"  {{ rank=same; {' '.join(str(x) for x in pts)}; }}")
    for x in P.points:
        if x in image:
            out.append(f"  {x} [style=filled, fillcolor=lightgray];")
    for x in P.points:
        for y in bits(P.upper_covers(x)):
            out.append(f"  {x} -> {y} [arrowhead=none];")
    if retraction is not None:
        for x in P.points:
            if retraction[x] != x:
                out.append(f"  {x} -> {retraction[x]} [style=dashed, color=red, constraint=false];")
    out.append("}")
    return "\n".join(out) + "\n"
