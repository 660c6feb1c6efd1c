"""Diagram builders: twist regions, rational tangles, sums, braid closures.

Tangles are port matchings with four boundary terminals named by compass
corner.  A rational tangle is grown batch by batch from its twist vector,
innermost batch first, so the finished tangle's slope is the continued
fraction a_k + 1/(a_{k-1} + ... + 1/a_1).  The last batch is always a run
of horizontal twists; even-length vectors therefore start from the vertical
crossingless tangle, odd-length ones from the horizontal.

Every builder returns a validated crossing code.  Positive twists all share
one handedness, so all-positive vectors yield alternating diagrams: checked
by callers via diagram_stats, together with planarity and the determinant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .diagrams import KnotDiagram
from .invariants import determinant
from .portgraph import PortDiagram

# corner names in counterclockwise order, as seen with north up
_CORNERS = ("nw", "sw", "se", "ne")

# port assignment per under-strand diagonal; ports run counterclockwise
# and the under strand always occupies ports 0 and 2
_PORT_OF = {
    "nwse": {"nw": 0, "sw": 1, "se": 2, "ne": 3},
    "nesw": {"ne": 0, "nw": 1, "sw": 2, "se": 3},
}

_serial = itertools.count()


def _terminal() -> tuple[str, int]:
    return ("t", next(_serial))


@dataclass
class Tangle:
    """A partial diagram with boundary terminals at the four corners."""

    pg: PortDiagram
    ends: dict[str, tuple[str, int]]


def zero_tangle() -> Tangle:
    """Two horizontal strands: nw-ne above, sw-se below."""
    pg = PortDiagram()
    ends = {c: _terminal() for c in _CORNERS}
    pg.link(ends["nw"], ends["ne"])
    pg.link(ends["sw"], ends["se"])
    return Tangle(pg, ends)


def infinity_tangle() -> Tangle:
    """Two vertical strands: nw-sw left, ne-se right."""
    pg = PortDiagram()
    ends = {c: _terminal() for c in _CORNERS}
    pg.link(ends["nw"], ends["sw"])
    pg.link(ends["ne"], ends["se"])
    return Tangle(pg, ends)


def _corner_ports(pg: PortDiagram, under_diag: str) -> dict[str, tuple[int, int]]:
    cid = pg.new_crossing()
    return {corner: (cid, port) for corner, port in _PORT_OF[under_diag].items()}


def twist_right(t: Tangle, sign: int) -> None:
    """Add one crossing between the ne and se boundary ends."""
    ports = _corner_ports(t.pg, "nwse" if sign > 0 else "nesw")
    x = t.pg.cut(t.ends["ne"])
    y = t.pg.cut(t.ends["se"])
    t.pg.link(x, ports["nw"])
    t.pg.link(y, ports["sw"])
    t.pg.link(t.ends["ne"], ports["ne"])
    t.pg.link(t.ends["se"], ports["se"])


def twist_bottom(t: Tangle, sign: int) -> None:
    """Add one crossing between the sw and se boundary ends."""
    ports = _corner_ports(t.pg, "nwse" if sign > 0 else "nesw")
    x = t.pg.cut(t.ends["sw"])
    y = t.pg.cut(t.ends["se"])
    t.pg.link(x, ports["nw"])
    t.pg.link(y, ports["ne"])
    t.pg.link(t.ends["sw"], ports["sw"])
    t.pg.link(t.ends["se"], ports["se"])


def continued_fraction(entries: Sequence[int]) -> Fraction:
    """a_k + 1/(a_{k-1} + ... + 1/a_1), the slope realized by rational_tangle."""
    value = Fraction(entries[0])
    for a in entries[1:]:
        value = a + (1 / value if value else Fraction(0))
    return value


def rational_tangle(entries: Sequence[int]) -> Tangle:
    """Build the twist-vector tangle, innermost batch first.

    Batches alternate so the final one twists horizontally; an even-length
    vector therefore starts with vertical twists on the vertical tangle.
    """
    if not entries or any(a == 0 for a in entries):
        raise ValueError("twist vector must be nonempty with nonzero entries")
    if len(entries) % 2:
        t = zero_tangle()
        horizontal = True
    else:
        t = infinity_tangle()
        horizontal = False
    for a in entries:
        op = twist_right if horizontal else twist_bottom
        s = 1 if a > 0 else -1
        for _ in range(abs(a)):
            op(t, s)
        horizontal = not horizontal
    return t


def rotate(t: Tangle) -> Tangle:
    """Quarter-turn a tangle by renaming its boundary corners."""
    t.ends = {"ne": t.ends["nw"], "se": t.ends["ne"],
              "sw": t.ends["se"], "nw": t.ends["sw"]}
    return t


def tangle_sum(a: Tangle, b: Tangle) -> Tangle:
    """Place b to the right of a, joining facing boundary ends."""
    offset = a.pg.n
    a.pg.n += b.pg.n

    def remap(end):
        if end[0] == "t":
            return end
        cid, port = end
        return (cid + offset, port)

    done = set()
    for u, v in b.pg.conn.items():
        if u in done:
            continue
        done.add(u)
        done.add(v)
        a.pg.link(remap(u), remap(v))
    a.pg.splice_out(a.ends["ne"], b.ends["nw"])
    a.pg.splice_out(a.ends["se"], b.ends["sw"])
    a.ends = {"nw": a.ends["nw"], "sw": a.ends["sw"],
              "ne": b.ends["ne"], "se": b.ends["se"]}
    return a


def numerator_closure(t: Tangle) -> KnotDiagram:
    """Join nw-ne and sw-se; the result must be a single closed strand."""
    t.pg.splice_out(t.ends["nw"], t.ends["ne"])
    t.pg.splice_out(t.ends["sw"], t.ends["se"])
    return t.pg.to_diagram()


def rational_knot(entries: Sequence[int]) -> KnotDiagram:
    """Close a rational tangle; determinant is the slope's numerator."""
    return numerator_closure(rational_tangle(entries))


def montesinos_knot(vectors: Sequence[Sequence[int]]) -> KnotDiagram:
    """Closure of a horizontal row of quarter-turned rational tangles."""
    if len(vectors) < 2:
        raise ValueError("need at least two constituent tangles")
    parts = [rotate(rational_tangle(v)) for v in vectors]
    total = parts[0]
    for part in parts[1:]:
        total = tangle_sum(total, part)
    return numerator_closure(total)


def pretzel_knot(twists: Sequence[int]) -> KnotDiagram:
    """Vertical twist columns side by side: the (p, q, r, ...) pretzel."""
    return montesinos_knot([[p] for p in twists])


def braid_knot(word: Iterable[int], strands: int = 0) -> KnotDiagram:
    """Close a braid word (letter i twists strands i, i+1; sign picks over).

    The closure must be a single component: the braid permutation has to be
    a full cycle, or the walk raises.
    """
    word = list(word)
    if not word or any(l == 0 for l in word):
        raise ValueError("braid word must be nonempty with nonzero letters")
    k = strands or max(abs(l) for l in word) + 1
    if any(abs(l) >= k for l in word):
        raise ValueError(f"letter out of range for {k} strands")
    pg = PortDiagram()
    tops = [_terminal() for _ in range(k)]
    cur: list = list(tops)
    for letter in word:
        i = abs(letter) - 1
        ports = _corner_ports(pg, "nesw" if letter > 0 else "nwse")
        pg.link(cur[i], ports["nw"])
        pg.link(cur[i + 1], ports["ne"])
        cur[i] = ports["sw"]
        cur[i + 1] = ports["se"]
    for i in range(k):
        if cur[i] == tops[i]:
            raise ValueError(f"strand {i + 1} is never crossed: closure is a split link")
        first = pg.cut(tops[i])
        pg.link(cur[i], first)
    return pg.to_diagram()


@dataclass(frozen=True)
class DiagramStats:
    crossings: int
    det: int
    alternating: bool
    planar: bool


def diagram_stats(d: KnotDiagram) -> DiagramStats:
    """Checks used to validate every built fixture."""
    pg = PortDiagram.from_diagram(d)
    walk = pg.walk()  # raises unless a single closed strand
    return DiagramStats(crossings=len(d.crossings),
                        det=determinant(d),
                        alternating=walk.is_alternating(),
                        planar=pg.is_planar())
