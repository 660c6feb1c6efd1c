"""Plane 4-valent scaffolding shared by diagram builders and the move engine.

A diagram lives here as a perfect matching on crossing port-ends.  Crossing
ports are numbered 0..3 counterclockwise with the under-strand occupying
ports 0 and 2; a strand entering port p leaves through port (p + 2) mod 4.
Everything else derives from the matching: the strand walk, edge numbering,
crossing code extraction, face tracing for the rotation system, and the
alternation test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

from .diagrams import KnotDiagram

PortEnd = tuple[int, int]


@dataclass
class Walk:
    """Strand traversal of a closed matching.

    edge_at maps each port-end to its edge number (1..2n along the walk);
    entry_ports lists the port entered at each step; under_entry gives, per
    crossing, the port in {0, 2} at which the under-strand was entered.
    """

    edge_at: dict[PortEnd, int]
    entry_ports: list[PortEnd]
    under_entry: dict[int, int]

    def is_alternating(self) -> bool:
        if not self.entry_ports:
            return True
        roles = [p % 2 for _, p in self.entry_ports]
        return all(roles[t] != roles[t - 1] for t in range(1, len(roles)))


class PortDiagram:
    """Mutable crossing-port matching with loose ends allowed during builds.

    Ends are either crossing port-ends (cid, port) or arbitrary hashable
    terminal tokens.  A finished knot has every terminal spliced away.
    """

    def __init__(self) -> None:
        self.n = 0
        self.conn: dict[Hashable, Hashable] = {}

    def new_crossing(self) -> int:
        cid = self.n
        self.n += 1
        return cid

    def link(self, a: Hashable, b: Hashable) -> None:
        if a in self.conn or b in self.conn:
            raise ValueError(f"end already linked: {a if a in self.conn else b}")
        if a == b:
            raise ValueError(f"cannot link an end to itself: {a}")
        self.conn[a] = b
        self.conn[b] = a

    def partner(self, a: Hashable) -> Hashable:
        return self.conn[a]

    def cut(self, a: Hashable) -> Hashable:
        """Remove the link at end a, returning the end it was attached to."""
        b = self.conn.pop(a)
        del self.conn[b]
        return b

    def splice_out(self, a: Hashable, b: Hashable) -> None:
        """Remove two ends of one strand, joining their outside partners.

        a and b must be linked to the outside, not to each other.
        """
        if self.conn.get(a) == b:
            raise ValueError("splice would close a loose loop")
        x = self.cut(a)
        y = self.cut(b)
        self.link(x, y)

    # ------------------------------------------------------------- analysis

    def _check_closed(self) -> None:
        expected = {(c, p) for c in range(self.n) for p in range(4)}
        actual = set(self.conn)
        if actual != expected:
            stray = actual - expected or expected - actual
            raise ValueError(f"matching is not a closed diagram near {list(stray)[:4]}")

    def walk(self) -> Walk:
        """Traverse the single strand, numbering edges in walk order.

        Starts on the edge entering crossing 0 at port 0 and raises if the
        traversal does not cover every crossing twice (more than one link
        component, or a corrupt matching).
        """
        self._check_closed()
        if self.n == 0:
            return Walk(edge_at={}, entry_ports=[], under_entry={})
        total = 2 * self.n
        edge_at: dict[PortEnd, int] = {}
        entry_ports: list[PortEnd] = []
        under_entry: dict[int, int] = {}
        entry: PortEnd = (0, 0)
        for t in range(1, total + 1):
            cid, p = entry
            if entry in edge_at:
                raise ValueError("strand revisits a port: not a single closed knot")
            edge_at[entry] = t
            entry_ports.append(entry)
            if p % 2 == 0:
                if cid in under_entry:
                    raise ValueError(f"crossing {cid} under-strand entered twice")
                under_entry[cid] = p
            out = (cid, (p + 2) % 4)
            nxt = t + 1 if t < total else 1
            if out in edge_at and edge_at[out] != nxt:
                raise ValueError("inconsistent edge numbering: multiple components")
            edge_at[out] = nxt
            entry = self.conn[out]
        if len(edge_at) != 4 * self.n:
            raise ValueError("walk did not cover the diagram: multiple components")
        return Walk(edge_at=edge_at, entry_ports=entry_ports, under_entry=under_entry)

    def face_count(self) -> int:
        """Number of faces of the rotation system (ports CCW per crossing)."""
        self._check_closed()
        darts = {(end, self.conn[end]) for end in self.conn}
        seen: set = set()
        faces = 0
        for start in sorted(darts):
            if start in seen:
                continue
            faces += 1
            d = start
            while True:
                seen.add(d)
                (_, _), (cid, p) = d
                tail = (cid, (p + 1) % 4)
                d = (tail, self.conn[tail])
                if d == start:
                    break
        return faces

    def is_planar(self) -> bool:
        """Euler check: a connected 4-valent map is planar iff F = n + 2."""
        if self.n == 0:
            return True
        return self.face_count() == self.n + 2

    def to_diagram(self) -> KnotDiagram:
        """Extract the crossing code, anchored at each under-strand entry."""
        if self.n == 0:
            return KnotDiagram(crossings=(), edge_count=1)
        w = self.walk()
        rows = []
        for cid in range(self.n):
            s = w.under_entry[cid]
            rows.append(tuple(w.edge_at[(cid, (s + k) % 4)] for k in range(4)))
        return KnotDiagram(crossings=tuple(rows), edge_count=2 * self.n)

    @classmethod
    def from_diagram(cls, d: KnotDiagram) -> "PortDiagram":
        """Rebuild the matching from a crossing code.

        Port 0 is the incoming under-edge slot, matching the code's anchor,
        so from_diagram followed by to_diagram is the identity on codes
        anchored at crossing 0's under entry.
        """
        pg = cls()
        ends_of_edge: dict[int, list[PortEnd]] = {}
        for row in d.crossings:
            cid = pg.new_crossing()
            for port, edge in enumerate(row):
                ends_of_edge.setdefault(edge, []).append((cid, port))
        for edge, ends in ends_of_edge.items():
            if len(ends) != 2:
                raise ValueError(f"edge {edge} has {len(ends)} ends")
            pg.link(ends[0], ends[1])
        return pg
