"""Involutory quandle presentations of knot diagrams.

A diagram's presentation has one generator per solid arc (a maximal run of
edges between undercrossings) and one relation per crossing: if the under
strand enters as arc a, leaves as arc c, and passes under arc b, the crossing
contributes a * b = c.  The triviality goal is the chain a1 = a2, a2 = a3,
... over the generators; a diagram presents the unknot exactly when the
axioms plus the relations derive the whole chain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagrams import KnotDiagram, RelationInput, over_transition_start

Arc = tuple[int, ...]

AXIOM_TEXT = {
    1: "x * x = x.",
    2: "(x * y) * y = x.",
    3: "(x * z) * (y * z) = (x * y) * z.",
}


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[str, str, str], ...]  # (a, b, c): a * b = c
    goal: tuple[tuple[str, str], ...]            # consecutive-equality chain

    def __post_init__(self):
        if len(self.goal) != max(len(self.generators) - 1, 0):
            raise ValueError("goal must chain all generators")


def arcs_of(d: KnotDiagram) -> list[Arc]:
    """Solid arcs as edge tuples in traversal order, sorted by least edge.

    Every nonempty diagram has exactly as many arcs as crossings; the round
    unknot has the single arc (1,).
    """
    if not d.crossings:
        return [(1,)]
    n_edges = d.edge_count
    breaks = {x[0] for x in d.crossings}  # edge e: transition e -> e+1 is an underpass
    arcs = []
    for head_source in sorted(breaks):
        head = head_source % n_edges + 1
        arc = [head]
        e = head
        while e not in breaks:
            e = e % n_edges + 1
            arc.append(e)
        arcs.append(tuple(arc))
    arcs.sort(key=min)
    return arcs


def presentation_of(d: KnotDiagram) -> Presentation:
    """Generators a1..an named by least contained edge; relations per crossing."""
    arcs = arcs_of(d)
    arc_of_edge: dict[int, int] = {}
    for i, arc in enumerate(arcs):
        for e in arc:
            arc_of_edge[e] = i
    names = tuple(f"a{i + 1}" for i in range(len(arcs)))
    relations = []
    for x in d.crossings:
        a_arc = names[arc_of_edge[x[0]]]
        b_arc = names[arc_of_edge[over_transition_start(x, d.edge_count)]]
        c_arc = names[arc_of_edge[x[2]]]
        relations.append((a_arc, b_arc, c_arc))
    goal = tuple((names[i], names[i + 1]) for i in range(len(names) - 1))
    return Presentation(generators=names, relations=tuple(relations), goal=goal)


_CHUNKS = re.compile(r"(\d+)")


def natural_key(name: str):
    return tuple(int(c) if c.isdigit() else c for c in _CHUNKS.split(name))


def presentation_from_relations(r: RelationInput) -> Presentation:
    """Presentation over the given relations.

    The goal chain runs over the generators in natural sort order (a2 before
    a10), so numerically named inputs get the expected a1 = a2, a2 = a3, ...
    chain regardless of which relation mentioned which name first.
    """
    names = tuple(sorted(r.generators, key=natural_key))
    goal = tuple((names[i], names[i + 1]) for i in range(len(names) - 1))
    return Presentation(generators=names, relations=tuple(r.relations), goal=goal)


def presentation_of_input(source: KnotDiagram | RelationInput) -> Presentation:
    if isinstance(source, KnotDiagram):
        return presentation_of(source)
    return presentation_from_relations(source)


def format_prover_input(p: Presentation, axioms: tuple[int, ...] = (1, 2, 3)) -> str:
    """The equational problem in prover input syntax.

    Assumptions are the selected axioms followed by the relations written
    defined-arc first (``c = a * b.``); goals are the parenthesized
    equality chain, two to a line.
    """
    lines = ["Assumptions:"]
    for i in sorted(axioms):
        lines.append(AXIOM_TEXT[i])
    for a, b, c in p.relations:
        lines.append(f"{c} = {a} * {b}.")
    lines.append("")
    lines.append("Goals:")
    if not p.goal:
        lines.append("% no goals: a single-generator presentation is trivially the unknot")
    else:
        eqs = [f"({lhs} = {rhs})" for lhs, rhs in p.goal]
        for i in range(0, len(eqs), 2):
            chunk = " & ".join(eqs[i:i + 2])
            tail = "." if i + 2 >= len(eqs) else " &"
            lines.append(chunk + tail)
    return "\n".join(lines) + "\n"
