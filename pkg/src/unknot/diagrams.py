"""Knot diagram input: PD codes, signed Gauss codes, and relation files.

Conventions (the dominant published ones, frozen here because they matter):

* A PD crossing ``X(a,b,c,d)`` lists its four edge labels counterclockwise
  starting from the incoming under-edge, so ``a`` is the under-strand's
  incoming edge, ``c`` its outgoing edge, and ``b``, ``d`` the over-strand.
* Edges are numbered 1..2c sequentially along the knot's traversal, so the
  successor of edge e is e mod 2c + 1.  Both are validated on parse.
* The order of ``b`` versus ``d`` encodes the crossing's chirality.  Nothing
  downstream reads it (the involutory theory is blind to mirror images), but
  it is preserved so codes survive a round trip.
* A 0-crossing code (``PD[]`` or an empty Gauss code) is the round unknot,
  a single closed edge.

Gauss codes are sequences like ``O1+ U2+ O3+ U1+ O2+ U3+``; signs are parsed
and retained for serialization only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    """Malformed diagram or relation input; message carries the position."""


@dataclass(frozen=True)
class KnotDiagram:
    """Crossing list plus edge count; immutable once validated."""

    crossings: tuple[tuple[int, int, int, int], ...]
    edge_count: int

    def __post_init__(self):
        _validate(self)


@dataclass(frozen=True)
class RelationInput:
    """A quandle presentation given directly as generator relations.

    relations are (a, b, c) name triples meaning a * b = c; generators are
    listed in first-appearance order.
    """

    generators: tuple[str, ...]
    relations: tuple[tuple[str, str, str], ...]


def _successor(e: int, n_edges: int) -> int:
    return e % n_edges + 1


def over_transition_start(crossing: tuple[int, int, int, int], n_edges: int) -> int:
    """The over-strand edge that enters this crossing.

    For the over pair {b, d} exactly one ordering is consistent with
    sequential numbering, except in the 1-crossing kink where the under
    transition disambiguates.
    """
    a, b, c, d = crossing
    b_starts = _successor(b, n_edges) == d
    d_starts = _successor(d, n_edges) == b
    if b_starts and d_starts:  # only possible when n_edges == 2
        return c
    if b_starts:
        return b
    if d_starts:
        return d
    raise ParseError(
        f"crossing {crossing}: over edges {b},{d} are not consecutive along the knot")


def _validate(d: KnotDiagram) -> None:
    n = len(d.crossings)
    if n == 0:
        if d.edge_count != 1:
            raise ParseError("a 0-crossing diagram has exactly one formal edge")
        return
    n_edges = 2 * n
    if d.edge_count != n_edges:
        raise ParseError(f"{n} crossings need {n_edges} edges, got edge_count={d.edge_count}")
    seen: dict[int, int] = {}
    for x in d.crossings:
        for e in x:
            if not 1 <= e <= n_edges:
                raise ParseError(f"edge label {e} out of range 1..{n_edges} in {x}")
            seen[e] = seen.get(e, 0) + 1
    bad = [e for e in range(1, n_edges + 1) if seen.get(e, 0) != 2]
    if bad:
        raise ParseError(f"edges must appear exactly twice; offending edges: {bad}")
    starts = []
    for x in d.crossings:
        a, b, c, _ = x
        if _successor(a, n_edges) != c:
            raise ParseError(
                f"crossing {x}: under-strand must run a -> a+1, got {a} -> {c}")
        starts.append(a)
        starts.append(over_transition_start(x, n_edges))
    if sorted(starts) != list(range(1, n_edges + 1)):
        raise ParseError(
            "every edge must leave through exactly one crossing passage; "
            f"transition starts were {sorted(starts)}")


# ------------------------------------------------------------------ PD codes

_PD_SHELL = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.DOTALL)
_PD_X = re.compile(r"X\s*[\(\[]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\)\]]")


def parse_pd(text: str) -> KnotDiagram:
    """Parse ``PD[X(1,4,2,5), ...]``; ``PD[]`` is the round unknot."""
    m = _PD_SHELL.match(text)
    if not m:
        raise ParseError("PD code must look like PD[X(a,b,c,d), ...]")
    body = m.group(1).strip()
    if not body:
        return KnotDiagram(crossings=(), edge_count=1)
    crossings = []
    pos = 0
    while pos < len(body):
        if body[pos] in " \t\r\n,":
            pos += 1
            continue
        m = _PD_X.match(body, pos)
        if not m:
            raise ParseError(f"bad crossing syntax at offset {pos}: {body[pos:pos + 20]!r}")
        crossings.append(tuple(int(g) for g in m.groups()))
        pos = m.end()
    return KnotDiagram(crossings=tuple(crossings), edge_count=2 * len(crossings))


def serialize_pd(d: KnotDiagram) -> str:
    inner = ",".join("X({},{},{},{})".format(*x) for x in d.crossings)
    return f"PD[{inner}]"


# --------------------------------------------------------------- Gauss codes

_GAUSS_TOKEN = re.compile(r"([OU])(\d+)([+-])")


def parse_gauss(text: str) -> KnotDiagram:
    """Parse a signed Gauss code into the equivalent PD structure.

    Token i of the sequence sits between edge i and edge i+1 of the
    traversal.  Each crossing must be visited once as O and once as U, with
    matching signs.  The sign is stored in the over-pair ordering.
    """
    tokens = []
    pos = 0
    for m in _GAUSS_TOKEN.finditer(text):
        if text[pos:m.start()].strip():
            raise ParseError(f"bad Gauss token at offset {pos}: {text[pos:pos + 10]!r}")
        tokens.append((m.group(1), int(m.group(2)), m.group(3)))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"bad Gauss token at offset {pos}: {text[pos:pos + 10]!r}")
    if not tokens:
        return KnotDiagram(crossings=(), edge_count=1)

    visits: dict[int, dict[str, tuple[int, str]]] = {}
    for i, (role, label, sign) in enumerate(tokens, start=1):
        slot = visits.setdefault(label, {})
        if role in slot:
            raise ParseError(f"crossing {label} visited twice as {role}")
        slot[role] = (i, sign)
    n_edges = len(tokens)
    if n_edges % 2:
        raise ParseError("a Gauss code must have an even number of tokens")
    crossings = []
    for label in sorted(visits, key=lambda lb: min(v[0] for v in visits[lb].values())):
        slot = visits[label]
        if "O" not in slot or "U" not in slot:
            raise ParseError(f"crossing {label} needs exactly one O and one U visit")
        (p, sign_o), (q, sign_u) = slot["O"], slot["U"]
        if sign_o != sign_u:
            raise ParseError(f"crossing {label} has conflicting signs {sign_o}/{sign_u}")
        a, c = q, _successor(q, n_edges)
        if sign_o == "+":
            b, dd = p, _successor(p, n_edges)
        else:
            b, dd = _successor(p, n_edges), p
        crossings.append((a, b, c, dd))
    return KnotDiagram(crossings=tuple(crossings), edge_count=n_edges)


def serialize_gauss(d: KnotDiagram) -> str:
    if not d.crossings:
        return ""
    n_edges = d.edge_count
    # transition start edge -> (crossing index, role)
    role_at: dict[int, tuple[int, str]] = {}
    for ci, x in enumerate(d.crossings):
        role_at[x[0]] = (ci, "U")
        role_at[over_transition_start(x, n_edges)] = (ci, "O")
    numbering: dict[int, int] = {}
    out = []
    for e in range(1, n_edges + 1):
        ci, role = role_at[e]
        label = numbering.setdefault(ci, len(numbering) + 1)
        a, b, c, dd = d.crossings[ci]
        sign = "+" if _successor(b, n_edges) == dd else "-"
        out.append(f"{role}{label}{sign}")
    return " ".join(out)


# ------------------------------------------------------------ relation files

_RELATION_LINE = re.compile(
    r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([A-Za-z_][A-Za-z0-9_]*)"
    r"\s*\*\s*([A-Za-z_][A-Za-z0-9_]*)\s*\.\s*$")


def parse_relations(text: str) -> RelationInput:
    """Parse lines of ``c = a * b.`` into a RelationInput.

    The written form puts the defined arc on the left, so the stored triple
    is (a, b, c): a * b = c.
    """
    generators: list[str] = []
    seen: set[str] = set()
    relations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        m = _RELATION_LINE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected '<name> = <name> * <name>.', got {raw!r}")
        c, a, b = m.groups()
        for name in (c, a, b):  # textual appearance order
            if name not in seen:
                seen.add(name)
                generators.append(name)
        relations.append((a, b, c))
    if not relations:
        raise ParseError("relation input contains no relations")
    return RelationInput(generators=tuple(generators), relations=tuple(relations))


def serialize_relations(r: RelationInput) -> str:
    return "\n".join(f"{c} = {a} * {b}." for a, b, c in r.relations) + "\n"


# ------------------------------------------------------------------- loading

def load_input(text: str) -> KnotDiagram | RelationInput:
    """Auto-detect PD, Gauss, or relation input.  ``%`` lines are comments."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("%")]
    body = "\n".join(lines).strip()
    if not body:
        raise ParseError("input is empty")
    if body.startswith("PD"):
        return parse_pd(body)
    if re.match(r"^[OU]\d", body):
        return parse_gauss(body)
    if "=" in body:
        return parse_relations(body)
    raise ParseError("cannot detect input format (expected PD[...], a Gauss code, or relations)")
