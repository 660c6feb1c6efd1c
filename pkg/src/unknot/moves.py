"""Reidemeister moves on labelled diagrams, with equation extraction.

A move script transforms a diagram step by step while every arc carries a
term over the starting presentation's generators.  Each move contributes
equations to a growing set E:

* removing a kink, or a poked bigon, identifies the labels of the two arcs
  that merge;
* adding a kink names the new arc with a fresh generator equated to the old
  label; poking one strand under another names the two new arcs by fresh
  generators defined through the quandle operation with the covering label;
* sliding a strand across a crossing rewrites its labels through the covers
  on the new side and records the corresponding distributivity instance.

Soundness of the construction means every added equation is derivable from
the starting relations plus the axioms, so a script that unknots a diagram
leaves behind a set E from which the triviality goal follows, usually far
more easily than from the bare relations.  check_trace_properties replays
the structural invariants and asks the prover to certify each intermediate
diagram's crossing relations against E.

Sites refer to the current exported diagram: crossings are numbered 1..n in
export order and edges 1..2n along the strand walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .budget import SearchBudget
from .diagrams import KnotDiagram, serialize_pd
from .modelfind import SearchOutcome, find_minimal_countermodel
from .portgraph import PortDiagram, Walk
from .presentation import Presentation, arcs_of, presentation_of
from .prover import ALL_AXIOMS, axiom_terms, saturate_equations
from .terms import Term, app, const, format_term, match

PortEnd = tuple[int, int]

CIRCLE = -1  # label key for the crossingless diagram's single arc

_DELTAS = {"rm1_down": -1, "rm1_up": 1, "rm2_up": 2, "rm2_down": -2, "rm3": 0}


class MoveError(ValueError):
    pass


# ------------------------------------------------------------- move scripts

@dataclass(frozen=True)
class MoveSpec:
    kind: str
    crossings: tuple[int, ...] = ()
    edges: tuple[int, ...] = ()
    strand: str = ""
    sign: str = ""

    def format(self) -> str:
        if self.kind == "rm1_down":
            return f"RM1_down @ crossing {self.crossings[0]}"
        if self.kind == "rm1_up":
            return f"RM1_up @ edge {self.edges[0]} {self.strand} {self.sign}"
        if self.kind == "rm2_up":
            return f"RM2_up @ edges {self.edges[0]},{self.edges[1]} {self.strand}"
        if self.kind == "rm2_down":
            return f"RM2_down @ crossings {self.crossings[0]},{self.crossings[1]}"
        return f"RM3 @ crossings {','.join(map(str, self.crossings))}"


def _strip_comment(line: str) -> str:
    for mark in ("#", "%"):
        line = line.split(mark, 1)[0]
    return line.strip()


def parse_move(line: str) -> MoveSpec:
    text = _strip_comment(line)
    head, sep, tail = text.partition("@")
    kind = head.strip().lower()
    if not sep or kind not in _DELTAS:
        raise MoveError(f"bad move syntax: {line.strip()!r}")
    tokens = tail.replace(",", " ").split()
    if not tokens:
        raise MoveError(f"move has no site: {line.strip()!r}")
    site_word = tokens[0].lower()
    nums: list[int] = []
    flags: list[str] = []
    for tok in tokens[1:]:
        if tok.isdigit():
            nums.append(int(tok))
        else:
            flags.append(tok.lower())

    def need(word: str, count: int, flag_spec: tuple[tuple[str, ...], ...]) -> list[str]:
        if site_word not in (word, word + "s") or len(nums) != count:
            raise MoveError(f"{kind} expects {count} {word}(s): {line.strip()!r}")
        if len(flags) != len(flag_spec) or \
                any(f not in allowed for f, allowed in zip(flags, flag_spec)):
            raise MoveError(f"bad flags for {kind}: {line.strip()!r}")
        return flags

    if kind == "rm1_down":
        need("crossing", 1, ())
        return MoveSpec(kind=kind, crossings=tuple(nums))
    if kind == "rm1_up":
        strand, sign = need("edge", 1, (("under", "over"), ("pos", "neg")))
        return MoveSpec(kind=kind, edges=tuple(nums), strand=strand, sign=sign)
    if kind == "rm2_up":
        (strand,) = need("edge", 2, (("under", "over"),))
        return MoveSpec(kind=kind, edges=tuple(nums), strand=strand)
    if kind == "rm2_down":
        need("crossing", 2, ())
        return MoveSpec(kind=kind, crossings=tuple(nums))
    need("crossing", 3, ())
    return MoveSpec(kind=kind, crossings=tuple(nums))


def parse_moves(text: str) -> list[MoveSpec]:
    specs = []
    for line in text.splitlines():
        if _strip_comment(line):
            specs.append(parse_move(line))
    return specs


# ------------------------------------------------------- diagram state

def _faces(conn: dict[PortEnd, PortEnd]) -> list[list[tuple[PortEnd, PortEnd]]]:
    """Face cycles of the rotation system as dart lists, deterministic order."""
    seen: set = set()
    faces = []
    for start in sorted((a, conn[a]) for a in conn):
        if start in seen:
            continue
        cycle = []
        d = start
        while d not in seen:
            seen.add(d)
            cycle.append(d)
            cid, p = d[1]
            tail = (cid, (p + 1) % 4)
            d = (tail, conn[tail])
        faces.append(cycle)
    return faces


def _find_face(conn: dict, edges: set[frozenset]) -> bool:
    for face in _faces(conn):
        if len(face) == len(edges) and {frozenset(d) for d in face} == edges:
            return True
    return False


class _Export:
    """Connected view of a state: compact diagram, walk, arcs, labels.

    Compaction rotates each crossing so the under strand enters at port 0,
    which pins the walk to the stored orientation; both entry directions are
    re-checked so a bad rewiring cannot silently reverse or corrupt it.
    """

    def __init__(self, state: "_State"):
        self.cids = sorted(state.live)
        self.idx = {c: i for i, c in enumerate(self.cids)}
        self.rot = dict(state.under_in)
        self.over_port = dict(state.over_in)
        pd = PortDiagram()
        pd.n = len(self.cids)
        pd.conn = {self._tr(a): self._tr(b) for a, b in state.conn.items()}
        try:
            self.w: Walk = pd.walk()
        except ValueError as e:
            raise MoveError(f"move produced an invalid diagram: {e}") from None
        for c in self.cids:
            if self.w.under_entry[self.idx[c]] != 0:
                raise MoveError("move reversed the strand orientation")
        for i, p in self.w.entry_ports:
            if p % 2:
                c = self.cids[i]
                if p != (self.over_port[c] - self.rot[c]) % 4:
                    raise MoveError("move reversed an over strand")
        self.d: KnotDiagram = pd.to_diagram()
        self.arcs = arcs_of(self.d)
        self.arc_of_edge: dict[int, int] = {}
        for i, arc in enumerate(self.arcs):
            for e in arc:
                self.arc_of_edge[e] = i
        self.edge_out: dict[int, PortEnd] = {}
        self.edge_in: dict[int, PortEnd] = {}
        for c in self.cids:
            outs = ((self.rot[c] + 2) % 4, (self.over_port[c] + 2) % 4)
            for p in range(4):
                e = self.w.edge_at[self._tr((c, p))]
                if p in outs:
                    self.edge_out[e] = (c, p)
                else:
                    self.edge_in[e] = (c, p)
        if self.cids:
            self.anchors = [self.edge_out[arc[0]][0] for arc in self.arcs]
        else:
            self.anchors = [CIRCLE]
        self.labels_by_arc = [state.labels.get(a) for a in self.anchors]

    def _tr(self, end: PortEnd) -> PortEnd:
        c, p = end
        return self.idx[c], (p - self.rot[c]) % 4

    def under_in_edge(self, c: int) -> int:
        return self.w.edge_at[(self.idx[c], 0)]

    def under_out_edge(self, c: int) -> int:
        return self.w.edge_at[(self.idx[c], 2)]

    def over_in_edge(self, c: int) -> int:
        return self.w.edge_at[(self.idx[c], (self.over_port[c] - self.rot[c]) % 4)]

    def anchor_at_edge(self, e: int) -> int:
        return self.anchors[self.arc_of_edge[e]]

    def label_at_edge(self, e: int) -> Term:
        label = self.labels_by_arc[self.arc_of_edge[e]]
        if label is None:
            raise MoveError("internal: unlabelled arc")
        return label

    def snapshot(self) -> list[tuple[tuple[int, ...], Term]]:
        return [(arc, label) for arc, label in zip(self.arcs, self.labels_by_arc)]


class _State:
    """Mutable matching over stable crossing ids, with orientation and labels.

    Crossing ids survive across moves (removals leave gaps), so label keys
    stay attached to the right arcs; each arc is keyed by the crossing whose
    under-strand exit starts it, with CIRCLE for the crossingless diagram.
    """

    def __init__(self) -> None:
        self.conn: dict[PortEnd, PortEnd] = {}
        self.live: set[int] = set()
        self.next_cid = 0
        self.under_in: dict[int, int] = {}
        self.over_in: dict[int, int] = {}
        self.labels: dict[int, Term] = {}
        self.gen_order: list[str] = []
        self.fresh_k = 1

    @classmethod
    def from_diagram(cls, d: KnotDiagram) -> "_State":
        state = cls()
        pd = PortDiagram.from_diagram(d)
        state.conn = dict(pd.conn)
        state.live = set(range(pd.n))
        state.next_cid = pd.n
        state.under_in = {c: 0 for c in state.live}
        if pd.n:
            w = pd.walk()
            for c, p in w.entry_ports:
                if p % 2:
                    state.over_in[c] = p
        exp = _Export(state)
        for i, anchor in enumerate(exp.anchors):
            name = f"a{i + 1}"
            state.labels[anchor] = const(name)
            state.gen_order.append(name)
        return state

    def copy(self) -> "_State":
        s = _State()
        s.conn = dict(self.conn)
        s.live = set(self.live)
        s.next_cid = self.next_cid
        s.under_in = dict(self.under_in)
        s.over_in = dict(self.over_in)
        s.labels = dict(self.labels)
        s.gen_order = list(self.gen_order)
        s.fresh_k = self.fresh_k
        return s

    def export(self) -> _Export:
        return _Export(self)

    def fresh(self) -> Term:
        names = set(self.gen_order)
        while f"b{self.fresh_k}" in names:
            self.fresh_k += 1
        name = f"b{self.fresh_k}"
        self.fresh_k += 1
        self.gen_order.append(name)
        return const(name)


def _resolve_crossings(exp: _Export, sites: tuple[int, ...],
                       spec: MoveSpec) -> tuple[int, ...]:
    out = []
    for k in sites:
        if not 1 <= k <= len(exp.cids):
            raise MoveError(f"pattern-not-found at {spec.format()}: "
                            f"crossing {k} is not in the diagram")
        out.append(exp.cids[k - 1])
    return tuple(out)


def _delete_crossings(state: _State, dead: set[int]) -> int:
    """Remove crossings, rejoining every strand that passed through them.

    Returns the number of rejoined strands; zero means the whole diagram
    collapsed to the crossingless circle.
    """
    ports = {(c, p) for c in dead for p in range(4)}
    entries = sorted(e for e in state.conn
                     if e not in ports and state.conn[e] in ports)
    pairs = []
    used: set = set()
    for e in entries:
        if e in used:
            continue
        cur = state.conn[e]
        while True:
            c, p = cur
            nxt = state.conn[(c, (p + 2) % 4)]
            if nxt in ports:
                cur = nxt
            else:
                break
        pairs.append((e, nxt))
        used.add(e)
        used.add(nxt)
    for end in list(state.conn):
        if end in ports or state.conn.get(end) in ports:
            state.conn.pop(end, None)
    for a, b in pairs:
        state.conn[a] = b
        state.conn[b] = a
    state.live -= dead
    for c in dead:
        state.under_in.pop(c, None)
        state.over_in.pop(c, None)
    if not pairs and state.live:
        raise MoveError("removal disconnected the diagram")
    return len(pairs)


# ----------------------------------------------------------- move appliers

_AddRet = tuple[tuple[tuple[Term, Term], ...], tuple[Term, ...], tuple[Term, ...], str]


def _rm1_down(state: _State, exp: _Export, spec: MoveSpec) -> _AddRet:
    (c,) = _resolve_crossings(exp, spec.crossings, spec)
    if not any(state.conn.get((c, p)) == (c, q)
               for p, q in ((0, 1), (1, 2), (2, 3), (3, 0))):
        raise MoveError(f"pattern-not-found at {spec.format()}: no kink loop")
    anchor_in = exp.anchor_at_edge(exp.under_in_edge(c))
    l_in = state.labels[anchor_in]
    l_out = state.labels[c]
    _delete_crossings(state, {c})
    del state.labels[c]
    if not state.live:
        state.labels[CIRCLE] = l_in
    return ((l_in, l_out),), (), (l_out,), ""


_KINK_WIRING = {
    # in port, loop pair, out port, over entry; under strand enters at 0
    ("under", "pos"): (0, (2, 3), 1, 3),
    ("under", "neg"): (0, (2, 1), 3, 1),
    ("over", "pos"): (1, (3, 0), 2, 1),
    ("over", "neg"): (3, (1, 0), 2, 3),
}


def _rm1_up(state: _State, exp: _Export, spec: MoveSpec) -> _AddRet:
    e = spec.edges[0]
    if exp.cids:
        if e not in exp.edge_out:
            raise MoveError(f"pattern-not-found at {spec.format()}: no edge {e}")
        a: Optional[PortEnd] = exp.edge_out[e]
        b: Optional[PortEnd] = exp.edge_in[e]
        tau_anchor = exp.anchor_at_edge(e)
    else:
        if e != 1:
            raise MoveError(f"pattern-not-found at {spec.format()}: "
                            "the crossingless diagram has only edge 1")
        a = b = None
        tau_anchor = CIRCLE
    tau = state.labels[tau_anchor]
    in_port, loop, out_port, oin = _KINK_WIRING[(spec.strand, spec.sign)]
    c = state.next_cid
    state.next_cid += 1
    state.live.add(c)
    state.under_in[c] = 0
    state.over_in[c] = oin
    if a is None:
        state.conn[(c, out_port)] = (c, in_port)
        state.conn[(c, in_port)] = (c, out_port)
    else:
        del state.conn[a], state.conn[b]
        state.conn[a] = (c, in_port)
        state.conn[(c, in_port)] = a
        state.conn[(c, out_port)] = b
        state.conn[b] = (c, out_port)
    state.conn[(c, loop[0])] = (c, loop[1])
    state.conn[(c, loop[1])] = (c, loop[0])
    rho = state.fresh()
    removed: tuple[Term, ...] = ()
    if tau_anchor == CIRCLE:
        del state.labels[CIRCLE]
        removed = (tau,)
    state.labels[c] = rho
    return ((tau, rho),), (rho,), removed, ""


def _rm2_up(state: _State, exp: _Export, spec: MoveSpec) -> _AddRet:
    e1, e2 = spec.edges
    e_under, e_over = (e1, e2) if spec.strand == "under" else (e2, e1)
    if e_under == e_over:
        raise MoveError(f"pattern-not-found at {spec.format()}: "
                        "the two edges must be distinct")
    for e in (e_under, e_over):
        if e not in exp.edge_out:
            raise MoveError(f"pattern-not-found at {spec.format()}: no edge {e}")
    rho = exp.label_at_edge(e_under)
    tau = exp.label_at_edge(e_over)
    c1, c2 = state.next_cid, state.next_cid + 1
    a1, b1 = exp.edge_out[e_under], exp.edge_in[e_under]
    a2, b2 = exp.edge_out[e_over], exp.edge_in[e_over]
    base = dict(state.conn)
    for end in (a1, b1, a2, b2):
        del base[end]
    base[a1] = (c1, 0)
    base[(c1, 0)] = a1
    base[(c1, 2)] = (c2, 0)
    base[(c2, 0)] = (c1, 2)
    base[(c2, 2)] = b1
    base[b1] = (c2, 2)
    under_mid = frozenset({(c1, 2), (c2, 0)})
    # the over strand can attach in either passage order and on either side;
    # only wirings that stay planar and cut out a bigon face are the move
    winner: Optional[_State] = None
    for first, second in ((c1, c2), (c2, c1)):
        for oin1 in (1, 3):
            for oin2 in (1, 3):
                trial = state.copy()
                trial.conn = dict(base)
                trial.conn[a2] = (first, oin1)
                trial.conn[(first, oin1)] = a2
                trial.conn[(first, (oin1 + 2) % 4)] = (second, oin2)
                trial.conn[(second, oin2)] = (first, (oin1 + 2) % 4)
                trial.conn[(second, (oin2 + 2) % 4)] = b2
                trial.conn[b2] = (second, (oin2 + 2) % 4)
                trial.live |= {c1, c2}
                trial.next_cid = c2 + 1
                trial.under_in.update({c1: 0, c2: 0})
                trial.over_in.update({first: oin1, second: oin2})
                try:
                    trial.export()
                except MoveError:
                    continue
                if len(_faces(trial.conn)) != len(trial.live) + 2:
                    continue
                over_mid = frozenset({(first, (oin1 + 2) % 4), (second, oin2)})
                if not _find_face(trial.conn, {under_mid, over_mid}):
                    continue
                winner = trial
                break
            if winner:
                break
        if winner:
            break
    if winner is None:
        raise MoveError(f"pattern-not-found at {spec.format()}: "
                        "edges do not share a face")
    state.conn = winner.conn
    state.live = winner.live
    state.next_cid = winner.next_cid
    state.under_in = winner.under_in
    state.over_in = winner.over_in
    theta = state.fresh()
    rho2 = state.fresh()
    state.labels[c1] = theta
    state.labels[c2] = rho2
    eqs = ((app(rho, tau), theta), (app(theta, tau), rho2))
    return eqs, (theta, rho2), (), ""


def _rm2_down(state: _State, exp: _Export, spec: MoveSpec) -> _AddRet:
    ca, cb = _resolve_crossings(exp, spec.crossings, spec)
    if ca == cb:
        raise MoveError(f"pattern-not-found at {spec.format()}: "
                        "the two crossings must be distinct")
    under_mid = None
    for face in _faces(state.conn):
        if len(face) != 2:
            continue
        if {end[0] for d in face for end in d} != {ca, cb}:
            continue
        edges = [frozenset(d) for d in face]
        unders = [e for e in edges if all(p in (0, 2) for _, p in e)]
        overs = [e for e in edges if all(p in (1, 3) for _, p in e)]
        if len(unders) == 1 and len(overs) == 1:
            under_mid = unders[0]
            break
    if under_mid is None:
        raise MoveError(f"pattern-not-found at {spec.format()}: no poked bigon")
    f = next(c for c, p in sorted(under_mid) if p == (state.under_in[c] + 2) % 4)
    s = cb if f == ca else ca
    l_in = state.labels[exp.anchor_at_edge(exp.under_in_edge(f))]
    l_mid = state.labels[f]
    l_out = state.labels[s]
    _delete_crossings(state, {ca, cb})
    del state.labels[f], state.labels[s]
    if not state.live:
        state.labels[CIRCLE] = l_in
    return ((l_in, l_out),), (), (l_mid, l_out), ""


def _rm3(state: _State, exp: _Export, spec: MoveSpec) -> _AddRet:
    trio = _resolve_crossings(exp, spec.crossings, spec)
    cset = set(trio)
    if len(cset) != 3:
        raise MoveError(f"pattern-not-found at {spec.format()}: "
                        "the three crossings must be distinct")
    site = None
    for face in _faces(state.conn):
        if len(face) != 3:
            continue
        if {end[0] for d in face for end in d} != cset:
            continue
        edges = [frozenset(d) for d in face]
        bottom = [e for e in edges if all(p in (0, 2) for _, p in e)]
        top = [e for e in edges if all(p in (1, 3) for _, p in e)]
        if len(bottom) == 1 and len(top) == 1:
            site = (bottom[0], top[0],
                    next(e for e in edges if e not in (bottom[0], top[0])))
            break
    if site is None:
        raise MoveError(f"pattern-not-found at {spec.format()}: "
                        "no slide triangle with a lowest and a highest strand")
    bottom_e, top_e, mid_e = site

    def corner(x: frozenset, y: frozenset) -> int:
        both = {c for c, _ in x} & {c for c, _ in y}
        if len(both) != 1:
            raise MoveError(f"pattern-not-found at {spec.format()}: "
                            "degenerate triangle")
        return both.pop()

    c_rt = corner(bottom_e, mid_e)   # middle strand covers the bottom here
    c_rh = corner(bottom_e, top_e)   # top strand covers the bottom here
    c_th = corner(mid_e, top_e)      # top covers the middle here
    f_pre = next(c for c, p in sorted(bottom_e)
                 if p == (state.under_in[c] + 2) % 4)
    s_pre = next(c for c in (c_rt, c_rh) if c != f_pre)
    rho = exp.label_at_edge(exp.under_in_edge(f_pre))
    tau = exp.label_at_edge(exp.over_in_edge(c_rt))
    theta = exp.label_at_edge(exp.over_in_edge(c_rh))

    # the slide reverses, along each of the three strands, the order of its
    # two triangle crossings: swap like-facing ports between those crossings
    ui, oi = state.under_in, state.over_in
    phi: dict[PortEnd, PortEnd] = {}

    def swap(x: PortEnd, y: PortEnd) -> None:
        phi[x] = y
        phi[y] = x

    swap((c_rt, ui[c_rt]), (c_rh, ui[c_rh]))
    swap((c_rt, (ui[c_rt] + 2) % 4), (c_rh, (ui[c_rh] + 2) % 4))
    swap((c_rh, oi[c_rh]), (c_th, oi[c_th]))
    swap((c_rh, (oi[c_rh] + 2) % 4), (c_th, (oi[c_th] + 2) % 4))
    swap((c_rt, oi[c_rt]), (c_th, ui[c_th]))
    swap((c_rt, (oi[c_rt] + 2) % 4), (c_th, (ui[c_th] + 2) % 4))
    state.conn = {phi.get(a, a): phi.get(b, b) for a, b in state.conn.items()}

    removed = (state.labels[f_pre], state.labels[s_pre])
    post = state.export()
    note = ""
    assigned: dict[int, Term] = {}

    def cover_label(crossing: int) -> Term:
        anchor = post.anchor_at_edge(post.over_in_edge(crossing))
        if anchor in assigned:
            return assigned[anchor]
        if anchor in (f_pre, s_pre):
            # the cover is one of the arcs being relabelled; fall back to
            # the label it carried before the slide
            nonlocal note
            note = "cover labels read from the pre-slide diagram"
            return exp.label_at_edge(exp.over_in_edge(crossing))
        return state.labels[anchor]

    mid_term = app(rho, cover_label(s_pre))
    assigned[s_pre] = mid_term
    out_term = app(mid_term, cover_label(f_pre))
    state.labels[s_pre] = mid_term
    state.labels[f_pre] = out_term
    eq = (app(app(rho, tau), theta), app(app(rho, theta), app(tau, theta)))
    return (eq,), (mid_term, out_term), removed, note


_APPLIERS = {
    "rm1_down": _rm1_down,
    "rm1_up": _rm1_up,
    "rm2_up": _rm2_up,
    "rm2_down": _rm2_down,
    "rm3": _rm3,
}


# ------------------------------------------------------------ trace objects

@dataclass
class MoveRecord:
    move: str
    kind: str
    delta: int
    equations: tuple[tuple[Term, Term], ...]
    new_labels: tuple[Term, ...]
    removed_labels: tuple[Term, ...]
    note: str = ""

    def to_json_dict(self) -> dict:
        return {"move": self.move, "kind": self.kind, "delta": self.delta,
                "equations": [f"{format_term(l)} = {format_term(r)}"
                              for l, r in self.equations],
                "new_labels": [format_term(t) for t in self.new_labels],
                "removed_labels": [format_term(t) for t in self.removed_labels],
                "note": self.note}


@dataclass
class LabelledTrace:
    """Diagrams, per-arc labels, and the equation set E along a move script.

    equations[:seed_count] are the starting diagram's crossing relations;
    each move appends its own.  equation_counts[i] is len(E) after step i.
    """

    generators: tuple[str, ...]
    goal: tuple[tuple[str, str], ...]
    diagrams: list[KnotDiagram] = field(default_factory=list)
    records: list[MoveRecord] = field(default_factory=list)
    equations: list[tuple[Term, Term]] = field(default_factory=list)
    seed_count: int = 0
    labels: list[list[tuple[tuple[int, ...], Term]]] = field(default_factory=list)
    equation_counts: list[int] = field(default_factory=list)
    all_generators: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "all_generators": list(self.all_generators),
            "diagrams": [serialize_pd(d) for d in self.diagrams],
            "moves": [r.to_json_dict() for r in self.records],
            "seed_count": self.seed_count,
            "equations": [f"{format_term(l)} = {format_term(r)}"
                          for l, r in self.equations],
            "labels": [[{"arc": list(arc), "label": format_term(t)}
                        for arc, t in snap] for snap in self.labels],
        }


def _apply(state: _State, spec: MoveSpec) -> MoveRecord:
    exp = state.export()
    before = len(state.live)
    eqs, new_labels, removed, note = _APPLIERS[spec.kind](state, exp, spec)
    state.export()
    if len(state.live) - before != _DELTAS[spec.kind]:
        raise MoveError(f"internal: {spec.kind} changed the crossing count "
                        f"by {len(state.live) - before}")
    if state.live and len(_faces(state.conn)) != len(state.live) + 2:
        raise MoveError("internal: move left a nonplanar diagram")
    return MoveRecord(move=spec.format(), kind=spec.kind,
                      delta=_DELTAS[spec.kind], equations=eqs,
                      new_labels=new_labels, removed_labels=removed, note=note)


def apply_move(d: KnotDiagram, move: Union[str, MoveSpec]) -> KnotDiagram:
    """One move on a bare diagram; raises MoveError if the site does not fit."""
    spec = parse_move(move) if isinstance(move, str) else move
    state = _State.from_diagram(d)
    _apply(state, spec)
    return state.export().d


def trace_equations(d0: KnotDiagram,
              moves: Union[str, Iterable[MoveSpec]]) -> LabelledTrace:
    """Apply a move script to d0, labelling arcs and accumulating E."""
    specs = parse_moves(moves) if isinstance(moves, str) else list(moves)
    state = _State.from_diagram(d0)
    exp = state.export()
    pres = presentation_of(exp.d)
    seed = [(app(const(a), const(b)), const(c)) for a, b, c in pres.relations]
    trace = LabelledTrace(generators=pres.generators, goal=pres.goal,
                          diagrams=[exp.d], equations=list(seed),
                          seed_count=len(seed), labels=[exp.snapshot()],
                          equation_counts=[len(seed)])
    for spec in specs:
        rec = _apply(state, spec)
        trace.records.append(rec)
        trace.equations.extend(rec.equations)
        post = state.export()
        trace.diagrams.append(post.d)
        trace.labels.append(post.snapshot())
        trace.equation_counts.append(len(trace.equations))
    trace.all_generators = tuple(state.gen_order)
    return trace


# ------------------------------------------------------- trace verification

def _occurs(needle: Term, hay: Term) -> bool:
    if hay is needle:
        return True
    if hay.kind == 2:  # APP
        return _occurs(needle, hay.left) or _occurs(needle, hay.right)
    return False


@dataclass
class TraceReport:
    """Outcome of the four structural checks over a labelled trace.

    steps_unverified lists steps whose relation check hit the prover budget;
    that leaves the trace unconfirmed, not wrong.  steps_failed means a
    relation was definitively underivable, which no valid move can cause.
    """

    structure_ok: bool
    equations_ok: bool
    labels_ok: bool
    steps_proved: tuple[int, ...]
    steps_unverified: tuple[int, ...]
    steps_failed: tuple[int, ...]
    details: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (self.structure_ok and self.equations_ok and self.labels_ok
                and not self.steps_failed)

    def to_json_dict(self) -> dict:
        return {"structure_ok": self.structure_ok,
                "equations_ok": self.equations_ok,
                "labels_ok": self.labels_ok,
                "steps_proved": list(self.steps_proved),
                "steps_unverified": list(self.steps_unverified),
                "steps_failed": list(self.steps_failed),
                "ok": self.ok,
                "details": list(self.details)}


def _shape_ok(rec: MoveRecord) -> bool:
    eqs = rec.equations
    if rec.kind == "rm1_up":
        return (len(eqs) == 1 and len(rec.new_labels) == 1
                and eqs[0][1] is rec.new_labels[0]
                and rec.new_labels[0].kind == 1)
    if rec.kind in ("rm1_down", "rm2_down"):
        return (len(eqs) == 1 and rec.removed_labels != ()
                and eqs[0][1] is rec.removed_labels[-1])
    if rec.kind == "rm2_up":
        if len(eqs) != 2 or len(rec.new_labels) != 2:
            return False
        (l1, r1), (l2, r2) = eqs
        theta, rho2 = rec.new_labels
        return (r1 is theta and r2 is rho2
                and l1.kind == 2 and l2.kind == 2
                and l2.left is theta and l1.right is l2.right)
    if rec.kind == "rm3":
        if len(eqs) != 1:
            return False
        ax_l, ax_r = axiom_terms(3)
        sub: dict = {}
        return match(ax_r, eqs[0][0], sub) and match(ax_l, eqs[0][1], sub)
    return False


def check_trace_properties(trace: LabelledTrace,
                           axioms: tuple[int, ...] = ALL_AXIOMS,
                           prover_budget_s: float = 2.0) -> TraceReport:
    """Validate a trace: growth pattern, equation shapes, label persistence,
    and prover-certified crossing relations for every intermediate diagram."""
    details: list[str] = []

    structure_ok = (len(trace.diagrams) == len(trace.records) + 1
                    and len(trace.labels) == len(trace.diagrams)
                    and len(trace.equation_counts) == len(trace.diagrams)
                    and trace.equation_counts[0] == trace.seed_count)
    count = trace.seed_count
    for i, rec in enumerate(trace.records):
        d_before, d_after = trace.diagrams[i], trace.diagrams[i + 1]
        if len(d_after.crossings) - len(d_before.crossings) != rec.delta:
            structure_ok = False
            details.append(f"step {i + 1}: crossing delta does not match {rec.kind}")
        count += len(rec.equations)
        if trace.equation_counts[i + 1] != count:
            structure_ok = False
            details.append(f"step {i + 1}: equation log out of order")

    equations_ok = True
    for i, rec in enumerate(trace.records):
        if not _shape_ok(rec):
            equations_ok = False
            details.append(f"step {i + 1}: {rec.kind} equations have the wrong shape")

    labels_ok = True
    for i, rec in enumerate(trace.records):
        surviving = {t for _, t in trace.labels[i + 1]}
        pool = trace.equations[:trace.equation_counts[i + 1]]
        for gone in rec.removed_labels:
            if gone in surviving:
                continue
            if any(_occurs(gone, side) for eq in pool for side in eq):
                continue
            labels_ok = False
            details.append(f"step {i + 1}: label {format_term(gone)} vanished "
                           "without a trace")

    proved: list[int] = []
    unverified: list[int] = []
    failed: list[int] = []
    for step in range(1, len(trace.diagrams)):
        d = trace.diagrams[step]
        snap = trace.labels[step]
        pres = presentation_of(d)
        term_of = {f"a{m + 1}": snap[m][1] for m in range(len(snap))}
        goals = [(app(term_of[a], term_of[b]), term_of[c])
                 for a, b, c in pres.relations]
        if not goals:
            proved.append(step)
            continue
        budget = SearchBudget(wall_s=prover_budget_s * len(goals))
        out = saturate_equations(trace.all_generators,
                                 trace.equations[:trace.equation_counts[step]],
                                 goals, axioms, budget)
        if out.status == "proved":
            proved.append(step)
        elif out.status == "resource_out":
            unverified.append(step)
            details.append(f"step {step}: relation check ran out of budget")
        else:
            failed.append(step)
            details.append(f"step {step}: a crossing relation is not derivable")

    return TraceReport(structure_ok=structure_ok, equations_ok=equations_ok,
                       labels_ok=labels_ok, steps_proved=tuple(proved),
                       steps_unverified=tuple(unverified),
                       steps_failed=tuple(failed), details=tuple(details))


def subset_axiom_refute(p: Presentation, axioms: tuple[int, ...],
                        max_size: int = 8,
                        budget: Optional[SearchBudget] = None) -> SearchOutcome:
    """Minimal countermodel search under a restricted axiom set.

    Dropping an axiom turns derivable goals into refutable ones; the minimal
    model size measures how much the missing axiom was doing.
    """
    return find_minimal_countermodel(p, axioms=tuple(sorted(axioms)),
                                     max_size=max_size, budget=budget)
