"""Finite countermodel search for involutory quandle presentations.

A countermodel for a presentation is a finite algebra satisfying the chosen
axioms and all crossing relations in which not every generator takes the
same value: its existence certifies the diagram is knotted.  The search is a
backtracking table completion in the model-finder tradition:

* generator constants are assigned first, in order of first use;
* the idempotence axiom prefills the table diagonal;
* the involution axiom makes every column a self-inverse permutation, which
  both propagates assignments and prunes column domains;
* distributivity instances are checked incrementally as their cells fill,
  propagating a forced cell whenever only one is missing;
* the least-number heuristic caps candidate values at one above the largest
  value touched so far, cutting isomorphic branches while staying exhaustive
  (the prefilled diagonal is value-symmetric, so it does not count).

"absent" answers are exhaustive searches and certify no model of that size
exists.  The verifier `check_model` shares no code with the search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .budget import SearchBudget
from .presentation import Presentation, natural_key

ALL_AXIOMS = (1, 2, 3)

_POLL_MASK = (1 << 14) - 1  # budget checkpoint every 2**14 nodes


@dataclass
class FiniteQuandle:
    """A finite model: operation table plus generator assignment."""

    size: int
    table: tuple[tuple[int, ...], ...]
    assignment: dict[str, int]

    def to_json_dict(self) -> dict:
        return {"size": self.size,
                "table": [list(row) for row in self.table],
                "assignment": dict(self.assignment)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FiniteQuandle":
        return cls(size=int(d["size"]),
                   table=tuple(tuple(int(v) for v in row) for row in d["table"]),
                   assignment={str(k): int(v) for k, v in d["assignment"].items()})


@dataclass
class SearchOutcome:
    """Result of a countermodel search.

    status is one of:
      found        - model holds a countermodel (at .size)
      absent       - exhaustive: no model of the requested size exists
      exhausted    - minimal search refuted every size up to max_size
      resource_out - budget tripped before the search could certify anything
    sizes_refuted lists sizes exhaustively ruled out, smallest first.
    """

    status: str
    model: Optional[FiniteQuandle] = None
    size: Optional[int] = None
    sizes_refuted: tuple[int, ...] = ()
    nodes: int = 0
    elapsed_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {"status": self.status,
                "model": self.model.to_json_dict() if self.model else None,
                "size": self.size,
                "sizes_refuted": list(self.sizes_refuted),
                "nodes": self.nodes,
                "elapsed_s": round(self.elapsed_s, 6)}


# ----------------------------------------------------------------- verifier

def check_model(q: FiniteQuandle, p: Presentation,
                axioms: tuple[int, ...] = ALL_AXIOMS) -> bool:
    """Direct re-verification of a claimed countermodel.

    Checks table shape, the selected axioms by exhaustive loops, every
    relation under the assignment, and that the assignment is nonconstant.
    Deliberately independent of the search code.
    """
    return check_model_report(q, p, axioms) is None


def check_model_report(q: FiniteQuandle, p: Presentation,
                       axioms: tuple[int, ...] = ALL_AXIOMS) -> Optional[str]:
    """Like check_model but returns a failure description, or None if sound."""
    n = q.size
    if n < 1 or len(q.table) != n or any(len(row) != n for row in q.table):
        return f"table is not {n}x{n}"
    for row in q.table:
        for v in row:
            if not 0 <= v < n:
                return f"table value {v} outside 0..{n - 1}"
    t = q.table
    if 1 in axioms:
        for i in range(n):
            if t[i][i] != i:
                return f"idempotence fails at {i}: {i}*{i} = {t[i][i]}"
    if 2 in axioms:
        for i in range(n):
            for j in range(n):
                if t[t[i][j]][j] != i:
                    return f"involution fails at ({i},{j})"
    if 3 in axioms:
        for i in range(n):
            for j in range(n):
                tij = t[i][j]
                for k in range(n):
                    if t[tij][k] != t[t[i][k]][t[j][k]]:
                        return f"distributivity fails at ({i},{j},{k})"
    for name in p.generators:
        if name not in q.assignment:
            return f"assignment misses generator {name}"
        if not 0 <= q.assignment[name] < n:
            return f"assignment of {name} outside 0..{n - 1}"
    for a, b, c in p.relations:
        va, vb, vc = q.assignment[a], q.assignment[b], q.assignment[c]
        if t[va][vb] != vc:
            return f"relation {a} * {b} = {c} fails: {va}*{vb} = {t[va][vb]} != {vc}"
    values = {q.assignment[g] for g in p.generators}
    if len(values) < 2:
        return "assignment is constant: model does not deny triviality"
    return None


# ------------------------------------------------------------ interpretation

def format_interpretation(q: FiniteQuandle, number: int = 1,
                          generator_order: Optional[list[str]] = None) -> str:
    """Render a model in interpretation-block syntax.

    The layout (8-space constant lines, tab-indented table rows) matches the
    fixed shape countermodels are conventionally printed in, so outputs can
    be compared byte for byte.  Wall-time is always reported as 0 seconds.
    """
    names = (generator_order if generator_order is not None
             else sorted(q.assignment, key=natural_key))
    lines = [f"interpretation( {q.size}, [number={number}, seconds=0], ["]
    for name in names:
        lines.append(f"        function({name}, [ {q.assignment[name]} ]),")
    lines.append("        function(*(_,_), [")
    for i, row in enumerate(q.table):
        body = ", ".join(str(v) for v in row)
        tail = "," if i + 1 < q.size else " ])"
        lines.append("\t\t\t   " + body + tail)
    lines.append("]).")
    return "\n".join(lines)


# -------------------------------------------------------------------- search

class _Stop(Exception):
    pass


class _Search:
    """One fixed-size exhaustive search.  See module docstring for strategy."""

    def __init__(self, p: Presentation, axioms: tuple[int, ...], n: int,
                 budget: SearchBudget, nodes_so_far: int = 0):
        self.n = n
        self.axioms = frozenset(axioms)
        self.budget = budget
        self.nodes = nodes_so_far
        self.gen_names = list(p.generators)
        gi = {g: i for i, g in enumerate(self.gen_names)}
        self.relations = [(gi[a], gi[b], gi[c]) for a, b, c in p.relations]
        # branch on generators in declaration order: with ascending value
        # order this pins down which of the isomorphic models is found first
        self.gen_order = list(range(len(self.gen_names)))

        full = (1 << n) - 1
        self.cell_val = [-1] * (n * n)
        self.cell_dom = [full] * (n * n)
        self.gen_val = [-1] * len(self.gen_names)
        self.gen_dom = [full] * len(self.gen_names)
        self.col_assigned = [0] * n
        self.maxused = -1
        self.trail: list = []
        self.queue: list = []
        self.w_q3: list[list] = [[] for _ in range(n * n)]
        self.w_rel: list[list] = [[] for _ in range(n * n)]
        self.gens_left = len(self.gen_names)

    # --- state changes, all trailed ------------------------------------

    def _set_cell(self, idx: int, v: int, lnh: bool = True) -> bool:
        cur = self.cell_val[idx]
        if cur >= 0:
            return cur == v
        if not (self.cell_dom[idx] >> v) & 1:
            return False
        self.cell_val[idx] = v
        self.trail.append((0, idx))
        self.col_assigned[idx % self.n] += 1
        if lnh:
            i, j = divmod(idx, self.n)
            hi = max(i, j, v)
            if hi > self.maxused:
                self.trail.append((3, self.maxused))
                self.maxused = hi
        self.queue.append(idx)
        return True

    def _set_gen(self, g: int, v: int) -> bool:
        cur = self.gen_val[g]
        if cur >= 0:
            return cur == v
        if not (self.gen_dom[g] >> v) & 1:
            return False
        self.gen_val[g] = v
        self.gens_left -= 1
        self.trail.append((1, g))
        if v > self.maxused:
            self.trail.append((3, self.maxused))
            self.maxused = v
        self.queue.append(-1 - g)
        return True

    def _shrink_cell(self, idx: int, mask: int) -> bool:
        old = self.cell_dom[idx]
        new = old & mask
        if new == old:
            return True
        self.trail.append((2, idx, old))
        self.cell_dom[idx] = new
        if new == 0:
            return False
        if self.cell_val[idx] < 0 and new & (new - 1) == 0:
            return self._set_cell(idx, new.bit_length() - 1)
        return True

    def _undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            entry = trail.pop()
            tag = entry[0]
            if tag == 0:
                idx = entry[1]
                self.cell_val[idx] = -1
                self.col_assigned[idx % self.n] -= 1
            elif tag == 1:
                self.gen_val[entry[1]] = -1
                self.gens_left += 1
            elif tag == 2:
                self.cell_dom[entry[1]] = entry[2]
            elif tag == 3:
                self.maxused = entry[1]
            elif tag == 4:
                self.w_q3[entry[1]].pop()
            else:
                self.w_rel[entry[1]].pop()
        self.queue.clear()

    # --- propagation ----------------------------------------------------

    def _drain(self) -> bool:
        n = self.n
        q2 = 2 in self.axioms
        q3 = 3 in self.axioms
        cv = self.cell_val
        queue = self.queue
        while queue:
            ev = queue.pop()
            if ev < 0:
                if not self._on_gen(-1 - ev):
                    return False
                continue
            idx = ev
            i, j = divmod(idx, n)
            v = cv[idx]
            if q2:
                # involution: column j maps v back to i, and is injective
                if not self._set_cell(v * n + j, i):
                    return False
                keep = ~(1 << v)
                col = j
                for r in range(n):
                    c2 = r * n + col
                    if r != i and cv[c2] < 0:
                        if not self._shrink_cell(c2, keep):
                            return False
            if q3:
                if not self._q3_wake(i, j):
                    return False
                for inst in self.w_q3[idx]:
                    if not self._q3_check(*inst):
                        return False
            for ridx in self.w_rel[idx]:
                if not self._check_relation(ridx):
                    return False
        return True

    def _on_gen(self, g: int) -> bool:
        for ridx in range(len(self.relations)):
            if not self._check_relation(ridx):
                return False
        if self.gens_left == 0 and len(self.gen_val) > 1:
            first = self.gen_val[0]
            if all(v == first for v in self.gen_val):
                return False  # constant assignment cannot deny triviality
        return True

    def _check_relation(self, ridx: int) -> bool:
        a, b, c = self.relations[ridx]
        va, vb, vc = self.gen_val[a], self.gen_val[b], self.gen_val[c]
        if va < 0 or vb < 0:
            return True
        idx = va * self.n + vb
        cellv = self.cell_val[idx]
        if vc >= 0:
            if cellv >= 0:
                return cellv == vc
            return self._set_cell(idx, vc)
        if cellv >= 0:
            return self._set_gen(c, cellv)
        self.w_rel[idx].append(ridx)
        self.trail.append((5, idx))
        return True

    def _q3_wake(self, p: int, q: int) -> bool:
        # instances whose base cells include (p, q)
        n = self.n
        for z in range(n):
            if not self._q3_check(p, q, z):
                return False
        for y in range(n):
            if not self._q3_check(p, y, q):
                return False
        for x in range(n):
            if not self._q3_check(x, p, q):
                return False
        return True

    def _q3_check(self, x: int, y: int, z: int) -> bool:
        # (x*y)*z = (x*z)*(y*z), checked once all three base cells are known
        n = self.n
        cv = self.cell_val
        a = cv[x * n + y]
        if a < 0:
            return True
        b = cv[x * n + z]
        if b < 0:
            return True
        c = cv[y * n + z]
        if c < 0:
            return True
        c1 = a * n + z
        c2 = b * n + c
        if c1 == c2:
            return True
        v1, v2 = cv[c1], cv[c2]
        if v1 >= 0:
            if v2 >= 0:
                return v1 == v2
            return self._set_cell(c2, v1)
        if v2 >= 0:
            return self._set_cell(c1, v2)
        inst = (x, y, z)
        self.w_q3[c1].append(inst)
        self.trail.append((4, c1))
        self.w_q3[c2].append(inst)
        self.trail.append((4, c2))
        both = self.cell_dom[c1] & self.cell_dom[c2]
        if not self._shrink_cell(c1, both):
            return False
        return self._shrink_cell(c2, both)

    # --- search loop ----------------------------------------------------

    def _poll(self) -> None:
        if self.nodes & _POLL_MASK == 0 and self.budget.exhausted(self.nodes):
            raise _Stop

    def _pick(self):
        n = self.n
        if self.gens_left:
            for g in self.gen_order:
                if self.gen_val[g] < 0:
                    cap = min(n - 1, self.maxused + 1)
                    dom = self.gen_dom[g]
                    cands = [v for v in range(cap + 1) if (dom >> v) & 1]
                    return ("gen", g, cands)
        best = None
        best_key = None
        cv = self.cell_val
        dom = self.cell_dom
        colload = self.col_assigned
        for idx in range(n * n):
            if cv[idx] < 0:
                d = dom[idx]
                size = d.bit_count()
                key = (size, -colload[idx % n], idx)
                if best_key is None or key < best_key:
                    best_key = key
                    best = idx
                    if size == 1:
                        break
        if best is None:
            return None
        i, j = divmod(best, n)
        cap = min(n - 1, max(self.maxused, i, j) + 1)
        d = dom[best]
        cands = [v for v in range(cap + 1) if (d >> v) & 1]
        return ("cell", best, cands)

    def run(self) -> tuple[str, Optional[FiniteQuandle]]:
        n = self.n
        if 1 in self.axioms:
            for i in range(n):
                if not self._set_cell(i * n + i, i, lnh=False):
                    return "absent", None
        if not self._drain():
            return "absent", None
        frames: list = []
        while True:
            pick = self._pick()
            if pick is None:
                return "found", self._extract()
            kind, idx, cands = pick
            frames.append([kind, idx, cands, 0, len(self.trail)])
            descended = False
            while frames and not descended:
                frame = frames[-1]
                kind, idx, cands, pos, mark = frame
                self._undo(mark)
                if pos >= len(cands):
                    frames.pop()
                    continue
                frame[3] = pos + 1
                self.nodes += 1
                self._poll()
                v = cands[pos]
                ok = self._set_cell(idx, v) if kind == "cell" else self._set_gen(idx, v)
                if ok and self._drain():
                    descended = True
            if not frames:
                return "absent", None

    def _extract(self) -> FiniteQuandle:
        n = self.n
        table = tuple(tuple(self.cell_val[i * n + j] for j in range(n)) for i in range(n))
        assignment = {name: self.gen_val[g] for g, name in enumerate(self.gen_names)}
        return FiniteQuandle(size=n, table=table, assignment=assignment)


def find_model(p: Presentation, axioms: tuple[int, ...] = ALL_AXIOMS,
               n: int = 2, budget: Optional[SearchBudget] = None) -> SearchOutcome:
    """Exhaustive search for a size-n countermodel of the presentation."""
    if n < 2:
        raise ValueError("countermodel sizes start at 2")
    if budget is None:
        budget = SearchBudget()
    budget.start()
    t0 = time.monotonic()
    if len(p.generators) < 2:
        # triviality denial needs two generators with distinct values
        return SearchOutcome(status="absent", size=n, sizes_refuted=(n,),
                             elapsed_s=time.monotonic() - t0)
    s = _Search(p, axioms, n, budget)
    try:
        status, model = s.run()
    except _Stop:
        return SearchOutcome(status="resource_out", size=n, nodes=s.nodes,
                             elapsed_s=time.monotonic() - t0)
    elapsed = time.monotonic() - t0
    if status == "found":
        return SearchOutcome(status="found", model=model, size=n,
                             nodes=s.nodes, elapsed_s=elapsed)
    return SearchOutcome(status="absent", size=n, sizes_refuted=(n,),
                         nodes=s.nodes, elapsed_s=elapsed)


def find_minimal_countermodel(p: Presentation, axioms: tuple[int, ...] = ALL_AXIOMS,
                              max_size: int = 24,
                              budget: Optional[SearchBudget] = None) -> SearchOutcome:
    """Search sizes 2, 3, ... up to max_size; the first hit is minimal.

    Every size below a found model is exhaustively refuted, so the result
    carries its own minimality certificate in sizes_refuted.
    """
    if budget is None:
        budget = SearchBudget()
    budget.start()
    t0 = time.monotonic()
    refuted: list[int] = []
    nodes = 0
    if len(p.generators) < 2:
        return SearchOutcome(status="exhausted",
                             sizes_refuted=tuple(range(2, max_size + 1)),
                             elapsed_s=time.monotonic() - t0)
    for n in range(2, max_size + 1):
        s = _Search(p, axioms, n, budget)
        try:
            status, model = s.run()
        except _Stop:
            return SearchOutcome(status="resource_out", size=n,
                                 sizes_refuted=tuple(refuted),
                                 nodes=nodes + s.nodes,
                                 elapsed_s=time.monotonic() - t0)
        nodes += s.nodes
        if status == "found":
            return SearchOutcome(status="found", model=model, size=n,
                                 sizes_refuted=tuple(refuted), nodes=nodes,
                                 elapsed_s=time.monotonic() - t0)
        refuted.append(n)
    return SearchOutcome(status="exhausted", sizes_refuted=tuple(refuted),
                         nodes=nodes, elapsed_s=time.monotonic() - t0)
