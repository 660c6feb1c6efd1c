"""Saturation prover: derives triviality of a presentation, or refutes it.

The goal chain a1 = a2 = ... = an follows from the axioms and crossing
relations exactly when the diagram is unknotted, so the prover races toward
joining every goal pair under an evolving rewrite system:

* equations are oriented by a Knuth-Bendix order with all weights 1, the
  operation above every constant and constants ranked by generator order;
* ground rules live in a dictionary keyed by interned left sides, so ground
  rewriting is a hash lookup; nonground and unorientable equations are
  scanned in id order (unorientable ones rewrite only instances the order
  strictly decreases);
* the given-clause loop simplifies, discards subsumed equations, activates,
  back-simplifies older equations, then overlaps the given into all active
  equations at non-variable positions of maximal sides, keeping normalized
  critical pairs; picks favor light equations five out of six times, age
  otherwise;
* goal pairs are discharged by joinability: both sides normalize to the
  same term.

Exhausting the passive queue without joining the goals is a definitive
negative answer: the order is total on ground terms, so saturation decides
derivability of ground equations.  (A term size cap forfeits that claim, so
running out of equations under a cap reports resource_out instead.)  Every
kept equation carries provenance (input, critical pair, or normalization),
letting an independent checker replay the proof step by step.
"""

from __future__ import annotations

import heapq
import time
from bisect import insort
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .budget import SearchBudget
from .kbo import EQUAL, GREATER, LESS, Precedence, kbo_compare
from .presentation import AXIOM_TEXT, Presentation
from .terms import (Term, app, apply_subst, canonical_pair, const, format_term,
                    match, max_var, parse_term, positions, replace_at,
                    resolve_subst, shift_vars, subterm_at, unify)

ALL_AXIOMS = (1, 2, 3)

_POLL_MASK = (1 << 6) - 1


class _BudgetOut(Exception):
    def __init__(self, limit: str):
        self.limit = limit


@dataclass(frozen=True)
class Step:
    """One derivation step.  kind determines which fields are meaningful.

    input      - an axiom (axiom number set) or an assumption of the theory
    cp         - critical pair: inner applied inside outer at pos, where the
                 side names refer to the parents' own equations
    normalize  - source equation rewritten to normal form by the listed rules
    """

    id: int
    lhs: Term
    rhs: Term
    kind: str
    axiom: Optional[int] = None
    outer: Optional[int] = None
    outer_side: str = ""
    inner: Optional[int] = None
    inner_side: str = ""
    pos: tuple = ()
    source: Optional[int] = None
    rules: tuple[int, ...] = ()

    def to_json_dict(self) -> dict:
        d = {"id": self.id, "lhs": format_term(self.lhs),
             "rhs": format_term(self.rhs), "kind": self.kind}
        if self.kind == "input":
            d["axiom"] = self.axiom
        elif self.kind == "cp":
            d.update(outer=self.outer, outer_side=self.outer_side,
                     inner=self.inner, inner_side=self.inner_side,
                     pos=list(self.pos))
        else:
            d.update(source=self.source, rules=list(self.rules))
        return d


RewriteApp = tuple[int, tuple, bool]  # rule id, position, rhs-to-lhs flag


@dataclass(frozen=True)
class Discharge:
    """Rewrite scripts joining one goal pair at a common normal form."""

    left: Term
    right: Term
    left_steps: tuple[RewriteApp, ...]
    right_steps: tuple[RewriteApp, ...]
    normal_form: Term

    def to_json_dict(self) -> dict:
        def script(steps):
            return [{"rule": r, "pos": list(p), "flipped": f} for r, p, f in steps]
        return {"left": format_term(self.left), "right": format_term(self.right),
                "left_steps": script(self.left_steps),
                "right_steps": script(self.right_steps),
                "normal_form": format_term(self.normal_form)}


@dataclass(frozen=True)
class Proof:
    axioms: tuple[int, ...]
    generators: tuple[str, ...]
    steps: dict[int, Step]
    discharges: tuple[Discharge, ...]

    def to_json_dict(self) -> dict:
        return {"axioms": list(self.axioms),
                "generators": list(self.generators),
                "steps": [self.steps[i].to_json_dict() for i in sorted(self.steps)],
                "discharges": [d.to_json_dict() for d in self.discharges]}


@dataclass
class ProveOutcome:
    """status: proved / saturated_without_proof / resource_out.

    saturated_without_proof is definitive: the goals are not derivable.
    resource_out names the limit hit in `limit` (nodes, term_size, wall,
    cancelled).
    """

    status: str
    proof: Optional[Proof] = None
    limit: Optional[str] = None
    iterations: int = 0
    generated: int = 0
    kept: int = 0
    elapsed_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {"status": self.status,
                "proof": self.proof.to_json_dict() if self.proof else None,
                "limit": self.limit,
                "iterations": self.iterations, "generated": self.generated,
                "kept": self.kept, "elapsed_s": round(self.elapsed_s, 6)}


def axiom_terms(k: int) -> tuple[Term, Term]:
    lhs_text, rhs_text = AXIOM_TEXT[k].rstrip(".").split("=")
    return parse_term(lhs_text), parse_term(rhs_text)


def relation_equations(p: Presentation) -> tuple[tuple[Term, Term], ...]:
    """Crossing relations as ground equations a * b = c."""
    return tuple((app(const(a), const(b)), const(c)) for a, b, c in p.relations)


def orient(lhs: Term, rhs: Term, prec: Precedence) -> Optional[tuple[Term, Term, bool]]:
    """(left, right, oriented) with left the rewriting side, or None if trivial."""
    cmp = kbo_compare(lhs, rhs, prec)
    if cmp == EQUAL:
        return None
    if cmp == LESS:
        return rhs, lhs, True
    return lhs, rhs, cmp == GREATER


def normalize(t: Term, rules: Iterable[tuple[Term, Term]]) -> Term:
    """Demodulate t with oriented rules (first match wins, innermost first).

    Plain utility for callers holding a fixed rule list; the saturation loop
    uses its own indexed, memoized variant of the same strategy.
    """
    rules = tuple(rules)
    if t.kind == 2:
        t = app(normalize(t.left, rules), normalize(t.right, rules))
    for l, r in rules:
        sub: dict = {}
        if match(l, t, sub):
            return normalize(apply_subst(r, sub), rules)
    return t


def format_proof(proof: Proof) -> str:
    """Human-readable trace: one numbered line per step, then the goal joins."""
    lines = []
    for sid in sorted(proof.steps):
        s = proof.steps[sid]
        if s.kind == "input":
            origin = "assumption" if s.axiom is None else f"axiom {s.axiom}"
        elif s.kind == "cp":
            origin = (f"cp({s.outer}.{s.outer_side} <- {s.inner}.{s.inner_side}"
                      f" at {''.join(map(str, s.pos)) or 'root'})")
        else:
            origin = f"normalize({s.source} by {','.join(map(str, s.rules))})"
        lines.append(f"{s.id}. {format_term(s.lhs)} = {format_term(s.rhs)}.  [{origin}]")
    for d in proof.discharges:
        def script(steps):
            if not steps:
                return "already normal"
            return " ".join(f"{r}@{''.join(map(str, p)) or 'root'}{'R' if f else ''}"
                            for r, p, f in steps)
        lines.append(f"join {format_term(d.left)} = {format_term(d.right)} "
                     f"at {format_term(d.normal_form)}  "
                     f"[{script(d.left_steps)} | {script(d.right_steps)}]")
    return "\n".join(lines)


class _Prover:
    def __init__(self, generators: tuple[str, ...],
                 assumptions: tuple[tuple[Term, Term], ...],
                 goals: tuple[tuple[Term, Term], ...],
                 axioms: tuple[int, ...], budget: SearchBudget):
        self.generators = tuple(generators)
        self.assumptions = assumptions
        self.goal_pairs = list(goals)
        self.axioms = tuple(sorted(axioms))
        self.budget = budget
        self.prec = Precedence(self.generators)
        self.steps: dict[int, Step] = {}
        self.next_id = 1
        self.pending: dict[int, tuple[Term, Term]] = {}
        self.heap: list[tuple[int, int, int]] = []
        self.fifo: deque[int] = deque()
        self.pick_count = 0
        self.seq = 0
        # active equations, oriented at activation: id -> (left, right, oriented)
        self.active: dict[int, tuple[Term, Term, bool]] = {}
        # index entries carry whether the active orientation swapped the
        # recorded equation, so rewrite scripts can refer to the record
        self.ground_rules: dict[Term, tuple[Term, int, bool]] = {}
        self.nonground_oriented: list[tuple[int, Term, Term, bool]] = []
        self.unoriented: list[tuple[int, Term, Term]] = []
        self.memo: dict[Term, tuple[Term, frozenset]] = {}
        self.seen: set[tuple[Term, Term]] = set()
        self.generated = 0
        self.kept = 0
        self.dropped = 0
        self.iterations = 0
        self.ticks = 0

    # ------------------------------------------------------------- plumbing

    def _tick(self) -> None:
        # fine-grained poll: iterations can take seconds once many rules are
        # active, so the budget is also checked inside overlap generation
        self.ticks += 1
        if self.ticks & _POLL_MASK == 0:
            limit = self.budget.tripped(self.kept)
            if limit is not None:
                raise _BudgetOut(limit)

    def _new_step(self, lhs: Term, rhs: Term, **kw) -> Step:
        step = Step(id=self.next_id, lhs=lhs, rhs=rhs, **kw)
        self.steps[step.id] = step
        self.next_id += 1
        return step

    def _admit(self, lhs: Term, rhs: Term) -> bool:
        cap = self.budget.max_term_size
        if cap is not None and (lhs.size > cap or rhs.size > cap):
            self.dropped += 1
            return False
        return True

    def _enqueue(self, step: Step) -> None:
        self.pending[step.id] = (step.lhs, step.rhs)
        weight = step.lhs.size + step.rhs.size
        self.seq += 1
        heapq.heappush(self.heap, (weight, self.seq, step.id))
        self.fifo.append(step.id)
        self.kept += 1

    def _mark_seen(self, lhs: Term, rhs: Term) -> bool:
        """Record the pair; True if it was new."""
        key = canonical_pair(lhs, rhs)
        if key in self.seen:
            return False
        self.seen.add(key)
        self.seen.add(canonical_pair(rhs, lhs))
        return True

    def _pick(self) -> Optional[int]:
        while self.heap or self.fifo:
            self.pick_count += 1
            if self.pick_count % 6 and self.heap:
                _, _, eid = heapq.heappop(self.heap)
            elif self.fifo:
                eid = self.fifo.popleft()
            else:
                continue
            if eid in self.pending:
                return eid
        return None

    def _subsumed(self, lhs: Term, rhs: Term) -> bool:
        for l, r, _ in self.active.values():
            for pl, pr in ((l, r), (r, l)):
                m: dict = {}
                if match(pl, lhs, m) and match(pr, rhs, m):
                    return True
        return False

    # -------------------------------------------------------- normalization

    def normalize(self, t: Term, used: set) -> Term:
        entry = self.memo.get(t)
        if entry is not None:
            used |= entry[1]
            return entry[0]
        local: set = set()
        if t.kind == 2:  # APP
            cur = app(self.normalize(t.left, local), self.normalize(t.right, local))
        else:
            cur = t
        res = self._root_rewrite(cur, local)
        frozen = frozenset(local)
        self.memo[t] = (res, frozen)
        if cur is not t:
            self.memo[cur] = (res, frozen)
        used |= local
        return res

    def _root_rewrite(self, cur: Term, used: set) -> Term:
        hit = self.ground_rules.get(cur)
        if hit is not None:
            used.add(hit[1])
            return self.normalize(hit[0], used)
        for rid, l, r, _ in self.nonground_oriented:
            sub: dict = {}
            if match(l, cur, sub):
                used.add(rid)
                return self.normalize(apply_subst(r, sub), used)
        for rid, l, r in self.unoriented:
            for s, t in ((l, r), (r, l)):
                sub = {}
                if match(s, cur, sub):
                    inst = apply_subst(t, sub)
                    if kbo_compare(cur, inst, self.prec) == GREATER:
                        used.add(rid)
                        return self.normalize(inst, used)
        return cur

    def _step_redex(self, t: Term, path: tuple) -> Optional[tuple]:
        """Leftmost-innermost single redex: (pos, rule id, flipped, result)."""
        if t.kind == 2:
            found = self._step_redex(t.left, path + (0,))
            if found is None:
                found = self._step_redex(t.right, path + (1,))
            if found is not None:
                return found
        hit = self.ground_rules.get(t)
        if hit is not None:
            return path, hit[1], hit[2], hit[0]
        for rid, l, r, swapped in self.nonground_oriented:
            sub: dict = {}
            if match(l, t, sub):
                return path, rid, swapped, apply_subst(r, sub)
        for rid, l, r in self.unoriented:
            for s, tt, flipped in ((l, r, False), (r, l, True)):
                sub = {}
                if match(s, t, sub):
                    inst = apply_subst(tt, sub)
                    if kbo_compare(t, inst, self.prec) == GREATER:
                        return path, rid, flipped, inst
        return None

    def normalize_traced(self, t: Term) -> tuple[Term, tuple[RewriteApp, ...]]:
        script = []
        cur = t
        while True:
            found = self._step_redex(cur, ())
            if found is None:
                return cur, tuple(script)
            pos, rid, flipped, result = found
            script.append((rid, pos, flipped))
            cur = replace_at(cur, pos, result)

    # ----------------------------------------------------------- activation

    def _activate(self, eid: int, lhs: Term, rhs: Term) -> Optional[tuple]:
        oriented = orient(lhs, rhs, self.prec)
        if oriented is None:
            return None
        left, right, is_rule = oriented
        swapped = left is not lhs
        self.active[eid] = (left, right, is_rule)
        if is_rule:
            if left.ground:
                self.ground_rules[left] = (right, eid, swapped)
            else:
                # id order keeps the scan deterministic regardless of the
                # order equations happened to be activated in
                insort(self.nonground_oriented, (eid, left, right, swapped),
                       key=lambda e: e[0])
        else:
            insort(self.unoriented, (eid, left, right), key=lambda e: e[0])
        self.memo = {}
        return (eid, left, right, is_rule)

    def _retire(self, eid: int) -> None:
        left, right, is_rule = self.active.pop(eid)
        if is_rule and left.ground:
            hit = self.ground_rules.get(left)
            if hit is not None and hit[1] == eid:
                del self.ground_rules[left]
        elif is_rule:
            self.nonground_oriented = [e for e in self.nonground_oriented if e[0] != eid]
        else:
            self.unoriented = [e for e in self.unoriented if e[0] != eid]
        self.memo = {}

    def _reducible_by(self, t: Term, left: Term, right: Term, is_rule: bool) -> bool:
        for _, sub_t in positions(t):
            m: dict = {}
            if match(left, sub_t, m):
                if is_rule:
                    return True
                if kbo_compare(sub_t, apply_subst(right, m), self.prec) == GREATER:
                    return True
            if not is_rule:
                m = {}
                if match(right, sub_t, m) and \
                        kbo_compare(sub_t, apply_subst(left, m), self.prec) == GREATER:
                    return True
        return False

    def _back_simplify(self, new_eid: int, left: Term, right: Term, is_rule: bool) -> None:
        victims = []
        for eid, (al, ar, _) in self.active.items():
            if eid == new_eid:
                continue
            self._tick()
            if self._reducible_by(al, left, right, is_rule) or \
               self._reducible_by(ar, left, right, is_rule):
                victims.append(eid)
        for eid in victims:
            self._retire(eid)
            # renormalize the recorded equation, not the active orientation,
            # so the replay of the normalize step starts from the record
            record = self.steps[eid]
            used: set = set()
            nl = self.normalize(record.lhs, used)
            nr = self.normalize(record.rhs, used)
            if nl is nr or not self._admit(nl, nr):
                continue
            # re-enqueue even if this pair was seen before: the seen set only
            # dedupes generation, and a retired rule's content must survive
            self._mark_seen(nl, nr)
            step = self._new_step(nl, nr, kind="normalize", source=eid,
                                  rules=tuple(sorted(used)))
            self._enqueue(step)

    # ------------------------------------------------------- critical pairs

    def _maximal_sides(self, eid: int) -> Iterator[tuple[Term, Term, str]]:
        left, right, is_rule = self.active[eid]
        step = self.steps[eid]
        yield left, right, ("lhs" if left is step.lhs else "rhs")
        if not is_rule:
            yield right, left, ("lhs" if right is step.lhs else "rhs")

    def _overlaps(self, outer: int, inner: int) -> None:
        for s_out, t_out, side_out in self._maximal_sides(outer):
            for s_in, t_in, side_in in self._maximal_sides(inner):
                offset = max(max_var(s_out), max_var(t_out)) + 1
                si = shift_vars(s_in, offset)
                ti = shift_vars(t_in, offset)
                for pos, sub_t in positions(s_out):
                    if pos == () and outer == inner:
                        continue
                    self._tick()
                    sigma = unify(sub_t, si)
                    if sigma is None:
                        continue
                    so_i = resolve_subst(s_out, sigma)
                    to_i = resolve_subst(t_out, sigma)
                    if kbo_compare(so_i, to_i, self.prec) in (LESS, EQUAL):
                        continue
                    si_i = resolve_subst(si, sigma)
                    ti_i = resolve_subst(ti, sigma)
                    if kbo_compare(si_i, ti_i, self.prec) in (LESS, EQUAL):
                        continue
                    raw_l = replace_at(so_i, pos, ti_i)
                    raw_r = to_i
                    self.generated += 1
                    if raw_l is raw_r:
                        continue
                    raw_l, raw_r = canonical_pair(raw_l, raw_r)
                    if not self._mark_seen(raw_l, raw_r):
                        continue
                    used: set = set()
                    nl = self.normalize(raw_l, used)
                    nr = self.normalize(raw_r, used)
                    if nl is nr:
                        continue
                    if not self._admit(nl, nr):
                        continue
                    raw = self._new_step(raw_l, raw_r, kind="cp",
                                         outer=outer, outer_side=side_out,
                                         inner=inner, inner_side=side_in, pos=pos)
                    if nl is raw_l and nr is raw_r:
                        self._enqueue(raw)
                        continue
                    if not self._mark_seen(nl, nr):
                        continue
                    step = self._new_step(nl, nr, kind="normalize", source=raw.id,
                                          rules=tuple(sorted(used)))
                    self._enqueue(step)

    # ------------------------------------------------------------ goal logic

    def _goals_joined(self) -> bool:
        scratch: set = set()
        return all(self.normalize(u, scratch) is self.normalize(v, scratch)
                   for u, v in self.goal_pairs)

    def _extract(self) -> Optional[Proof]:
        discharges = []
        needed: set[int] = set()
        for u, v in self.goal_pairs:
            nu, su = self.normalize_traced(u)
            nv, sv = self.normalize_traced(v)
            if nu is not nv:
                return None
            discharges.append(Discharge(left=u, right=v, left_steps=su,
                                        right_steps=sv, normal_form=nu))
            needed.update(r for r, _, _ in su + sv)
        stack = list(needed)
        keep: set[int] = set()
        while stack:
            sid = stack.pop()
            if sid in keep:
                continue
            keep.add(sid)
            step = self.steps[sid]
            if step.kind == "cp":
                stack.extend((step.outer, step.inner))
            elif step.kind == "normalize":
                stack.append(step.source)
                stack.extend(step.rules)
        return Proof(axioms=self.axioms, generators=self.generators,
                     steps={i: self.steps[i] for i in keep},
                     discharges=tuple(discharges))

    # -------------------------------------------------------------- run loop

    def run(self) -> ProveOutcome:
        t0 = time.monotonic()
        for k in self.axioms:
            lhs, rhs = axiom_terms(k)
            if self._mark_seen(lhs, rhs):
                self._enqueue(self._new_step(lhs, rhs, kind="input", axiom=k))
        for lhs, rhs in self.assumptions:
            if self._mark_seen(lhs, rhs):
                self._enqueue(self._new_step(lhs, rhs, kind="input"))

        def finish(status: str, proof: Optional[Proof] = None,
                   limit: Optional[str] = None) -> ProveOutcome:
            return ProveOutcome(status=status, proof=proof, limit=limit,
                                iterations=self.iterations,
                                generated=self.generated, kept=self.kept,
                                elapsed_s=time.monotonic() - t0)

        if not self.goal_pairs:
            return finish("proved", self._extract())
        try:
            return self._saturate(finish)
        except _BudgetOut as out:
            return finish("resource_out", limit=out.limit)

    def _saturate(self, finish) -> ProveOutcome:
        while True:
            eid = self._pick()
            if eid is None:
                if self.dropped:
                    # the term size cap discarded consequences, so this is
                    # exhaustion of the capped space, not true saturation
                    return finish("resource_out", limit="term_size")
                return finish("saturated_without_proof")
            self.iterations += 1
            self._tick()
            lhs, rhs = self.pending.pop(eid)
            used: set = set()
            nl = self.normalize(lhs, used)
            nr = self.normalize(rhs, used)
            if nl is nr:
                continue
            if nl is not lhs or nr is not rhs:
                # keep processing even a previously seen pair; duplicates of
                # an active equation die in the subsumption check below
                self._mark_seen(nl, nr)
                step = self._new_step(nl, nr, kind="normalize", source=eid,
                                      rules=tuple(sorted(used)))
                eid, lhs, rhs = step.id, nl, nr
            if self._subsumed(lhs, rhs):
                continue
            activated = self._activate(eid, lhs, rhs)
            if activated is None:
                continue
            _, left, right, is_rule = activated
            self._back_simplify(eid, left, right, is_rule)
            if self._goals_joined():
                proof = self._extract()
                if proof is not None:
                    return finish("proved", proof)
            for other in list(self.active):
                self._overlaps(eid, other)
                if other != eid:
                    self._overlaps(other, eid)


def saturate_equations(generators: Iterable[str],
                       assumptions: Iterable[tuple[Term, Term]],
                       goals: Iterable[tuple[Term, Term]],
                       axioms: tuple[int, ...] = ALL_AXIOMS,
                       budget: Optional[SearchBudget] = None) -> ProveOutcome:
    """Saturation over raw term equations; goals are pairs to be joined."""
    if budget is None:
        budget = SearchBudget()
    budget.start()
    return _Prover(tuple(generators), tuple(assumptions), tuple(goals),
                   axioms, budget).run()


def saturate(p: Presentation, axioms: tuple[int, ...] = ALL_AXIOMS,
             budget: Optional[SearchBudget] = None) -> ProveOutcome:
    """Try to derive the goal chain; see ProveOutcome for the three answers."""
    goals = tuple((const(u), const(v)) for u, v in p.goal)
    return saturate_equations(p.generators, relation_equations(p), goals,
                              axioms, budget)
