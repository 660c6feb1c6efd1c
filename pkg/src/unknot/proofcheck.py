"""Independent replay of saturation proofs.

The checker shares nothing with the prover's search state: it rebuilds every
claimed step from the step records alone and refuses the proof unless each
one reproduces exactly.

* input steps must be one of the listed axioms or an assumption of the
  theory being decided;
* critical pair steps are recomputed from the recorded parents, overlap
  position and sides, and must yield the recorded equation up to the
  canonical variable renaming;
* normalize steps are replayed with only the rules they cite, using the
  same deterministic strategy as the prover (innermost first; ground rules,
  then oriented nonground rules and unorientable equations in id order);
* goal discharges replay their rewrite scripts literally, one application
  per entry, and both sides must land on the recorded common normal form.

A proof that passes entails the goal equations from the axioms and
assumptions; a corrupted or truncated proof is rejected with a reason.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .kbo import GREATER, Precedence, kbo_compare
from .presentation import Presentation
from .prover import (Proof, ProveOutcome, RewriteApp, Step, axiom_terms,
                     orient, relation_equations)
from .terms import (Term, app, apply_subst, canonical_pair, const, match,
                    max_var, replace_at, resolve_subst, shift_vars,
                    subterm_at, unify)


class _RuleSet:
    """Rewriter over a fixed set of proof steps, mirroring the prover."""

    def __init__(self, steps: dict[int, Step], rule_ids: Iterable[int],
                 prec: Precedence):
        self.prec = prec
        self.ground: dict[Term, tuple[Term, int]] = {}
        self.nonground: list[tuple[Term, Term]] = []
        self.unoriented: list[tuple[Term, Term]] = []
        for rid in sorted(set(rule_ids)):
            s = steps[rid]
            oriented = orient(s.lhs, s.rhs, prec)
            if oriented is None:
                continue
            left, right, is_rule = oriented
            if is_rule and left.ground:
                self.ground[left] = (right, rid)
            elif is_rule:
                self.nonground.append((left, right))
            else:
                self.unoriented.append((left, right))

    def normalize(self, t: Term) -> Term:
        if t.kind == 2:  # APP
            t = app(self.normalize(t.left), self.normalize(t.right))
        hit = self.ground.get(t)
        if hit is not None:
            return self.normalize(hit[0])
        for l, r in self.nonground:
            sub: dict = {}
            if match(l, t, sub):
                return self.normalize(apply_subst(r, sub))
        for l, r in self.unoriented:
            for s, u in ((l, r), (r, l)):
                sub = {}
                if match(s, t, sub):
                    inst = apply_subst(u, sub)
                    if kbo_compare(t, inst, self.prec) == GREATER:
                        return self.normalize(inst)
        return t


def _side(step: Step, tag: str) -> tuple[Term, Term]:
    if tag == "lhs":
        return step.lhs, step.rhs
    if tag == "rhs":
        return step.rhs, step.lhs
    raise ValueError(f"bad side tag {tag!r}")


def _check_cp(step: Step, steps: dict[int, Step]) -> Optional[str]:
    if step.outer not in steps or step.inner not in steps:
        return f"step {step.id}: missing parent"
    if step.outer >= step.id or step.inner >= step.id:
        return f"step {step.id}: parent does not precede it"
    if step.pos == () and step.outer == step.inner:
        return f"step {step.id}: root overlap of an equation with itself"
    try:
        s_out, t_out = _side(steps[step.outer], step.outer_side)
        s_in, t_in = _side(steps[step.inner], step.inner_side)
        sub_t = subterm_at(s_out, step.pos)
    except ValueError as e:
        return f"step {step.id}: {e}"
    if sub_t.kind == 0:  # VAR
        return f"step {step.id}: overlap at a variable position"
    offset = max(max_var(s_out), max_var(t_out)) + 1
    si = shift_vars(s_in, offset)
    ti = shift_vars(t_in, offset)
    sigma = unify(sub_t, si)
    if sigma is None:
        return f"step {step.id}: recorded overlap does not unify"
    raw_l = replace_at(resolve_subst(s_out, sigma), step.pos,
                       resolve_subst(ti, sigma))
    raw_r = resolve_subst(t_out, sigma)
    if canonical_pair(raw_l, raw_r) != (step.lhs, step.rhs):
        return f"step {step.id}: recorded equation is not the critical pair"
    return None


def _replay_script(start: Term, script: tuple[RewriteApp, ...],
                   steps: dict[int, Step], label: str) -> Union[Term, str]:
    cur = start
    for rid, pos, flipped in script:
        if rid not in steps:
            return f"{label}: script uses unknown step {rid}"
        rule = steps[rid]
        pat, res = (rule.rhs, rule.lhs) if flipped else (rule.lhs, rule.rhs)
        try:
            target = subterm_at(cur, pos)
        except ValueError:
            return f"{label}: script position {pos} leaves the term"
        sub: dict = {}
        if not match(pat, target, sub):
            return f"{label}: step {rid} does not apply at {pos}"
        cur = replace_at(cur, pos, apply_subst(res, sub))
    return cur


def verify_proof_terms(proof: Proof, generators: Iterable[str],
                       assumptions: Iterable[tuple[Term, Term]],
                       goals: Iterable[tuple[Term, Term]],
                       axioms: Optional[tuple[int, ...]] = None) -> Optional[str]:
    """Replay a proof against a raw equational theory; None means valid."""
    generators = tuple(generators)
    goals = tuple(goals)
    if proof.generators != generators:
        return "generator list does not match"
    if axioms is not None and not set(proof.axioms) <= set(axioms):
        return f"proof uses axioms {sorted(set(proof.axioms) - set(axioms))} not allowed here"
    assumed = set(assumptions)
    prec = Precedence(generators)
    steps = proof.steps
    checked: set[int] = set()
    for sid in sorted(steps):
        step = steps[sid]
        if step.id != sid:
            return f"step {sid}: id mismatch"
        if step.kind == "input":
            if step.axiom is not None:
                if step.axiom not in proof.axioms:
                    return f"step {sid}: axiom {step.axiom} not in the proof header"
                if (step.lhs, step.rhs) != axiom_terms(step.axiom):
                    return f"step {sid}: equation is not axiom {step.axiom}"
            elif (step.lhs, step.rhs) not in assumed:
                return f"step {sid}: equation is not an assumption of the theory"
        elif step.kind == "cp":
            reason = _check_cp(step, steps)
            if reason is not None:
                return reason
        elif step.kind == "normalize":
            if step.source not in steps or step.source >= sid:
                return f"step {sid}: bad normalize source"
            if any(r not in steps or r >= sid for r in step.rules):
                return f"step {sid}: bad normalize rule list"
            rs = _RuleSet(steps, step.rules, prec)
            src = steps[step.source]
            if (rs.normalize(src.lhs), rs.normalize(src.rhs)) != (step.lhs, step.rhs):
                return f"step {sid}: normalization does not reproduce the equation"
        else:
            return f"step {sid}: unknown kind {step.kind!r}"
        checked.add(sid)
    if len(proof.discharges) != len(goals):
        return "discharge count does not match the goal"
    for d, (u, v) in zip(proof.discharges, goals):
        label = f"goal {d.left} = {d.right}"
        if d.left is not u or d.right is not v:
            return f"{label}: does not match the goal pair in order"
        left_end = _replay_script(d.left, d.left_steps, steps, label)
        if isinstance(left_end, str):
            return left_end
        right_end = _replay_script(d.right, d.right_steps, steps, label)
        if isinstance(right_end, str):
            return right_end
        if left_end is not d.normal_form or right_end is not d.normal_form:
            return f"{label}: scripts do not meet at the recorded normal form"
    return None


def verify_proof_report(result: Union[ProveOutcome, Proof], p: Presentation,
                        axioms: Optional[tuple[int, ...]] = None) -> Optional[str]:
    """Check a proof against its presentation; None means valid."""
    proof = getattr(result, "proof", result)
    if proof is None:
        return "no proof to check"
    goals = tuple((const(u), const(v)) for u, v in p.goal)
    return verify_proof_terms(proof, p.generators, relation_equations(p),
                              goals, axioms)


def verify_proof(result: Union[ProveOutcome, Proof], p: Presentation,
                 axioms: Optional[tuple[int, ...]] = None) -> bool:
    return verify_proof_report(result, p, axioms) is None
