"""Saturation prover: proofs, saturation verdicts, budgets, regressions."""

import threading

import pytest

from unknot.budget import SearchBudget
from unknot.diagrams import parse_pd
from unknot.kbo import Precedence
from unknot.moves import check_trace_properties, trace_equations
from unknot.presentation import presentation_of
from unknot.prover import (ALL_AXIOMS, axiom_terms, format_proof, normalize,
                           orient, relation_equations, saturate,
                           saturate_equations)
from unknot.terms import app, const, parse_term, var

from conftest import BIGON_PD, KINK_PD, TREFOIL_PD


def test_axiom_terms_shapes():
    x, y, z = var(0), var(1), var(2)
    assert axiom_terms(1) == (app(x, x), x)
    assert axiom_terms(2) == (app(app(x, y), y), x)
    assert axiom_terms(3) == (app(app(x, z), app(y, z)), app(app(x, y), z))
    with pytest.raises(KeyError):
        axiom_terms(4)


def test_orient_prefers_larger_side():
    prec = Precedence(("a1", "a2"))
    l, r, oriented = orient(parse_term("a1 * a2"), const("a1"), prec)
    assert (l, r, oriented) == (parse_term("a1 * a2"), const("a1"), True)
    # same equation given backwards lands the same way around
    l, r, oriented = orient(const("a1"), parse_term("a1 * a2"), prec)
    assert (l, r) == (parse_term("a1 * a2"), const("a1"))
    assert orient(const("a1"), const("a1"), prec) is None


def test_normalize_applies_rules_to_fixpoint():
    rules = [(parse_term("a3"), parse_term("a2")),
             (parse_term("a2 * a1"), parse_term("a1"))]
    assert normalize(parse_term("a3 * a1"), rules) is parse_term("a1")
    assert normalize(parse_term("(a3 * a1) * a1"), rules) is parse_term("a1 * a1")


def test_relation_equations(trefoil_presentation):
    eqs = relation_equations(trefoil_presentation)
    assert (parse_term("a1 * a3"), const("a2")) in eqs
    assert len(eqs) == 3


def test_culprit_proves_and_proof_prints(culprit):
    out = saturate(culprit, budget=SearchBudget(wall_s=60.0))
    assert out.status == "proved"
    assert len(out.proof.discharges) == 9
    text = format_proof(out.proof)
    assert "[axiom 1]" in text and "join" in text
    d = out.to_json_dict()
    assert d["status"] == "proved"
    assert d["proof"]["generators"] == list(culprit.generators)


def test_trefoil_does_not_prove():
    p = presentation_of(parse_pd(TREFOIL_PD))
    out = saturate(p, budget=SearchBudget(max_nodes=4000))
    assert out.status in ("resource_out", "saturated_without_proof")
    assert out.proof is None or out.status != "proved"


def test_bigon_proves_with_q1_alone():
    # a1 * a1 = a2 and idempotence close the goal without the other axioms
    p = presentation_of(parse_pd(BIGON_PD))
    out = saturate(p, axioms=(1,), budget=SearchBudget(wall_s=10.0))
    assert out.status == "proved"


def test_kink_has_no_goals_and_proves_immediately():
    p = presentation_of(parse_pd(KINK_PD))
    out = saturate(p, budget=SearchBudget(wall_s=10.0))
    assert out.status == "proved"
    assert out.proof.discharges == ()


def test_free_generators_saturate_without_proof_under_idempotence():
    # under Q1 alone the system completes at once; the goal stays open,
    # which is the definitive non-derivability verdict
    out = saturate_equations(("a1", "a2"), (), ((const("a1"), const("a2")),),
                             axioms=(1,), budget=SearchBudget(wall_s=30.0))
    assert out.status == "saturated_without_proof"


def test_free_two_generator_kei_is_infinite_so_saturation_diverges():
    out = saturate_equations(("a1", "a2"), (), ((const("a1"), const("a2")),),
                             budget=SearchBudget(max_nodes=3000))
    assert out.status == "resource_out"


def test_budget_node_limit_reported():
    p = presentation_of(parse_pd(TREFOIL_PD))
    out = saturate(p, budget=SearchBudget(max_nodes=50))
    assert out.status == "resource_out"
    assert out.limit == "nodes"


def test_budget_cancellation_reported():
    ev = threading.Event()
    ev.set()
    p = presentation_of(parse_pd(TREFOIL_PD))
    out = saturate(p, budget=SearchBudget(cancel=ev))
    assert out.status == "resource_out"
    assert out.limit == "cancelled"


def test_retired_rule_content_survives_back_simplification():
    """Relabelled goals after a strand poke; a retired rule's normal form
    used to be dropped as already-seen, leaving one goal unreachable."""
    d = parse_pd(TREFOIL_PD)
    trace = trace_equations(d, "RM2_up @ edges 1,3 under")
    report = check_trace_properties(trace, prover_budget_s=5.0)
    assert report.steps_proved == (1,)
    assert report.steps_failed == ()
    assert report.steps_unverified == ()


def test_proof_steps_reference_only_earlier_steps(culprit):
    out = saturate(culprit, budget=SearchBudget(wall_s=60.0))
    steps = out.proof.steps
    for sid, step in steps.items():
        for parent in (step.outer, step.inner, step.source):
            if parent is not None:
                assert parent in steps
                assert parent < sid
