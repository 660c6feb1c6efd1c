"""Finite countermodel search and its independent verifier."""

import dataclasses
import threading

import pytest

from unknot.budget import SearchBudget
from unknot.diagrams import parse_pd
from unknot.invariants import dihedral_quandle
from unknot.modelfind import (FiniteQuandle, check_model, check_model_report,
                              find_minimal_countermodel, find_model,
                              format_interpretation)
from unknot.presentation import Presentation, presentation_of

from conftest import (BIGON_PD, TREFOIL_PD, brute_force_model_exists,
                      load_knot_table)

TREFOIL_BLOCK = (
    "interpretation( 3, [number=1, seconds=0], [\n"
    "        function(a1, [ 0 ]),\n"
    "        function(a2, [ 1 ]),\n"
    "        function(a3, [ 2 ]),\n"
    "        function(*(_,_), [\n"
    "\t\t\t   0, 2, 1,\n"
    "\t\t\t   2, 1, 0,\n"
    "\t\t\t   1, 0, 2 ])\n"
    "]).")


@pytest.fixture(scope="module")
def trefoil_outcome(trefoil_presentation):
    out = find_minimal_countermodel(trefoil_presentation, max_size=6)
    assert out.status == "found"
    return out


def test_trefoil_minimal_countermodel(trefoil_outcome, trefoil_presentation):
    assert trefoil_outcome.size == 3
    assert trefoil_outcome.sizes_refuted == (2,)
    assert check_model_report(trefoil_outcome.model, trefoil_presentation) is None
    assert check_model(trefoil_outcome.model, trefoil_presentation)


def test_trefoil_interpretation_block(trefoil_outcome, trefoil_presentation):
    text = format_interpretation(trefoil_outcome.model,
                                 generator_order=trefoil_presentation.generators)
    assert text == TREFOIL_BLOCK


def test_trefoil_absent_at_size_two(trefoil_presentation):
    out = find_model(trefoil_presentation, n=2)
    assert out.status == "absent"
    assert out.model is None


def test_unknot_bigon_exhausts(trefoil_presentation):
    p = presentation_of(parse_pd(BIGON_PD))
    out = find_minimal_countermodel(p, max_size=6)
    assert out.status == "exhausted"
    assert out.sizes_refuted == (2, 3, 4, 5, 6)


def test_culprit_exhausts(culprit):
    out = find_minimal_countermodel(culprit, max_size=6)
    assert out.status == "exhausted"


def test_free_pair_under_partial_axioms_has_trivial_op_model():
    p = Presentation(generators=("a1", "a2"), relations=(), goal=(("a1", "a2"),))
    out = find_model(p, axioms=(2, 3), n=2)
    assert out.status == "found"
    q = out.model
    assert check_model_report(q, p, axioms=(2, 3)) is None
    assert len(set(q.assignment.values())) == 2


def test_found_models_are_generated_by_their_assignment(trefoil_presentation):
    # closure of the generator values under the operation fills the domain;
    # anything smaller would contradict minimality
    for name in ("3_1", "4_1", "6_1", "7_4"):
        p = presentation_of(load_knot_table()[name])
        out = find_minimal_countermodel(p, max_size=12)
        assert out.status == "found"
        q = out.model
        reached = set(q.assignment.values())
        while True:
            nxt = reached | {q.table[i][j] for i in reached for j in reached}
            if nxt == reached:
                break
            reached = nxt
        assert reached == set(range(q.size)), name


def test_budget_cancellation_at_checkpoint():
    """Cancellation is polled every 2**14 nodes, so it can only take effect
    on a search big enough to reach a checkpoint; the small sweeps above
    finish in a few hundred nodes and legitimately run to completion.  This
    is the slowest unit test (about 20 s): 8_6 needs a large refutation
    before its first checkpoint."""
    ev = threading.Event()
    ev.set()
    p = presentation_of(load_knot_table()["8_6"])
    out = find_minimal_countermodel(p, max_size=23,
                                    budget=SearchBudget(cancel=ev))
    assert out.status == "resource_out"
    assert out.sizes_refuted  # partial progress is reported


def test_small_search_ignores_cancel_below_checkpoint():
    ev = threading.Event()
    ev.set()
    p = presentation_of(load_knot_table()["6_2"])
    out = find_minimal_countermodel(p, max_size=24,
                                    budget=SearchBudget(cancel=ev))
    # 491 nodes total: never reaches a checkpoint, completes anyway
    assert out.status == "found"
    assert out.size == 11


def test_search_agrees_with_brute_force_at_micro_scale(trefoil_presentation):
    bigon = presentation_of(parse_pd(BIGON_PD))
    free_pair = Presentation(generators=("a1", "a2"), relations=(),
                             goal=(("a1", "a2"),))
    cases = [(trefoil_presentation, (1, 2, 3)),
             (bigon, (1, 2, 3)),
             (free_pair, (1, 2, 3)),
             (free_pair, (2, 3)),
             (free_pair, (1, 3)),
             (free_pair, (1, 2))]
    for p, axioms in cases:
        for n in (2, 3):
            expected = brute_force_model_exists(p, axioms, n)
            got = find_model(p, axioms=axioms, n=n).status == "found"
            assert got == expected, (p.generators, axioms, n)


def test_check_model_mutations_rejected(trefoil_outcome, trefoil_presentation):
    q = trefoil_outcome.model
    p = trefoil_presentation

    def flip(q, i, j, v):
        t = [list(r) for r in q.table]
        t[i][j] = v
        return dataclasses.replace(q, table=tuple(tuple(r) for r in t))

    mutants = [
        flip(q, 0, 1, (q.table[0][1] + 1) % q.size),
        flip(q, 1, 1, (q.table[1][1] + 1) % q.size),
        flip(q, 2, 0, 99),
        dataclasses.replace(q, assignment={g: 0 for g in q.assignment}),
        dataclasses.replace(q, assignment={"a1": 0}),
        dataclasses.replace(q, table=(q.table[0][:2],) + q.table[1:]),
        dataclasses.replace(q, assignment={**q.assignment,
                                           "a1": q.assignment["a2"]}),
    ]
    for m in mutants:
        assert check_model_report(m, p) is not None


def test_size_one_model_never_denies_triviality():
    p = Presentation(generators=("a1", "a2"), relations=(), goal=(("a1", "a2"),))
    q = FiniteQuandle(size=1, table=((0,),), assignment={"a1": 0, "a2": 0})
    err = check_model_report(q, p)
    assert err is not None


def test_dihedral_r5_block_shape():
    table = dihedral_quandle(5)
    q = FiniteQuandle(size=5, table=table,
                      assignment={"a1": 0, "a2": 1})
    p = Presentation(generators=("a1", "a2"), relations=(), goal=(("a1", "a2"),))
    assert check_model_report(q, p) is None
    text = format_interpretation(q)
    assert text.startswith("interpretation( 5, [number=1, seconds=0], [")
    assert text.rstrip().endswith("]).")
    # row i of the operation table is (2j - i) mod 5
    for i in range(5):
        for j in range(5):
            assert table[i][j] == (2 * j - i) % 5
