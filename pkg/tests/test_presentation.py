"""Diagram to involutory quandle presentation."""

import pytest

from unknot.diagrams import KnotDiagram, RelationInput, parse_pd
from unknot.presentation import (arcs_of, format_prover_input, natural_key,
                                 presentation_from_relations, presentation_of,
                                 presentation_of_input)

from conftest import BIGON_PD, KINK_PD, TREFOIL_PD

TREFOIL_PROVER_INPUT = """\
Assumptions:
x * x = x.
(x * y) * y = x.
(x * z) * (y * z) = (x * y) * z.
a2 = a1 * a3.
a1 = a3 * a2.
a3 = a2 * a1.

Goals:
(a1 = a2) & (a2 = a3).
"""


def test_trefoil_presentation():
    p = presentation_of(parse_pd(TREFOIL_PD))
    assert p.generators == ("a1", "a2", "a3")
    assert len(p.relations) == 3
    # one relation per crossing, over-arc in the middle
    assert set(p.relations) == {("a1", "a3", "a2"), ("a3", "a2", "a1"),
                                ("a2", "a1", "a3")}
    assert p.goal == (("a1", "a2"), ("a2", "a3"))


def test_arc_count_equals_crossing_count():
    for text in (TREFOIL_PD, BIGON_PD, KINK_PD):
        d = parse_pd(text)
        assert len(arcs_of(d)) == len(d.crossings)


def test_kink_presentation_single_generator():
    p = presentation_of(parse_pd(KINK_PD))
    assert p.generators == ("a1",)
    assert p.relations == (("a1", "a1", "a1"),)
    assert p.goal == ()


def test_bigon_presentation():
    p = presentation_of(parse_pd(BIGON_PD))
    assert p.generators == ("a1", "a2")
    assert set(p.relations) == {("a1", "a1", "a2"), ("a2", "a1", "a1")}
    assert p.goal == (("a1", "a2"),)


def test_circle_presentation():
    p = presentation_of(KnotDiagram((), 1))
    assert p.generators == ("a1",)
    assert p.relations == ()
    assert p.goal == ()


def test_presentation_from_relations_sorts_naturally():
    r = RelationInput(generators=("a10", "a2", "a1"),
                      relations=(("a10", "a2", "a1"),))
    p = presentation_from_relations(r)
    assert p.generators == ("a1", "a2", "a10")
    assert p.goal == (("a1", "a2"), ("a2", "a10"))


def test_natural_key_orders_numeric_suffixes():
    names = ["a10", "a2", "a1", "b1"]
    assert sorted(names, key=natural_key) == ["a1", "a2", "a10", "b1"]


def test_presentation_of_input_dispatch(trefoil):
    assert presentation_of_input(trefoil) == presentation_of(trefoil)
    r = RelationInput(generators=("a1", "a2"), relations=(("a1", "a2", "a1"),))
    p = presentation_of_input(r)
    assert p.generators == ("a1", "a2")


def test_format_prover_input_golden(trefoil_presentation):
    assert format_prover_input(trefoil_presentation) == TREFOIL_PROVER_INPUT


def test_format_prover_input_axiom_subset(trefoil_presentation):
    text = format_prover_input(trefoil_presentation, axioms=(1, 3))
    assert "x * x = x." in text
    assert "(x * y) * y = x." not in text
    assert "(x * z) * (y * z) = (x * y) * z." in text
