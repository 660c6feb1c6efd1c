"""Input formats: PD codes, Gauss codes, relation lists, auto-detection."""

import pytest

from unknot.diagrams import (KnotDiagram, ParseError, RelationInput, load_input,
                             parse_gauss, parse_pd, parse_relations,
                             serialize_gauss, serialize_pd, serialize_relations)
from unknot.invariants import determinant

from conftest import TREFOIL_PD, load_knot_table


def test_parse_pd_trefoil():
    d = parse_pd(TREFOIL_PD)
    assert d.crossings == ((1, 4, 2, 5), (5, 2, 6, 3), (3, 6, 4, 1))
    assert d.edge_count == 6


def test_pd_round_trip_on_all_fixtures():
    for name, d in load_knot_table().items():
        assert parse_pd(serialize_pd(d)) == d, name


def test_pd_whitespace_and_sign_tolerance():
    assert parse_pd(" PD[ X(1,4,2,5), X(5,2,6,3),\n X(3,6,4,1) ] ") == parse_pd(TREFOIL_PD)


def test_gauss_round_trip_preserves_structure():
    for name, d in load_knot_table().items():
        back = parse_gauss(serialize_gauss(d))
        assert len(back.crossings) == len(d.crossings), name
        assert determinant(back) == determinant(d), name


def test_parse_gauss_trefoil_direct():
    d = parse_gauss("O1+U2+O3+U1+O2+U3+")
    assert len(d.crossings) == 3
    assert determinant(d) == 3


def test_parse_gauss_unmatched_label():
    with pytest.raises(ParseError):
        parse_gauss("O1+U2+O3+U1+O2+U2+")


def test_pd_validation_errors():
    with pytest.raises(ParseError):
        parse_pd("PD[X(1,1,1,1)]")  # edge used four times
    with pytest.raises(ParseError):
        parse_pd("PD[X(1,2,3,4)]")  # each edge only once
    with pytest.raises(ParseError):
        parse_pd("PD[X(1,9,2,2)]")  # label out of range
    with pytest.raises(ParseError):
        parse_pd("PD[X(1,2")  # syntax


def test_zero_crossing_diagram():
    d = KnotDiagram((), 1)
    assert serialize_pd(d) == "PD[]"
    with pytest.raises(ParseError):
        KnotDiagram((), 0)


def test_parse_relations_culprit_shape():
    text = "% header\na1 = a9 * a7.\na3 = a1 * a2.\n"
    r = parse_relations(text)
    assert isinstance(r, RelationInput)
    assert r.relations == (("a9", "a7", "a1"), ("a1", "a2", "a3"))
    assert r.generators == ("a1", "a9", "a7", "a3", "a2")  # first appearance


def test_parse_relations_bad_line_reports_number():
    with pytest.raises(ParseError) as e:
        parse_relations("a1 = a2 * a3.\nnot a relation\n")
    assert "2" in str(e.value)


def test_relations_round_trip():
    r = parse_relations("a1 = a9 * a7.\na3 = a1 * a2.")
    assert parse_relations(serialize_relations(r)) == r


def test_load_input_detects_all_three_formats():
    assert isinstance(load_input(TREFOIL_PD), KnotDiagram)
    assert isinstance(load_input("O1+U2+O3+U1+O2+U3+"), KnotDiagram)
    assert isinstance(load_input("a1 = a2 * a3."), RelationInput)
    with pytest.raises(ParseError):
        load_input("certainly not an input")


def test_load_input_skips_comments():
    d = load_input("% a trefoil\n" + TREFOIL_PD + "\n")
    assert isinstance(d, KnotDiagram)
    assert len(d.crossings) == 3
