"""Order properties the completion loop depends on."""

from hypothesis import given, strategies as st

from unknot.kbo import EQUAL, GREATER, INCOMPARABLE, LESS, Precedence, kbo_compare
from unknot.terms import app, apply_subst, const, var

PREC = Precedence(("a1", "a2", "a3"))
_FLIP = {GREATER: LESS, LESS: GREATER, EQUAL: EQUAL, INCOMPARABLE: INCOMPARABLE}


def ground_terms(depth=3):
    leaves = st.sampled_from(("a1", "a2", "a3")).map(const)
    return st.recursive(leaves, lambda s: st.tuples(s, s).map(lambda p: app(*p)),
                        max_leaves=2 ** depth)


def pattern_terms(depth=3):
    leaves = st.one_of(st.sampled_from(("a1", "a2", "a3")).map(const),
                       st.integers(0, 2).map(var))
    return st.recursive(leaves, lambda s: st.tuples(s, s).map(lambda p: app(*p)),
                        max_leaves=2 ** depth)


@given(ground_terms(), ground_terms())
def test_ground_totality(s, t):
    c = kbo_compare(s, t, PREC)
    if s is t:
        assert c == EQUAL
    else:
        assert c in (GREATER, LESS)


@given(pattern_terms(), pattern_terms())
def test_antisymmetry(s, t):
    assert kbo_compare(t, s, PREC) == _FLIP[kbo_compare(s, t, PREC)]


@given(ground_terms(), ground_terms(), ground_terms())
def test_ground_transitivity(a, b, c):
    if kbo_compare(a, b, PREC) == GREATER and kbo_compare(b, c, PREC) == GREATER:
        assert kbo_compare(a, c, PREC) == GREATER


@given(pattern_terms(), ground_terms())
def test_proper_subterm_is_smaller(t, extra):
    whole = app(t, extra)
    assert kbo_compare(whole, t, PREC) == GREATER
    assert kbo_compare(whole, extra, PREC) == GREATER


@given(pattern_terms(), pattern_terms(), ground_terms())
def test_compatibility_with_context(s, t, c):
    if kbo_compare(s, t, PREC) == GREATER:
        assert kbo_compare(app(s, c), app(t, c), PREC) == GREATER
        assert kbo_compare(app(c, s), app(c, t), PREC) == GREATER


@given(pattern_terms(), pattern_terms(), ground_terms(), ground_terms(), ground_terms())
def test_stability_under_substitution(s, t, g0, g1, g2):
    if kbo_compare(s, t, PREC) == GREATER:
        subst = {0: g0, 1: g1, 2: g2}
        assert kbo_compare(apply_subst(s, subst), apply_subst(t, subst),
                           PREC) == GREATER


def test_variable_coverage_blocks_orientation():
    # x * y versus y * x: neither instance relation can hold uniformly
    assert kbo_compare(app(var(0), var(1)), app(var(1), var(0)),
                       PREC) == INCOMPARABLE
    # x alone cannot dominate a term mentioning another variable
    assert kbo_compare(var(0), var(1), PREC) == INCOMPARABLE


def test_precedence_orders_constants():
    assert kbo_compare(const("a2"), const("a1"), PREC) == GREATER
    assert kbo_compare(const("a1"), const("a2"), PREC) == LESS
