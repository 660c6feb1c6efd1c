"""Knuth-Bendix ordering with all symbol weights 1.

The precedence puts the binary operation above every constant; constants are
ranked by the order the caller supplies (generator listing order), falling
back to interning order for anything unlisted.  With uniform weights the
weight of a term is just its symbol count, which terms cache.
"""

from __future__ import annotations

from .terms import APP, CONST, VAR, Term, occurrences

GREATER = "greater"
LESS = "less"
EQUAL = "equal"
INCOMPARABLE = "incomparable"

_FLIP = {GREATER: LESS, LESS: GREATER, EQUAL: EQUAL, INCOMPARABLE: INCOMPARABLE}


class Precedence:
    """Constant ranking; the operation symbol implicitly outranks them all."""

    def __init__(self, ordered_constants: tuple[str, ...] = ()):
        self._rank = {name: i for i, name in enumerate(ordered_constants)}

    def rank(self, t: Term) -> int:
        r = self._rank.get(t.name)
        if r is None:
            # stable fallback: interning rank, kept below all listed constants
            r = self._rank.setdefault(t.name, -2 - t.index)
        return r


def _covers(s: Term, t: Term) -> bool:
    """True when every variable occurs in s at least as often as in t."""
    if not t.vcounts:
        return True
    if not s.vcounts:
        return False
    for i, n in t.vcounts:
        if occurrences(s, i) < n:
            return False
    return True


def kbo_compare(s: Term, t: Term, prec: Precedence) -> str:
    """Compare two terms; returns greater/less/equal/incomparable.

    Total on ground terms, stable under substitution and context.
    """
    if s is t:
        return EQUAL
    if s.ground and t.ground:
        return _ground(s, t, prec)

    s_covers = _covers(s, t)
    t_covers = _covers(t, s)
    if s.size > t.size:
        return GREATER if s_covers else INCOMPARABLE
    if s.size < t.size:
        return LESS if t_covers else INCOMPARABLE

    # equal weights
    if s.kind == VAR or t.kind == VAR:
        # distinct terms of weight 1 with a variable on either side
        return INCOMPARABLE
    head = _head_compare(s, t, prec)
    if head == GREATER:
        return GREATER if s_covers else INCOMPARABLE
    if head == LESS:
        return LESS if t_covers else INCOMPARABLE
    # same head symbol: lexicographic on arguments (binary op only)
    sub = kbo_compare(s.left, t.left, prec)
    if sub == EQUAL:
        sub = kbo_compare(s.right, t.right, prec)
    if sub == GREATER:
        return GREATER if s_covers else INCOMPARABLE
    if sub == LESS:
        return LESS if t_covers else INCOMPARABLE
    return sub


def _head_compare(s: Term, t: Term, prec: Precedence) -> str:
    if s.kind == APP:
        return EQUAL if t.kind == APP else GREATER
    if t.kind == APP:
        return LESS
    rs, rt = prec.rank(s), prec.rank(t)
    if rs == rt:
        return EQUAL
    return GREATER if rs > rt else LESS


def _ground(s: Term, t: Term, prec: Precedence) -> str:
    if s is t:
        return EQUAL
    if s.size != t.size:
        return GREATER if s.size > t.size else LESS
    if s.kind == CONST or t.kind == CONST:
        if s.kind == CONST and t.kind == CONST:
            return GREATER if prec.rank(s) > prec.rank(t) else LESS
        return GREATER if s.kind == APP else LESS
    sub = _ground(s.left, t.left, prec)
    if sub == EQUAL:
        sub = _ground(s.right, t.right, prec)
    return sub
