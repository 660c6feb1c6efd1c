"""Interned first-order terms over a single binary operation.

Every term is hash-consed: building the same shape twice returns the same
object, so equality is identity and structural comparisons are O(1).  The
only function symbol is the binary quandle operation, written ``*`` in text
form; leaves are variables (x, y, z, u, v, w, then x7, x8, ...) and named
constants.
"""

from __future__ import annotations

import re
from typing import Iterator, Optional

VAR = 0
CONST = 1
APP = 2

_VAR_NAMES = ("x", "y", "z", "u", "v", "w")
_VAR_SHAPE = re.compile(r"^(?:[xyzuvw]|x[0-9]+)$")


class Term:
    """A node in the shared term DAG.  Compare with ``is``, never ``==``."""

    __slots__ = ("kind", "index", "name", "left", "right", "size", "vcounts")

    def __init__(self, kind: int, index: int, name: Optional[str],
                 left: Optional["Term"], right: Optional["Term"],
                 size: int, vcounts: tuple):
        self.kind = kind
        self.index = index          # variable index, or constant rank
        self.name = name            # constant name, None otherwise
        self.left = left
        self.right = right
        self.size = size            # symbol count; doubles as KBO weight
        self.vcounts = vcounts      # sorted tuple of (var_index, occurrences)

    def __repr__(self) -> str:
        return format_term(self)

    @property
    def ground(self) -> bool:
        return not self.vcounts


_vars: dict[int, Term] = {}
_consts: dict[str, Term] = {}
_apps: dict[tuple, Term] = {}
_const_rank: dict[str, int] = {}


def var(i: int) -> Term:
    t = _vars.get(i)
    if t is None:
        t = _vars.setdefault(i, Term(VAR, i, None, None, None, 1, ((i, 1),)))
    return t


def const(name: str) -> Term:
    t = _consts.get(name)
    if t is None:
        if _VAR_SHAPE.match(name):
            raise ValueError(f"constant name {name!r} collides with variable syntax")
        rank = _const_rank.setdefault(name, len(_const_rank))
        t = _consts.setdefault(name, Term(CONST, rank, name, None, None, 1, ()))
    return t


def _merge_vcounts(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    counts: dict[int, int] = dict(a)
    for i, n in b:
        counts[i] = counts.get(i, 0) + n
    return tuple(sorted(counts.items()))


def app(l: Term, r: Term) -> Term:
    key = (l, r)
    t = _apps.get(key)
    if t is None:
        t = _apps.setdefault(
            key, Term(APP, -1, None, l, r, l.size + r.size + 1,
                      _merge_vcounts(l.vcounts, r.vcounts)))
    return t


def occurrences(t: Term, v: int) -> int:
    for i, n in t.vcounts:
        if i == v:
            return n
    return 0


# ---------------------------------------------------------------- positions

def positions(t: Term) -> Iterator[tuple[tuple, Term]]:
    """Yield (path, subterm) for every non-variable position, root first.

    Paths are tuples of 0 (left) / 1 (right).
    """
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        if s.kind == VAR:
            continue
        yield path, s
        if s.kind == APP:
            stack.append((path + (1,), s.right))
            stack.append((path + (0,), s.left))


def subterm_at(t: Term, path: tuple) -> Term:
    for step in path:
        t = t.left if step == 0 else t.right
        if t is None:
            raise ValueError(f"path {path} leaves the term")
    return t


def replace_at(t: Term, path: tuple, s: Term) -> Term:
    if not path:
        return s
    if t.kind != APP:
        raise ValueError(f"path {path} leaves the term")
    if path[0] == 0:
        return app(replace_at(t.left, path[1:], s), t.right)
    return app(t.left, replace_at(t.right, path[1:], s))


# ------------------------------------------------- substitution and matching

def apply_subst(t: Term, subst: dict[int, Term]) -> Term:
    if t.ground:
        return t
    if t.kind == VAR:
        return subst.get(t.index, t)
    return app(apply_subst(t.left, subst), apply_subst(t.right, subst))


def match(pattern: Term, t: Term, subst: dict[int, Term]) -> bool:
    """Extend subst so that pattern . subst == t, or return False.

    subst may be partially filled; on failure it can hold junk, so callers
    pass a scratch dict.
    """
    if pattern.kind == VAR:
        bound = subst.get(pattern.index)
        if bound is None:
            subst[pattern.index] = t
            return True
        return bound is t
    if pattern.kind == CONST:
        return pattern is t
    if t.kind != APP:
        return False
    return match(pattern.left, t.left, subst) and match(pattern.right, t.right, subst)


def _walk(t: Term, subst: dict[int, Term]) -> Term:
    while t.kind == VAR and t.index in subst:
        t = subst[t.index]
    return t


def _occurs(v: int, t: Term, subst: dict[int, Term]) -> bool:
    t = _walk(t, subst)
    if t.kind == VAR:
        return t.index == v
    if t.kind == CONST:
        return False
    return _occurs(v, t.left, subst) or _occurs(v, t.right, subst)


def unify(s: Term, t: Term, subst: Optional[dict[int, Term]] = None) -> Optional[dict[int, Term]]:
    """Most general unifier of s and t sharing one variable namespace.

    Returns a triangular substitution (resolve with resolve_subst), or None.
    """
    if subst is None:
        subst = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = _walk(a, subst)
        b = _walk(b, subst)
        if a is b:
            continue
        if a.kind == VAR:
            if _occurs(a.index, b, subst):
                return None
            subst[a.index] = b
        elif b.kind == VAR:
            if _occurs(b.index, a, subst):
                return None
            subst[b.index] = a
        elif a.kind == APP and b.kind == APP:
            stack.append((a.right, b.right))
            stack.append((a.left, b.left))
        else:
            return None
    return subst


def resolve_subst(t: Term, subst: dict[int, Term]) -> Term:
    """Apply a triangular substitution produced by unify, fully resolving."""
    t = _walk(t, subst)
    if t.kind == APP:
        return app(resolve_subst(t.left, subst), resolve_subst(t.right, subst))
    return t


def shift_vars(t: Term, offset: int) -> Term:
    if t.ground or offset == 0:
        return t
    if t.kind == VAR:
        return var(t.index + offset)
    return app(shift_vars(t.left, offset), shift_vars(t.right, offset))


def max_var(t: Term) -> int:
    """Largest variable index in t, or -1 if ground."""
    return t.vcounts[-1][0] if t.vcounts else -1


def canonical_pair(lhs: Term, rhs: Term) -> tuple[Term, Term]:
    """Rename variables to 0.. in first-occurrence order across (lhs, rhs)."""
    mapping: dict[int, Term] = {}

    def walk(t: Term) -> Term:
        if t.kind == VAR:
            v = mapping.get(t.index)
            if v is None:
                v = var(len(mapping))
                mapping[t.index] = v
            return v
        if t.kind == CONST:
            return t
        return app(walk(t.left), walk(t.right))

    return walk(lhs), walk(rhs)


# ------------------------------------------------------------------ syntax

def var_name(i: int) -> str:
    return _VAR_NAMES[i] if i < len(_VAR_NAMES) else f"x{i}"


def _var_index(name: str) -> Optional[int]:
    if name in _VAR_NAMES:
        return _VAR_NAMES.index(name)
    if name.startswith("x") and name[1:].isdigit():
        return int(name[1:])
    return None


def format_term(t: Term) -> str:
    if t.kind == VAR:
        return var_name(t.index)
    if t.kind == CONST:
        return t.name
    parts = []
    for s in (t.left, t.right):
        text = format_term(s)
        parts.append(f"({text})" if s.kind == APP else text)
    return f"{parts[0]} * {parts[1]}"


_TOKEN = re.compile(r"\s*(\(|\)|\*|[A-Za-z_][A-Za-z0-9_]*)")


def parse_term(text: str) -> Term:
    """Parse ``(x * y) * a1`` style syntax.  x,y,z,u,v,w and xN are variables."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad character at offset {pos} in term {text!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.reverse()

    def atom() -> Term:
        if not tokens:
            raise ValueError(f"unexpected end of term {text!r}")
        tok = tokens.pop()
        if tok == "(":
            t = expr()
            if not tokens or tokens.pop() != ")":
                raise ValueError(f"unbalanced parentheses in term {text!r}")
            return t
        if tok in ("*", ")"):
            raise ValueError(f"unexpected {tok!r} in term {text!r}")
        i = _var_index(tok)
        return var(i) if i is not None else const(tok)

    def expr() -> Term:
        t = atom()
        while tokens and tokens[-1] == "*":
            tokens.pop()
            t = app(t, atom())  # left-associative
        return t

    t = expr()
    if tokens:
        raise ValueError(f"trailing junk in term {text!r}")
    return t
