"""Classical abelian invariants used to cross-check search results.

The crossing relations linearize to the coloring matrix: relation
a * b = c contributes a row with -1 at a, +2 at b, -1 at c (entries on a
shared column add up).  From it come the determinant, counts and witnesses
for colorings modulo n, and ready-made dihedral countermodels that bypass
search entirely when the determinant has a prime divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Union

from .diagrams import KnotDiagram, RelationInput
from .presentation import Presentation, presentation_of, presentation_from_relations
from .modelfind import FiniteQuandle, check_model

Source = Union[Presentation, KnotDiagram, RelationInput]


def _as_presentation(source: Source) -> Presentation:
    if isinstance(source, Presentation):
        return source
    if isinstance(source, KnotDiagram):
        return presentation_of(source)
    return presentation_from_relations(source)


def coloring_matrix(source: Source) -> tuple[tuple[int, ...], ...]:
    """Rows indexed by relations, columns by generators (in order)."""
    p = _as_presentation(source)
    col = {g: i for i, g in enumerate(p.generators)}
    rows = []
    for a, b, c in p.relations:
        row = [0] * len(p.generators)
        row[col[a]] -= 1
        row[col[b]] += 2
        row[col[c]] -= 1
        rows.append(tuple(row))
    return tuple(rows)


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free exact determinant.  Mutates its copy of m."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def determinant(source: Source) -> int:
    """Absolute determinant of the coloring matrix minus one row and column.

    The full matrix is always singular (each row sums to zero), so the last
    row and last column are struck before taking the determinant.  A diagram
    with at most one generator has an empty minor, giving 1: exactly the
    value for an unknotted round diagram or a single kink.
    """
    p = _as_presentation(source)
    matrix = coloring_matrix(p)
    rows, cols = len(matrix), len(p.generators)
    if rows == 0 and cols <= 1:
        return 1
    if rows != cols:
        raise ValueError(f"coloring matrix is {rows}x{cols}; need one row per generator")
    minor = [list(row[:-1]) for row in matrix[:-1]]
    return abs(_bareiss_det(minor))


@dataclass(frozen=True)
class ColoringReport:
    """Colorings of the generators modulo n satisfying every relation."""

    modulus: int
    count: int
    witness: Optional[dict[str, int]]  # a nonconstant coloring, if any exists

    @property
    def nonconstant_exists(self) -> bool:
        return self.witness is not None


def _diagonalize_columns(matrix: Sequence[Sequence[int]], cols: int
                         ) -> tuple[list[list[int]], list[list[int]]]:
    """Reduce to a diagonal form D = row_ops(M) . V, returning (D, V).

    Row operations are unimodular and discarded: they do not change the
    solution set of M x = 0.  Column operations are accumulated in V, so
    solutions of the original system are x = V y with D y diagonal.
    """
    m = [list(row) for row in matrix]
    rows = len(m)
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_cols(a: int, b: int) -> None:
        for row in m:
            row[a], row[b] = row[b], row[a]
        for row in v:
            row[a], row[b] = row[b], row[a]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in m:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    dim = min(rows, cols)
    for k in range(dim):
        while True:
            # bring a minimal nonzero entry of the trailing block to (k, k)
            pr = pc = -1
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    e = abs(m[i][j])
                    if e and (best is None or e < best):
                        best, pr, pc = e, i, j
            if best is None:
                return m, v
            if pr != k:
                m[k], m[pr] = m[pr], m[k]
            if pc != k:
                swap_cols(k, pc)
            pivot = m[k][k]
            clean = True
            for i in range(k + 1, rows):
                q = m[i][k] // pivot
                if q:
                    for j in range(k, cols):
                        m[i][j] -= q * m[k][j]
                if m[i][k]:
                    clean = False
            for j in range(k + 1, cols):
                q = m[k][j] // pivot
                if q:
                    add_col(j, k, -q)
                if m[k][j]:
                    clean = False
            if clean:
                break
    return m, v


def fox_colorings(source: Source, n: int) -> ColoringReport:
    """Count colorings modulo n and exhibit a nonconstant one if possible.

    The solution lattice of M x = 0 (mod n) is read off the diagonalization:
    diagonal entry d admits gcd(d, n) choices for its coordinate, and each
    free coordinate is generated by (n / gcd(d, n)) times the corresponding
    column of the accumulated transform.  A nonconstant coloring exists iff
    one of those generating columns is nonconstant modulo n.
    """
    if n < 2:
        raise ValueError("coloring modulus must be at least 2")
    p = _as_presentation(source)
    g = len(p.generators)
    matrix = coloring_matrix(p)
    if not matrix:
        # no relations: every coloring works
        count = n ** g
        witness = None
        if g >= 2:
            witness = {name: (1 if i == 0 else 0) for i, name in enumerate(p.generators)}
        return ColoringReport(modulus=n, count=count, witness=witness)
    d, v = _diagonalize_columns(matrix, g)
    count = 1
    witness = None
    for i in range(g):
        di = d[i][i] if i < len(d) else 0
        k = gcd(di, n)
        count *= k
        if witness is None and k > 1:
            step = n // k
            column = [(step * v[r][i]) % n for r in range(g)]
            if len(set(column)) > 1:
                witness = {name: column[r] for r, name in enumerate(p.generators)}
    return ColoringReport(modulus=n, count=count, witness=witness)


def dihedral_quandle(n: int) -> tuple[tuple[int, ...], ...]:
    """Operation table of reflections: i * j = (2j - i) mod n."""
    if n < 1:
        raise ValueError("dihedral table size must be positive")
    return tuple(tuple((2 * j - i) % n for j in range(n)) for i in range(n))


def smallest_prime_divisor(n: int) -> Optional[int]:
    if n < 2:
        return None
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def dihedral_countermodel(source: Source) -> Optional[FiniteQuandle]:
    """Assemble a countermodel from a coloring, without any search.

    Uses the smallest prime divisor p of the determinant (p = 2 when the
    determinant vanishes, since then colorings are plentiful modulo every
    prime).  Returns None when the determinant is 1: no dihedral quandle of
    any size can deny triviality then.
    """
    p = _as_presentation(source)
    det = determinant(p)
    if det == 1:
        return None
    prime = 2 if det == 0 else smallest_prime_divisor(det)
    report = fox_colorings(p, prime)
    if report.witness is None:
        return None
    model = FiniteQuandle(size=prime, table=dihedral_quandle(prime),
                          assignment=dict(report.witness))
    assert check_model(model, p), "dihedral construction produced an unsound model"
    return model
