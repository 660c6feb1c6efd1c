"""Shared fixtures: the frozen diagram table and small oracle helpers."""

import itertools
from pathlib import Path

import pytest

from unknot.diagrams import KnotDiagram, parse_pd, parse_relations
from unknot.presentation import Presentation, presentation_from_relations, presentation_of

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

TREFOIL_PD = "PD[X(1,4,2,5),X(5,2,6,3),X(3,6,4,1)]"

# two-crossing unknot removable by one RM2_down; generators a1, a2
BIGON_PD = "PD[X(1,1,2,4),X(2,3,3,4)]"

# one-crossing kink and its two-kink stack
KINK_PD = "PD[X(1,2,2,1)]"
DOUBLE_KINK_PD = "PD[X(1,3,2,2),X(3,1,4,4)]"

# kink with a strand poked under it: the three-crossing unknot used for the
# slide move tests (admits RM3 at crossings 1,2,3)
POKED_KINK_PD = "PD[X(1,5,2,4),X(5,3,6,2),X(6,3,1,4)]"


def load_knot_table() -> dict[str, KnotDiagram]:
    table = {}
    for line in (DATA / "knot_table.txt").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        name, pd = line.split(None, 1)
        table[name] = parse_pd(pd.strip())
    return table


def load_expected_sizes() -> dict[str, tuple[int, int, str]]:
    rows = {}
    for line in (DATA / "expected_sizes.tsv").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        name, det, size, status = line.split("\t")
        rows[name] = (int(det), int(size), status)
    return rows


@pytest.fixture(scope="session")
def knot_table() -> dict[str, KnotDiagram]:
    return load_knot_table()


@pytest.fixture(scope="session")
def expected_sizes() -> dict[str, tuple[int, int, str]]:
    return load_expected_sizes()


@pytest.fixture(scope="session")
def culprit_text() -> str:
    return (DATA / "culprit_unknot.txt").read_text()


@pytest.fixture(scope="session")
def culprit(culprit_text: str) -> Presentation:
    return presentation_from_relations(parse_relations(culprit_text))


@pytest.fixture(scope="session")
def trefoil() -> KnotDiagram:
    return parse_pd(TREFOIL_PD)


@pytest.fixture(scope="session")
def trefoil_presentation(trefoil: KnotDiagram) -> Presentation:
    return presentation_of(trefoil)


def axiom_holds(table, axiom: int) -> bool:
    n = len(table)
    rng = range(n)
    if axiom == 1:
        return all(table[i][i] == i for i in rng)
    if axiom == 2:
        return all(table[table[i][j]][j] == i for i in rng for j in rng)
    if axiom == 3:
        return all(table[table[i][j]][k] == table[table[i][k]][table[j][k]]
                   for i in rng for j in rng for k in rng)
    raise ValueError(axiom)


def brute_force_model_exists(p: Presentation, axioms: tuple[int, ...],
                             n: int) -> bool:
    """Every n^(n^2) table crossed with every assignment; no pruning at all.

    Only usable for n <= 3 and a handful of generators, which is the whole
    point: an oracle with no shared code paths with the searcher.
    """
    gens = p.generators
    for cells in itertools.product(range(n), repeat=n * n):
        table = tuple(tuple(cells[i * n:(i + 1) * n]) for i in range(n))
        if not all(axiom_holds(table, a) for a in axioms):
            continue
        for values in itertools.product(range(n), repeat=len(gens)):
            if len(set(values)) == 1:
                continue
            v = dict(zip(gens, values))
            if all(table[v[a]][v[b]] == v[c] for a, b, c in p.relations):
                return True
    return False
