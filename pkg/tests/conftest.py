"""Shared fixtures, dense-matrix helpers and hypothesis strategies."""

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tools.graph_core import DiGraph, UGraph
from tools.lie_core import AlgebraKind, GroupKind, LieVector
from tools.randcheck import control_pool, random_system
from tools.system_model import BilinearSystem

settings.register_profile(
    "graphlarc",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("graphlarc")


# ---------------- Dense oracles ----------------
def to_sympy(v: LieVector) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in v.to_matrix()])


def from_sympy(algebra: AlgebraKind, m: sympy.Matrix) -> LieVector:
    rows = [[Fraction(str(m[i, j])) for j in range(m.cols)] for i in range(m.rows)]
    return LieVector.from_matrix(algebra, rows)


def dense_commutator(x: LieVector, y: LieVector) -> LieVector:
    """xy - yx on plain Fraction rows; fast enough for exhaustive grids."""
    a, b = x.to_matrix(), y.to_matrix()
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = sum(a[i][k] * b[k][j] - b[i][k] * a[k][j] for k in range(n))
    return LieVector.from_matrix(x.algebra, out)



def dense_closure_dimension(generators: list[LieVector]) -> int:
    """Dimension of the generated algebra, from sympy matrices and ranks only."""
    basis: list[sympy.Matrix] = []

    def grows(m: sympy.Matrix) -> bool:
        rows = [list(b) for b in basis] + [list(m)]
        if sympy.Matrix(rows).rank() > len(basis):
            basis.append(m)
            return True
        return False

    frontier = [m for m in map(to_sympy, generators) if grows(m)]
    while frontier:
        new = []
        for x in frontier:
            for y in list(basis):
                c = x * y - y * x
                if grows(c):
                    new.append(c)
        frontier = new
    return len(basis)

# ---------------- Strategies ----------------
KINDS = list(GroupKind)


@st.composite
def algebras(draw, min_n: int = 2, max_n: int = 5, kinds=None):
    kind = draw(st.sampled_from(kinds or KINDS))
    return AlgebraKind(kind=kind, n=draw(st.integers(min_n, max_n)))


@st.composite
def lie_vectors(draw, algebra: AlgebraKind, max_terms: int = 5):
    basis = algebra.canonical_basis()
    terms = draw(
        st.lists(
            st.tuples(
                st.integers(0, len(basis) - 1),
                st.fractions(min_value=-3, max_value=3, max_denominator=3),
            ),
            max_size=max_terms,
        )
    )
    total = LieVector.zero(algebra)
    for index, coeff in terms:
        total = total + basis[index] * coeff
    return total


@st.composite
def ugraphs(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    return UGraph(n, draw(st.sets(st.sampled_from(pairs))))


@st.composite
def simple_digraphs(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    arcs = list(itertools.permutations(range(1, n + 1), 2))
    return DiGraph(n, draw(st.sets(st.sampled_from(arcs))))


@st.composite
def random_systems(draw, group: str, min_n: int = 2, max_n: int = 6):
    """Systems from the randcheck generator, seeded by hypothesis."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_system(group, n, random.Random(seed))


@st.composite
def rational_systems(draw, max_n: int = 4):
    """Arbitrary rational drifts over the canonical basis, random legal controls."""
    algebra = draw(algebras(max_n=max_n))
    drift = draw(lie_vectors(algebra, max_terms=6))
    pool = control_pool(algebra)
    controls = draw(st.lists(st.sampled_from(pool), max_size=algebra.n + 2))
    return BilinearSystem(algebra, drift, controls)


# ---------------- Fixtures ----------------
@pytest.fixture
def so6() -> AlgebraKind:
    return AlgebraKind(kind=GroupKind.SO, n=6)


@pytest.fixture
def gl2() -> AlgebraKind:
    return AlgebraKind(kind=GroupKind.GL, n=2)


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path, monkeypatch):
    """Keep logs and saved reports out of the repository."""
    monkeypatch.setenv("GRAPHLARC_LOG_DIR", str(tmp_path / "logs"))
