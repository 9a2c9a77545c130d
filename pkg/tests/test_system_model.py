from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.conftest import random_systems
from tools.errors import BasisElementError, GraphError, SystemParseError
from tools.graph_core import DiGraph, UGraph, circumjacent_closure_d, circumjacent_closure_u
from tools.lie_core import (
    AlgebraKind,
    BasisElement,
    BasisTag,
    GroupKind,
    LieVector,
    basis_vector,
    bracket,
    closure_dimension,
    lie_closure,
    membership,
)
from tools.randcheck import PRIMES
from tools.settings import REPO_ROOT
from tools.system_model import (
    EXAMPLE_NUMBERS,
    BilinearSystem,
    control_graph,
    crossing_witness,
    drift_graph,
    example_system,
    parse_system,
    phi,
    valid_decomposition,
)


def element(tag: str, i: int, j: int) -> BasisElement:
    return BasisElement(tag=BasisTag(tag), i=i, j=j)


# ---------------- System construction ----------------
def test_controls_are_deduplicated():
    so4 = AlgebraKind(kind=GroupKind.SO, n=4)
    sys = BilinearSystem(so4, None, [element("B", 1, 2), element("B", 3, 4), element("B", 1, 2)])
    assert sys.controls == (element("B", 1, 2), element("B", 3, 4))
    assert sys.drift.is_zero()


def test_illegal_controls_are_rejected():
    gl3 = AlgebraKind(kind=GroupKind.GL, n=3)
    with pytest.raises(BasisElementError):
        BilinearSystem(gl3, None, [element("C", 1, 2)])
    with pytest.raises(BasisElementError):
        BilinearSystem(AlgebraKind(kind=GroupKind.SL, n=3), None, [element("E", 2, 2)])
    with pytest.raises(BasisElementError):
        BilinearSystem(gl3, LieVector.zero(AlgebraKind(kind=GroupKind.GL, n=4)))


# ---------------- Interaction graphs ----------------
def test_drift_graph_examples():
    assert drift_graph(example_system(1)) == UGraph(6, [(1, 2), (1, 3), (1, 4)])
    assert drift_graph(BilinearSystem(AlgebraKind(kind=GroupKind.SO, n=3))) == UGraph(3)
    ex5 = drift_graph(example_system(5))
    assert ex5.arcs == {(1, 2), (1, 5), (3, 2), (5, 4), (1, 1), (2, 2)}
    # C terms of an sl drift only touch the diagonal
    assert drift_graph(example_system(3)).arcs == {(1, 2), (1, 5), (3, 2), (5, 4)}


def test_control_graph_examples():
    assert control_graph(example_system(3)) == DiGraph(5, [(1, 2), (2, 1), (5, 4), (4, 3), (3, 5)])
    assert control_graph(BilinearSystem(AlgebraKind(kind=GroupKind.GL, n=3))).arcs == frozenset()
    ex6 = control_graph(example_system(6))
    assert ex6.arcs == {(1, 2), (2, 1), (3, 4), (4, 3), (1, 1)}


def test_phi_examples():
    so6 = AlgebraKind(kind=GroupKind.SO, n=6)
    a_tilde = basis_vector(so6, "B", 1, 2) + basis_vector(so6, "B", 1, 4, -3)
    assert phi(a_tilde) == UGraph(6, [(1, 2), (1, 4)])
    assert phi(LieVector.zero(so6)) == UGraph(6)
    gl2 = AlgebraKind(kind=GroupKind.GL, n=2)
    assert phi(basis_vector(gl2, "E", 1, 1) + basis_vector(gl2, "E", 1, 2, 2)) == DiGraph(2, [(1, 2)])


# ---------------- Valid decomposition ----------------
def test_valid_decomposition_example_1():
    d = valid_decomposition(example_system(1))
    so6 = AlgebraKind(kind=GroupKind.SO, n=6)
    assert d.valid_edges == {(1, 2), (1, 4)}
    assert d.a_tilde == basis_vector(so6, "B", 1, 2) + basis_vector(so6, "B", 1, 4, -3)
    assert (1, 3) in d.closure_of_controls.edges


def test_valid_decomposition_example_3():
    d = valid_decomposition(example_system(3))
    sl5 = AlgebraKind(kind=GroupKind.SL, n=5)
    assert d.valid_edges == {(1, 5), (3, 2)}
    assert d.a_tilde == basis_vector(sl5, "E", 1, 5, 2) + basis_vector(sl5, "E", 3, 2)


def test_drift_inside_one_component_is_not_valid():
    sys = parse_system("group so 4\ndrift B 1 3 5\ncontrol B 1 2\ncontrol B 2 3\n")
    d = valid_decomposition(sys)
    assert d.valid_edges == frozenset()
    assert d.a_tilde.is_zero()


@settings(max_examples=300)
@given(st.sampled_from(["so", "sl", "gl"]).flatmap(random_systems))
def test_a_tilde_support_matches_valid_edges(sys):
    d = valid_decomposition(sys)
    assert set(d.a_tilde.support()) == set(d.valid_edges)


# ---------------- Bracket / graph correspondences ----------------
@settings(max_examples=500)
@given(random_systems("so", min_n=3))
def test_bracket_with_control_closure_rewires_valid_graph(sys):
    d = valid_decomposition(sys)
    g_valid = phi(d.a_tilde)
    for i, j in sorted(d.closure_of_controls.edges):
        b_ij = basis_vector(sys.algebra, "B", i, j)
        assert phi(bracket(d.a_tilde, b_ij)) == circumjacent_closure_u(g_valid, i, j)


@settings(max_examples=500)
@given(st.sampled_from(["sl", "gl"]).flatmap(lambda group: random_systems(group, min_n=3)))
def test_directed_bracket_with_control_closure_rewires_valid_graph(sys):
    d = valid_decomposition(sys)
    g_valid = phi(d.a_tilde)
    for i, j in sorted(d.closure_of_controls.arcs):
        e_ij = basis_vector(sys.algebra, "E", i, j)
        assert phi(bracket(d.a_tilde, e_ij)) == circumjacent_closure_d(g_valid, i, j)


@settings(max_examples=100)
@given(random_systems("so", min_n=3, max_n=5))
def test_a_tilde_generates_the_same_algebra(sys):
    a_tilde = valid_decomposition(sys).a_tilde
    controls = sys.control_vectors()
    assert closure_dimension([sys.drift] + controls, sys.algebra) == closure_dimension([a_tilde] + controls, sys.algebra)


@settings(max_examples=60)
@given(random_systems("sl", min_n=3, max_n=4))
def test_brackets_of_a_tilde_stay_in_the_system_algebra(sys):
    d = valid_decomposition(sys)
    full = lie_closure(sys.generators(), sys.algebra)
    for i, j in sorted(d.closure_of_controls.arcs):
        assert membership(bracket(d.a_tilde, basis_vector(sys.algebra, "E", i, j)), full)


# ---------------- Crossing witness ----------------
def test_crossing_witness_example_1():
    sys = example_system(1)
    w = crossing_witness(sys)
    (coord,) = w.support()
    assert (coord[0] % 2) != (coord[1] % 2)  # parts are odd / even nodes
    assert membership(w, lie_closure(sys.generators()))


@st.composite
def two_component_systems(draw):
    n = draw(st.integers(6, 7))
    nodes = draw(st.permutations(range(1, n + 1)))
    cut = draw(st.integers(3, n - 3))
    xs, ys = sorted(nodes[:cut]), sorted(nodes[cut:])
    so = AlgebraKind(kind=GroupKind.SO, n=n)
    controls = []
    for part in (xs, ys):
        # a path keeps each part connected
        controls += [element("B", min(a, b), max(a, b)) for a, b in zip(part, part[1:])]
    crossing = [(min(x, y), max(x, y)) for x in xs for y in ys]
    chosen = draw(st.lists(st.sampled_from(crossing), min_size=1, unique=True))
    coeffs = draw(st.lists(st.sampled_from(PRIMES), min_size=len(chosen), max_size=len(chosen)))
    drift = LieVector(so, dict(zip(chosen, coeffs)))
    return BilinearSystem(so, drift, controls), set(xs)


@settings(max_examples=200)
@given(two_component_systems())
def test_crossing_witness_is_a_single_crossing_element(case):
    sys, xs = case
    w = crossing_witness(sys)
    assert len(w.support()) == 1
    (i, j), = w.support()
    assert (i in xs) != (j in xs)


def test_crossing_witness_needs_two_components():
    with pytest.raises(GraphError):
        crossing_witness(example_system(2))
    with pytest.raises(GraphError):
        crossing_witness(example_system(3))


# ---------------- Parser ----------------
EX1_TEXT = """\
# Example 1
group so 6
drift B 1 2 1
drift B 1 3 2
drift B 1 4 -3   # trailing comment
control B 1 3
control B 2 4
control B 3 5
control B 4 6
"""


def test_parse_example_1():
    sys = parse_system(EX1_TEXT)
    assert sys == example_system(1)
    assert str(sys.drift) == "B_12 + 2 B_13 - 3 B_14"
    assert [str(c) for c in sys.controls] == ["B_13", "B_24", "B_35", "B_46"]


def test_parse_empty_system():
    sys = parse_system("group gl 2\n")
    assert sys.drift.is_zero() and sys.controls == ()
    assert sys.algebra == AlgebraKind(kind=GroupKind.GL, n=2)


def test_parse_rationals_and_accumulation():
    sys = parse_system("group so 3\ndrift B 1 2 3/4\ndrift B 1 2 -1/4\ndrift B 2 3 -2\n")
    assert sys.drift.coeffs == {(1, 2): Fraction(1, 2), (2, 3): Fraction(-2)}


@pytest.mark.parametrize(
    "text, line",
    [
        ("group sl 3\ncontrol E 1 1\n", 2),
        ("group so 3\ndrift B 2 1 1\n", 2),
        ("group so 3\ndrift B 1 2 0\n", 2),
        ("group so 3\n\ndrift B 1 2 1.5\n", 3),
        ("group so 3\ndrift B 1 2 1/0\n", 2),
        ("group so 3\ncontrol B 1 4\n", 2),
        ("group so 3\ncontrol E 1 2\n", 2),
        ("group gl 3\ncontrol C 1 2\n", 2),
        ("group sl 3\ndrift E 1 1 2\n", 2),
        ("group so 3\nwiggle B 1 2\n", 2),
        ("group so 3\ncontrol B 1\n", 2),
        ("group so 3\ncontrol X 1 2\n", 2),
        ("drift B 1 2 1\n", 1),
        ("# nothing\n", 1),
        ("group so 3\ngroup so 4\n", 2),
        ("group xy 3\n", 1),
        ("group so 1\n", 1),
        ("group so 3\ncontrol B 0 2\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(SystemParseError) as info:
        parse_system(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_parse_reads_streams(tmp_path):
    path = tmp_path / "ex.sys"
    path.write_text(EX1_TEXT, encoding="utf-8")
    with open(path, encoding="utf-8") as f:
        assert parse_system(f) == example_system(1)


def test_parse_reads_bytes():
    assert parse_system(EX1_TEXT.encode("utf-8")) == example_system(1)
    assert parse_system("group so 3\n# r\u00e9sum\u00e9\ncontrol B 1 2\n".encode("utf-8")).controls[0].i == 1


@pytest.mark.parametrize(
    "data, line",
    [
        (b"group so 3\ncontrol B 1 2 # \xff\xfe\n", 2),
        (b"\xe9 group so 3\n", 1),
        (b"group so 3\r\n\r\ncontrol B 1 3\r\n\x80\n", 4),
    ],
)
def test_parse_rejects_bad_encoding_on_its_line(data, line):
    with pytest.raises(SystemParseError) as info:
        parse_system(data)
    assert info.value.line == line
    assert "UTF-8" in info.value.message


@pytest.mark.parametrize("k", EXAMPLE_NUMBERS)
def test_shipped_files_match_bundled_systems(k):
    with open(REPO_ROOT / "data" / "systems" / f"ex{k}.sys", encoding="utf-8") as f:
        assert parse_system(f) == example_system(k)


def test_unknown_example_number():
    with pytest.raises(KeyError):
        example_system(9)

