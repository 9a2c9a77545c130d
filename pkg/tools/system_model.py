"""
system_model.py
---------------
The bilinear system  X' = A X + (sum_k u_k B_k) X  as data:
  - BilinearSystem: algebra, drift A, controlled basis elements
  - drift_graph / control_graph: the interaction graphs read off A and the B_k
  - valid_decomposition: the drift edges outside the clique closure of the
    control graph (E_valid), and the drift restricted to them (A~)
  - parse_system: the line-oriented .sys file format

File format (one statement per line, '#' starts a comment):
    group so 6
    drift B 1 2 1
    drift B 1 4 -3/2
    control B 1 3
"""

import io
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, TextIO, Union

from pydantic import ValidationError

from tools.errors import BasisElementError, GraphError, SystemParseError
from tools.graph_core import (
    DiGraph,
    UGraph,
    bigraph_reduction,
    components,
    simple_transitive_closure_fix,
    strip_self_loops,
    transitive_closure_fix,
)
from tools.lie_core import (
    AlgebraKind,
    BasisElement,
    BasisTag,
    GroupKind,
    LieVector,
    bracket,
)

logger = logging.getLogger(__name__)

InteractionGraph = Union[UGraph, DiGraph]


# ---------------- System ----------------
@dataclass(frozen=True)
class BilinearSystem:
    algebra: AlgebraKind
    drift: LieVector
    controls: tuple[BasisElement, ...]

    def __init__(self, algebra: AlgebraKind, drift: Optional[LieVector] = None, controls: Iterable[BasisElement] = ()):
        drift = drift if drift is not None else LieVector.zero(algebra)
        if drift.algebra != algebra:
            raise BasisElementError(f"drift lives in {drift.algebra}, system is {algebra}")
        unique: list[BasisElement] = []
        for element in controls:
            _check_control(element, algebra)
            if element not in unique:
                unique.append(element)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "controls", tuple(unique))

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def kind(self) -> GroupKind:
        return self.algebra.kind

    def control_vectors(self) -> list[LieVector]:
        return [c.to_vector(self.algebra) for c in self.controls]

    def generators(self) -> list[LieVector]:
        """Drift first, then the controls: the input to the rank condition."""
        return [self.drift] + self.control_vectors()


def _check_control(element: BasisElement, algebra: AlgebraKind) -> None:
    element.check_legal(algebra)
    # on top of the algebra rules: gl controls are unit matrices only
    if algebra.kind is GroupKind.GL and element.tag is not BasisTag.E:
        raise BasisElementError(f"{element}: gl controls must be E elements")


# ---------------- Interaction graphs ----------------
def phi(v: LieVector) -> InteractionGraph:
    """Support graph of v over the off-diagonal coordinates (an undirected graph in so)."""
    if v.algebra.kind is GroupKind.SO:
        return UGraph(v.algebra.n, v.support())
    return DiGraph(v.algebra.n, v.off_diagonal_support())


def drift_graph(sys: BilinearSystem) -> InteractionGraph:
    if sys.kind is GroupKind.GL:
        # diagonal entries of A become self-loops
        return DiGraph(sys.n, sys.drift.support(), allow_self_loops=True)
    return phi(sys.drift)


def control_graph(sys: BilinearSystem) -> InteractionGraph:
    if sys.kind is GroupKind.SO:
        return UGraph(sys.n, [(c.i, c.j) for c in sys.controls])
    # C controls only touch the diagonal and add no arcs
    arcs = [(c.i, c.j) for c in sys.controls if c.tag is BasisTag.E]
    return DiGraph(sys.n, arcs, allow_self_loops=sys.kind is GroupKind.GL)


# ---------------- Valid decomposition ----------------
@dataclass(frozen=True)
class ValidDecomposition:
    closure_of_controls: InteractionGraph
    valid_edges: frozenset[tuple[int, int]]
    a_tilde: LieVector


def control_closure(sys: BilinearSystem) -> InteractionGraph:
    """Clique closure of the control graph (self-loops dropped first in gl)."""
    g = control_graph(sys)
    if isinstance(g, UGraph):
        return transitive_closure_fix(g)
    return simple_transitive_closure_fix(strip_self_loops(g))


def valid_decomposition(sys: BilinearSystem) -> ValidDecomposition:
    closure = control_closure(sys)
    inside = closure.edges if isinstance(closure, UGraph) else closure.arcs
    drift_links = phi(sys.drift)
    drift_set = drift_links.edges if isinstance(drift_links, UGraph) else drift_links.arcs
    valid = frozenset(drift_set - inside)
    return ValidDecomposition(
        closure_of_controls=closure,
        valid_edges=valid,
        a_tilde=sys.drift.restrict(valid),
    )


def crossing_witness(sys: BilinearSystem) -> LieVector:
    """
    Nested brackets of A~ with control-closure elements that end on a single
    crossing coordinate: [..[[A~, B_p1], B_p2].., B_pr] = c * B_xy, c != 0.

    so only. The control graph must split into exactly two components with at
    least three nodes each, and A~ must be nonzero.
    """
    if sys.kind is not GroupKind.SO:
        raise GraphError(f"crossing witness is defined for so systems, got {sys.algebra}")
    parts = components(control_graph(sys))
    if len(parts) != 2:
        raise GraphError(f"control graph needs exactly two components, has {len(parts)}")
    decomposition = valid_decomposition(sys)
    if decomposition.a_tilde.is_zero():
        raise GraphError("no drift edge crosses the control components")
    g_valid = UGraph(sys.n, decomposition.valid_edges)
    pairs = bigraph_reduction(g_valid, parts[0], parts[1])

    current = decomposition.a_tilde
    for i, j in pairs:
        b = BasisElement(tag=BasisTag.B, i=min(i, j), j=max(i, j)).to_vector(sys.algebra)
        current = bracket(current, b)
    logger.debug("crossing witness after %d bracket(s): %s", len(pairs), current)
    return current


# ---------------- Parser ----------------
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _parse_rational(token: str, line: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise SystemParseError(line, f"bad coefficient {token!r} (expected p, -p or p/q)")
    if "/" in token and int(token.split("/")[1]) == 0:
        raise SystemParseError(line, f"zero denominator in {token!r}")
    return Fraction(token)


def _parse_int(token: str, line: int, what: str) -> int:
    if not re.match(r"^\d+$", token):
        raise SystemParseError(line, f"{what} must be a positive integer, got {token!r}")
    return int(token)


def _parse_element(tag: str, i: str, j: str, line: int) -> BasisElement:
    if tag not in ("B", "E", "C"):
        raise SystemParseError(line, f"unknown basis tag {tag!r} (expected B, E or C)")
    try:
        return BasisElement(tag=BasisTag(tag), i=_parse_int(i, line, "index"), j=_parse_int(j, line, "index"))
    except ValidationError as e:
        # keep only pydantic's human message
        raise SystemParseError(line, e.errors()[0]["msg"]) from e


def _decode_lines(data: bytes) -> list[str]:
    """Split raw file contents into text lines, naming the first line that is not UTF-8."""
    lines = []
    for number, raw in enumerate(data.splitlines(keepends=True), start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise SystemParseError(number, f"not valid UTF-8 (byte 0x{raw[e.start]:02x} at column {e.start + 1})") from e
    return lines


def parse_system(source: Union[str, bytes, TextIO]) -> BilinearSystem:
    """
    Read a system from text, raw bytes or an open text stream.
    Any problem raises SystemParseError carrying the 1-based line number.
    Files should be read as bytes so a bad encoding is reported on its line.
    """
    if isinstance(source, bytes):
        stream = _decode_lines(source)
    elif isinstance(source, str):
        stream = io.StringIO(source)
    else:
        stream = source
    algebra: Optional[AlgebraKind] = None
    drift_terms: list[tuple[BasisElement, Fraction, int]] = []
    controls: list[tuple[BasisElement, int]] = []
    last_line = 0

    for number, raw in enumerate(stream, start=1):
        last_line = number
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        words = text.split()
        keyword = words[0]

        if keyword == "group":
            if algebra is not None:
                raise SystemParseError(number, "duplicate 'group' line")
            if len(words) != 3 or words[1] not in ("so", "sl", "gl"):
                raise SystemParseError(number, "expected 'group <so|sl|gl> <n>'")
            size = _parse_int(words[2], number, "n")
            if size < 2:
                raise SystemParseError(number, f"n must be >= 2, got {size}")
            algebra = AlgebraKind(kind=GroupKind(words[1]), n=size)
            continue

        if algebra is None:
            raise SystemParseError(number, "the first statement must be 'group <so|sl|gl> <n>'")

        if keyword == "drift":
            if len(words) != 5:
                raise SystemParseError(number, "expected 'drift <B|E|C> <i> <j> <coeff>'")
            element = _parse_element(words[1], words[2], words[3], number)
            coeff = _parse_rational(words[4], number)
            if coeff == 0:
                raise SystemParseError(number, "drift coefficient must be nonzero")
            drift_terms.append((element, coeff, number))
        elif keyword == "control":
            if len(words) != 4:
                raise SystemParseError(number, "expected 'control <B|E|C> <i> <j>'")
            controls.append((_parse_element(words[1], words[2], words[3], number), number))
        else:
            raise SystemParseError(number, f"unknown statement {keyword!r}")

    if algebra is None:
        raise SystemParseError(max(last_line, 1), "missing 'group <so|sl|gl> <n>' line")

    total = LieVector.zero(algebra)
    for element, coeff, number in drift_terms:
        try:
            total = total + element.to_vector(algebra, coeff)
        except BasisElementError as e:
            raise SystemParseError(number, str(e)) from e
    for element, number in controls:
        try:
            _check_control(element, algebra)
        except BasisElementError as e:
            raise SystemParseError(number, str(e)) from e

    logger.debug("parsed %s system: %d drift term(s), %d control(s)", algebra, len(drift_terms), len(controls))
    return BilinearSystem(algebra, total, [element for element, _ in controls])


# ---------------- Bundled systems ----------------
_EXAMPLE_SOURCES = {
    1: "group so 6\n"
       "drift B 1 2 1\ndrift B 1 3 2\ndrift B 1 4 -3\n"
       "control B 1 3\ncontrol B 2 4\ncontrol B 3 5\ncontrol B 4 6\n",
    2: "group so 6\n"
       "drift B 1 2 1\ndrift B 2 3 1\ndrift B 2 4 1\ndrift B 5 6 1\n"
       "control B 1 3\ncontrol B 2 4\ncontrol B 4 6\n",
    3: "group sl 5\n"
       "drift E 1 2 1\ndrift E 1 5 2\ndrift E 3 2 1\ndrift E 5 4 -3\ndrift C 3 5 2\n"
       "control E 1 2\ncontrol E 2 1\ncontrol E 5 4\ncontrol E 4 3\ncontrol E 3 5\ncontrol C 4 5\n",
    4: "group sl 4\n"
       "drift E 2 3 1\ndrift E 4 1 1\n"
       "control E 1 2\ncontrol E 2 1\ncontrol E 3 4\ncontrol E 4 3\n",
    5: "group gl 5\n"
       "drift E 1 2 1\ndrift E 1 5 2\ndrift E 3 2 1\ndrift E 5 4 -3\ndrift E 1 1 4\ndrift E 2 2 -1\n"
       "control E 1 2\ncontrol E 2 1\ncontrol E 5 4\ncontrol E 4 3\ncontrol E 3 5\n",
    6: "group gl 4\n"
       "drift E 2 3 2\ndrift E 4 1 -3\n"
       "control E 1 2\ncontrol E 2 1\ncontrol E 3 4\ncontrol E 4 3\ncontrol E 1 1\n",
    7: "group gl 4\n"
       "drift E 2 3 1\ndrift E 4 1 1\ndrift E 1 1 1\ndrift E 3 3 1\n"
       "control E 1 2\ncontrol E 2 1\ncontrol E 3 4\ncontrol E 4 3\n",
    8: "group so 4\n"
       "drift B 1 3 1\ndrift B 2 4 1\n"
       "control B 1 2\ncontrol B 3 4\n",
}

EXAMPLE_NUMBERS = tuple(sorted(_EXAMPLE_SOURCES))


def example_system(k: int) -> BilinearSystem:
    """The k-th bundled system (1..8), the same ones shipped as data/systems/ex<k>.sys."""
    if k not in _EXAMPLE_SOURCES:
        raise KeyError(f"no bundled example {k}; choose from {list(EXAMPLE_NUMBERS)}")
    return parse_system(_EXAMPLE_SOURCES[k])
