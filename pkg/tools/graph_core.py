"""
graph_core.py
-------------
Interaction graphs on the node set {1..n}:
  - UGraph: undirected, no self-loops
  - DiGraph: directed, self-loops only if allow_self_loops

Connectivity questions go to networkx. The two closure operators
(transitive step M and circumjacent closure H) are written out here because
they are the objects the criteria reason about.

Partitions are always returned as a list of frozensets sorted by smallest
node, so output is reproducible.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Union

import networkx as nx

from tools.errors import GraphError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]
Partition = list[frozenset[int]]


# ---------------- Graph values ----------------
@dataclass(frozen=True)
class UGraph:
    """Undirected graph; edges are stored as (small, large) pairs."""

    n: int
    edges: frozenset[Edge]

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 1:
            raise GraphError(f"node count must be >= 1, got {n}")
        clean = set()
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge {{{i},{j}}} outside nodes 1..{n}")
            if i == j:
                raise GraphError(f"self-loop {{{i},{i}}} in an undirected graph")
            clean.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(clean))

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> set[int]:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class DiGraph:
    """Directed graph; (i, i) arcs are allowed only when allow_self_loops is set."""

    n: int
    arcs: frozenset[Edge]
    allow_self_loops: bool = False

    def __init__(self, n: int, arcs: Iterable[Edge] = (), allow_self_loops: bool = False):
        if n < 1:
            raise GraphError(f"node count must be >= 1, got {n}")
        clean = set()
        for i, j in arcs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"arc ({i},{j}) outside nodes 1..{n}")
            if i == j and not allow_self_loops:
                raise GraphError(f"self-loop ({i},{i}) in a digraph without self-loops")
            clean.add((i, j))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", frozenset(clean))
        object.__setattr__(self, "allow_self_loops", allow_self_loops)

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def self_loops(self) -> list[int]:
        return sorted(i for i, j in self.arcs if i == j)

    def is_simple(self) -> bool:
        return not self.self_loops()

    def in_degree(self, v: int) -> int:
        return sum(1 for i, j in self.arcs if j == v and i != v)

    def out_degree(self, v: int) -> int:
        return sum(1 for i, j in self.arcs if i == v and j != v)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.arcs)
        return g


AnyGraph = Union[UGraph, DiGraph]


def strip_self_loops(g: DiGraph) -> DiGraph:
    """The simple digraph corresponding to g."""
    return DiGraph(g.n, [(i, j) for i, j in g.arcs if i != j])


def _require_simple(g: DiGraph, what: str) -> None:
    if not g.is_simple():
        raise GraphError(f"{what} needs a simple digraph; strip self-loops {g.self_loops()} first")


def _sorted_partition(parts: Iterable[Iterable[int]]) -> Partition:
    return sorted((frozenset(p) for p in parts), key=min)


# ---------------- Connectivity ----------------
def connected(g: UGraph) -> bool:
    return nx.is_connected(g.to_networkx())


def components(g: UGraph) -> Partition:
    """Connected components; isolated nodes are singletons."""
    return _sorted_partition(nx.connected_components(g.to_networkx()))


def strongly_connected(g: DiGraph) -> bool:
    # self-loops never change reachability
    return nx.is_strongly_connected(g.to_networkx())


def strong_components(g: DiGraph) -> Partition:
    return _sorted_partition(nx.strongly_connected_components(g.to_networkx()))


def weak_components(g: DiGraph) -> Partition:
    return _sorted_partition(nx.weakly_connected_components(g.to_networkx()))


def induced_strongly_connected(g: DiGraph, part: Iterable[int]) -> bool:
    """Is the subgraph induced by `part` strongly connected?"""
    return nx.is_strongly_connected(g.to_networkx().subgraph(part))


def is_complete(g: UGraph) -> bool:
    return len(g.edges) == g.n * (g.n - 1) // 2


def is_simple_complete(g: DiGraph) -> bool:
    return g.is_simple() and len(g.arcs) == g.n * (g.n - 1)


# ---------------- Transitive closure ----------------
def transitive_closure_step(g: UGraph) -> UGraph:
    """One application of M: join the ends of every length-2 path."""
    added = set()
    for v in g.nodes:
        around = sorted(g.neighbors(v))
        for a in range(len(around)):
            for b in range(a + 1, len(around)):
                added.add((around[a], around[b]))
    return UGraph(g.n, g.edges | added)


def _sweep_limit(g: AnyGraph) -> int:
    # path lengths at least halve per sweep, so n sweeps always settle
    return g.n + 1


def transitive_closure_fix(g: UGraph) -> UGraph:
    """Iterate M to its fixpoint: every component becomes a clique."""
    current = g
    for sweep in range(_sweep_limit(g) + 1):
        nxt = transitive_closure_step(current)
        if nxt == current:
            logger.debug("undirected closure settled after %d sweep(s)", sweep)
            return current
        current = nxt
    raise GraphError(f"transitive closure did not settle within {_sweep_limit(g)} sweeps")


def simple_transitive_closure_step(g: DiGraph) -> DiGraph:
    """One application of the directed M: add (i, k) for every i -> j -> k with i != k."""
    _require_simple(g, "simple transitive closure")
    out_of: dict[int, set[int]] = {}
    for i, j in g.arcs:
        out_of.setdefault(i, set()).add(j)
    added = {(i, k) for i, j in g.arcs for k in out_of.get(j, ()) if i != k}
    return DiGraph(g.n, g.arcs | added)


def simple_transitive_closure_fix(g: DiGraph) -> DiGraph:
    """Fixpoint of the directed M; nontrivial strong components become simple-complete blocks."""
    _require_simple(g, "simple transitive closure")
    current = g
    for sweep in range(_sweep_limit(g) + 1):
        nxt = simple_transitive_closure_step(current)
        if nxt == current:
            logger.debug("directed closure settled after %d sweep(s)", sweep)
            return current
        current = nxt
    raise GraphError(f"directed transitive closure did not settle within {_sweep_limit(g)} sweeps")


# ---------------- Circumjacent closure ----------------
def circumjacent_closure_u(g: UGraph, i: int, j: int) -> UGraph:
    """
    H_ij: i takes over j's neighbours and j takes over i's.
    Edges that would become {v, v} vanish.
    """
    if i == j:
        raise GraphError("circumjacent closure needs two distinct nodes")
    new = set()
    for a, b in g.edges:
        for src, dst in ((j, i), (i, j)):
            # edge {src, k} becomes {dst, k}
            if src in (a, b):
                k = b if a == src else a
                if k != dst:
                    new.add((min(dst, k), max(dst, k)))
    return UGraph(g.n, new)


def circumjacent_closure_d(g: DiGraph, i: int, j: int) -> DiGraph:
    """H_<i,j>: arcs (i, k) for every (j, k), plus arcs (k, j) for every (k, i); k != i, j respectively."""
    if i == j:
        raise GraphError("circumjacent closure needs two distinct nodes")
    _require_simple(g, "circumjacent closure")
    new = set()
    for a, b in g.arcs:
        if a == j and b != i:
            new.add((i, b))
        if b == i and a != j:
            new.add((a, j))
    return DiGraph(g.n, new)


def apply_circumjacent_sequence(g: UGraph, pairs: Iterable[tuple[int, int]]) -> UGraph:
    for i, j in pairs:
        g = circumjacent_closure_u(g, i, j)
    return g


def bigraph_reduction(g: UGraph, part_x: Iterable[int], part_y: Iterable[int]) -> list[tuple[int, int]]:
    """
    Node pairs (each inside one part) whose circumjacent closures, applied in
    order, leave exactly one edge between the parts.

    Needs a bi-graph with both parts of size >= 3 and at least one edge.
    With no zero-degree node, one swap inside a part creates one; then a
    zero-degree node z takes over a loaded neighbour w of its own part, and at
    most two more swaps on the far side trim z's star down to a single edge.
    Ties go to the smallest node index.
    """
    xs, ys = frozenset(part_x), frozenset(part_y)
    if xs & ys or xs | ys != frozenset(g.nodes):
        raise GraphError("parts must split the node set")
    if len(xs) < 3 or len(ys) < 3:
        raise GraphError("both parts need at least three nodes")
    if not g.edges:
        raise GraphError("bi-graph reduction needs at least one edge")
    for a, b in g.edges:
        if (a in xs) == (b in xs):
            raise GraphError(f"edge {{{a},{b}}} does not cross the parts")

    pairs: list[tuple[int, int]] = []
    current = g

    def apply(i: int, j: int) -> None:
        nonlocal current
        pairs.append((i, j))
        current = circumjacent_closure_u(current, i, j)

    if len(current.edges) == 1:
        return pairs

    zero = [v for v in current.nodes if current.degree(v) == 0]
    if not zero:
        # every node is loaded: swap the two smallest nodes of the first part
        x1, x2 = sorted(xs)[:2]
        apply(x1, x2)
        zero = [v for v in current.nodes if current.degree(v) == 0]

    z = zero[0]
    own = xs if z in xs else ys
    far = ys if z in xs else xs
    w = min(v for v in own if current.degree(v) > 0)
    apply(z, w)
    if len(current.edges) == 1:
        return pairs

    y1, y2 = sorted(current.neighbors(z))[:2]
    apply(y1, y2)
    y3 = min(v for v in far if v not in (y1, y2))
    apply(y2, y3)
    return pairs


# ---------------- Union ----------------
def union_graph(a: AnyGraph, b: AnyGraph) -> AnyGraph:
    if type(a) is not type(b):
        raise GraphError("cannot unite an undirected graph with a digraph")
    if a.n != b.n:
        raise GraphError(f"node counts differ: {a.n} vs {b.n}")
    if isinstance(a, UGraph):
        return UGraph(a.n, a.edges | b.edges)
    return DiGraph(a.n, a.arcs | b.arcs, allow_self_loops=a.allow_self_loops or b.allow_self_loops)


# ---------------- DOT export ----------------
def to_dot(g: AnyGraph, name: str = "G") -> str:
    """Graphviz text with nodes and edges in ascending order."""
    directed = isinstance(g, DiGraph)
    header, link = ("digraph", "->") if directed else ("graph", "--")
    lines = [f"{header} {name} {{"]
    lines += [f"  {v};" for v in g.nodes]
    links = sorted(g.arcs if directed else g.edges)
    lines += [f"  {i} {link} {j};" for i, j in links]
    lines.append("}")
    return "\n".join(lines) + "\n"
