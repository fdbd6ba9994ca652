"""Weighted directed multigraphs and their admissibility diagnostics.

Everything downstream is driven by a directed multigraph whose edges carry
positive integer degrees.  A graph is admissible when it is irreducible
(every ordered vertex pair is joined by a directed path) and satisfies the
No Levy Cycle condition: every simple cycle has degree product > 1 and
traverses at least one arc supported by two or more parallel edges.
Checking simple cycles suffices because an arbitrary cycle decomposes into
simple ones, degree products multiply, and a multi-edge arc of a constituent
is a multi-edge arc of the whole.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence


class GraphParseError(ValueError):
    """A graph file that cannot be read into a valid graph."""


class CycleCapExceeded(RuntimeError):
    """Simple-cycle enumeration grew past the configured cap."""


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    degree: int


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed multigraph on vertices 1..vertex_count with weighted edges.

    Parallel edges and self-loops are allowed; an edge's identity is its
    position in ``edges``.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be >= 1")
        for k, e in enumerate(self.edges):
            if not (1 <= e.src <= self.vertex_count):
                raise ValueError(f"edge {k}: source vertex {e.src} out of range")
            if not (1 <= e.dst <= self.vertex_count):
                raise ValueError(f"edge {k}: target vertex {e.dst} out of range")
            if e.degree < 1:
                raise ValueError(f"edge {k}: degree must be a positive integer")

    def out_edges(self, v: int) -> list[tuple[int, Edge]]:
        """Edges leaving v, as (edge index, edge) pairs in file order."""
        return [(k, e) for k, e in enumerate(self.edges) if e.src == v]

    def multiplicity(self, i: int, j: int) -> int:
        """Number of parallel edges from i to j."""
        return sum(1 for e in self.edges if e.src == i and e.dst == j)


def make_graph(vertex_count: int, edges: Sequence[tuple[int, int, int]]) -> WeightedDigraph:
    return WeightedDigraph(vertex_count, tuple(Edge(s, d, w) for s, d, w in edges))


def parse_graph(text: str) -> WeightedDigraph:
    """Parse the line-oriented graph format.

    Format: a ``vertices <n>`` line followed by ``edge <src> <dst> <degree>``
    lines; ``#`` starts a comment; tokens are whitespace separated.
    """
    vertex_count: Optional[int] = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "vertices":
            if vertex_count is not None:
                raise GraphParseError(f"line {lineno}: duplicate vertices line")
            if len(tokens) != 2:
                raise GraphParseError(f"line {lineno}: expected 'vertices <n>'")
            try:
                vertex_count = int(tokens[1])
            except ValueError:
                raise GraphParseError(f"line {lineno}: vertex count is not an integer") from None
            if vertex_count < 1:
                raise GraphParseError(f"line {lineno}: vertex count must be positive")
        elif tokens[0] == "edge":
            if vertex_count is None:
                raise GraphParseError(f"line {lineno}: edge before vertices line")
            if len(tokens) != 4:
                raise GraphParseError(f"line {lineno}: expected 'edge <src> <dst> <degree>'")
            try:
                src, dst, degree = (int(t) for t in tokens[1:])
            except ValueError:
                raise GraphParseError(f"line {lineno}: edge fields must be integers") from None
            if not (1 <= src <= vertex_count and 1 <= dst <= vertex_count):
                raise GraphParseError(f"line {lineno}: vertex index out of range")
            if degree < 1:
                raise GraphParseError(f"line {lineno}: degree must be a positive integer")
            edges.append(Edge(src, dst, degree))
        else:
            raise GraphParseError(f"line {lineno}: unknown directive {tokens[0]!r}")
    if vertex_count is None:
        raise GraphParseError("missing vertices line")
    return WeightedDigraph(vertex_count, tuple(edges))


def serialize_graph(g: WeightedDigraph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines += [f"edge {e.src} {e.dst} {e.degree}" for e in g.edges]
    return "\n".join(lines) + "\n"


def simple_cycles(g: WeightedDigraph, cap: int = 10**5) -> Iterator[tuple[int, ...]]:
    """Yield every simple cycle as a tuple of edge indices.

    A simple cycle visits pairwise distinct vertices (apart from closing up);
    parallel edges give distinct cycles.  Enumeration is DFS rooted at each
    vertex, restricted to vertices >= the root so each cycle appears once.
    Raises CycleCapExceeded beyond ``cap`` cycles.
    """
    adjacency: dict[int, list[tuple[int, Edge]]] = {v: g.out_edges(v) for v in range(1, g.vertex_count + 1)}
    count = 0
    for root in range(1, g.vertex_count + 1):
        # path_edges holds edge indices; on_path the vertices currently used
        stack: list[tuple[int, list[int], set[int]]] = [(root, [], {root})]
        while stack:
            v, path_edges, on_path = stack.pop()
            for k, e in adjacency[v]:
                if e.dst == root:
                    count += 1
                    if count > cap:
                        raise CycleCapExceeded(f"more than {cap} simple cycles")
                    yield tuple(path_edges + [k])
                elif e.dst > root and e.dst not in on_path:
                    stack.append((e.dst, path_edges + [k], on_path | {e.dst}))


@dataclass(frozen=True)
class GraphValidation:
    """Outcome of the admissibility checks; never raises, always reports."""

    irreducible: bool
    levy_witness: Optional[tuple[int, ...]]
    cycles_checked: int

    @property
    def ok(self) -> bool:
        return self.irreducible and self.levy_witness is None


def _reachable(g: WeightedDigraph, start: int) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for _, e in g.out_edges(v):
            if e.dst not in seen:
                seen.add(e.dst)
                frontier.append(e.dst)
    return seen


def validate_graph(g: WeightedDigraph, cycle_cap: int = 10**5) -> GraphValidation:
    """Check irreducibility and the No Levy Cycle condition.

    ``levy_witness`` is a simple cycle (edge indices) violating the
    condition, or None when every simple cycle passes.
    """
    irreducible = all(_reachable(g, v) == set(range(1, g.vertex_count + 1))
                      for v in range(1, g.vertex_count + 1))
    witness: Optional[tuple[int, ...]] = None
    checked = 0
    for cycle in simple_cycles(g, cap=cycle_cap):
        checked += 1
        product = 1
        for k in cycle:
            product *= g.edges[k].degree
        has_multi_arc = any(g.multiplicity(g.edges[k].src, g.edges[k].dst) >= 2 for k in cycle)
        if product <= 1 or not has_multi_arc:
            witness = cycle
            break
    return GraphValidation(irreducible=irreducible, levy_witness=witness, cycles_checked=checked)
