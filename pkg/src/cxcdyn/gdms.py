"""Graph-directed interval systems: embedded intervals, the expanding map,
cylinder covers of the Cantor repellor, and the plain/snowflaked metrics.

Construction: a strictly contracted Perron vector w supplies base interval
lengths; each edge e from i to j gets a subinterval of I_i of length
w_j * d(e)^(-1/alpha), and the expanding map sends that subinterval onto I_j
affinely with ratio d(e)^(1/alpha).  Subintervals are laid out left to right
in edge order with equal gaps, which is one of many embeddings satisfying
the required disjointness; the dynamics does not depend on the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dimension import perron_vector
from .graphs import WeightedDigraph


@dataclass(frozen=True)
class BaseInterval:
    vertex: int
    left: float
    length: float

    @property
    def right(self) -> float:
        return self.left + self.length


@dataclass(frozen=True)
class Branch:
    """One subinterval J together with the affine branch data over it."""

    edge_index: int
    src: int
    dst: int
    degree: int
    left: float
    length: float
    orientation: int  # +1 preserving, -1 reversing

    @property
    def right(self) -> float:
        return self.left + self.length


@dataclass(frozen=True)
class GDMSPoint:
    component: int
    coordinate: float


@dataclass(frozen=True)
class IntervalSystem:
    graph: WeightedDigraph
    alpha: float
    cross_distance: float
    weights: tuple[float, ...]
    bases: tuple[BaseInterval, ...]
    branches: tuple[Branch, ...]

    def base(self, vertex: int) -> BaseInterval:
        return self.bases[vertex - 1]

    def branches_from(self, vertex: int) -> list[Branch]:
        return [b for b in self.branches if b.src == vertex]

    def expansion_ratio(self, branch: Branch) -> float:
        return float(branch.degree) ** (1.0 / self.alpha)


def build_interval_system(g: WeightedDigraph, alpha: float,
                          cross_distance: Optional[float] = None,
                          orientations: Optional[Sequence[int]] = None) -> IntervalSystem:
    """Embed the interval system for (g, alpha).

    Needs spectral radius below 1 at alpha so a strictly contracted Perron
    vector exists.  cross_distance defaults to max(w) = 1, which strictly
    exceeds the max(w)/2 bound the triangle inequality needs.
    """
    perron = perron_vector(g, alpha)
    w = tuple(float(x) for x in perron.vector)
    max_w = max(w)
    if cross_distance is None:
        cross_distance = max_w
    elif cross_distance <= max_w / 2.0:
        raise ValueError(f"cross-component distance {cross_distance} must exceed "
                         f"max weight / 2 = {max_w / 2.0}")
    if orientations is None:
        orientations = [1] * len(g.edges)
    elif len(orientations) != len(g.edges) or any(o not in (1, -1) for o in orientations):
        raise ValueError("orientations must give +1 or -1 per edge")

    bases = []
    offset = 0.0
    for v in range(1, g.vertex_count + 1):
        bases.append(BaseInterval(vertex=v, left=offset, length=w[v - 1]))
        offset += w[v - 1] + max_w  # disjoint placement; spacing is cosmetic

    branches = []
    for v in range(1, g.vertex_count + 1):
        outgoing = g.out_edges(v)
        lengths = [w[e.dst - 1] * float(e.degree) ** (-1.0 / alpha) for _, e in outgoing]
        gap = (w[v - 1] - sum(lengths)) / (len(outgoing) + 1)
        if outgoing and gap <= 0:
            raise ValueError("subintervals do not fit strictly inside the base interval")
        cursor = bases[v - 1].left + gap
        for (k, e), length in zip(outgoing, lengths):
            branches.append(Branch(edge_index=k, src=e.src, dst=e.dst, degree=e.degree,
                                   left=cursor, length=length, orientation=orientations[k]))
            cursor += length + gap
    branches.sort(key=lambda b: b.edge_index)
    return IntervalSystem(graph=g, alpha=alpha, cross_distance=cross_distance,
                          weights=w, bases=tuple(bases), branches=tuple(branches))


def locate_branch(sys: IntervalSystem, p: GDMSPoint) -> Branch:
    """The branch whose closed subinterval contains p; error in the gaps."""
    for b in sys.branches_from(p.component):
        if b.left <= p.coordinate <= b.right:
            return b
    raise ValueError(f"point {p.coordinate} in component {p.component} "
                     "is outside every branch domain")


def apply_map(sys: IntervalSystem, p: GDMSPoint) -> GDMSPoint:
    """One step of the expanding map; defined on the union of subintervals."""
    b = locate_branch(sys, p)
    target = sys.base(b.dst)
    ratio = sys.expansion_ratio(b)
    if b.orientation > 0:
        x = target.left + (p.coordinate - b.left) * ratio
    else:
        x = target.left + (b.right - p.coordinate) * ratio
    return GDMSPoint(component=b.dst, coordinate=x)


@dataclass(frozen=True)
class Cylinder:
    """Points whose first ``len(word)`` steps follow the given edge path.

    Words read forward along the symbolic future: the cylinder sits inside
    the source component of its first edge.  Length is carried explicitly so
    repeated contraction stays exact for power-of-two ratios.
    """

    word: tuple[int, ...]
    component: int
    terminal: int
    left: float
    length: float

    @property
    def right(self) -> float:
        return self.left + self.length

    @property
    def depth(self) -> int:
        return len(self.word)


def pull_back(sys: IntervalSystem, b: Branch, cyl: Cylinder) -> Cylinder:
    # inverse branch of the map over edge b applied to a cylinder in base(dst)
    source = sys.base(b.dst)
    ratio = sys.expansion_ratio(b)
    length = cyl.length / ratio
    if b.orientation > 0:
        left = b.left + (cyl.left - source.left) / ratio
    else:
        left = b.left + (source.right - cyl.right) / ratio
    return Cylinder(word=(b.edge_index,) + cyl.word, component=b.src,
                    terminal=cyl.terminal, left=left, length=length)


def repellor_cover(sys: IntervalSystem, depth: int) -> list[Cylinder]:
    """All admissible cylinders of the given depth with their intervals.

    Depth 0 returns the base intervals; each deeper cylinder nests inside
    its one-step suffix pulled back through the leading edge.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    cover = [Cylinder(word=(), component=b.vertex, terminal=b.vertex,
                      left=b.left, length=b.length) for b in sys.bases]
    for _ in range(depth):
        # prepend every edge that ends where the cylinder currently starts
        cover = [pull_back(sys, b, cyl)
                 for cyl in cover
                 for b in sys.branches if b.dst == cyl.component]
    return cover


def cylinder_from_word(sys: IntervalSystem, word: Sequence[int]) -> Cylinder:
    """Build the cylinder for an explicit admissible edge-index word."""
    if not word:
        raise ValueError("use repellor_cover(sys, 0) for the base intervals")
    by_index = {b.edge_index: b for b in sys.branches}
    edges = [by_index[k] for k in word]
    for first, second in zip(edges, edges[1:]):
        if first.dst != second.src:
            raise ValueError("word is not an admissible edge path")
    last = edges[-1]
    base = sys.base(last.dst)
    cyl = Cylinder(word=(), component=last.dst, terminal=last.dst,
                   left=base.left, length=base.length)
    for b in reversed(edges):
        cyl = pull_back(sys, b, cyl)
    return cyl


def distance(sys: IntervalSystem, p: GDMSPoint, q: GDMSPoint, snowflaked: bool = False) -> float:
    """Metric on the disjoint union of base intervals.

    Same component: |x - y| (raised to alpha when snowflaked).  Different
    components: the fixed cross-component constant (likewise snowflaked).
    """
    if p.component == q.component:
        d = abs(p.coordinate - q.coordinate)
    else:
        d = sys.cross_distance
    return d ** sys.alpha if snowflaked else d


def box_dimension(sys: IntervalSystem, snowflaked: bool = False,
                  depths: Sequence[int] = tuple(range(2, 11))) -> float:
    """Box-counting slope over cylinder covers: log count vs -log mesh."""
    xs, ys = [], []
    for m in depths:
        cover = repellor_cover(sys, m)
        mesh = max(c.length for c in cover)
        if snowflaked:
            mesh = mesh ** sys.alpha
        xs.append(-math.log(mesh))
        ys.append(math.log(len(cover)))
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


def cover_rows(cover: Sequence[Cylinder]) -> list[tuple[str, float, float, float]]:
    """CSV-ready rows (word, left, right, length) for a cover listing."""
    return [("." .join(str(k) for k in c.word) if c.word else f"base{c.component}",
             c.left, c.right, c.length) for c in cover]
