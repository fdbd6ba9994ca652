"""The square pillowcase orbifold and its perturbed doubling family.

Points live on the plane modulo the group generated by negation and integer
translations; the canonical fundamental rectangle is [0, 1/2] x (-1/2, 1/2]
with ties on its boundary broken toward nonnegative y, then lexicographically.
The family composes the doubling map with a piecewise-linear shuffle of a
small square at the (1/2, 1/2) cone point, built from three exact rational
matrices glued along triangle edges.  Everything here is exact: coordinates,
matrices, orbits, postcritical sets.  Floats appear only in distances and in
singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

RatLike = Union[int, str, Fraction]

HALF = Fraction(1, 2)
EIGHTH = Fraction(1, 8)


def _frac(value: RatLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError("exact rational required; pass Fraction, int, or 'p/q' string")
    return Fraction(value)


def check_parameter(a: RatLike) -> Fraction:
    a = _frac(a)
    if not (0 <= a <= EIGHTH):
        raise ValueError("family parameter must lie in [0, 1/8]")
    return a


@dataclass(frozen=True, order=True)
class OrbPoint:
    x: Fraction
    y: Fraction
    canonical: bool = True


def orb_point(x: RatLike, y: RatLike) -> OrbPoint:
    """Canonical representative of (x, y) under negation plus translations.

    The x coordinate determines the sign choice except on the lines
    x in {0, 1/2}; there the representative with y >= 0 wins, then the
    lexicographically smaller pair.  Idempotent by construction.
    """
    x, y = _frac(x), _frac(y)
    candidates = set()
    for sign in (1, -1):
        cx = (sign * x) % 1
        if cx <= HALF:
            cy = (sign * y) % 1
            if cy > HALF:
                cy -= 1
            candidates.add((cx, cy))
    nonneg = [c for c in candidates if c[1] >= 0]
    cx, cy = min(nonneg) if nonneg else min(candidates)
    return OrbPoint(cx, cy)


def involution(p: OrbPoint) -> OrbPoint:
    """The reflection y -> -y, an orientation-reversing symmetry."""
    return orb_point(p.x, -p.y)


def orb_distance(p: OrbPoint, q: OrbPoint) -> float:
    """Length metric: min over sign and nearby integer translates of the
    Euclidean distance between plane representatives (geodesics lift
    straight, so the finite minimum over 18 candidates is the true value)."""
    px, py = float(p.x), float(p.y)
    qx, qy = float(q.x), float(q.y)
    best = math.inf
    for sx, sy in ((qx, qy), (-qx, -qy)):
        for m in (-1.0, 0.0, 1.0):
            dx = px - sx - m
            for n in (-1.0, 0.0, 1.0):
                dy = py - sy - n
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
    return math.sqrt(best)


CONE_POINTS = (
    orb_point(0, 0),
    orb_point(HALF, 0),
    orb_point(0, HALF),
    orb_point(HALF, HALF),
)

# the six branch points of the doubling map: quarter-lattice classes that are
# not half-lattice classes
CRITICAL_POINTS = (
    orb_point(Fraction(1, 4), 0),
    orb_point(0, Fraction(1, 4)),
    orb_point(Fraction(1, 4), Fraction(1, 4)),
    orb_point(Fraction(1, 4), HALF),
    orb_point(HALF, Fraction(1, 4)),
    orb_point(Fraction(1, 4), Fraction(-1, 4)),
)


def doubling(p: OrbPoint) -> OrbPoint:
    """The unperturbed degree-four map induced by multiplication by 2."""
    return orb_point(2 * p.x, 2 * p.y)


# ---------------------------------------------------------------------------
# exact 2x2 rational linear algebra

Mat = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
Vec = tuple[Fraction, Fraction]


def mat(a, b, c, d) -> Mat:
    return ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))


def mat_mul(m1: Mat, m2: Mat) -> Mat:
    return ((m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0],
             m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1]),
            (m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0],
             m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1]))


def mat_inv(m: Mat) -> Mat:
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    return ((m[1][1] / det, -m[0][1] / det), (-m[1][0] / det, m[0][0] / det))


def mat_vec(m: Mat, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def singular_values(m: Mat) -> tuple[float, float]:
    """Singular values (descending): eigenvalues of the square root of M M^t."""
    arr = np.array([[float(m[0][0]), float(m[0][1])], [float(m[1][0]), float(m[1][1])]])
    s = np.linalg.svd(arr, compute_uv=False)
    return float(s[0]), float(s[1])


# the three corner-shuffle matrices; the middle one is derived from its
# defining product rather than written down
VSTRETCH = mat(1, 0, 0, 2)
SHEAR = mat_mul(mat(1, Fraction(1, 2), 1, 1), mat_inv(mat(1, 1, Fraction(1, 2), 1)))
HSQUEEZE = mat(Fraction(1, 2), 0, 0, 1)

PIECE_MATRICES = (VSTRETCH, SHEAR, HSQUEEZE)

Triangle = tuple[Vec, Vec, Vec]


@dataclass(frozen=True)
class AffinePiece:
    name: str
    matrix: Mat
    domain: Triangle
    image: Triangle


def corner_pieces(a: RatLike) -> tuple[AffinePiece, ...]:
    """The three linear pieces of the corner shuffle on [0, a]^2.

    Domains tile the square below/above the slope-1/2 ray and the diagonal;
    the matrices agree on the shared edges, so first-hit lookup is sound.
    """
    a = _frac(a)
    if a <= 0:
        raise ValueError("corner pieces need a > 0")
    z, h = Fraction(0), a / 2
    d1 = ((z, z), (a, z), (a, h))
    d2 = ((z, z), (a, h), (a, a))
    d3 = ((z, z), (a, a), (z, a))
    i1 = ((z, z), (a, z), (a, a))
    i2 = ((z, z), (a, a), (h, a))
    i3 = ((z, z), (h, a), (z, a))
    return (AffinePiece("stretch", VSTRETCH, d1, i1),
            AffinePiece("shear", SHEAR, d2, i2),
            AffinePiece("squeeze", HSQUEEZE, d3, i3))


def point_in_triangle(p: Vec, tri: Triangle) -> bool:
    """Closed containment test; triangles are given counterclockwise."""
    for k in range(3):
        ax, ay = tri[k]
        bx, by = tri[(k + 1) % 3]
        cross = (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax)
        if cross < 0:
            return False
    return True


def corner_map(a: RatLike, v: Vec) -> Vec:
    a = _frac(a)
    for piece in corner_pieces(a):
        if point_in_triangle(v, piece.domain):
            return mat_vec(piece.matrix, v)
    raise ValueError(f"{v} is outside the corner square")


def corner_map_inv(a: RatLike, v: Vec) -> Vec:
    a = _frac(a)
    for piece in corner_pieces(a):
        if point_in_triangle(v, piece.image):
            return mat_vec(mat_inv(piece.matrix), v)
    raise ValueError(f"{v} is outside the corner square")


def in_corner_square(a: Fraction, p: OrbPoint) -> bool:
    return HALF - a <= p.x <= HALF and HALF - a <= p.y <= HALF


def _through_corner(a: Fraction, p: OrbPoint, inverse: bool) -> OrbPoint:
    shift = HALF - a
    local = (p.x - shift, p.y - shift)
    moved = corner_map_inv(a, local) if inverse else corner_map(a, local)
    return orb_point(moved[0] + shift, moved[1] + shift)


def perturbation(a: RatLike, p: OrbPoint, inverse: bool = False) -> OrbPoint:
    """The symmetric homeomorphism supported on the corner square and its
    reflection; the identity elsewhere."""
    a = check_parameter(a)
    if a == 0:
        return p
    if in_corner_square(a, p):
        return _through_corner(a, p, inverse)
    jp = involution(p)
    if in_corner_square(a, jp):
        return involution(_through_corner(a, jp, inverse))
    return p


def pillow_map(a: RatLike, p: OrbPoint) -> OrbPoint:
    """One member of the family: the corner shuffle after doubling."""
    a = check_parameter(a)
    return perturbation(a, doubling(p))


# ---------------------------------------------------------------------------
# tent dynamics on the bottom edge

def tent(x: Fraction) -> Fraction:
    x = _frac(x)
    return HALF - 2 * abs(x - Fraction(1, 4))


@dataclass(frozen=True)
class TentOrbit:
    start: Fraction
    orbit: tuple[Fraction, ...]  # up to and including the first repeated value
    preperiod: int
    period: int
    pcf: bool

    @property
    def orbit_set(self) -> frozenset[Fraction]:
        return frozenset(self.orbit)


def tent_orbit(a: RatLike, limit: int = 4096) -> TentOrbit:
    """Exact orbit with cycle detection; rationals always close up because
    the map doubles numerators modulo a fixed denominator."""
    a = _frac(a)
    if not (0 <= a <= HALF):
        raise ValueError("tent orbit needs a in [0, 1/2]")
    seen: dict[Fraction, int] = {}
    orbit: list[Fraction] = []
    x = a
    for step in range(limit):
        if x in seen:
            first = seen[x]
            return TentOrbit(start=a, orbit=tuple(orbit), preperiod=first,
                             period=step - first, pcf=True)
        seen[x] = step
        orbit.append(x)
        x = tent(x)
    raise RuntimeError(f"no cycle within {limit} steps; raise the limit")


# ---------------------------------------------------------------------------
# critical and postcritical data

def critical_values(a: RatLike) -> list[OrbPoint]:
    """Images of the six branch points, deduplicated."""
    a = check_parameter(a)
    return sorted({pillow_map(a, c) for c in CRITICAL_POINTS})


def _forward_closure(a: Fraction, seeds: Iterable[OrbPoint], limit: int = 4096) -> set[OrbPoint]:
    closure: set[OrbPoint] = set()
    frontier = list(seeds)
    steps = 0
    while frontier:
        p = frontier.pop()
        if p in closure:
            continue
        closure.add(p)
        frontier.append(pillow_map(a, p))
        steps += 1
        if steps > limit:
            raise RuntimeError("forward closure did not saturate; raise the limit")
    return closure


def postcritical_set(a: RatLike, limit: int = 4096) -> list[OrbPoint]:
    """The forward orbits of the critical values, computed two ways.

    Route one is the closed formula: three fixed boundary points, the moved
    cone point, and the tent orbit of the parameter along the bottom edge.
    Route two iterates the actual map on the images of the branch points.
    A mismatch is an internal consistency error, never silently accepted.
    """
    a = check_parameter(a)
    formula = {orb_point(0, 0), orb_point(HALF, 0), orb_point(0, HALF),
               orb_point((1 - a) / 2, HALF)}
    formula |= {orb_point(t, 0) for t in tent_orbit(a, limit=limit).orbit_set}
    dynamical = _forward_closure(a, critical_values(a), limit=limit)
    if formula != dynamical:
        raise RuntimeError("postcritical cross-check failed: formula "
                           f"{sorted(formula)} vs orbits {sorted(dynamical)}")
    return sorted(formula)


def preimages(a: RatLike, p: OrbPoint) -> list[tuple[OrbPoint, int]]:
    """All solutions q of f(q) = p with local degrees (degrees sum to 4).

    The shuffle is a homeomorphism, so fibers come from halving the shuffled
    target over the four half-integer translates; coincidences among the
    four candidates are exactly the branch points and carry the multiplicity.
    """
    a = check_parameter(a)
    v = perturbation(a, p, inverse=True)
    counts: dict[OrbPoint, int] = {}
    for m in (0, 1):
        for n in (0, 1):
            q = orb_point((v.x + m) / 2, (v.y + n) / 2)
            counts[q] = counts.get(q, 0) + 1
    return sorted(counts.items())


# ---------------------------------------------------------------------------
# expansion certificate

@dataclass(frozen=True)
class ReportPiece:
    name: str
    matrix: Mat
    domain: str
    singular_values: tuple[float, float]


@dataclass(frozen=True)
class DifferentialReport:
    pieces: tuple[ReportPiece, ...]
    min_singular_value: float
    second_iterate_bound: float
    q_disjointness: bool
    samples_checked: int


def _scaled(m: Mat, factor: int) -> Mat:
    return ((factor * m[0][0], factor * m[0][1]), (factor * m[1][0], factor * m[1][1]))


def differential_report(a: RatLike, samples: int = 10**4, seed: int = 0) -> DifferentialReport:
    """Enumerate the affine pieces of the map, certify that no tangent vector
    shrinks, and bound the second-iterate expansion.

    The one-step pieces are the pure doubling (off the corner squares) and
    doubling followed by a corner matrix.  The corner square never maps into
    itself or its reflection (checked exactly via the image slab, and by
    sampling), so a corner piece is always followed by pure doubling, which
    makes every admissible two-step composition expand by at least the
    smaller singular value of the products enumerated here.
    """
    a = check_parameter(a)
    if a == 0:
        raise ValueError("the certificate concerns the perturbed maps; need a > 0")
    corner = corner_pieces(a)
    pieces = [ReportPiece(f"corner:{p.name}", p.matrix, "corner square piece",
                          singular_values(p.matrix)) for p in corner]
    identity2 = _scaled(mat(1, 0, 0, 1), 2)
    composed: list[tuple[str, Mat]] = [("doubling", identity2)]
    composed += [(f"doubling+{p.name}", _scaled(p.matrix, 2)) for p in corner]
    pieces += [ReportPiece(name, m, "one map step", singular_values(m))
               for name, m in composed]
    min_sv = min(singular_values(m)[1] for _, m in composed)

    # exact disjointness: the image of the corner square under the map lies in
    # the slab x <= 2a, while both corner squares lie in x >= 1/2 - a
    exact_disjoint = 2 * a < HALF - a
    rng = np.random.default_rng(seed)
    checked = 0
    sampled_ok = True
    denom = 2**20
    for _ in range(samples):
        u = Fraction(int(rng.integers(0, denom + 1)), denom) * a
        v = Fraction(int(rng.integers(0, denom + 1)), denom) * a
        p = orb_point(HALF - a + u, HALF - a + v)
        image = pillow_map(a, p)
        checked += 1
        if in_corner_square(a, image) or in_corner_square(a, involution(image)):
            sampled_ok = False
            break
    disjoint = bool(exact_disjoint and sampled_ok)

    after_corner = [identity2]  # corner pieces are always followed by doubling
    after_doubling = [m for _, m in composed]
    bound = math.inf
    for _, first in composed:
        successors = after_doubling if first == identity2 else after_corner
        for second in successors:
            bound = min(bound, singular_values(mat_mul(second, first))[1])
    return DifferentialReport(pieces=tuple(pieces), min_singular_value=min_sv,
                              second_iterate_bound=bound, q_disjointness=disjoint,
                              samples_checked=checked)


def family_deviation(a1: RatLike, a2: RatLike, grid: int = 24) -> float:
    """Sup over a coordinate grid of the displacement between two family
    members; a numerical modulus of continuity in the parameter."""
    a1, a2 = check_parameter(a1), check_parameter(a2)
    worst = 0.0
    for i in range(grid + 1):
        for jj in range(2 * grid + 1):
            p = orb_point(Fraction(i, 2 * grid), Fraction(jj - grid, 2 * grid))
            worst = max(worst, orb_distance(pillow_map(a1, p), pillow_map(a2, p)))
    return worst
