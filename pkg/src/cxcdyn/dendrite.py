"""Planar pair-of-similarities attractors, their overlap test, the induced
degree-two branched cover, and kneading sequences.

The maps z -> lam z and z -> lam z + 1 generate an attractor invariant under
the involution z -> -z + 1/(1 - lam).  When the two halves meet in a single
point o, the first map and (second map after the involution) are inverse
branches of a degree-two branched self-cover q of the attractor, branched at
o.  The kneading sequence is the itinerary of o under q relative to the two
halves, the half containing q(o) labeled 1; for comparison, reference
itineraries come from real quadratic polynomials on a real slice and from
angle doubling on the circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.spatial import cKDTree


class BranchPointError(ValueError):
    """An itinerary point fell inside the ambiguity radius of the branch point."""


def _check_param(lam: complex) -> complex:
    lam = complex(lam)
    if not (0.0 < abs(lam) < 1.0):
        raise ValueError("parameter must have modulus strictly between 0 and 1")
    return lam


def involution(lam: complex, z: complex) -> complex:
    """The symmetry swapping the two attractor halves."""
    return -z + 1.0 / (1.0 - lam)


def involution_center(lam: complex) -> complex:
    """The fixed point of the involution (center of symmetry)."""
    return 0.5 / (1.0 - lam)


def default_tolerance(lam: complex, depth: int) -> float:
    """Four times the contraction error bound of a depth-m approximation."""
    r = abs(complex(lam))
    return 4.0 * r**depth / (1.0 - r)


@dataclass(frozen=True)
class AttractorApprox:
    """All depth-m address images of a seed point.

    The point at index i is the composition F_{w_1} o ... o F_{w_m} applied
    to the seed, where w_1..w_m are the bits of i from most significant
    down.  The leading bit says which half the point approximates.
    """

    lam: complex
    depth: int
    seed: complex
    points: np.ndarray

    def address(self, index: int) -> str:
        return format(index, f"0{self.depth}b")

    @property
    def leading_bits(self) -> np.ndarray:
        return np.arange(len(self.points)) >> (self.depth - 1)


def attractor_points(lam: complex, depth: int, seed: complex = 0.0) -> AttractorApprox:
    """Generate the 2^depth address images of the seed (default: the fixed
    point of the first map)."""
    lam = _check_param(lam)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > 24:
        raise ValueError("depth capped at 24 to bound memory")
    pts = np.array([complex(seed)], dtype=complex)
    for _ in range(depth):
        # new leading bit becomes the most significant address bit
        pts = np.concatenate([lam * pts, lam * pts + 1.0])
    return AttractorApprox(lam=lam, depth=depth, seed=complex(seed), points=pts)


def _as_xy(points: np.ndarray) -> np.ndarray:
    return np.column_stack([points.real, points.imag])


@dataclass(frozen=True)
class OverlapReport:
    lam: complex
    depth: int
    tol: float
    pair_count: int
    overlap_diameter: float
    candidate_o: complex
    verdict: str  # plausible | rejected | inconclusive


def _close_pair_midpoints(approx: AttractorApprox, tol: float) -> np.ndarray:
    half = len(approx.points) // 2
    lower, upper = approx.points[:half], approx.points[half:]
    tree0, tree1 = cKDTree(_as_xy(lower)), cKDTree(_as_xy(upper))
    midpoints = []
    for i, hits in enumerate(tree0.query_ball_tree(tree1, tol)):
        for j in hits:
            midpoints.append(0.5 * (lower[i] + upper[j]))
    return np.asarray(midpoints, dtype=complex)


def overlap_test(lam: complex, depth: int = 14, tol: float | None = None) -> OverlapReport:
    """Probe whether the two attractor halves meet in a single point.

    Collects pairs (p, q), p from the 0-half and q from the 1-half, within
    tol of each other; the midpoint cloud stands in for the intersection.
    The verdict is heuristic: sampling cannot certify a singleton overlap,
    only make it plausible or refute it at the stated tolerance.
    """
    lam = _check_param(lam)
    if depth < 6:
        raise ValueError("depth must be >= 6 so a shallower comparison run exists")
    if tol is None:
        tol = default_tolerance(lam, depth)
    approx_error = abs(lam) ** depth / (1.0 - abs(lam))

    deep = _close_pair_midpoints(attractor_points(lam, depth), tol)
    shallow_depth = depth - 4
    shallow = _close_pair_midpoints(attractor_points(lam, shallow_depth),
                                    default_tolerance(lam, shallow_depth))

    def diameter(cloud: np.ndarray) -> float:
        if len(cloud) == 0:
            return 0.0
        xy = _as_xy(cloud)
        spans = xy.max(axis=0) - xy.min(axis=0)
        return float(np.hypot(*spans))

    if len(deep) == 0:
        verdict = "rejected" if tol > 2.0 * approx_error else "inconclusive"
        return OverlapReport(lam=lam, depth=depth, tol=tol, pair_count=0,
                             overlap_diameter=0.0, candidate_o=complex("nan"),
                             verdict=verdict)
    diam_deep, diam_shallow = diameter(deep), diameter(shallow)
    # a singleton overlap shrinks the midpoint cloud like the tolerance,
    # i.e. by |lam|^4 over the four extra levels, while a fat intersection
    # plateaus; |lam|^2 separates the two regimes with margin on both sides
    ratio_bound = abs(lam) ** 2
    shrinks = len(shallow) > 0 and (diam_deep <= ratio_bound * diam_shallow
                                    or diam_deep <= 4.0 * tol)
    # a singleton overlap is involution-fixed, so symmetrizing the centroid
    # cancels the bias the seed choice imprints on the midpoint cloud
    centroid = complex(deep.mean())
    candidate = 0.5 * (centroid + involution(lam, centroid))
    return OverlapReport(lam=lam, depth=depth, tol=tol, pair_count=len(deep),
                         overlap_diameter=diam_deep,
                         candidate_o=candidate,
                         verdict="plausible" if shrinks else "inconclusive")


def branched_cover_step(lam: complex, z: complex, half: int) -> complex:
    """One step of the degree-two cover: invert the branch over ``half``.

    Half 0 inverts z -> lam z; half 1 inverts the composition of the second
    map with the involution, which works out to -(z - 1)/lam + 1/(1 - lam).
    """
    lam = _check_param(lam)
    if half == 0:
        return z / lam
    if half == 1:
        return -(z - 1.0) / lam + 1.0 / (1.0 - lam)
    raise ValueError("half must be 0 or 1")


@dataclass(frozen=True)
class KneadingSeq:
    symbols: str

    def __post_init__(self):
        if not set(self.symbols) <= {"0", "1"}:
            raise ValueError("kneading symbols must be over {0, 1}")

    @property
    def length(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return self.symbols


def kneading_sequence(lam: complex, n: int, depth: int = 16,
                      tol: float | None = None) -> KneadingSeq:
    """Itinerary of the branch point under the degree-two cover.

    Membership in a half is decided by the leading address bit of the
    nearest approximation point; an iterate within tol of the branch point
    itself is ambiguous and raises.  The half containing the first iterate
    is labeled 1 by convention.
    """
    lam = _check_param(lam)
    if n < 1:
        raise ValueError("n must be >= 1")
    if tol is None:
        tol = default_tolerance(lam, depth)
    report = overlap_test(lam, depth, tol)
    if report.verdict == "rejected":
        raise ValueError("halves appear disjoint at this tolerance; no branched cover")
    o = report.candidate_o
    approx = attractor_points(lam, depth)
    tree = cKDTree(_as_xy(approx.points))
    leading = approx.leading_bits

    def classify(z: complex) -> int:
        _, idx = tree.query([z.real, z.imag])
        return int(leading[idx])

    z = o / lam  # both branch inverses agree at the branch point
    first_half = classify(z)
    symbols = []
    for _ in range(n):
        if abs(z - o) <= tol:
            raise BranchPointError("itinerary hits branch point")
        half = classify(z)
        symbols.append("1" if half == first_half else "0")
        z = branched_cover_step(lam, z, half)
    return KneadingSeq("".join(symbols))


@dataclass(frozen=True)
class RealQuadratic:
    """Reference source: z -> z^2 + c on the real slice of its Julia set."""

    c: float

    def __post_init__(self):
        if self.c > -2:
            raise ValueError("real reference requires c <= -2")


@dataclass(frozen=True)
class ExternalAngle:
    """Reference source: angle doubling relative to the halving partition."""

    theta: Fraction

    def __post_init__(self):
        theta = Fraction(self.theta)
        if not (0 <= theta < 1):
            raise ValueError("angle must be a rational in [0, 1)")
        object.__setattr__(self, "theta", theta)


ReferenceSource = Union[RealQuadratic, ExternalAngle]


def kneading_reference(source: ReferenceSource, n: int) -> KneadingSeq:
    """Comparison kneading sequences from classical symbolic dynamics."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(source, RealQuadratic):
        c = float(source.c)
        escape = 2.0 + abs(c)
        symbols = []
        z = c  # first image of the critical point
        for _ in range(n):
            if abs(z) > escape:
                raise ValueError("orbit escapes: not in Julia set regime")
            if z == 0.0:
                raise BranchPointError("itinerary hits the partition point 0")
            symbols.append("1" if z < 0 else "0")  # the piece containing c is negative
            z = z * z + c
        return KneadingSeq("".join(symbols))
    if isinstance(source, ExternalAngle):
        theta = source.theta
        t = theta
        symbols = []
        for _ in range(n):
            rel = (t - theta / 2) % 1
            if rel == 0 or rel == Fraction(1, 2):
                raise BranchPointError("itinerary hits a partition point")
            symbols.append("1" if rel < Fraction(1, 2) else "0")
            t = (2 * t) % 1
        return KneadingSeq("".join(symbols))
    raise TypeError(f"unknown reference source {source!r}")
