"""Open region descriptors: the sets over which degrees and indices live.

A region is an open subset of R^n described by closed-form geometry (ball,
box, annulus, annular sector, products and finite unions of those).  The
degree engine needs three things from a region: a bounding box, a
conservative per-grid-cell classification (fully inside / fully outside /
straddling the frontier), and frontier sample points for nonvanishing
certificates.

Cell classification is exact when the cell corners and the region
parameters are rationals; for float parameters it is conservative (doubt
classifies as BAND, which only costs certification effort, never
correctness).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError

INSIDE = "inside"
OUTSIDE = "outside"
BAND = "band"


def _radial_tables(axes, center):
    """Per-axis squared-distance contribution tables for radial regions."""
    near_t = []
    far_t = []
    for col, c in zip(axes, center):
        near_col = []
        far_col = []
        for i in range(len(col) - 1):
            a, b = col[i], col[i + 1]
            nearest = max(a - c, c - b, 0.0)
            farthest = max(abs(a - c), abs(b - c))
            near_col.append(nearest * nearest)
            far_col.append(farthest * farthest)
        near_t.append(near_col)
        far_t.append(far_col)
    return near_t, far_t


def _sq_dist_to_box(point, lo, hi):
    """Squared distance from a point to an axis box; exact on rationals."""
    total = 0
    for p, a, b in zip(point, lo, hi):
        d = max(a - p, p - b, 0)
        total += d * d
    return total


def _cell_radius_bounds_sq(lo, hi, center):
    """Min and max of |x - center|^2 over the cell [lo, hi]."""
    lo_sq = 0
    hi_sq = 0
    for a, b, c in zip(lo, hi, center):
        near = max(a - c, c - b, 0)
        far = max(abs(a - c), abs(b - c))
        lo_sq += near * near
        hi_sq += far * far
    return lo_sq, hi_sq


def _circle_points(center, radius, count, dim3_axis=None):
    cx, cy = center[0], center[1]
    pts = []
    for k in range(count):
        t = 2 * math.pi * k / count
        pts.append((cx + radius * math.cos(t), cy + radius * math.sin(t)))
    return pts


def _sphere_points(center, radius, count):
    """Deterministic quasi-uniform sphere samples (spiral lattice)."""
    golden = (1 + math.sqrt(5)) / 2
    pts = []
    for k in range(count):
        z = 1 - (2 * k + 1) / count
        r = math.sqrt(max(0.0, 1 - z * z))
        phi = 2 * math.pi * k / golden
        pts.append(
            (
                center[0] + radius * r * math.cos(phi),
                center[1] + radius * r * math.sin(phi),
                center[2] + radius * z,
            )
        )
    return pts


class Region:
    """Base class; subclasses are immutable value objects."""

    dim: int

    def contains(self, point) -> bool:
        raise NotImplementedError

    def bounding_box(self):
        raise NotImplementedError

    def cell_class(self, lo, hi) -> str:
        raise NotImplementedError

    def frontier_samples(self, count: int):
        raise NotImplementedError

    def interior_margin(self, point) -> float:
        """Distance from an interior point to the region frontier (0 outside)."""
        raise NotImplementedError

    def cell_class_padded(self, lo, hi, pad: float) -> str:
        """Float classification biased toward BAND by ``pad``; sound for
        grid work because doubt only costs certification effort."""
        return self.cell_class(lo, hi)

    def cell_classifier(self, axes, pad: float):
        """Fast per-grid-cell classifier over the float axis lattices."""

        def classify(idx):
            lo = tuple(axes[a][i] for a, i in enumerate(idx))
            hi = tuple(axes[a][i + 1] for a, i in enumerate(idx))
            return self.cell_class_padded(lo, hi, pad)

        return classify

    @property
    def diameter(self) -> float:
        lo, hi = self.bounding_box()
        return math.sqrt(sum((float(b) - float(a)) ** 2 for a, b in zip(lo, hi)))


@dataclass(frozen=True)
class EmptyRegion(Region):
    dim: int

    def contains(self, point):
        return False

    def bounding_box(self):
        zero = tuple(0 for _ in range(self.dim))
        return zero, zero

    def cell_class(self, lo, hi):
        return OUTSIDE

    def frontier_samples(self, count):
        return []

    def interior_margin(self, point):
        return 0.0


@dataclass(frozen=True)
class BallRegion(Region):
    center: tuple
    radius: object

    def __post_init__(self):
        if self.radius <= 0:
            raise GeometryError("ball radius must be positive")

    @property
    def dim(self):
        return len(self.center)

    def contains(self, point):
        d = sum((p - c) ** 2 for p, c in zip(point, self.center))
        return d < self.radius * self.radius

    def bounding_box(self):
        lo = tuple(c - self.radius for c in self.center)
        hi = tuple(c + self.radius for c in self.center)
        return lo, hi

    def cell_class(self, lo, hi):
        near, far = _cell_radius_bounds_sq(lo, hi, self.center)
        r2 = self.radius * self.radius
        if far < r2:
            return INSIDE
        if near > r2:
            return OUTSIDE
        return BAND

    def cell_class_padded(self, lo, hi, pad):
        c = tuple(float(v) for v in self.center)
        r = float(self.radius)
        near, far = _cell_radius_bounds_sq(tuple(map(float, lo)), tuple(map(float, hi)), c)
        if far < (r - pad) ** 2:
            return INSIDE
        if near > (r + pad) ** 2:
            return OUTSIDE
        return BAND

    def cell_classifier(self, axes, pad):
        near_t, far_t = _radial_tables(axes, tuple(float(v) for v in self.center))
        r = float(self.radius)
        lo_sq = (r - pad) ** 2
        hi_sq = (r + pad) ** 2

        def classify(idx):
            near = 0.0
            far = 0.0
            for a, i in enumerate(idx):
                near += near_t[a][i]
                far += far_t[a][i]
            if far < lo_sq:
                return INSIDE
            if near > hi_sq:
                return OUTSIDE
            return BAND

        return classify

    def frontier_samples(self, count):
        center = tuple(float(c) for c in self.center)
        r = float(self.radius)
        if self.dim == 1:
            return [(center[0] - r,), (center[0] + r,)]
        if self.dim == 2:
            return _circle_points(center, r, count)
        if self.dim == 3:
            return _sphere_points(center, r, count)
        raise GeometryError("frontier sampling supports dimensions 1..3")

    def interior_margin(self, point):
        d = math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))
        return max(0.0, float(self.radius) - d)


@dataclass(frozen=True)
class BoxRegion(Region):
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise GeometryError("box corner dimensions differ")
        if not all(a < b for a, b in zip(self.lower, self.upper)):
            raise GeometryError("box lower corner must be strictly below upper corner")

    @property
    def dim(self):
        return len(self.lower)

    def contains(self, point):
        return all(a < p < b for p, a, b in zip(point, self.lower, self.upper))

    def bounding_box(self):
        return tuple(self.lower), tuple(self.upper)

    def cell_class(self, lo, hi):
        if all(a < cl and ch < b for cl, ch, a, b in zip(lo, hi, self.lower, self.upper)):
            return INSIDE
        for cl, ch, a, b in zip(lo, hi, self.lower, self.upper):
            if ch < a or cl > b:
                return OUTSIDE
        return BAND

    def cell_class_padded(self, lo, hi, pad):
        lo_r = tuple(float(v) for v in self.lower)
        hi_r = tuple(float(v) for v in self.upper)
        if all(
            a + pad < float(cl) and float(ch) < b - pad
            for cl, ch, a, b in zip(lo, hi, lo_r, hi_r)
        ):
            return INSIDE
        for cl, ch, a, b in zip(lo, hi, lo_r, hi_r):
            if float(ch) < a - pad or float(cl) > b + pad:
                return OUTSIDE
        return BAND

    def frontier_samples(self, count):
        lo = tuple(float(a) for a in self.lower)
        hi = tuple(float(b) for b in self.upper)
        if self.dim == 1:
            return [(lo[0],), (hi[0],)]
        per_face = max(2, count // (2 * self.dim))
        pts = []
        for axis in range(self.dim):
            for value in (lo[axis], hi[axis]):
                for k in range(per_face):
                    t = (k + 0.5) / per_face
                    if self.dim == 2:
                        other = 1 - axis
                        p = [0.0, 0.0]
                        p[axis] = value
                        p[other] = lo[other] + t * (hi[other] - lo[other])
                        pts.append(tuple(p))
                    else:
                        side = max(2, int(math.sqrt(per_face)))
                        for j in range(side):
                            u = (j + 0.5) / side
                            others = [i for i in range(3) if i != axis]
                            p = [0.0, 0.0, 0.0]
                            p[axis] = value
                            p[others[0]] = lo[others[0]] + t * (hi[others[0]] - lo[others[0]])
                            p[others[1]] = lo[others[1]] + u * (hi[others[1]] - lo[others[1]])
                            pts.append(tuple(p))
        return pts

    def interior_margin(self, point):
        margins = [
            min(float(p) - float(a), float(b) - float(p))
            for p, a, b in zip(point, self.lower, self.upper)
        ]
        return max(0.0, min(margins))


@dataclass(frozen=True)
class AnnulusRegion(Region):
    """Open planar annulus (or 3-d spherical shell) inner < |x - center| < outer."""

    center: tuple
    inner: object
    outer: object

    def __post_init__(self):
        if not (0 < self.inner < self.outer):
            raise GeometryError("annulus needs 0 < inner < outer")

    @property
    def dim(self):
        return len(self.center)

    def contains(self, point):
        d = sum((p - c) ** 2 for p, c in zip(point, self.center))
        return self.inner * self.inner < d < self.outer * self.outer

    def bounding_box(self):
        lo = tuple(c - self.outer for c in self.center)
        hi = tuple(c + self.outer for c in self.center)
        return lo, hi

    def cell_class(self, lo, hi):
        near, far = _cell_radius_bounds_sq(lo, hi, self.center)
        in2 = self.inner * self.inner
        out2 = self.outer * self.outer
        if near > in2 and far < out2:
            return INSIDE
        if far < in2 or near > out2:
            return OUTSIDE
        return BAND

    def cell_class_padded(self, lo, hi, pad):
        c = tuple(float(v) for v in self.center)
        r_in = float(self.inner)
        r_out = float(self.outer)
        near, far = _cell_radius_bounds_sq(tuple(map(float, lo)), tuple(map(float, hi)), c)
        if near > (r_in + pad) ** 2 and far < (r_out - pad) ** 2:
            return INSIDE
        if far < (r_in - pad) ** 2 or near > (r_out + pad) ** 2:
            return OUTSIDE
        return BAND

    def cell_classifier(self, axes, pad):
        near_t, far_t = _radial_tables(axes, tuple(float(v) for v in self.center))
        in_lo = (float(self.inner) - pad) ** 2
        in_hi = (float(self.inner) + pad) ** 2
        out_lo = (float(self.outer) - pad) ** 2
        out_hi = (float(self.outer) + pad) ** 2

        def classify(idx):
            near = 0.0
            far = 0.0
            for a, i in enumerate(idx):
                near += near_t[a][i]
                far += far_t[a][i]
            if near > in_hi and far < out_lo:
                return INSIDE
            if far < in_lo or near > out_hi:
                return OUTSIDE
            return BAND

        return classify

    def frontier_samples(self, count):
        center = tuple(float(c) for c in self.center)
        half = max(8, count // 2)
        if self.dim == 2:
            return _circle_points(center, float(self.inner), half) + _circle_points(
                center, float(self.outer), half
            )
        if self.dim == 3:
            return _sphere_points(center, float(self.inner), half) + _sphere_points(
                center, float(self.outer), half
            )
        raise GeometryError("annular regions exist in dimensions 2 and 3")

    def interior_margin(self, point):
        d = math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))
        return max(0.0, min(d - float(self.inner), float(self.outer) - d))


@dataclass(frozen=True)
class SectorRegion(Region):
    """Open planar annular sector: radii in (inner, outer), angle in (a0, a1).

    Angles are radians measured around ``center``; the sector spans
    counterclockwise from a0 to a1 with a1 - a0 in (0, 2*pi).
    """

    center: tuple
    inner: float
    outer: float
    a0: float
    a1: float

    def __post_init__(self):
        if not (0 < self.inner < self.outer):
            raise GeometryError("sector needs 0 < inner < outer")
        if not (0 < self.a1 - self.a0 < 2 * math.pi):
            raise GeometryError("sector angle span must lie in (0, 2*pi)")

    @property
    def dim(self):
        return 2

    def _angle_inside(self, point) -> bool:
        theta = math.atan2(float(point[1] - self.center[1]), float(point[0] - self.center[0]))
        span = (theta - self.a0) % (2 * math.pi)
        return 0 < span < (self.a1 - self.a0)

    def contains(self, point):
        d = sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center))
        if not (self.inner**2 < d < self.outer**2):
            return False
        return self._angle_inside(point)

    def bounding_box(self):
        c = self.center
        r = self.outer
        return (c[0] - r, c[1] - r), (c[0] + r, c[1] + r)

    def cell_class(self, lo, hi):
        corners = [
            (lo[0], lo[1]),
            (lo[0], hi[1]),
            (hi[0], lo[1]),
            (hi[0], hi[1]),
        ]
        center = ((lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2)
        flags = [self.contains(p) for p in corners + [center]]
        if all(flags):
            # conservative: corners plus center inside still only proves BAND
            # unless the cell is radially and angularly clear of the frontier
            near, far = _cell_radius_bounds_sq(
                tuple(map(float, lo)), tuple(map(float, hi)), tuple(map(float, self.center))
            )
            pad = 1e-12 * self.outer**2
            if near > self.inner**2 + pad and far < self.outer**2 - pad:
                spans = []
                for p in corners:
                    theta = math.atan2(p[1] - self.center[1], p[0] - self.center[0])
                    spans.append((theta - self.a0) % (2 * math.pi))
                width = self.a1 - self.a0
                if all(1e-9 < s < width - 1e-9 for s in spans) and max(spans) - min(spans) < math.pi:
                    return INSIDE
            return BAND
        if not any(flags):
            near, far = _cell_radius_bounds_sq(
                tuple(map(float, lo)), tuple(map(float, hi)), tuple(map(float, self.center))
            )
            if far < self.inner**2 or near > self.outer**2:
                return OUTSIDE
            spans = []
            ok = True
            for p in corners:
                theta = math.atan2(p[1] - self.center[1], p[0] - self.center[0])
                s = (theta - self.a0) % (2 * math.pi)
                spans.append(s)
                if s <= self.a1 - self.a0:
                    ok = False
            if ok and max(spans) - min(spans) < math.pi and near > 0:
                return OUTSIDE
            return BAND
        return BAND

    def frontier_samples(self, count):
        c = self.center
        quarter = max(4, count // 4)
        pts = []
        for k in range(quarter):
            t = self.a0 + (self.a1 - self.a0) * (k + 0.5) / quarter
            pts.append((c[0] + self.inner * math.cos(t), c[1] + self.inner * math.sin(t)))
            pts.append((c[0] + self.outer * math.cos(t), c[1] + self.outer * math.sin(t)))
        for a in (self.a0, self.a1):
            for k in range(quarter):
                r = self.inner + (self.outer - self.inner) * (k + 0.5) / quarter
                pts.append((c[0] + r * math.cos(a), c[1] + r * math.sin(a)))
        return pts

    def interior_margin(self, point):
        if not self.contains(point):
            return 0.0
        d = math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))
        radial = min(d - self.inner, self.outer - d)
        theta = math.atan2(float(point[1] - self.center[1]), float(point[0] - self.center[0]))
        span = (theta - self.a0) % (2 * math.pi)
        angular = min(span, self.a1 - self.a0 - span) * d
        return max(0.0, min(radial, angular))


@dataclass(frozen=True)
class ProductRegion(Region):
    first: Region
    second: Region

    @property
    def dim(self):
        return self.first.dim + self.second.dim

    def _split(self, point):
        k = self.first.dim
        return point[:k], point[k:]

    def contains(self, point):
        a, b = self._split(point)
        return self.first.contains(a) and self.second.contains(b)

    def bounding_box(self):
        lo1, hi1 = self.first.bounding_box()
        lo2, hi2 = self.second.bounding_box()
        return lo1 + lo2, hi1 + hi2

    def cell_class(self, lo, hi):
        k = self.first.dim
        c1 = self.first.cell_class(lo[:k], hi[:k])
        c2 = self.second.cell_class(lo[k:], hi[k:])
        if c1 == OUTSIDE or c2 == OUTSIDE:
            return OUTSIDE
        if c1 == INSIDE and c2 == INSIDE:
            return INSIDE
        return BAND

    def cell_class_padded(self, lo, hi, pad):
        k = self.first.dim
        c1 = self.first.cell_class_padded(lo[:k], hi[:k], pad)
        c2 = self.second.cell_class_padded(lo[k:], hi[k:], pad)
        if c1 == OUTSIDE or c2 == OUTSIDE:
            return OUTSIDE
        if c1 == INSIDE and c2 == INSIDE:
            return INSIDE
        return BAND

    def cell_classifier(self, axes, pad):
        k = self.first.dim
        c1 = self.first.cell_classifier(axes[:k], pad)
        c2 = self.second.cell_classifier(axes[k:], pad)

        def classify(idx):
            a = c1(idx[:k])
            if a == OUTSIDE:
                return OUTSIDE
            b = c2(idx[k:])
            if b == OUTSIDE:
                return OUTSIDE
            if a == INSIDE and b == INSIDE:
                return INSIDE
            return BAND

        return classify

    def frontier_samples(self, count):
        half = max(4, count // 2)
        pts = []
        lo1, hi1 = self.first.bounding_box()
        lo2, hi2 = self.second.bounding_box()
        interior1 = _box_lattice(lo1, hi1, self.first, half)
        interior2 = _box_lattice(lo2, hi2, self.second, half)
        for p in self.first.frontier_samples(half):
            for q in interior2:
                pts.append(tuple(p) + tuple(q))
        for q in self.second.frontier_samples(half):
            for p in interior1:
                pts.append(tuple(p) + tuple(q))
        return pts

    def interior_margin(self, point):
        a, b = self._split(point)
        return min(self.first.interior_margin(a), self.second.interior_margin(b))


def _box_lattice(lo, hi, region, budget):
    """A few interior points of ``region`` spread over its bounding box."""
    per_axis = max(2, int(round(budget ** (1 / max(1, len(lo))))))
    axes = []
    for a, b in zip(lo, hi):
        fa, fb = float(a), float(b)
        axes.append([fa + (fb - fa) * (k + 0.5) / per_axis for k in range(per_axis)])
    pts = []

    def rec(prefix, remaining):
        if not remaining:
            if region.contains(tuple(prefix)):
                pts.append(tuple(prefix))
            return
        for v in remaining[0]:
            rec(prefix + [v], remaining[1:])

    rec([], axes)
    return pts or [tuple((float(a) + float(b)) / 2 for a, b in zip(lo, hi))]


@dataclass(frozen=True)
class UnionRegion(Region):
    """Finite union of pairwise disjoint regions."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise GeometryError("union of no regions")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise GeometryError("union parts must share a dimension")

    @property
    def dim(self):
        return self.parts[0].dim

    def contains(self, point):
        return any(p.contains(point) for p in self.parts)

    def bounding_box(self):
        los, his = zip(*(p.bounding_box() for p in self.parts))
        lo = tuple(min(l[i] for l in los) for i in range(self.dim))
        hi = tuple(max(h[i] for h in his) for i in range(self.dim))
        return lo, hi

    def cell_class(self, lo, hi):
        classes = [p.cell_class(lo, hi) for p in self.parts]
        if any(c == INSIDE for c in classes):
            return INSIDE
        if all(c == OUTSIDE for c in classes):
            return OUTSIDE
        return BAND

    def cell_class_padded(self, lo, hi, pad):
        classes = [p.cell_class_padded(lo, hi, pad) for p in self.parts]
        if any(c == INSIDE for c in classes):
            return INSIDE
        if all(c == OUTSIDE for c in classes):
            return OUTSIDE
        return BAND

    def cell_classifier(self, axes, pad):
        subs = [p.cell_classifier(axes, pad) for p in self.parts]

        def classify(idx):
            classes = [s(idx) for s in subs]
            if any(c == INSIDE for c in classes):
                return INSIDE
            if all(c == OUTSIDE for c in classes):
                return OUTSIDE
            return BAND

        return classify

    def frontier_samples(self, count):
        per = max(8, count // len(self.parts))
        pts = []
        for p in self.parts:
            pts.extend(p.frontier_samples(per))
        return pts

    def interior_margin(self, point):
        return max(p.interior_margin(point) for p in self.parts)


def exact_lattice_allowed(region: Region) -> bool:
    """True when the bounding box corners are exact rationals, so the degree
    grid can be built in Fraction arithmetic."""
    lo, hi = region.bounding_box()
    return all(isinstance(v, (int, Fraction)) for v in lo + hi)
