"""Catalog domains: compact manifolds-with-boundary plus a geometric collar.

Each domain M lives in R^n (n = 1, 2, 3) and carries a collar of width w
realized as the outward-normal offset band {0 < dist(x, M) <= w}.  The
collared model M' is M together with that band; the collar coordinate of a
point is dist(x, M) / w in (0, 1].  The standard retraction collapses the
band onto its foot points (nearest-point / radial projection), which keeps
"the image left M" checkable by classification and makes the retraction
idempotent.

Classification is exact (integer/Fraction comparisons on squared
distances) whenever both the point and the domain parameters are exact
rationals.  Float points are classified with a tolerance band: points
within band of the boundary report BOUNDARY; points within band of the
collar's outer edge raise AmbiguousPointError rather than guessing.

All values here are immutable and the operations are pure, so domains may
be shared freely across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import AmbiguousPointError, GeometryError, OutOfCollarError
from .regions import AnnulusRegion, BallRegion, BoxRegion, Region, SectorRegion, UnionRegion

TWO_PI = 2 * math.pi


class Classification(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    COLLAR = "collar"
    OUTSIDE = "outside"


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _sq_norm(v):
    return sum(c * c for c in v)


# --- boundary structure -------------------------------------------------


@dataclass(frozen=True)
class BoundaryChart:
    """A parametrized patch of the boundary manifold.

    ``lo``/``hi`` bound the parameter rectangle (1 or 2 parameters),
    ``periodic`` flags wrap-around per parameter, ``orientation`` is the
    induced boundary orientation relative to the outward normal, and
    ``neighbors`` names the charts glued along the non-periodic ends.
    """

    name: str
    component: int
    lo: tuple
    hi: tuple
    periodic: tuple
    orientation: int
    embed: Callable = field(compare=False)
    neighbors: tuple = ()


@dataclass(frozen=True)
class BoundaryLoop:
    """A full boundary component of a planar domain as one closed curve."""

    name: str
    component: int
    period: float
    orientation: int
    embed: Callable = field(compare=False)
    outward: Callable = field(compare=False)
    tangent: Callable = field(compare=False)
    param_of: Callable = field(compare=False)
    dist_to: Callable = field(compare=False)
    corner_params: tuple = ()


@dataclass(frozen=True)
class BoundarySphere:
    name: str
    component: int
    center: tuple
    radius: float
    orientation: int


@dataclass(frozen=True)
class BoundaryPoints:
    """Dimension-one boundary: a finite set of points with outward signs."""

    name: str
    points: tuple
    outward_signs: tuple


@dataclass(frozen=True)
class HomologyRecipe:
    """How the Lefschetz number of a self-map of M is read off.

    Contractible domains have L(g) = 1 for every g.  Annular domains carry
    one extra generator (the core circle/sphere at mid-radius); the induced
    map multiplies it by the winding/degree of g on that generator, and
    L(g) = 1 + top_sign * degree.
    """

    contractible: bool
    euler: int
    top_sign: int = 0
    generator_center: tuple = ()
    generator_radius: float = 0.0

    def lefschetz(self, core_degree=None) -> int:
        if self.contractible:
            return 1
        if core_degree is None:
            raise GeometryError("annular recipe needs the degree on the core generator")
        return 1 + self.top_sign * core_degree


# --- domain base ---------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    collar_width: object = 1

    def __post_init__(self):
        if self.collar_width <= 0:
            raise GeometryError("collar width must be positive")

    # geometry interface ------------------------------------------------
    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    def signed_exterior(self, point) -> float:
        """Signed distance: negative inside M, zero on the boundary,
        positive = distance to M outside."""
        raise NotImplementedError

    def exterior_height(self, point) -> float:
        return max(0.0, self.signed_exterior(point))

    def collar_coordinate(self, point) -> float:
        return self.exterior_height(point) / float(self.collar_width)

    def _exact_classify(self, point) -> Classification | None:
        raise NotImplementedError

    def classify(self, point, tol: float = 1e-9) -> Classification:
        if _is_exact(point) and self._params_exact():
            result = self._exact_classify(point)
            if result is not None:
                return result
        s = self.signed_exterior(point)
        band = tol * self.diameter
        if abs(s) <= band:
            return Classification.BOUNDARY
        if s < 0:
            return Classification.INTERIOR
        w = float(self.collar_width)
        if abs(s - w) <= band:
            raise AmbiguousPointError(
                f"point at exterior height {s!r} sits within {band!r} of the collar edge {w!r}"
            )
        return Classification.COLLAR if s < w else Classification.OUTSIDE

    def contains(self, point) -> bool:
        """Closed membership x in M."""
        raise NotImplementedError

    def retract(self, point):
        """Collapse the collar onto its foot point; identity on M."""
        raise NotImplementedError

    def _params_exact(self) -> bool:
        raise NotImplementedError

    def _check_in_collar(self, point):
        s = self.signed_exterior(point)
        w = float(self.collar_width)
        if s > w * (1 + 1e-12):
            raise OutOfCollarError(
                f"point at exterior height {s!r} escapes the collar of width {w!r}"
            )

    # boundary / topology interface --------------------------------------
    def boundary_charts(self) -> list:
        raise NotImplementedError

    def boundary_components(self) -> list:
        raise NotImplementedError

    def homology_recipe(self) -> HomologyRecipe:
        raise NotImplementedError

    def interior_region(self) -> Region:
        raise NotImplementedError

    def interior_samples(self, count: int) -> list:
        """Deterministic lattice of interior points (collar-escape checks)."""
        region = self.interior_region()
        lo, hi = region.bounding_box()
        per_axis = max(2, int(round(count ** (1 / self.dim))))
        axes = []
        for a, b in zip(lo, hi):
            fa, fb = float(a), float(b)
            axes.append([fa + (fb - fa) * (k + 0.5) / per_axis for k in range(per_axis)])
        pts = []

        def rec(prefix, remaining):
            if not remaining:
                p = tuple(prefix)
                if region.contains(p):
                    pts.append(p)
                return
            for v in remaining[0]:
                rec(prefix + [v], remaining[1:])

        rec([], axes)
        return pts


# --- circle helpers ------------------------------------------------------


def _circle_loop(name, component, center, radius, orientation):
    cx, cy = float(center[0]), float(center[1])
    r = float(radius)

    def embed(s):
        return (cx + r * math.cos(s), cy + r * math.sin(s))

    def outward(s):
        sign = 1.0 if orientation > 0 else -1.0
        return (sign * math.cos(s), sign * math.sin(s))

    def tangent(s):
        return (-math.sin(s), math.cos(s))

    def param_of(q):
        return math.atan2(q[1] - cy, q[0] - cx) % TWO_PI

    def dist_to(q):
        return abs(math.hypot(q[0] - cx, q[1] - cy) - r)

    return BoundaryLoop(
        name=name,
        component=component,
        period=TWO_PI,
        orientation=orientation,
        embed=embed,
        outward=outward,
        tangent=tangent,
        param_of=param_of,
        dist_to=dist_to,
    )


def _circle_chart(name, component, center, radius, orientation):
    cx, cy = float(center[0]), float(center[1])
    r = float(radius)

    def embed(u):
        return (cx + r * math.cos(u[0]), cy + r * math.sin(u[0]))

    return BoundaryChart(
        name=name,
        component=component,
        lo=(0.0,),
        hi=(TWO_PI,),
        periodic=(True,),
        orientation=orientation,
        embed=embed,
    )


def _sphere_charts(prefix, component, center, radius, orientation):
    """Two half-band charts avoiding the poles, plus two cap charts."""
    cx, cy, cz = (float(c) for c in center)
    r = float(radius)
    cap = 0.45  # polar angle reserved for the cap charts

    def band_embed(u):
        phi, theta = u
        return (
            cx + r * math.sin(theta) * math.cos(phi),
            cy + r * math.sin(theta) * math.sin(phi),
            cz + r * math.cos(theta),
        )

    def cap_embed_north(u):
        x, y = u
        rho2 = x * x + y * y
        z = math.sqrt(max(0.0, r * r - rho2))
        return (cx + x, cy + y, cz + z)

    def cap_embed_south(u):
        x, y = u
        rho2 = x * x + y * y
        z = math.sqrt(max(0.0, r * r - rho2))
        return (cx + x, cy + y, cz - z)

    overlap = 0.2
    cap_r = r * math.sin(cap + overlap)
    charts = [
        BoundaryChart(
            name=f"{prefix}_band_east",
            component=component,
            lo=(-overlap, cap),
            hi=(math.pi + overlap, math.pi - cap),
            periodic=(False, False),
            orientation=orientation,
            embed=band_embed,
            neighbors=(f"{prefix}_band_west", f"{prefix}_cap_north", f"{prefix}_cap_south"),
        ),
        BoundaryChart(
            name=f"{prefix}_band_west",
            component=component,
            lo=(math.pi - overlap, cap),
            hi=(TWO_PI + overlap, math.pi - cap),
            periodic=(False, False),
            orientation=orientation,
            embed=band_embed,
            neighbors=(f"{prefix}_band_east", f"{prefix}_cap_north", f"{prefix}_cap_south"),
        ),
        BoundaryChart(
            name=f"{prefix}_cap_north",
            component=component,
            lo=(-cap_r, -cap_r),
            hi=(cap_r, cap_r),
            periodic=(False, False),
            orientation=orientation,
            embed=cap_embed_north,
            neighbors=(f"{prefix}_band_east", f"{prefix}_band_west"),
        ),
        BoundaryChart(
            name=f"{prefix}_cap_south",
            component=component,
            lo=(-cap_r, -cap_r),
            hi=(cap_r, cap_r),
            periodic=(False, False),
            orientation=-orientation,
            embed=cap_embed_south,
            neighbors=(f"{prefix}_band_east", f"{prefix}_band_west"),
        ),
    ]
    return charts


# --- Ball ---------------------------------------------------------------


@dataclass(frozen=True)
class BallDomain(Domain):
    n: int = 2
    radius: object = 1
    center: tuple = None

    def __post_init__(self):
        super().__post_init__()
        if self.radius <= 0:
            raise GeometryError("ball radius must be positive")
        if self.n not in (1, 2, 3):
            raise GeometryError("catalog balls exist in dimensions 1..3")
        if self.center is None:
            object.__setattr__(self, "center", tuple(0 for _ in range(self.n)))
        if len(self.center) != self.n:
            raise GeometryError("center dimension mismatch")

    @property
    def dim(self):
        return self.n

    @property
    def diameter(self):
        return 2.0 * float(self.radius)

    def _params_exact(self):
        return _is_exact(self.center) and isinstance(self.radius, (int, Fraction)) and isinstance(
            self.collar_width, (int, Fraction)
        )

    def signed_exterior(self, point):
        d = math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))
        return d - float(self.radius)

    def _exact_classify(self, point):
        r2 = _sq_norm(tuple(p - c for p, c in zip(point, self.center)))
        R2 = self.radius * self.radius
        W = self.radius + self.collar_width
        W2 = W * W
        if r2 < R2:
            return Classification.INTERIOR
        if r2 == R2:
            return Classification.BOUNDARY
        if r2 <= W2:
            return Classification.COLLAR
        return Classification.OUTSIDE

    def contains(self, point):
        if _is_exact(point) and self._params_exact():
            return _sq_norm(tuple(p - c for p, c in zip(point, self.center))) <= self.radius**2
        return self.signed_exterior(point) <= 0

    def retract(self, point):
        if self.contains(point):
            return tuple(point)
        self._check_in_collar(point)
        if self.n == 1:
            p, c = point[0], self.center[0]
            return (c + self.radius if p > c else c - self.radius,)
        d = math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))
        scale = float(self.radius) / d
        return tuple(float(c) + (float(p) - float(c)) * scale for p, c in zip(point, self.center))

    def boundary_charts(self):
        if self.n == 1:
            lo = (float(self.center[0]) - float(self.radius),)
            hi = (float(self.center[0]) + float(self.radius),)
            return [
                BoundaryChart("left", 0, (0.0,), (0.0,), (False,), -1, lambda u, p=lo: p),
                BoundaryChart("right", 1, (0.0,), (0.0,), (False,), +1, lambda u, p=hi: p),
            ]
        if self.n == 2:
            return [_circle_chart("circle", 0, self.center, self.radius, +1)]
        return _sphere_charts("sphere", 0, self.center, self.radius, +1)

    def boundary_components(self):
        if self.n == 1:
            c, r = float(self.center[0]), float(self.radius)
            return [BoundaryPoints("endpoints", ((c - r,), (c + r,)), (-1, +1))]
        if self.n == 2:
            return [_circle_loop("circle", 0, self.center, self.radius, +1)]
        return [
            BoundarySphere("sphere", 0, tuple(float(c) for c in self.center), float(self.radius), +1)
        ]

    def homology_recipe(self):
        return HomologyRecipe(contractible=True, euler=1)

    def interior_region(self):
        return BallRegion(self.center, self.radius)

    def collar_band_region(self, inner_margin, outer_margin, arcs=None):
        """Open band inside the collar: exterior heights in
        (inner_margin, w - outer_margin), optionally restricted to angular
        arcs (planar balls only)."""
        r0 = float(self.radius) + inner_margin
        r1 = float(self.radius) + float(self.collar_width) - outer_margin
        if arcs is None:
            return AnnulusRegion(self.center, r0, r1)
        c = tuple(float(v) for v in self.center)
        parts = [SectorRegion(c, r0, r1, a0, a1) for a0, a1 in arcs]
        return parts[0] if len(parts) == 1 else UnionRegion(tuple(parts))


# --- Box ----------------------------------------------------------------


@dataclass(frozen=True)
class BoxDomain(Domain):
    lower: tuple = (0, 0)
    upper: tuple = (1, 1)

    def __post_init__(self):
        super().__post_init__()
        if len(self.lower) != len(self.upper):
            raise GeometryError("box corner dimensions differ")
        if not all(a < b for a, b in zip(self.lower, self.upper)):
            raise GeometryError("box lower corner must be strictly below upper corner")
        if len(self.lower) not in (1, 2):
            raise GeometryError("catalog boxes exist in dimensions 1 and 2")

    @property
    def dim(self):
        return len(self.lower)

    @property
    def diameter(self):
        return math.sqrt(sum((float(b) - float(a)) ** 2 for a, b in zip(self.lower, self.upper)))

    def _params_exact(self):
        return (
            _is_exact(self.lower)
            and _is_exact(self.upper)
            and isinstance(self.collar_width, (int, Fraction))
        )

    def signed_exterior(self, point):
        q = [
            max(float(a) - float(p), float(p) - float(b))
            for p, a, b in zip(point, self.lower, self.upper)
        ]
        outside = math.sqrt(sum(max(v, 0.0) ** 2 for v in q))
        inside = min(max(q), 0.0)
        return outside + inside

    def _exact_classify(self, point):
        inside_strict = all(a < p < b for p, a, b in zip(point, self.lower, self.upper))
        if inside_strict:
            return Classification.INTERIOR
        on_or_in = all(a <= p <= b for p, a, b in zip(point, self.lower, self.upper))
        if on_or_in:
            return Classification.BOUNDARY
        d2 = 0
        for p, a, b in zip(point, self.lower, self.upper):
            d = max(a - p, p - b, 0)
            d2 += d * d
        w2 = self.collar_width * self.collar_width
        if d2 <= w2:
            return Classification.COLLAR
        return Classification.OUTSIDE

    def contains(self, point):
        return all(a <= p <= b for p, a, b in zip(point, self.lower, self.upper))

    def retract(self, point):
        if self.contains(point):
            return tuple(point)
        self._check_in_collar(point)
        return tuple(
            min(max(p, a), b) for p, a, b in zip(point, self.lower, self.upper)
        )

    def _faces(self):
        """CCW perimeter faces: (start, direction, outward, length)."""
        (x0, y0), (x1, y1) = (
            tuple(float(v) for v in self.lower),
            tuple(float(v) for v in self.upper),
        )
        lx, ly = x1 - x0, y1 - y0
        return [
            ((x0, y0), (1.0, 0.0), (0.0, -1.0), lx),
            ((x1, y0), (0.0, 1.0), (1.0, 0.0), ly),
            ((x1, y1), (-1.0, 0.0), (0.0, 1.0), lx),
            ((x0, y1), (0.0, -1.0), (-1.0, 0.0), ly),
        ]

    def boundary_charts(self):
        if self.dim == 1:
            lo = (float(self.lower[0]),)
            hi = (float(self.upper[0]),)
            return [
                BoundaryChart("left", 0, (0.0,), (0.0,), (False,), -1, lambda u, p=lo: p),
                BoundaryChart("right", 1, (0.0,), (0.0,), (False,), +1, lambda u, p=hi: p),
            ]
        charts = []
        names = ["bottom", "right", "top", "left"]
        faces = self._faces()
        for i, (name, (start, direction, outward, length)) in enumerate(zip(names, faces)):
            def embed(u, s=start, d=direction):
                return (s[0] + u[0] * d[0], s[1] + u[0] * d[1])

            charts.append(
                BoundaryChart(
                    name=name,
                    component=0,
                    lo=(0.0,),
                    hi=(length,),
                    periodic=(False,),
                    orientation=+1,
                    embed=embed,
                    neighbors=(names[(i - 1) % 4], names[(i + 1) % 4]),
                )
            )
        return charts

    def boundary_components(self):
        if self.dim == 1:
            return [
                BoundaryPoints(
                    "endpoints",
                    ((float(self.lower[0]),), (float(self.upper[0]),)),
                    (-1, +1),
                )
            ]
        faces = self._faces()
        lengths = [f[3] for f in faces]
        cum = [0.0]
        for l in lengths:
            cum.append(cum[-1] + l)
        period = cum[-1]

        def locate(s):
            s = s % period
            for i in range(4):
                if s < cum[i + 1] or i == 3:
                    return i, s - cum[i]
            raise AssertionError

        def embed(s):
            i, u = locate(s)
            start, direction, _, _ = faces[i]
            return (start[0] + u * direction[0], start[1] + u * direction[1])

        def outward(s):
            i, _ = locate(s)
            return faces[i][2]

        def tangent(s):
            i, _ = locate(s)
            return faces[i][1]

        def param_of(q):
            best = None
            for i, (start, direction, _, length) in enumerate(faces):
                u = (q[0] - start[0]) * direction[0] + (q[1] - start[1]) * direction[1]
                u = min(max(u, 0.0), length)
                p = (start[0] + u * direction[0], start[1] + u * direction[1])
                d = math.hypot(q[0] - p[0], q[1] - p[1])
                if best is None or d < best[0]:
                    best = (d, cum[i] + u)
            return best[1] % period

        def dist_to(q):
            return abs(self.signed_exterior(q))

        return [
            BoundaryLoop(
                name="perimeter",
                component=0,
                period=period,
                orientation=+1,
                embed=embed,
                outward=outward,
                tangent=tangent,
                param_of=param_of,
                dist_to=dist_to,
                corner_params=tuple(cum[:4]),
            )
        ]

    def homology_recipe(self):
        return HomologyRecipe(contractible=True, euler=1)

    def interior_region(self):
        return BoxRegion(tuple(self.lower), tuple(self.upper))


# --- Annulus and Shell ---------------------------------------------------


@dataclass(frozen=True)
class AnnulusDomain(Domain):
    inner: object = 1
    outer: object = 2
    center: tuple = (0, 0)

    def __post_init__(self):
        super().__post_init__()
        if not (0 < self.inner < self.outer):
            raise GeometryError("annulus needs 0 < inner < outer")
        if self.collar_width >= self.inner:
            raise GeometryError("collar width must stay below the inner radius")
        if len(self.center) != 2:
            raise GeometryError("annulus center must be planar")

    @property
    def dim(self):
        return 2

    @property
    def diameter(self):
        return 2.0 * float(self.outer)

    def _params_exact(self):
        return (
            _is_exact(self.center)
            and isinstance(self.inner, (int, Fraction))
            and isinstance(self.outer, (int, Fraction))
            and isinstance(self.collar_width, (int, Fraction))
        )

    def _radius(self, point):
        return math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))

    def signed_exterior(self, point):
        rho = self._radius(point)
        return max(float(self.inner) - rho, rho - float(self.outer))

    def _exact_classify(self, point):
        r2 = _sq_norm(tuple(p - c for p, c in zip(point, self.center)))
        if self.inner**2 < r2 < self.outer**2:
            return Classification.INTERIOR
        if r2 == self.inner**2 or r2 == self.outer**2:
            return Classification.BOUNDARY
        lo = self.inner - self.collar_width
        hi = self.outer + self.collar_width
        if lo * lo <= r2 <= hi * hi:
            return Classification.COLLAR
        return Classification.OUTSIDE

    def contains(self, point):
        if _is_exact(point) and self._params_exact():
            r2 = _sq_norm(tuple(p - c for p, c in zip(point, self.center)))
            return self.inner**2 <= r2 <= self.outer**2
        rho = self._radius(point)
        return float(self.inner) <= rho <= float(self.outer)

    def retract(self, point):
        if self.contains(point):
            return tuple(point)
        self._check_in_collar(point)
        rho = self._radius(point)
        target = float(self.outer) if rho > float(self.outer) else float(self.inner)
        scale = target / rho
        return tuple(
            float(c) + (float(p) - float(c)) * scale for p, c in zip(point, self.center)
        )

    def boundary_charts(self):
        return [
            _circle_chart("outer", 0, self.center, self.outer, +1),
            _circle_chart("inner", 1, self.center, self.inner, -1),
        ]

    def boundary_components(self):
        return [
            _circle_loop("outer", 0, self.center, self.outer, +1),
            _circle_loop("inner", 1, self.center, self.inner, -1),
        ]

    def homology_recipe(self):
        mid = (float(self.inner) + float(self.outer)) / 2
        return HomologyRecipe(
            contractible=False,
            euler=0,
            top_sign=-1,
            generator_center=tuple(float(c) for c in self.center),
            generator_radius=mid,
        )

    def interior_region(self):
        return AnnulusRegion(tuple(self.center), self.inner, self.outer)

    def collar_band_region(self, inner_margin, outer_margin, arcs=None):
        if arcs is not None:
            raise GeometryError("arc-restricted collar bands are only provided for balls")
        c = tuple(self.center)
        w = float(self.collar_width)
        outer_band = AnnulusRegion(c, float(self.outer) + inner_margin, float(self.outer) + w - outer_margin)
        inner_band = AnnulusRegion(c, float(self.inner) - w + outer_margin, float(self.inner) - inner_margin)
        return UnionRegion((outer_band, inner_band))


@dataclass(frozen=True)
class ShellDomain(Domain):
    inner: object = 1
    outer: object = 2
    center: tuple = (0, 0, 0)

    def __post_init__(self):
        super().__post_init__()
        if not (0 < self.inner < self.outer):
            raise GeometryError("shell needs 0 < inner < outer")
        if self.collar_width >= self.inner:
            raise GeometryError("collar width must stay below the inner radius")
        if len(self.center) != 3:
            raise GeometryError("shell center must be three dimensional")

    @property
    def dim(self):
        return 3

    @property
    def diameter(self):
        return 2.0 * float(self.outer)

    def _params_exact(self):
        return (
            _is_exact(self.center)
            and isinstance(self.inner, (int, Fraction))
            and isinstance(self.outer, (int, Fraction))
            and isinstance(self.collar_width, (int, Fraction))
        )

    def _radius(self, point):
        return math.sqrt(sum((float(p) - float(c)) ** 2 for p, c in zip(point, self.center)))

    def signed_exterior(self, point):
        rho = self._radius(point)
        return max(float(self.inner) - rho, rho - float(self.outer))

    def _exact_classify(self, point):
        r2 = _sq_norm(tuple(p - c for p, c in zip(point, self.center)))
        if self.inner**2 < r2 < self.outer**2:
            return Classification.INTERIOR
        if r2 == self.inner**2 or r2 == self.outer**2:
            return Classification.BOUNDARY
        lo = self.inner - self.collar_width
        hi = self.outer + self.collar_width
        if lo * lo <= r2 <= hi * hi:
            return Classification.COLLAR
        return Classification.OUTSIDE

    def contains(self, point):
        if _is_exact(point) and self._params_exact():
            r2 = _sq_norm(tuple(p - c for p, c in zip(point, self.center)))
            return self.inner**2 <= r2 <= self.outer**2
        rho = self._radius(point)
        return float(self.inner) <= rho <= float(self.outer)

    def retract(self, point):
        if self.contains(point):
            return tuple(point)
        self._check_in_collar(point)
        rho = self._radius(point)
        target = float(self.outer) if rho > float(self.outer) else float(self.inner)
        scale = target / rho
        return tuple(
            float(c) + (float(p) - float(c)) * scale for p, c in zip(point, self.center)
        )

    def boundary_charts(self):
        charts = _sphere_charts("outer", 0, self.center, self.outer, +1)
        charts += _sphere_charts("inner", 1, self.center, self.inner, -1)
        return charts

    def boundary_components(self):
        c = tuple(float(v) for v in self.center)
        return [
            BoundarySphere("outer", 0, c, float(self.outer), +1),
            BoundarySphere("inner", 1, c, float(self.inner), -1),
        ]

    def homology_recipe(self):
        mid = (float(self.inner) + float(self.outer)) / 2
        return HomologyRecipe(
            contractible=False,
            euler=2,
            top_sign=+1,
            generator_center=tuple(float(c) for c in self.center),
            generator_radius=mid,
        )

    def interior_region(self):
        return AnnulusRegion(tuple(self.center), self.inner, self.outer)

    def collar_band_region(self, inner_margin, outer_margin, arcs=None):
        if arcs is not None:
            raise GeometryError("arc-restricted collar bands are only provided for balls")
        c = tuple(self.center)
        w = float(self.collar_width)
        outer_band = AnnulusRegion(c, float(self.outer) + inner_margin, float(self.outer) + w - outer_margin)
        inner_band = AnnulusRegion(c, float(self.inner) - w + outer_margin, float(self.inner) - inner_margin)
        return UnionRegion((outer_band, inner_band))


# --- retractions ---------------------------------------------------------


class Retraction:
    """A map from the collared model onto M that sends the collar into the
    boundary and fixes M pointwise."""

    name = "standard"

    def __init__(self, domain: Domain):
        self.domain = domain

    def __call__(self, point):
        return self.domain.retract(point)


class ReparamRetraction(Retraction):
    """Collar collapse at a reparametrized rate t^rate.

    The collar fibers are collapsed onto the same foot points, so as a
    point map this coincides with the standard retraction; only the collar
    coordinate profile differs.  Kept as a catalog entry so retraction
    swaps exercise the full pipeline.
    """

    def __init__(self, domain: Domain, rate: int):
        super().__init__(domain)
        if rate < 1:
            raise GeometryError("collapse rate must be a positive integer")
        self.rate = rate
        self.name = f"collapse_rate_{rate}"

    def collar_profile(self, t: float) -> float:
        return t**self.rate


class ShearRetraction(Retraction):
    """Collapse the collar while sliding along the boundary.

    A point at collar coordinate t lands at the foot point moved along its
    boundary component by ``beta * t`` (radians for circles and spheres,
    the corresponding arclength for box perimeters).  This is a genuinely
    different retraction: it still fixes M and maps the collar into the
    boundary, but derived boundary maps acquire shifted fixed points.
    """

    def __init__(self, domain: Domain, beta: float = 0.15):
        super().__init__(domain)
        self.beta = float(beta)
        self.name = f"shear_{self.beta}"

    def __call__(self, point):
        d = self.domain
        if d.contains(point):
            return tuple(point)
        foot = d.retract(point)
        t = d.collar_coordinate(point)
        angle = self.beta * t
        if isinstance(d, (BallDomain, AnnulusDomain)) and d.dim == 2:
            c = tuple(float(v) for v in d.center)
            x, y = float(foot[0]) - c[0], float(foot[1]) - c[1]
            ca, sa = math.cos(angle), math.sin(angle)
            return (c[0] + x * ca - y * sa, c[1] + x * sa + y * ca)
        if isinstance(d, (BallDomain, ShellDomain)) and d.dim == 3:
            c = tuple(float(v) for v in d.center)
            x, y, z = (float(foot[i]) - c[i] for i in range(3))
            ca, sa = math.cos(angle), math.sin(angle)
            return (c[0] + x * ca - y * sa, c[1] + x * sa + y * ca, c[2] + z)
        if isinstance(d, BoxDomain) and d.dim == 2:
            loop = d.boundary_components()[0]
            scale = loop.period / TWO_PI
            s = loop.param_of(foot)
            return loop.embed(s + angle * scale)
        # one-dimensional boundaries admit no slide
        return foot


def builtin_retractions(domain: Domain) -> list:
    """The retraction catalog used by retraction-independence checks."""
    return [
        Retraction(domain),
        ReparamRetraction(domain, 2),
        ReparamRetraction(domain, 3),
        ShearRetraction(domain, 0.15),
    ]
