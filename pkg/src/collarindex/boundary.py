"""Boundary exit sets and boundary fixed point indices.

The exit set of a map f on a collared domain is the open part of the
boundary that f sends strictly outside M.  On planar domains it is a union
of open parameter arcs per boundary loop, located by certified bisection
of the signed exterior coordinate of f; on spheres it is a union of
open chart rectangles found by sign classification on a latitude grid.

The boundary index is the fixed point index of (retraction after f)
restricted to the exit set, computed inside the boundary manifold:
zero-dimensional boundaries count retraction-fixed points, circles and box
perimeters get a one-dimensional displacement analysis, spheres get
gnomonic-chart Newton location plus two-dimensional PL degrees.

Certified-sign sampling backs every reported arc and every "no further
fixed points" claim; ambiguous sign patterns abort with
CertificationError, and displacement plateaus (non-isolated boundary fixed
sets, e.g. a map acting as the identity on an arc) abort with
DegenerateFixedSetError.  Nothing here guesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .degree import pl_degree, _as_callable
from .domains import (
    BoundaryLoop,
    BoundaryPoints,
    BoundarySphere,
    Domain,
    Retraction,
)
from .errors import (
    CertificationError,
    DegenerateFixedSetError,
    OutOfCollarError,
)
from .fpindex import _fd_jacobian, _norm, _solve
from .regions import BallRegion


# --- exit set types ----------------------------------------------------------


@dataclass(frozen=True)
class ExitInterval:
    """Open parameter arc (lo, hi) on a boundary loop where f exits M.

    Endpoints were located by bisection: f maps them onto the boundary up
    to the bisection tolerance (the ``endpoint_marker`` records this).
    ``interior_margin`` is the certified minimum exit height strictly
    inside the arc.
    """

    component: int
    lo: float
    hi: float
    interior_margin: float
    endpoint_marker: str = "on-boundary-within-tolerance"


@dataclass(frozen=True)
class ExitRectangle:
    """Open (azimuth, polar) chart rectangle on a sphere component with a
    certified positive exit height."""

    component: int
    lo: tuple
    hi: tuple
    interior_margin: float


@dataclass(frozen=True)
class ComponentExit:
    component: int
    kind: str  # points | loop | sphere
    full: bool
    empty: bool
    pieces: tuple  # intervals, rectangles, or exit point indices
    margin: float
    undecided: tuple = ()  # sphere cells still straddling the frontier (certified later)


@dataclass(frozen=True)
class ExitSet:
    domain: Domain = field(compare=False)
    components: tuple = ()
    boundary_margin: float = 0.0  # certified |f(x) - x| lower bound on the boundary
    escape_margin: float = 0.0  # collar width minus the maximal boundary exit height

    @property
    def is_empty(self) -> bool:
        return all(c.empty for c in self.components)

    def summary(self) -> dict:
        comps = []
        for c in self.components:
            if c.full:
                desc = "full"
            elif c.empty:
                desc = "empty"
            elif c.kind == "loop":
                desc = [[round(p.lo, 9), round(p.hi, 9)] for p in c.pieces]
            elif c.kind == "sphere":
                desc = f"{len(c.pieces)} rectangles"
            else:
                desc = list(c.pieces)
            comps.append({"component": c.component, "exit": desc})
        return {
            "components": comps,
            "boundary_margin": self.boundary_margin,
            "escape_margin": self.escape_margin,
        }


# --- scalar sign machinery ----------------------------------------------------


def _local_lipschitz(values, mesh, skip=None):
    """Per-sample Lipschitz estimates from neighbor differences."""
    n = len(values)
    out = [0.0] * n
    for i in range(n - 1):
        a, b = values[i], values[i + 1]
        if a is None or b is None:
            continue
        q = abs(b - a) / mesh
        out[i] = max(out[i], q)
        out[i + 1] = max(out[i + 1], q)
    return out


def _classify_samples(values, mesh, safety=2.0):
    """Split samples into +1 (certified positive), -1 (certified negative)
    and 0 (too small to certify a sign over its mesh neighborhood)."""
    lips = _local_lipschitz(values, mesh)
    global_lip = max(lips) if lips else 0.0
    signs = []
    slacks = []
    for v, lip in zip(values, lips):
        lip = max(lip, 0.25 * global_lip)
        slack = safety * lip * mesh / 2
        slacks.append(slack)
        if v > slack:
            signs.append(1)
        elif v < -slack:
            signs.append(-1)
        else:
            signs.append(0)
    return signs, slacks


def _bisect_zero(h, lo, hi, lo_val, hi_val, tol, budget=200):
    """Certified bisection of a sign change of h on [lo, hi]."""
    if lo_val == 0.0 or hi_val == 0.0 or (lo_val > 0) == (hi_val > 0):
        raise CertificationError("bisection bracket lost its sign change")
    for _ in range(budget):
        if hi - lo <= tol:
            return (lo + hi) / 2
        mid = (lo + hi) / 2
        mv = h(mid)
        if mv == 0.0:
            # exact hit: shrink symmetrically around it
            return mid
        if (mv > 0) == (lo_val > 0):
            lo, lo_val = mid, mv
        else:
            hi, hi_val = mid, mv
    raise CertificationError("bisection budget exhausted")


def sign_intervals_on_loop(
    h,
    period: float,
    *,
    samples: int = 720,
    bisect_tol: float = 1e-10,
    safety: float = 2.0,
):
    """Open intervals of a periodic scalar h > 0, located by certified
    bisection of the sign transitions.

    Returns (state, intervals, margin): state is "full", "empty" or
    "mixed"; intervals are (lo, hi) pairs with hi possibly past the period
    for arcs wrapping the seam.
    """
    mesh = period / samples
    ss = [k * mesh for k in range(samples)]
    vs = [h(s) for s in ss]
    wrapped = vs + [vs[0]]
    signs, slacks = _classify_samples(wrapped, mesh, safety)
    signs = signs[:-1]
    slacks = slacks[:-1]

    if all(s == 1 for s in signs):
        return "full", [], min(v - sl for v, sl in zip(vs, slacks))
    if all(s == -1 for s in signs):
        return "empty", [], min(-v - sl for v, sl in zip(vs, slacks))

    n = samples
    plateau_limit = max(6, n // 8)
    try:
        k0 = next(k for k in range(n) if signs[k] != 0)
    except StopIteration:
        raise CertificationError(
            "the exit-height sign is everywhere ambiguous at this resolution"
        ) from None

    # rotate so the scan starts at a certified sample; params stay absolute
    order = list(range(k0, n)) + list(range(k0))
    params = [(k0 + j) * mesh for j in range(n + 1)]  # may exceed the period
    rsigns = [signs[i] for i in order] + [signs[k0]]
    rvals = [vs[i] for i in order] + [vs[k0]]

    def h_abs(s):
        return h(s % period)

    crossings = []  # (param mod period, direction) with +1 for - -> +
    i = 0
    while i < n:
        a = rsigns[i]
        if a == 0:
            raise CertificationError("scan lost its certified anchor")
        j = i + 1
        while rsigns[j] == 0:
            j += 1
        run_len = j - i - 1
        if run_len > plateau_limit:
            raise CertificationError(
                "the exit-height sign is ambiguous on a long stretch; "
                "the exit set frontier cannot be certified"
            )
        b = rsigns[j]
        if a != b:
            crossing = _bisect_zero(
                h_abs, params[i], params[j], rvals[i], rvals[j], bisect_tol
            )
            crossings.append((crossing % period, 1 if b == 1 else -1))
        elif run_len > 0:
            raise CertificationError(
                "an undecided sign stretch is not flanked by a certified sign change"
            )
        i = j

    crossings.sort()
    if not crossings or len(crossings) % 2 != 0:
        raise CertificationError("unbalanced sign transitions on a closed loop")
    intervals = []
    for k, (s0, d0) in enumerate(crossings):
        if d0 != 1:
            continue
        s1, d1 = crossings[(k + 1) % len(crossings)]
        if d1 != -1:
            raise CertificationError("sign transitions do not alternate")
        hi = s1 if s1 > s0 else s1 + period
        intervals.append((s0, hi))
    margin = min(
        (v - sl for v, sl, s in zip(vs, slacks, signs) if s == 1), default=math.inf
    )
    return "mixed", intervals, margin


def scalar_zero_indices(
    h,
    segments,
    *,
    samples: int = 400,
    wrap_half: float | None = None,
    safety: float = 2.0,
    periodic_period: float | None = None,
):
    """Sum of one-dimensional zero indices of h over parameter segments.

    h returns a float or None ("far": certified no zero nearby, used when a
    boundary image lies on a different component).  ``wrap_half`` treats
    values at or beyond that magnitude as far, which makes the analysis
    sound for circle-valued displacements.  The index of each zero bracket
    is read off the certified signs flanking it; plateaus abort.
    """
    total = 0
    zeros = []
    worst_margin = math.inf
    for seg_lo, seg_hi in segments:
        n = samples
        mesh = (seg_hi - seg_lo) / n
        ss = [seg_lo + mesh * k for k in range(n + 1)]
        raw = [h(s) for s in ss]
        vals = [
            None if (v is None or (wrap_half is not None and abs(v) >= wrap_half)) else v
            for v in raw
        ]
        lips = _local_lipschitz(vals, mesh)
        finite = [v for v in vals if v is not None]
        global_lip = max(lips) if finite else 0.0
        state = []
        for v, lip in zip(vals, lips):
            if v is None:
                state.append("far")
                continue
            lip = max(lip, 0.25 * global_lip)
            slack = safety * lip * mesh / 2
            if abs(v) > slack:
                state.append(1 if v > 0 else -1)
                worst_margin = min(worst_margin, abs(v) - slack)
            else:
                state.append(0)

        plateau_limit = max(6, n // 8)
        if periodic_period is not None:
            # rotate a closed-loop scan to start at a decisive sample
            anchors = [k for k in range(n) if state[k] in (1, -1)]
            if not anchors:
                if all(s == "far" for s in state):
                    continue  # the image stays on another component: no fixed points
                raise DegenerateFixedSetError(
                    "the boundary displacement is nowhere certifiably nonzero"
                )
            k0 = anchors[0]
            order = list(range(k0, n)) + list(range(k0))
            base = ss[k0]
            state = [state[i] for i in order] + [state[k0]]
            ss = [base + mesh * j for j in range(n + 1)]
        else:
            if state[0] == 0 or state[-1] == 0:
                raise CertificationError(
                    "a displacement zero sits at the edge of its segment"
                )

        i = 0
        while i < n:
            a = state[i]
            if a == "far":
                i += 1
                continue
            if a == 0:
                raise CertificationError(
                    "an undecided displacement stretch borders a far jump"
                )
            j = i + 1
            while j <= n and state[j] == 0:
                j += 1
            if j > n:
                break
            run_len = j - i - 1
            if run_len > plateau_limit:
                raise DegenerateFixedSetError(
                    "the boundary displacement vanishes along a stretch; "
                    "its fixed point set does not look isolated"
                )
            b = state[j]
            if b == "far":
                if run_len > 0:
                    raise CertificationError(
                        "an undecided displacement stretch borders a far jump"
                    )
                i = j
                continue
            if a != b:
                idx = (b - a) // 2
                total += idx
                zeros.append(((ss[i] + ss[j]) / 2, idx))
            i = j
    return total, zeros, worst_margin


# --- exit sets -----------------------------------------------------------------


def _certify_boundary_preconditions(fn, domain: Domain, *, samples: int, safety=2.0):
    """No boundary fixed points, and no collar escape from the boundary."""
    w = float(domain.collar_width)
    min_disp = math.inf
    max_exit = -math.inf
    for comp in domain.boundary_components():
        if isinstance(comp, BoundaryPoints):
            for p in comp.points:
                v = fn(p)
                min_disp = min(min_disp, _norm([a - b for a, b in zip(v, p)]))
                max_exit = max(max_exit, domain.signed_exterior(v))
            continue
        if isinstance(comp, BoundaryLoop):
            pts = [comp.embed(comp.period * k / samples) for k in range(samples)]
        else:
            pts = _fibonacci_sphere(comp.center, comp.radius, samples)
        disps = []
        for p in pts:
            v = fn(p)
            disps.append(_norm([a - b for a, b in zip(v, p)]))
            max_exit = max(max_exit, domain.signed_exterior(v))
        mesh = _component_mesh(comp, samples)
        lip_scale = max(
            abs(d2 - d1) for d1, d2 in zip(disps, disps[1:])
        ) if len(disps) > 1 else 0.0
        min_disp = min(min_disp, min(disps) - safety * lip_scale / 2)
    if not min_disp > 0:
        raise CertificationError(
            "a boundary fixed point of f is suspected; the scenario cannot be verified"
        )
    escape_margin = w - max_exit
    if not escape_margin > 1e-9 * w:
        raise OutOfCollarError(
            f"the boundary image reaches exterior height {max_exit:.6g}, "
            f"too close to the collar width {w:.6g}"
        )
    return min_disp, escape_margin


def _component_mesh(comp, samples):
    if isinstance(comp, BoundaryLoop):
        return comp.period / samples
    return 1.3 * math.sqrt(4 * math.pi * comp.radius**2 / samples)


def _fibonacci_sphere(center, radius, count):
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


def boundary_exit_set(
    f,
    domain: Domain,
    *,
    samples: int = 720,
    sphere_grid: tuple = (32, 16),
    bisect_tol_factor: float = 1e-9,
    safety: float = 2.0,
) -> ExitSet:
    """Locate the open boundary region that f maps strictly outside M."""
    fn, _ = _as_callable(f)
    boundary_margin, escape_margin = _certify_boundary_preconditions(
        fn, domain, samples=samples
    )
    comps = []
    for ci, comp in enumerate(domain.boundary_components()):
        if isinstance(comp, BoundaryPoints):
            exits = []
            margin = math.inf
            for pi, p in enumerate(comp.points):
                e = domain.signed_exterior(fn(p))
                if abs(e) <= 1e-12 * domain.diameter:
                    raise CertificationError(
                        "a boundary endpoint maps onto the boundary; sign ambiguous"
                    )
                if e > 0:
                    exits.append(pi)
                    margin = min(margin, e)
            comps.append(
                ComponentExit(
                    component=ci,
                    kind="points",
                    full=len(exits) == len(comp.points),
                    empty=not exits,
                    pieces=tuple(exits),
                    margin=margin if exits else math.inf,
                )
            )
        elif isinstance(comp, BoundaryLoop):
            def height(s, comp=comp):
                return domain.signed_exterior(fn(comp.embed(s % comp.period)))

            state, intervals, margin = sign_intervals_on_loop(
                height,
                comp.period,
                samples=samples,
                bisect_tol=bisect_tol_factor * comp.period,
                safety=safety,
            )
            pieces = tuple(
                ExitInterval(ci, lo, hi, _interval_margin(height, lo, hi))
                for lo, hi in intervals
            )
            comps.append(
                ComponentExit(
                    component=ci,
                    kind="loop",
                    full=state == "full",
                    empty=state == "empty",
                    pieces=pieces,
                    margin=margin,
                )
            )
        elif isinstance(comp, BoundarySphere):
            comps.append(_sphere_exit(fn, domain, ci, comp, sphere_grid, safety))
        else:
            raise CertificationError(f"unsupported boundary component {comp!r}")
    return ExitSet(
        domain=domain,
        components=tuple(comps),
        boundary_margin=boundary_margin,
        escape_margin=escape_margin,
    )


def _interval_margin(height, lo, hi, probes: int = 64) -> float:
    vals = [height(lo + (hi - lo) * (k + 0.5) / probes) for k in range(probes)]
    m = min(vals)
    if not m > 0:
        raise CertificationError(
            "an exit arc contains a sample that does not leave the domain; "
            "its openness cannot be certified"
        )
    return m


def _sphere_point(comp: BoundarySphere, phi, theta):
    return (
        comp.center[0] + comp.radius * math.sin(theta) * math.cos(phi),
        comp.center[1] + comp.radius * math.sin(theta) * math.sin(phi),
        comp.center[2] + comp.radius * math.cos(theta),
    )


def _sphere_exit(fn, domain, ci, comp, grid, safety) -> ComponentExit:
    """Classify (azimuth, polar) cells by the sign of the exit height."""
    n_phi, n_theta = grid
    heights = {}

    def height(phi, theta):
        key = (round(phi, 12), round(theta, 12))
        v = heights.get(key)
        if v is None:
            v = domain.signed_exterior(fn(_sphere_point(comp, phi, theta)))
            heights[key] = v
        return v

    d_phi = 2 * math.pi / n_phi
    d_theta = math.pi / n_theta
    all_vals = []
    positives = []
    negatives = []
    mixed = []
    for i in range(n_phi):
        for j in range(n_theta):
            cell = ((i * d_phi, j * d_theta), ((i + 1) * d_phi, (j + 1) * d_theta))
            probe = [
                height(cell[0][0], cell[0][1]),
                height(cell[1][0], cell[0][1]),
                height(cell[0][0], cell[1][1]),
                height(cell[1][0], cell[1][1]),
                height((cell[0][0] + cell[1][0]) / 2, (cell[0][1] + cell[1][1]) / 2),
            ]
            all_vals.extend(probe)
            mesh = comp.radius * max(d_phi, d_theta)
            spread = max(probe) - min(probe)
            slack = safety * (spread + 1e-15) / 2
            if min(probe) > slack:
                positives.append(cell)
            elif max(probe) < -slack:
                negatives.append(cell)
            else:
                mixed.append(cell)
    if not mixed and not negatives:
        return ComponentExit(ci, "sphere", True, False, (), min(all_vals))
    if not mixed and not positives:
        return ComponentExit(ci, "sphere", False, True, (), min(-v for v in all_vals))
    if len(mixed) > (n_phi * n_theta) // 2:
        raise CertificationError(
            "the sphere exit-height sign is ambiguous on most cells"
        )
    pieces = tuple(
        ExitRectangle(ci, lo, hi, min(height(lo[0], lo[1]), height(hi[0], hi[1])))
        for lo, hi in positives
    )
    return ComponentExit(
        ci,
        "sphere",
        False,
        False,
        pieces,
        min((p.interior_margin for p in pieces), default=math.inf),
        undecided=tuple(mixed),
    )


# --- boundary index -------------------------------------------------------------


def _wrap(delta, period):
    half = period / 2
    d = math.fmod(delta, period)
    if d > half:
        d -= period
    elif d <= -half:
        d += period
    return d


def boundary_index(
    f,
    domain: Domain,
    exit_set: ExitSet,
    retraction: Retraction | None = None,
    *,
    samples: int = 600,
    sphere_samples: int = 4000,
    safety: float = 2.0,
) -> tuple:
    """Fixed point index of (retraction after f) restricted to the exit set,
    computed in the boundary manifold.  Returns (total, per-point data)."""
    fn, _ = _as_callable(f)
    r = retraction or Retraction(domain)
    total = 0
    details = []
    components = domain.boundary_components()
    for comp_exit in exit_set.components:
        comp = components[comp_exit.component]
        if comp_exit.empty:
            continue
        if isinstance(comp, BoundaryPoints):
            for pi in comp_exit.pieces:
                p = comp.points[pi]
                q = r(fn(p))
                dist_own = _norm([a - b for a, b in zip(q, p)])
                others = [
                    _norm([a - b for a, b in zip(q, other)])
                    for k, other in enumerate(comp.points)
                    if k != pi
                ]
                gap = min(others) if others else math.inf
                tol = 1e-7 * domain.diameter
                if dist_own < tol:
                    total += 1
                    details.append({"component": comp_exit.component, "point": list(p), "index": 1})
                elif gap < tol:
                    continue  # maps to the other endpoint: not a fixed point
                elif dist_own < gap:
                    raise CertificationError(
                        "an endpoint image is neither clearly fixed nor clearly moved"
                    )
            continue
        if isinstance(comp, BoundaryLoop):
            idx, zeros = _loop_boundary_index(
                fn, domain, comp, comp_exit, r, samples=samples, safety=safety
            )
            total += idx
            details.extend(zeros)
            continue
        if isinstance(comp, BoundarySphere):
            idx, zeros = _sphere_boundary_index(
                fn, domain, comp, comp_exit, r, samples=sphere_samples, safety=safety
            )
            total += idx
            details.extend(zeros)
            continue
    return total, details


def _loop_boundary_index(fn, domain, comp: BoundaryLoop, comp_exit, r, *, samples, safety):
    period = comp.period
    gap_tol = 0.05 * domain.diameter

    def delta(s):
        x = comp.embed(s % period)
        q = r(fn(x))
        if comp.dist_to(q) > gap_tol:
            return None  # image lies on a different boundary component
        t = comp.param_of(q)
        return _wrap(s % period - t, period)

    if comp_exit.full:
        segments = [(0.0, period)]
        periodic = period
    else:
        eta = 1e-6 * period
        segments = [(p.lo + eta, p.hi - eta) for p in comp_exit.pieces]
        periodic = None
    total, zeros, margin = scalar_zero_indices(
        delta,
        segments,
        samples=samples,
        wrap_half=period / 4,
        safety=safety,
        periodic_period=periodic,
    )
    for s, _ in zeros:
        for corner in comp.corner_params:
            if abs(_wrap(s - corner, period)) < 1e-6 * period:
                raise CertificationError(
                    "a boundary fixed point sits at a box corner; "
                    "corner points are excluded from index computations"
                )
    detail = [
        {
            "component": comp_exit.component,
            "point": [round(v, 12) for v in comp.embed(s % period)],
            "index": idx,
        }
        for s, idx in zeros
        if idx != 0
    ]
    return total, detail


def _tangent_frame(p, center):
    """Orthonormal frame spanning the tangent plane of a sphere at p."""
    nrm = [a - b for a, b in zip(p, center)]
    n = _norm(nrm)
    nrm = [v / n for v in nrm]
    pick = (1.0, 0.0, 0.0) if abs(nrm[0]) < 0.9 else (0.0, 1.0, 0.0)
    e1 = [
        pick[1] * nrm[2] - pick[2] * nrm[1],
        pick[2] * nrm[0] - pick[0] * nrm[2],
        pick[0] * nrm[1] - pick[1] * nrm[0],
    ]
    n1 = _norm(e1)
    e1 = [v / n1 for v in e1]
    e2 = [
        nrm[1] * e1[2] - nrm[2] * e1[1],
        nrm[2] * e1[0] - nrm[0] * e1[2],
        nrm[0] * e1[1] - nrm[1] * e1[0],
    ]
    return nrm, e1, e2


def _sphere_boundary_index(fn, domain, comp: BoundarySphere, comp_exit, r, *, samples, safety):
    R = comp.radius
    center = comp.center
    gap_tol = 0.05 * domain.diameter

    def rf(x):
        return r(fn(x))

    def on_component(q):
        return abs(_norm([a - b for a, b in zip(q, center)]) - R) <= gap_tol

    if comp_exit.full:
        def in_exit(x):
            return True
    else:
        rects = [(p.lo, p.hi) for p in comp_exit.pieces]

        def in_exit(x):
            rel = [a - b for a, b in zip(x, center)]
            theta = math.acos(max(-1.0, min(1.0, rel[2] / R)))
            phi = math.atan2(rel[1], rel[0]) % (2 * math.pi)
            return any(
                lo[0] <= phi <= hi[0] and lo[1] <= theta <= hi[1] for lo, hi in rects
            )

    pts = [p for p in _fibonacci_sphere(center, R, samples) if in_exit(p)]
    disp = []
    for p in pts:
        q = rf(p)
        if on_component(q):
            disp.append(_norm([a - b for a, b in zip(q, p)]))
        else:
            disp.append(math.inf)
    mesh = _component_mesh(comp, samples)
    finite = [d for d in disp if d < math.inf]
    if not finite:
        return 0, []
    # difference quotients over true chord lengths; spiral indices differing
    # by Fibonacci numbers give near-neighbor pairs, small strides give
    # long-range pairs
    lip = 0.0
    for stride in (1, 21, 34, 55):
        for k in range(0, len(pts) - stride, max(1, stride // 3)):
            d1, d2 = disp[k], disp[k + stride]
            if d1 is math.inf or d2 is math.inf or d1 == math.inf or d2 == math.inf:
                continue
            chord = _norm([a - b for a, b in zip(pts[k], pts[k + stride])])
            if chord > 0:
                lip = max(lip, abs(d2 - d1) / chord)
    thr = safety * lip * mesh

    candidates = [p for p, d in zip(pts, disp) if d < thr]
    clusters = []
    for p in candidates:
        for cl in clusters:
            if _norm([a - b for a, b in zip(p, cl[0])]) < 4 * mesh:
                cl.append(p)
                break
        else:
            clusters.append([p])

    fixed_points = []
    for cl in clusters:
        seed = tuple(
            sum(p[i] for p in cl) / len(cl) for i in range(3)
        )
        root = _sphere_newton(rf, center, R, seed)
        if root is None:
            raise CertificationError(
                "a boundary displacement minimum did not converge to a fixed point"
            )
        for existing in fixed_points:
            if _norm([a - b for a, b in zip(existing, root)]) < 2 * mesh:
                break
        else:
            if in_exit(root):
                fixed_points.append(root)

    sep = math.inf
    for i, a in enumerate(fixed_points):
        for b in fixed_points[i + 1 :]:
            sep = min(sep, _norm([x - y for x, y in zip(a, b)]))
    rho = min(0.4 * R, sep / 3)

    # certify no further fixed points outside the enclosure caps
    for p, d in zip(pts, disp):
        if d >= math.inf:
            continue
        if all(_norm([a - b for a, b in zip(p, q)]) > rho - mesh for q in fixed_points):
            if d <= thr:
                raise DegenerateFixedSetError(
                    "small sphere displacement away from located fixed points"
                )

    total = 0
    details = []
    for p in fixed_points:
        idx = _sphere_local_index(rf, center, R, p, rho)
        total += idx
        details.append({"component": comp_exit.component, "point": list(p), "index": idx})
    return total, details


def _sphere_newton(rf, center, R, seed, max_iter=60):
    nrm, e1, e2 = _tangent_frame(seed, center)
    base = seed

    def chart(u):
        raw = [
            base[i] + u[0] * e1[i] + u[1] * e2[i] for i in range(3)
        ]
        rel = [raw[i] - center[i] for i in range(3)]
        n = _norm(rel)
        return tuple(center[i] + rel[i] * R / n for i in range(3))

    def chart_inv(q):
        rel = [q[i] - center[i] for i in range(3)]
        denom = sum(rel[i] * nrm[i] for i in range(3))
        if denom <= 1e-12 * R:
            return None
        scale = sum((base[i] - center[i]) * nrm[i] for i in range(3)) / denom
        proj = [center[i] + rel[i] * scale for i in range(3)]
        return (
            sum((proj[i] - base[i]) * e1[i] for i in range(3)),
            sum((proj[i] - base[i]) * e2[i] for i in range(3)),
        )

    def disp(u):
        q = rf(chart(u))
        v = chart_inv(q)
        if v is None:
            return None
        return (u[0] - v[0], u[1] - v[1])

    u = (0.0, 0.0)
    g = disp(u)
    if g is None:
        return None
    res = _norm(g)
    for _ in range(max_iter):
        if res < 1e-11 * R:
            return chart(u)
        J = _fd_jacobian(lambda p: disp(p) or (math.nan, math.nan), u, R)
        step = _solve(J, list(g))
        if step is None:
            return None
        t = 1.0
        improved = False
        for _ in range(8):
            cand = (u[0] - t * step[0], u[1] - t * step[1])
            gc = disp(cand)
            if gc is not None and _norm(gc) < res:
                u, g, res = cand, gc, _norm(gc)
                improved = True
                break
            t /= 2
        if not improved:
            return None
    return chart(u) if res < 1e-9 * R else None


def _sphere_local_index(rf, center, R, point, rho):
    nrm, e1, e2 = _tangent_frame(point, center)

    def chart(u):
        raw = [point[i] + u[0] * e1[i] + u[1] * e2[i] for i in range(3)]
        rel = [raw[i] - center[i] for i in range(3)]
        n = _norm(rel)
        return tuple(center[i] + rel[i] * R / n for i in range(3))

    def chart_inv(q):
        rel = [q[i] - center[i] for i in range(3)]
        denom = sum(rel[i] * nrm[i] for i in range(3))
        if denom <= 1e-12 * R:
            raise CertificationError("a boundary image left the chart hemisphere")
        scale = sum((point[i] - center[i]) * nrm[i] for i in range(3)) / denom
        proj = [center[i] + rel[i] * scale for i in range(3)]
        return (
            sum((proj[i] - point[i]) * e1[i] for i in range(3)),
            sum((proj[i] - point[i]) * e2[i] for i in range(3)),
        )

    def disp(u):
        v = chart_inv(rf(chart(u)))
        return (u[0] - v[0], u[1] - v[1])

    rho_u = min(rho, 0.5 * R)
    cert = pl_degree(disp, BallRegion((0.0, 0.0), rho_u), (0.0, 0.0), grid=12)
    return cert.degree


def boundary_profile(f, domain: Domain, retraction: Retraction | None = None, samples: int = 360):
    """Sampled exit-height and displacement profiles per boundary component,
    for CSV export."""
    fn, _ = _as_callable(f)
    r = retraction or Retraction(domain)
    rows = []
    for ci, comp in enumerate(domain.boundary_components()):
        if isinstance(comp, BoundaryPoints):
            for pi, p in enumerate(comp.points):
                v = fn(p)
                q = r(v)
                rows.append(
                    (ci, float(pi), domain.signed_exterior(v), _norm([a - b for a, b in zip(q, p)]))
                )
            continue
        if isinstance(comp, BoundaryLoop):
            for k in range(samples):
                s = comp.period * k / samples
                x = comp.embed(s)
                v = fn(x)
                q = r(v)
                t = comp.param_of(q)
                rows.append(
                    (ci, s, domain.signed_exterior(v), _wrap(s - t, comp.period))
                )
            continue
        for k in range(samples):
            theta = math.pi * (k + 0.5) / samples
            x = _sphere_point(comp, 0.0, theta)
            v = fn(x)
            q = r(v)
            rows.append(
                (ci, theta, domain.signed_exterior(v), _norm([a - b for a, b in zip(q, x)]))
            )
    return rows
