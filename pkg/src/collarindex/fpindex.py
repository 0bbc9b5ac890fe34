"""Fixed point indices of maps on catalog regions.

The index of f over an open region U is the degree of the displacement
x - f(x) over U at zero.  The engine locates fixed points by damped Newton
iteration from a deterministic seed lattice, certifies that the
displacement is bounded away from zero outside small enclosures, computes
a local index per enclosure (winding in the plane, PL sign counting in
higher dimensions, a finite-difference Jacobian sign as a cross-check for
nondegenerate points), and confirms that the local indices add up to an
independently computed total degree.

Maps with non-isolated fixed point sets are rejected with
DegenerateFixedSetError rather than guessed at.  All entry points are pure
and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .degree import (
    DegreeCertificate,
    circle_loop,
    pl_degree,
    winding_degree,
    _as_callable,
)
from .errors import (
    CertificationError,
    DegenerateFixedSetError,
    InternalConsistencyError,
    OutOfCollarError,
)
from .regions import AnnulusRegion, BallRegion, BoxRegion, ProductRegion, Region, SectorRegion


# --- map plumbing ---------------------------------------------------------


class _Wrapped:
    """Callable with an exactness flag, so composites keep the fast paths."""

    __slots__ = ("fn", "exact")

    def __init__(self, fn, exact: bool):
        self.fn = fn
        self.exact = exact

    def __call__(self, p):
        return self.fn(p)


def displacement_map(f):
    """x - f(x); built symbolically for parsed maps so the compiled float
    path applies without wrapper layers."""
    if isinstance(f, MapExpr) and f.arity == f.codomain_dim:
        components = tuple(
            BinOp("-", Var(i + 1), c) for i, c in enumerate(f.components)
        )
        return MapExpr(components, f.arity)
    fn, exact = _as_callable(f)

    def g(p):
        v = fn(p)
        return tuple(a - b for a, b in zip(p, v))

    return _Wrapped(g, exact)


def compose(outer, inner):
    fo, eo = _as_callable(outer)
    fi, ei = _as_callable(inner)
    return _Wrapped(lambda p: fo(fi(p)), eo and ei)


def product_map(f, g, split: int):
    ff, ef = _as_callable(f)
    fg, eg = _as_callable(g)

    def h(p):
        return tuple(ff(p[:split])) + tuple(fg(p[split:]))

    return _Wrapped(h, ef and eg)


# --- numerics --------------------------------------------------------------


def _norm(v):
    return math.sqrt(sum(float(c) * float(c) for c in v))


def _fd_jacobian(fn, x, scale):
    dim = len(x)
    h = 1e-6 * max(scale, 1.0)
    J = []
    for i in range(dim):
        xp = list(x)
        xm = list(x)
        xp[i] += h
        xm[i] -= h
        fp = [float(v) for v in fn(tuple(xp))]
        fm = [float(v) for v in fn(tuple(xm))]
        J.append([(a - b) / (2 * h) for a, b in zip(fp, fm)])
    # J[i] currently holds the derivative along axis i; transpose to rows=output
    dim_out = len(J[0])
    return [[J[i][r] for i in range(dim)] for r in range(dim_out)]


def _det(M):
    n = len(M)
    M = [row[:] for row in M]
    det = 1.0
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[pivot][col]) == 0.0:
            return 0.0
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n):
                M[r][c] -= f * M[col][c]
    return det


def _solve(M, rhs):
    n = len(rhs)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(A[r][col]))
        if abs(A[pivot][col]) < 1e-300:
            return None
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
        p = A[col][col]
        for r in range(n):
            if r != col and A[r][col] != 0.0:
                f = A[r][col] / p
                for c in range(col, n + 1):
                    A[r][c] -= f * A[col][c]
    return [A[r][n] / A[r][r] for r in range(n)]


def _newton(fn, seed, scale, max_iter=50):
    x = [float(v) for v in seed]
    gx = [float(v) for v in fn(tuple(x))]
    res = _norm(gx)
    for _ in range(max_iter):
        if res <= 1e-12 * max(scale, 1.0):
            return tuple(x)
        J = _fd_jacobian(fn, x, scale)
        step = _solve(J, gx)
        if step is None:
            return None
        t = 1.0
        for _ in range(10):
            cand = [a - t * s for a, s in zip(x, step)]
            try:
                gc = [float(v) for v in fn(tuple(cand))]
            except Exception:
                t /= 2
                continue
            rc = _norm(gc)
            if rc < res:
                x, gx, res = cand, gc, rc
                break
            t /= 2
        else:
            return None
    return tuple(x) if res <= 1e-10 * max(scale, 1.0) else None


def _seed_lattice(region: Region, per_axis: int):
    lo, hi = region.bounding_box()
    axes = []
    for a, b in zip(lo, hi):
        fa, fb = float(a), float(b)
        axes.append([fa + (fb - fa) * (k + 0.5) / per_axis for k in range(per_axis)])
    out = []

    def rec(prefix, remaining):
        if not remaining:
            p = tuple(prefix)
            if region.contains(p):
                out.append(p)
            return
        for v in remaining[0]:
            rec(prefix + [v], remaining[1:])

    rec([], axes)
    return out


def _frontier_mesh(region: Region, count: int) -> float:
    if isinstance(region, BallRegion):
        r = float(region.radius)
        if region.dim == 1:
            return 0.0
        if region.dim == 2:
            return 2 * math.pi * r / count
        return 2.6 * math.sqrt(4 * math.pi * r * r / count)
    if isinstance(region, AnnulusRegion):
        r = float(region.outer)
        if region.dim == 2:
            return 2 * math.pi * r / max(1, count // 2)
        return 2.6 * math.sqrt(4 * math.pi * r * r / max(1, count // 2))
    if isinstance(region, BoxRegion):
        if region.dim == 1:
            return 0.0
        sides = [float(b) - float(a) for a, b in zip(region.lower, region.upper)]
        per_face = max(2, count // (2 * region.dim))
        if region.dim == 2:
            return max(sides) / per_face
        return max(sides) / max(2, int(math.sqrt(per_face)))
    if isinstance(region, SectorRegion):
        return 2 * math.pi * region.outer / max(4, count // 4)
    # conservative generic estimate
    d = max(1, region.dim - 1)
    return 4.0 * region.diameter / (count ** (1.0 / d))


_FRONTIER_SAMPLES = {1: 2, 2: 512, 3: 3000, 4: 4000}


def certify_nonvanishing_on_frontier(
    g, region: Region, *, samples: int | None = None, safety: float = 2.0
) -> float:
    """Positive lower bound for |g| on the region frontier, or
    CertificationError.  Sampled minimum minus Lipschitz-estimate slack."""
    fn, _ = _as_callable(g)
    samples = samples or _FRONTIER_SAMPLES.get(region.dim, 512)
    pts = region.frontier_samples(samples)
    if not pts:
        return math.inf
    vals = [tuple(float(c) for c in fn(p)) for p in pts]
    m = min(_norm(v) for v in vals)
    mesh = _frontier_mesh(region, samples)
    lip = 0.0
    if mesh > 0:
        # difference quotients over true pair distances; small and
        # Fibonacci strides pick up both broad and neighbor-scale variation
        for stride in (1, 2, 21, 34):
            for k in range(0, len(pts) - stride, max(1, stride // 2)):
                dp = _norm([a - b for a, b in zip(pts[k], pts[k + stride])])
                if dp <= 0:
                    continue
                dv = _norm([a - b for a, b in zip(vals[k], vals[k + stride])])
                lip = max(lip, dv / dp)
    margin = m - safety * lip * mesh / 2
    if not margin > 0:
        raise CertificationError(
            f"nonvanishing on the frontier not certified "
            f"(sampled minimum {m:.3e}, slack {safety * lip * mesh / 2:.3e})"
        )
    return margin


# --- result types -----------------------------------------------------------


@dataclass(frozen=True)
class LocatedFixedPoint:
    point: tuple
    enclosure_radius: float
    index: int
    certificate: DegreeCertificate


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple
    certified_empty: bool
    exclusion_margin: float


@dataclass(frozen=True)
class IndexResult:
    total: int
    fixed_points: FixedPointSet
    total_certificate: DegreeCertificate
    frontier_margin: float

    def certificates(self) -> list:
        certs = [self.total_certificate.summary()]
        certs.extend(p.certificate.summary() for p in self.fixed_points.points)
        return certs


# --- zero location and local degrees ------------------------------------------


def _locate_zeros(fn, region: Region, *, seeds_per_axis: int, max_points: int = 24):
    scale = region.diameter
    seeds = _seed_lattice(region, seeds_per_axis)
    roots = []
    for seed in seeds:
        root = _newton(fn, seed, scale)
        if root is None or not region.contains(root):
            continue
        for r in roots:
            if _norm([a - b for a, b in zip(r, root)]) < 1e-6 * scale:
                break
        else:
            roots.append(root)
    if len(roots) > max_points:
        raise DegenerateFixedSetError(
            f"{len(roots)} distinct zeros located; the zero set does not look isolated"
        )
    for i, a in enumerate(roots):
        for b in roots[i + 1 :]:
            if _norm([p - q for p, q in zip(a, b)]) < 1e-4 * scale:
                raise DegenerateFixedSetError(
                    "two located zeros nearly coincide; isolation cannot be certified"
                )
    return roots


def _local_degree(fn, exact_flag, point, radius, dim, *, grid=8) -> DegreeCertificate:
    if dim == 1:
        a = float(fn((point[0] - radius,))[0])
        b = float(fn((point[0] + radius,))[0])
        if a == 0.0 or b == 0.0:
            raise CertificationError("displacement vanishes at an enclosure endpoint")
        degree = (int(math.copysign(1, b)) - int(math.copysign(1, a))) // 2
        return DegreeCertificate(degree, PL_SIGN_1D, 0, min(abs(a), abs(b)))
    if dim == 2:
        return winding_degree(_Wrapped(fn, exact_flag), circle_loop(point, radius))
    return pl_degree(
        _Wrapped(fn, exact_flag),
        BallRegion(point, radius),
        tuple(0 for _ in range(dim)),
        grid=grid,
        max_refine=2,
    )


PL_SIGN_1D = "pl-sign"


def _isolation_margin(fn, region: Region, enclosures, *, per_axis: int, safety=2.0) -> float:
    """Certified positive lower bound for |g| on the region minus the
    enclosure balls.

    A cell-center lattice covers the region up to half a cell diagonal;
    each kept center contributes its sampled value minus a local
    finite-difference Lipschitz slack.  Retries once on a doubled lattice
    before giving up.  The band within one lattice cell of the frontier is
    covered by the separate frontier certificate.
    """
    dim = region.dim
    lo_bb, hi_bb = region.bounding_box()
    last_reason = "no lattice points found"
    for attempt in range(3):
        n = per_axis * (2**attempt)
        steps = [(float(b) - float(a)) / n for a, b in zip(lo_bb, hi_bb)]
        coverage = _norm(steps) / 2
        values = {}
        for idx in _lattice_indices(n, dim):
            p = tuple(float(a) + s * (i + 0.5) for a, s, i in zip(lo_bb, steps, idx))
            if region.contains(p):
                values[idx] = (p, tuple(float(v) for v in fn(p)))
        margin = math.inf
        ok = True
        for idx, (p, v) in values.items():
            if any(
                _norm([a - b for a, b in zip(p, c)]) <= rho - coverage
                for c, rho in enclosures
            ):
                continue  # deep inside an enclosure: excluded from the claim
            local_lip = 0.0
            for axis in range(dim):
                for delta in (-1, 1):
                    nidx = tuple(i + (delta if k == axis else 0) for k, i in enumerate(idx))
                    other = values.get(nidx)
                    if other is not None:
                        diff = _norm([a - b for a, b in zip(v, other[1])])
                        local_lip = max(local_lip, diff / steps[axis])
            slack = safety * local_lip * coverage
            m_here = _norm(v) - slack
            if m_here < margin:
                margin = m_here
            if m_here <= 0:
                ok = False
                last_reason = (
                    f"lattice point {tuple(round(c, 4) for c in p)} has displacement "
                    f"{_norm(v):.3e} below the local slack {slack:.3e}"
                )
                break
        if ok and values:
            return margin if margin < math.inf else math.inf
    raise CertificationError(
        f"displacement is not certified nonzero outside the located enclosures: {last_reason}"
    )


def _lattice_indices(n, dim):
    import itertools

    return itertools.product(range(n), repeat=dim)


def zero_index(
    g,
    region: Region,
    *,
    seeds_per_axis: int | None = None,
    isolation_per_axis: int | None = None,
    grid: int | None = None,
    frontier_samples: int | None = None,
    locate: bool = True,
) -> IndexResult:
    """Total degree of g over the region at zero, with per-zero local data.

    Precondition (certified): g does not vanish on the region frontier.
    """
    fn, exact = _as_callable(g)
    dim = region.dim
    target = tuple(0 for _ in range(dim))
    frontier_margin = certify_nonvanishing_on_frontier(g, region, samples=frontier_samples)
    total_cert = pl_degree(g, region, target, grid=grid)

    if not locate:
        fps = FixedPointSet((), certified_empty=False, exclusion_margin=0.0)
        return IndexResult(total_cert.degree, fps, total_cert, frontier_margin)

    defaults = {1: 64, 2: 12, 3: 6, 4: 5}
    spa = seeds_per_axis or defaults.get(dim, 5)
    roots = _locate_zeros(fn, region, seeds_per_axis=spa)

    scale = region.diameter
    located = []
    enclosures = []
    for root in roots:
        nearest_other = min(
            (_norm([a - b for a, b in zip(root, other)]) for other in roots if other is not root),
            default=math.inf,
        )
        rho = min(nearest_other / 3, 0.7 * region.interior_margin(root), 0.3 * scale)
        rho = max(rho, 1e-3 * scale)
        enclosures.append((root, rho))

    iso_defaults = {1: 256, 2: 40, 3: 14, 4: 8}
    ipa = isolation_per_axis or iso_defaults.get(dim, 6)
    if roots:
        margin = _isolation_margin(fn, region, enclosures, per_axis=ipa)
    else:
        margin = _isolation_margin(fn, region, (), per_axis=ipa)

    for root, rho in enclosures:
        cert = _local_degree(fn, exact, root, rho, dim)
        # cross-check nondegenerate zeros against the Jacobian sign
        J = _fd_jacobian(fn, root, scale)
        det = _det(J)
        if abs(det) > 1e-5 * max(1.0, scale) ** dim:
            jac_sign = 1 if det > 0 else -1
            if jac_sign != cert.degree:
                raise InternalConsistencyError(
                    f"local degree {cert.degree} contradicts Jacobian sign {jac_sign} at {root}"
                )
        located.append(LocatedFixedPoint(root, rho, cert.degree, cert))

    local_sum = sum(p.index for p in located)
    if local_sum != total_cert.degree:
        raise InternalConsistencyError(
            f"local indices sum to {local_sum} but the total degree is {total_cert.degree}"
        )
    fps = FixedPointSet(tuple(located), certified_empty=not located, exclusion_margin=margin)
    return IndexResult(total_cert.degree, fps, total_cert, frontier_margin)


# --- public operations ---------------------------------------------------------


def fixed_point_index(
    f,
    region: Region,
    *,
    domain=None,
    locate: bool = True,
    grid: int | None = None,
    seeds_per_axis: int | None = None,
    isolation_per_axis: int | None = None,
    frontier_samples: int | None = None,
    escape_samples: int = 600,
) -> IndexResult:
    """Fixed point index of f over the region: degree of x - f(x) at zero.

    When a collared domain is supplied the image is checked to stay inside
    the collared model on a sample lattice (a map that escapes the collar
    makes the scenario invalid)."""
    if domain is not None:
        fn, _ = _as_callable(f)
        w = float(domain.collar_width)
        worst = -math.inf
        for p in domain.interior_samples(escape_samples):
            worst = max(worst, domain.signed_exterior(fn(p)))
        if worst > w * (1 - 1e-9):
            raise OutOfCollarError(
                f"map image reaches exterior height {worst:.6g} of the collar width {w:.6g}"
            )
    g = displacement_map(f)
    return zero_index(
        g,
        region,
        seeds_per_axis=seeds_per_axis,
        isolation_per_axis=isolation_per_axis,
        grid=grid,
        frontier_samples=frontier_samples,
        locate=locate,
    )


def local_index(f, point, radius) -> int:
    """Index of an isolated fixed point of f enclosed by the given ball."""
    g = displacement_map(f)
    dim = len(point)
    cert = _local_degree(g, g.exact, tuple(float(v) for v in point), float(radius), dim)
    return cert.degree


def product_index(f, f_prime, region: Region, region_prime: Region) -> int:
    """Index of the product map on the product region, computed directly and
    as the product of factor indices; returns only on agreement."""
    r_f = fixed_point_index(f, region, locate=False)
    r_g = fixed_point_index(f_prime, region_prime, locate=False)
    h = product_map(f, f_prime, region.dim)
    prod_region = ProductRegion(region, region_prime)
    direct = fixed_point_index(h, prod_region, locate=False, frontier_samples=1200)
    if direct.total != r_f.total * r_g.total:
        raise InternalConsistencyError(
            f"product index {direct.total} differs from factor product "
            f"{r_f.total} * {r_g.total}"
        )
    return direct.total


def certify_homotopy(f0, f1, region: Region, *, s_steps: int = 21, samples: int = 400, safety: float = 2.0) -> float:
    """Certified margin that the straight-line homotopy from f0 to f1 has no
    fixed points on the region frontier for any time."""
    fn0, _ = _as_callable(f0)
    fn1, _ = _as_callable(f1)
    pts = region.frontier_samples(samples)
    v0 = [tuple(float(c) for c in fn0(p)) for p in pts]
    v1 = [tuple(float(c) for c in fn1(p)) for p in pts]
    mesh = _frontier_mesh(region, samples)
    ds = 1.0 / (s_steps - 1)
    m = math.inf
    max_sdiff = 0.0
    lip = 0.0
    for a, b in zip(v0, v1):
        max_sdiff = max(max_sdiff, _norm([y - x for x, y in zip(a, b)]))
    for k in range(s_steps):
        s = k * ds
        disp = []
        for p, a, b in zip(pts, v0, v1):
            h = [(1 - s) * x + s * y for x, y in zip(a, b)]
            d = [pc - hc for pc, hc in zip(p, h)]
            disp.append(d)
            m = min(m, _norm(d))
        if mesh > 0:
            for d1, d2, p1, p2 in zip(disp, disp[1:], pts, pts[1:]):
                dp = _norm([x - y for x, y in zip(p1, p2)])
                if 0 < dp < 4 * mesh:
                    lip = max(lip, _norm([x - y for x, y in zip(d1, d2)]) / dp)
    margin = m - safety * (lip * mesh / 2 + max_sdiff * ds / 2)
    if not margin > 0:
        raise CertificationError(
            "the homotopy may have a fixed point on the region frontier"
        )
    return margin


def homotopy_invariance_check(f0, f1, region: Region, *, s_steps: int = 21) -> bool:
    """True iff the certified homotopy endpoints have equal indices.

    Raises CertificationError (inconclusive) when the frontier condition
    cannot be certified; a False return from certified inputs would be a
    genuine violation."""
    certify_homotopy(f0, f1, region, s_steps=s_steps)
    i0 = fixed_point_index(f0, region, locate=False)
    i1 = fixed_point_index(f1, region, locate=False)
    return i0.total == i1.total


def commutativity_check(f, g, region_gf: Region, region_fg: Region) -> bool:
    """True iff the two composites g(f(x)) and f(g(x)) have equal indices
    over their respective regions (certified)."""
    gf = compose(g, f)
    fg = compose(f, g)
    i_gf = fixed_point_index(gf, region_gf, locate=False)
    i_fg = fixed_point_index(fg, region_fg, locate=False)
    return i_gf.total == i_fg.total
