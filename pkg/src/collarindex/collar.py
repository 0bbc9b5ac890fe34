"""The index identities on collared domains, verified end to end.

Each verifier assembles independently computed integers and checks an
exact identity between them:

* ``verify_index_identity``: interior index + boundary index on the exit
  set = Lefschetz number of the retracted map.
* ``verify_full_exit_identity``: when the whole boundary exits, the
  interior index equals L(rf) - L(rf restricted to the boundary).
* ``verify_contraction_identity``: when nothing exits, the interior index
  equals L(rf).
* ``verify_euler_identity``: when rf is homotopic to the identity, the sum
  of interior and boundary indices equals the Euler characteristic read
  off an independent simplicial model.
* ``verify_ball_exteriority``: on balls, either the boundary image stays
  inside (then a fixed point must exist) or it stays strictly outside
  (then the interior index equals the signed boundary-map degree).
* ``verify_thin_band_identity``: the boundary index equals an
  n-dimensional index computed on a thin collar band, via the composite
  map f-after-retraction.

A verifier returns PASS only when every certificate succeeded and the
integers agree; FAIL only when every certificate succeeded and they do
not (a genuine counterexample claim); INCONCLUSIVE whenever any
certificate could not be established.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .boundary import ExitSet, boundary_exit_set, boundary_index
from .degree import circle_loop, pl_degree, winding_degree, _as_callable
from .domains import (
    AnnulusDomain,
    BallDomain,
    BoundaryLoop,
    BoundaryPoints,
    BoundarySphere,
    BoxDomain,
    Domain,
    Retraction,
    ShellDomain,
    builtin_retractions,
)
from .errors import CertificationError, CollarIndexError, InternalConsistencyError
from .fpindex import _Wrapped, _norm, compose, fixed_point_index
from .homology import euler_characteristic, simplicial_model_for
from .regions import AnnulusRegion, BallRegion, SectorRegion, UnionRegion

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    outcome: str
    summands: dict = field(default_factory=dict)
    residual: int | None = None
    details: dict = field(default_factory=dict)
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "outcome": self.outcome,
            "summands": dict(self.summands),
            "residual": self.residual,
            "details": self.details,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Budgets:
    boundary_samples: int = 720
    sphere_grid: tuple = (32, 16)
    sphere_samples: int = 4000
    escape_samples: int = 600
    grid: int | None = None
    seeds_per_axis: int | None = None
    isolation_per_axis: int | None = None
    frontier_samples: int | None = None
    core_samples: int = 512
    frontier_margin: float = 1e-7

    @staticmethod
    def from_dict(d: dict | None) -> "Budgets":
        if not d:
            return Budgets()
        known = {f: d[f] for f in d if f in Budgets.__dataclass_fields__}
        if "sphere_grid" in known:
            known["sphere_grid"] = tuple(known["sphere_grid"])
        return Budgets(**known)


def _inconclusive(kind, err, partial=None):
    return VerificationReport(
        kind=kind,
        outcome=INCONCLUSIVE,
        summands=partial or {},
        residual=None,
        reason=f"{type(err).__name__}: {err}",
    )


def certify_image_in_collar(f, domain: Domain, samples: int = 600) -> float:
    """Margin by which f(M) stays inside the collared model, sampled over an
    interior lattice (boundary behavior is certified by the exit set)."""
    fn, _ = _as_callable(f)
    w = float(domain.collar_width)
    worst = -math.inf
    for p in domain.interior_samples(samples):
        worst = max(worst, domain.signed_exterior(fn(p)))
    margin = w - worst
    if not margin > 1e-9 * w:
        raise CertificationError(
            f"the interior image reaches exterior height {worst:.6g} of collar width {w:.6g}"
        )
    return margin


# --- Lefschetz numbers of retracted maps ---------------------------------------


def _retracted(f, domain, retraction: Retraction | None):
    r = retraction or Retraction(domain)
    fn, _ = _as_callable(f)
    return _Wrapped(lambda p: r(fn(p)), False), r


def lefschetz_of_retracted(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    *,
    core_samples: int = 512,
    escape_samples: int = 600,
) -> int:
    """L of (retraction after f) as a self-map of M, read from the domain's
    homology recipe; annular domains need the degree of the core generator
    image, certified by the winding/PL engines."""
    recipe = domain.homology_recipe()
    certify_image_in_collar(f, domain, escape_samples)
    if recipe.contractible:
        return recipe.lefschetz()
    rf, _ = _retracted(f, domain, retraction)
    center = recipe.generator_center
    rad = recipe.generator_radius
    if domain.dim == 2:
        def displaced(p):
            q = rf(p)
            return (q[0] - center[0], q[1] - center[1])

        cert = winding_degree(displaced, circle_loop(center, rad), initial_samples=core_samples)
        return recipe.lefschetz(cert.degree)
    # shell: degree of the normalized core-sphere image via the
    # positively-homogeneous extension, counted by the PL engine
    def extension(x):
        r_x = _norm(x)
        if r_x == 0:
            return (0.0, 0.0, 0.0)
        u = [center[i] + rad * x[i] / r_x for i in range(3)]
        q = rf(tuple(u))
        rel = [q[i] - center[i] for i in range(3)]
        n = _norm(rel)
        if n == 0:
            raise CertificationError("the core-sphere image passes through the hole center")
        return tuple(r_x * rel[i] / n for i in range(3))

    cert = pl_degree(extension, BallRegion((0.0, 0.0, 0.0), 1.0), (0.0, 0.0, 0.0), grid=10)
    return recipe.lefschetz(cert.degree)


def _component_images(fn, r, domain: Domain, samples: int = 48):
    """Which boundary component each component lands on under rf (requires a
    full-exit scenario); CertificationError when a component's image is not
    clearly a single component."""
    comps = domain.boundary_components()

    def nearest_component(q):
        best = None
        for k, comp in enumerate(comps):
            if isinstance(comp, BoundaryPoints):
                d = min(_norm([a - b for a, b in zip(q, p)]) for p in comp.points)
            elif isinstance(comp, BoundaryLoop):
                d = comp.dist_to(q)
            else:
                d = abs(_norm([a - b for a, b in zip(q, comp.center)]) - comp.radius)
            if best is None or d < best[1]:
                best = (k, d)
        return best

    mapping = {}
    for ci, comp in enumerate(comps):
        if isinstance(comp, BoundaryPoints):
            pts = list(comp.points)
        elif isinstance(comp, BoundaryLoop):
            pts = [comp.embed(comp.period * k / samples) for k in range(samples)]
        else:
            from .boundary import _fibonacci_sphere

            pts = _fibonacci_sphere(comp.center, comp.radius, samples)
        images = set()
        for p in pts:
            k, d = nearest_component(r(fn(p)))
            if d > 0.05 * domain.diameter:
                raise CertificationError(
                    "a retracted boundary image does not lie on the boundary"
                )
            images.add(k)
        if len(images) != 1:
            raise CertificationError(
                f"boundary component {ci} maps across several components"
            )
        mapping[ci] = images.pop()
    return mapping


def boundary_lefschetz(
    f, domain: Domain, retraction: Retraction | None = None, *, samples: int = 512
) -> int:
    """L of rf restricted to the boundary manifold (full-exit scenarios):
    identity trace on the components fixed by the induced permutation plus
    the top-degree traces of the self-mapped components."""
    fn, _ = _as_callable(f)
    r = retraction or Retraction(domain)
    comps = domain.boundary_components()
    mapping = _component_images(fn, r, domain)
    total = 0
    for ci, comp in enumerate(comps):
        if mapping[ci] != ci:
            continue
        if isinstance(comp, BoundaryPoints):
            for p in comp.points:
                q = r(fn(p))
                if _norm([a - b for a, b in zip(q, p)]) < 1e-7 * domain.diameter:
                    total += 1
            continue
        if isinstance(comp, BoundaryLoop):
            center = _loop_center(comp)

            def displaced(p, r=r, fn=fn, center=center):
                q = r(fn(p))
                return (q[0] - center[0], q[1] - center[1])

            loop = _loop_spec(comp)
            deg = winding_degree(displaced, loop, initial_samples=samples).degree
            total += 1 - deg
            continue
        if isinstance(comp, BoundarySphere):
            def extension(x, comp=comp, r=r, fn=fn):
                r_x = _norm(x)
                if r_x == 0:
                    return (0.0, 0.0, 0.0)
                u = [comp.center[i] + comp.radius * x[i] / r_x for i in range(3)]
                q = r(fn(tuple(u)))
                rel = [q[i] - comp.center[i] for i in range(3)]
                n = _norm(rel)
                if n == 0:
                    raise CertificationError("a boundary image hit the sphere center")
                return tuple(r_x * rel[i] / n for i in range(3))

            deg = pl_degree(
                extension, BallRegion((0.0, 0.0, 0.0), 1.0), (0.0, 0.0, 0.0), grid=10
            ).degree
            total += 1 + deg
    return total


def _loop_center(comp: BoundaryLoop):
    # centroid of the embedded loop; inside it for the catalog shapes
    n = 256
    xs = [comp.embed(comp.period * k / n) for k in range(n)]
    return (
        sum(x[0] for x in xs) / n,
        sum(x[1] for x in xs) / n,
    )


def _loop_spec(comp: BoundaryLoop):
    from .degree import LoopSpec

    return LoopSpec(0.0, comp.period, lambda s: comp.embed(s % comp.period))


# --- the main identity -----------------------------------------------------------


def verify_index_identity(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """Interior index + exit-set boundary index = L(rf), as exact integers."""
    b = budgets or Budgets()
    kind = "theorem"
    summands = {}
    try:
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        i_f = fixed_point_index(
            f,
            domain.interior_region(),
            domain=domain,
            grid=b.grid,
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            frontier_samples=b.frontier_samples,
            escape_samples=b.escape_samples,
        )
        summands["I_f"] = i_f.total
        i_b, boundary_points = boundary_index(
            f,
            domain,
            exit_set,
            retraction,
            samples=b.boundary_samples,
            sphere_samples=b.sphere_samples,
        )
        summands["I_boundary"] = i_b
        l_rf = lefschetz_of_retracted(
            f, domain, retraction, core_samples=b.core_samples, escape_samples=b.escape_samples
        )
        summands["L_rf"] = l_rf
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_f"] + summands["I_boundary"] - summands["L_rf"]
    return VerificationReport(
        kind=kind,
        outcome=PASS if residual == 0 else FAIL,
        summands=summands,
        residual=residual,
        details={
            "exit_set": exit_set.summary(),
            "interior_fixed_points": [
                {"point": [float(c) for c in p.point], "index": p.index}
                for p in i_f.fixed_points.points
            ],
            "boundary_fixed_points": boundary_points,
            "certificates": i_f.certificates(),
            "retraction": (retraction or Retraction(domain)).name,
        },
    )


def verify_full_exit_identity(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """When every boundary point exits, I_f = L(rf) - L(rf on the boundary)."""
    b = budgets or Budgets()
    kind = "corollary_2_2_4"
    summands = {}
    try:
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        if not all(c.full for c in exit_set.components):
            raise CertificationError(
                "the boundary does not exit everywhere; the full-exit identity does not apply"
            )
        i_f = fixed_point_index(
            f,
            domain.interior_region(),
            domain=domain,
            grid=b.grid,
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            frontier_samples=b.frontier_samples,
            escape_samples=b.escape_samples,
        )
        summands["I_f"] = i_f.total
        summands["L_rf"] = lefschetz_of_retracted(
            f, domain, retraction, core_samples=b.core_samples, escape_samples=b.escape_samples
        )
        summands["L_rf_boundary"] = boundary_lefschetz(
            f, domain, retraction, samples=b.core_samples
        )
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_f"] - (summands["L_rf"] - summands["L_rf_boundary"])
    return VerificationReport(
        kind=kind,
        outcome=PASS if residual == 0 else FAIL,
        summands=summands,
        residual=residual,
        details={"exit_set": exit_set.summary()},
    )


def verify_contraction_identity(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """When the boundary image stays strictly inside M, I_f = L(rf)."""
    b = budgets or Budgets()
    kind = "corollary_2_2_5"
    summands = {}
    try:
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        if not exit_set.is_empty:
            raise CertificationError(
                "the boundary image leaves M somewhere; the enclosed identity does not apply"
            )
        i_f = fixed_point_index(
            f,
            domain.interior_region(),
            domain=domain,
            grid=b.grid,
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            frontier_samples=b.frontier_samples,
            escape_samples=b.escape_samples,
        )
        summands["I_f"] = i_f.total
        summands["L_rf"] = lefschetz_of_retracted(
            f, domain, retraction, core_samples=b.core_samples, escape_samples=b.escape_samples
        )
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_f"] - summands["L_rf"]
    return VerificationReport(
        kind=kind,
        outcome=PASS if residual == 0 else FAIL,
        summands=summands,
        residual=residual,
        details={"exit_set": exit_set.summary()},
    )


def _certify_identity_homotopy(f, domain: Domain, retraction, samples: int = 300):
    """Certify that rf is homotopic to the identity of M.

    Convex domains use the straight segment (valid by convexity, sampled
    as a sanity check).  Annular domains interpolate radius and angle;
    this stays inside M provided the angular displacement never reaches a
    half turn and, in the plane, the core winding is one."""
    fn, _ = _as_callable(f)
    r = retraction or Retraction(domain)
    if isinstance(domain, (BallDomain, BoxDomain)):
        for p in domain.interior_samples(samples):
            q = r(fn(p))
            for k in range(1, 4):
                s = k / 4
                h = tuple((1 - s) * qq + s * pp for pp, qq in zip(p, q))
                if domain.signed_exterior(h) > 1e-9 * domain.diameter:
                    raise CertificationError(
                        "a straight-line homotopy sample left the domain"
                    )
        return
    if isinstance(domain, (AnnulusDomain, ShellDomain)):
        center = domain.homology_recipe().generator_center
        for p in domain.interior_samples(samples):
            q = r(fn(p))
            rel_p = [a - b for a, b in zip(p, center)]
            rel_q = [a - b for a, b in zip(q, center)]
            dot = sum(a * b for a, b in zip(rel_p, rel_q))
            if dot <= 1e-9 * domain.diameter**2:
                raise CertificationError(
                    "a radial-angular homotopy would pass near the hole"
                )
        if domain.dim == 2:
            def displaced(p):
                q = r(fn(p))
                return (q[0] - center[0], q[1] - center[1])

            rad = domain.homology_recipe().generator_radius
            cert = winding_degree(displaced, circle_loop(center, rad))
            if cert.degree != 1:
                raise CertificationError(
                    f"the core image winds {cert.degree} times; not homotopic to the identity"
                )
        return
    raise CertificationError(f"no identity-homotopy certificate for {type(domain).__name__}")


def verify_euler_identity(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """When rf is homotopic to the identity, I_f + I_boundary equals the
    Euler characteristic of an independent simplicial model."""
    b = budgets or Budgets()
    kind = "corollary_2_2_7"
    summands = {}
    try:
        _certify_identity_homotopy(f, domain, retraction)
        chi = euler_characteristic(simplicial_model_for(domain))
        summands["euler_characteristic"] = chi
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        i_f = fixed_point_index(
            f,
            domain.interior_region(),
            domain=domain,
            grid=b.grid,
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            frontier_samples=b.frontier_samples,
            escape_samples=b.escape_samples,
        )
        summands["I_f"] = i_f.total
        i_b, _pts = boundary_index(
            f,
            domain,
            exit_set,
            retraction,
            samples=b.boundary_samples,
            sphere_samples=b.sphere_samples,
        )
        summands["I_boundary"] = i_b
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_f"] + summands["I_boundary"] - chi
    return VerificationReport(
        kind=kind,
        outcome=PASS if residual == 0 else FAIL,
        summands=summands,
        residual=residual,
        details={"exit_set": exit_set.summary()},
    )


def verify_ball_exteriority(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """On a ball: boundary image inside forces a fixed point; boundary image
    strictly outside forces I_f = (-1)^n deg(rf on the boundary sphere)."""
    b = budgets or Budgets()
    kind = "example_2_2_6"
    if not isinstance(domain, BallDomain) or domain.dim not in (2, 3):
        return VerificationReport(
            kind, INCONCLUSIVE, reason="this check is stated for balls of dimension 2 or 3"
        )
    summands = {}
    try:
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        comp = exit_set.components[0]
        if comp.empty:
            i_f = fixed_point_index(
                f,
                domain.interior_region(),
                domain=domain,
                grid=b.grid,
                seeds_per_axis=b.seeds_per_axis,
                isolation_per_axis=b.isolation_per_axis,
            )
            located = len(i_f.fixed_points.points)
            summands["I_f"] = i_f.total
            summands["fixed_points_located"] = located
            outcome = PASS if located >= 1 else FAIL
            return VerificationReport(
                kind,
                outcome,
                summands,
                residual=None,
                details={"case": "boundary image inside; a fixed point must exist"},
            )
        if not comp.full:
            raise CertificationError(
                "the boundary image is neither inside nor strictly outside; no case applies"
            )
        i_f = fixed_point_index(
            f,
            domain.interior_region(),
            domain=domain,
            grid=b.grid,
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            frontier_samples=b.frontier_samples,
            escape_samples=b.escape_samples,
        )
        summands["I_f"] = i_f.total
        n = domain.dim
        fn, _ = _as_callable(f)
        r = retraction or Retraction(domain)
        center = tuple(float(c) for c in domain.center)
        if n == 2:
            def displaced(p):
                q = r(fn(p))
                return (q[0] - center[0], q[1] - center[1])

            deg = winding_degree(
                displaced, circle_loop(center, float(domain.radius)), initial_samples=b.core_samples
            ).degree
        else:
            R = float(domain.radius)

            def extension(x):
                r_x = _norm(x)
                if r_x == 0:
                    return (0.0, 0.0, 0.0)
                u = [center[i] + R * x[i] / r_x for i in range(3)]
                q = r(fn(tuple(u)))
                rel = [q[i] - center[i] for i in range(3)]
                nn = _norm(rel)
                return tuple(r_x * rel[i] / nn for i in range(3))

            deg = pl_degree(
                extension, BallRegion((0.0, 0.0, 0.0), 1.0), (0.0, 0.0, 0.0), grid=10
            ).degree
        summands["boundary_degree"] = deg
        summands["signed_degree"] = (-1) ** n * deg
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_f"] - summands["signed_degree"]
    return VerificationReport(
        kind,
        PASS if residual == 0 else FAIL,
        summands,
        residual=residual,
        details={"case": "boundary image strictly outside"},
    )


# --- thin collar band --------------------------------------------------------------


def _band_regions(domain: Domain, exit_set: ExitSet, pad_angle: float = 0.15):
    """Open collar-band regions over (a neighborhood of) the exit set."""
    w = float(domain.collar_width)
    margins = [
        c.margin for c in exit_set.components if not c.empty and c.margin < math.inf
    ]
    if not margins:
        return []
    delta_in = min(min(margins) / 2, 0.25 * w)
    delta_out = min(exit_set.escape_margin / 2, 0.25 * w)
    regions = []
    for comp_exit in exit_set.components:
        if comp_exit.empty:
            continue
        comp = domain.boundary_components()[comp_exit.component]
        if isinstance(domain, BallDomain) and domain.dim in (2, 3):
            c = tuple(float(v) for v in domain.center)
            R = float(domain.radius)
            if comp_exit.full:
                regions.append(AnnulusRegion(c, R + delta_in, R + w - delta_out))
            else:
                if domain.dim != 2:
                    raise CertificationError(
                        "partial-exit collar bands are only built on planar balls"
                    )
                for piece in comp_exit.pieces:
                    regions.append(
                        SectorRegion(
                            c,
                            R + delta_in,
                            R + w - delta_out,
                            piece.lo - pad_angle,
                            piece.hi + pad_angle,
                        )
                    )
            continue
        if isinstance(domain, (AnnulusDomain, ShellDomain)) and comp_exit.full:
            c = tuple(float(v) for v in domain.center)
            if comp_exit.component == 0:
                outer = float(domain.outer)
                regions.append(AnnulusRegion(c, outer + delta_in, outer + w - delta_out))
            else:
                inner = float(domain.inner)
                regions.append(AnnulusRegion(c, inner - w + delta_out, inner - delta_in))
            continue
        raise CertificationError(
            f"no collar band construction for {type(domain).__name__} with this exit set"
        )
    return regions


def verify_thin_band_identity(
    f,
    domain: Domain,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """The boundary index equals the n-dimensional index of f-after-retraction
    on a thin open band inside the collar over the exit set."""
    b = budgets or Budgets()
    kind = "lemma_2_2_9"
    summands = {}
    try:
        exit_set = boundary_exit_set(
            f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid
        )
        i_b, _pts = boundary_index(
            f,
            domain,
            exit_set,
            retraction,
            samples=b.boundary_samples,
            sphere_samples=b.sphere_samples,
        )
        summands["I_boundary"] = i_b
        regions = _band_regions(domain, exit_set)
        if not regions:
            summands["I_band"] = 0
        else:
            fn, _ = _as_callable(f)
            r = retraction or Retraction(domain)
            fr = _Wrapped(lambda p: fn(r(p)), False)

            def band_displacement(p):
                v = fr(p)
                return tuple(a - b_ for a, b_ in zip(p, v))

            total = 0
            for region in regions:
                cert = pl_degree(
                    _Wrapped(band_displacement, False),
                    region,
                    tuple(0.0 for _ in range(domain.dim)),
                    grid=b.grid,
                )
                total += cert.degree
            summands["I_band"] = total
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["I_band"] - summands["I_boundary"]
    return VerificationReport(
        kind,
        PASS if residual == 0 else FAIL,
        summands,
        residual=residual,
        details={"exit_set": exit_set.summary(), "bands": len(regions)},
    )


# --- retraction independence ---------------------------------------------------------


def verify_retraction_independence(
    f,
    domain: Domain,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """Swapping the built-in retractions must not change any reported integer."""
    kind = "retraction_independence"
    rows = []
    try:
        for r in builtin_retractions(domain):
            report = verify_index_identity(f, domain, r, budgets)
            if report.outcome == INCONCLUSIVE:
                raise CertificationError(
                    f"verification under retraction {r.name} was inconclusive: {report.reason}"
                )
            rows.append((r.name, report.summands["I_f"], report.summands["I_boundary"], report.summands["L_rf"]))
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err)
    baseline = rows[0][1:]
    agree = all(row[1:] == baseline for row in rows)
    return VerificationReport(
        kind,
        PASS if agree else FAIL,
        summands={"I_f": baseline[0], "I_boundary": baseline[1], "L_rf": baseline[2]},
        residual=0 if agree else 1,
        details={"per_retraction": [list(r) for r in rows]},
    )


# --- interior/band decomposition -----------------------------------------------------


def decomposition_check(
    f,
    domain: Domain,
    interior_part,
    retraction: Retraction | None = None,
    budgets: Budgets | None = None,
) -> dict:
    """Split L(rf) into the index over {f inside} plus the index over the
    collar band covering {f outside}; returns the three integers (the caller
    asserts the sum)."""
    b = budgets or Budgets()
    i1 = fixed_point_index(
        f, interior_part, grid=b.grid, seeds_per_axis=b.seeds_per_axis
    ).total
    exit_set = boundary_exit_set(f, domain, samples=b.boundary_samples, sphere_grid=b.sphere_grid)
    regions = _band_regions(domain, exit_set)
    fn, _ = _as_callable(f)
    r = retraction or Retraction(domain)

    def band_displacement(p):
        v = fn(r(p))
        return tuple(a - b_ for a, b_ in zip(p, v))

    i2 = 0
    for region in regions:
        i2 += pl_degree(
            _Wrapped(band_displacement, False),
            region,
            tuple(0.0 for _ in range(domain.dim)),
            grid=b.grid,
        ).degree
    l_rf = lefschetz_of_retracted(f, domain, retraction, core_samples=b.core_samples)
    return {"I_inside": i1, "I_band": i2, "L_rf": l_rf}
