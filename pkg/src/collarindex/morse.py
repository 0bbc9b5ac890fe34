"""The planar vector-field index formula.

For a vector field V on a planar catalog domain with no zeros on the
boundary, the sum of the interior zero indices and the one-dimensional
indices of the boundary-tangential field over the inward-pointing part of
the boundary equals the Euler characteristic of the domain.

The inward set is located exactly like a map exit set (certified sign
intervals of the inward component of V along each boundary loop); the
tangential zero indices reuse the certified one-dimensional scan.  A
tangential field that vanishes along a stretch (for example a radial field
on an annulus boundary) is reported as degenerate, never silently scored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .boundary import scalar_zero_indices, sign_intervals_on_loop
from .collar import INCONCLUSIVE, FAIL, PASS, VerificationReport, Budgets, _inconclusive
from .degree import _as_callable
from .domains import BoundaryLoop, Domain
from .errors import CertificationError, CollarIndexError, InternalConsistencyError
from .fpindex import _norm, zero_index
from .homology import euler_characteristic, simplicial_model_for


def _certify_nonvanishing_on_boundary(fn, domain: Domain, samples: int, safety=2.0):
    worst = math.inf
    for comp in domain.boundary_components():
        if not isinstance(comp, BoundaryLoop):
            raise CertificationError("vector-field scenarios need planar loop boundaries")
        vals = [
            _norm(fn(comp.embed(comp.period * k / samples))) for k in range(samples)
        ]
        mesh = comp.period / samples
        lip = max(
            (abs(a - b) / mesh for a, b in zip(vals, vals[1:])), default=0.0
        )
        worst = min(worst, min(vals) - safety * lip * mesh / 2)
    if not worst > 0:
        raise CertificationError("the vector field may vanish on the boundary")
    return worst


def verify_morse_formula(
    vector_field,
    domain: Domain,
    budgets: Budgets | None = None,
) -> VerificationReport:
    """Interior zero indices plus inward-set tangential indices equal the
    Euler characteristic (planar domains)."""
    b = budgets or Budgets()
    kind = "morse"
    if domain.dim != 2:
        return VerificationReport(
            kind, INCONCLUSIVE, reason="the vector-field formula is implemented for planar domains"
        )
    fn, _ = _as_callable(vector_field)
    summands = {}
    details = {}
    try:
        _certify_nonvanishing_on_boundary(fn, domain, b.boundary_samples)

        interior = zero_index(
            vector_field,
            domain.interior_region(),
            seeds_per_axis=b.seeds_per_axis,
            isolation_per_axis=b.isolation_per_axis,
            grid=b.grid,
        )
        summands["index_V"] = interior.total
        details["zeros"] = [
            {"point": [float(c) for c in p.point], "index": p.index}
            for p in interior.fixed_points.points
        ]

        inward_total = 0
        inward_arcs = []
        for comp in domain.boundary_components():
            def inwardness(s, comp=comp):
                x = comp.embed(s % comp.period)
                v = fn(x)
                nu = comp.outward(s % comp.period)
                return -(v[0] * nu[0] + v[1] * nu[1])

            state, intervals, _margin = sign_intervals_on_loop(
                inwardness, comp.period, samples=b.boundary_samples
            )
            if state == "empty":
                continue
            if state == "full":
                segments = [(0.0, comp.period)]
                periodic = comp.period
            else:
                segments = intervals
                periodic = None
            inward_arcs.append(
                {"component": comp.component, "arcs": [[a, b_] for a, b_ in segments]}
            )

            def tangential(s, comp=comp):
                x = comp.embed(s % comp.period)
                v = fn(x)
                t = comp.tangent(s % comp.period)
                return v[0] * t[0] + v[1] * t[1]

            part, zeros, _m = scalar_zero_indices(
                tangential,
                segments,
                samples=max(200, b.boundary_samples // 2),
                periodic_period=periodic,
            )
            inward_total += part
            details.setdefault("tangential_zeros", []).extend(
                {"component": comp.component, "param": z, "index": i} for z, i in zeros
            )
        summands["index_inward_tangential"] = inward_total
        details["inward_set"] = inward_arcs

        chi = euler_characteristic(simplicial_model_for(domain))
        summands["euler_characteristic"] = chi
    except CollarIndexError as err:
        if isinstance(err, InternalConsistencyError):
            raise
        return _inconclusive(kind, err, summands)
    residual = summands["index_V"] + summands["index_inward_tangential"] - chi
    return VerificationReport(
        kind,
        PASS if residual == 0 else FAIL,
        summands,
        residual=residual,
        details=details,
    )
