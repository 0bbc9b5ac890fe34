"""Brouwer degree engines.

Two deliberately independent algorithms:

* ``winding_degree`` sums signed angle increments of a planar map along a
  closed loop, adaptively subdividing until consecutive samples differ by
  less than a quarter turn (which pins the discrete winding to the true
  one) and until a nonvanishing certificate holds.

* ``pl_degree`` counts, with orientation signs, the simplices of a Kuhn
  triangulation of a gridded region whose piecewise-linear interpolant
  covers the target value.  Counting is exact rational arithmetic whenever
  the map and the region are rational; ties are resolved by a fixed
  deterministic target perturbation and re-verified.

Certification is conservative throughout: a sampled lower bound on the
displacement must exceed a finite-difference Lipschitz estimate times the
mesh size, or the computation refuses to answer.  A returned integer is
therefore always backed by a positive ``min_displacement``.

The engines are pure functions of their inputs; concurrent calls are safe
and internal evaluation order never affects the returned integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BudgetExhaustedError, CertificationError, InternalConsistencyError
from .expr import MapExpr
from .regions import BAND, INSIDE, OUTSIDE, Region, exact_lattice_allowed

WINDING = "winding"
PL_SIGN = "pl-sign"
ORACLE = "oracle"


@dataclass(frozen=True)
class DegreeCertificate:
    """An integer degree plus the evidence that it is valid."""

    degree: int
    method: str
    refinement_depth: int
    min_displacement: float

    def __post_init__(self):
        if not self.min_displacement > 0:
            raise CertificationError(
                "a degree certificate requires a positive displacement bound"
            )
        if not isinstance(self.degree, int):
            raise InternalConsistencyError("certificate degree must be an int")

    def summary(self) -> dict:
        return {
            "degree": self.degree,
            "method": self.method,
            "refinement_depth": self.refinement_depth,
            "min_displacement": self.min_displacement,
        }


@dataclass(frozen=True)
class LoopSpec:
    """A closed parametrized curve t in [t0, t1] -> R^2 with point(t0) = point(t1)."""

    t0: float
    t1: float
    point: Callable

    @property
    def length(self) -> float:
        return self.t1 - self.t0


def circle_loop(center, radius) -> LoopSpec:
    cx, cy = float(center[0]), float(center[1])
    r = float(radius)
    return LoopSpec(0.0, 2 * math.pi, lambda t: (cx + r * math.cos(t), cy + r * math.sin(t)))


def _as_callable(g):
    if isinstance(g, MapExpr):
        return g, g.is_rational
    return g, bool(getattr(g, "exact", False))


# --- winding ------------------------------------------------------------


def winding_degree(
    g,
    loop: LoopSpec,
    *,
    initial_samples: int = 64,
    max_samples: int = 1 << 18,
    safety: float = 2.0,
) -> DegreeCertificate:
    """Signed number of turns of g around the origin along the loop.

    Raises CertificationError when the nonvanishing of g on the loop cannot
    be established, BudgetExhaustedError when the sample budget runs out
    before both the angle-step and the margin condition hold.
    """
    fn, _ = _as_callable(g)
    n = max(8, initial_samples)
    depth = 0
    while True:
        ts = [loop.t0 + loop.length * k / n for k in range(n + 1)]
        vals = [tuple(map(float, fn(loop.point(t)))) for t in ts]
        norms = [math.hypot(v[0], v[1]) for v in vals]
        m_sampled = min(norms)
        if m_sampled == 0.0:
            raise CertificationError("the map vanishes at a loop sample")
        dt = loop.length / n
        lip = 0.0
        max_step = 0.0
        for a, b in zip(vals, vals[1:]):
            chord = math.hypot(b[0] - a[0], b[1] - a[1])
            lip = max(lip, chord / dt)
            max_step = max(max_step, chord)
        margin = m_sampled - safety * lip * dt / 2
        angle_ok = True
        total = 0.0
        for a, b in zip(vals, vals[1:]):
            cross = a[0] * b[1] - a[1] * b[0]
            dot = a[0] * b[0] + a[1] * b[1]
            step = math.atan2(cross, dot)
            if abs(step) >= math.pi / 2:
                angle_ok = False
                break
            total += step
        if angle_ok and margin > 0:
            turns = total / (2 * math.pi)
            degree = round(turns)
            if abs(turns - degree) > 0.25:
                raise InternalConsistencyError(
                    f"winding sum {turns!r} is not near an integer despite sub-quarter steps"
                )
            return DegreeCertificate(degree, WINDING, depth, margin)
        if 2 * n > max_samples:
            if not angle_ok or margin <= 0:
                raise BudgetExhaustedError(
                    "winding refinement budget exhausted before certification"
                )
        n *= 2
        depth += 1


# --- piecewise-linear sign counting --------------------------------------


class _Tie(Exception):
    pass


def _gauss(A, rhs, exact: bool):
    """Solve A mu = rhs; returns (det, mu).  A and rhs are mutated copies."""
    n = len(rhs)
    A = [row[:] for row in A]
    rhs = rhs[:]
    det = 1
    for col in range(n):
        pivot_row = None
        if exact:
            for r in range(col, n):
                if A[r][col] != 0:
                    pivot_row = r
                    break
        else:
            best = 0.0
            for r in range(col, n):
                if abs(A[r][col]) > best:
                    best = abs(A[r][col])
                    pivot_row = r
        if pivot_row is None or A[pivot_row][col] == 0:
            return 0, None
        if pivot_row != col:
            A[col], A[pivot_row] = A[pivot_row], A[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
            det = -det
        p = A[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = A[r][col] / p
            if factor == 0:
                continue
            for c in range(col, n):
                A[r][c] -= factor * A[col][c]
            rhs[r] -= factor * rhs[col]
    mu = [0] * n
    for r in range(n - 1, -1, -1):
        s = rhs[r]
        for c in range(r + 1, n):
            s -= A[r][c] * mu[c]
        mu[r] = s / A[r][r]
    return det, mu


def _simplex_tables(dim: int):
    tables = []
    for perm in itertools.permutations(range(dim)):
        offsets = [tuple(0 for _ in range(dim))]
        current = [0] * dim
        for axis in perm:
            current[axis] += 1
            offsets.append(tuple(current))
        parity = 1
        seen = list(perm)
        for i in range(len(seen)):
            for j in range(i + 1, len(seen)):
                if seen[i] > seen[j]:
                    parity = -parity
        tables.append((offsets, parity))
    return tables


def _cover_sign(ws, target, exact: bool, scale: float):
    """Does the value simplex cover the target, and with which orientation?

    Raises _Tie whenever the answer depends on a degenerate coincidence.
    """
    n = len(target)
    A = [[ws[j + 1][i] - ws[0][i] for j in range(n)] for i in range(n)]
    rhs = [target[i] - ws[0][i] for i in range(n)]
    det, mu = _gauss(A, rhs, exact)
    if exact:
        if det == 0:
            raise _Tie
    else:
        if abs(det) <= (1e-13 * max(scale, 1.0)) ** n:
            raise _Tie
    lambdas = [1 - sum(mu)] + list(mu)
    if exact:
        if any(l == 0 for l in lambdas):
            raise _Tie
        covered = all(l > 0 for l in lambdas)
    else:
        tol = 1e-11
        if any(abs(l) <= tol for l in lambdas):
            raise _Tie
        covered = all(l > tol for l in lambdas)
    if not covered:
        return False, 0
    return True, (1 if det > 0 else -1)


def _run_pl_count(fn, region: Region, target, resolution: int, exact: bool, safety: float):
    dim = region.dim
    lo, hi = region.bounding_box()
    # expand the box asymmetrically by a fixed whiff so lattice vertices
    # generically miss zeros sitting at round coordinates (ties are legal
    # but cost a perturbation pass)
    eps_lo = Fraction(137, 100000)
    eps_hi = Fraction(171, 100000)
    if exact:
        lo_q = []
        hi_q = []
        for a, b in zip(lo, hi):
            width = Fraction(b) - Fraction(a)
            lo_q.append(Fraction(a) - width * eps_lo)
            hi_q.append(Fraction(b) + width * eps_hi)
        steps_q = tuple((b - a) / resolution for a, b in zip(lo_q, hi_q))
        axes_q = [
            [a + s * k for k in range(resolution + 1)] for a, s in zip(lo_q, steps_q)
        ]
        axes_f = [[float(x) for x in col] for col in axes_q]
    else:
        lo_f = []
        hi_f = []
        for a, b in zip(lo, hi):
            width = float(b) - float(a)
            lo_f.append(float(a) - width * float(eps_lo))
            hi_f.append(float(b) + width * float(eps_hi))
        axes_f = [
            [a + (b - a) * k / resolution for k in range(resolution + 1)]
            for a, b in zip(lo_f, hi_f)
        ]
    steps_f = tuple((col[1] - col[0]) for col in axes_f)

    float_target = tuple(float(t) for t in target)
    scale = max(1.0, max(abs(t) for t in float_target), region.diameter)
    pad_geom = 1e-9 * max(region.diameter, 1.0)

    # vertices are addressed by flattened lattice index for speed
    res1 = resolution + 1
    strides = [res1 ** (dim - 1 - a) for a in range(dim)]

    def unravel(flat):
        idx = []
        for s in strides:
            idx.append(flat // s)
            flat %= s
        return idx

    classify = region.cell_classifier(axes_f, pad_geom)
    cells = []  # (base flat vertex, in_band)
    for idx in itertools.product(range(resolution), repeat=dim):
        cls = classify(idx)
        if cls == OUTSIDE:
            continue
        base = sum(i * s for i, s in zip(idx, strides))
        cells.append((base, idx, cls == BAND))

    if not cells:
        raise CertificationError("the region meets no grid cells; grid too coarse")

    fvalues = {}

    def fvalue_at(flat):
        v = fvalues.get(flat)
        if v is None:
            idx = unravel(flat)
            pt = tuple(axes_f[a][i] for a, i in enumerate(idx))
            v = tuple(float(c) for c in fn(pt))
            fvalues[flat] = v
        return v

    qvalues = {}

    def qvalue_at(flat):
        v = qvalues.get(flat)
        if v is None:
            idx = unravel(flat)
            pt = tuple(axes_q[a][i] for a, i in enumerate(idx))
            v = tuple(fn(pt))
            qvalues[flat] = v
        return v

    corner_offsets = list(itertools.product((0, 1), repeat=dim))
    corner_deltas = [sum(o * s for o, s in zip(off, strides)) for off in corner_offsets]
    h_diag = math.sqrt(sum(s * s for s in steps_f))

    # certification over the frontier band: sampled lower bound minus a
    # finite-difference Lipschitz estimate over the cell diagonal
    band_min = math.inf
    lip = 0.0
    for base, idx, in_band in cells:
        if not in_band:
            continue
        corner_vals = [fvalue_at(base + d) for d in corner_deltas]
        center = tuple(axes_f[a][i] + steps_f[a] * 0.5 for a, i in enumerate(idx))
        fc = tuple(float(c) for c in fn(center))
        for fv in corner_vals:
            band_min = min(
                band_min,
                math.sqrt(sum((a - t) ** 2 for a, t in zip(fv, float_target))),
            )
        band_min = min(
            band_min, math.sqrt(sum((a - t) ** 2 for a, t in zip(fc, float_target)))
        )
        base_val = corner_vals[0]
        for fv in corner_vals[1:] + [fc]:
            d = math.sqrt(sum((a - b) ** 2 for a, b in zip(fv, base_val)))
            lip = max(lip, d / h_diag)
    has_band = any(in_band for _, _, in_band in cells)
    # coverage of the corner+center samples is about 0.41 cell diagonals and
    # the PL interpolant strays at most one diagonal of Lipschitz drift
    slack = safety * lip * h_diag * 1.45
    margin = band_min - slack if has_band else math.inf
    if not margin > 0:
        raise CertificationError(
            f"nonvanishing not certified on the frontier band "
            f"(sampled minimum {band_min:.3e}, Lipschitz slack {slack:.3e})"
        )

    tables = _simplex_tables(dim)
    corner_pos = {off: i for i, off in enumerate(corner_offsets)}
    tables_c = [
        (tuple(corner_pos[off] for off in offsets), parity) for offsets, parity in tables
    ]
    pad = 1e-7 * scale
    full_mask = (1 << dim) - 1

    def count_with_target(tgt):
        f_tgt = tuple(float(t) for t in tgt)
        total = 0
        # per-vertex sign bitmasks: axis bit set in pos when the value lies
        # strictly above the target there, in neg when strictly below
        masks = {}

        def mask_at(flat):
            m = masks.get(flat)
            if m is None:
                v = fvalue_at(flat)
                pos = 0
                neg = 0
                for a in range(dim):
                    d = v[a] - f_tgt[a]
                    if d > pad:
                        pos |= 1 << a
                    elif d < -pad:
                        neg |= 1 << a
                m = (pos, neg)
                masks[flat] = m
            return m

        for base, idx, in_band in cells:
            and_pos = full_mask
            and_neg = full_mask
            for d in corner_deltas:
                p, ng = mask_at(base + d)
                and_pos &= p
                and_neg &= ng
                if not (and_pos | and_neg):
                    break
            if and_pos | and_neg:
                continue
            for corner_ids, parity in tables_c:
                s_pos = full_mask
                s_neg = full_mask
                for ci in corner_ids:
                    p, ng = mask_at(base + corner_deltas[ci])
                    s_pos &= p
                    s_neg &= ng
                    if not (s_pos | s_neg):
                        break
                if s_pos | s_neg:
                    continue
                if exact:
                    ws = [qvalue_at(base + corner_deltas[ci]) for ci in corner_ids]
                else:
                    ws = [fvalue_at(base + corner_deltas[ci]) for ci in corner_ids]
                covered, sign = _cover_sign(ws, tgt, exact, scale)
                if covered:
                    if in_band:
                        raise CertificationError(
                            "target covered inside the certified frontier band"
                        )
                    total += sign * parity
        return total

    try:
        count = count_with_target(tuple(target))
    except _Tie:
        count = _perturbed_count(count_with_target, target, exact, scale, margin)
    return count, margin


def _perturbed_count(count_fn, target, exact, scale, margin):
    """Deterministic tie resolution: nudge the target along a fixed
    direction by two magnitudes and require agreement."""
    dirs = [Fraction(1, 1), Fraction(1, 3), Fraction(1, 7)]
    if exact:
        eps = Fraction(min(scale, margin)).limit_denominator(10**6) / 10**7
        candidates = []
        for k in (1, 2):
            tgt = tuple(
                Fraction(t) + k * eps * dirs[i % len(dirs)] for i, t in enumerate(target)
            )
            try:
                candidates.append(count_fn(tgt))
            except _Tie:
                raise CertificationError("tie persisted under deterministic perturbation")
    else:
        eps = min(scale, margin) * 1e-7
        candidates = []
        for k in (1, 2):
            tgt = tuple(
                float(t) + k * eps * float(dirs[i % len(dirs)]) for i, t in enumerate(target)
            )
            try:
                candidates.append(count_fn(tgt))
            except _Tie:
                raise CertificationError("tie persisted under deterministic perturbation")
    if candidates[0] != candidates[1]:
        raise CertificationError("perturbed counts disagree; grid too coarse near the target")
    return candidates[0]


_DEFAULT_GRIDS = {1: 128, 2: 32, 3: 10, 4: 6}


def pl_degree(
    g,
    region: Region,
    target,
    *,
    grid: int | None = None,
    max_refine: int = 4,
    safety: float = 1.5,
) -> DegreeCertificate:
    """Degree of g over the region with respect to the target value.

    Refines the grid until two successive resolutions agree and the
    nonvanishing margin on the frontier band is positive.  Certification
    failures double the grid; the agreement pass runs 25% finer.
    """
    fn, map_exact = _as_callable(g)
    exact = map_exact and exact_lattice_allowed(region) and all(
        isinstance(t, (int, Fraction)) for t in target
    )
    resolution = grid or _DEFAULT_GRIDS.get(region.dim)
    if resolution is None:
        raise CertificationError(f"no default grid for dimension {region.dim}")

    last_error = None
    previous = None
    depth = 0
    for attempt in range(max_refine + 1):
        try:
            count, margin = _run_pl_count(fn, region, target, resolution, exact, safety)
        except CertificationError as err:
            last_error = err
            previous = None
            resolution *= 2
            depth += 1
            continue
        if previous is not None and previous[0] == count:
            return DegreeCertificate(count, PL_SIGN, depth, min(margin, previous[1]))
        previous = (count, margin)
        resolution = resolution + max(1, resolution // 4)
        depth += 1
    if previous is None:
        raise BudgetExhaustedError(
            f"piecewise-linear degree certification failed after {max_refine + 1} grids: {last_error}"
        )
    raise BudgetExhaustedError(
        "piecewise-linear degree did not stabilize across successive grids"
    )


# --- homotopy certification ----------------------------------------------


def certify_linear_homotopy_on_loop(
    g0,
    g1,
    loop: LoopSpec,
    *,
    samples: int = 512,
    s_steps: int = 33,
    safety: float = 2.0,
) -> float:
    """Positive margin such that (1-s) g0 + s g1 stays nonzero on the loop
    for every s, certified by sampling plus Lipschitz slack.  Raises
    CertificationError when no positive margin can be established."""
    f0, _ = _as_callable(g0)
    f1, _ = _as_callable(g1)
    ts = [loop.t0 + loop.length * k / samples for k in range(samples + 1)]
    pts = [loop.point(t) for t in ts]
    v0 = [tuple(map(float, f0(p))) for p in pts]
    v1 = [tuple(map(float, f1(p))) for p in pts]
    dt = loop.length / samples
    ds = 1.0 / (s_steps - 1)
    m = math.inf
    lip_t = 0.0
    lip_s = 0.0
    for k in range(s_steps):
        s = k * ds
        hv = [
            tuple((1 - s) * a[i] + s * b[i] for i in range(len(a)))
            for a, b in zip(v0, v1)
        ]
        for a, b, h in zip(v0, v1, hv):
            m = min(m, math.hypot(*h))
            lip_s = max(lip_s, math.hypot(*(bb - aa for aa, bb in zip(a, b))))
        for a, b in zip(hv, hv[1:]):
            lip_t = max(lip_t, math.hypot(*(bb - aa for aa, bb in zip(a, b))) / dt)
    margin = m - safety * (lip_t * dt / 2 + lip_s * ds / 2)
    if not margin > 0:
        raise CertificationError(
            "homotopy nonvanishing on the loop could not be certified"
        )
    return margin
