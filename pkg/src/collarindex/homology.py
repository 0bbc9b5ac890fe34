"""Simplicial complexes over the rationals: Euler characteristics, Betti
numbers, and Lefschetz numbers of simplicial self-maps.

Everything here is exact Fraction arithmetic; no floating point enters a
trace.  The Lefschetz number of a self-map is computed twice, once as the
alternating sum of chain-level traces and once on homology (traces of the
induced maps on kernels modulo images), and is only returned when the two
agree: the alternating-trace identity doubles as an internal bug trap.

Complexes can be loaded from plain text, one maximal simplex per line as
whitespace-separated vertex indices; the loader closes the list under
faces.  Instances are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalConsistencyError, InvalidComplexError

# --- exact linear algebra -------------------------------------------------


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            row = out[i]
            for j in range(cols):
                row[j] += a * Bk[j]
    return out


def mat_rank(A) -> int:
    if not A or not A[0]:
        return 0
    M = [row[:] for row in A]
    rows, cols = len(M), len(M[0])
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if M[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, rows):
            f = M[r][col] / p
            if f == 0:
                continue
            for c in range(col, cols):
                M[r][c] -= f * M[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def _column_space_basis(A):
    """Independent columns of A, as column vectors."""
    if not A or not A[0]:
        return []
    rows, cols = len(A), len(A[0])
    M = [row[:] for row in A]
    basis_cols = []
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if M[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, rows):
            f = M[r][col] / p
            if f == 0:
                continue
            for c in range(col, cols):
                M[r][c] -= f * M[rank][c]
        basis_cols.append([A[r][col] for r in range(rows)])
        rank += 1
    return basis_cols


def _kernel_basis(A, cols):
    """Basis of the null space of A (A has ``cols`` columns)."""
    if not A:
        return [[Fraction(1) if i == j else Fraction(0) for j in range(cols)] for i in range(cols)]
    rows = len(A)
    M = [row[:] for row in A]
    pivots = []
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if M[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        M[rank] = [v / p for v in M[rank]]
        for r in range(rows):
            if r != rank and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(v)
    return basis


def _solve_in_span(basis_vectors, targets):
    """Express each target vector in the span of the basis; returns the
    coefficient matrix X with columns indexed like targets, or raises if a
    target leaves the span."""
    if not basis_vectors:
        for t in targets:
            if any(v != 0 for v in t):
                raise InternalConsistencyError("vector outside the invariant subspace")
        return [[] for _ in targets]
    rows = len(basis_vectors[0])
    k = len(basis_vectors)
    solutions = []
    for t in targets:
        M = [[basis_vectors[j][r] for j in range(k)] + [t[r]] for r in range(rows)]
        # row reduce the augmented system
        rank = 0
        pivots = []
        for col in range(k):
            pivot = None
            for r in range(rank, rows):
                if M[r][col] != 0:
                    pivot = r
                    break
            if pivot is None:
                continue
            M[rank], M[pivot] = M[pivot], M[rank]
            p = M[rank][col]
            M[rank] = [v / p for v in M[rank]]
            for r in range(rows):
                if r != rank and M[r][col] != 0:
                    f = M[r][col]
                    M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
            pivots.append(col)
            rank += 1
        coeffs = [Fraction(0)] * k
        for r in range(rank, rows):
            if M[r][k] != 0:
                raise InternalConsistencyError("vector outside the invariant subspace")
        for r, pc in enumerate(pivots):
            coeffs[pc] = M[r][k]
        solutions.append(coeffs)
    return solutions


def _trace_on_subspace(matrix, basis_vectors) -> Fraction:
    """Trace of a matrix restricted to an invariant subspace with the given
    basis (columns)."""
    if not basis_vectors:
        return Fraction(0)
    images = []
    rows = len(basis_vectors[0])
    for b in basis_vectors:
        img = [sum(matrix[r][c] * b[c] for c in range(len(b))) for r in range(rows)]
        images.append(img)
    coeffs = _solve_in_span(basis_vectors, images)
    return sum(coeffs[j][j] for j in range(len(basis_vectors)))


# --- complexes ------------------------------------------------------------


def _faces_of(simplex):
    for k in range(len(simplex)):
        yield simplex[:k] + simplex[k + 1 :]


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite complex: per dimension, sorted vertex tuples plus exact
    boundary matrices."""

    simplices: tuple  # simplices[k] = tuple of sorted (k+1)-vertex tuples
    index: dict = field(compare=False, repr=False)

    @staticmethod
    def from_maximal(maximal) -> "SimplicialComplex":
        by_dim: dict[int, set] = {}
        stack = [tuple(sorted(s)) for s in maximal]
        for s in stack:
            if len(set(s)) != len(s):
                raise InvalidComplexError(f"simplex {s} repeats a vertex")
        seen = set()
        while stack:
            s = stack.pop()
            if s in seen or len(s) == 0:
                continue
            seen.add(s)
            by_dim.setdefault(len(s) - 1, set()).add(s)
            if len(s) > 1:
                stack.extend(_faces_of(s))
        if not by_dim:
            raise InvalidComplexError("empty complex")
        top = max(by_dim)
        simplices = tuple(
            tuple(sorted(by_dim.get(k, set()))) for k in range(top + 1)
        )
        index = {
            k: {s: i for i, s in enumerate(simplices[k])} for k in range(top + 1)
        }
        cx = SimplicialComplex(simplices, index)
        cx._validate()
        return cx

    @staticmethod
    def from_text(text: str) -> "SimplicialComplex":
        maximal = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                maximal.append(tuple(int(tok) for tok in body.split()))
            except ValueError:
                raise InvalidComplexError(
                    f"line {line_no}: expected whitespace-separated vertex indices"
                ) from None
        return SimplicialComplex.from_maximal(maximal)

    @property
    def top_dim(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> list:
        return [len(s) for s in self.simplices]

    def boundary_matrix(self, k: int):
        """Exact matrix of the boundary map from k-chains to (k-1)-chains."""
        if k <= 0 or k > self.top_dim:
            return []
        rows = len(self.simplices[k - 1])
        cols = len(self.simplices[k])
        M = [[Fraction(0)] * cols for _ in range(rows)]
        lower = self.index[k - 1]
        for j, s in enumerate(self.simplices[k]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                M[lower[face]][j] += Fraction((-1) ** i)
        return M

    def _validate(self):
        for k in range(self.top_dim + 1):
            for s in self.simplices[k]:
                if k > 0:
                    for f in _faces_of(s):
                        if f not in self.index[k - 1]:
                            raise InvalidComplexError(f"missing face {f} of {s}")
        for k in range(2, self.top_dim + 1):
            prod = mat_mul(self.boundary_matrix(k - 1), self.boundary_matrix(k))
            if any(any(v != 0 for v in row) for row in prod):
                raise InvalidComplexError(
                    f"boundary composed with boundary is nonzero in dimension {k}"
                )


def euler_characteristic(cx: SimplicialComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(cx.counts()))


def betti_numbers(cx: SimplicialComplex) -> list:
    """Rational Betti numbers via boundary ranks."""
    ranks = [mat_rank(cx.boundary_matrix(k)) for k in range(cx.top_dim + 2)]
    counts = cx.counts()
    out = []
    for k in range(cx.top_dim + 1):
        out.append(counts[k] - ranks[k] - ranks[k + 1])
    return out


# --- simplicial self-maps ---------------------------------------------------


def _permutation_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class SimplicialSelfMap:
    """A vertex assignment carrying simplices to simplices (degenerate
    images contribute zero chains)."""

    complex: SimplicialComplex
    vertex_map: dict = field(compare=False)

    def __post_init__(self):
        for v in {v for s in self.complex.simplices[0] for v in s}:
            if v not in self.vertex_map:
                raise InvalidComplexError(f"vertex {v} has no image")
        for k in range(self.complex.top_dim + 1):
            for s in self.complex.simplices[k]:
                image = tuple(sorted(set(self.vertex_map[v] for v in s)))
                if len(image) == len(s) and image not in self.complex.index[k]:
                    raise InvalidComplexError(
                        f"image {image} of simplex {s} is not a simplex"
                    )

    def chain_matrix(self, k: int):
        simplices = self.complex.simplices[k]
        n = len(simplices)
        M = [[Fraction(0)] * n for _ in range(n)]
        idx = self.complex.index[k]
        for j, s in enumerate(simplices):
            image = tuple(self.vertex_map[v] for v in s)
            if len(set(image)) != len(image):
                continue  # degenerate image: zero chain
            M[idx[tuple(sorted(image))]][j] += Fraction(_permutation_sign(image))
        return M

    def _check_commutes(self):
        for k in range(1, self.complex.top_dim + 1):
            left = mat_mul(self.chain_matrix(k - 1), self.complex.boundary_matrix(k))
            right = mat_mul(self.complex.boundary_matrix(k), self.chain_matrix(k))
            if left != right:
                raise InvalidComplexError(
                    f"chain map does not commute with the boundary in dimension {k}"
                )


def lefschetz_hopf(cx: SimplicialComplex, m: SimplicialSelfMap) -> int:
    """Alternating sum of chain traces, cross-checked against the
    homology-level alternating trace sum; returns only on exact agreement."""
    if m.complex is not cx and m.complex != cx:
        raise InvalidComplexError("self-map belongs to a different complex")
    m._check_commutes()

    chain_total = Fraction(0)
    homology_total = Fraction(0)
    for k in range(cx.top_dim + 1):
        phi = m.chain_matrix(k)
        chain_trace = sum(phi[i][i] for i in range(len(phi)))
        chain_total += (-1) ** k * chain_trace

        cols = len(cx.simplices[k])
        kernel = _kernel_basis(cx.boundary_matrix(k), cols)
        image = _column_space_basis(cx.boundary_matrix(k + 1)) if k < cx.top_dim else []
        trace_kernel = _trace_on_subspace(phi, kernel)
        trace_image = _trace_on_subspace(phi, image)
        homology_total += (-1) ** k * (trace_kernel - trace_image)

    if chain_total != homology_total:
        raise InternalConsistencyError(
            f"chain-level trace sum {chain_total} disagrees with homology-level {homology_total}"
        )
    if chain_total.denominator != 1:
        raise InternalConsistencyError("Lefschetz number is not an integer")
    return int(chain_total)


# --- catalog complexes ------------------------------------------------------


def disk_complex() -> SimplicialComplex:
    """Fan over a hexagon: 7 vertices, 12 edges, 6 triangles."""
    return SimplicialComplex.from_maximal(
        [(0, i, i % 6 + 1) for i in range(1, 7)]
    )


def annulus_complex() -> SimplicialComplex:
    """Prism strip between two hexagons: 12 vertices, 24 edges, 12 triangles."""
    maximal = []
    for i in range(6):
        a, b = i, (i + 1) % 6
        a_out, b_out = i + 6, (i + 1) % 6 + 6
        maximal.append((a, b, b_out))
        maximal.append((a, a_out, b_out))
    return SimplicialComplex.from_maximal(maximal)


def tetrahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    )


def solid_tetrahedron() -> SimplicialComplex:
    return SimplicialComplex.from_maximal([(0, 1, 2, 3)])


def hexagon_circle() -> SimplicialComplex:
    return SimplicialComplex.from_maximal([(i, (i + 1) % 6) for i in range(6)])


def interval_complex() -> SimplicialComplex:
    return SimplicialComplex.from_maximal([(0, 1), (1, 2)])


CATALOG = {
    "disk": disk_complex,
    "annulus": annulus_complex,
    "tetrahedron_boundary": tetrahedron_boundary,
    "solid_tetrahedron": solid_tetrahedron,
    "hexagon_circle": hexagon_circle,
    "interval": interval_complex,
}


def simplicial_model_for(domain) -> SimplicialComplex:
    """A complex of the same homotopy type as a catalog domain, used to read
    the Euler characteristic independently of any analytic computation."""
    from .domains import AnnulusDomain, BallDomain, BoxDomain, ShellDomain

    if isinstance(domain, AnnulusDomain):
        return annulus_complex()
    if isinstance(domain, ShellDomain):
        return tetrahedron_boundary()
    if isinstance(domain, BallDomain) and domain.dim == 3:
        return solid_tetrahedron()
    if isinstance(domain, (BallDomain, BoxDomain)):
        if domain.dim == 1:
            return interval_complex()
        return disk_complex()
    raise InvalidComplexError(f"no simplicial model for {type(domain).__name__}")


def hexagon_rotation(steps: int = 1) -> SimplicialSelfMap:
    return SimplicialSelfMap(hexagon_circle(), {i: (i + steps) % 6 for i in range(6)})


def hexagon_reflection() -> SimplicialSelfMap:
    return SimplicialSelfMap(hexagon_circle(), {i: (-i) % 6 for i in range(6)})


def identity_map(cx: SimplicialComplex) -> SimplicialSelfMap:
    vertices = {v for s in cx.simplices[0] for v in s}
    return SimplicialSelfMap(cx, {v: v for v in vertices})
