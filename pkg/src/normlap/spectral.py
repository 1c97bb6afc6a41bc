"""Normalized Laplacian spectra, harmonic eigenfunctions, and the
variational quotient.

For a graph with degree matrix D and combinatorial Laplacian L = D - A, the
normalized Laplacian is D^{-1/2} L D^{-1/2} (isolated vertices get diagonal
entry 0, the degree pseudo-inverse convention).  Its eigenvalues satisfy
0 = lambda_1 <= ... <= lambda_n <= 2; lambda_2 vanishes exactly on
disconnected graphs and lambda_n = 2 exactly when some component with an
edge is bipartite.

A harmonic eigenfunction is the vertex function f = D^{-1/2} g for an
eigenvector g; it attains the generalized Rayleigh quotient
f^T L f / f^T D f and satisfies, at each vertex v,

    (1/d(v)) * sum_{u ~ v} (f(v) - f(u)) = lambda * f(v).

Every spectrum returned by this module is certified on construction:
positive semidefiniteness, the trace identity (sum of eigenvalues equals the
number of non-isolated vertices), and membership of the degree-weighted
constant vector in the kernel for connected graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import eigen
from .graph_core import Graph, is_connected, volume

#: Eigenvalues closer than this are treated as one eigenspace.
MULTIPLICITY_TOL = 1e-7

#: Certification bound for spectrum-level invariants.
INVARIANT_TOL = 1e-8

#: Per-vertex bound for the harmonic-eigenfunction equation.
HARMONIC_EQ_TOL = 1e-7

SECOND_SMALLEST = "second_smallest"
LARGEST = "largest"

_SPECTRUM_CACHE_SIZE = 16384


class SpectralError(RuntimeError):
    """A certified spectral invariant failed."""


class DisconnectedGraphError(ValueError):
    """Operation requires a connected graph."""


@dataclass(frozen=True)
class Spectrum:
    """Certified eigendecomposition of a graph's normalized Laplacian."""

    graph: Graph
    values: np.ndarray
    eigvecs: np.ndarray

    @property
    def lambda2(self) -> float:
        return float(self.values[1])

    @property
    def rho(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True)
class HarmonicEigenfunction:
    """Vertex function f with D^{1/2} f an eigenvector at eigenvalue ``lam``.

    Normalized so that ||D^{1/2} f||_2 = 1 and the first coordinate larger
    than 1e-9 in magnitude is positive (f and -f carry the same information;
    the convention makes outputs deterministic).
    """

    f: np.ndarray
    lam: float
    graph: Graph

    def value(self, v: int) -> float:
        return float(self.f[v])

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.f)))


def normalized_laplacian(g: Graph) -> eigen.SymMatrix:
    """D^{-1/2} (D - A) D^{-1/2} with 0 diagonal entries at isolated vertices."""
    d = g.degree_array
    inv_sqrt = np.zeros(g.n)
    nz = d > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(d[nz])
    a = np.zeros((g.n, g.n))
    np.fill_diagonal(a, np.where(nz, 1.0, 0.0))
    for u, v in g.sorted_edges:
        w = -inv_sqrt[u] * inv_sqrt[v]
        a[u, v] = w
        a[v, u] = w
    return eigen.SymMatrix.from_array(a)


@lru_cache(maxsize=_SPECTRUM_CACHE_SIZE)
def spectrum(g: Graph) -> Spectrum:
    """Certified full spectrum of the normalized Laplacian.

    The cache is keyed by the (immutable, hashable) graph; exhaustive scans
    lean on it so that a base graph solved once serves every perturbation
    instance derived from it.
    """
    m = normalized_laplacian(g)
    dec = eigen.eigh(m)
    values, vectors = dec.values, dec.vectors
    if values[0] < -INVARIANT_TOL:
        raise SpectralError(f"negative eigenvalue {values[0]:.3e} breaks semidefiniteness")
    non_isolated = sum(1 for d in g.degrees if d > 0)
    if abs(float(np.sum(values)) - non_isolated) > INVARIANT_TOL:
        raise SpectralError(
            f"trace identity violated: sum {float(np.sum(values)):.12f} vs {non_isolated}")
    if is_connected(g):
        kernel = np.sqrt(g.degree_array)
        norm = float(np.linalg.norm(kernel))
        if norm > 0:
            kernel = kernel / norm
            if float(np.max(np.abs(m.array @ kernel))) > INVARIANT_TOL:
                raise SpectralError("degree-weighted constant vector is not in the kernel")
    return Spectrum(graph=g, values=values, eigvecs=vectors)


def lambda2(g: Graph) -> float:
    """Second smallest normalized Laplacian eigenvalue (0 iff disconnected)."""
    if g.n < 2:
        raise ValueError(f"lambda2 needs at least 2 vertices, got {g.n}")
    return spectrum(g).lambda2


def rho(g: Graph) -> float:
    """Largest normalized Laplacian eigenvalue (the spectral radius)."""
    return spectrum(g).rho


def _eigenspace_indices(values: np.ndarray, which: str) -> list:
    if which == SECOND_SMALLEST:
        target = values[1]
        return [k for k in range(1, len(values)) if abs(values[k] - target) <= MULTIPLICITY_TOL]
    if which == LARGEST:
        target = values[-1]
        return [k for k in range(len(values)) if abs(values[k] - target) <= MULTIPLICITY_TOL]
    raise ValueError(f"which must be {SECOND_SMALLEST!r} or {LARGEST!r}, got {which!r}")


def _sign_normalize(f: np.ndarray) -> np.ndarray:
    for x in f:
        if abs(x) > 1e-9:
            return f if x > 0 else -f
    return f


def _certify_eigenfunction(g: Graph, f: np.ndarray, lam: float) -> None:
    max_abs = float(np.max(np.abs(f)))
    if max_abs == 0.0:
        raise SpectralError("zero harmonic eigenfunction")
    ortho = abs(float(g.degree_array @ f))
    if ortho > INVARIANT_TOL * volume(g) * max_abs:
        raise SpectralError(f"eigenfunction not orthogonal to De: {ortho:.3e}")
    res = check_harmonic_equation(g, f, lam)
    if res > HARMONIC_EQ_TOL:
        raise SpectralError(f"harmonic equation residual {res:.3e} exceeds {HARMONIC_EQ_TOL}")


def harmonic_eigenfunctions(g: Graph, which: str) -> list:
    """One harmonic eigenfunction per basis vector of the target eigenspace.

    ``which`` selects the eigenspace of the second smallest or the largest
    eigenvalue, grouped by the multiplicity tolerance.  Requires a connected
    graph: on disconnected input the lambda_2 eigenspace consists of
    locally-constant functions and the orthogonality bookkeeping differs.
    """
    if g.n < 2:
        raise ValueError(f"need at least 2 vertices, got {g.n}")
    if not is_connected(g):
        raise DisconnectedGraphError("harmonic eigenfunctions require a connected graph")
    spec = spectrum(g)
    inv_sqrt = 1.0 / np.sqrt(g.degree_array)
    out = []
    for k in _eigenspace_indices(spec.values, which):
        f = _sign_normalize(spec.eigvecs[:, k] * inv_sqrt)
        f.flags.writeable = False
        func = HarmonicEigenfunction(f=f, lam=float(spec.values[k]), graph=g)
        _certify_eigenfunction(g, f, func.lam)
        out.append(func)
    return out


def combine_eigenfunctions(funcs, coeffs) -> HarmonicEigenfunction:
    """Linear combination within one eigenspace, renormalized.

    Useful for degenerate eigenvalues, where any combination of basis
    harmonic eigenfunctions is again a harmonic eigenfunction (in
    particular -f for a single f).
    """
    if not funcs:
        raise ValueError("need at least one eigenfunction")
    g = funcs[0].graph
    lam = funcs[0].lam
    for func in funcs[1:]:
        if func.graph != g:
            raise ValueError("eigenfunctions from different graphs")
        if abs(func.lam - lam) > MULTIPLICITY_TOL:
            raise ValueError("eigenfunctions from different eigenspaces")
    f = np.zeros(g.n)
    for c, func in zip(coeffs, funcs):
        f = f + c * func.f
    scale = float(np.sqrt(degree_norm_sq(g, f)))
    if scale == 0.0:
        raise ValueError("combination vanished")
    f = _sign_normalize(f / scale)
    f.flags.writeable = False
    func = HarmonicEigenfunction(f=f, lam=lam, graph=g)
    _certify_eigenfunction(g, f, lam)
    return func


# ---------------------------------------------------------------------------
# quadratic forms and pointwise checks
# ---------------------------------------------------------------------------

def dirichlet_sum(g: Graph, f) -> float:
    """sum over edges uv of (f(u) - f(v))^2, i.e. f^T L f."""
    f = np.asarray(f, dtype=float)
    if g.m == 0:
        return 0.0
    e = g.edge_array
    diff = f[e[:, 0]] - f[e[:, 1]]
    return float(diff @ diff)


def degree_norm_sq(g: Graph, f) -> float:
    """sum over vertices of d(v) f(v)^2, i.e. f^T D f."""
    f = np.asarray(f, dtype=float)
    return float(g.degree_array @ (f * f))


def degree_weighted_sum(g: Graph, f) -> float:
    """sum over vertices of d(v) f(v), i.e. f^T D e."""
    f = np.asarray(f, dtype=float)
    return float(g.degree_array @ f)


def rayleigh_quotient(g: Graph, f) -> float:
    """Generalized quotient f^T L f / f^T D f.

    For f orthogonal to De this lies between lambda_2 and rho of the graph.
    """
    denom = degree_norm_sq(g, f)
    if denom <= 0.0:
        raise ValueError("Rayleigh quotient undefined: f^T D f = 0 "
                         "(zero function or support only on isolated vertices)")
    return dirichlet_sum(g, f) / denom


def check_harmonic_equation(g: Graph, f, lam: float) -> float:
    """Max over vertices of |(1/d(v)) sum_{u~v} (f(v) - f(u)) - lam f(v)|."""
    f = np.asarray(f, dtype=float)
    worst = 0.0
    for v in range(g.n):
        d = g.degrees[v]
        if d == 0:
            raise ValueError(f"vertex {v} is isolated")
        acc = 0.0
        for u in g.neighbor_sets[v]:
            acc += f[v] - f[u]
        worst = max(worst, abs(acc / d - lam * f[v]))
    return worst


def check_neighbor_sum_zero(g: Graph, f) -> float:
    """Max over vertices of |sum_{u~v} f(u)|.

    Vanishes (within tolerance) for harmonic eigenfunctions at eigenvalue
    exactly 1, and likewise at spectral radius exactly 1.
    """
    f = np.asarray(f, dtype=float)
    worst = 0.0
    for v in range(g.n):
        acc = 0.0
        for u in g.neighbor_sets[v]:
            acc += f[u]
        worst = max(worst, abs(acc))
    return worst
