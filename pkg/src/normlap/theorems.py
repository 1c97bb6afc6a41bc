"""Checkers for the eigenvalue monotonicity rules, one per claim.

Each checker evaluates its precondition on the relevant harmonic
eigenfunctions, computes both sides of the claimed inequality, and returns
a structured Verdict.  Conditional rules whose hypothesis fails on an
instance yield a vacuous pass: the observed relation is recorded (the
point of the case scans is precisely that both orders occur there), but
nothing is asserted.

Degenerate eigenvalues: the rules speak of "a harmonic eigenfunction",
which does not pick one out when the eigenspace has dimension > 1.  Policy:
predicates are evaluated on every basis function returned by the solver;
all-true gives Holds, all-false Fails, disagreement Ambiguous.  On an
Ambiguous verdict the conclusion is still required to hold, because some
admissible eigenfunction satisfies the hypothesis.

``replay_proof`` re-executes the constructive argument behind a rule on a
concrete instance: it builds the extension/shift vector used there (h with
h(w) = 0 or h(w) = f(u), the shifted p = h + c e', the constant extension
over the glued graph, or f' = f) and numerically asserts every identity and
inequality in the chain, step by step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .graph_core import Graph, GraphError, is_connected, is_tree, induced_subgraph, make_named, \
    NamedFamily, to_graph6, volume
from .perturb import identify, subdivide_edge, subdivision_graph, transfer_edges
from .spectral import (
    HarmonicEigenfunction,
    LARGEST,
    SECOND_SMALLEST,
    check_neighbor_sum_zero,
    degree_norm_sq,
    degree_weighted_sum,
    dirichlet_sum,
    harmonic_eigenfunctions,
    lambda2,
    rayleigh_quotient,
    rho,
    spectrum,
)

HOLDS = "Holds"
FAILS = "Fails"
AMBIGUOUS = "Ambiguous"
UNCONDITIONAL = "Unconditional"

#: Absolute tolerance for eigenvalue comparisons.
CMP_TOL = 1e-8
#: A strict inequality must open up at least this gap.
STRICT_GAP = 1e-6
#: f(u) = f(v) detection, scaled by ||f||_inf.
VALUE_EQ_TOL = 1e-7
#: f(u) = 0 detection (absolute; eigenfunctions are D-normalized).
ZERO_TOL = 1e-7
#: Slack on sign products, f(u) f(v) >= -SIGN_TOL counts as nonnegative.
SIGN_TOL = 1e-14
#: Identities in a replayed proof must hold to this relative residual.
REPLAY_TOL = 1e-9

THEOREM_IDS = ("L2.4", "C2.2", "C2.3", "T3.1", "C3.2", "T3.3", "C3.4", "C3.5",
               "T3.6", "T4.1", "T4.2", "T4.3")


class AmbiguousEigenspaceError(RuntimeError):
    """Eigenspace has dimension > 1 and no basis function was chosen."""


class HypothesisError(ValueError):
    """Replay instance does not satisfy the rule's hypothesis."""


@dataclass(frozen=True)
class Verdict:
    """Structured outcome of one rule check."""

    theorem_id: str
    precondition: str
    lhs: float
    rhs: float
    relation_required: str  # "<=" or ">="
    strict_expected: bool
    passed: bool
    tolerance_used: float
    graph6: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "theorem": self.theorem_id,
            "precondition": self.precondition,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation_required,
            "strict_expected": self.strict_expected,
            "pass": self.passed,
            "graph6": self.graph6,
            "params": {**self.params, "tolerance_used": self.tolerance_used},
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "Verdict":
        obj = json.loads(line)
        params = dict(obj["params"])
        tol = params.pop("tolerance_used")
        return cls(
            theorem_id=obj["theorem"],
            precondition=obj["precondition"],
            lhs=obj["lhs"],
            rhs=obj["rhs"],
            relation_required=obj["relation"],
            strict_expected=obj["strict_expected"],
            passed=obj["pass"],
            tolerance_used=tol,
            graph6=obj["graph6"],
            params=params,
        )


@dataclass(frozen=True)
class ProofStep:
    label: str
    kind: str  # "identity" or "inequality"
    relation: str  # "=", "<=", ">="
    lhs: float
    rhs: float
    residual: float
    holds: bool


@dataclass(frozen=True)
class ProofTrace:
    theorem_id: str
    steps: tuple
    all_hold: bool


# ---------------------------------------------------------------------------
# precondition classification (multiplicity policy)
# ---------------------------------------------------------------------------

def _classify(funcs, predicate):
    flags = tuple(bool(predicate(fn)) for fn in funcs)
    if all(flags):
        return HOLDS, flags
    if not any(flags):
        return FAILS, flags
    return AMBIGUOUS, flags


def classify_equal_values(funcs, u: int, v: int):
    """Holds/Fails/Ambiguous for f(u) = f(v), at 1e-7 scaled by ||f||_inf."""
    return _classify(funcs, lambda fn: abs(fn.f[u] - fn.f[v]) <= VALUE_EQ_TOL * fn.max_abs)


def classify_sign_product(funcs, u: int, v: int):
    """Holds/Fails/Ambiguous for f(u) f(v) >= 0 (within -1e-14 slack)."""
    return _classify(funcs, lambda fn: fn.f[u] * fn.f[v] >= -SIGN_TOL)


def classify_zero_at(funcs, u: int):
    """Holds/Fails/Ambiguous for f(u) = 0 (absolute 1e-7)."""
    return _classify(funcs, lambda fn: abs(fn.f[u]) <= ZERO_TOL)


def _all_nonzero_at(funcs, *vertices) -> bool:
    return all(all(abs(fn.f[x]) > ZERO_TOL for x in vertices) for fn in funcs)


def _relation_holds(lhs: float, rhs: float, relation: str, tol: float) -> bool:
    if relation == ">=":
        return lhs >= rhs - tol
    if relation == "<=":
        return lhs <= rhs + tol
    raise ValueError(f"unknown relation {relation!r}")


def _verdict(theorem_id, precondition, lhs, rhs, relation, strict_expected,
             graph6, params, tol=CMP_TOL) -> Verdict:
    if precondition == FAILS:
        passed = True  # vacuous: hypothesis absent, relation only recorded
    else:
        passed = _relation_holds(lhs, rhs, relation, tol)
        if passed and strict_expected and precondition == HOLDS:
            gap = lhs - rhs if relation == ">=" else rhs - lhs
            passed = gap > STRICT_GAP
    return Verdict(
        theorem_id=theorem_id,
        precondition=precondition,
        lhs=float(lhs),
        rhs=float(rhs),
        relation_required=relation,
        strict_expected=strict_expected,
        passed=passed,
        tolerance_used=tol,
        graph6=graph6,
        params=params,
    )


def _require_connected(g: Graph, label: str = "graph") -> None:
    if not is_connected(g):
        raise GraphError(f"{label} must be connected")


# ---------------------------------------------------------------------------
# preliminary rules
# ---------------------------------------------------------------------------

def check_lemma_2_4(g: Graph) -> Verdict:
    """Connected non-complete graphs have lambda_2 <= 1."""
    _require_connected(g)
    if g.m == g.n * (g.n - 1) // 2:
        raise GraphError("rule applies only to non-complete graphs")
    return _verdict("L2.4", UNCONDITIONAL, lambda2(g), 1.0, "<=", False,
                    to_graph6(g), {})


def check_cor_2_2(g: Graph) -> Verdict:
    """If lambda_2 = 1 then every neighbor sum of a harmonic eigenfunction vanishes."""
    _require_connected(g)
    lam = lambda2(g)
    precondition = HOLDS if abs(lam - 1.0) <= VALUE_EQ_TOL else FAILS
    worst = 0.0
    if precondition == HOLDS:
        funcs = harmonic_eigenfunctions(g, SECOND_SMALLEST)
        worst = max(check_neighbor_sum_zero(g, fn.f) for fn in funcs)
    return _verdict("C2.2", precondition, worst, 0.0, "<=", False,
                    to_graph6(g), {"lambda2": lam}, tol=ZERO_TOL)


def check_cor_2_3(n: int) -> Verdict:
    """Stars have lambda_2 = 1 and every harmonic eigenfunction vanishes
    at the center."""
    if n < 3:
        raise GraphError(f"star rule needs n >= 3, got {n}")
    g = make_named(NamedFamily("star", n))
    lam = lambda2(g)
    funcs = harmonic_eigenfunctions(g, SECOND_SMALLEST)
    center_worst = max(abs(fn.f[0]) for fn in funcs)
    verdict = _verdict("C2.3", UNCONDITIONAL, center_worst, 0.0, "<=", False,
                       to_graph6(g), {"n": n, "lambda2": lam}, tol=ZERO_TOL)
    if abs(lam - 1.0) > CMP_TOL:
        verdict = replace(verdict, passed=False)
    return verdict


# ---------------------------------------------------------------------------
# lambda_2 under the three operations
# ---------------------------------------------------------------------------

def check_thm_3_1(g: Graph, u: int, v: int) -> Verdict:
    """Subdividing an edge cannot increase lambda_2; strictly decreases it
    when every basis eigenfunction is nonzero at both endpoints."""
    _require_connected(g)
    res = subdivide_edge(g, u, v)
    funcs = harmonic_eigenfunctions(g, SECOND_SMALLEST)
    strict = _all_nonzero_at(funcs, u, v)
    return _verdict("T3.1", UNCONDITIONAL, lambda2(g), lambda2(res.result), ">=", strict,
                    to_graph6(g),
                    {"u": u, "v": v,
                     "basis_nonzero": [bool(abs(fn.f[u]) > ZERO_TOL and abs(fn.f[v]) > ZERO_TOL)
                                       for fn in funcs]})


def check_cor_3_2(g: Graph, edges) -> Verdict:
    """lambda_2 of a subdivision of G is at most lambda_2 of G."""
    _require_connected(g)
    res = subdivision_graph(g, edges)
    return _verdict("C3.2", UNCONDITIONAL, lambda2(g), lambda2(res.result), ">=", False,
                    to_graph6(g), {"edges": sorted(map(list, {(min(a, b), max(a, b))
                                                              for a, b in edges}))})


def check_thm_3_3(g1: Graph, u: int, g2: Graph, v: int) -> Verdict:
    """Gluing a second graph onto G1 cannot increase lambda_2 beyond
    lambda_2(G1); strict when the eigenfunctions of G1 are nonzero at u."""
    _require_connected(g1, "first graph")
    _require_connected(g2, "second graph")
    res = identify(g1, u, g2, v)
    funcs = harmonic_eigenfunctions(g1, SECOND_SMALLEST)
    strict = _all_nonzero_at(funcs, u)
    return _verdict("T3.3", UNCONDITIONAL, lambda2(g1), lambda2(res.result), ">=", strict,
                    to_graph6(g1),
                    {"u": u, "v": v, "graph6_2": to_graph6(g2),
                     "basis_nonzero": [bool(abs(fn.f[u]) > ZERO_TOL) for fn in funcs]})


def check_cor_3_4(g1: Graph, u: int, g2: Graph, v: int) -> Verdict:
    """lambda_2 of the glued graph is at most min of the two inputs'."""
    _require_connected(g1, "first graph")
    _require_connected(g2, "second graph")
    if g1.n < 2 or g2.n < 2:
        raise GraphError("both graphs need at least 2 vertices")
    res = identify(g1, u, g2, v)
    return _verdict("C3.4", UNCONDITIONAL, min(lambda2(g1), lambda2(g2)),
                    lambda2(res.result), ">=", False,
                    to_graph6(g1), {"u": u, "v": v, "graph6_2": to_graph6(g2)})


def check_cor_3_5(t: Graph, subtree_vertices) -> Verdict:
    """A subtree of a tree has lambda_2 at least that of the full tree."""
    if not is_tree(t):
        raise GraphError("input is not a tree")
    vs = sorted(set(subtree_vertices))
    if len(vs) < 2:
        raise GraphError("subtree needs at least 2 vertices")
    sub = induced_subgraph(t, vs)
    if not is_tree(sub):
        raise GraphError("vertex subset does not induce a subtree")
    return _verdict("C3.5", UNCONDITIONAL, lambda2(t), lambda2(sub), "<=", False,
                    to_graph6(t), {"subtree": vs})


def check_thm_3_6(g: Graph, u: int, v: int, targets) -> Verdict:
    """Transferring edges from v to u cannot increase lambda_2 provided
    some lambda_2 harmonic eigenfunction takes equal values at u and v.

    When the hypothesis fails outright the verdict is a vacuous pass that
    records the observed relation: all three orders genuinely occur there.
    """
    _require_connected(g)
    res = transfer_edges(g, u, v, targets)
    funcs = harmonic_eigenfunctions(g, SECOND_SMALLEST)
    state, flags = classify_equal_values(funcs, u, v)
    return _verdict("T3.6", state, lambda2(g), lambda2(res.result), ">=", False,
                    to_graph6(g),
                    {"u": u, "v": v, "targets": sorted(targets),
                     "basis_flags": list(flags),
                     "result_disconnected": res.disconnected})


# ---------------------------------------------------------------------------
# rho under the three operations
# ---------------------------------------------------------------------------

def check_thm_4_1(g: Graph, u: int, v: int) -> Verdict:
    """Subdividing an edge cannot decrease rho when the spectral-radius
    eigenfunction has a nonnegative product at the endpoints."""
    _require_connected(g)
    res = subdivide_edge(g, u, v)
    funcs = harmonic_eigenfunctions(g, LARGEST)
    state, flags = classify_sign_product(funcs, u, v)
    strict_state, _ = _classify(funcs, lambda fn: fn.f[u] * fn.f[v] > ZERO_TOL)
    return _verdict("T4.1", state, rho(g), rho(res.result), "<=",
                    strict_state == HOLDS,
                    to_graph6(g),
                    {"u": u, "v": v, "basis_flags": list(flags)})


def check_thm_4_2(g1: Graph, u: int, g2: Graph, v: int) -> Verdict:
    """Gluing onto a vertex where the spectral-radius eigenfunction of G1
    vanishes cannot decrease rho."""
    _require_connected(g1, "first graph")
    _require_connected(g2, "second graph")
    if g1.n < 2:
        raise GraphError("first graph needs at least 2 vertices")
    res = identify(g1, u, g2, v)
    funcs = harmonic_eigenfunctions(g1, LARGEST)
    state, flags = classify_zero_at(funcs, u)
    return _verdict("T4.2", state, rho(res.result), rho(g1), ">=", False,
                    to_graph6(g1),
                    {"u": u, "v": v, "graph6_2": to_graph6(g2),
                     "basis_flags": list(flags)})


def check_thm_4_3(g: Graph, u: int, v: int, targets) -> Verdict:
    """Transferring edges from v to u cannot decrease rho provided some
    spectral-radius eigenfunction takes equal values at u and v."""
    _require_connected(g)
    res = transfer_edges(g, u, v, targets)
    funcs = harmonic_eigenfunctions(g, LARGEST)
    state, flags = classify_equal_values(funcs, u, v)
    return _verdict("T4.3", state, rho(g), rho(res.result), "<=", False,
                    to_graph6(g),
                    {"u": u, "v": v, "targets": sorted(targets),
                     "basis_flags": list(flags),
                     "result_disconnected": res.disconnected})


# ---------------------------------------------------------------------------
# proof replay
# ---------------------------------------------------------------------------

def _step_identity(label, lhs, rhs):
    scale = max(1.0, abs(lhs), abs(rhs))
    residual = abs(lhs - rhs)
    return ProofStep(label, "identity", "=", float(lhs), float(rhs),
                     residual, residual <= REPLAY_TOL * scale)


def _step_inequality(label, lhs, rhs, relation):
    scale = max(1.0, abs(lhs), abs(rhs))
    violation = (rhs - lhs) if relation == ">=" else (lhs - rhs)
    residual = max(0.0, violation)
    return ProofStep(label, "inequality", relation, float(lhs), float(rhs),
                     residual, residual <= REPLAY_TOL * scale)


def _select_function(g: Graph, which: str, eigenfunction) -> HarmonicEigenfunction:
    if eigenfunction is not None:
        if eigenfunction.graph != g:
            raise ValueError("explicit eigenfunction belongs to a different graph")
        spec = spectrum(g)
        target = spec.values[1] if which == SECOND_SMALLEST else spec.values[-1]
        if abs(eigenfunction.lam - target) > 1e-7:
            raise ValueError("explicit eigenfunction is not in the target eigenspace")
        return eigenfunction
    funcs = harmonic_eigenfunctions(g, which)
    if len(funcs) > 1:
        raise AmbiguousEigenspaceError(
            f"eigenspace has dimension {len(funcs)}; pass an explicit eigenfunction")
    return funcs[0]


def _extend(f: np.ndarray, n_new: int, fill_pairs) -> np.ndarray:
    h = np.zeros(n_new)
    h[:len(f)] = f
    for idx, val in fill_pairs:
        h[idx] = val
    return h


def _replay_subdivision(theorem_id, g, u, v, eigenfunction):
    which = SECOND_SMALLEST if theorem_id == "T3.1" else LARGEST
    fn = _select_function(g, which, eigenfunction)
    f = fn.f
    res = subdivide_edge(g, u, v)
    gp = res.result
    w = res.new_vertices[0]
    product = float(f[u] * f[v])
    steps = [
        _step_identity("f ⊥ De", degree_weighted_sum(g, f), 0.0),
        _step_identity("eigenvalue = fᵀLf / fᵀDf", rayleigh_quotient(g, f), fn.lam),
    ]
    if theorem_id == "T4.1":
        if product < -SIGN_TOL:
            raise HypothesisError(f"f(u) f(v) = {product:.3e} < 0")
        h = _extend(f, gp.n, [(w, 0.0)])
        steps += [
            _step_identity("h ⊥ D'e'", degree_weighted_sum(gp, h), 0.0),
            _step_identity("hᵀD'h = fᵀDf", degree_norm_sq(gp, h), degree_norm_sq(g, f)),
            _step_identity("hᵀL'h = fᵀLf + 2 f(u) f(v)",
                           dirichlet_sum(gp, h), dirichlet_sum(g, f) + 2 * product),
            _step_inequality("hᵀL'h ≥ fᵀLf", dirichlet_sum(gp, h), dirichlet_sum(g, f), ">="),
            _step_inequality("hᵀL'h / hᵀD'h ≤ ρ(G')",
                             dirichlet_sum(gp, h) / degree_norm_sq(gp, h), rho(gp), "<="),
            _step_inequality("ρ(G) ≤ ρ(G')", fn.lam, rho(gp), "<="),
        ]
    elif product <= 0.0:
        # nonpositive product: extend by h(w) = 0
        h = _extend(f, gp.n, [(w, 0.0)])
        steps += [
            _step_identity("h ⊥ D'e'", degree_weighted_sum(gp, h), 0.0),
            _step_identity("hᵀD'h = fᵀDf", degree_norm_sq(gp, h), degree_norm_sq(g, f)),
            _step_identity("hᵀL'h = fᵀLf + 2 f(u) f(v)",
                           dirichlet_sum(gp, h), dirichlet_sum(g, f) + 2 * product),
            _step_inequality("hᵀL'h ≤ fᵀLf", dirichlet_sum(gp, h), dirichlet_sum(g, f), "<="),
            _step_inequality("hᵀL'h / hᵀD'h ≥ λ₂(G')",
                             dirichlet_sum(gp, h) / degree_norm_sq(gp, h), lambda2(gp), ">="),
            _step_inequality("λ₂(G) ≥ λ₂(G')", fn.lam, lambda2(gp), ">="),
        ]
    else:
        # positive product: extend by h(w) = f(u), then shift onto De-orthogonal p
        vol = volume(g)
        c = -2.0 * float(f[u]) / (vol + 2)
        h = _extend(f, gp.n, [(w, float(f[u]))])
        p = h + c
        steps += [
            _step_identity("hᵀL'h = fᵀLf", dirichlet_sum(gp, h), dirichlet_sum(g, f)),
            _step_identity("hᵀD'e' = 2 f(u)", degree_weighted_sum(gp, h), 2.0 * float(f[u])),
            _step_identity("c = -2 f(u) / (Vol(G) + 2)", c, -2.0 * float(f[u]) / (vol + 2)),
            _step_identity("p ⊥ D'e'", degree_weighted_sum(gp, p), 0.0),
            _step_identity("pᵀL'p = fᵀLf", dirichlet_sum(gp, p), dirichlet_sum(g, f)),
            _step_identity(
                "pᵀD'p = fᵀDf + 2 f(u)² Vol (2+Vol) / (2+Vol)²",
                degree_norm_sq(gp, p),
                degree_norm_sq(g, f) + 2 * f[u] ** 2 * vol * (2 + vol) / (2 + vol) ** 2),
            _step_inequality("pᵀD'p ≥ fᵀDf", degree_norm_sq(gp, p), degree_norm_sq(g, f), ">="),
            _step_inequality("pᵀL'p / pᵀD'p ≥ λ₂(G')",
                             dirichlet_sum(gp, p) / degree_norm_sq(gp, p), lambda2(gp), ">="),
            _step_inequality("λ₂(G) ≥ λ₂(G')", fn.lam, lambda2(gp), ">="),
        ]
    return steps


def _replay_identification(theorem_id, g1, u, g2, v, eigenfunction):
    which = SECOND_SMALLEST if theorem_id == "T3.3" else LARGEST
    fn = _select_function(g1, which, eigenfunction)
    f1 = fn.f
    res = identify(g1, u, g2, v)
    g = res.result
    map2 = res.old_to_new_2
    vol1, vol2 = volume(g1), volume(g2)
    steps = [
        _step_identity("f₁ ⊥ D₁e₁", degree_weighted_sum(g1, f1), 0.0),
        _step_identity("eigenvalue = f₁ᵀL₁f₁ / f₁ᵀD₁f₁", rayleigh_quotient(g1, f1), fn.lam),
    ]
    if theorem_id == "T3.3":
        # constant extension by f1(u) over the glued graph, then shift
        f = np.zeros(g.n)
        f[:g1.n] = f1
        for y in range(g2.n):
            if y != v:
                f[map2[y]] = f1[u]
        c = -float(f1[u]) * vol2 / (vol1 + vol2)
        h = f + c
        steps += [
            _step_identity("fᵀLf = f₁ᵀL₁f₁", dirichlet_sum(g, f), dirichlet_sum(g1, f1)),
            _step_identity("fᵀDe = f₁(u) Vol(G₂)",
                           degree_weighted_sum(g, f), float(f1[u]) * vol2),
            _step_identity("fᵀDf = f₁ᵀD₁f₁ + f₁(u)² Vol(G₂)",
                           degree_norm_sq(g, f),
                           degree_norm_sq(g1, f1) + float(f1[u]) ** 2 * vol2),
            _step_identity("c = -f₁(u) Vol(G₂) / (Vol(G₁) + Vol(G₂))",
                           c, -float(f1[u]) * vol2 / (vol1 + vol2)),
            _step_identity("h ⊥ De", degree_weighted_sum(g, h), 0.0),
            _step_identity("hᵀLh = fᵀLf", dirichlet_sum(g, h), dirichlet_sum(g, f)),
            _step_identity(
                "hᵀDh = f₁ᵀD₁f₁ + f₁(u)² Vol₁ Vol₂ / (Vol₁ + Vol₂)",
                degree_norm_sq(g, h),
                degree_norm_sq(g1, f1) + float(f1[u]) ** 2 * vol1 * vol2 / (vol1 + vol2)),
            _step_inequality("hᵀDh ≥ f₁ᵀD₁f₁",
                             degree_norm_sq(g, h), degree_norm_sq(g1, f1), ">="),
            _step_inequality("hᵀLh / hᵀDh ≥ λ₂(G)",
                             dirichlet_sum(g, h) / degree_norm_sq(g, h), lambda2(g), ">="),
            _step_inequality("λ₂(G₁) ≥ λ₂(G)", fn.lam, lambda2(g), ">="),
        ]
    else:  # T4.2: zero extension, needs f1(u) = 0
        if abs(float(f1[u])) > ZERO_TOL:
            raise HypothesisError(f"f₁(u) = {float(f1[u]):.3e} is not 0")
        f = np.zeros(g.n)
        f[:g1.n] = f1
        steps += [
            _step_identity("f₁(u) = 0", float(f1[u]), 0.0),
            _step_identity("fᵀDf = f₁ᵀD₁f₁", degree_norm_sq(g, f), degree_norm_sq(g1, f1)),
            _step_identity("fᵀLf = f₁ᵀL₁f₁", dirichlet_sum(g, f), dirichlet_sum(g1, f1)),
            _step_identity("f ⊥ De", degree_weighted_sum(g, f), 0.0),
            _step_inequality("fᵀLf / fᵀDf ≤ ρ(G)", rayleigh_quotient(g, f), rho(g), "<="),
            _step_inequality("ρ(G₁) ≤ ρ(G)", fn.lam, rho(g), "<="),
        ]
    return steps


def _replay_transfer(theorem_id, g, u, v, targets, eigenfunction):
    which = SECOND_SMALLEST if theorem_id == "T3.6" else LARGEST
    fn = _select_function(g, which, eigenfunction)
    f = fn.f
    if abs(float(f[u]) - float(f[v])) > VALUE_EQ_TOL * fn.max_abs:
        raise HypothesisError(
            f"f(u) = {float(f[u]):.6g} and f(v) = {float(f[v]):.6g} are not equal")
    res = transfer_edges(g, u, v, targets)
    gp = res.result
    steps = [
        _step_identity("f ⊥ De", degree_weighted_sum(g, f), 0.0),
        _step_identity("eigenvalue = fᵀLf / fᵀDf", rayleigh_quotient(g, f), fn.lam),
        _step_identity("f(u) = f(v)", float(f[u]), float(f[v])),
        _step_identity("f'ᵀL'f' = fᵀLf", dirichlet_sum(gp, f), dirichlet_sum(g, f)),
        _step_identity("f'ᵀD'f' = fᵀDf", degree_norm_sq(gp, f), degree_norm_sq(g, f)),
        _step_identity("f' ⊥ D'e", degree_weighted_sum(gp, f), 0.0),
    ]
    if theorem_id == "T3.6":
        steps += [
            _step_inequality("f'ᵀL'f' / f'ᵀD'f' ≥ λ₂(G')",
                             dirichlet_sum(gp, f) / degree_norm_sq(gp, f), lambda2(gp), ">="),
            _step_inequality("λ₂(G) ≥ λ₂(G')", fn.lam, lambda2(gp), ">="),
        ]
    else:
        steps += [
            _step_inequality("f'ᵀL'f' / f'ᵀD'f' ≤ ρ(G')",
                             dirichlet_sum(gp, f) / degree_norm_sq(gp, f), rho(gp), "<="),
            _step_inequality("ρ(G) ≤ ρ(G')", fn.lam, rho(gp), "<="),
        ]
    return steps


def replay_proof(theorem_id: str, *args, eigenfunction=None) -> ProofTrace:
    """Re-run the constructive argument behind a rule on one instance.

    ``args`` are the same positional arguments the corresponding checker
    takes.  When the relevant eigenvalue is degenerate an explicit basis
    function (or any in-eigenspace combination) must be supplied; combining
    basis functions to satisfy the hypothesis exactly is legitimate,
    because any nonzero member of the eigenspace is a harmonic
    eigenfunction.
    """
    if theorem_id in ("T3.1", "T4.1"):
        g, u, v = args
        steps = _replay_subdivision(theorem_id, g, u, v, eigenfunction)
    elif theorem_id in ("T3.3", "T4.2"):
        g1, u, g2, v = args
        steps = _replay_identification(theorem_id, g1, u, g2, v, eigenfunction)
    elif theorem_id in ("T3.6", "T4.3"):
        g, u, v, targets = args
        steps = _replay_transfer(theorem_id, g, u, v, targets, eigenfunction)
    else:
        raise ValueError(f"no proof replay for {theorem_id!r}")
    steps = tuple(steps)
    return ProofTrace(theorem_id=theorem_id, steps=steps,
                      all_hold=all(s.holds for s in steps))
