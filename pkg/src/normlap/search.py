"""Exhaustive enumeration of small labeled graphs and case-analysis mining.

Graphs on n vertices are identified with bitmasks over the C(n, 2) vertex
pairs in the same column-major order used by graph6, and are emitted in
ascending mask order.  No isomorphism reduction is attempted: redundant
labeled copies are scanned, which keeps the pipeline dependency-free and
exactly reproducible.

A scan stratifies every legal operation instance by the state of the rule's
precondition (Holds / Fails / Ambiguous, or Unconditional) and tallies the
observed order of the two eigenvalues.  Witnesses are stored per bucket with
their scan position, so that merged parallel partial results are
byte-identical to a sequential run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph_core import Graph, from_edges, parse_graph6, to_graph6
from .perturb import identify, subdivide_edge, transfer_edges
from .spectral import LARGEST, SECOND_SMALLEST, harmonic_eigenfunctions, lambda2, rho
from . import theorems
from .theorems import AMBIGUOUS, FAILS, HOLDS, UNCONDITIONAL

SCANNABLE = ("T3.1", "T3.3", "C3.4", "T3.6", "T4.1", "T4.2", "T4.3", "L2.4")

_OP_OF = {"T3.1": "I", "T4.1": "I", "T3.3": "II", "C3.4": "II", "T4.2": "II",
          "T3.6": "III", "T4.3": "III", "L2.4": "-"}
_TARGET_OF = {"T3.1": "lambda2", "T3.3": "lambda2", "C3.4": "lambda2", "T3.6": "lambda2",
              "L2.4": "lambda2", "T4.1": "rho", "T4.2": "rho", "T4.3": "rho"}


@dataclass(frozen=True)
class ScanConfig:
    """Bounds and tolerances for one scan."""

    n_max: int = 6
    max_transfer: int = 2
    witness_cap: int = 3
    eq_tol: float = 1e-6

    def __post_init__(self):
        if not 2 <= self.n_max <= 8:
            raise ValueError(f"n_max must be in 2..8, got {self.n_max}")
        if self.max_transfer < 1:
            raise ValueError(f"max_transfer must be >= 1, got {self.max_transfer}")
        if self.witness_cap < 0:
            raise ValueError(f"witness_cap must be >= 0, got {self.witness_cap}")


@dataclass(frozen=True)
class Witness:
    """One stored scan instance: enough to rebuild and re-check it."""

    graph6: str
    params: tuple  # sorted (key, value) pairs, JSON-compatible values
    lhs: float
    rhs: float
    scan_key: tuple

    def params_dict(self) -> dict:
        return dict(self.params)


@dataclass
class CaseTally:
    """Counts and witnesses for one precondition stratum of one scan."""

    operation: str
    target: str
    precondition_state: str
    counts: dict = field(default_factory=lambda: {"less": 0, "equal": 0, "greater": 0})
    witnesses: dict = field(default_factory=lambda: {"less": [], "equal": [], "greater": []})

    @property
    def total(self) -> int:
        return sum(self.counts.values())


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _pairs(n: int) -> tuple:
    return tuple((i, j) for j in range(1, n) for i in range(j))


def _mask_connected(n: int, mask: int, pairs) -> bool:
    if n == 1:
        return True
    if mask == 0:
        return False
    adj = [0] * n
    m = mask
    while m:
        k = (m & -m).bit_length() - 1
        u, v = pairs[k]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        m &= m - 1
    seen = 1
    frontier = 1
    full = (1 << n) - 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            k = (f & -f).bit_length() - 1
            nxt |= adj[k]
            f &= f - 1
        frontier = nxt & ~seen
        seen |= frontier
        if seen == full:
            return True
    return seen == full


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = _pairs(n)
    edges = []
    m = mask
    while m:
        k = (m & -m).bit_length() - 1
        edges.append(pairs[k])
        m &= m - 1
    return from_edges(n, edges)


def _connected_masks(n: int, lo: int = 0, hi: int | None = None):
    """(mask, Graph) for connected graphs with mask in [lo, hi)."""
    pairs = _pairs(n)
    if hi is None:
        hi = 1 << len(pairs)
    for mask in range(lo, hi):
        if _mask_connected(n, mask, pairs):
            yield mask, graph_from_mask(n, mask)


def enumerate_connected(n: int):
    """All connected labeled graphs on n vertices, ascending bitmask order."""
    if not 1 <= n <= 8:
        raise ValueError(f"n must be in 1..8, got {n}")
    for _, g in _connected_masks(n):
        yield g


def _tree_from_pruefer(n: int, seq) -> Graph:
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    edges = []
    avail = degree[:]
    for s in seq:
        leaf = next(i for i in range(n) if avail[i] == 1)
        edges.append((leaf, s))
        avail[leaf] -= 1
        avail[s] -= 1
    last = [i for i in range(n) if avail[i] == 1]
    edges.append((last[0], last[1]))
    return from_edges(n, edges)


def enumerate_trees(n: int):
    """All labeled trees on n vertices via Pruefer sequences (n^(n-2) of them)."""
    if not 1 <= n <= 8:
        raise ValueError(f"n must be in 1..8, got {n}")
    if n == 1:
        yield from_edges(1, [])
        return
    if n == 2:
        yield from_edges(2, [(0, 1)])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield _tree_from_pruefer(n, seq)


def read_graph6_stream(lines):
    """Graphs from an iterable of graph6 lines (blank lines skipped)."""
    for line in lines:
        line = line.strip()
        if line:
            yield parse_graph6(line)


# ---------------------------------------------------------------------------
# instance evaluation
# ---------------------------------------------------------------------------

def op3_parameter_sets(g: Graph, max_transfer: int):
    """Legal (u, v, targets) triples in deterministic order."""
    for u in range(g.n):
        nu = g.neighbor_sets[u]
        for v in range(g.n):
            if u == v:
                continue
            pool = sorted(g.neighbor_sets[v] - nu - {u})
            for size in range(1, min(max_transfer, len(pool)) + 1):
                for combo in itertools.combinations(pool, size):
                    yield u, v, combo


def _eval_single_graph(theorem_id: str, g: Graph, config: ScanConfig):
    """Yield (ordinal, params, state, lhs, rhs) for one base graph."""
    ordinal = 0
    if theorem_id == "L2.4":
        if g.n < 2 or g.m == g.n * (g.n - 1) // 2:
            return
        yield 0, {}, UNCONDITIONAL, lambda2(g), 1.0
        return
    if theorem_id in ("T3.1", "T4.1"):
        if g.n < 2:
            return
        if theorem_id == "T3.1":
            lhs = lambda2(g)
            for u, v in g.sorted_edges:
                rhs = lambda2(subdivide_edge(g, u, v).result)
                yield ordinal, {"u": u, "v": v}, UNCONDITIONAL, lhs, rhs
                ordinal += 1
        else:
            funcs = harmonic_eigenfunctions(g, LARGEST)
            lhs = rho(g)
            for u, v in g.sorted_edges:
                state, _ = theorems.classify_sign_product(funcs, u, v)
                rhs = rho(subdivide_edge(g, u, v).result)
                yield ordinal, {"u": u, "v": v}, state, lhs, rhs
                ordinal += 1
        return
    if theorem_id in ("T3.6", "T4.3"):
        if g.n < 2:
            return
        which = SECOND_SMALLEST if theorem_id == "T3.6" else LARGEST
        value = lambda2 if theorem_id == "T3.6" else rho
        funcs = harmonic_eigenfunctions(g, which)
        lhs = value(g)
        for u, v, targets in op3_parameter_sets(g, config.max_transfer):
            state, _ = theorems.classify_equal_values(funcs, u, v)
            rhs = value(transfer_edges(g, u, v, targets).result)
            yield ordinal, {"u": u, "v": v, "targets": list(targets)}, state, lhs, rhs
            ordinal += 1
        return
    raise ValueError(f"{theorem_id!r} is not scannable over single graphs")


def _eval_pair_instances(theorem_id: str, g1: Graph, config: ScanConfig):
    """Yield (ordinal, params, state, lhs, rhs) for identification instances
    with this first graph; second graphs are enumerated up to the order split."""
    ordinal = 0
    if theorem_id == "T4.2":
        funcs = harmonic_eigenfunctions(g1, LARGEST)
        base = rho(g1)
    else:
        base = lambda2(g1)
        funcs = None
    for n2 in range(2, config.n_max - g1.n + 2):
        for g2 in enumerate_connected(n2):
            g2_code = to_graph6(g2)
            for u in range(g1.n):
                for v in range(g2.n):
                    merged = identify(g1, u, g2, v).result
                    if theorem_id == "T3.3":
                        yield (ordinal, {"u": u, "v": v, "graph6_2": g2_code},
                               UNCONDITIONAL, base, lambda2(merged))
                    elif theorem_id == "C3.4":
                        yield (ordinal, {"u": u, "v": v, "graph6_2": g2_code},
                               UNCONDITIONAL, min(base, lambda2(g2)), lambda2(merged))
                    else:  # T4.2
                        state, _ = theorems.classify_zero_at(funcs, u)
                        yield (ordinal, {"u": u, "v": v, "graph6_2": g2_code},
                               state, rho(merged), base)
                    ordinal += 1


def _bucket(lhs: float, rhs: float, eq_tol: float) -> str:
    if lhs < rhs - eq_tol:
        return "less"
    if lhs > rhs + eq_tol:
        return "greater"
    return "equal"


def _is_pair_theorem(theorem_id: str) -> bool:
    return _OP_OF[theorem_id] == "II"


def _instances_for_graph(theorem_id, g, config):
    if _is_pair_theorem(theorem_id):
        if g.n < 2 or g.n > config.n_max - 1:
            return iter(())
        return _eval_pair_instances(theorem_id, g, config)
    return _eval_single_graph(theorem_id, g, config)


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------

def _new_tally(theorem_id, state):
    return CaseTally(operation=_OP_OF[theorem_id], target=_TARGET_OF[theorem_id],
                     precondition_state=state)


def _scan_base_graphs(theorem_id, config):
    """(scan_prefix, Graph) pairs for the scan, deterministic order."""
    top = config.n_max - 1 if _is_pair_theorem(theorem_id) else config.n_max
    for n in range(1, top + 1):
        for mask, g in _connected_masks(n):
            yield (n, mask), g


def _accumulate(tallies, theorem_id, config, prefix, g, cap):
    g6 = to_graph6(g)
    for ordinal, params, state, lhs, rhs in _instances_for_graph(theorem_id, g, config):
        bucket = _bucket(lhs, rhs, config.eq_tol)
        tally = tallies.get(state)
        if tally is None:
            tally = tallies[state] = _new_tally(theorem_id, state)
        tally.counts[bucket] += 1
        bucket_list = tally.witnesses[bucket]
        if len(bucket_list) < cap:
            bucket_list.append(Witness(
                graph6=g6,
                params=tuple(sorted(params.items(), key=lambda kv: kv[0])),
                lhs=lhs, rhs=rhs,
                scan_key=prefix + (ordinal,)))


def _scan_range(args):
    """Worker: scan one (n, mask range) chunk; returns plain tallies."""
    theorem_id, n, lo, hi, config = args
    tallies = {}
    for mask, g in _connected_masks(n, lo, hi):
        _accumulate(tallies, theorem_id, config, (n, mask), g, config.witness_cap)
    return tallies


def _merge_tallies(parts, cap):
    merged = {}
    for part in parts:
        for state, tally in part.items():
            into = merged.get(state)
            if into is None:
                merged[state] = tally
                continue
            for bucket in ("less", "equal", "greater"):
                into.counts[bucket] += tally.counts[bucket]
                into.witnesses[bucket].extend(tally.witnesses[bucket])
    for tally in merged.values():
        for bucket in ("less", "equal", "greater"):
            tally.witnesses[bucket] = sorted(
                tally.witnesses[bucket], key=lambda w: w.scan_key)[:cap]
    return merged


def scan_theorem(theorem_id: str, config: ScanConfig | None = None,
                 graphs=None, jobs: int = 1) -> dict:
    """Tally every legal instance of a rule over small connected graphs.

    Returns {precondition_state: CaseTally}.  ``graphs`` substitutes an
    external base-graph stream (e.g. decoded graph6 lines) for the native
    enumeration.  With jobs > 1 the bitmask space is chunked across a
    process pool; merged results are identical for any worker count.
    """
    if theorem_id not in SCANNABLE:
        raise ValueError(f"no instance scan for {theorem_id!r}; expected one of {SCANNABLE}")
    config = config or ScanConfig()
    if graphs is not None:
        tallies = {}
        for idx, g in enumerate(graphs):
            if g.n > config.n_max:
                continue
            _accumulate(tallies, theorem_id, config, (0, idx), g, config.witness_cap)
        return _merge_tallies([tallies], config.witness_cap)

    if jobs <= 1:
        parts = [_scan_range((theorem_id, n, 0, 1 << len(_pairs(n)), config))
                 for n in range(1, (config.n_max - 1 if _is_pair_theorem(theorem_id)
                                    else config.n_max) + 1)]
        return _merge_tallies(parts, config.witness_cap)

    import multiprocessing as mp

    chunks = []
    top = config.n_max - 1 if _is_pair_theorem(theorem_id) else config.n_max
    for n in range(1, top + 1):
        total = 1 << len(_pairs(n))
        step = max(1, total // (jobs * 4))
        for lo in range(0, total, step):
            chunks.append((theorem_id, n, lo, min(lo + step, total), config))
    with mp.Pool(jobs) as pool:
        parts = pool.map(_scan_range, chunks)
    return _merge_tallies(parts, config.witness_cap)


# ---------------------------------------------------------------------------
# witness mining
# ---------------------------------------------------------------------------

def _reverify(theorem_id, witness: Witness, state, bucket, config) -> bool:
    """Rebuild the instance from its serialized form and re-check it."""
    g = parse_graph6(witness.graph6)
    params = witness.params_dict()
    if theorem_id == "L2.4":
        verdict = theorems.check_lemma_2_4(g)
    elif theorem_id == "T3.1":
        verdict = theorems.check_thm_3_1(g, params["u"], params["v"])
    elif theorem_id == "T4.1":
        verdict = theorems.check_thm_4_1(g, params["u"], params["v"])
    elif theorem_id == "T3.6":
        verdict = theorems.check_thm_3_6(g, params["u"], params["v"], params["targets"])
    elif theorem_id == "T4.3":
        verdict = theorems.check_thm_4_3(g, params["u"], params["v"], params["targets"])
    elif theorem_id == "T3.3":
        g2 = parse_graph6(params["graph6_2"])
        verdict = theorems.check_thm_3_3(g, params["u"], g2, params["v"])
    elif theorem_id == "C3.4":
        g2 = parse_graph6(params["graph6_2"])
        verdict = theorems.check_cor_3_4(g, params["u"], g2, params["v"])
    elif theorem_id == "T4.2":
        g2 = parse_graph6(params["graph6_2"])
        verdict = theorems.check_thm_4_2(g, params["u"], g2, params["v"])
    else:
        raise ValueError(theorem_id)
    return (verdict.precondition == state
            and _bucket(verdict.lhs, verdict.rhs, config.eq_tol) == bucket
            and abs(verdict.lhs - witness.lhs) <= 1e-8
            and abs(verdict.rhs - witness.rhs) <= 1e-8)


def find_witness(theorem_id: str, precondition_state: str, direction: str,
                 config: ScanConfig | None = None, graphs=None) -> Witness | None:
    """First instance (in scan order) in the requested stratum and bucket.

    The hit is re-verified through a fresh pipeline (graph6 round trip plus
    the full checker) before being returned.  Exhausting the space without
    a hit returns None: that is a result, not a failure.
    """
    if theorem_id not in SCANNABLE:
        raise ValueError(f"no instance scan for {theorem_id!r}")
    if direction not in ("less", "equal", "greater"):
        raise ValueError(f"direction must be less/equal/greater, got {direction!r}")
    if precondition_state not in (HOLDS, FAILS, AMBIGUOUS, UNCONDITIONAL):
        raise ValueError(f"unknown precondition state {precondition_state!r}")
    config = config or ScanConfig()
    if graphs is not None:
        base = (((0, idx), g) for idx, g in enumerate(graphs) if g.n <= config.n_max)
    else:
        base = _scan_base_graphs(theorem_id, config)
    for prefix, g in base:
        g6 = to_graph6(g)
        for ordinal, params, state, lhs, rhs in _instances_for_graph(theorem_id, g, config):
            if state != precondition_state:
                continue
            if _bucket(lhs, rhs, config.eq_tol) != direction:
                continue
            witness = Witness(
                graph6=g6,
                params=tuple(sorted(params.items(), key=lambda kv: kv[0])),
                lhs=lhs, rhs=rhs,
                scan_key=prefix + (ordinal,))
            if not _reverify(theorem_id, witness, state, direction, config):
                raise RuntimeError(f"witness failed re-verification: {witness}")
            return witness
    return None
