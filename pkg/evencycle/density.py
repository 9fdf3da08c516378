"""
Constructive density certificate.

If Σ_{u∈R_ℓ(v)} deg(u) > τ·n with τ = 6·(2k)^ℓ, the graph holds a 2k-cycle.
This module builds that cycle explicitly:

  build_H            bipartite H ⊆ G around R_ℓ(v) with more than τn/6 edges
  compute_in_out     virtual broadcast of H's edges: IN_i(u), OUT_i(u) per level,
                     peeling the large per-y slices into cores
  extract_cycle_from_core
                     a nonempty Core_i(u) yields paths P, P', P'' whose union
                     is a 2k-cycle

Edges of H are stored oriented as (x, y) with x ∈ X and y ∈ Y.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field

from evencycle.errors import InvariantViolation, PreconditionError, check
from evencycle.graph import is_simple_path, iter_simple_paths, local_density, reach_exact, verify_cycle

log = logging.getLogger(__name__)

SOURCE_INTERNAL = "internal"
SOURCE_EXTERNAL = "external"


def tau(k, ell):
    return 6 * (2 * k) ** ell


# ------------------ 4-cycles from neighbourhood density ------------------
def c4_local_density_witness(g, v):
    """(v, u, y, u') for the least y ≠ v with two neighbours u < u' in N(v)."""
    if sum(g.degree(u) for u in g.neighbors(v)) <= 2 * g.n:
        raise PreconditionError(f"neighbourhood degree sum of node {v} does not exceed 2n={2 * g.n}")
    via = defaultdict(list)
    for u in g.neighbors(v):
        for y in g.neighbors(u):
            if y != v:
                via[y].append(u)
    y = min(y for y, us in via.items() if len(us) >= 2)
    u, u2 = sorted(via[y])[:2]
    witness = (v, u, y, u2)
    check(verify_cycle(g, witness, 4), f"bad 4-cycle {witness}")
    return witness


# ------------------ Bipartite H ------------------
def max_cut_bipartition(edges):
    """Greedy cut: place vertices by ascending id on the side with fewer placed neighbours."""
    nbrs = defaultdict(set)
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    sides = {}
    for w in sorted(nbrs):
        same = [0, 0]
        for z in nbrs[w]:
            if z in sides:
                same[sides[z]] += 1
        sides[w] = 0 if same[0] <= same[1] else 1
    return sides


def burr_crossing(edges, sides):
    return sorted((a, b) for a, b in edges if sides[a] != sides[b])


@dataclass(frozen=True)
class BipartiteH:
    X: frozenset
    Y: frozenset
    edges: frozenset
    source_kind: str
    reach: frozenset = frozenset()
    _incident: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inc = defaultdict(set)
        for x, y in self.edges:
            inc[x].add((x, y))
            inc[y].add((x, y))
        object.__setattr__(self, "_incident", {w: frozenset(es) for w, es in inc.items()})

    def incident(self, w):
        """E_H(w)."""
        return self._incident.get(w, frozenset())


def build_H(g, v, ell):
    reach = reach_exact(g, v, ell)
    f_int, f_ext = [], []
    for a, b in g.sorted_edges():
        ina, inb = a in reach, b in reach
        if ina and inb:
            f_int.append((a, b))
        elif ina:
            f_ext.append((a, b))
        elif inb:
            f_ext.append((b, a))
    sides = max_cut_bipartition(f_int)
    cut = burr_crossing(f_int, sides)
    check(2 * len(cut) >= len(f_int), f"cut keeps {len(cut)} of {len(f_int)} edges")
    if len(cut) >= len(f_ext):
        touched = {w for e in cut for w in e}
        side0 = [w for w in touched if sides[w] == 0]
        side1 = [w for w in touched if sides[w] == 1]
        x_side = 0 if not side1 or (side0 and min(side0) < min(side1)) else 1
        edges = frozenset((a, b) if sides[a] == x_side else (b, a) for a, b in cut)
        kind = SOURCE_INTERNAL
    else:
        edges = frozenset(f_ext)
        kind = SOURCE_EXTERNAL
    X = frozenset(x for x, _ in edges)
    Y = frozenset(y for _, y in edges)
    check(X <= reach and not X & Y, "X must lie in R_ℓ(v) and be disjoint from Y")
    log.debug("H for v=%d ell=%d: %s, |X|=%d |Y|=%d |E_H|=%d", v, ell, kind, len(X), len(Y), len(edges))
    return BipartiteH(X, Y, edges, kind, frozenset(reach))


# ------------------ Peeling ------------------
@dataclass(frozen=True)
class CoreGraph:
    i: int
    u: int
    x_nodes: frozenset
    y_nodes: frozenset
    edges: frozenset
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = defaultdict(set)
        for x, y in self.edges:
            adj[x].add(y)
            adj[y].add(x)
        object.__setattr__(self, "_adj", {w: tuple(sorted(s)) for w, s in adj.items()})

    def __bool__(self):
        return bool(self.edges)

    def degree(self, w):
        return len(self._adj.get(w, ()))

    def neighbors(self, w):
        return self._adj.get(w, ())


def peel(h_iu, k, i=0, u=None):
    """Alternate removing X-vertices then Y-vertices of degree < k until stable.

    Edges that leave together with a Y-vertex are that vertex's OUT set.
    Returns (core, removed_out).
    """
    by_x = defaultdict(set)
    by_y = defaultdict(set)
    for e in h_iu:
        by_x[e[0]].add(e)
        by_y[e[1]].add(e)
    removed_out = {}
    while True:
        low_x = sorted(x for x, es in by_x.items() if len(es) < k)
        for x in low_x:
            for e in by_x.pop(x):
                by_y[e[1]].discard(e)
        low_y = sorted(y for y, es in by_y.items() if len(es) < k)
        for y in low_y:
            es = by_y.pop(y)
            removed_out[y] = frozenset(es)
            for e in es:
                by_x[e[0]].discard(e)
        if not low_x and not low_y:
            break
    edges = frozenset(e for es in by_y.values() for e in es)
    core = CoreGraph(i, u, frozenset(x for x, es in by_x.items() if es), frozenset(by_y), edges)
    return core, removed_out


# ------------------ IN / OUT table ------------------
@dataclass
class InOutTable:
    g: object
    h: BipartiteH
    ell: int
    k: int
    in_sets: list
    out_sets: list
    feeders: list
    cores: dict

    def in_edges(self, i, u):
        return self.in_sets[i].get(u, frozenset())

    def out_edges(self, i, u):
        return self.out_sets[i].get(u, frozenset())

    def in_slice(self, i, u, w):
        """IN_i(w, u) = E_H(w) ∩ IN_i(u)."""
        return self.h.incident(w) & self.in_edges(i, u)

    def out_slice(self, i, u, w):
        """OUT_i(w, u) = E_H(w) ∩ OUT_i(u)."""
        return self.h.incident(w) & self.out_edges(i, u)

    def predecessor(self, i, u, e):
        """Least-id feeder of u at level i whose OUT_{i-1} carries e."""
        return next((w for w in self.feeders[i].get(u, ()) if e in self.out_edges(i - 1, w)), None)


def _feeds(g, w, u, length, X):
    """Some simple path of `length` edges from w into X avoids u."""
    if length == 0:
        return w in X
    return any(p[-1] in X for p in iter_simple_paths(g, w, length, avoid=(u,)))


def compute_in_out(g, h, ell, k):
    X = h.X
    threshold_of = [(2 * k) ** i for i in range(ell + 1)]
    in_sets = [{}]
    out_sets = [{x: h.incident(x) for x in X}]
    feeders = [{}]
    cores = {}
    for i in range(1, ell + 1):
        big = threshold_of[i]
        prev = out_sets[i - 1]
        ins, outs, feeds = {}, {}, {}
        for u in range(g.n):
            ws = tuple(w for w in g.neighbors(u) if prev.get(w) and _feeds(g, w, u, i - 1, X))
            if not ws:
                continue
            feeds[u] = ws
            incoming = frozenset().union(*(prev[w] for w in ws))
            ins[u] = incoming
            per_y = defaultdict(set)
            for e in incoming:
                per_y[e[1]].add(e)
            out = set()
            large = []
            for y, es in per_y.items():
                if len(es) < big:
                    out |= es
                else:
                    large.append(y)
            core, removed = peel([e for y in large for e in per_y[y]], k, i, u)
            for y, es in removed.items():
                check(len(es) < big, f"OUT_{i}({y},{u}) has {len(es)} >= {big} edges")
                out |= es
            for w in ws:
                check(prev[w] <= incoming, f"OUT_{i - 1}({w}) not inside IN_{i}({u})")
            check(out <= incoming, f"OUT_{i}({u}) not inside IN_{i}({u})")
            if out:
                outs[u] = frozenset(out)
            if core:
                for y in core.y_nodes:
                    check(len(per_y[y]) >= big, f"core vertex {y} at level {i} has small IN slice")
                for w in core.x_nodes | core.y_nodes:
                    check(core.degree(w) >= k, f"core vertex {w} at level {i} has degree < k")
                cores[(i, u)] = core
            _check_size_in(incoming, out, core, k, i, u)
        in_sets.append(ins)
        out_sets.append(outs)
        feeders.append(feeds)
        log.debug("level %d: %d nodes receive, %d forward, %d nonempty cores", i, len(ins), len(outs), sum(1 for key in cores if key[0] == i))
    return InOutTable(g, h, ell, k, in_sets, out_sets, feeders, cores)


def _check_size_in(incoming, out, core, k, i, u):
    """|IN_i(x,u)| <= |OUT_i(x,u)| + deg_core(x) + k - 1 for every x."""
    in_x = defaultdict(int)
    out_x = defaultdict(int)
    for e in incoming:
        in_x[e[0]] += 1
    for e in out:
        out_x[e[0]] += 1
    for x, c in in_x.items():
        check(c <= out_x[x] + core.degree(x) + k - 1, f"IN_{i}({x},{u}) too large for its OUT and core degree")


# ------------------ Paths and extraction ------------------
def _provenance_paths(t, e, i, u):
    """Simple paths (u_0..u_i), u_0 = x, u_i = u, with e ∈ OUT_j(u_j) for every j < i."""
    x = e[0]

    def walk(j, node, used):
        if j == 0:
            if node == x:
                yield (node,)
            return
        for w in t.feeders[j].get(node, ()):
            if w in used or e not in t.out_edges(j - 1, w):
                continue
            for rest in walk(j - 1, w, used | {w}):
                yield rest + (node,)

    yield from walk(i, u, frozenset((u,)))


def reconstruct_path(t, e, i, u):
    """Walk provenance back from u to e's X-endpoint.

    Prefers the least-id predecessor at every step and backtracks when the
    walk would revisit a node.
    """
    if i > 0 and e not in t.in_edges(i, u):
        raise PreconditionError(f"edge {e} not in IN_{i}({u})")
    path = next(_provenance_paths(t, e, i, u), None)
    if path is None:
        raise InvariantViolation(f"no provenance path for edge {e} at level {i} ending at {u}")
    check(is_simple_path(t.g, path) and path[0] == e[0] and path[-1] == u, f"bad provenance path {path}")
    for j in range(i):
        check(e in t.out_edges(j, path[j]), f"edge {e} missing from OUT_{j}({path[j]})")
        check(t.out_edges(j, path[j]) <= t.in_edges(j + 1, path[j + 1]), f"OUT_{j}({path[j]}) not inside IN_{j + 1}({path[j + 1]})")
    return path


def _core_path(core, p, steps):
    """Least-id alternating walk x_0, y_1, x_1, ..., y_steps inside the core avoiding p[1:]."""
    blocked = set(p[1:])
    path = [p[0]]
    while len(path) < 2 * steps:
        nxt = next((w for w in core.neighbors(path[-1]) if w not in blocked and w not in path), None)
        if nxt is None:
            raise InvariantViolation(f"core walk from {p[0]} stuck at {path[-1]} after {len(path)} nodes")
        path.append(nxt)
    return tuple(path)


def extract_cycle_from_core(t, core, k):
    """Close P (x to u, length i), P' (inside the core) and P'' (back to u) into a 2k-cycle."""
    if not core:
        raise PreconditionError("core is empty")
    i, u = core.i, core.u
    big = (2 * k) ** i
    e = min(core.edges)
    p = reconstruct_path(t, e, i, u)
    p_core = _core_path(core, p, k - i)
    y_end = p_core[-1]
    used = set(p) | set(p_core)
    avoid = {a for w in used for j in range(1, i) for a in t.out_slice(j, w, y_end)}
    x_bad = used & t.h.X
    check(len(avoid) + len(x_bad) < big, f"|A|+|X_bad|={len(avoid) + len(x_bad)} not below (2k)^{i}={big}")
    in_y = t.in_slice(i, u, y_end)
    check(len(in_y) >= big, f"IN_{i}({y_end},{u}) smaller than (2k)^{i}")
    e2 = next((c for c in sorted(in_y) if c[0] not in used and c not in avoid), None)
    if e2 is None:
        raise InvariantViolation(f"no edge of IN_{i}({y_end},{u}) leaves P and P'")
    p2 = reconstruct_path(t, e2, i, u)
    cycle = (u,) + tuple(reversed(p[1:-1])) + p_core + p2[:-1]
    check(verify_cycle(t.g, cycle, 2 * k), f"Core_{i}({u}) closed into a non-cycle {cycle}")
    return cycle


# ------------------ End to end ------------------
@dataclass(frozen=True)
class DensityCertificate:
    witness: tuple
    level: int
    node: int
    h: BipartiteH
    table: InOutTable = field(repr=False, compare=False)


def _check_density(g, k, ell, v):
    if k < 2 or not 1 <= ell <= k - 1:
        raise PreconditionError(f"need k >= 2 and 1 <= ell <= k-1, got k={k}, ell={ell}")
    if not 0 <= v < g.n:
        raise PreconditionError(f"node {v} not in graph")
    dens = local_density(g, v, ell)
    bound = tau(k, ell) * g.n
    if dens <= bound:
        raise PreconditionError(f"local density {dens} of node {v} at ell={ell} does not exceed {bound}")
    return dens


def density_certificate(g, k, ell, v):
    """Witness plus the level i and node u whose core produced it."""
    dens = _check_density(g, k, ell, v)
    h = build_H(g, v, ell)
    check(6 * len(h.edges) > tau(k, ell) * g.n, f"|E_H|={len(h.edges)} not above τn/6")
    table = compute_in_out(g, h, ell, k)
    for i in range(1, ell + 1):
        for u in range(g.n):
            core = table.cores.get((i, u))
            if core:
                witness = extract_cycle_from_core(table, core, k)
                log.info("v=%d ell=%d density=%d: cycle from Core_%d(%d)", v, ell, dens, i, u)
                return DensityCertificate(witness, i, u, h, table)
    raise InvariantViolation(f"density {dens} exceeds the bound but every core is empty")


def density_extract(g, k, ell, v):
    return density_certificate(g, k, ell, v).witness


def find_violation(g, k):
    """Least (v, ell) whose local density exceeds τ(k, ell)·n, or None."""
    for v in range(g.n):
        for ell in range(1, k):
            if local_density(g, v, ell) > tau(k, ell) * g.n:
                return v, ell
    return None
