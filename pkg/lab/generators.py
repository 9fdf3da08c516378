"""
Seeded graph generators for the lab.

Every random family draws from numpy's counter-based Philox bit generator
keyed by (seed, stream), so a seed reproduces the same graph on any platform.
"""

import logging

import numpy as np

from evencycle.errors import PreconditionError
from evencycle.graph import Graph

log = logging.getLogger(__name__)

STREAM_GRAPH = 0
STREAM_PARAMS = 1
MIXED_FAMILIES = ("random", "planted", "tree", "bipartite", "polarity")
_MIXED_PRIMES = (2, 3, 5)


def make_rng(seed, stream=STREAM_GRAPH):
    return np.random.Generator(np.random.Philox([int(seed), int(stream)]))


def _is_prime(q):
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q ** 0.5) + 1))


def _random_pairs(n, m, rng, existing=()):
    """m new distinct non-loop pairs (u < v) avoiding `existing`, by rejection sampling."""
    total = n * (n - 1) // 2
    taken = set(existing)
    if m > total - len(taken):
        raise PreconditionError(f"cannot place {m} more edges on {n} nodes ({len(taken)} already used)")
    if m and m > (total - len(taken)) // 2:
        free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in taken]
        pick = rng.choice(len(free), size=m, replace=False)
        return [free[i] for i in sorted(pick)]
    out = []
    while len(out) < m:
        batch = rng.integers(0, n, size=(2 * (m - len(out)) + 8, 2))
        for a, b in batch.tolist():
            if a == b:
                continue
            e = (a, b) if a < b else (b, a)
            if e in taken:
                continue
            taken.add(e)
            out.append(e)
            if len(out) == m:
                break
    return out


def gen_polarity(q):
    """Polarity graph of PG(2, q): points adjacent iff orthogonal, self-orthogonal loops dropped."""
    if not _is_prime(q):
        raise PreconditionError(f"q must be prime, got {q}")
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, a) for a in range(q)]
    pts.append((0, 0, 1))
    p = np.array(pts, dtype=np.int64)
    gram = (p @ p.T) % q
    np.fill_diagonal(gram, 1)
    us, vs = np.nonzero(np.triu(gram == 0, k=1))
    return Graph.from_edges(len(pts), zip(us.tolist(), vs.tolist()))


def gen_planted(n, twok, extra_edges, seed):
    if n < twok:
        raise PreconditionError(f"n={n} smaller than cycle length {twok}")
    rng = make_rng(seed)
    ring = rng.permutation(n)[:twok].tolist()
    cycle = [tuple(sorted((ring[i], ring[(i + 1) % twok]))) for i in range(twok)]
    extra = _random_pairs(n, extra_edges, rng, existing=cycle)
    return Graph.from_edges(n, cycle + extra)


def gen_random(n, m, seed):
    return Graph.from_edges(n, _random_pairs(n, m, make_rng(seed)))


def gen_tree(n, seed):
    """Random recursive tree under a random relabelling."""
    rng = make_rng(seed)
    label = rng.permutation(n).tolist()
    edges = [(label[i], label[int(rng.integers(0, i))]) for i in range(1, n)]
    return Graph.from_edges(n, edges)


def gen_complete_bipartite(a, b):
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gen_cycle(n):
    if n < 3:
        raise PreconditionError(f"a cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_dense(k, seed):
    """Relabelled K_{a,a} with a > 24k plus a few random edges.

    Every node then has Σ_{u∈N(v)} deg(u) >= a^2 > 24k·a = 6·(2k)·n.
    """
    rng = make_rng(seed)
    a = 24 * k + 1 + int(rng.integers(0, 4))
    n = 2 * a
    label = rng.permutation(n).tolist()
    base = [(label[i], label[a + j]) for i in range(a) for j in range(a)]
    base = [(u, v) if u < v else (v, u) for u, v in base]
    extra = _random_pairs(n, int(rng.integers(0, a // 2 + 1)), rng, existing=base)
    return Graph.from_edges(n, base + extra)


def gen_mixed(n, k, seed):
    """One of random / planted / tree / bipartite / polarity, chosen by seed % 5."""
    family = MIXED_FAMILIES[seed % len(MIXED_FAMILIES)]
    rng = make_rng(seed, STREAM_PARAMS)
    if family == "random":
        return gen_random(n, int(rng.integers(n - 1, 2 * n)), seed)
    if family == "planted":
        return gen_planted(n, 2 * k, int(rng.integers(0, n)), seed)
    if family == "tree":
        return gen_tree(n, seed)
    if family == "bipartite":
        a = int(rng.integers(1, 4))
        return gen_complete_bipartite(a, max(2, n - a))
    return gen_polarity(_MIXED_PRIMES[seed // len(MIXED_FAMILIES) % len(_MIXED_PRIMES)])


def mixed_family(seed):
    return MIXED_FAMILIES[seed % len(MIXED_FAMILIES)]


# name -> (function, parameter names, takes seed)
GENERATORS = {
    "polarity": (gen_polarity, ("q",), False),
    "planted": (gen_planted, ("n", "twok", "extra_edges"), True),
    "random": (gen_random, ("n", "m"), True),
    "tree": (gen_tree, ("n",), True),
    "bipartite": (gen_complete_bipartite, ("a", "b"), False),
    "cycle": (gen_cycle, ("n",), False),
    "dense": (gen_dense, ("k",), True),
    "mixed": (gen_mixed, ("n", "k"), True),
}


def generate(family, params, seed=0):
    """Build a graph of a named family from a parameter dict."""
    if family not in GENERATORS:
        raise PreconditionError(f"unknown generator {family!r}; choose from {', '.join(sorted(GENERATORS))}")
    fn, names, seeded = GENERATORS[family]
    missing = [p for p in names if p not in params]
    if missing:
        raise PreconditionError(f"generator {family!r} needs parameters {', '.join(missing)}")
    args = [int(params[p]) for p in names]
    if seeded:
        args.append(int(seed))
    g = fn(*args)
    log.debug("generated %s %s seed=%d: n=%d m=%d", family, dict(zip(names, args)), seed, g.n, g.m)
    return g
