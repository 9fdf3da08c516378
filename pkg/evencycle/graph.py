"""
Graph core: immutable simple undirected graphs, the edge-list text format,
depth-bounded simple-path enumeration and the brute-force cycle oracles that
every other module is checked against.

Paths and cycle witnesses are plain tuples of node ids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from evencycle.config import BRUTEFORCE_MAX_N, EXHAUSTIVE_MAX_N, PATH_LENGTH_CAP
from evencycle.errors import CapExceeded, GraphError, PreconditionError

SimplePath = tuple
CycleWitness = tuple


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..n-1 with sorted adjacency lists."""

    n: int
    edges: frozenset
    adjacency: tuple
    _nbr_sets: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_nbr_sets", tuple(frozenset(a) for a in self.adjacency))

    @classmethod
    def from_edges(cls, n, edges):
        n = int(n)
        if n < 0:
            raise GraphError(f"node count must be >= 0, got {n}")
        seen = set()
        nbrs = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside 0..{n - 1}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        return cls(n, frozenset(seen), tuple(tuple(sorted(a)) for a in nbrs))

    @property
    def m(self):
        return len(self.edges)

    def degree(self, v):
        return len(self.adjacency[v])

    def neighbors(self, v):
        return self.adjacency[v]

    def neighbor_set(self, v):
        return self._nbr_sets[v]

    def has_edge(self, u, v):
        return 0 <= u < self.n and v in self._nbr_sets[u]

    def sorted_edges(self):
        return sorted(self.edges)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


# ------------------ Edge-list format ------------------
def parse_edge_list(text):
    """First line `n m`, then m lines `u v`. Blank lines and # comments ignored."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphError(f"bad header line: {lines[0]!r}") from None
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"bad edge line: {line!r}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def read_edge_list(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc
    return parse_edge_list(text)


def format_edge_list(g):
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(out) + "\n"


def write_edge_list(g, path):
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


# ------------------ Paths ------------------
def _check_length(length, cap):
    cap = PATH_LENGTH_CAP if cap is None else cap
    if length < 0:
        raise PreconditionError(f"path length must be >= 0, got {length}")
    if length > cap:
        raise CapExceeded(f"path length {length} exceeds cap {cap}")


def iter_simple_paths(g, v, length, cap=None, avoid=()):
    """Yield simple paths of exactly `length` edges from v, lexicographic order."""
    _check_length(length, cap)
    if not 0 <= v < g.n:
        raise GraphError(f"node {v} not in graph")
    if v in avoid:
        return
    path = [v]
    on_path = {v, *avoid}

    def dfs():
        if len(path) == length + 1:
            yield tuple(path)
            return
        for w in g.adjacency[path[-1]]:
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            yield from dfs()
            on_path.discard(w)
            path.pop()

    yield from dfs()


def enumerate_simple_paths(g, v, length, cap=None):
    return list(iter_simple_paths(g, v, length, cap))


def reach_exact(g, v, length, cap=None):
    """R_len(v): endpoints of simple paths of exactly `length` edges from v."""
    return {p[-1] for p in iter_simple_paths(g, v, length, cap)}


def local_density(g, v, length, cap=None):
    return sum(g.degree(u) for u in reach_exact(g, v, length, cap))


def is_simple_path(g, p):
    if not p or len(set(p)) != len(p):
        return False
    if any(not 0 <= x < g.n for x in p):
        return False
    return all(g.has_edge(a, b) for a, b in zip(p, p[1:]))


# ------------------ Thresholds ------------------
def floor_root(x, k):
    """Largest r with r**k <= x, in exact integers."""
    if x < 0 or k < 1:
        raise ValueError(f"floor_root needs x >= 0 and k >= 1, got x={x}, k={k}")
    if x < 2 or k == 1:
        return x
    r = 1 << -(-x.bit_length() // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def is_heavy(deg, n, k):
    """deg >= n^(1/k), compared as deg^k >= n."""
    return deg ** k >= n


def light_graph(g, k):
    """Subgraph induced by light nodes (deg^k < n); ids are kept, heavy nodes become isolated."""
    light = [not is_heavy(g.degree(v), g.n, k) for v in range(g.n)]
    return Graph.from_edges(g.n, [(u, v) for u, v in g.edges if light[u] and light[v]])


# ------------------ Cycle oracles ------------------
def _check_twok(twok):
    if twok % 2 or not 4 <= twok <= 12:
        raise PreconditionError(f"cycle length must be even and in 4..12, got {twok}")


def find_cycle_bruteforce(g, twok, max_n=None):
    """Lexicographically least twok-cycle witness, or None.

    The least witness starts at the smallest node lying on any twok-cycle and
    only visits larger nodes, so DFS from each start in ascending order
    returns it first.
    """
    _check_twok(twok)
    max_n = BRUTEFORCE_MAX_N if max_n is None else max_n
    if g.n > max_n:
        raise CapExceeded(f"brute-force oracle limited to n <= {max_n}, got n={g.n}")
    for s in range(g.n):
        if g.degree(s) < 2:
            continue
        path = [s]
        on_path = {s}

        def dfs():
            last = path[-1]
            if len(path) == twok:
                return tuple(path) if g.has_edge(last, s) else None
            for w in g.adjacency[last]:
                if w <= s or w in on_path or g.degree(w) < 2:
                    continue
                path.append(w)
                on_path.add(w)
                found = dfs()
                if found is not None:
                    return found
                on_path.discard(w)
                path.pop()
            return None

        found = dfs()
        if found is not None:
            return found
    return None


def has_cycle_exhaustive(g, twok, max_n=None):
    """Independent oracle: try every twok-subset in every cyclic arrangement."""
    _check_twok(twok)
    max_n = EXHAUSTIVE_MAX_N if max_n is None else max_n
    if g.n > max_n:
        raise CapExceeded(f"exhaustive oracle limited to n <= {max_n}, got n={g.n}")
    for combo in itertools.combinations(range(g.n), twok):
        members = set(combo)
        if any(len(g.neighbor_set(x) & members) < 2 for x in combo):
            continue
        first, rest = combo[0], combo[1:]
        for perm in itertools.permutations(rest):
            if perm[0] > perm[-1]:
                continue
            seq = (first,) + perm
            if all(g.has_edge(seq[i], seq[(i + 1) % twok]) for i in range(twok)):
                return True
    return False


def verify_cycle(g, w, twok):
    """True iff w lists exactly twok distinct nodes forming a closed cycle in g."""
    try:
        nodes = tuple(int(x) for x in w)
    except (TypeError, ValueError):
        return False
    if twok < 3 or len(nodes) != twok or len(set(nodes)) != twok:
        return False
    if any(not 0 <= x < g.n for x in nodes):
        return False
    return all(g.has_edge(nodes[i], nodes[(i + 1) % twok]) for i in range(twok))
