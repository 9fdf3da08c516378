"""
Distributed even-cycle detection programs for the simulator.

C4Program: exchange degrees, then flood light-neighbour ids and heavy-neighbour
ids in two fixed-length phases; a node that hears the same id from two
different neighbours has found a 4-cycle.

C2kProgram: degree exchange, a light phase that floods unfiltered paths over
the light subgraph (deg^k < n), then a heavy phase that grows paths from
heavy origins, filters them per origin to a representative subfamily and
rejects outright when too many origins reach a node.

Phase boundaries are fixed round numbers computed from (n, k), which every
node knows. Nodes sleep between boundaries and assert that their outbox has
drained when the next boundary arrives.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt

from evencycle.errors import CongestionViolation, PreconditionError
from evencycle.graph import floor_root, is_heavy
from evencycle.rep import PathFamily, filter_paths
from evencycle.sim import (
    ACCEPT,
    REJECT,
    TAG_HELLO,
    TAG_ID,
    NodeProgram,
    deserialize_stream,
    make_word,
    serialize_path,
    word_kind,
    word_value,
)

log = logging.getLogger(__name__)

REASON_LIGHT = "light"
REASON_THRESHOLD = "threshold"
REASON_DETECT = "detect"

HELLO_ROUND = 1
FIRST_PHASE_ROUND = 2


# ------------------ Thresholds ------------------
def _threshold_power(k, ell, n):
    return 6 ** k * (2 * k) ** (ell * k) * n ** (k - 1)


def threshold_exceeded(count, k, ell, n):
    """count > 6·(2k)^ell·n^(1-1/k), compared as count^k > 6^k·(2k)^(ell·k)·n^(k-1)."""
    return count ** k > _threshold_power(k, ell, n)


def heavy_threshold(k, ell, n):
    """Largest origin count that does not trip threshold_exceeded."""
    return floor_root(_threshold_power(k, ell, n), k)


# ------------------ Schedules ------------------
@dataclass(frozen=True)
class C2kSchedule:
    n: int
    k: int
    light: tuple
    heavy: tuple
    events: dict = field(repr=False, compare=False)

    @property
    def final(self):
        return max(self.events)

    def next_event(self, t):
        return min((r for r in self.events if r > t), default=None)


def c2k_schedule(n, k, light=True, heavy=True):
    """Boundary rounds L_0..L_k of the light phase and H_1..H_k of the heavy phase.

    Light iteration i sends paths of i edges: at most d^i of them (d the
    largest light degree), i+2 words each. Heavy iteration ell sends at most
    C(2k, ell+1) paths of ell+2 words for each of at most T_ell origins.
    """
    if k < 2:
        raise PreconditionError(f"k must be >= 2, got {k}")
    if not (light or heavy):
        raise PreconditionError("at least one phase must run")
    events = {}
    t = FIRST_PHASE_ROUND
    light_rounds = ()
    if light:
        d = floor_root(max(n - 1, 0), k)
        marks = [t]
        for i in range(k):
            events.setdefault(t, []).append(("light", i))
            t += max(1, d ** i) * (i + 2)
            marks.append(t)
        events.setdefault(t, []).append(("light_detect", k))
        light_rounds = tuple(marks)
    heavy_rounds = ()
    if heavy:
        marks = [t]
        for ell in range(1, k):
            events.setdefault(t, []).append(("heavy", ell))
            t += heavy_threshold(k, ell, n) * comb(2 * k, ell + 1) * (ell + 2)
            marks.append(t)
        events.setdefault(t, []).append(("heavy_detect", k))
        heavy_rounds = tuple(marks)
    return C2kSchedule(n, k, light_rounds, heavy_rounds, events)


@dataclass(frozen=True)
class C4Schedule:
    n: int
    budget: int
    light: int
    heavy: int
    final: int


def c4_schedule(n):
    budget = max(1, isqrt(2 * n))
    light = FIRST_PHASE_ROUND
    return C4Schedule(n, budget, light, light + budget, light + 2 * budget)


# ------------------ Shared node helpers ------------------
def _read_hello(ctx, inbox):
    ctx.state["nbr_deg"] = {
        s: word_value(w) for s, ws in inbox.items() for w in ws if word_kind(w) == TAG_HELLO
    }


def _check_drained(ctx):
    if ctx.outbox_size:
        raise CongestionViolation(
            f"node {ctx.node}: {ctx.outbox_size} words still queued at phase boundary round {ctx.round}"
        )


def _received_paths(inbox, senders=None):
    out = []
    for s, ws in inbox.items():
        if senders is not None and s not in senders:
            continue
        out.extend(deserialize_stream(w for w in ws if word_kind(w) != TAG_HELLO))
    return out


def _repeated_id(v, inbox):
    """(v, u, w, u') when id w arrived from two different senders u, u'."""
    first = {}
    for s, ws in inbox.items():
        for word in ws:
            if word_kind(word) != TAG_ID:
                continue
            w = word_value(word)
            if w == v:
                continue
            if w in first and first[w] != s:
                return (v, first[w], w, s)
            first.setdefault(w, s)
    return None


# ------------------ 4-cycles ------------------
class C4Program(NodeProgram):
    """4-cycle detection. Light means deg^2 <= 2n."""

    k = 2

    def __init__(self, n):
        if n < 2:
            raise PreconditionError(f"n must be >= 2, got {n}")
        self.n = n
        self.schedule = c4_schedule(n)

    def _light(self, deg):
        return deg * deg <= 2 * self.n

    def init(self, ctx):
        if ctx.n != self.n:
            raise PreconditionError(f"program built for n={self.n}, graph has n={ctx.n}")

    def on_round(self, ctx, inbox):
        sch = self.schedule
        t = ctx.round
        if t == HELLO_ROUND:
            ctx.phase = "hello"
            ctx.broadcast(make_word(TAG_HELLO, ctx.degree))
            ctx.sleep_until(sch.light)
        elif t == sch.light:
            _read_hello(ctx, inbox)
            ctx.phase = "light"
            if self._light(ctx.degree):
                nbrs = ctx.state["nbr_deg"]
                ctx.enqueue(make_word(TAG_ID, u) for u in sorted(nbrs) if self._light(nbrs[u]))
            ctx.sleep_until(sch.heavy)
        elif t == sch.heavy:
            _check_drained(ctx)
            found = _repeated_id(ctx.node, inbox)
            if found is not None:
                ctx.decide(REJECT, REASON_LIGHT, witness=found)
                return
            nbrs = ctx.state["nbr_deg"]
            heavy = [u for u in sorted(nbrs) if not self._light(nbrs[u])]
            if len(heavy) ** 2 > 2 * self.n:
                log.info("node %d: %d heavy neighbours, threshold reject", ctx.node, len(heavy))
                ctx.decide(REJECT, REASON_THRESHOLD)
                return
            ctx.phase = "heavy"
            ctx.enqueue(make_word(TAG_ID, u) for u in heavy)
            ctx.sleep_until(sch.final)
        elif t == sch.final:
            _check_drained(ctx)
            found = _repeated_id(ctx.node, inbox)
            if found is not None:
                ctx.decide(REJECT, REASON_DETECT, witness=found)
            else:
                ctx.decide(ACCEPT)


# ------------------ 2k-cycles ------------------
def _light_cycle(v, paths):
    """Two received paths of one origin u that meet only at u and avoid v close a cycle through v."""
    by_origin = {}
    for p in paths:
        if v not in p:
            by_origin.setdefault(p[0], []).append(p)
    for u in sorted(by_origin):
        for a, b in combinations(sorted(by_origin[u]), 2):
            if set(a) & set(b) == {u}:
                return a + (v,) + tuple(reversed(b[1:]))
    return None


def _heavy_cycle(v, families):
    """Two k-edge paths w..v that share only their endpoints."""
    for w in sorted(families):
        for a, b in combinations(families[w], 2):
            if set(a) & set(b) == {w, v}:
                return a + tuple(reversed(b[1:-1]))
    return None


def _extend(v, paths):
    """Group received paths by origin, append v to those that avoid it, deduplicate."""
    families = {}
    for p in paths:
        if v not in p:
            families.setdefault(p[0], set()).add(p + (v,))
    return {w: sorted(ps) for w, ps in sorted(families.items())}


class C2kProgram(NodeProgram):
    """2k-cycle detection in O(n^(1-1/k)) rounds.

    light / heavy switch the two phases on or off; filtering=False forwards
    every heavy path unfiltered (used to compare detection with and without
    representative filtering).
    """

    def __init__(self, n, k, light=True, heavy=True, filtering=True):
        if k < 2:
            raise PreconditionError(f"k must be >= 2, got {k}")
        self.n = n
        self.k = k
        self.filtering = filtering
        self.schedule = c2k_schedule(n, k, light=light, heavy=heavy)

    def init(self, ctx):
        if ctx.n != self.n:
            raise PreconditionError(f"program built for n={self.n}, graph has n={ctx.n}")
        ctx.state["light"] = not is_heavy(ctx.degree, self.n, self.k)

    def on_round(self, ctx, inbox):
        t = ctx.round
        if t == HELLO_ROUND:
            ctx.phase = "hello"
            ctx.broadcast(make_word(TAG_HELLO, ctx.degree))
            ctx.sleep_until(FIRST_PHASE_ROUND)
            return
        if t == FIRST_PHASE_ROUND:
            _read_hello(ctx, inbox)
        else:
            _check_drained(ctx)
        for kind, idx in self.schedule.events.get(t, ()):
            if kind == "light":
                self._light_step(ctx, inbox, idx)
            elif kind == "light_detect":
                self._light_detect(ctx, inbox)
            elif kind == "heavy":
                self._heavy_step(ctx, inbox, idx)
            else:
                self._heavy_detect(ctx, inbox)
            if ctx.state.get("done"):
                return
        if t == self.schedule.final:
            ctx.decide(ACCEPT)
        else:
            ctx.sleep_until(self.schedule.next_event(t))

    def _light_senders(self, ctx):
        nbrs = ctx.state["nbr_deg"]
        return {u for u, d in nbrs.items() if not is_heavy(d, self.n, self.k)}

    def _light_step(self, ctx, inbox, i):
        if not ctx.state["light"]:
            return
        if i == 0:
            paths = [(ctx.node,)]
        else:
            received = _received_paths(inbox, self._light_senders(ctx))
            paths = [p + (ctx.node,) for p in sorted(received) if ctx.node not in p]
        ctx.phase = f"light:{i}"
        words = [w for p in paths for w in serialize_path(p, self.n)]
        d = floor_root(max(self.n - 1, 0), self.k)
        if len(words) > max(1, d ** i) * (i + 2):
            raise CongestionViolation(f"node {ctx.node}: {len(words)} words in light iteration {i}")
        ctx.enqueue(words)

    def _light_detect(self, ctx, inbox):
        if not ctx.state["light"]:
            return
        found = _light_cycle(ctx.node, _received_paths(inbox, self._light_senders(ctx)))
        if found is not None:
            self._reject(ctx, REASON_LIGHT, found)

    def _heavy_step(self, ctx, inbox, ell):
        n, k, v = self.n, self.k, ctx.node
        if ell == 1:
            nbrs = ctx.state["nbr_deg"]
            families = {w: [(w, v)] for w in sorted(nbrs) if is_heavy(nbrs[w], n, k)}
        else:
            families = _extend(v, _received_paths(inbox))
        if threshold_exceeded(len(families), k, ell, n):
            log.info("node %d: %d origins at iteration %d exceed the threshold", v, len(families), ell)
            self._reject(ctx, REASON_THRESHOLD)
            return
        bound = comb(2 * k, ell + 1)
        ctx.phase = f"heavy:{ell}"
        words = []
        for w, paths in families.items():
            if self.filtering:
                paths = filter_paths(PathFamily(w, paths), k).paths
                if len(paths) > bound:
                    raise CongestionViolation(f"node {v}: origin {w} keeps {len(paths)} > C({2 * k},{ell + 1}) paths")
            chunk = [x for p in paths for x in serialize_path(p, n)]
            if self.filtering and len(chunk) > (ell + 3) * bound:
                raise CongestionViolation(f"node {v}: origin {w} costs {len(chunk)} words at iteration {ell}")
            words.extend(chunk)
        ctx.enqueue(words)

    def _heavy_detect(self, ctx, inbox):
        found = _heavy_cycle(ctx.node, _extend(ctx.node, _received_paths(inbox)))
        if found is not None:
            self._reject(ctx, REASON_DETECT, found)

    def _reject(self, ctx, reason, witness=None):
        ctx.decide(REJECT, reason, witness=witness)
        ctx.state["done"] = True


def c4_program(n):
    return C4Program(n)


def c2k_program(n, k):
    if k >= 2 and n < 2 * k:
        raise PreconditionError(f"n must be >= 2k={2 * k}, got n={n}")
    return C2kProgram(n, k)


def c2k_light_phase(n, k):
    """Degree exchange and light phase only; survivors accept at L_k."""
    return C2kProgram(n, k, heavy=False)


def c2k_heavy_phase(n, k, filtering=True):
    """Degree exchange and heavy phase only."""
    return C2kProgram(n, k, light=False, filtering=filtering)
