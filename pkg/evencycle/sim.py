"""
Synchronous Broadcast CONGEST simulator.

Each round t:
  1. words emitted in round t-1 are delivered, grouped by sender, into the
     inboxes of the sender's undecided neighbours;
  2. every awake, undecided node gets on_round(ctx, inbox) with everything
     delivered since its last wake;
  3. every undecided node emits at most one word: an explicit
     ctx.broadcast(word), otherwise the head of its outbox.

Nodes park with ctx.sleep_until(r). When nothing is in flight and every
outbox is empty the simulator jumps straight to the earliest wake round, so
fixed phase budgets cost nothing to simulate.

A word is an int: (value << WORD_TAG_BITS) | tag, at most
W = ceil(log2 n) + WORD_TAG_BITS bits. A path of λ edges is framed as a
header word (tag PATH|λ, value origin) followed by λ+1 NODE words.
"""

import logging
from collections import deque
from dataclasses import dataclass, field

from evencycle.config import MAX_ROUNDS, TRACE, WORD_TAG_BITS
from evencycle.errors import (
    BandwidthExceeded,
    DecodeError,
    DoubleBroadcast,
    PreconditionError,
    SimulationFault,
    VerdictTimeout,
)

log = logging.getLogger(__name__)

ACCEPT = "accept"
REJECT = "reject"
UNDECIDED = "undecided"

# Tag kinds live in the high nibble of the tag byte.
TAG_HELLO = 0x10
TAG_ID = 0x20
TAG_PATH = 0x30
TAG_NODE = 0x40
_KIND_MASK = 0xF0
_TAG_MASK = (1 << WORD_TAG_BITS) - 1
MAX_FRAMED_LENGTH = 0x0F


def word_capacity(n, tag_bits=WORD_TAG_BITS):
    """W = ceil(log2 n) + tag bits."""
    return max(n - 1, 0).bit_length() + tag_bits


def make_word(tag, value):
    return (int(value) << WORD_TAG_BITS) | tag


def word_tag(w):
    return w & _TAG_MASK


def word_kind(w):
    return w & _KIND_MASK


def word_value(w):
    return w >> WORD_TAG_BITS


# ------------------ Path framing ------------------
def serialize_path(p, n):
    """Header (PATH|λ, origin) then one NODE word per id: λ+2 words."""
    if not p:
        raise DecodeError("cannot frame an empty path")
    length = len(p) - 1
    if length > MAX_FRAMED_LENGTH:
        raise DecodeError(f"path of {length} edges does not fit the header")
    if any(not 0 <= x < n for x in p):
        raise DecodeError(f"path {tuple(p)} has ids outside 0..{n - 1}")
    return [make_word(TAG_PATH | length, p[0])] + [make_word(TAG_NODE, x) for x in p]


def _read_path(ws, pos):
    head = ws[pos]
    if word_kind(head) != TAG_PATH:
        raise DecodeError(f"expected path header at word {pos}, got {head:#x}")
    length = word_tag(head) & 0x0F
    body = ws[pos + 1 : pos + 2 + length]
    if len(body) != length + 1:
        raise DecodeError(f"truncated path: header announces {length + 1} ids, got {len(body)}")
    if any(word_tag(w) != TAG_NODE for w in body):
        raise DecodeError("non-node word inside path body")
    path = tuple(word_value(w) for w in body)
    if path[0] != word_value(head):
        raise DecodeError(f"header origin {word_value(head)} != first id {path[0]}")
    return path, pos + 2 + length


def deserialize_path(ws):
    ws = list(ws)
    if not ws:
        raise DecodeError("empty word sequence")
    path, end = _read_path(ws, 0)
    if end != len(ws):
        raise DecodeError(f"{len(ws) - end} trailing words after path")
    return path


def deserialize_stream(ws):
    """Split one sender's concatenated path words into paths."""
    ws = list(ws)
    paths = []
    pos = 0
    while pos < len(ws):
        path, pos = _read_path(ws, pos)
        paths.append(path)
    return paths


def charge_phase(words_per_node):
    """Rounds a flooding phase takes: outboxes drain in lockstep, one word per round."""
    return max(words_per_node.values(), default=0)


# ------------------ Programs and context ------------------
class NodeProgram:
    """One shared, stateless object per algorithm. Per-node state lives in ctx.state."""

    k = None

    def init(self, ctx):
        pass

    def on_round(self, ctx, inbox):
        pass


class RoundContext:
    __slots__ = ("node", "degree", "n", "k", "round", "state", "phase", "_sim")

    def __init__(self, sim, node, degree, n, k):
        self._sim = sim
        self.node = node
        self.degree = degree
        self.n = n
        self.k = k
        self.round = 0
        self.state = {}
        self.phase = "init"

    def broadcast(self, word):
        """Send one word to every neighbour this round."""
        sim = self._sim
        if self.node in sim.pending or sim.outboxes[self.node]:
            raise DoubleBroadcast(f"node {self.node} sends twice in round {self.round}")
        sim.pending[self.node] = (word, self.phase)
        sim.busy.add(self.node)

    def enqueue(self, words):
        """Queue words; one leaves per round while no explicit broadcast is made."""
        if isinstance(words, int):
            words = (words,)
        box = self._sim.outboxes[self.node]
        box.extend((w, self.phase) for w in words)
        if box:
            self._sim.busy.add(self.node)

    def decide(self, verdict, reason=None, witness=None):
        self._sim.decide(self.node, verdict, reason, witness)

    def sleep_until(self, r):
        self._sim.wake[self.node] = max(int(r), self.round + 1)

    @property
    def outbox_size(self):
        return len(self._sim.outboxes[self.node])


@dataclass(frozen=True)
class RunReport:
    verdicts: tuple
    rounds_used: int
    words_sent: tuple
    peak_outbox: int
    trace: tuple = None
    timed_out: bool = False
    fault: str = None
    reasons: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    phase_words: dict = field(default_factory=dict)

    def phase_rounds(self, prefix=""):
        """Sum of charge_phase over every phase whose label starts with prefix."""
        return sum(charge_phase(per_node) for label, per_node in self.phase_words.items() if label.startswith(prefix))

    @property
    def threshold_fired(self):
        return "threshold" in self.reasons.values()

    def first_witness(self):
        """Cycle reported by the lowest-id rejecting node that named one."""
        return next(iter(self.witnesses.values()), None)


class _Simulator:
    def __init__(self, g, prog, max_rounds, k, trace):
        self.g = g
        self.prog = prog
        self.max_rounds = max_rounds
        self.capacity = word_capacity(g.n)
        self.trace = [] if trace else None
        n = g.n
        self.verdicts = [UNDECIDED] * n
        self.reasons = {}
        self.witnesses = {}
        self.words_sent = [0] * n
        self.outboxes = [deque() for _ in range(n)]
        self.pending = {}
        self.busy = set()
        self.inboxes = [{} for _ in range(n)]
        self.wake = [1] * n
        self.buckets = {}
        self.phase_words = {}
        self.peak_outbox = 0
        self.undecided = n
        self.round = 0
        self.ctxs = [RoundContext(self, v, g.degree(v), n, k) for v in range(n)]

    def decide(self, v, verdict, reason, witness):
        if verdict not in (ACCEPT, REJECT):
            raise ValueError(f"verdict must be accept or reject, got {verdict!r}")
        if self.verdicts[v] != UNDECIDED:
            raise SimulationFault(f"node {v} decided twice")
        self.verdicts[v] = verdict
        if reason is not None:
            self.reasons[v] = reason
        if witness is not None:
            self.witnesses[v] = tuple(witness)
        self.undecided -= 1
        self.outboxes[v].clear()
        self.pending.pop(v, None)
        self.busy.discard(v)
        self.inboxes[v] = {}

    def _park(self, v):
        if self.verdicts[v] == UNDECIDED:
            self.buckets.setdefault(self.wake[v], set()).add(v)

    def _deliver(self, in_flight):
        adj = self.g.adjacency
        for sender, word in in_flight:
            for u in adj[sender]:
                if self.verdicts[u] == UNDECIDED:
                    self.inboxes[u].setdefault(sender, []).append(word)

    def _emit(self, t):
        out = []
        for v in sorted(self.busy):
            if v in self.pending:
                word, phase = self.pending.pop(v)
            else:
                word, phase = self.outboxes[v].popleft()
            if word < 0 or word.bit_length() > self.capacity:
                raise BandwidthExceeded(
                    f"node {v} round {t}: word {word:#x} exceeds W={self.capacity} bits"
                )
            self.words_sent[v] += 1
            per_node = self.phase_words.setdefault(phase, {})
            per_node[v] = per_node.get(v, 0) + 1
            if self.trace is not None:
                self.trace.append((t, v, word))
            out.append((v, word))
        self.busy = {v for v in self.busy if self.outboxes[v] or v in self.pending}
        return out

    def run(self):
        prog = self.prog
        for ctx in self.ctxs:
            prog.init(ctx)
            self._park(ctx.node)
        in_flight = []
        t = 0
        while self.undecided and t < self.max_rounds:
            if in_flight or self.busy:
                t += 1
            else:
                t = min(self.buckets)
                if t > self.max_rounds:
                    t = self.max_rounds
                    break
            self.round = t
            self._deliver(in_flight)
            for v in sorted(self.buckets.pop(t, ())):
                if self.verdicts[v] != UNDECIDED:
                    continue
                ctx = self.ctxs[v]
                ctx.round = t
                inbox = dict(sorted(self.inboxes[v].items()))
                self.inboxes[v] = {}
                self.wake[v] = t + 1
                prog.on_round(ctx, inbox)
                self.peak_outbox = max(self.peak_outbox, len(self.outboxes[v]))
                self._park(v)
            in_flight = self._emit(t)
        self.round = t
        return t

    def report(self, rounds_used, fault=None):
        return RunReport(
            verdicts=tuple(self.verdicts),
            rounds_used=rounds_used,
            words_sent=tuple(self.words_sent),
            peak_outbox=self.peak_outbox,
            trace=tuple(self.trace) if self.trace is not None else None,
            timed_out=fault is None and UNDECIDED in self.verdicts,
            fault=fault,
            reasons=dict(sorted(self.reasons.items())),
            witnesses=dict(sorted(self.witnesses.items())),
            phase_words={label: dict(sorted(c.items())) for label, c in self.phase_words.items()},
        )


def run(g, prog, max_rounds=None, *, k=None, trace=None):
    """Simulate prog on g until every node decided or max_rounds elapsed.

    Simulation faults abort the run; the returned report then carries the
    fault message and whatever verdicts were reached.
    """
    max_rounds = MAX_ROUNDS if max_rounds is None else int(max_rounds)
    if max_rounds < 1:
        raise PreconditionError(f"max_rounds must be >= 1, got {max_rounds}")
    k = getattr(prog, "k", None) if k is None else k
    trace = TRACE if trace is None else trace
    sim = _Simulator(g, prog, max_rounds, k, trace)
    log.debug("run start: n=%d m=%d k=%s program=%s", g.n, g.m, k, type(prog).__name__)
    try:
        rounds = sim.run()
    except SimulationFault as exc:
        msg = f"{type(exc).__name__}: {exc}"
        log.warning("fault in round %d: %s", sim.round, msg)
        return sim.report(sim.round, fault=msg)
    report = sim.report(rounds)
    log.info(
        "run end: rounds=%d words=%d rejects=%d undecided=%d",
        report.rounds_used,
        sum(report.words_sent),
        report.verdicts.count(REJECT),
        report.verdicts.count(UNDECIDED),
    )
    return report


def global_verdict(r):
    """reject iff some node rejected; accept iff all accepted."""
    if r.fault:
        raise SimulationFault(r.fault)
    if UNDECIDED in r.verdicts:
        raise VerdictTimeout(f"timeout: {r.verdicts.count(UNDECIDED)} undecided nodes after {r.rounds_used} rounds")
    return REJECT if REJECT in r.verdicts else ACCEPT


def format_trace(r):
    return [f"round={t} node={v} word={w:x}" for t, v, w in (r.trace or ())]


def report_to_dict(r):
    return {
        "verdicts": list(r.verdicts),
        "rounds_used": r.rounds_used,
        "words_sent": list(r.words_sent),
        "peak_outbox": r.peak_outbox,
        "timed_out": r.timed_out,
        "fault": r.fault,
        "reasons": {str(v): why for v, why in r.reasons.items()},
        "witnesses": {str(v): list(w) for v, w in r.witnesses.items()},
        "phase_rounds": {label: charge_phase(c) for label, c in r.phase_words.items()},
        "trace": format_trace(r) if r.trace is not None else None,
    }
