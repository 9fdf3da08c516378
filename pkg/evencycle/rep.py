"""
q-representative subfamilies.

B ⊆ A is q-representative when every blocker X with |X| <= q that misses some
set of A also misses some set of B. compute_representative keeps a set only
when a blocker separates it from everything kept so far; those blockers form
a skew set-pair chain, which caps the output at C(p+q, p).
"""

import itertools
import logging
from dataclasses import dataclass
from math import comb

from evencycle.config import VERIFY_UNIVERSE_CAP
from evencycle.errors import CapExceeded, PreconditionError, check

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetFamily:
    sets: tuple
    p: int
    q: int
    universe_hint: int = None

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if self.p < 0 or self.q < 0:
            raise PreconditionError(f"p and q must be >= 0, got p={self.p}, q={self.q}")
        for s in self.sets:
            if len(s) > self.p:
                raise PreconditionError(f"set {sorted(s)} has more than p={self.p} elements")
        if self.universe_hint is not None and self.p + self.q > self.universe_hint:
            raise PreconditionError(f"p+q={self.p + self.q} exceeds universe size {self.universe_hint}")

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class PathFamily:
    """Equal-length simple paths sharing an origin."""

    origin: int
    paths: tuple

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))
        lengths = {len(p) for p in self.paths}
        if len(lengths) > 1:
            raise PreconditionError(f"paths of mixed lengths {sorted(lengths)} from origin {self.origin}")
        if any(p[0] != self.origin for p in self.paths):
            raise PreconditionError(f"path not starting at origin {self.origin}")

    @property
    def as_sets(self):
        return tuple(frozenset(p) for p in self.paths)

    def __len__(self):
        return len(self.paths)


def needs(candidate, kept, q):
    """A blocker X (|X| <= q) that misses candidate and hits every kept set, or None.

    An empty blocker is a valid answer when nothing is kept, so test the
    result against None.
    """
    candidate = frozenset(candidate)
    kept = [frozenset(b) for b in kept]

    def search(x, depth):
        for b in kept:
            if not b & x:
                break
        else:
            return x
        if depth == q:
            return None
        for e in sorted(b - candidate):
            found = search(x | {e}, depth + 1)
            if found is not None:
                return found
        return None

    found = search(frozenset(), 0)
    if found is not None:
        check(len(found) <= q, f"blocker {sorted(found)} larger than q={q}")
        check(not found & candidate, f"blocker {sorted(found)} meets candidate {sorted(candidate)}")
        check(all(b & found for b in kept), f"blocker {sorted(found)} misses a kept set")
    return found


def greedy_representative(sets, q):
    """Indices of kept sets (input order) and the blocker that justified each."""
    kept, kept_idx, witnesses = [], [], []
    for i, s in enumerate(sets):
        x = needs(s, kept, q)
        if x is not None:
            kept.append(frozenset(s))
            kept_idx.append(i)
            witnesses.append(x)
    return kept_idx, witnesses


def compute_representative(fam):
    kept_idx, _ = greedy_representative(fam.sets, fam.q)
    bound = comb(fam.p + fam.q, fam.p)
    check(len(kept_idx) <= bound, f"kept {len(kept_idx)} sets, bound C({fam.p}+{fam.q},{fam.p})={bound}")
    return SetFamily(tuple(fam.sets[i] for i in kept_idx), fam.p, fam.q, fam.universe_hint)


def is_skew_witness_chain(kept, witnesses):
    """X_i misses B_i and hits every earlier B_j."""
    if len(kept) != len(witnesses):
        return False
    kept = [frozenset(b) for b in kept]
    for i, x in enumerate(witnesses):
        x = frozenset(x)
        if x & kept[i]:
            return False
        if any(not x & kept[j] for j in range(i)):
            return False
    return True


def verify_representative(fam, sub, cap=None):
    """Exhaustive check over blockers drawn from the union of sub's sets.

    A counterexample blocker stays a counterexample after dropping elements
    outside that union, so the restriction loses nothing.
    """
    cap = VERIFY_UNIVERSE_CAP if cap is None else cap
    fam_sets = [frozenset(a) for a in fam.sets]
    sub_sets = [frozenset(b) for b in sub.sets]
    if not set(sub_sets) <= set(fam_sets):
        return False
    universe = sorted(set().union(*sub_sets))
    if len(universe) > cap:
        raise CapExceeded(f"verification universe of {len(universe)} elements exceeds cap {cap}")
    for r in range(fam.q + 1):
        for xs in itertools.combinations(universe, r):
            blocker = set(xs)
            fam_avoids = any(not a & blocker for a in fam_sets)
            sub_avoids = any(not b & blocker for b in sub_sets)
            if fam_avoids and not sub_avoids:
                log.debug("blocker %s separates family from subfamily", xs)
                return False
    return True


def filter_paths(pf, k):
    """Keep a (2k - p)-representative subfamily of pf, p = nodes per path."""
    if not pf.paths:
        return pf
    p = len(pf.paths[0])
    q = 2 * k - p
    if q < 0:
        raise PreconditionError(f"paths of {p} nodes exceed 2k={2 * k}")
    kept_idx, _ = greedy_representative(pf.as_sets, q)
    check(len(kept_idx) <= comb(2 * k, p), f"origin {pf.origin}: kept {len(kept_idx)} > C({2 * k},{p})")
    return PathFamily(pf.origin, tuple(pf.paths[i] for i in kept_idx))
