"""Covers of compact intervals and exact Lebesgue window lengths.

A `Cover` pairs a closed target RSet with the open member sets that
jointly contain it.  For single-interval targets the module computes the
exact supremum of window lengths d such that every closed window
[x, x+d] inside the target fits in a single member, verifies candidate
window lengths with an explicit counterexample window on failure, and
builds the overlapping dyadic grid covers used by oblivious players.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .sets import Interval, RSet, normalize, rat, union_all


class CoverError(ValueError):
    """The proposed cover is malformed or does not cover its target."""


@dataclass(frozen=True)
class Cover:
    """A finite cover of a closed target by nonempty sets.

    The constructor checks that members are nonempty and that their
    union contains the target exactly.  Openness of members is a game
    concern and is validated by the referee against the game's ambient
    interval, not here.
    """

    target: RSet
    members: tuple[RSet, ...]
    _index: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for i, m in enumerate(self.members):
            if m.is_empty:
                raise CoverError(f"cover member {i} is empty")
        missing = self.target.subtract(union_all(self.members))
        if not missing.is_empty:
            raise CoverError(
                f"members do not cover the target; uncovered part: {missing}"
            )
        comps = sorted(
            ((c, i) for i, m in enumerate(self.members) for c in m.components),
            key=lambda t: (t[0].lo, t[0].hi),
        )
        running = Fraction(0)
        max_hi_prefix = []
        for c, _ in comps:
            running = c.hi if not max_hi_prefix else max(running, c.hi)
            max_hi_prefix.append(running)
        object.__setattr__(
            self, "_index", (comps, tuple(c.lo for c, _ in comps), tuple(max_hi_prefix))
        )

    def members_touching(self, lo: Fraction, hi: Fraction) -> list[int]:
        """Indices of members whose closure meets [lo, hi], in index order."""
        comps, los, max_hi = self._index
        end = bisect_right(los, hi)
        hit = set()
        for k in range(end - 1, -1, -1):
            if max_hi[k] < lo:
                break
            c, i = comps[k]
            if c.hi >= lo:
                hit.add(i)
        return sorted(hit)

    def members_containing_point(self, x: Fraction) -> list[int]:
        """Indices of members containing x, in index order."""
        comps, los, max_hi = self._index
        end = bisect_right(los, x)
        hit = set()
        for k in range(end - 1, -1, -1):
            if max_hi[k] < x:
                break
            c, i = comps[k]
            if c.contains(x):
                hit.add(i)
        return sorted(hit)

    def restricted_to(self, piece: Interval) -> "Cover":
        """Sub-cover of a closed piece of the target, keeping only members
        that meet it.  Member sets are not clipped."""
        idxs = self.members_touching(piece.lo, piece.hi)
        return Cover(RSet((piece.closure(),)), tuple(self.members[i] for i in idxs))

    def refinement_witnesses(
        self, family: Sequence[RSet]
    ) -> tuple[bool, list[Optional[int]]]:
        """Like sets.refines, but using this cover's point index so the
        candidate search does not scan all members."""
        witnesses: list[Optional[int]] = []
        ok = True
        for m in family:
            found = None
            if m.is_empty:
                found = 0 if self.members else None
            else:
                probe = m.components[0].representative()
                for i in self.members_containing_point(probe):
                    if m.is_subset(self.members[i]):
                        found = i
                        break
            witnesses.append(found)
            if found is None:
                ok = False
        return ok, witnesses


def _target_interval(cover: Cover) -> Interval:
    comps = cover.target.components
    if len(comps) != 1 or comps[0].lo_open or comps[0].hi_open:
        raise CoverError("target must be a single closed interval")
    t = comps[0]
    if t.length <= 0:
        raise CoverError("target must have positive length")
    return t


def window_supremum(cover: Cover) -> Fraction:
    """Exact supremum d* of window lengths d in (0, L] such that every
    closed window [x, x+d] inside the target [a, b] lies in one member.

    Lengths strictly below d* are always admissible; d* itself may or
    may not be.  Computed by one left-to-right sweep over component
    endpoints: the supremum is the tightest hand-off between members,
    capped by the target length and by the reach of members covering b.
    """
    t = _target_interval(cover)
    a, b = t.lo, t.hi
    cap = b - a

    # point components cannot contain a window of positive length
    comps = [
        c
        for m in cover.members
        for c in m.components
        if c.hi >= a and c.lo <= b and c.hi > c.lo
    ]
    # A component "covers b" when windows ending at b fit inside it.
    def covers_b(c: Interval) -> bool:
        return c.hi > b or (c.hi == b and not c.hi_open)

    wall = None
    for c in comps:
        if covers_b(c):
            room = b - c.lo
            if wall is None or room > wall:
                wall = room
    if wall is None:
        raise CoverError("no member covers windows ending at the right endpoint")

    best = min(cap, wall)

    # Sweep: at each qualification threshold, the binding constraint is
    # the largest reach among members already usable there.
    events: dict[Fraction, list[Interval]] = {}
    for c in comps:
        events.setdefault(c.lo, []).append(c)

    def reach_of(c: Interval) -> Optional[Fraction]:
        return None if covers_b(c) else c.hi

    plateau: Optional[Fraction] = None  # None means "covers through b"
    covers_through_b = False

    def add(c: Interval) -> None:
        nonlocal plateau, covers_through_b
        r = reach_of(c)
        if r is None:
            covers_through_b = True
        elif plateau is None or r > plateau:
            plateau = r

    for x in sorted(events):
        if x < a:
            for c in events[x]:
                add(c)
    for c in events.get(a, []):
        if not c.lo_open:
            add(c)
    if plateau is None and not covers_through_b:
        raise CoverError("no member covers windows starting at the left endpoint")
    if not covers_through_b:
        best = min(best, plateau - a)
    for c in events.get(a, []):
        if c.lo_open:
            add(c)

    for x in sorted(k for k in events if a < k < b):
        for c in events[x]:
            if not c.lo_open:
                add(c)
        if not covers_through_b:
            if plateau is None:
                raise CoverError(f"coverage gap at {x}")
            best = min(best, plateau - x)
        for c in events[x]:
            if c.lo_open:
                add(c)

    if best <= 0:
        raise CoverError("cover admits no positive window length")
    return best


def lebesgue_number(cover: Cover) -> Fraction:
    """A verified Lebesgue number: half the exact window supremum.

    The supremum itself can fail (the admissible set is open on the
    right), so half of it is returned; verify_lebesgue always accepts
    the result.
    """
    return window_supremum(cover) / 2


def lebesgue_counterexample(cover: Cover, delta) -> Optional[Interval]:
    """None if every closed window of length delta inside the target fits
    in a single member; otherwise a failing window [x, x+delta].

    Decided exactly: window starts form [a, b-delta], and the starts
    served by a member component (l, r) form (l, r-delta) with the same
    end flags.
    """
    delta = rat(delta)
    if delta <= 0:
        raise CoverError("delta must be positive")
    t = _target_interval(cover)
    a, b = t.lo, t.hi
    if b - delta < a:
        return None  # no window of this length fits in the target
    required = RSet((Interval(a, b - delta, False, False),))
    starts = []
    for m in cover.members:
        for c in m.components:
            hi = c.hi - delta
            if c.lo < hi or (c.lo == hi and not c.lo_open and not c.hi_open):
                starts.append(Interval(c.lo, hi, c.lo_open, c.hi_open))
    uncovered = required.subtract(normalize(starts))
    if uncovered.is_empty:
        return None
    x = uncovered.representative()
    return Interval(x, x + delta, False, False)


def verify_lebesgue(cover: Cover, delta) -> bool:
    return lebesgue_counterexample(cover, delta) is None


def ball_cover(n: int, ambient: Interval | None = None) -> Cover:
    """Overlapping dyadic grid cover of a closed interval.

    With h = len(ambient) * 2^-(n+2), the members are the traces of
    ((k-1)h, (k+1)h) on the ambient for k = 0..2^(n+2).  Every member
    has diameter at most 2h = len * 2^-(n+1), strictly below len * 2^-n.
    Covers are immutable, so results are shared via a cache.
    """
    return _ball_cover_cached(n, ambient)


@lru_cache(maxsize=None)
def _ball_cover_cached(n: int, ambient: Interval | None) -> Cover:
    if n < 1:
        raise ValueError("grid index must be >= 1")
    if ambient is None:
        ambient = Interval(Fraction(0), Fraction(1), False, False)
    lo, hi = ambient.lo, ambient.hi
    h = ambient.length / 2 ** (n + 2)
    members = []
    for k in range(2 ** (n + 2) + 1):
        raw_lo, raw_hi = lo + (k - 1) * h, lo + (k + 1) * h
        iv = Interval(
            max(raw_lo, lo),
            min(raw_hi, hi),
            lo_open=raw_lo >= lo,
            hi_open=raw_hi <= hi,
        )
        members.append(RSet((iv,)))
    return Cover(RSet((ambient,)), tuple(members))


def chain_subcover(cover: Cover) -> list[int]:
    """A minimal left-to-right chain of member indices covering the target.

    Requires each member restricted to the target [a, b] to be a single
    interval, relatively open in [a, b].  Greedy max-reach selection
    followed by a redundancy-pruning pass; in the result consecutive
    members overlap and non-consecutive members are disjoint.
    """
    t = _target_interval(cover)
    a, b = t.lo, t.hi
    box = RSet((t,))
    clipped: list[Interval] = []
    for i, m in enumerate(cover.members):
        trace = m.intersect(box)
        if len(trace.components) != 1:
            raise CoverError(
                f"member {i} restricted to the target is not a single interval"
            )
        clipped.append(trace.components[0])

    chain: list[int] = []
    pos = a  # first point not yet known to be covered
    while True:
        best = None
        for i, c in enumerate(clipped):
            if i in chain or not c.contains(pos):
                continue
            key = (c.hi, not c.hi_open)
            if best is None or key > best[0]:
                best = (key, i)
        if best is None:
            raise CoverError(f"cover fails to cover the target at {pos}")
        i = best[1]
        chain.append(i)
        c = clipped[i]
        if c.hi > b or (c.hi == b and not c.hi_open):
            break
        pos = c.hi

    def covers_with(idxs: list[int]) -> bool:
        return box.is_subset(union_all([RSet((clipped[i],)) for i in idxs]))

    pruned = list(chain)
    for i in list(pruned):
        trial = [j for j in pruned if j != i]
        if trial and covers_with(trial):
            pruned = trial

    for k in range(len(pruned) - 1):
        c1, c2 = clipped[pruned[k]], clipped[pruned[k + 1]]
        if RSet((c1,)).intersect(RSet((c2,))).is_empty:
            raise CoverError("chain members do not overlap consecutively")
    for k in range(len(pruned) - 2):
        c1, c3 = clipped[pruned[k]], clipped[pruned[k + 2]]
        if not RSet((c1,)).intersect(RSet((c3,))).is_empty:
            raise CoverError("non-consecutive chain members intersect")
    return pruned
