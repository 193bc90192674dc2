"""Link diagrams in planar-diagram form, Kauffman states and smoothings.

A crossing is stored as ``(a, b, c, d)``: four arc labels read
counterclockwise, starting from the incoming under-strand.  With that
convention the A-smoothing joins ``a-b`` and ``c-d`` and the B-smoothing
joins ``a-d`` and ``b-c``, for either crossing sign.  Swept regions follow
the usual rule: rotating the over-strand counterclockwise sweeps the two A
regions, and the A-smoothing opens a channel between them.  For a positive
crossing this makes the A-smoothing the oriented one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

A, B = "A", "B"


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def arcs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def smoothing(self, marker: str, swap: bool = False) -> tuple[tuple[int, int], tuple[int, int]]:
        if (marker == A) != swap:
            return (self.a, self.b), (self.c, self.d)
        return (self.a, self.d), (self.b, self.c)


@dataclass(frozen=True)
class KauffmanState:
    markers: tuple[str, ...]

    @classmethod
    def from_bits(cls, bits: int, n: int) -> "KauffmanState":
        """Bit i set means crossing i carries a B marker."""
        return cls(tuple(B if bits >> i & 1 else A for i in range(n)))

    @classmethod
    def all_states(cls, n: int) -> Iterator["KauffmanState"]:
        for bits in range(1 << n):
            yield cls.from_bits(bits, n)

    @property
    def bits(self) -> int:
        return sum(1 << i for i, m in enumerate(self.markers) if m == B)

    def flip(self, i: int) -> "KauffmanState":
        m = list(self.markers)
        m[i] = B if m[i] == A else A
        return KauffmanState(tuple(m))

    def __len__(self):
        return len(self.markers)


def sigma(s: KauffmanState) -> int:
    """Number of A markers minus number of B markers."""
    nb = sum(1 for m in s.markers if m == B)
    return len(s.markers) - 2 * nb


@dataclass(frozen=True)
class CircleSet:
    """Circles of a smoothed diagram.

    ``arc_circle[arc]`` is the circle containing the arc; circles are
    numbered by their least arc label.
    """

    arc_circle: tuple[int, ...]
    count: int

    def circles(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for arc, c in enumerate(self.arc_circle):
            out[c].append(arc)
        return out


@dataclass(frozen=True)
class LinkDiagram:
    arc_count: int
    crossings: tuple[Crossing, ...]
    swap_smoothings: bool = False
    # arc -> (index of crossing it leaves, index of crossing it enters); -1 for free loops
    orientation: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @classmethod
    def from_braid(cls, word, swap_smoothings: bool = False) -> "LinkDiagram":
        """Closure of a braid word, one crossing per letter, strands oriented upward.

        Letter k acts on positions k-1 (left) and k (right).  For a positive
        letter the strand entering at the left passes over.
        """
        n = word.strands
        current = list(range(n))
        next_arc = n
        raw: list[list[int]] = []
        signs = []
        for k in word.letters:
            left, right = abs(k) - 1, abs(k)
            in_l, in_r = current[left], current[right]
            out_l, out_r = next_arc, next_arc + 1
            next_arc += 2
            if k > 0:
                raw.append([in_r, out_r, out_l, in_l])
            else:
                raw.append([in_l, in_r, out_r, out_l])
            signs.append(1 if k > 0 else -1)
            current[left], current[right] = out_l, out_r
        # close up: the top arc at each position is the bottom arc at that position
        rename = {current[p]: p for p in range(n) if current[p] != p}
        used = sorted({rename.get(x, x) for x in range(next_arc)})
        compact = {x: i for i, x in enumerate(used)}
        crossings = tuple(
            Crossing(*(compact[rename.get(x, x)] for x in pd), sign=s)
            for pd, s in zip(raw, signs))
        arc_count = len(used)
        ends = [[-1, -1] for _ in range(arc_count)]
        for idx, x in enumerate(crossings):
            # the under-strand runs a -> c; the over-strand runs d -> b (positive) or b -> d
            ends[x.a][1] = idx
            ends[x.c][0] = idx
            src, dst = (x.d, x.b) if x.sign > 0 else (x.b, x.d)
            ends[src][1] = idx
            ends[dst][0] = idx
        return cls(arc_count, crossings, swap_smoothings, tuple(tuple(e) for e in ends))

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def free_loops(self) -> list[int]:
        touched = {arc for x in self.crossings for arc in x.arcs}
        return [arc for arc in range(self.arc_count) if arc not in touched]

    def components(self) -> int:
        """Number of link components, by following strands straight through crossings."""
        parent = list(range(self.arc_count))
        for x in self.crossings:
            _union(parent, x.a, x.c)
            _union(parent, x.b, x.d)
        return len({_find(parent, i) for i in range(self.arc_count)})

    def circle_labels(self, bits: int) -> tuple[list[int], int]:
        """Circle index of every arc under the state given as a B-bitmask."""
        parent = list(range(self.arc_count))
        swap = self.swap_smoothings
        for i, x in enumerate(self.crossings):
            if (not (bits >> i & 1)) != swap:
                _union(parent, x.a, x.b)
                _union(parent, x.c, x.d)
            else:
                _union(parent, x.a, x.d)
                _union(parent, x.b, x.c)
        labels = [0] * self.arc_count
        seen: dict[int, int] = {}
        for arc in range(self.arc_count):
            r = _find(parent, arc)
            if r not in seen:
                seen[r] = len(seen)
            labels[arc] = seen[r]
        return labels, len(seen)

    def reorder(self, order: Sequence[int]) -> "LinkDiagram":
        """Same diagram with crossings listed in the given order."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of the crossing indices")
        inverse = {old: new for new, old in enumerate(order)}
        orient = tuple((inverse.get(s, -1) if s >= 0 else -1, inverse.get(t, -1) if t >= 0 else -1)
                       for s, t in self.orientation)
        return LinkDiagram(self.arc_count, tuple(self.crossings[i] for i in order),
                           self.swap_smoothings, orient)

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        off = self.arc_count
        moved = tuple(Crossing(x.a + off, x.b + off, x.c + off, x.d + off, x.sign)
                      for x in other.crossings)
        shift = len(self.crossings)
        orient = self.orientation + tuple(
            (s + shift if s >= 0 else -1, t + shift if t >= 0 else -1) for s, t in other.orientation)
        return LinkDiagram(off + other.arc_count, self.crossings + moved,
                           self.swap_smoothings, orient)

    def to_json(self) -> str:
        return json.dumps({
            "arcs": self.arc_count,
            "crossings": [list(x.arcs) for x in self.crossings],
            "signs": [x.sign for x in self.crossings],
        })


def resolve(diagram: LinkDiagram, state: KauffmanState) -> CircleSet:
    if len(state) != diagram.n:
        raise ValueError(f"state has {len(state)} markers for {diagram.n} crossings")
    labels, count = diagram.circle_labels(state.bits)
    return CircleSet(tuple(labels), count)


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _union(parent: list[int], i: int, j: int):
    ri, rj = _find(parent, i), _find(parent, j)
    if ri != rj:
        if ri < rj:
            parent[rj] = ri
        else:
            parent[ri] = rj
