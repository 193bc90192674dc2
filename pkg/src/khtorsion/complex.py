"""Enhanced Kauffman states and the bigraded integer chain complex.

Generators of ``C_{a,b}`` are enhanced states ``t`` with ``a = sigma(s)`` and
``b = sigma(s) + 2 tau(t)``; the differential ``C_{a,b} -> C_{a-2,b}``
switches one A marker to B.  Circles untouched by the switched crossing keep
their labels, and the labels on the merged or split circles are forced by
``b`` staying fixed.  The incidence sign is ``(-1)^omega`` with omega the
number of B markers of the source state after the switched crossing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .algebra import IntMatrix
from .budget import MemoryBudget
from .diagram import KauffmanState, LinkDiagram


class EnhancedState(NamedTuple):
    """Kauffman state (B-bitmask over crossings) plus circle labels.

    Bit j of ``label_mask`` set means circle j is labelled +1.
    """

    bits: int
    label_mask: int
    circles: int
    crossings: int

    @property
    def state(self) -> KauffmanState:
        return KauffmanState.from_bits(self.bits, self.crossings)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(1 if self.label_mask >> j & 1 else -1 for j in range(self.circles))

    @property
    def sigma(self) -> int:
        return self.crossings - 2 * _popcount(self.bits)

    @property
    def tau(self) -> int:
        return 2 * _popcount(self.label_mask) - self.circles

    @property
    def grading(self) -> tuple[int, int]:
        return self.sigma, self.sigma + 2 * self.tau


@dataclass
class BigradedComplex:
    """``bases[(a, b)]`` lists generators; ``differentials[(a, b)]`` is the
    matrix of C_{a,b} -> C_{a-2,b} (rows index the target basis)."""

    crossings: int
    bases: dict[tuple[int, int], list[EnhancedState]]
    differentials: dict[tuple[int, int], IntMatrix] = field(default_factory=dict)

    def dim(self, a: int, b: int) -> int:
        return len(self.bases.get((a, b), ()))

    def d(self, a: int, b: int) -> IntMatrix:
        """Differential out of C_{a,b}, a zero matrix when absent."""
        m = self.differentials.get((a, b))
        if m is None:
            return IntMatrix.zeros(self.dim(a - 2, b), self.dim(a, b))
        return m

    def gradings(self) -> list[tuple[int, int]]:
        return sorted(self.bases)

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.bases.values())

    def to_json_dict(self) -> dict:
        out = []
        for a, b in self.gradings():
            m = self.differentials.get((a, b))
            out.append({
                "a": a, "b": b, "dim": self.dim(a, b),
                "d": sorted([r, c, v] for (r, c), v in m.entries.items()) if m else [],
            })
        return {"crossings": self.crossings, "gradings": out}


@dataclass(frozen=True)
class DSquaredReport:
    ok: bool
    bigrading: tuple[int, int] | None = None
    witness: tuple[int, int, int] | None = None

    def __bool__(self):
        return self.ok


def _popcount(x: int) -> int:
    return x.bit_count()


def _state_order(n: int):
    """B-bitmasks in marker-lexicographic order (A < B, crossing 0 most significant)."""
    for idx in range(1 << n):
        yield int(format(idx, f"0{n}b")[::-1], 2) if n else 0


def _label_order(k: int):
    for idx in range(1 << k):
        yield int(format(idx, f"0{k}b")[::-1], 2) if k else 0


def generator_count(diagram: LinkDiagram) -> int:
    """Exact sum over states of 2^(number of circles)."""
    return sum(1 << diagram.circle_labels(bits)[1] for bits in range(1 << diagram.n))


def state_circles(diagram: LinkDiagram) -> dict[int, tuple[list[int], int]]:
    """Arc-to-circle labelling of every state, keyed by B-bitmask, in generator order."""
    return {bits: diagram.circle_labels(bits) for bits in _state_order(diagram.n)}


def quantum_gradings(diagram: LinkDiagram, circle_data=None) -> list[int]:
    """Every b carried by some generator."""
    circle_data = circle_data or state_circles(diagram)
    n = diagram.n
    out = set()
    for bits, (_, k) in circle_data.items():
        a = n - 2 * bits.bit_count()
        out.update(range(a - 2 * k, a + 2 * k + 1, 4))
    return sorted(out)


def enumerate_generators(diagram: LinkDiagram, budget: MemoryBudget | None = None,
                         quantum: int | None = None, circle_data=None):
    """Bases of every C_{a,b}, in state-then-label lexicographic order.

    With ``quantum`` set only the buckets with that b are built.  Returns
    ``(bases, circle_data)`` where ``circle_data[bits]`` holds the
    arc-to-circle labelling of each state (reused by the differential).
    """
    n = diagram.n
    bases: dict[tuple[int, int], list[EnhancedState]] = {}
    if circle_data is None:
        circle_data = state_circles(diagram)
    for bits, (_, k) in circle_data.items():
        a = n - 2 * bits.bit_count()
        if quantum is not None:
            # b = a + 2 tau fixes the number of +1 labels
            plus, odd = divmod((quantum - a) // 2 + k, 2)
            if (quantum - a) % 2 or odd or not 0 <= plus <= k:
                continue
        for mask in _label_order(k):
            b = a + 2 * (2 * mask.bit_count() - k)
            if quantum is not None and b != quantum:
                continue
            bucket = bases.get((a, b))
            if bucket is None:
                bucket = bases[(a, b)] = []
            if budget is not None:
                budget.charge(1, (a, b), len(bucket) + 1)
            bucket.append(EnhancedState(bits, mask, k, n))
    return bases, circle_data


def _transition(diagram: LinkDiagram, src_labels, dst_labels, crossing: int):
    """How circles of the source state become circles of the target state.

    Returns ``(kept, kind, src, dst)``: ``kept`` pairs untouched circles,
    ``kind`` is "merge" or "split", and src/dst list the circles involved.
    """
    x = diagram.crossings[crossing]
    touched_src = sorted({src_labels[arc] for arc in x.arcs})
    touched_dst = sorted({dst_labels[arc] for arc in x.arcs})
    kept = {}
    for arc, c in enumerate(src_labels):
        if c not in touched_src:
            kept[c] = dst_labels[arc]
    kind = "merge" if len(touched_src) == 2 else "split"
    return sorted(kept.items()), kind, touched_src, touched_dst


def build_differentials(diagram: LinkDiagram, budget: MemoryBudget | None = None,
                        quantum: int | None = None, circle_data=None) -> BigradedComplex:
    """The complex, or with ``quantum`` set its direct summand at that b."""
    bases, circle_data = enumerate_generators(diagram, budget, quantum, circle_data)
    n = diagram.n
    # local index of every (state, label mask) inside its bucket
    local: dict[int, dict[int, int]] = {}
    for basis in bases.values():
        for i, g in enumerate(basis):
            local.setdefault(g.bits, {})[g.label_mask] = i
    entries: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    for bits, cols in local.items():
        src_labels, k = circle_data[bits]
        a = n - 2 * bits.bit_count()
        masks = list(cols)
        bvals = {m: a + 2 * (2 * m.bit_count() - k) for m in masks}
        for i in range(n):
            if bits >> i & 1:
                continue
            tbits = bits | 1 << i
            rows = local.get(tbits)
            if rows is None:
                # no generator of the target state shares this b
                continue
            dst_labels, _ = circle_data[tbits]
            kept, kind, src, dst = _transition(diagram, src_labels, dst_labels, i)
            sign = -1 if (bits >> (i + 1)).bit_count() & 1 else 1
            image = [0] * k
            for c_src, c_dst in kept:
                image[c_src] = 1 << c_dst
            base = [0] * (1 << k)
            for m in range(1, 1 << k):
                low = m & -m
                base[m] = base[m ^ low] | image[low.bit_length() - 1]
            s0 = 1 << src[0]
            d0 = 1 << dst[0]
            if kind == "merge":
                s1 = 1 << src[1]
                for m in masks:
                    l1, l2 = m & s0, m & s1
                    if l1 and l2:
                        continue
                    # (-,-) -> -, one + -> +
                    t = base[m] | d0 if (l1 or l2) else base[m]
                    _entry(entries, a, bvals[m], rows[t], cols[m], sign)
            else:
                d1 = 1 << dst[1]
                for m in masks:
                    if m & s0:
                        _entry(entries, a, bvals[m], rows[base[m] | d0 | d1], cols[m], sign)
                    else:
                        _entry(entries, a, bvals[m], rows[base[m] | d1], cols[m], sign)
                        _entry(entries, a, bvals[m], rows[base[m] | d0], cols[m], sign)
    if budget is not None:
        budget.charge(sum(len(e) for e in entries.values()) // 4, "differential")
    diffs = {}
    for (a, b), ent in entries.items():
        diffs[(a, b)] = IntMatrix.trusted(len(bases[(a - 2, b)]), len(bases[(a, b)]), ent)
    return BigradedComplex(n, bases, diffs)


def _entry(entries, a, b, row, col, sign):
    bucket = entries.get((a, b))
    if bucket is None:
        bucket = entries[(a, b)] = {}
    bucket[(row, col)] = sign


def circles_of(diagram: LinkDiagram, t: EnhancedState) -> list[frozenset[int]]:
    labels, k = diagram.circle_labels(t.bits)
    out = [set() for _ in range(k)]
    for arc, c in enumerate(labels):
        out[c].add(arc)
    return [frozenset(s) for s in out]


def incidence(diagram: LinkDiagram, t: EnhancedState, t_target: EnhancedState) -> int:
    """The coefficient (t : t') of t' in the differential of t."""
    if t.grading[0] != t_target.grading[0] + 2 or t.grading[1] != t_target.grading[1]:
        return 0
    diff = t.bits ^ t_target.bits
    if _popcount(diff) != 1 or t.bits & diff:
        return 0
    crossing = diff.bit_length() - 1
    src = circles_of(diagram, t)
    dst = circles_of(diagram, t_target)
    dst_label = {c: t_target.labels[j] for j, c in enumerate(dst)}
    for j, c in enumerate(src):
        if c in dst_label and dst_label[c] != t.labels[j]:
            return 0
    omega = _popcount(t.bits >> (crossing + 1))
    return -1 if omega & 1 else 1


def verify_d_squared(C: BigradedComplex) -> DSquaredReport:
    for (a, b), first in sorted(C.differentials.items()):
        second = C.differentials.get((a - 2, b))
        if second is None:
            continue
        prod = second @ first
        if prod.entries:
            (r, c), v = min(prod.entries.items())
            return DSquaredReport(False, (a, b), (r, c, v))
    return DSquaredReport(True)


def check_parity(C: BigradedComplex) -> bool:
    """Grading parity: a and b share the parity of the crossing count, and b - a = 2 tau."""
    n = C.crossings
    for (a, b), basis in C.bases.items():
        if (a - n) % 2 or (b - n) % 2:
            return False
        for g in basis:
            if g.grading != (a, b):
                return False
    return True
