"""Unreduced Kauffman bracket and the graded Euler characteristic of a framed table."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import LinkDiagram


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in A, stored as ``{exponent: coefficient}``."""

    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {e: c for e, c in self.coeffs.items() if c})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    def __pow__(self, k: int) -> "LaurentPoly":
        out = LaurentPoly({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mag = abs(c)
            if e == 0:
                term = str(mag)
            else:
                var = "A" if e == 1 else f"A^{e}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not out:
                out = ("-" if c < 0 else "") + term
            else:
                out += (" - " if c < 0 else " + ") + term
        return out

    __repr__ = __str__


LOOP = LaurentPoly({2: -1, -2: -1})


def bracket(diagram: LinkDiagram) -> LaurentPoly:
    """Sum over states of A^sigma (-A^2 - A^-2)^circles."""
    n = diagram.n
    # bucket by (sigma, circles) first; the polynomial work is then tiny
    counts: dict[tuple[int, int], int] = {}
    for bits in range(1 << n):
        k = diagram.circle_labels(bits)[1]
        key = (n - 2 * bin(bits).count("1"), k)
        counts[key] = counts.get(key, 0) + 1
    powers: dict[int, LaurentPoly] = {}
    total = LaurentPoly()
    for (s, k), mult in sorted(counts.items()):
        if k not in powers:
            powers[k] = LOOP ** k
        total = total + LaurentPoly.monomial(s, mult) * powers[k]
    return total


def graded_euler(table) -> LaurentPoly:
    """Sum of (-1)^((b-a)/2) rank H_{a,b} A^b over a framed table."""
    from .homology import FRAMED, ParityError

    if table.mode != FRAMED:
        table = table.to_framed()
    out: dict[int, int] = {}
    for (a, b), g in table.groups.items():
        if (b - a) % 2:
            raise ParityError(f"framed grading ({a}, {b}) has odd b - a")
        sign = -1 if ((b - a) // 2) % 2 else 1
        out[b] = out.get(b, 0) + sign * g.free_rank
    return LaurentPoly(out)
