"""Exact sparse integer linear algebra.

Entries are Python ints throughout, so nothing overflows during
elimination.  Matrices are stored as ``{(row, col): value}`` maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping


@dataclass
class IntMatrix:
    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v:
                clean[(r, c)] = int(v)
        self.entries = clean

    @classmethod
    def trusted(cls, rows: int, cols: int, entries: dict[tuple[int, int], int]) -> "IntMatrix":
        """Wrap entries already known to be nonzero and in range, skipping validation."""
        m = object.__new__(cls)
        m.rows, m.cols, m.entries = rows, cols, entries
        return m

    @classmethod
    def from_dense(cls, data: Iterable[Iterable[int]]) -> "IntMatrix":
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(data) for c, v in enumerate(row) if v})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, values: Iterable[int]) -> "IntMatrix":
        values = list(values)
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> dict[int, dict[int, int]]:
        rows: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        right = other.row_dicts()
        out: dict[tuple[int, int], int] = {}
        get = out.get
        for (r, k), v in self.entries.items():
            row = right.get(k)
            if row:
                for c, w in row.items():
                    key = (r, c)
                    out[key] = get(key, 0) + v * w
        return IntMatrix.trusted(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    @property
    def nnz(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _columns(rows: Mapping[int, Mapping[int, int]]) -> dict[int, set[int]]:
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    return cols


def _axpy(rows, cols, target: int, source: int, factor: int):
    """rows[target] -= factor * rows[source], keeping the column index in sync."""
    tgt = rows[target]
    for c, v in rows[source].items():
        nv = tgt.get(c, 0) - factor * v
        if nv:
            if c not in tgt:
                cols.setdefault(c, set()).add(target)
            tgt[c] = nv
        elif c in tgt:
            del tgt[c]
            cols[c].discard(target)


def _col_axpy(rows, cols, target: int, source: int, factor: int):
    """column[target] -= factor * column[source]."""
    for r in list(cols.get(source, ())):
        row = rows[r]
        nv = row.get(target, 0) - factor * row[source]
        if nv:
            if target not in row:
                cols.setdefault(target, set()).add(r)
            row[target] = nv
        elif target in row:
            del row[target]
            cols[target].discard(r)


def _drop(rows, cols, r: int, c: int):
    for cc in rows.pop(r):
        cols[cc].discard(r)
    cols.pop(c, None)


def _unit_pass(rows, cols) -> int:
    """Eliminate every unit pivot reachable; returns how many were removed."""
    removed = 0
    progress = True
    while progress:
        progress = False
        for r in list(rows):
            row = rows.get(r)
            if not row:
                continue
            best = None
            for c, v in row.items():
                if v == 1 or v == -1:
                    fill = len(cols[c])
                    if best is None or fill < best[0]:
                        best = (fill, c)
            if best is None:
                continue
            c = best[1]
            u = row[c]
            for other in list(cols[c]):
                if other != r:
                    _axpy(rows, cols, other, r, rows[other][c] * u)
            _drop(rows, cols, r, c)
            removed += 1
            progress = True
    for r in [r for r, row in rows.items() if not row]:
        del rows[r]
    return removed


def _general_pass(rows, cols) -> list[int]:
    diag = []
    while rows:
        # smallest absolute entry, ties broken by fill
        best = None
        for r, row in rows.items():
            for c, v in row.items():
                key = (abs(v), len(row) + len(cols[c]))
                if best is None or key < best[0]:
                    best = (key, r, c)
        _, r, c = best
        while True:
            p = rows[r][c]
            done = True
            for other in list(cols[c]):
                if other == r:
                    continue
                q = rows[other][c] // p
                _axpy(rows, cols, other, r, q)
                if c in rows[other]:
                    done = False
            for cc in list(rows[r]):
                if cc == c:
                    continue
                q = rows[r][cc] // p
                _col_axpy(rows, cols, cc, c, q)
                if cc in rows[r]:
                    done = False
            if done:
                break
            # a remainder survived: move the pivot to the smallest entry in row r / column c
            cand = [(abs(v), r, cc) for cc, v in rows[r].items()]
            cand += [(abs(rows[o][c]), o, c) for o in cols[c]]
            _, r, c = min(cand)
        diag.append(abs(rows[r][c]))
        _drop(rows, cols, r, c)
        for empty in [x for x, row in rows.items() if not row]:
            del rows[empty]
    return diag


def invariant_factors(diagonal: Iterable[int]) -> tuple[int, ...]:
    """Turn any nonzero diagonal into the divisibility chain it is equivalent to."""
    ones = 0
    rest = []
    for d in diagonal:
        d = abs(d)
        if d == 0:
            continue
        if d == 1:
            ones += 1
        else:
            rest.append(d)
    # diag(x, y) ~ diag(gcd, lcm)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            x, y = rest[i], rest[j]
            g = gcd(x, y)
            rest[i], rest[j] = g, x // g * y
    out = [1] * ones + [d for d in rest if d == 1] + [d for d in rest if d != 1]
    return tuple(sorted(out))


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Invariant factors of an integer matrix (unit pivots first, then smallest pivot)."""
    rows = m.row_dicts()
    cols = _columns(rows)
    ones = _unit_pass(rows, cols)
    diag = _general_pass(rows, cols)
    return SmithForm(invariant_factors([1] * ones + diag))


def rank(m: IntMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    rows = {r: dict(row) for r, row in m.row_dicts().items()}
    cols = _columns(rows)
    rk = 0
    while rows:
        r, row = next(iter(rows.items()))
        if not row:
            del rows[r]
            continue
        c = min(row, key=lambda cc: (abs(row[cc]), len(cols[cc])))
        p = row[c]
        for other in list(cols[c]):
            if other == r:
                continue
            orow = rows[other]
            v = orow[c]
            g = gcd(p, v)
            pa, va = p // g, v // g
            for cc in list(orow):
                orow[cc] *= pa
            _axpy(rows, cols, other, r, va)
            content = 0
            for x in orow.values():
                content = gcd(content, x)
            if content > 1:
                for cc in orow:
                    orow[cc] //= content
            if not orow:
                del rows[other]
        _drop(rows, cols, r, c)
        rk += 1
    return rk


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def rank_mod_p(m: IntMatrix, p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rows: dict[int, dict[int, int]] = {}
    for (r, c), v in m.entries.items():
        v %= p
        if v:
            rows.setdefault(r, {})[c] = v
    cols = _columns(rows)
    rk = 0
    while rows:
        r, row = next(iter(rows.items()))
        if not row:
            del rows[r]
            continue
        c = min(row, key=lambda cc: len(cols[cc]))
        inv = pow(row[c], -1, p)
        for other in list(cols[c]):
            if other == r:
                continue
            factor = rows[other][c] * inv % p
            orow = rows[other]
            for cc, v in row.items():
                nv = (orow.get(cc, 0) - factor * v) % p
                if nv:
                    if cc not in orow:
                        cols.setdefault(cc, set()).add(other)
                    orow[cc] = nv
                elif cc in orow:
                    del orow[cc]
                    cols[cc].discard(other)
            if not orow:
                del rows[other]
        _drop(rows, cols, r, c)
        rk += 1
    return rk


def reduce_complex(C):
    """Cancel unit entries of the differential (algebraic Gaussian elimination).

    Works on each quantum grading b separately.  Cancelling an entry
    ``d(x) = u*y + ...`` with ``u = +-1`` removes x and y and replaces
    ``d(z)`` by ``d(z) - v*u*d(x)`` for every z with ``d(z) = v*y + ...``.
    The surviving generators keep their labels; homology is unchanged.
    """
    from .complex import BigradedComplex

    bases = {}
    diffs = {}
    for b in sorted({b for _, b in C.bases}):
        gens, out = _cancel_units(C, b)
        by_a: dict[int, list[tuple[int, int]]] = {}
        for key in gens:
            by_a.setdefault(key[0], []).append(key)
        for a, keys in by_a.items():
            keys.sort(key=lambda k: k[1])
            bases[(a, b)] = [C.bases[(a, b)][i] for _, i in keys]
        index = {key: pos for keys in by_a.values() for pos, key in enumerate(keys)}
        for a, keys in by_a.items():
            tgt = by_a.get(a - 2)
            if not tgt:
                continue
            entries = {}
            for key in keys:
                for w, v in out[key].items():
                    entries[(index[w], index[key])] = v
            diffs[(a, b)] = IntMatrix(len(tgt), len(keys), entries)
    return BigradedComplex(C.crossings, bases, diffs)


def _cancel_units(C, b: int):
    """Unit cancellation within quantum grading b; returns surviving keys and d."""
    out: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    inn: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    for (a, bb), basis in C.bases.items():
        if bb != b:
            continue
        for i in range(len(basis)):
            out[(a, i)] = {}
            inn[(a, i)] = {}
    for (a, bb), mat in C.differentials.items():
        if bb != b:
            continue
        for (r, c), v in mat.entries.items():
            out[(a, c)][(a - 2, r)] = v
            inn[(a - 2, r)][(a, c)] = v

    changed = True
    while changed:
        changed = False
        for x in sorted(out):
            if x not in out:
                continue
            dx = out[x]
            best = None
            for y, v in dx.items():
                if v == 1 or v == -1:
                    cost = len(inn[y])
                    if best is None or cost < best[0]:
                        best = (cost, y)
            if best is None:
                continue
            y = best[1]
            u = dx[y]
            for z, v in list(inn[y].items()):
                if z == x:
                    continue
                dz = out[z]
                f = v * u
                for w, coeff in dx.items():
                    if w == y:
                        continue
                    nv = dz.get(w, 0) - f * coeff
                    if nv:
                        dz[w] = nv
                        inn[w][z] = nv
                    else:
                        dz.pop(w, None)
                        inn[w].pop(z, None)
            for g in (x, y):
                for w in out[g]:
                    inn[w].pop(g, None)
                for z in inn[g]:
                    out[z].pop(g, None)
                del out[g]
                del inn[g]
            changed = True
    return sorted(out), out
