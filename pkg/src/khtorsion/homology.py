"""Homology groups per bigrading, grading conversion and torsion reports."""

from __future__ import annotations

import json
import time
from contextlib import nullcontext
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .algebra import SmithForm, rank, reduce_complex, smith_normal_form
from .braid import BraidWord
from .budget import MemoryBudget
from .complex import BigradedComplex, build_differentials, quantum_gradings, state_circles
from .diagram import LinkDiagram

FRAMED = "framed"
CLASSICAL = "classical"


class ParityError(ArithmeticError):
    """A grading failed a parity constraint; indicates a construction bug."""


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z_{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass
class HomologyTable:
    mode: str
    writhe: int
    groups: dict[tuple[int, int], HomologyGroup] = field(default_factory=dict)

    def __post_init__(self):
        self.groups = {k: g for k, g in self.groups.items() if not g.is_trivial()}

    def __getitem__(self, key) -> HomologyGroup:
        return self.groups.get(key, HomologyGroup())

    def __eq__(self, other):
        return (isinstance(other, HomologyTable) and self.mode == other.mode
                and self.groups == other.groups)

    def to_classical(self) -> "HomologyTable":
        if self.mode == CLASSICAL:
            return self
        w = self.writhe
        out = {}
        for (a, b), g in self.groups.items():
            if (w - a) % 2 or (3 * w - b) % 2:
                raise ParityError(f"framed grading ({a}, {b}) incompatible with writhe {w}")
            out[((w - a) // 2, (3 * w - b) // 2)] = g
        return HomologyTable(CLASSICAL, w, out)

    def to_framed(self) -> "HomologyTable":
        if self.mode == FRAMED:
            return self
        w = self.writhe
        return HomologyTable(FRAMED, w, {(w - 2 * i, 3 * w - 2 * j): g
                                         for (i, j), g in self.groups.items()})

    def rational_poincare(self) -> dict[tuple[int, int], int]:
        return {k: g.free_rank for k, g in self.groups.items() if g.free_rank}

    def rows(self) -> list[dict]:
        return [{"i": x, "j": y, "free_rank": g.free_rank, "torsion": list(g.torsion)}
                for (x, y), g in sorted(self.groups.items())]

    def render(self) -> str:
        first, second = ("i", "j") if self.mode == CLASSICAL else ("a", "b")
        lines = [f"{first:>4} {second:>5}  group"]
        for (x, y), g in sorted(self.groups.items()):
            lines.append(f"{x:>4} {y:>5}  {g}")
        return "\n".join(lines)


def homology_at(C: BigradedComplex, a: int, b: int) -> HomologyGroup:
    """ker(d_{a,b}) / im(d_{a+2,b})."""
    incoming = smith_normal_form(C.d(a + 2, b))
    out_rank = rank(C.d(a, b))
    free = C.dim(a, b) - out_rank - incoming.rank
    return HomologyGroup(free, incoming.torsion)


def framed_table(C: BigradedComplex, writhe: int, threads: int = 1) -> HomologyTable:
    keys = C.gradings()
    mats = sorted(C.differentials)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            forms = dict(zip(mats, pool.map(lambda k: smith_normal_form(C.differentials[k]), mats)))
    else:
        forms = {k: smith_normal_form(C.differentials[k]) for k in mats}
    empty = SmithForm(())
    groups = {}
    for a, b in keys:
        incoming = forms.get((a + 2, b), empty)
        out = forms.get((a, b), empty)
        groups[(a, b)] = HomologyGroup(C.dim(a, b) - out.rank - incoming.rank, incoming.torsion)
    return HomologyTable(FRAMED, writhe, groups)


def classical_table(C: BigradedComplex, writhe: int, threads: int = 1) -> HomologyTable:
    return framed_table(C, writhe, threads).to_classical()


def torsion_summary(T: HomologyTable) -> list[tuple[int, int, int]]:
    if T.mode != CLASSICAL:
        raise ValueError("torsion summary is reported in classical gradings")
    return sorted((i, j, t) for (i, j), g in T.groups.items() for t in g.torsion)


@dataclass
class Result:
    word: BraidWord | None
    writhe: int
    components: int
    table: HomologyTable  # framed
    reduction_used: bool
    timings: dict[str, float] = field(default_factory=dict)
    mod_p: dict | None = None

    def table_in(self, mode: str) -> HomologyTable:
        return self.table.to_classical() if mode == CLASSICAL else self.table

    def to_json_dict(self, mode: str = CLASSICAL) -> dict:
        out = {
            "braid": list(self.word.letters) if self.word else None,
            "strands": self.word.strands if self.word else None,
            "writhe": self.writhe,
            "components": self.components,
            "mode": mode,
            "groups": self.table_in(mode).rows(),
            "timings": self.timings,
            "reduction_used": self.reduction_used,
        }
        if self.mod_p is not None:
            out["mod_p"] = self.mod_p
        return out

    def to_json(self, mode: str = CLASSICAL) -> str:
        return json.dumps(self.to_json_dict(mode), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "Result":
        word = BraidWord(data["strands"], tuple(data["braid"])) if data["braid"] is not None else None
        groups = {(g["i"], g["j"]): HomologyGroup(g["free_rank"], tuple(g["torsion"]))
                  for g in data["groups"]}
        table = HomologyTable(data["mode"], data["writhe"], groups).to_framed()
        return cls(word, data["writhe"], data["components"], table, data["reduction_used"],
                   dict(data["timings"]), data.get("mod_p"))


def compute(source, reduce: bool = True, threads: int = 1,
            budget: MemoryBudget | None = None, mod_p=()) -> Result:
    """Full pipeline: diagram -> complex -> (reduction) -> homology table."""
    word = source if isinstance(source, BraidWord) else None
    diagram = LinkDiagram.from_braid(source) if word is not None else source
    timings = {"build": 0.0, "homology": 0.0}
    if reduce:
        timings["reduce"] = 0.0
    circle_data = state_circles(diagram)
    groups = {}
    probes: dict | None = {str(p): [] for p in mod_p} if mod_p else None
    # the complex splits over b; one slice at a time bounds peak memory
    for b in quantum_gradings(diagram, circle_data):
        with (budget.scoped() if budget is not None else nullcontext()) as scope:
            t0 = time.perf_counter()
            C = build_differentials(diagram, scope, quantum=b, circle_data=circle_data)
            timings["build"] += time.perf_counter() - t0
            if reduce:
                t0 = time.perf_counter()
                C = reduce_complex(C)
                timings["reduce"] += time.perf_counter() - t0
            t0 = time.perf_counter()
            part = framed_table(C, diagram.writhe, threads)
            timings["homology"] += time.perf_counter() - t0
            groups.update(part.groups)
            if mod_p:
                for p, rows in mod_p_probe(C, part, mod_p).items():
                    probes[p].extend(rows)
            del C
    if probes:
        probes = {p: sorted(rows) for p, rows in probes.items()}
    timings = {k: round(v, 6) for k, v in timings.items()}
    table = HomologyTable(FRAMED, diagram.writhe, groups)
    return Result(word, diagram.writhe, diagram.components(), table, reduce, timings, probes)


def mod_p_probe(C: BigradedComplex, table: HomologyTable, primes) -> dict:
    """Per prime, classical gradings where the mod-p Betti number exceeds the rational one."""
    from .algebra import rank_mod_p

    w = table.writhe
    out = {}
    for p in primes:
        ranks = {k: rank_mod_p(m, p) for k, m in C.differentials.items()}
        excess = []
        for a, b in C.gradings():
            dim_p = C.dim(a, b) - ranks.get((a, b), 0) - ranks.get((a + 2, b), 0)
            free = table[(a, b)].free_rank
            if dim_p != free:
                excess.append([(w - a) // 2, (3 * w - b) // 2, dim_p - free])
        out[str(p)] = sorted(excess)
    return out
