"""SAT sweeping (fraiging) of and-inverter graphs.

Random simulation groups nodes into candidate equivalence classes, up to
complement.  The sweep then walks the graph in topological order, rebuilding
each AND node over the analogues of its fanins in a fresh output graph.  When
an earlier node shares the candidate class, one incremental SAT session is
asked whether the two rebuilt nodes are equal.  Proven pairs are merged;
counterexamples are simulated to split the classes; solver limits just leave
the node unmerged.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .aig import Aig, AigError, NodeKind
from .encode import SatLitMap, ensure_encoded
from .lits import Lit
from .session import Session, SolveResult

ONES = np.uint64(0xFFFF_FFFF_FFFF_FFFF)


class ArityMismatch(AigError):
    pass


@dataclass(frozen=True)
class FraigConfig:
    sim_words: int = 4
    sim_rounds: int = 2
    solve_limit: int | None = 1000
    rng_seed: int = 0
    engine: str = "embedded"
    library: str | None = None

    def __post_init__(self) -> None:
        if self.sim_words < 1:
            raise ValueError("sim_words must be at least 1")
        if self.sim_rounds < 1:
            raise ValueError("sim_rounds must be at least 1")
        if self.solve_limit is not None and self.solve_limit < 0:
            raise ValueError("solve_limit must be non-negative or None")


# -- simulation ----------------------------------------------------------------


def random_words(g: Aig, words: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random 64-bit words for every input and register."""
    draw = lambda n: rng.integers(0, ONES, size=(n, words), dtype=np.uint64, endpoint=True)  # noqa: E731
    return draw(g.num_inputs), draw(g.num_regs)


def simulate(g: Aig, in_words: np.ndarray, reg_words: np.ndarray | None = None) -> np.ndarray:
    """Word-parallel simulation; row ``n`` is the signature of node ``n``.

    ``in_words`` and ``reg_words`` are ``(count, words)`` arrays of uint64.
    """
    in_words = np.asarray(in_words, dtype=np.uint64)
    width = in_words.shape[1]
    if reg_words is None:
        reg_words = np.zeros((g.num_regs, width), dtype=np.uint64)
    reg_words = np.asarray(reg_words, dtype=np.uint64)
    if in_words.shape != (g.num_inputs, width) or reg_words.shape != (g.num_regs, width):
        raise ValueError("simulation words do not match the graph's inputs and registers")
    sigs = np.zeros((g.num_nodes, width), dtype=np.uint64)
    if g.num_inputs:
        sigs[g.inputs] = in_words
    if g.num_regs:
        sigs[g.regs] = reg_words
    f0, f1 = g.fanin0, g.fanin1
    for node, kind in enumerate(g.kinds):
        if kind is NodeKind.AND:
            a, b = f0[node], f1[node]
            x = sigs[a >> 1]
            y = sigs[b >> 1]
            if a & 1:
                x = ~x
            if b & 1:
                y = ~y
            sigs[node] = x & y
    return sigs


# -- candidate classes ---------------------------------------------------------


class EquivClasses:
    """Partition of nodes into candidate classes, each member with a phase.

    A node's phase is bit 0 of its first signature; members ``a`` and ``b`` of
    a class are candidates for ``a == b ^ (phase(a) ^ phase(b))``.  The
    representative of a class is its smallest node id.
    """

    def __init__(self) -> None:
        self._rep: dict[int, int] = {}
        self._phase: dict[int, int] = {}
        self._members: dict[int, list[int]] = {}

    @classmethod
    def from_signatures(cls, sigs: np.ndarray) -> "EquivClasses":
        classes = cls()
        phases = (sigs[:, 0] & np.uint64(1)).astype(bool)
        norm = np.where(phases[:, None], ~sigs, sigs)
        groups: dict[bytes, list[int]] = defaultdict(list)
        for node in range(sigs.shape[0]):
            groups[norm[node].tobytes()].append(node)
        for node in range(sigs.shape[0]):
            classes._phase[node] = int(phases[node])
        for members in groups.values():
            if len(members) > 1:
                classes._add(members)
        return classes

    def _add(self, members: list[int]) -> None:
        members = sorted(members)
        rep = members[0]
        self._members[rep] = members
        for n in members:
            self._rep[n] = rep

    def rep(self, node: int) -> int | None:
        return self._rep.get(node)

    def phase(self, node: int) -> int:
        return self._phase[node]

    def same_class(self, a: int, b: int) -> bool:
        ra = self._rep.get(a)
        return ra is not None and ra == self._rep.get(b)

    def classes(self) -> list[list[int]]:
        return [list(m) for m in self._members.values()]

    def __len__(self) -> int:
        return len(self._members)

    def refine(self, sigs: np.ndarray) -> int:
        """Split classes by new signatures; returns how many classes split."""
        split = 0
        for rep, members in list(self._members.items()):
            groups: dict[bytes, list[int]] = defaultdict(list)
            for n in members:
                row = sigs[n]
                if self._phase[n]:
                    row = ~row
                groups[row.tobytes()].append(n)
            if len(groups) == 1:
                continue
            split += 1
            del self._members[rep]
            for n in members:
                del self._rep[n]
            for sub in groups.values():
                if len(sub) > 1:
                    self._add(sub)
        return split


def init_classes(sigs: np.ndarray) -> EquivClasses:
    return EquivClasses.from_signatures(sigs)


def refine_classes(classes: EquivClasses, sigs: np.ndarray) -> EquivClasses:
    classes.refine(sigs)
    return classes


# -- pairwise check ------------------------------------------------------------


class PairVerdict(enum.Enum):
    PROVED = "proved"
    CEX = "cex"
    LIMIT = "limit"


@dataclass
class PairCheck:
    verdict: PairVerdict
    assignment: dict[int, int] | None = None
    solves: int = 0


def check_equiv_pair(s: Session, m: SatLitMap, a: Lit, b: Lit) -> PairCheck:
    """Prove ``a == b`` with two directed checks: ``a & ~b`` and ``~a & b``."""
    solves = 0
    for x, y in ((a, b ^ 1), (a ^ 1, b)):
        s.assume(x)
        s.assume(y)
        result = s.solve()
        solves += 1
        if result is SolveResult.FAILED:
            return PairCheck(PairVerdict.LIMIT, solves=solves)
        if result is SolveResult.SAT:
            assignment = {v: s.val(2 * v) or 0 for v in range(m.num_vars)}
            return PairCheck(PairVerdict.CEX, assignment, solves)
    return PairCheck(PairVerdict.PROVED, solves=solves)


# -- sweep ---------------------------------------------------------------------


@dataclass
class SweepStats:
    ands_before: int = 0
    ands_after: int = 0
    structural: int = 0
    proved: int = 0
    disproved: int = 0
    limited: int = 0
    refinements: int = 0
    solves: int = 0
    conflicts: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class CexRecord:
    """One counterexample: ``node`` and ``rep ^ phase`` differ on these values."""

    node: int
    rep: int
    phase: int
    invals: tuple[int, ...]
    regvals: tuple[int, ...]
    separated: bool


@dataclass
class SweepResult:
    graph: Aig
    analogue: list[int | None]
    """Literal in ``graph`` equivalent to each input node, None if swept away."""
    raw_graph: Aig
    raw_analogue: list[int]
    stats: SweepStats
    cex: list[CexRecord] = field(default_factory=list)
    initial_classes: list[list[int]] = field(default_factory=list)


def _cex_words(
    g: Aig, out: Aig, assignment: dict[int, int], m: SatLitMap, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # Encoded pins take the counterexample value in every bit; the rest are random.
    fill_in, fill_reg = random_words(g, 1, rng)

    def pins(nodes: list[int], fill: np.ndarray) -> np.ndarray:
        words = fill.copy()
        for i, node in enumerate(nodes):
            sat = m.aig_to_sat(2 * node)
            if sat is not None:
                words[i, 0] = ONES if assignment.get(sat >> 1, 0) else np.uint64(0)
        return words

    return pins(out.inputs, fill_in), pins(out.regs, fill_reg)


def sweep(g: Aig, cfg: FraigConfig | None = None) -> SweepResult:
    """Fraig ``g``; the result graph is combinationally equivalent to it."""
    cfg = cfg or FraigConfig()
    rng = np.random.default_rng(cfg.rng_seed)
    classes = EquivClasses.from_signatures(simulate(g, *random_words(g, cfg.sim_words, rng)))
    for _ in range(cfg.sim_rounds - 1):
        classes.refine(simulate(g, *random_words(g, cfg.sim_words, rng)))
    initial = classes.classes()

    stats = SweepStats(ands_before=g.num_ands)
    cex_log: list[CexRecord] = []
    out = Aig()
    analogue = [0] * g.num_nodes
    m = SatLitMap()
    s = Session(cfg.engine, cfg.library)
    s.set_limit(cfg.solve_limit)
    try:
        for node, kind in enumerate(g.kinds):
            if kind is NodeKind.INPUT:
                analogue[node] = out.add_input(g.input_names[out.num_inputs])
                continue
            if kind is NodeKind.REG:
                analogue[node] = out.add_reg(g.reg_names[out.num_regs])
                continue
            if kind is NodeKind.CONST:
                continue
            f0, f1 = g.fanin0[node], g.fanin1[node]
            rebuilt = out.add_and(analogue[f0 >> 1] ^ (f0 & 1), analogue[f1 >> 1] ^ (f1 & 1))
            analogue[node] = rebuilt
            tried: set[int] = set()
            while True:
                rep = classes.rep(node)
                if rep is None or rep == node or rep in tried:
                    break
                tried.add(rep)
                phase = classes.phase(node) ^ classes.phase(rep)
                target = analogue[rep] ^ phase
                if rebuilt == target:
                    stats.structural += 1
                    break
                la = ensure_encoded(out, rebuilt, m, s)
                lb = ensure_encoded(out, target, m, s)
                check = check_equiv_pair(s, m, la, lb)
                stats.solves += check.solves
                if check.verdict is PairVerdict.PROVED:
                    analogue[node] = target
                    stats.proved += 1
                    break
                if check.verdict is PairVerdict.LIMIT:
                    stats.limited += 1
                    break
                stats.disproved += 1
                assert check.assignment is not None
                in_words, reg_words = _cex_words(g, out, check.assignment, m, rng)
                classes.refine(simulate(g, in_words, reg_words))
                stats.refinements += 1
                cex_log.append(
                    CexRecord(
                        node=node,
                        rep=rep,
                        phase=phase,
                        invals=tuple(int(w[0] & np.uint64(1)) for w in in_words),
                        regvals=tuple(int(w[0] & np.uint64(1)) for w in reg_words),
                        separated=not classes.same_class(node, rep),
                    )
                )
        for i, ns in enumerate(g.next_states):
            out.set_next_state(i, analogue[ns >> 1] ^ (ns & 1))
        for lit, name in zip(g.outputs, g.output_names):
            out.add_output(analogue[lit >> 1] ^ (lit & 1), name)
        stats.conflicts = s.callback_count
    finally:
        s.release()

    graph, remap = out.cleanup()
    final: list[int | None] = []
    for lit in analogue:
        new = remap.get(lit >> 1)
        final.append(None if new is None else new ^ (lit & 1))
    stats.ands_after = graph.num_ands
    return SweepResult(graph, final, out, analogue, stats, cex_log, initial)


# -- combinational equivalence -------------------------------------------------


def comb_outputs(g: Aig) -> list[int]:
    """Outputs followed by next-states."""
    return list(g.outputs) + list(g.next_states)


def join_graphs(g1: Aig, g2: Aig, strash: bool = False) -> tuple[Aig, list[int], list[int]]:
    """Both graphs over shared inputs and registers, copied node for node.

    The joined graph's outputs are the combined outputs of ``g1`` then those
    of ``g2``; its registers keep ``g1``'s next-states.
    """
    check_arity(g1, g2, outputs=False)
    j = Aig()
    ins = [j.add_input(name) for name in g1.input_names]
    regs = [j.add_reg(name) for name in g1.reg_names]
    outs = []
    for g in (g1, g2):
        lit_of = {0: 0}
        for k, node in enumerate(g.inputs):
            lit_of[node] = ins[k]
        for k, node in enumerate(g.regs):
            lit_of[node] = regs[k]
        for node in g.and_nodes():
            a, b = g.fanin0[node], g.fanin1[node]
            lit_of[node] = j.add_and(lit_of[a >> 1] ^ (a & 1), lit_of[b >> 1] ^ (b & 1), strash)
        outs.append([lit_of[lit >> 1] ^ (lit & 1) for lit in comb_outputs(g)])
    for lit in outs[0] + outs[1]:
        j.add_output(lit)
    for i, lit in enumerate(outs[0][g1.num_outputs :]):
        j.set_next_state(i, lit)
    return j, outs[0], outs[1]


def doubled(g: Aig) -> Aig:
    """``g`` next to an unhashed copy of itself, outputs of the copy appended."""
    return join_graphs(g, g)[0]


def check_arity(g1: Aig, g2: Aig, outputs: bool = True) -> None:
    pairs = [("inputs", g1.num_inputs, g2.num_inputs), ("registers", g1.num_regs, g2.num_regs)]
    if outputs:
        pairs.append(("outputs", g1.num_outputs, g2.num_outputs))
    for what, n1, n2 in pairs:
        if n1 != n2:
            raise ArityMismatch(f"graphs differ in number of {what}: {n1} vs {n2}")


class MiterVerdict(enum.Enum):
    EQUIVALENT = "equivalent"
    DIFFER = "differ"
    UNDECIDED = "undecided"


@dataclass
class MiterResult:
    verdict: MiterVerdict
    invals: tuple[int, ...] | None = None
    regvals: tuple[int, ...] | None = None
    output: int | None = None
    """Index (outputs then next-states) of the distinguished output pair."""
    merged_outputs: int = 0
    conflicts: int = 0
    sweep: SweepResult | None = None


def miter_check(g1: Aig, g2: Aig, cfg: FraigConfig | None = None) -> MiterResult:
    """Decide whether ``g1`` and ``g2`` are combinationally equivalent.

    The joined graph is fraiged first; output pairs that end on the same
    literal need no further work, the rest are checked pairwise with SAT.
    """
    cfg = cfg or FraigConfig()
    check_arity(g1, g2)
    joined, outs1, _ = join_graphs(g1, g2)
    swept = sweep(joined, cfg)
    g = swept.graph
    k = len(outs1)
    pairs = list(zip(g.outputs[:k], g.outputs[k:]))
    result = MiterResult(MiterVerdict.EQUIVALENT, sweep=swept)
    m = SatLitMap()
    s = Session(cfg.engine, cfg.library)
    s.set_limit(cfg.solve_limit)
    try:
        for i, (a, b) in enumerate(pairs):
            if a == b:
                result.merged_outputs += 1
                continue
            la = ensure_encoded(g, a, m, s)
            lb = ensure_encoded(g, b, m, s)
            check = check_equiv_pair(s, m, la, lb)
            if check.verdict is PairVerdict.LIMIT:
                result.verdict = MiterVerdict.UNDECIDED
                continue
            if check.verdict is PairVerdict.CEX:
                assert check.assignment is not None
                invals = _pin_values(g.inputs, check.assignment, m)
                regvals = _pin_values(g.regs, check.assignment, m)
                o1, o2 = comb_outputs(g1)[i], comb_outputs(g2)[i]
                if g1.lit_eval(o1, invals, regvals) == g2.lit_eval(o2, invals, regvals):
                    raise AssertionError("counterexample does not distinguish the outputs")
                result.verdict = MiterVerdict.DIFFER
                result.invals, result.regvals, result.output = invals, regvals, i
                break
        result.conflicts = s.callback_count
    finally:
        s.release()
    return result


def _pin_values(nodes: Sequence[int], assignment: dict[int, int], m: SatLitMap) -> tuple[int, ...]:
    values = []
    for node in nodes:
        sat = m.aig_to_sat(2 * node)
        values.append(0 if sat is None else assignment.get(sat >> 1, 0))
    return tuple(values)
