"""Embedded incremental CDCL engine and a truth-table oracle.

The engine keeps its clause database, learned clauses and variable activities
across calls to :meth:`Solver.solve`.  Assumptions are placed as the first
decisions of each call and are forgotten afterwards.  When a call is refuted
under assumptions, the final conflict is traced back to the assumption
decisions to produce a core.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .lits import Formula

SIGNATURE = f"satsweep-cdcl {__version__}"

BRUTE_FORCE_MAX_VARS = 24


class Verdict(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    INTERRUPTED = "interrupted"


@dataclass(frozen=True)
class EngineAnswer:
    verdict: Verdict
    model: tuple[int | None, ...] | None = None
    """Value (0/1, None if undefined) of every variable the engine knows."""
    core: tuple[int, ...] | None = None
    """Subset of the assumptions that is unsatisfiable with the clauses."""


def _luby(i: int) -> int:
    # i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    """Two-watched-literal CDCL with first-UIP learning, VSIDS and Luby restarts."""

    def __init__(self, restart_base: int = 100, var_decay: float = 0.95) -> None:
        self.restart_base = restart_base
        self.var_decay = var_decay
        self.num_vars = 0
        self.ok = True

        self._value: list[int] = []  # per literal: 1 true, -1 false, 0 unassigned
        self._level: list[int] = []
        self._reason: list[list[int] | None] = []
        self._activity: list[float] = []
        self._polarity: list[int] = []
        self._seen: list[bool] = []
        self._watches: list[list[list[int]]] = []

        self._clauses: list[list[int]] = []
        self._learnts: list[list[int]] = []
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._heap: list[tuple[float, int]] = []
        self._var_inc = 1.0

        self.added_clauses = 0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.callbacks = 0

    # -- variables -------------------------------------------------------

    def ensure_var(self, var: int) -> None:
        while self.num_vars <= var:
            v = self.num_vars
            self.num_vars += 1
            self._value += (0, 0)
            self._level.append(0)
            self._reason.append(None)
            self._activity.append(0.0)
            self._polarity.append(1)
            self._seen.append(False)
            self._watches += ([], [])
            heapq.heappush(self._heap, (0.0, v))

    def bump_activity(self, var: int) -> None:
        self.ensure_var(var)
        self._bump(var)

    def _bump(self, var: int) -> None:
        act = self._activity[var] + self._var_inc
        self._activity[var] = act
        if act > 1e100:
            self._activity = [a * 1e-100 for a in self._activity]
            self._var_inc *= 1e-100
            self._rebuild_heap()
        elif self._value[2 * var] == 0:
            heapq.heappush(self._heap, (-act, var))

    def _rebuild_heap(self) -> None:
        self._heap = [(-self._activity[v], v) for v in range(self.num_vars) if self._value[2 * v] == 0]
        heapq.heapify(self._heap)

    def _pick_branch_var(self) -> int | None:
        heap = self._heap
        if len(heap) > 4 * self.num_vars + 64:
            self._rebuild_heap()
            heap = self._heap
        while heap:
            neg_act, v = heapq.heappop(heap)
            if self._value[2 * v] == 0 and -neg_act == self._activity[v]:
                return v
        return None

    # -- trail -----------------------------------------------------------

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        v = lit >> 1
        self._value[lit] = 1
        self._value[lit ^ 1] = -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _cancel_until(self, level: int) -> None:
        if len(self._trail_lim) <= level:
            return
        start = self._trail_lim[level]
        value, reason, polarity, act = self._value, self._reason, self._polarity, self._activity
        heap = self._heap
        for lit in self._trail[start:]:
            v = lit >> 1
            value[lit] = 0
            value[lit ^ 1] = 0
            reason[v] = None
            polarity[v] = lit & 1
            heapq.heappush(heap, (-act[v], v))
        del self._trail[start:]
        del self._trail_lim[level:]
        self._qhead = len(self._trail)

    def _propagate(self) -> list[int] | None:
        value, watches, trail = self._value, self._watches, self._trail
        while self._qhead < len(trail):
            false_lit = trail[self._qhead] ^ 1
            self._qhead += 1
            self.propagations += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if value[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if value[c[k]] != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[c[1]].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if value[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self._qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
        return None

    # -- clauses ---------------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a permanent clause.  Only legal between solves (at level 0)."""
        lits = list(lits)
        self.added_clauses += 1
        for lit in lits:
            self.ensure_var(lit >> 1)
        if not self.ok:
            return
        value = self._value
        clause: list[int] = []
        seen: set[int] = set()
        for lit in lits:
            if lit ^ 1 in seen or value[lit] == 1:
                return  # tautology or already satisfied at level 0
            if lit in seen or value[lit] == -1:
                continue
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
        elif len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(clause)
            self._clauses.append(clause)

    def _attach(self, clause: list[int]) -> None:
        self._watches[clause[0]].append(clause)
        self._watches[clause[1]].append(clause)

    # -- conflict analysis -------------------------------------------------

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen, level, reason, trail = self._seen, self._level, self._reason, self._trail
        cur = len(self._trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            for q in confl if p < 0 else confl[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]  # type: ignore[assignment]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # Local minimisation: drop literals implied by the rest of the clause.
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(not seen[x >> 1] and level[x >> 1] > 0 for x in r[1:]):
                keep.append(q)
        for q in learnt[1:]:
            seen[q >> 1] = False

        if len(keep) == 1:
            return keep, 0
        best = max(range(1, len(keep)), key=lambda k: level[keep[k] >> 1])
        keep[1], keep[best] = keep[best], keep[1]
        return keep, level[keep[1] >> 1]

    def _analyze_final(self, p: int) -> list[int]:
        """Collect the assumptions responsible for assumption ``p`` being false."""
        core = [p]
        if self._level[p >> 1] == 0:
            return core
        seen, reason, level, trail = self._seen, self._reason, self._level, self._trail
        seen[p >> 1] = True
        for i in range(len(trail) - 1, self._trail_lim[0] - 1, -1):
            x = trail[i] >> 1
            if not seen[x]:
                continue
            r = reason[x]
            if r is None:
                core.append(trail[i])
            else:
                for q in r[1:]:
                    if level[q >> 1] > 0:
                        seen[q >> 1] = True
            seen[x] = False
        return core

    # -- search ----------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = (), budget: int | None = None) -> EngineAnswer:
        """Decide the clauses under ``assumptions``.

        ``budget`` bounds the number of conflicts; every conflict is one
        termination callback and the call is interrupted when a callback
        arrives with ``budget`` callbacks already granted.
        """
        self.callbacks = 0
        assumptions = list(assumptions)
        for lit in assumptions:
            self.ensure_var(lit >> 1)
        if not self.ok:
            return EngineAnswer(Verdict.UNSAT, core=())
        if self._propagate() is not None:
            self.ok = False
            return EngineAnswer(Verdict.UNSAT, core=())
        restarts = 0
        while True:
            limit = _luby(restarts) * self.restart_base
            answer = self._search(assumptions, limit, budget)
            if answer is not None:
                self._cancel_until(0)
                return answer
            restarts += 1

    def _search(self, assumptions: list[int], max_conflicts: int, budget: int | None) -> EngineAnswer | None:
        value = self._value
        trail_lim = self._trail_lim
        local_conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if budget is not None and self.callbacks >= budget:
                    return EngineAnswer(Verdict.INTERRUPTED)
                self.callbacks += 1
                self.conflicts += 1
                local_conflicts += 1
                if not trail_lim:
                    self.ok = False
                    return EngineAnswer(Verdict.UNSAT, core=())
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self._learnts.append(learnt)
                    self._enqueue(learnt[0], learnt)
                self._var_inc /= self.var_decay
                continue

            if local_conflicts >= max_conflicts:
                self._cancel_until(0)
                return None

            nxt = -1
            while len(trail_lim) < len(assumptions):
                p = assumptions[len(trail_lim)]
                if value[p] == 1:
                    trail_lim.append(len(self._trail))
                elif value[p] == -1:
                    return EngineAnswer(Verdict.UNSAT, core=tuple(self._analyze_final(p)))
                else:
                    nxt = p
                    break
            if nxt < 0:
                v = self._pick_branch_var()
                if v is None:
                    model = tuple(1 if value[2 * i] == 1 else 0 for i in range(self.num_vars))
                    return EngineAnswer(Verdict.SAT, model=model)
                self.decisions += 1
                nxt = 2 * v | self._polarity[v]
            trail_lim.append(len(self._trail))
            self._enqueue(nxt, None)

    def stats(self) -> dict[str, int]:
        return {
            "clauses": self.added_clauses,
            "variables": self.num_vars,
            "learnts": len(self._learnts),
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }


def brute_force_solve(formula: Formula, assumptions: Sequence[int] = ()) -> EngineAnswer:
    """Exhaustive truth-table answer for small formulas.

    An UNSAT answer reports the full assumption list as its core.
    """
    num_vars = 1 + max(
        [lit >> 1 for clause in formula for lit in clause] + [lit >> 1 for lit in assumptions],
        default=-1,
    )
    if num_vars > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_VARS} variables, got {num_vars}")
    clauses = [list(c) for c in formula] + [[lit] for lit in assumptions]
    chunk = 1 << min(num_vars, 16)
    for start in range(0, 1 << num_vars, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        cols = [((idx >> v) & 1).astype(bool) for v in range(num_vars)]
        ok = np.ones(chunk, dtype=bool)
        for clause in clauses:
            sat = np.zeros(chunk, dtype=bool)
            for lit in clause:
                col = cols[lit >> 1]
                sat |= ~col if lit & 1 else col
            ok &= sat
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if hits.size:
            k = int(idx[hits[0]])
            return EngineAnswer(Verdict.SAT, model=tuple((k >> v) & 1 for v in range(num_vars)))
    return EngineAnswer(Verdict.UNSAT, core=tuple(assumptions))
