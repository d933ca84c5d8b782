"""Stateful incremental SAT session.

:class:`Session` keeps the logical picture of an incremental solver (the
permanent formula, pending assumption, clause under construction, status,
solution, last refuted assumption, callback count and an operation counter)
next to the engine that does the actual search.  Every operation checks its
state guard and raises :class:`PreconditionError` when called out of state.

Engines implement a small IPASIR-shaped protocol: ``signature``,
``add_lit``, ``finalize_clause``, ``assume``, ``set_limit``, ``solve``,
``callback_count``, ``bump_activity_vars``, ``stats`` and ``release``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Iterable, Protocol, Sequence

from .lits import Lit, lit_var, make_lit
from .solver import SIGNATURE, EngineAnswer, Solver, Verdict


class SessionError(Exception):
    pass


class PreconditionError(SessionError):
    """An operation was called in a state its guard forbids."""


class InitError(SessionError):
    """The requested engine could not be constructed."""


class Status(enum.Enum):
    UNDEF = "undef"
    INPUT = "input"
    UNSAT = "unsat"
    SAT = "sat"


class SolveResult(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    FAILED = "failed"


STAT_KEYS = ("clauses", "variables", "learnts", "conflicts", "decisions", "propagations")


@dataclass(frozen=True)
class SolverStats:
    clauses: int = 0
    variables: int = 0
    learnts: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0


@dataclass(frozen=True)
class Snapshot:
    status: Status
    some_history: bool
    empty_new_clause: bool
    assumption: tuple[Lit, ...]
    solved_assumption: tuple[Lit, ...] | None
    callback_count: int


class Engine(Protocol):
    callback_count: int

    def signature(self) -> str: ...
    def add_lit(self, lit: Lit) -> None: ...
    def finalize_clause(self) -> None: ...
    def assume(self, lit: Lit) -> None: ...
    def set_limit(self, limit: int | None) -> None: ...
    def solve(self) -> EngineAnswer: ...
    def bump_activity_vars(self, lits: Sequence[Lit]) -> None: ...
    def stats(self) -> dict[str, int]: ...
    def release(self) -> None: ...


class EmbeddedEngine:
    """Adapts :class:`~satsweep.solver.Solver` to the engine protocol."""

    def __init__(self) -> None:
        self.solver = Solver()
        self._clause: list[Lit] = []
        self._assumptions: list[Lit] = []
        self._limit: int | None = None
        self.callback_count = 0

    def signature(self) -> str:
        return SIGNATURE

    def add_lit(self, lit: Lit) -> None:
        self._clause.append(lit)

    def finalize_clause(self) -> None:
        self.solver.add_clause(self._clause)
        self._clause = []

    def assume(self, lit: Lit) -> None:
        self._assumptions.append(lit)

    def set_limit(self, limit: int | None) -> None:
        self._limit = limit

    def solve(self) -> EngineAnswer:
        answer = self.solver.solve(self._assumptions, self._limit)
        self._assumptions = []
        self.callback_count = self.solver.callbacks
        return answer

    def bump_activity_vars(self, lits: Sequence[Lit]) -> None:
        for lit in lits:
            self.solver.bump_activity(lit >> 1)

    def stats(self) -> dict[str, int]:
        return self.solver.stats()

    def release(self) -> None:
        self.solver = None  # type: ignore[assignment]


def make_engine(engine: str | Any = "embedded", library: str | None = None) -> Engine:
    """Build an engine from a name (``embedded`` / ``external``) or pass one through."""
    if not isinstance(engine, str):
        return engine
    if engine == "embedded":
        return EmbeddedEngine()
    if engine == "external":
        from .backend import BackendError, IpasirEngine, load_library

        try:
            return IpasirEngine(load_library(library))
        except BackendError as exc:
            raise InitError(str(exc)) from exc
    raise InitError(f"unknown engine {engine!r}")


def signature(engine: str = "embedded", library: str | None = None) -> str:
    """Name and version string of an engine."""
    if engine == "embedded":
        return SIGNATURE
    if engine == "external":
        from .backend import BackendError, load_library

        try:
            return load_library(library).signature()
        except BackendError as exc:
            raise InitError(str(exc)) from exc
    raise InitError(f"unknown engine {engine!r}")


class Session:
    """An incremental SAT session bound to one engine.

    Construction is initialization: a new session has status INPUT.

    >>> s = Session()
    >>> s.add_lit(2); s.finalize_clause()
    >>> s.assume(3)
    >>> s.solve()
    <SolveResult.UNSAT: 'unsat'>
    >>> s.failed(3)
    1
    """

    def __init__(self, engine: str | Any = "embedded", library: str | None = None) -> None:
        self._engine_spec = engine
        self._library = library
        self._history = 0
        self._engine: Engine | None = None
        self._start()

    def _start(self) -> None:
        self._engine = make_engine(self._engine_spec, self._library)
        self._formula: list[tuple[Lit, ...]] = []
        self._assumption: list[Lit] = []
        self._new_clause: list[Lit] = []
        self._status = Status.INPUT
        self._solution: tuple[Lit, ...] = ()
        self._values: dict[int, int] = {}
        self._solved_assumption: tuple[Lit, ...] = ()
        self._callback_count = 0
        self._limit: int | None = None
        self._history += 1

    # -- guards ------------------------------------------------------------

    def _require_live(self, op: str) -> None:
        if self._status is Status.UNDEF:
            raise PreconditionError(f"{op}: session is not initialized")

    def _require(self, op: str, status: Status) -> None:
        if self._status is not status:
            raise PreconditionError(f"{op}: requires status {status.name}, not {self._status.name}")

    # -- life cycle ----------------------------------------------------------

    def release(self) -> None:
        self._require_live("release")
        assert self._engine is not None
        self._engine.release()
        self._engine = None
        self._status = Status.UNDEF
        self._history += 1

    def reinit(self) -> None:
        if self._status is not Status.UNDEF:
            raise PreconditionError(f"reinit: requires status UNDEF, not {self._status.name}")
        if self._history <= 0:
            raise PreconditionError("reinit: session was never initialized")
        self._start()

    # -- problem construction ----------------------------------------------

    def add_lit(self, lit: Lit) -> None:
        self._require_live("add_lit")
        self._engine.add_lit(lit)  # type: ignore[union-attr]
        self._new_clause.append(lit)
        self._status = Status.INPUT
        self._history += 1

    def finalize_clause(self) -> None:
        self._require_live("finalize_clause")
        self._engine.finalize_clause()  # type: ignore[union-attr]
        self._formula.append(tuple(self._new_clause))
        self._new_clause = []
        self._status = Status.INPUT
        self._history += 1

    def add_clause(self, lits: Iterable[Lit]) -> None:
        """Convenience: ``add_lit`` for each literal, then ``finalize_clause``."""
        for lit in lits:
            self.add_lit(lit)
        self.finalize_clause()

    def assume(self, lit: Lit) -> None:
        self._require_live("assume")
        self._engine.assume(lit)  # type: ignore[union-attr]
        self._assumption.append(lit)
        self._status = Status.INPUT
        self._history += 1

    def input(self) -> None:
        self._require_live("input")
        self._status = Status.INPUT
        self._history += 1

    def set_limit(self, limit: int | None) -> None:
        self._require_live("set_limit")
        if limit is not None and limit < 0:
            raise ValueError("limit must be a natural number or None")
        self._engine.set_limit(limit)  # type: ignore[union-attr]
        self._limit = limit
        self._callback_count = 0
        self._history += 1

    def bump_activity_vars(self, lits: Sequence[Lit]) -> None:
        self._require_live("bump_activity_vars")
        self._engine.bump_activity_vars(list(lits))  # type: ignore[union-attr]
        self._history += 1

    # -- solving -------------------------------------------------------------

    def solve(self) -> SolveResult:
        self._require_live("solve")
        if self._new_clause:
            raise PreconditionError("solve: clause under construction was not finalized")
        engine = self._engine
        assert engine is not None
        assumption = tuple(self._assumption)
        answer = engine.solve()
        self._assumption = []
        self._callback_count += engine.callback_count
        self._history += 1

        if answer.verdict is Verdict.SAT:
            assert answer.model is not None
            self._values = {v: b for v, b in enumerate(answer.model) if b is not None}
            self._solution = tuple(make_lit(v, 1 - b) for v, b in self._values.items())
            self._status = Status.SAT
            return SolveResult.SAT
        if answer.verdict is Verdict.UNSAT:
            assert answer.core is not None
            self._values = {}
            self._solution = tuple(answer.core)
            self._solved_assumption = assumption
            self._status = Status.UNSAT
            return SolveResult.UNSAT
        self._values = {}
        self._solution = ()
        self._status = Status.INPUT
        return SolveResult.FAILED

    def val(self, lit: Lit) -> int | None:
        """1 or 0 for the literal under the last model, None if undefined."""
        self._require("val", Status.SAT)
        value = self._values.get(lit_var(lit))
        if value is None:
            return None
        return value ^ (lit & 1)

    def failed(self, lit: Lit) -> int:
        self._require("failed", Status.UNSAT)
        if lit not in self._solved_assumption:
            raise PreconditionError(f"failed: literal {lit} was not assumed in the last solve")
        return int(lit in self._solution)

    # -- accessors -----------------------------------------------------------

    def inspect(self) -> Snapshot:
        return Snapshot(
            status=self._status,
            some_history=self._history > 0,
            empty_new_clause=not self._new_clause,
            assumption=tuple(self._assumption),
            solved_assumption=self._solved_assumption if self._status is Status.UNSAT else None,
            callback_count=self._callback_count,
        )

    def get_curr_stats(self) -> SolverStats:
        self._require_live("get_curr_stats")
        raw = self._engine.stats()  # type: ignore[union-attr]
        return SolverStats(**{k: int(raw.get(k, 0)) for k in STAT_KEYS})

    def signature(self) -> str:
        if self._engine is not None:
            return self._engine.signature()
        return signature(self._engine_spec, self._library) if isinstance(self._engine_spec, str) else ""

    @property
    def status(self) -> Status:
        return self._status

    @property
    def formula(self) -> list[tuple[Lit, ...]]:
        return list(self._formula)

    @property
    def num_clauses(self) -> int:
        return len(self._formula)

    @property
    def assumption(self) -> tuple[Lit, ...]:
        return tuple(self._assumption)

    @property
    def new_clause(self) -> tuple[Lit, ...]:
        return tuple(self._new_clause)

    @property
    def solution(self) -> tuple[Lit, ...]:
        return self._solution

    @property
    def solved_assumption(self) -> tuple[Lit, ...]:
        return self._solved_assumption

    @property
    def callback_count(self) -> int:
        return self._callback_count

    @property
    def history(self) -> int:
        return self._history

    @property
    def limit(self) -> int | None:
        return self._limit

    @property
    def engine(self) -> Engine | None:
        return self._engine

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc: object) -> None:
        if self._status is not Status.UNDEF:
            self.release()
