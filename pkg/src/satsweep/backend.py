"""Engine backed by a native IPASIR shared library, loaded with ctypes.

The library path comes from an explicit argument or the
``IPASIR_SHARED_LIBRARY`` environment variable.  Literals are translated to
DIMACS on the way in and back on the way out.
"""

from __future__ import annotations

import ctypes
import os
from dataclasses import dataclass, field
from typing import Sequence

from .lits import Lit, lit_to_dimacs
from .solver import EngineAnswer, Verdict

ENV_VAR = "IPASIR_SHARED_LIBRARY"

IPASIR_SYMBOLS = (
    "ipasir_signature",
    "ipasir_init",
    "ipasir_release",
    "ipasir_add",
    "ipasir_assume",
    "ipasir_solve",
    "ipasir_val",
    "ipasir_failed",
    "ipasir_set_terminate",
    "ipasir_set_learn",
)

TERMINATE_CALLBACK = ctypes.CFUNCTYPE(ctypes.c_int, ctypes.c_void_p)


class BackendError(Exception):
    pass


class LoadError(BackendError):
    def __init__(self, message: str, symbol: str | None = None) -> None:
        super().__init__(message)
        self.symbol = symbol


class ProtocolError(BackendError):
    """The library answered outside the documented IPASIR conventions."""


def solve_code_to_verdict(code: int) -> Verdict:
    """Map an ``ipasir_solve`` return code: 10 SAT, 20 UNSAT, 0 interrupted."""
    if code == 10:
        return Verdict.SAT
    if code == 20:
        return Verdict.UNSAT
    if code == 0:
        return Verdict.INTERRUPTED
    raise ProtocolError(f"ipasir_solve returned {code}, expected 0, 10 or 20")


class IpasirLibrary:
    """Resolved entry points of one shared library."""

    def __init__(self, path: str) -> None:
        self.path = path
        try:
            self._dll = ctypes.CDLL(path)
        except OSError as exc:
            raise LoadError(f"cannot load IPASIR library {path!r}: {exc}") from exc
        for name in IPASIR_SYMBOLS:
            try:
                getattr(self._dll, name)
            except AttributeError:
                raise LoadError(f"{path!r} does not export {name}", symbol=name) from None
        d = self._dll
        d.ipasir_signature.restype = ctypes.c_char_p
        d.ipasir_signature.argtypes = []
        d.ipasir_init.restype = ctypes.c_void_p
        d.ipasir_init.argtypes = []
        d.ipasir_release.restype = None
        d.ipasir_release.argtypes = [ctypes.c_void_p]
        d.ipasir_add.restype = None
        d.ipasir_add.argtypes = [ctypes.c_void_p, ctypes.c_int32]
        d.ipasir_assume.restype = None
        d.ipasir_assume.argtypes = [ctypes.c_void_p, ctypes.c_int32]
        d.ipasir_solve.restype = ctypes.c_int
        d.ipasir_solve.argtypes = [ctypes.c_void_p]
        d.ipasir_val.restype = ctypes.c_int32
        d.ipasir_val.argtypes = [ctypes.c_void_p, ctypes.c_int32]
        d.ipasir_failed.restype = ctypes.c_int
        d.ipasir_failed.argtypes = [ctypes.c_void_p, ctypes.c_int32]
        d.ipasir_set_terminate.restype = None
        d.ipasir_set_terminate.argtypes = [ctypes.c_void_p, ctypes.c_void_p, TERMINATE_CALLBACK]
        self.dll = d

    def signature(self) -> str:
        raw = self.dll.ipasir_signature()
        return raw.decode("utf-8", "replace") if raw else ""


_loaded: dict[str, IpasirLibrary] = {}


def load_library(path: str | None = None) -> IpasirLibrary:
    """Load (once per path) the IPASIR library at ``path`` or ``$IPASIR_SHARED_LIBRARY``."""
    if path is None:
        path = os.environ.get(ENV_VAR)
        if not path:
            raise LoadError(f"no IPASIR library given and {ENV_VAR} is not set")
    if not os.path.exists(path):
        raise LoadError(f"IPASIR library {path!r} does not exist")
    lib = _loaded.get(path)
    if lib is None:
        lib = _loaded[path] = IpasirLibrary(path)
    return lib


@dataclass
class CallbackState:
    """Termination callback bookkeeping: calls counted, optional limit."""

    count: int = 0
    limit: int | None = None

    def __call__(self, _data: object) -> int:
        if self.limit is not None and self.count >= self.limit:
            return 1
        self.count += 1
        return 0


@dataclass
class BackendHandle:
    solver: int | None = None
    callback: CallbackState = field(default_factory=CallbackState)
    status: str = "undef"
    empty_new_clause: bool = True
    initialized: bool = False
    assumption: list[Lit] = field(default_factory=list)
    solved_assumption: list[Lit] = field(default_factory=list)


class IpasirEngine:
    """Engine protocol implementation over a loaded :class:`IpasirLibrary`.

    ``bump_activity_vars`` and ``stats`` are not part of IPASIR and are stubs.
    """

    def __init__(self, library: IpasirLibrary) -> None:
        self.lib = library
        ptr = library.dll.ipasir_init()
        if not ptr:
            raise BackendError("ipasir_init returned a null solver")
        self.handle = BackendHandle(solver=ptr, status="input", initialized=True)
        self._num_vars = 0
        self._c_callback = TERMINATE_CALLBACK(self.handle.callback)
        library.dll.ipasir_set_terminate(ptr, None, self._c_callback)

    @property
    def callback_count(self) -> int:
        return self.handle.callback.count

    def signature(self) -> str:
        return self.lib.signature()

    def _see(self, lit: Lit) -> int:
        self._num_vars = max(self._num_vars, (lit >> 1) + 1)
        return lit_to_dimacs(lit)

    def add_lit(self, lit: Lit) -> None:
        self.lib.dll.ipasir_add(self.handle.solver, self._see(lit))
        self.handle.empty_new_clause = False
        self.handle.status = "input"

    def finalize_clause(self) -> None:
        self.lib.dll.ipasir_add(self.handle.solver, 0)
        self.handle.empty_new_clause = True
        self.handle.status = "input"

    def assume(self, lit: Lit) -> None:
        self.lib.dll.ipasir_assume(self.handle.solver, self._see(lit))
        self.handle.assumption.append(lit)
        self.handle.status = "input"

    def set_limit(self, limit: int | None) -> None:
        self.handle.callback.limit = limit
        self.handle.callback.count = 0

    def solve(self) -> EngineAnswer:
        h = self.handle
        dll = self.lib.dll
        h.callback.count = 0
        assumption, h.assumption = h.assumption, []
        verdict = solve_code_to_verdict(dll.ipasir_solve(h.solver))
        if verdict is Verdict.SAT:
            h.status = "sat"
            model: list[int | None] = []
            for v in range(self._num_vars):
                r = dll.ipasir_val(h.solver, v + 1)
                model.append(None if r == 0 else int(r > 0))
            return EngineAnswer(verdict, model=tuple(model))
        if verdict is Verdict.UNSAT:
            h.status = "unsat"
            h.solved_assumption = assumption
            core = tuple(lit for lit in assumption if dll.ipasir_failed(h.solver, lit_to_dimacs(lit)))
            return EngineAnswer(verdict, core=core)
        h.status = "input"
        return EngineAnswer(verdict)

    def bump_activity_vars(self, lits: Sequence[Lit]) -> None:
        pass

    def stats(self) -> dict[str, int]:
        return {}

    def release(self) -> None:
        h = self.handle
        if h.solver is not None:
            self.lib.dll.ipasir_release(h.solver)
            h.solver = None
        h.status = "undef"
