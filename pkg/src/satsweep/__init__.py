"""Incremental SAT sessions and SAT sweeping of and-inverter graphs."""

__version__ = "0.1.0"

from .aig import Aig, AigError, AigerParseError, parse_aiger, read_aiger, write_aiger  # noqa: E402
from .encode import SatLitMap, aignet_to_cnf_vals, ensure_encoded  # noqa: E402
from .fraig import FraigConfig, MiterVerdict, PairVerdict, check_equiv_pair, miter_check, sweep  # noqa: E402
from .session import InitError, PreconditionError, Session, SolveResult, Status  # noqa: E402
from .solver import Solver, brute_force_solve  # noqa: E402

__all__ = [
    "Aig",
    "AigError",
    "AigerParseError",
    "FraigConfig",
    "InitError",
    "MiterVerdict",
    "PairVerdict",
    "PreconditionError",
    "SatLitMap",
    "Session",
    "SolveResult",
    "Solver",
    "Status",
    "aignet_to_cnf_vals",
    "brute_force_solve",
    "check_equiv_pair",
    "ensure_encoded",
    "miter_check",
    "parse_aiger",
    "read_aiger",
    "sweep",
    "write_aiger",
]
