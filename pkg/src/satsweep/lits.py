"""Literals, clauses and CNF formulas.

A literal is a plain ``int``: the low bit is the polarity (1 = negated) and the
remaining bits are the 0-based variable index.  DIMACS literals are signed,
non-zero and 1-based, so variable ``v`` becomes ``v + 1``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Lit = int
Clause = Sequence[int]
Formula = Sequence[Clause]
Assignment = Mapping[int, int]


class UnassignedVariable(KeyError):
    """Raised when evaluating a literal whose variable has no value."""


def make_lit(var: int, neg: int = 0) -> Lit:
    if var < 0:
        raise ValueError(f"variable index must be non-negative, got {var}")
    if neg not in (0, 1):
        raise ValueError(f"polarity bit must be 0 or 1, got {neg}")
    return (var << 1) | neg


def lit_var(lit: Lit) -> int:
    return lit >> 1


def lit_neg(lit: Lit) -> int:
    return lit & 1


def negate_lit(lit: Lit) -> Lit:
    return lit ^ 1


def lit_to_dimacs(lit: Lit) -> int:
    var = (lit >> 1) + 1
    return -var if lit & 1 else var


def dimacs_to_lit(d: int) -> Lit:
    if d == 0:
        raise ValueError("0 terminates a DIMACS clause and is not a literal")
    return ((abs(d) - 1) << 1) | (d < 0)


def eval_lit(lit: Lit, env: Assignment) -> int:
    try:
        value = env[lit >> 1]
    except KeyError:
        raise UnassignedVariable(lit >> 1) from None
    return value ^ (lit & 1)


def eval_clause(clause: Clause, env: Assignment) -> int:
    # Every literal is evaluated so an unassigned variable is always reported.
    result = 0
    for lit in clause:
        result |= eval_lit(lit, env)
    return result


def eval_formula(formula: Formula, env: Assignment) -> int:
    result = 1
    for clause in formula:
        result &= eval_clause(clause, env)
    return result


def max_var(formula: Formula) -> int:
    """Return the largest variable index referenced, or -1 for no literals."""
    return max((lit >> 1 for clause in formula for lit in clause), default=-1)


def to_dimacs(formula: Formula, num_vars: int | None = None) -> str:
    """Render ``formula`` as DIMACS CNF text."""
    if num_vars is None:
        num_vars = max_var(formula) + 1
    lines = [f"p cnf {num_vars} {len(formula)}"]
    for clause in formula:
        lines.append(" ".join([*(str(lit_to_dimacs(l)) for l in clause), "0"]))
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> list[list[int]]:
    """Parse DIMACS CNF text back into a list of clauses of literals."""
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "cp%":
            continue
        for tok in line.split():
            d = int(tok)
            if d == 0:
                clauses.append(current)
                current = []
            else:
                current.append(dimacs_to_lit(d))
    if current:
        clauses.append(current)
    return clauses


def clause_vars(clauses: Iterable[Clause]) -> set[int]:
    return {lit >> 1 for clause in clauses for lit in clause}
