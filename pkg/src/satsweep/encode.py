"""On-demand Tseitin encoding of AIG fanin cones into a :class:`Session`.

Only nodes get SAT variables; an inverted AIG literal is the complemented SAT
literal of its node.  For every encoded AND node ``o = a & b`` the clauses
``(~o | a)``, ``(~o | b)`` and ``(o | ~a | ~b)`` are finalized into the session,
so any evaluation of the graph, copied onto the mapped variables, satisfies the
session's formula.
"""

from __future__ import annotations

from typing import Sequence

from .aig import Aig, NodeKind
from .lits import Lit
from .session import Session


class UnmappedVariable(KeyError):
    pass


class SatLitMap:
    """Bidirectional node <-> SAT variable map."""

    def __init__(self) -> None:
        self._var_of_node: dict[int, int] = {}
        self._node_of_var: list[int] = []

    def __len__(self) -> int:
        return len(self._node_of_var)

    @property
    def num_vars(self) -> int:
        return len(self._node_of_var)

    def __contains__(self, aig_lit: int) -> bool:
        return aig_lit >> 1 in self._var_of_node

    def aig_to_sat(self, aig_lit: int) -> Lit | None:
        """SAT literal of an AIG literal, or None when its node is not encoded."""
        var = self._var_of_node.get(aig_lit >> 1)
        if var is None:
            return None
        return 2 * var | (aig_lit & 1)

    def sat_var_to_aig_lit(self, var: int) -> int:
        if not 0 <= var < len(self._node_of_var):
            raise UnmappedVariable(var)
        return 2 * self._node_of_var[var]

    def _allocate(self, node: int) -> int:
        var = len(self._node_of_var)
        self._node_of_var.append(node)
        self._var_of_node[node] = var
        return var

    def items(self):
        """(variable, positive AIG literal) pairs in variable order."""
        return ((v, 2 * n) for v, n in enumerate(self._node_of_var))


def sat_var_to_aignet_lit(var: int, m: SatLitMap) -> int:
    return m.sat_var_to_aig_lit(var)


def ensure_encoded(g: Aig, lit: int, m: SatLitMap, s: Session) -> Lit:
    """Encode the fanin cone of ``lit`` (if needed) and return its SAT literal."""
    found = m.aig_to_sat(lit)
    if found is not None:
        return found

    # Collect the unencoded part of the cone; ids are topological.
    todo: set[int] = set()
    stack = [lit >> 1]
    while stack:
        node = stack.pop()
        if node in todo or (2 * node) in m:
            continue
        todo.add(node)
        if g.kinds[node] is NodeKind.AND:
            stack.append(g.fanin0[node] >> 1)
            stack.append(g.fanin1[node] >> 1)

    for node in sorted(todo):
        o = 2 * m._allocate(node)
        kind = g.kinds[node]
        if kind is NodeKind.CONST:
            s.add_clause([o ^ 1])
        elif kind is NodeKind.AND:
            a = m.aig_to_sat(g.fanin0[node])
            b = m.aig_to_sat(g.fanin1[node])
            assert a is not None and b is not None
            s.add_clause([o ^ 1, a])
            s.add_clause([o ^ 1, b])
            s.add_clause([o, a ^ 1, b ^ 1])
    result = m.aig_to_sat(lit)
    assert result is not None
    return result


def aignet_to_cnf_vals(
    g: Aig, invals: Sequence[int], regvals: Sequence[int], m: SatLitMap
) -> dict[int, int]:
    """Assign each mapped variable the value of its AIG node under (invals, regvals)."""
    if not len(m):
        return {}
    vals = g.evaluate(invals, regvals)
    return {var: vals[aig_lit >> 1] for var, aig_lit in m.items()}
