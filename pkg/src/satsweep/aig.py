"""And-inverter graphs.

Node 0 is constant false.  Every other node is a primary input, a register
(treated as a free combinational input) or a two-input AND whose fanins refer
to strictly smaller node ids, so node order is a topological order.  A literal
is ``2 * node + inverted``, the same packing as SAT literals.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

FALSE = 0
TRUE = 1


class NodeKind(enum.IntEnum):
    CONST = 0
    INPUT = 1
    REG = 2
    AND = 3


class AigError(ValueError):
    pass


class AigerParseError(AigError):
    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def node_of(lit: int) -> int:
    return lit >> 1


def is_inverted(lit: int) -> int:
    return lit & 1


def invert(lit: int) -> int:
    return lit ^ 1


class Aig:
    def __init__(self) -> None:
        self.kinds: list[NodeKind] = [NodeKind.CONST]
        self.fanin0: list[int] = [0]
        self.fanin1: list[int] = [0]
        self.inputs: list[int] = []
        self.regs: list[int] = []
        self.next_states: list[int] = []
        self.outputs: list[int] = []
        self.input_names: list[str | None] = []
        self.reg_names: list[str | None] = []
        self.output_names: list[str | None] = []
        self._strash: dict[tuple[int, int], int] = {}
        self._comb_index: dict[int, int] = {}

    # -- sizes -------------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.kinds)

    @property
    def num_ands(self) -> int:
        return len(self.kinds) - 1 - len(self.inputs) - len(self.regs)

    @property
    def num_inputs(self) -> int:
        return len(self.inputs)

    @property
    def num_regs(self) -> int:
        return len(self.regs)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    def and_nodes(self) -> list[int]:
        return [n for n, k in enumerate(self.kinds) if k is NodeKind.AND]

    # -- construction ----------------------------------------------------------

    def _new_node(self, kind: NodeKind, f0: int = 0, f1: int = 0) -> int:
        self.kinds.append(kind)
        self.fanin0.append(f0)
        self.fanin1.append(f1)
        return len(self.kinds) - 1

    def add_input(self, name: str | None = None) -> int:
        node = self._new_node(NodeKind.INPUT)
        self._comb_index[node] = len(self.inputs)
        self.inputs.append(node)
        self.input_names.append(name)
        return 2 * node

    def add_reg(self, name: str | None = None, next_state: int = FALSE) -> int:
        """Add a register; its next-state may be set later with :meth:`set_next_state`."""
        node = self._new_node(NodeKind.REG)
        self._comb_index[node] = len(self.regs)
        self.regs.append(node)
        self.reg_names.append(name)
        self.next_states.append(next_state)
        return 2 * node

    def set_next_state(self, reg_index: int, lit: int) -> None:
        self._check_lit(lit)
        self.next_states[reg_index] = lit

    def add_output(self, lit: int, name: str | None = None) -> int:
        self._check_lit(lit)
        self.outputs.append(lit)
        self.output_names.append(name)
        return len(self.outputs) - 1

    def _check_lit(self, lit: int) -> None:
        if lit < 0 or lit >> 1 >= len(self.kinds):
            raise AigError(f"literal {lit} references a node that does not exist")

    def add_and(self, a: int, b: int, strash: bool = True) -> int:
        """Return a literal for ``a AND b``.

        With ``strash`` the usual folds apply (``x&0=0``, ``x&1=x``,
        ``x&x=x``, ``x&~x=0``) and an existing node with the same fanins is
        reused.  Without it a fresh node is always created.
        """
        self._check_lit(a)
        self._check_lit(b)
        if a > b:
            a, b = b, a
        if not strash:
            node = self._new_node(NodeKind.AND, a, b)
            self._strash.setdefault((a, b), node)
            return 2 * node
        if a == FALSE or a == b ^ 1:
            return FALSE
        if a == TRUE or a == b:
            return b
        node = self._strash.get((a, b))
        if node is None:
            node = self._new_node(NodeKind.AND, a, b)
            self._strash[(a, b)] = node
        return 2 * node

    def add_or(self, a: int, b: int, strash: bool = True) -> int:
        return self.add_and(a ^ 1, b ^ 1, strash) ^ 1

    def add_xor(self, a: int, b: int, strash: bool = True) -> int:
        return self.add_or(self.add_and(a, b ^ 1, strash), self.add_and(a ^ 1, b, strash), strash)

    def add_mux(self, sel: int, then: int, other: int, strash: bool = True) -> int:
        return self.add_or(self.add_and(sel, then, strash), self.add_and(sel ^ 1, other, strash), strash)

    # -- evaluation --------------------------------------------------------

    def _check_env(self, invals: Sequence[int], regvals: Sequence[int]) -> None:
        if len(invals) != len(self.inputs):
            raise AigError(f"expected {len(self.inputs)} input values, got {len(invals)}")
        if len(regvals) != len(self.regs):
            raise AigError(f"expected {len(self.regs)} register values, got {len(regvals)}")

    def evaluate(self, invals: Sequence[int], regvals: Sequence[int] = ()) -> list[int]:
        """Value of every node under one input/register assignment."""
        self._check_env(invals, regvals)
        vals = [0] * len(self.kinds)
        for node, v in zip(self.inputs, invals):
            vals[node] = v & 1
        for node, v in zip(self.regs, regvals):
            vals[node] = v & 1
        f0, f1 = self.fanin0, self.fanin1
        for node, kind in enumerate(self.kinds):
            if kind is NodeKind.AND:
                a, b = f0[node], f1[node]
                vals[node] = (vals[a >> 1] ^ (a & 1)) & (vals[b >> 1] ^ (b & 1))
        return vals

    def lit_eval(self, lit: int, invals: Sequence[int], regvals: Sequence[int] = ()) -> int:
        """Evaluate one literal, visiting only its fanin cone."""
        self._check_env(invals, regvals)
        self._check_lit(lit)
        memo: dict[int, int] = {}
        stack = [lit >> 1]
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            kind = self.kinds[node]
            if kind is NodeKind.CONST:
                memo[node] = 0
            elif kind is NodeKind.INPUT:
                memo[node] = invals[self._comb_index[node]] & 1
            elif kind is NodeKind.REG:
                memo[node] = regvals[self._comb_index[node]] & 1
            else:
                a, b = self.fanin0[node], self.fanin1[node]
                pending = [x >> 1 for x in (a, b) if x >> 1 not in memo]
                if pending:
                    stack.extend(pending)
                    continue
                memo[node] = (memo[a >> 1] ^ (a & 1)) & (memo[b >> 1] ^ (b & 1))
            stack.pop()
        return memo[lit >> 1] ^ (lit & 1)

    def truth_tables(self) -> tuple[list[int], int]:
        """Exhaustive bit-parallel tables over all input and register patterns.

        Pattern ``k`` assigns input ``i`` the bit ``(k >> i) & 1`` and register
        ``j`` the bit ``(k >> (num_inputs + j)) & 1``.  Returns one table per
        node and the all-ones mask.
        """
        n = len(self.inputs) + len(self.regs)
        width = 1 << n
        mask = (1 << width) - 1
        tables = [0] * len(self.kinds)
        for i, node in enumerate(self.inputs + self.regs):
            block = ((1 << (1 << i)) - 1) << (1 << i)  # 2^i ones above 2^i zeros
            period = 1 << (i + 1)
            t = 0
            for start in range(0, width, period):
                t |= block << start
            tables[node] = t
        f0, f1 = self.fanin0, self.fanin1
        for node, kind in enumerate(self.kinds):
            if kind is NodeKind.AND:
                a, b = f0[node], f1[node]
                ta = tables[a >> 1] ^ (mask if a & 1 else 0)
                tb = tables[b >> 1] ^ (mask if b & 1 else 0)
                tables[node] = ta & tb
        return tables, mask

    def lit_table(self, tables: list[int], mask: int, lit: int) -> int:
        return tables[lit >> 1] ^ (mask if lit & 1 else 0)

    # -- transformation ------------------------------------------------------

    def copy(self) -> "Aig":
        g = Aig()
        g.kinds = list(self.kinds)
        g.fanin0 = list(self.fanin0)
        g.fanin1 = list(self.fanin1)
        g.inputs = list(self.inputs)
        g.regs = list(self.regs)
        g.next_states = list(self.next_states)
        g.outputs = list(self.outputs)
        g.input_names = list(self.input_names)
        g.reg_names = list(self.reg_names)
        g.output_names = list(self.output_names)
        g._strash = dict(self._strash)
        g._comb_index = dict(self._comb_index)
        return g

    def cleanup(self) -> tuple["Aig", dict[int, int]]:
        """Drop AND nodes outside the cones of outputs and next-states.

        Returns the compacted graph (inputs and registers kept in order) and a
        map from every surviving old node to its new positive literal.
        """
        live = [False] * len(self.kinds)
        stack = [lit >> 1 for lit in self.outputs + self.next_states]
        while stack:
            node = stack.pop()
            if live[node]:
                continue
            live[node] = True
            if self.kinds[node] is NodeKind.AND:
                stack.append(self.fanin0[node] >> 1)
                stack.append(self.fanin1[node] >> 1)
        g = Aig()
        remap = {0: FALSE}
        for node, kind in enumerate(self.kinds):
            if kind is NodeKind.INPUT:
                remap[node] = g.add_input(self.input_names[self._comb_index[node]])
            elif kind is NodeKind.REG:
                remap[node] = g.add_reg(self.reg_names[self._comb_index[node]])
            elif kind is NodeKind.AND and live[node]:
                a, b = self.fanin0[node], self.fanin1[node]
                remap[node] = g.add_and(remap[a >> 1] ^ (a & 1), remap[b >> 1] ^ (b & 1), strash=False)
        for i, lit in enumerate(self.next_states):
            g.set_next_state(i, remap[lit >> 1] ^ (lit & 1))
        for lit, name in zip(self.outputs, self.output_names):
            g.add_output(remap[lit >> 1] ^ (lit & 1), name)
        return g, remap

    def __repr__(self) -> str:
        return (
            f"Aig(inputs={self.num_inputs}, regs={self.num_regs}, "
            f"ands={self.num_ands}, outputs={self.num_outputs})"
        )


def lit_eval(g: Aig, lit: int, invals: Sequence[int], regvals: Sequence[int] = ()) -> int:
    return g.lit_eval(lit, invals, regvals)


# -- AIGER ASCII -------------------------------------------------------------


def _ints(tokens: Iterable[str], line: int) -> list[int]:
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise AigerParseError("expected unsigned integers", line) from None
    if any(v < 0 for v in values):
        raise AigerParseError("negative number", line)
    return values


def parse_aiger(text: str) -> Aig:
    """Parse ASCII AIGER (``aag``).

    Files in canonical order (inputs, then latches, then ANDs whose fanins
    precede them) keep their variable numbering.  Other acyclic files are
    renumbered topologically.
    """
    lines = text.splitlines()
    if not lines:
        raise AigerParseError("empty file", 1)
    head = lines[0].split()
    if not head or head[0] != "aag":
        raise AigerParseError("header must start with 'aag'", 1)
    if len(head) < 6:
        raise AigerParseError("header needs M I L O A", 1)
    nums = _ints(head[1:], 1)
    m, ni, nl, no, na = nums[:5]
    if any(nums[5:]):
        raise AigerParseError("bad-state, constraint, justice and fairness sections are not supported", 1)
    if ni + nl + na > m:
        raise AigerParseError(f"M={m} is smaller than I+L+A={ni + nl + na}", 1)
    body = ni + nl + no + na
    if len(lines) - 1 < body:
        raise AigerParseError(f"header announces {body} definition lines, file has {len(lines) - 1}", len(lines) + 1)

    def check_lit(lit: int, line: int) -> None:
        if lit >> 1 > m:
            raise AigerParseError(f"literal {lit} exceeds maximum variable {m}", line)

    defined: dict[int, tuple[str, int]] = {}  # var -> (kind, line)
    input_vars: list[int] = []
    latch_defs: list[tuple[int, int, int]] = []
    out_lits: list[tuple[int, int]] = []
    and_defs: dict[int, tuple[int, int, int]] = {}
    and_order: list[int] = []

    def define(var: int, kind: str, line: int) -> None:
        if var == 0:
            raise AigerParseError("cannot redefine the constant", line)
        if var in defined:
            raise AigerParseError(f"variable {var} defined twice (first on line {defined[var][1]})", line)
        defined[var] = (kind, line)

    idx = 1
    for _ in range(ni):
        ln = idx + 1
        vals = _ints(lines[idx].split(), ln)
        if len(vals) != 1 or vals[0] & 1 or vals[0] < 2:
            raise AigerParseError("input line must be one positive even literal", ln)
        check_lit(vals[0], ln)
        define(vals[0] >> 1, "input", ln)
        input_vars.append(vals[0] >> 1)
        idx += 1
    for _ in range(nl):
        ln = idx + 1
        vals = _ints(lines[idx].split(), ln)
        if len(vals) not in (2, 3) or vals[0] & 1 or vals[0] < 2:
            raise AigerParseError("latch line must be: even-literal next [init]", ln)
        check_lit(vals[0], ln)
        check_lit(vals[1], ln)
        define(vals[0] >> 1, "latch", ln)
        latch_defs.append((vals[0] >> 1, vals[1], ln))
        idx += 1
    for _ in range(no):
        ln = idx + 1
        vals = _ints(lines[idx].split(), ln)
        if len(vals) != 1:
            raise AigerParseError("output line must be one literal", ln)
        check_lit(vals[0], ln)
        out_lits.append((vals[0], ln))
        idx += 1
    for _ in range(na):
        ln = idx + 1
        vals = _ints(lines[idx].split(), ln)
        if len(vals) != 3 or vals[0] & 1 or vals[0] < 2:
            raise AigerParseError("AND line must be: even-lhs rhs0 rhs1", ln)
        for v in vals:
            check_lit(v, ln)
        define(vals[0] >> 1, "and", ln)
        and_defs[vals[0] >> 1] = (vals[1], vals[2], ln)
        and_order.append(vals[0] >> 1)
        idx += 1

    in_names: dict[int, str] = {}
    latch_names: dict[int, str] = {}
    out_names: dict[int, str] = {}
    for j in range(idx, len(lines)):
        raw = lines[j]
        if raw.startswith("c"):
            break
        if not raw.strip():
            continue
        kind, _, rest = raw.partition(" ")
        table = {"i": (in_names, ni), "l": (latch_names, nl), "o": (out_names, no)}.get(kind[:1])
        if table is None or not kind[1:].isdigit() or not rest:
            raise AigerParseError(f"malformed symbol table entry {raw!r}", j + 1)
        names, count = table
        pos = int(kind[1:])
        if pos >= count:
            raise AigerParseError(f"symbol position {pos} out of range", j + 1)
        names[pos] = rest

    g = Aig()
    var_lit: dict[int, int] = {0: FALSE}
    for pos, var in enumerate(input_vars):
        var_lit[var] = g.add_input(in_names.get(pos))
    for pos, (var, _nxt, _ln) in enumerate(latch_defs):
        var_lit[var] = g.add_reg(latch_names.get(pos))

    def resolve(lit: int, line: int) -> int:
        var = lit >> 1
        if var not in var_lit:
            if var not in and_defs:
                raise AigerParseError(f"literal {lit} refers to undefined variable {var}", line)
            build(var)
        return var_lit[var] ^ (lit & 1)

    state: dict[int, int] = {}  # 1 = on stack, 2 = done

    def build(root: int) -> None:
        stack = [root]
        while stack:
            var = stack[-1]
            if var in var_lit:
                stack.pop()
                continue
            r0, r1, ln = and_defs[var]
            state[var] = 1
            waiting = False
            for r in (r0, r1):
                rv = r >> 1
                if rv in var_lit:
                    continue
                if rv not in and_defs:
                    raise AigerParseError(f"literal {r} refers to undefined variable {rv}", ln)
                if state.get(rv) == 1:
                    raise AigerParseError(f"cyclic definition through variable {rv}", ln)
                stack.append(rv)
                waiting = True
            if waiting:
                continue
            a = var_lit[r0 >> 1] ^ (r0 & 1)
            b = var_lit[r1 >> 1] ^ (r1 & 1)
            var_lit[var] = g.add_and(a, b, strash=False)
            state[var] = 2
            stack.pop()

    for var in and_order:
        if var not in var_lit:
            build(var)
    for pos, (_var, nxt, ln) in enumerate(latch_defs):
        g.set_next_state(pos, resolve(nxt, ln))
    for pos, (lit, ln) in enumerate(out_lits):
        g.add_output(resolve(lit, ln), out_names.get(pos))
    return g


def write_aiger(g: Aig) -> str:
    """Render ``g`` as canonical ASCII AIGER with a symbol table for named pins."""
    var_of = {0: 0}
    nxt = 1
    for node in g.inputs + g.regs:
        var_of[node] = nxt
        nxt += 1
    ands = g.and_nodes()
    for node in ands:
        var_of[node] = nxt
        nxt += 1

    def conv(lit: int) -> int:
        return 2 * var_of[lit >> 1] + (lit & 1)

    m = nxt - 1
    out = [f"aag {m} {g.num_inputs} {g.num_regs} {g.num_outputs} {len(ands)}"]
    out += [str(2 * var_of[node]) for node in g.inputs]
    out += [f"{2 * var_of[node]} {conv(ns)}" for node, ns in zip(g.regs, g.next_states)]
    out += [str(conv(lit)) for lit in g.outputs]
    for node in ands:
        a, b = conv(g.fanin0[node]), conv(g.fanin1[node])
        if a < b:
            a, b = b, a
        out.append(f"{2 * var_of[node]} {a} {b}")
    for prefix, names in (("i", g.input_names), ("l", g.reg_names), ("o", g.output_names)):
        out += [f"{prefix}{k} {name}" for k, name in enumerate(names) if name]
    return "\n".join(out) + "\n"


def read_aiger(path: str) -> Aig:
    with open(path) as fh:
        return parse_aiger(fh.read())
