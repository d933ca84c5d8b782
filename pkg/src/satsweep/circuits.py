"""Small benchmark circuits and a random graph generator."""

from __future__ import annotations

import random

from .aig import FALSE, TRUE, Aig


def _inputs(g: Aig, prefix: str, n: int) -> list[int]:
    return [g.add_input(f"{prefix}{i}") for i in range(n)]


def ripple_adder(n: int) -> Aig:
    g = Aig()
    a, b = _inputs(g, "a", n), _inputs(g, "b", n)
    carry = FALSE
    for i in range(n):
        t = g.add_xor(a[i], b[i])
        g.add_output(g.add_xor(t, carry), f"s{i}")
        carry = g.add_or(g.add_and(a[i], b[i]), g.add_and(t, carry))
    g.add_output(carry, f"s{n}")
    return g


def lookahead_adder(n: int) -> Aig:
    """Same function as :func:`ripple_adder`, with flattened carry terms."""
    g = Aig()
    a, b = _inputs(g, "a", n), _inputs(g, "b", n)
    gen = [g.add_and(a[i], b[i]) for i in range(n)]
    prop = [g.add_or(a[i], b[i]) for i in range(n)]
    carries = [FALSE]
    for i in range(n):
        # c[i+1] = OR_j (g[j] AND p[j+1..i])
        c = FALSE
        for j in range(i + 1):
            term = gen[j]
            for k in range(j + 1, i + 1):
                term = g.add_and(term, prop[k])
            c = g.add_or(c, term)
        carries.append(c)
    for i in range(n):
        half = g.add_and(prop[i], gen[i] ^ 1)  # a xor b
        g.add_output(g.add_xor(half, carries[i]), f"s{i}")
    g.add_output(carries[n], f"s{n}")
    return g


def array_multiplier(n: int, swap: bool = False) -> Aig:
    """Unsigned n x n multiplier; ``swap`` multiplies b*a to change the structure."""
    g = Aig()
    a, b = _inputs(g, "a", n), _inputs(g, "b", n)
    if swap:
        a, b = b, a
    acc = [FALSE] * (2 * n)
    for j in range(n):
        carry = FALSE
        for i in range(n):
            pp = g.add_and(a[i], b[j])
            x = acc[i + j]
            t = g.add_xor(x, pp)
            acc[i + j] = g.add_xor(t, carry)
            carry = g.add_or(g.add_and(x, pp), g.add_and(t, carry))
        k = j + n
        while carry != FALSE and k < 2 * n:
            t = g.add_xor(acc[k], carry)
            carry = g.add_and(acc[k], carry)
            acc[k] = t
            k += 1
    for k, lit in enumerate(acc):
        g.add_output(lit, f"p{k}")
    return g


def comparator(n: int) -> Aig:
    """a < b, a == b over n-bit unsigned operands."""
    g = Aig()
    a, b = _inputs(g, "a", n), _inputs(g, "b", n)
    less, equal = FALSE, TRUE
    for i in reversed(range(n)):
        bit_less = g.add_and(a[i] ^ 1, b[i])
        less = g.add_or(less, g.add_and(equal, bit_less))
        equal = g.add_and(equal, g.add_xor(a[i], b[i]) ^ 1)
    g.add_output(less, "lt")
    g.add_output(equal, "eq")
    return g


def parity(n: int, balanced: bool = False) -> Aig:
    g = Aig()
    xs = _inputs(g, "x", n)
    if balanced:
        while len(xs) > 1:
            xs = [g.add_xor(xs[i], xs[i + 1]) if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
        out = xs[0]
    else:
        out = FALSE
        for x in xs:
            out = g.add_xor(out, x)
    g.add_output(out, "parity")
    return g


def mux_tree(sel_bits: int) -> Aig:
    g = Aig()
    sel = _inputs(g, "s", sel_bits)
    data = _inputs(g, "d", 1 << sel_bits)
    layer = data
    for s in sel:
        layer = [g.add_mux(s, layer[i + 1], layer[i]) for i in range(0, len(layer), 2)]
    g.add_output(layer[0], "y")
    return g


def counter(n: int) -> Aig:
    """n-bit enabled counter; registers hold the count."""
    g = Aig()
    en = g.add_input("en")
    regs = [g.add_reg(f"q{i}") for i in range(n)]
    carry = en
    for i, q in enumerate(regs):
        g.set_next_state(i, g.add_xor(q, carry))
        carry = g.add_and(q, carry)
    g.add_output(carry, "wrap")
    return g


def random_aig(
    rng: random.Random,
    max_inputs: int = 10,
    max_ands: int = 60,
    max_regs: int = 2,
    max_outputs: int = 4,
    redundancy: float = 0.3,
) -> Aig:
    """Random unhashed graph with injected redundancy.

    Besides random ANDs, some nodes re-derive an existing node's function:
    verbatim duplicates, swapped fanins, a repeated conjunct
    ``(a & b) & a`` or absorption ``a & (a | y)``.
    """
    g = Aig()
    for i in range(rng.randint(1, max_inputs)):
        g.add_input(f"i{i}")
    for i in range(rng.randint(0, max_regs)):
        g.add_reg(f"r{i}")
    n_ands = rng.randint(1, max_ands)

    def pick() -> int:
        # Bias towards recent nodes for deeper graphs.
        n = g.num_nodes
        node = n - 1 - int(min(rng.expovariate(1 / max(1.0, n / 3)), n - 1))
        return 2 * node | rng.getrandbits(1)

    while g.num_ands < n_ands:
        ands = g.and_nodes()
        room = n_ands - g.num_ands
        if ands and rng.random() < redundancy:
            node = rng.choice(ands)
            a, b = g.fanin0[node], g.fanin1[node]
            trick = rng.randrange(5)
            if trick == 0:
                g.add_and(a, b, strash=False)
            elif trick == 1:
                g.add_and(b, a, strash=False)
            elif trick == 2 and room >= 2:
                t = g.add_and(a, b, strash=False)
                g.add_and(t, a, strash=False)  # (a & b) & a == a & b
            elif trick == 3 and room >= 2:
                y = pick()
                t = g.add_and(a ^ 1, y ^ 1, strash=False)  # ~(a | y)
                g.add_and(a, t ^ 1, strash=False)  # a & (a | y) == a
            else:
                g.add_and(a, pick(), strash=False)
        else:
            g.add_and(pick(), pick(), strash=False)
    for _ in range(rng.randint(1, max_outputs)):
        g.add_output(pick())
    for i in range(g.num_regs):
        g.set_next_state(i, pick())
    return g


CORPUS = {
    "and2": lambda: _gate("and"),
    "or2": lambda: _gate("or"),
    "xor2": lambda: _gate("xor"),
    "adder4_ripple": lambda: ripple_adder(4),
    "adder4_lookahead": lambda: lookahead_adder(4),
    "mult3": lambda: array_multiplier(3),
    "mult4": lambda: array_multiplier(4),
    "mult4_swapped": lambda: array_multiplier(4, swap=True),
    "cmp4": lambda: comparator(4),
    "parity8_chain": lambda: parity(8),
    "parity8_tree": lambda: parity(8, balanced=True),
    "mux8": lambda: mux_tree(3),
    "counter4": lambda: counter(4),
}


def _gate(kind: str) -> Aig:
    g = Aig()
    x, y = g.add_input("x"), g.add_input("y")
    out = {"and": g.add_and, "or": g.add_or, "xor": g.add_xor}[kind](x, y)
    g.add_output(out, "z")
    return g
