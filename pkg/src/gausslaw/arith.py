"""Reversible arithmetic blocks: comparator, ripple-carry adder, subtractor.

The adder is the one-ancilla-free ripple-carry network built from majority
(MAJ) and unmajority-and-add (UMA) cells. Carry-cell Toffolis are emitted with
compute/uncompute pairing markers so full decomposition costs 8 T gates per
bit position (4 per marked Toffoli) instead of 14.

Register value convention follows the package-wide rule: index 0 of a register
is its most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, CircuitError


@dataclass(frozen=True)
class AdderLayout:
    """Register names for in-place addition; ``h`` is the overflow wire.

    ``h`` must be present exactly when the (n+1)-bit sum is needed (truncated
    U(1) arithmetic); modular arithmetic omits it. The network needs no
    ancilla wires. ``h`` and ``c0`` must be supplied clean: ``h=|0>`` always,
    ``c0`` a Z-basis state.
    """

    x: str = "x"
    y: str = "y"
    c0: str = "c0"
    h: str | None = "h"


def comparator(n: int, x: str = "x", y: str = "y") -> Circuit:
    """Bitwise XOR of register ``x`` into ``y``: |y>|x> -> |y^x>|x>.

    The result is all-zero exactly when x = y.
    """
    if n < 1:
        raise CircuitError("comparator width must be >= 1")
    c = Circuit([(x, n), (y, n)])
    for i in range(n):
        c.cnot((x, i), (y, i))
    return c


def _maj(c: Circuit, carry: int, b: int, a: int) -> None:
    c.cnot(a, b)
    c.cnot(a, carry)
    c.toffoli(carry, b, a, pairing="compute")


def _uma(c: Circuit, carry: int, b: int, a: int) -> None:
    c.toffoli(carry, b, a, pairing="uncompute")
    c.cnot(a, carry)
    c.cnot(carry, b)


def adder(n: int, layout: AdderLayout = AdderLayout()) -> Circuit:
    """Ripple-carry adder: |c0>|x>|y>|0> -> |c0>|x>|(y+x+c0) mod 2^n>|h>.

    With ``layout.h`` set, ``h`` receives the overflow bit of the (n+1)-bit
    sum; without it the sum is simply taken modulo 2^n. The incoming carry is
    the chain seed, so adding it costs nothing extra.
    """
    if n < 1:
        raise CircuitError("adder width must be >= 1")
    regs = [(layout.c0, 1), (layout.x, n), (layout.y, n)]
    if layout.h is not None:
        regs.append((layout.h, 1))
    c = Circuit(regs)
    # LSB is the highest register index; the carry chain starts at c0.
    xs = [c.wire(layout.x, n - 1 - i) for i in range(n)]
    ys = [c.wire(layout.y, n - 1 - i) for i in range(n)]
    carries = [c.wire(layout.c0, 0)] + xs[:-1]
    for i in range(n):
        _maj(c, carries[i], ys[i], xs[i])
    if layout.h is not None:
        c.cnot(xs[-1], (layout.h, 0))
    for i in reversed(range(n)):
        _uma(c, carries[i], ys[i], xs[i])
    return c


def adder_extend(
    n: int, layout: AdderLayout, y_hi: str, h2: str | None = None
) -> Circuit:
    """Add an n-bit x into an (n+1)-bit accumulator spanning (y_hi, y).

    ``y_hi`` names the single wire already holding the accumulator's bit n
    (e.g. the overflow of a previous addition); ``h2``, when given, receives
    the new overflow so the result spans n+2 bits. ``layout.h`` must be None
    (the high bits are handled here, not by the plain overflow slot).
    """
    if n < 1:
        raise CircuitError("adder width must be >= 1")
    if layout.h is not None:
        raise CircuitError("adder_extend manages the high bits itself; set layout.h=None")
    regs = [(layout.c0, 1), (layout.x, n), (layout.y, n), (y_hi, 1)]
    if h2 is not None:
        regs.append((h2, 1))
    c = Circuit(regs)
    xs = [c.wire(layout.x, n - 1 - i) for i in range(n)]
    ys = [c.wire(layout.y, n - 1 - i) for i in range(n)]
    carries = [c.wire(layout.c0, 0)] + xs[:-1]
    for i in range(n):
        _maj(c, carries[i], ys[i], xs[i])
    # xs[-1] holds the carry out of the low n bits; ripple it into y_hi.
    if h2 is not None:
        c.toffoli(xs[-1], (y_hi, 0), (h2, 0))
    c.cnot(xs[-1], (y_hi, 0))
    for i in reversed(range(n)):
        _uma(c, carries[i], ys[i], xs[i])
    return c


def subtractor(n: int, layout: AdderLayout = AdderLayout()) -> Circuit:
    """Ones'-complement subtractor S: result (x - y - c0) replaces (h, y).

    Flips x, runs the adder, flips x back, and flips the result wires except
    the internal overflow bit, realizing a - b = NOT(NOT(a) + b) with the
    overflow left unflipped. With ``h`` the output spans n+1 bits and equals
    (x - y - c0) mod 2^(n+1); without it, mod 2^n. x is preserved; the
    original y is consumed (restored by the inverse circuit).
    """
    if n < 1:
        raise CircuitError("subtractor width must be >= 1")
    c = adder(n, layout)
    out = Circuit(c.registers)
    for i in range(n):
        out.x((layout.x, i))
    out.gates.extend(c.gates)
    for i in range(n):
        out.x((layout.x, i))
    for i in range(n):
        out.x((layout.y, i))
    return out
