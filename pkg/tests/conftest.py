"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from gausslaw import sim
from gausslaw.circuit import Circuit


def bits_for(circ: Circuit, values: dict[str, int]) -> tuple[int, ...]:
    """Bit assignment for a circuit's wires from register values (rest 0)."""
    bits = [0] * circ.n_wires
    for name, width in circ.registers:
        v = values.get(name, 0)
        assert 0 <= v < (1 << width), (name, v)
        for i in range(width):
            bits[circ.wire(name, i)] = (v >> (width - 1 - i)) & 1
    return tuple(bits)


def reg_value(circ: Circuit, bits, name: str) -> int:
    v = 0
    for i in range(dict(circ.registers)[name]):
        v = (v << 1) | bits[circ.wire(name, i)]
    return v


def unitary_of(circ: Circuit) -> np.ndarray:
    dim = 1 << circ.n_wires
    U = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[k] = 1.0
        U[:, k] = sim.apply(circ, sim.StateVector(amps, circ.registers)).amplitudes
    return U


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return abs(np.vdot(a, b))
