"""Execution backends: dense statevector and classical basis-path simulation.

Index convention: the first register listed holds the most significant bits,
so wire ``w`` of an ``m``-wire circuit is bit ``m-1-w`` of the amplitude
index. A basis state is a tuple of bits per wire, and ``basis_index`` turns it
into the matching amplitude index.

The statevector backend applies each gate as a fixed per-amplitude update with
no cross-amplitude reductions, so results are deterministic and bit-exact.
The basis-path backend handles permutation + diagonal-phase circuits
(X, CNOT, TOFFOLI, CZ, MULTICZ, Z) in O(gates) time, which is what makes
exhaustive constraint checks tractable far beyond statevector sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitError, Gate

MAX_STATEVECTOR_WIRES = 26  # 1 GiB of complex128 amplitudes

BASIS_PATH_KINDS = ("X", "CNOT", "TOFFOLI", "MULTICZ", "CZ", "Z")

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_T_PHASE = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))

BasisState = tuple[int, ...]


class SimulationError(ValueError):
    """Raised for budget violations, width mismatches, or unsupported gates."""


@dataclass
class StateVector:
    """Dense complex amplitudes over the wires of a register table."""

    amplitudes: np.ndarray
    registers: tuple[tuple[str, int], ...]

    @property
    def n_wires(self) -> int:
        return sum(width for _, width in self.registers)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.registers)

    def register_value(self, index: int, register: str) -> int:
        """Integer content of one register within basis label ``index``."""
        m = self.n_wires
        off = 0
        for name, width in self.registers:
            if name == register:
                shift = m - off - width
                return (index >> shift) & ((1 << width) - 1)
            off += width
        raise SimulationError(f"unknown register {register!r}")


def zero_state(c: Circuit) -> StateVector:
    """The all-|0> state over a circuit's registers."""
    if c.n_wires > MAX_STATEVECTOR_WIRES:
        raise SimulationError(
            f"{c.n_wires} wires exceeds the {MAX_STATEVECTOR_WIRES}-wire "
            "statevector ceiling; use the basis-path backend"
        )
    amps = np.zeros(1 << c.n_wires, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, c.registers)


def basis_index(bits: BasisState) -> int:
    """Amplitude index of a bit assignment (wire 0 = most significant)."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | (b & 1)
    return idx


def index_bits(index: int, n_wires: int) -> BasisState:
    return tuple((index >> (n_wires - 1 - w)) & 1 for w in range(n_wires))


def basis_state(c: Circuit, bits: BasisState) -> StateVector:
    if len(bits) != c.n_wires:
        raise SimulationError(
            f"basis state has {len(bits)} bits, circuit has {c.n_wires} wires"
        )
    psi = zero_state(c)
    psi.amplitudes[0] = 0.0
    psi.amplitudes[basis_index(bits)] = 1.0
    return psi


# -- statevector gate application ---------------------------------------------


def _slices(m: int, fixed: dict[int, int]) -> tuple:
    idx: list[object] = [slice(None)] * m
    for wire, bit in fixed.items():
        idx[wire] = bit
    return tuple(idx)


def _apply_pauli_string(arr: np.ndarray, m: int, qubits, letters: str) -> np.ndarray:
    """Return P|psi> for a Pauli tensor string (new array)."""
    out = arr.copy()
    for wire, letter in zip(qubits, letters):
        if letter == "I":
            continue
        s0 = _slices(m, {wire: 0})
        s1 = _slices(m, {wire: 1})
        if letter == "X":
            a0 = out[s0].copy()
            out[s0] = out[s1]
            out[s1] = a0
        elif letter == "Y":
            a0 = out[s0].copy()
            out[s0] = -1j * out[s1]
            out[s1] = 1j * a0
        elif letter == "Z":
            out[s1] = -out[s1]
    return out


def _apply_gate(arr: np.ndarray, m: int, g: Gate) -> np.ndarray:
    kind = g.kind
    if kind == "X":
        (w,) = g.qubits
        s0, s1 = _slices(m, {w: 0}), _slices(m, {w: 1})
        a0 = arr[s0].copy()
        arr[s0] = arr[s1]
        arr[s1] = a0
    elif kind == "Y":
        (w,) = g.qubits
        s0, s1 = _slices(m, {w: 0}), _slices(m, {w: 1})
        a0 = arr[s0].copy()
        arr[s0] = -1j * arr[s1]
        arr[s1] = 1j * a0
    elif kind == "Z":
        (w,) = g.qubits
        arr[_slices(m, {w: 1})] *= -1.0
    elif kind == "H":
        (w,) = g.qubits
        s0, s1 = _slices(m, {w: 0}), _slices(m, {w: 1})
        a0 = arr[s0].copy()
        a1 = arr[s1].copy()
        arr[s0] = (a0 + a1) * _INV_SQRT2
        arr[s1] = (a0 - a1) * _INV_SQRT2
    elif kind == "T":
        (w,) = g.qubits
        arr[_slices(m, {w: 1})] *= _T_PHASE
    elif kind == "TDG":
        (w,) = g.qubits
        arr[_slices(m, {w: 1})] *= _T_PHASE.conjugate()
    elif kind == "CNOT":
        c, t = g.qubits
        s0 = _slices(m, {c: 1, t: 0})
        s1 = _slices(m, {c: 1, t: 1})
        a0 = arr[s0].copy()
        arr[s0] = arr[s1]
        arr[s1] = a0
    elif kind == "TOFFOLI":
        c1, c2, t = g.qubits
        s0 = _slices(m, {c1: 1, c2: 1, t: 0})
        s1 = _slices(m, {c1: 1, c2: 1, t: 1})
        a0 = arr[s0].copy()
        arr[s0] = arr[s1]
        arr[s1] = a0
    elif kind == "CZ":
        a, b = g.qubits
        arr[_slices(m, {a: 1, b: 1})] *= -1.0
    elif kind == "MULTICZ":
        arr[_slices(m, {q: 1 for q in g.qubits})] *= -1.0
    elif kind == "PHASEEXP":
        flat = arr.reshape(-1)
        p = _apply_pauli_string(arr, m, g.qubits, g.pauli).reshape(-1)
        np.multiply(flat, math.cos(g.angle), out=flat)
        flat -= 1j * math.sin(g.angle) * p
    else:
        raise SimulationError(
            f"gate {kind} is not unitary; strip measurements before apply()"
        )
    return arr


def apply(c: Circuit, psi: StateVector) -> StateVector:
    """Apply every gate of ``c`` in order to a copy of ``psi``."""
    if psi.registers != c.registers:
        raise SimulationError(
            f"register tables differ: state {psi.registers} vs circuit {c.registers}"
        )
    m = c.n_wires
    arr = psi.amplitudes.copy().reshape([2] * m)
    for g in c.gates:
        arr = _apply_gate(arr, m, g)
    return StateVector(arr.reshape(-1), psi.registers)


# -- measurement / projection --------------------------------------------------


def measure(psi: StateVector, wire: int, rng: np.random.Generator) -> tuple[int, StateVector]:
    """Born-rule measurement of one wire in the Z basis."""
    norm = psi.norm_sq()
    if abs(norm - 1.0) > 1e-9:
        raise SimulationError(f"state not normalized (norm^2 = {norm})")
    m = psi.n_wires
    arr = psi.amplitudes.reshape([2] * m)
    p1 = float(np.sum(np.abs(arr[_slices(m, {wire: 1})]) ** 2))
    outcome = 1 if rng.random() < p1 else 0
    return outcome, _project(psi, wire, outcome)


def project(psi: StateVector, wire: int, value: int) -> StateVector:
    """Post-select one wire; zero-probability branches are an error."""
    return _project(psi, wire, value)


def _project(psi: StateVector, wire: int, value: int) -> StateVector:
    m = psi.n_wires
    arr = psi.amplitudes.copy().reshape([2] * m)
    kill = _slices(m, {wire: 1 - value})
    keep = _slices(m, {wire: value})
    prob = float(np.sum(np.abs(arr[keep]) ** 2))
    if prob == 0.0:
        raise SimulationError(f"projection onto wire {wire} = {value} has zero probability")
    arr[kill] = 0.0
    arr[keep] /= math.sqrt(prob)
    return StateVector(arr.reshape(-1), psi.registers)


def expectation_projector(psi: StateVector, predicate) -> float:
    """Total probability of basis labels satisfying ``predicate(index)``."""
    norm = psi.norm_sq()
    if abs(norm - 1.0) > 1e-9:
        raise SimulationError(f"state not normalized (norm^2 = {norm})")
    probs = np.abs(psi.amplitudes) ** 2
    return float(sum(p for i, p in enumerate(probs) if predicate(i)))


# -- basis-path backend --------------------------------------------------------


def run_basis_path(c: Circuit, bits: BasisState) -> tuple[BasisState, int]:
    """Propagate one basis state through a permutation + phase circuit.

    Returns the output bit assignment and the accumulated phase (+1 or -1).
    Gates outside X/CNOT/TOFFOLI/CZ/MULTICZ/Z branch into superpositions and
    are rejected.
    """
    if len(bits) != c.n_wires:
        raise SimulationError(
            f"basis state has {len(bits)} bits, circuit has {c.n_wires} wires"
        )
    state = list(bits)
    phase = 1
    for g in c.gates:
        kind = g.kind
        if kind == "X":
            (w,) = g.qubits
            state[w] ^= 1
        elif kind == "CNOT":
            ctl, t = g.qubits
            state[t] ^= state[ctl]
        elif kind == "TOFFOLI":
            c1, c2, t = g.qubits
            state[t] ^= state[c1] & state[c2]
        elif kind == "Z":
            (w,) = g.qubits
            if state[w]:
                phase = -phase
        elif kind == "CZ":
            a, b = g.qubits
            if state[a] & state[b]:
                phase = -phase
        elif kind == "MULTICZ":
            if all(state[q] for q in g.qubits):
                phase = -phase
        else:
            raise SimulationError(
                f"gate {kind} is not basis-path simulable (permutation + phase only)"
            )
    return tuple(state), phase


def run_basis_path_batch(c: Circuit, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized basis-path run over many basis labels at once.

    ``states`` holds amplitude indices (wire w = bit ``n_wires-1-w``). Returns
    the permuted labels and a phase array of +1/-1. Semantics match
    :func:`run_basis_path` entry by entry.
    """
    m = c.n_wires
    out = states.astype(np.uint64, copy=True)
    neg = np.zeros(out.shape, dtype=bool)  # True where phase is -1
    one = np.uint64(1)
    for g in c.gates:
        kind = g.kind
        if kind == "X":
            out ^= one << np.uint64(m - 1 - g.qubits[0])
        elif kind == "CNOT":
            ctl, t = g.qubits
            bit = (out >> np.uint64(m - 1 - ctl)) & one
            out ^= bit << np.uint64(m - 1 - t)
        elif kind == "TOFFOLI":
            c1, c2, t = g.qubits
            bit = (out >> np.uint64(m - 1 - c1)) & (out >> np.uint64(m - 1 - c2)) & one
            out ^= bit << np.uint64(m - 1 - t)
        elif kind == "Z":
            neg ^= ((out >> np.uint64(m - 1 - g.qubits[0])) & one).astype(bool)
        elif kind == "CZ":
            a, b = g.qubits
            bit = (out >> np.uint64(m - 1 - a)) & (out >> np.uint64(m - 1 - b)) & one
            neg ^= bit.astype(bool)
        elif kind == "MULTICZ":
            mask = np.uint64(0)
            for q in g.qubits:
                mask |= one << np.uint64(m - 1 - q)
            neg ^= (out & mask) == mask
        else:
            raise SimulationError(
                f"gate {kind} is not basis-path simulable (permutation + phase only)"
            )
    phases = np.where(neg, -1, 1).astype(np.int8)
    return out, phases


# -- state dumps ---------------------------------------------------------------


def dump_state(psi: StateVector, threshold: float = 1e-14) -> str:
    """One line per nonzero amplitude: ``index(binary) re im``."""
    m = psi.n_wires
    lines = []
    for i, amp in enumerate(psi.amplitudes):
        if abs(amp) > threshold:
            lines.append(f"{i:0{m}b} {amp.real:.17g} {amp.imag:.17g}")
    return "\n".join(lines) + "\n"
