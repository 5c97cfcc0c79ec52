"""Gate-level circuit representation.

A :class:`Circuit` is an ordered gate list over named qubit registers. The
register table fixes the global wire numbering: registers contribute wires in
declaration order, and within a register index 0 is the most significant bit
of the register's integer value. Wire 0 is the "top wire" and maps to the most
significant bit of a basis-state index.

Supported gate kinds::

    X Y Z H T TDG CNOT TOFFOLI CZ MULTICZ PHASEEXP MEASURE

``MULTICZ`` is a controlled-Z with k >= 1 controls and one target (the gate is
symmetric in its wires). ``PHASEEXP(angle, pauli)`` applies
``exp(-i * angle * P)`` for a Pauli string ``P`` over its operand wires.

Toffoli gates may carry a ``pairing`` marker (``"compute"``/``"uncompute"``).
Marked gates behave exactly like Toffolis in every simulator; the marker only
changes how :func:`decompose` expands them: a 4-T relative-phase network is
emitted instead of the 7-T exact one. That expansion is only equivalent to the
original circuit when markers come in mirrored pairs such that the gates in
between restore the three operand wires (the arithmetic builders in this
package guarantee this; the equivalence is covered by tests).

Text serialization is line-based and round-trips bit-exactly: ``qreg`` header
lines followed by one gate per line, qubits written ``name[i]``, MULTICZ
spelled ``CZk``, marked Toffolis spelled ``TOFFOLI+``/``TOFFOLI-``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

GATE_KINDS = (
    "X", "Y", "Z", "H", "T", "TDG",
    "CNOT", "TOFFOLI", "CZ", "MULTICZ", "PHASEEXP", "MEASURE",
)

_ARITY = {
    "X": 1, "Y": 1, "Z": 1, "H": 1, "T": 1, "TDG": 1,
    "CNOT": 2, "TOFFOLI": 3, "CZ": 2, "MEASURE": 1,
}

_SELF_INVERSE = {"X", "Y", "Z", "H", "CNOT", "TOFFOLI", "CZ", "MULTICZ"}

# Basis the decomposition targets; MULTICZ survives only under exclude_multicz.
DECOMPOSED_BASIS = ("X", "Y", "Z", "H", "T", "TDG", "CNOT", "CZ", "MEASURE")


class CircuitError(ValueError):
    """Raised for malformed circuits, gates, or serialized text."""


@dataclass(frozen=True)
class QubitRef:
    """A wire named by register and index within that register."""

    register: str
    index: int


@dataclass(frozen=True)
class Gate:
    """One gate: kind plus resolved global wire indices.

    ``qubits`` ordering: controls first, target last (CNOT, TOFFOLI, MULTICZ).
    ``angle``/``pauli`` are used by PHASEEXP only; ``pairing`` by TOFFOLI only.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0
    pauli: str = ""
    pairing: str | None = None

    def inverse(self) -> "Gate":
        if self.kind == "MEASURE":
            raise CircuitError("Measure gates cannot be inverted")
        if self.kind == "T":
            return replace(self, kind="TDG")
        if self.kind == "TDG":
            return replace(self, kind="T")
        if self.kind == "PHASEEXP":
            return replace(self, angle=-self.angle)
        if self.kind == "TOFFOLI" and self.pairing is not None:
            flip = "uncompute" if self.pairing == "compute" else "compute"
            return replace(self, pairing=flip)
        return self  # self-inverse kinds


def _validate_gate(gate: Gate, n_wires: int) -> None:
    if gate.kind not in GATE_KINDS:
        raise CircuitError(f"unknown gate kind {gate.kind!r}")
    if gate.kind in _ARITY and len(gate.qubits) != _ARITY[gate.kind]:
        raise CircuitError(
            f"{gate.kind} expects {_ARITY[gate.kind]} operand(s), got {len(gate.qubits)}"
        )
    if gate.kind == "MULTICZ" and len(gate.qubits) < 2:
        raise CircuitError("MULTICZ needs at least 1 control and 1 target")
    if gate.kind == "PHASEEXP":
        if len(gate.pauli) != len(gate.qubits) or not gate.qubits:
            raise CircuitError("PHASEEXP pauli string must match its operand count")
        if any(ch not in "IXYZ" for ch in gate.pauli):
            raise CircuitError(f"bad Pauli letters {gate.pauli!r}")
    if gate.pairing is not None and gate.kind != "TOFFOLI":
        raise CircuitError("pairing markers are only valid on TOFFOLI gates")
    if gate.pairing not in (None, "compute", "uncompute"):
        raise CircuitError(f"bad pairing marker {gate.pairing!r}")
    if len(set(gate.qubits)) != len(gate.qubits):
        raise CircuitError(f"gate {gate.kind} touches a wire twice: {gate.qubits}")
    for q in gate.qubits:
        if not 0 <= q < n_wires:
            raise CircuitError(f"wire {q} out of range (circuit has {n_wires})")


class Circuit:
    """Ordered gate list over a fixed table of named registers."""

    def __init__(self, registers: Sequence[tuple[str, int]]):
        names = [name for name, _ in registers]
        if len(set(names)) != len(names):
            raise CircuitError(f"duplicate register names in {names}")
        for name, width in registers:
            if width < 1:
                raise CircuitError(f"register {name!r} must have width >= 1")
        self.registers: tuple[tuple[str, int], ...] = tuple(
            (str(name), int(width)) for name, width in registers
        )
        self._offsets: dict[str, int] = {}
        off = 0
        for name, width in self.registers:
            self._offsets[name] = off
            off += width
        self.n_wires: int = off
        self.gates: list[Gate] = []

    # -- wire addressing ----------------------------------------------------

    def wire(self, register: str, index: int = 0) -> int:
        """Global wire index of ``register[index]``."""
        if register not in self._offsets:
            raise CircuitError(f"unknown register {register!r}")
        width = dict(self.registers)[register]
        if not 0 <= index < width:
            raise CircuitError(f"{register}[{index}] out of range (width {width})")
        return self._offsets[register] + index

    def wires(self, register: str) -> list[int]:
        """All wires of a register, most significant first."""
        width = dict(self.registers)[register]
        return [self.wire(register, i) for i in range(width)]

    def wire_label(self, wire: int) -> str:
        for name, width in self.registers:
            off = self._offsets[name]
            if off <= wire < off + width:
                return f"{name}[{wire - off}]"
        raise CircuitError(f"wire {wire} out of range")

    def resolve(self, ref: int | QubitRef | tuple[str, int]) -> int:
        if isinstance(ref, QubitRef):
            return self.wire(ref.register, ref.index)
        if isinstance(ref, tuple):
            return self.wire(*ref)
        return int(ref)

    # -- construction -------------------------------------------------------

    def add(self, gate: Gate) -> None:
        _validate_gate(gate, self.n_wires)
        self.gates.append(gate)

    def _app(self, kind: str, *refs: int | QubitRef, **kw) -> None:
        self.add(Gate(kind, tuple(self.resolve(r) for r in refs), **kw))

    def x(self, q):            self._app("X", q)
    def y(self, q):            self._app("Y", q)
    def z(self, q):            self._app("Z", q)
    def h(self, q):            self._app("H", q)
    def t(self, q):            self._app("T", q)
    def tdg(self, q):          self._app("TDG", q)
    def cnot(self, c, t):      self._app("CNOT", c, t)
    def cz(self, a, b):        self._app("CZ", a, b)
    def measure(self, q):      self._app("MEASURE", q)

    def toffoli(self, c1, c2, t, pairing: str | None = None):
        self._app("TOFFOLI", c1, c2, t, pairing=pairing)

    def multicz(self, qubits: Iterable[int | QubitRef]):
        self._app("MULTICZ", *qubits)

    def phase_exp(self, angle: float, pauli: str, qubits: Iterable[int | QubitRef]):
        self._app("PHASEEXP", *qubits, angle=float(angle), pauli=pauli)

    # -- comparisons / pretty -----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.registers == other.registers
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        regs = ", ".join(f"{n}:{w}" for n, w in self.registers)
        return f"Circuit({regs}; {len(self.gates)} gates)"

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def has_measure(self) -> bool:
        return any(g.kind == "MEASURE" for g in self.gates)

    def without_measurements(self) -> "Circuit":
        out = Circuit(self.registers)
        out.gates = [g for g in self.gates if g.kind != "MEASURE"]
        return out

    def copy(self) -> "Circuit":
        out = Circuit(self.registers)
        out.gates = list(self.gates)
        return out


# -- composition and inversion ----------------------------------------------


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Concatenate two circuits, merging register tables by name.

    Registers appearing in both must have equal widths; registers unique to
    ``b`` are appended after ``a``'s.
    """
    widths = dict(a.registers)
    merged = list(a.registers)
    for name, width in b.registers:
        if name in widths:
            if widths[name] != width:
                raise CircuitError(
                    f"register {name!r} width conflict: {widths[name]} vs {width}"
                )
        else:
            merged.append((name, width))
            widths[name] = width
    out = Circuit(merged)
    out.gates = list(a.gates)
    for gate in b.gates:
        mapped = tuple(out.wire(*_reg_index(b, q)) for q in gate.qubits)
        out.add(replace(gate, qubits=mapped))
    return out


def _reg_index(c: Circuit, wire: int) -> tuple[str, int]:
    label = c.wire_label(wire)
    name, _, idx = label.partition("[")
    return name, int(idx[:-1])


def inverse(c: Circuit) -> Circuit:
    """Reverse the gate list, inverting each gate (uncompute)."""
    if c.has_measure():
        raise CircuitError("cannot invert a circuit containing Measure gates")
    out = Circuit(c.registers)
    out.gates = [g.inverse() for g in reversed(c.gates)]
    return out


# -- decomposition to the T-counted basis -------------------------------------

# Canonical 7-T Toffoli network (7 T/TDG, 2 H, 6 CNOT).
def _toffoli_7t(c1: int, c2: int, t: int) -> list[Gate]:
    return [
        Gate("H", (t,)),
        Gate("CNOT", (c2, t)),
        Gate("TDG", (t,)),
        Gate("CNOT", (c1, t)),
        Gate("T", (t,)),
        Gate("CNOT", (c2, t)),
        Gate("TDG", (t,)),
        Gate("CNOT", (c1, t)),
        Gate("T", (c2,)),
        Gate("T", (t,)),
        Gate("H", (t,)),
        Gate("CNOT", (c1, c2)),
        Gate("T", (c1,)),
        Gate("TDG", (c2,)),
        Gate("CNOT", (c1, c2)),
    ]


# 4-T relative-phase Toffoli: equals Toffoli times a diagonal phase and is its
# own inverse, so mirrored compute/uncompute placements cancel exactly.
def _toffoli_4t(c1: int, c2: int, t: int) -> list[Gate]:
    return [
        Gate("H", (t,)),
        Gate("T", (t,)),
        Gate("CNOT", (c2, t)),
        Gate("TDG", (t,)),
        Gate("CNOT", (c1, t)),
        Gate("T", (t,)),
        Gate("CNOT", (c2, t)),
        Gate("TDG", (t,)),
        Gate("H", (t,)),
    ]


def decompose(c: Circuit, exclude_multicz: bool = False) -> Circuit:
    """Expand to the {X,Y,Z,H,T,TDG,CNOT,CZ} basis (plus MEASURE).

    Unmarked Toffolis expand to the exact 7-T network; paired Toffolis to the
    4-T relative-phase network. MULTICZ with k controls expands through a
    Toffoli ladder over k-1 clean ancillas (compute, CZ, uncompute), or is
    kept intact when ``exclude_multicz`` is set. PHASEEXP has no exact
    finite expansion in this basis and is rejected.
    """
    ladder_anc = 0
    if not exclude_multicz:
        for g in c.gates:
            if g.kind == "MULTICZ":
                ladder_anc = max(ladder_anc, len(g.qubits) - 2)
    regs = list(c.registers)
    if ladder_anc:
        anc_name = "anc"
        while anc_name in dict(regs):
            anc_name += "_"
        regs.append((anc_name, ladder_anc))
    out = Circuit(regs)
    anc = out.wires(regs[-1][0]) if ladder_anc else []

    for g in c.gates:
        if g.kind == "PHASEEXP":
            raise CircuitError(
                "PHASEEXP has no exact expansion over the T basis; "
                "decompose applies to oracle/arithmetic circuits"
            )
        if g.kind == "TOFFOLI":
            net = _toffoli_7t if g.pairing is None else _toffoli_4t
            for h in net(*g.qubits):
                out.add(h)
        elif g.kind == "MULTICZ" and not exclude_multicz:
            *controls, target = g.qubits
            if len(controls) == 1:
                out.add(Gate("CZ", (controls[0], target)))
                continue
            ladder: list[Gate] = []
            carry = controls[0]
            for i, ctl in enumerate(controls[1:]):
                ladder.append(Gate("TOFFOLI", (carry, ctl, anc[i])))
                carry = anc[i]
            for gate in ladder:
                for h in _toffoli_7t(*gate.qubits):
                    out.add(h)
            out.add(Gate("CZ", (carry, target)))
            for gate in reversed(ladder):
                for h in _toffoli_7t(*gate.qubits):
                    out.add(h)
        else:
            out.add(g)
    return out


# -- resource accounting ------------------------------------------------------


@dataclass
class ResourceReport:
    """Gate counts of the decomposed circuit, plus T tallies.

    ``t_count`` counts T and TDG after full decomposition;
    ``t_count_excluding_multicz`` leaves MULTICZ gates intact first (the
    controlled-Z's-excluded convention). ``ancilla_count`` is the number of
    clean ancilla wires full decomposition adds for MULTICZ ladders.
    """

    gate_counts: dict[str, int] = field(default_factory=dict)
    t_count: int = 0
    t_count_excluding_multicz: int = 0
    ancilla_count: int = 0

    @property
    def cnot_count(self) -> int:
        return self.gate_counts.get("CNOT", 0)


def resources(c: Circuit) -> ResourceReport:
    full = decompose(c, exclude_multicz=False)
    excl = decompose(c, exclude_multicz=True)
    counts: dict[str, int] = {}
    for g in full.gates:
        counts[g.kind] = counts.get(g.kind, 0) + 1
    t_full = counts.get("T", 0) + counts.get("TDG", 0)
    t_excl = sum(1 for g in excl.gates if g.kind in ("T", "TDG"))
    return ResourceReport(
        gate_counts=counts,
        t_count=t_full,
        t_count_excluding_multicz=t_excl,
        ancilla_count=full.n_wires - c.n_wires,
    )


# -- text serialization -------------------------------------------------------


def _format_float(x: float) -> str:
    return repr(float(x))


def to_text(c: Circuit, header_comments: Sequence[str] = ()) -> str:
    """Serialize to the line-based text format (round-trips bit-exactly)."""
    lines = [f"# {comment}" for comment in header_comments]
    for name, width in c.registers:
        lines.append(f"qreg {name} {width}")
    for g in c.gates:
        labels = [c.wire_label(q) for q in g.qubits]
        if g.kind == "MULTICZ":
            lines.append("CZk " + " ".join(labels))
        elif g.kind == "TOFFOLI" and g.pairing is not None:
            mark = "+" if g.pairing == "compute" else "-"
            lines.append(f"TOFFOLI{mark} " + " ".join(labels))
        elif g.kind == "PHASEEXP":
            lines.append(
                f"PHASEEXP {_format_float(g.angle)} {g.pauli} " + " ".join(labels)
            )
        else:
            lines.append(f"{g.kind} " + " ".join(labels))
    return "\n".join(lines) + "\n"


def _parse_qubit(token: str) -> tuple[str, int]:
    name, sep, rest = token.partition("[")
    if not sep or not rest.endswith("]"):
        raise CircuitError(f"bad qubit token {token!r}")
    try:
        idx = int(rest[:-1])
    except ValueError as exc:
        raise CircuitError(f"bad qubit index in {token!r}") from exc
    return name, idx


def from_text(text: str) -> Circuit:
    """Parse the text format; comment (#) and blank lines are skipped."""
    registers: list[tuple[str, int]] = []
    gate_lines: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "qreg":
            if gate_lines:
                raise CircuitError("qreg lines must precede all gates")
            if len(tokens) != 3:
                raise CircuitError(f"bad qreg line: {raw!r}")
            registers.append((tokens[1], int(tokens[2])))
        else:
            gate_lines.append(tokens)
    c = Circuit(registers)
    for tokens in gate_lines:
        head, *args = tokens
        if head == "CZk":
            qubits = [c.wire(*_parse_qubit(tok)) for tok in args]
            c.add(Gate("MULTICZ", tuple(qubits)))
        elif head in ("TOFFOLI+", "TOFFOLI-"):
            qubits = [c.wire(*_parse_qubit(tok)) for tok in args]
            pairing = "compute" if head.endswith("+") else "uncompute"
            c.add(Gate("TOFFOLI", tuple(qubits), pairing=pairing))
        elif head == "PHASEEXP":
            if len(args) < 3:
                raise CircuitError(f"bad PHASEEXP line: {tokens}")
            angle = float(args[0])
            pauli = args[1]
            qubits = [c.wire(*_parse_qubit(tok)) for tok in args[2:]]
            c.add(Gate("PHASEEXP", tuple(qubits), angle=angle, pauli=pauli))
        elif head in GATE_KINDS:
            qubits = [c.wire(*_parse_qubit(tok)) for tok in args]
            c.add(Gate(head, tuple(qubits)))
        else:
            raise CircuitError(f"unknown gate {head!r}")
    return c
