"""Builders for the Gauss-law oracle query circuits in 1D, 2D, and 3D.

The bare oracle applies the phase (-1)^{F_s} to every computational basis
state and restores all quantum numbers (the arithmetic is uncomputed). The
query wrapper conjugates a controlled version with Hadamards on a query wire
q, so a query maps q -> q XOR F_s on basis-state environments.

Constructions:

* 1D, one Dirac fermion: carry loaded from p, a subtractor produces the
  (n+1)-bit difference out-label - in-label - p, the result is flipped when
  nu = 0 (so the all-ones pattern marks a vanishing constraint for both nu
  values), and a multi-controlled Z fires on all-ones.
* 1D pure gauge: a bitwise comparator, bit flips, controlled Z.
* 2D: two adders total the out-flux (with nu folded into the carry) and the
  in-flux (with p), the two totals are XORed bitwise including overflow bits,
  and the phase fires when the XOR is all zero.
* 3D: as 2D with two adder stages per direction; the carry wires are reset
  and reloaded between stages to fold in the second fermion components.

Z_{2^n} variants simply omit every overflow wire and work modulo 2^n.

Register order puts the environment (links, then occupations) first and work
wires after, with the query wire last; this makes exhaustive enumeration of
environments a contiguous block of basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sim
from .arith import AdderLayout, adder, adder_extend, comparator, subtractor
from .circuit import Circuit, CircuitError, Gate, QubitRef, compose, inverse
from .lattice import (
    GaugeGroup,
    LatticeSpec,
    SiteEnvironment,
    dirac_species,
    physicality,
)


class OracleError(ValueError):
    """Raised for unsupported dimension/matter combinations."""


@dataclass(frozen=True)
class OracleLayout:
    """Wire plan for one site's oracle.

    ``result_refs`` are the wires holding the constraint comparison; the
    phase gate checks them for the all-ones pattern (after flips). Overflow
    registers exist only for truncated U(1). MULTICZ ancillas appear only when
    a circuit is decomposed, never in the logical layout.
    """

    registers: tuple[tuple[str, int], ...]
    link_registers: tuple[str, ...]
    occ_registers: tuple[str, ...]
    carry_registers: tuple[str, ...]
    overflow_registers: tuple[str, ...]
    result_refs: tuple[QubitRef, ...]
    has_query: bool
    bits_per_link: int

    @property
    def env_registers(self) -> tuple[str, ...]:
        return self.link_registers + self.occ_registers

    @property
    def env_bits(self) -> int:
        return self.bits_per_link * len(self.link_registers) + len(self.occ_registers)


def _matter_kind(spec: LatticeSpec) -> str:
    if not spec.fermions.species:
        return "none"
    if spec.fermions == dirac_species(spec.dimension):
        return "dirac"
    raise OracleError(
        "oracle circuits support pure gauge or exactly one Dirac fermion; "
        f"got species {spec.fermions.names}"
    )


def oracle_layout(spec: LatticeSpec, with_query: bool = False) -> OracleLayout:
    if spec.dimension not in (1, 2, 3):
        raise OracleError(f"unsupported dimension {spec.dimension}")
    matter = _matter_kind(spec)
    n = spec.bits_per_link
    u1 = spec.group is GaugeGroup.TRUNCATED_U1

    if spec.dimension == 1:
        links = ("eps_out", "eps_in")
        occ = ("nu", "p") if matter == "dirac" else ()
        if matter == "dirac":
            carries = ("c0",)
            overflows = ("h",) if u1 else ()
        else:
            carries = ()
            overflows = ()
        result_reg = "eps_in"
        result_h = overflows
    elif spec.dimension == 2:
        links = ("eps_x_out", "eps_y_out", "eps_x_in", "eps_y_in")
        occ = ("nu", "p") if matter == "dirac" else ()
        carries = ("c0_out", "c0_in")
        overflows = ("h_out", "h_in") if u1 else ()
        result_reg = "eps_x_in"
        result_h = ("h_in",) if u1 else ()
    else:
        links = (
            "eps1_out", "eps2_out", "eps3_out",
            "eps1_in", "eps2_in", "eps3_in",
        )
        occ = ("nu1", "nu2", "p1", "p2") if matter == "dirac" else ()
        carries = ("c0_out", "c0_in")
        overflows = ("h1_out", "h2_out", "h1_in", "h2_in") if u1 else ()
        result_reg = "eps1_in"
        result_h = ("h2_in", "h1_in") if u1 else ()

    registers = [(name, n) for name in links]
    registers += [(name, 1) for name in occ]
    registers += [(name, 1) for name in carries]
    registers += [(name, 1) for name in overflows]
    if with_query:
        registers.append(("q", 1))

    result = tuple(QubitRef(name, 0) for name in result_h) + tuple(
        QubitRef(result_reg, i) for i in range(n)
    )
    return OracleLayout(
        registers=tuple(registers),
        link_registers=links,
        occ_registers=occ,
        carry_registers=carries,
        overflow_registers=overflows,
        result_refs=result,
        has_query=with_query,
        bits_per_link=n,
    )


# -- forward arithmetic ---------------------------------------------------------


def _forward_arithmetic(spec: LatticeSpec, base: Circuit) -> Circuit:
    matter = _matter_kind(spec)
    n = spec.bits_per_link
    u1 = spec.group is GaugeGroup.TRUNCATED_U1
    c = base

    if spec.dimension == 1:
        if matter == "none":
            return compose(c, comparator(n, x="eps_out", y="eps_in"))
        c.cnot(("p", 0), ("c0", 0))
        layout = AdderLayout(x="eps_out", y="eps_in", c0="c0", h="h" if u1 else None)
        return compose(c, subtractor(n, layout))

    if spec.dimension == 2:
        if matter == "dirac":
            c.cnot(("nu", 0), ("c0_out", 0))
            c.cnot(("p", 0), ("c0_in", 0))
        out_layout = AdderLayout(
            x="eps_y_out", y="eps_x_out", c0="c0_out", h="h_out" if u1 else None
        )
        in_layout = AdderLayout(
            x="eps_y_in", y="eps_x_in", c0="c0_in", h="h_in" if u1 else None
        )
        c = compose(c, adder(n, out_layout))
        c = compose(c, adder(n, in_layout))
        for i in range(n):
            c.cnot(("eps_x_out", i), ("eps_x_in", i))
        if u1:
            c.cnot(("h_out", 0), ("h_in", 0))
        return c

    # 3D: two adder stages per direction, reusing the carry wires.
    if matter == "dirac":
        c.cnot(("nu1", 0), ("c0_out", 0))
        c.cnot(("p1", 0), ("c0_in", 0))
    stage1_out = AdderLayout(
        x="eps2_out", y="eps1_out", c0="c0_out", h="h1_out" if u1 else None
    )
    stage1_in = AdderLayout(
        x="eps2_in", y="eps1_in", c0="c0_in", h="h1_in" if u1 else None
    )
    c = compose(c, adder(n, stage1_out))
    c = compose(c, adder(n, stage1_in))
    if matter == "dirac":
        c.cnot(("nu1", 0), ("c0_out", 0))  # reset the carry ...
        c.cnot(("nu2", 0), ("c0_out", 0))  # ... and reuse it
        c.cnot(("p1", 0), ("c0_in", 0))
        c.cnot(("p2", 0), ("c0_in", 0))
    if u1:
        c = compose(
            c,
            adder_extend(n, AdderLayout(x="eps3_out", y="eps1_out", c0="c0_out", h=None),
                         y_hi="h1_out", h2="h2_out"),
        )
        c = compose(
            c,
            adder_extend(n, AdderLayout(x="eps3_in", y="eps1_in", c0="c0_in", h=None),
                         y_hi="h1_in", h2="h2_in"),
        )
    else:
        c = compose(c, adder(n, AdderLayout(x="eps3_out", y="eps1_out", c0="c0_out", h=None)))
        c = compose(c, adder(n, AdderLayout(x="eps3_in", y="eps1_in", c0="c0_in", h=None)))
    for i in range(n):
        c.cnot(("eps1_out", i), ("eps1_in", i))
    if u1:
        c.cnot(("h1_out", 0), ("h1_in", 0))
        c.cnot(("h2_out", 0), ("h2_in", 0))
    return c


def _flip_block(spec: LatticeSpec, c: Circuit, layout: OracleLayout) -> None:
    """Flip the result wires so all-ones encodes a vanishing constraint.

    In 1D with matter the flip is conditioned on nu = 0 (realized with an
    X-conjugated control); everywhere else it is unconditional.
    """
    matter = _matter_kind(spec)
    if spec.dimension == 1 and matter == "dirac":
        c.x(("nu", 0))
        for ref in layout.result_refs:
            c.cnot(("nu", 0), ref)
        c.x(("nu", 0))
    else:
        for ref in layout.result_refs:
            c.x(ref)


def _phase_gate(c: Circuit, wires: list[int]) -> None:
    if len(wires) == 1:
        c.z(wires[0])
    elif len(wires) == 2:
        c.cz(wires[0], wires[1])
    else:
        c.multicz(wires)


def _build(spec: LatticeSpec, with_query: bool) -> Circuit:
    layout = oracle_layout(spec, with_query)
    fwd = _forward_arithmetic(spec, Circuit(layout.registers))
    c = fwd.copy()
    _flip_block(spec, c, layout)
    phase_wires = [c.wire(ref.register, ref.index) for ref in layout.result_refs]
    if with_query:
        phase_wires.append(c.wire("q", 0))
    _phase_gate(c, phase_wires)
    _flip_block(spec, c, layout)
    return compose(c, inverse(fwd))


def build_oracle(spec: LatticeSpec, site: int = 0) -> Circuit:
    """The bare oracle: phase (-1)^{F_s} on basis states, everything restored.

    The circuit is identical for every site of a uniform periodic lattice;
    ``site`` only selects which site's environment the registers refer to.
    """
    del site
    return _build(spec, with_query=False)


def controlled_oracle(spec: LatticeSpec, site: int = 0) -> Circuit:
    """Oracle with the query wire q joined to the phase gate's controls.

    A pure permutation + phase circuit (basis-path simulable): with q = 1 the
    accumulated phase is (-1)^{F_s}, with q = 0 it is +1.
    """
    del site
    return _build(spec, with_query=True)


def build_query(spec: LatticeSpec, site: int = 0) -> Circuit:
    """The full query: H on q, controlled oracle, H on q, measure q.

    On a basis-state environment the unitary part maps q -> q XOR F_s and
    restores every other wire. Work wires (carries, overflows) must enter
    as |0>.
    """
    inner = controlled_oracle(spec, site)
    c = Circuit(inner.registers)
    c.h(("q", 0))
    c.gates.extend(inner.gates)
    c.h(("q", 0))
    c.measure(("q", 0))
    return c


# -- running queries --------------------------------------------------------------


def environment_bits(spec: LatticeSpec, env: SiteEnvironment) -> tuple[int, ...]:
    """Environment wires' bit assignment, in layout register order."""
    layout = oracle_layout(spec)
    n = spec.bits_per_link
    values = list(env.eps_out) + list(env.eps_in)
    bits: list[int] = []
    for v in values:
        bits.extend((v >> (n - 1 - i)) & 1 for i in range(n))
    bits.extend(env.occ)
    del layout
    return tuple(bits)


def environment_from_index(spec: LatticeSpec, e: int) -> SiteEnvironment:
    """Inverse of the exhaustive enumeration's env-integer encoding."""
    layout = oracle_layout(spec)
    n = spec.bits_per_link
    pos = layout.env_bits
    labels: list[int] = []
    for _ in layout.link_registers:
        pos -= n
        labels.append((e >> pos) & ((1 << n) - 1))
    occ: list[int] = []
    for _ in layout.occ_registers:
        pos -= 1
        occ.append((e >> pos) & 1)
    d = spec.dimension
    return SiteEnvironment(tuple(labels[:d]), tuple(labels[d:]), tuple(occ))


def query_verdict(circ: Circuit, env_bits_tuple: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Outcome of one query on a basis environment, by basis-path simulation.

    ``circ`` must be a controlled oracle. Runs the q = 1 branch; the phase
    records F_s, which is exactly the query-bit flip after the Hadamard
    sandwich. Returns (verdict, restored environment bits).
    """
    bits = (*env_bits_tuple, *(0,) * (circ.n_wires - len(env_bits_tuple) - 1), 1)
    out, phase = sim.run_basis_path(circ, bits)
    env_out = out[: len(env_bits_tuple)]
    return (1 if phase == -1 else 0), env_out


@dataclass
class ExhaustiveReport:
    total: int
    correct: int
    all_restored: bool
    mismatches: list[int]

    @property
    def all_correct(self) -> bool:
        return self.correct == self.total and self.all_restored


def exhaustive_check(spec: LatticeSpec) -> ExhaustiveReport:
    """Compare the circuit verdict against the classical constraint on every
    basis environment, checking restoration of all wires as well."""
    layout = oracle_layout(spec, with_query=True)
    circ = controlled_oracle(spec)
    m = circ.n_wires
    k = layout.env_bits
    count = 1 << k
    envs = np.arange(count, dtype=np.uint64)
    states = (envs << np.uint64(m - k)) | np.uint64(1)  # q is the last wire
    outs, phases = sim.run_basis_path_batch(circ, states)
    expected = np.fromiter(
        (physicality(environment_from_index(spec, int(e)), spec) for e in range(count)),
        dtype=np.int8,
        count=count,
    )
    verdicts = (phases == -1).astype(np.int8)
    matches = verdicts == expected
    mismatches = [int(e) for e in np.nonzero(~matches)[0][:16]]
    return ExhaustiveReport(
        total=count,
        correct=int(matches.sum()),
        all_restored=bool((outs == states).all()),
        mismatches=mismatches,
    )


def measure_physicality(
    state: sim.StateVector,
    spec: LatticeSpec,
    site: int = 0,
    rng: np.random.Generator | None = None,
) -> tuple[int, sim.StateVector]:
    """Run one query and measure q: projectively splits physical/unphysical.

    ``state`` must span the query circuit's registers with q and all work
    wires in |0>. Returns (outcome, post-state); outcome 1 means q flipped,
    i.e. the physical branch, with probability ||F_s psi||^2. The post-state
    has q reset to |0>.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    circ = build_query(spec, site).without_measurements()
    q_wire = circ.wire("q", 0)
    evolved = sim.apply(circ, state)
    outcome, post = sim.measure(evolved, q_wire, rng)
    if outcome == 1:
        reset = Circuit(circ.registers)
        reset.x(("q", 0))
        post = sim.apply(reset, post)
    return outcome, post
