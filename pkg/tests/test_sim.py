"""Statevector and basis-path backends: conventions, exactness, agreement."""

import math

import numpy as np
import pytest
import scipy.linalg as sla

from conftest import bits_for
from gausslaw import sim
from gausslaw.circuit import Circuit
from gausslaw.lattice import GaugeGroup, make_spec
from gausslaw.oracle import build_oracle
from gausslaw.sim import (
    SimulationError,
    StateVector,
    apply,
    basis_index,
    basis_state,
    dump_state,
    expectation_projector,
    index_bits,
    measure,
    project,
    run_basis_path,
    run_basis_path_batch,
    zero_state,
)

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _kron(letters: str) -> np.ndarray:
    m = np.array([[1.0 + 0j]])
    for ch in letters:
        m = np.kron(m, _PAULI[ch])
    return m


class TestApply:
    def test_hadamard_on_zero(self):
        c = Circuit([("q", 1)])
        c.h(("q", 0))
        out = apply(c, zero_state(c)).amplitudes
        assert np.allclose(out, [1 / math.sqrt(2)] * 2)

    def test_cnot_top_wire_is_first_qubit(self):
        # |10> (first qubit = control, set) -> |11>
        c = Circuit([("a", 1), ("b", 1)])
        c.cnot(("a", 0), ("b", 0))
        psi = basis_state(c, (1, 0))
        out = apply(c, psi).amplitudes
        assert abs(out[basis_index((1, 1))] - 1.0) < 1e-14

    def test_phase_exp_zz_on_01(self):
        # eigenvalue of ZZ on |01> is -1, so the phase is exp(+i t)
        t = 0.37
        c = Circuit([("a", 1), ("b", 1)])
        c.phase_exp(t, "ZZ", [0, 1])
        out = apply(c, basis_state(c, (0, 1))).amplitudes
        assert abs(out[basis_index((0, 1))] - np.exp(1j * t)) < 1e-14

    @pytest.mark.parametrize("letters", ["X", "ZZ", "XY", "YZX", "XIZ"])
    def test_phase_exp_matches_matrix_exponential(self, letters):
        m = len(letters)
        t = 0.81
        c = Circuit([("r", m)])
        qubits = [i for i, ch in enumerate(letters) if ch != "I"]
        pauli = "".join(ch for ch in letters if ch != "I")
        c.phase_exp(t, pauli, qubits)
        rng = np.random.default_rng(5)
        amps = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
        amps /= np.linalg.norm(amps)
        got = apply(c, StateVector(amps.copy(), c.registers)).amplitudes
        want = sla.expm(-1j * t * _kron(letters)) @ amps
        assert np.abs(got - want).max() < 1e-12

    def test_norm_preserved_over_many_gates(self):
        rng = np.random.default_rng(0)
        c = Circuit([("r", 5)])
        for _ in range(1000):
            kind = rng.choice(["H", "T", "X", "CNOT", "CZ"])
            q = int(rng.integers(5))
            if kind in ("CNOT", "CZ"):
                p = int((q + 1 + rng.integers(4)) % 5)
                getattr(c, kind.lower())(q, p)
            else:
                getattr(c, kind.lower())(q)
        out = apply(c, zero_state(c))
        assert abs(out.norm_sq() - 1.0) < 1e-10

    def test_register_table_mismatch(self):
        c = Circuit([("a", 2)])
        psi = zero_state(Circuit([("b", 2)]))
        with pytest.raises(SimulationError):
            apply(c, psi)

    def test_measure_gate_rejected(self):
        c = Circuit([("q", 1)])
        c.measure(("q", 0))
        with pytest.raises(SimulationError):
            apply(c, zero_state(c))

    def test_wire_ceiling(self):
        c = Circuit([(f"w{i}", 1) for i in range(27)])
        with pytest.raises(SimulationError):
            zero_state(c)


class TestMeasure:
    def test_deterministic_wire(self):
        c = Circuit([("q", 2)])
        psi = basis_state(c, (1, 0))
        outcome, post = measure(psi, 0, np.random.default_rng(0))
        assert outcome == 1
        assert np.allclose(post.amplitudes, psi.amplitudes)

    def test_uniform_superposition_both_outcomes(self):
        c = Circuit([("q", 1)])
        c.h(("q", 0))
        psi = apply(c, zero_state(c))
        seen = set()
        for seed in range(20):
            outcome, post = measure(psi.copy(), 0, np.random.default_rng(seed))
            seen.add(outcome)
            assert abs(abs(post.amplitudes[outcome]) - 1.0) < 1e-12
        assert seen == {0, 1}

    def test_same_seed_same_transcript(self):
        c = Circuit([("q", 3)])
        for w in range(3):
            c.h(("q", w))
        psi = apply(c, zero_state(c))

        def transcript(seed):
            rng = np.random.default_rng(seed)
            state, outs = psi.copy(), []
            for w in range(3):
                o, state = measure(state, w, rng)
                outs.append(o)
            return outs

        assert transcript(7) == transcript(7)

    def test_project_zero_probability_errors(self):
        c = Circuit([("q", 1)])
        psi = zero_state(c)
        with pytest.raises(SimulationError):
            project(psi, 0, 1)

    def test_projection_renormalizes_exactly(self):
        c = Circuit([("q", 1)])
        theta = 0.3
        amps = np.array([math.cos(theta), math.sin(theta)], dtype=complex)
        psi = StateVector(amps, c.registers)
        post = project(psi, 0, 1)
        assert abs(post.norm_sq() - 1.0) < 1e-14


class TestExpectationProjector:
    def test_tautology_is_normalization(self):
        c = Circuit([("q", 2)])
        c.h(("q", 0))
        psi = apply(c, zero_state(c))
        assert abs(expectation_projector(psi, lambda i: True) - 1.0) < 1e-14

    def test_cos_theta_mixture(self):
        theta = 0.61
        c = Circuit([("q", 1)])
        amps = np.array([math.cos(theta), math.sin(theta)], dtype=complex)
        psi = StateVector(amps, c.registers)
        got = expectation_projector(psi, lambda i: i == 0)
        assert abs(got - math.cos(theta) ** 2) < 1e-12


class TestBasisPath:
    def test_x_on_last_wire(self):
        c = Circuit([("r", 4)])
        c.x(("r", 3))
        out, phase = run_basis_path(c, (0, 0, 0, 0))
        assert out == (0, 0, 0, 1) and phase == 1

    def test_multicz_all_ones(self):
        c = Circuit([("r", 3)])
        c.multicz([0, 1, 2])
        _, phase = run_basis_path(c, (1, 1, 1))
        assert phase == -1
        _, phase = run_basis_path(c, (1, 0, 1))
        assert phase == 1

    def test_nonclassical_gate_rejected(self):
        c = Circuit([("q", 1)])
        c.h(("q", 0))
        with pytest.raises(SimulationError):
            run_basis_path(c, (0,))

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(3)
        c = Circuit([("r", 6)])
        for _ in range(60):
            kind = rng.choice(["X", "CNOT", "TOFFOLI", "CZ", "Z", "MULTICZ"])
            qs = rng.permutation(6)
            if kind == "X" or kind == "Z":
                getattr(c, kind.lower())(int(qs[0]))
            elif kind in ("CNOT", "CZ"):
                getattr(c, kind.lower())(int(qs[0]), int(qs[1]))
            elif kind == "TOFFOLI":
                c.toffoli(int(qs[0]), int(qs[1]), int(qs[2]))
            else:
                c.multicz([int(q) for q in qs[:4]])
        states = np.arange(64, dtype=np.uint64)
        outs, phases = run_basis_path_batch(c, states)
        for k in range(64):
            bits_out, phase = run_basis_path(c, index_bits(k, 6))
            assert basis_index(bits_out) == int(outs[k])
            assert phase == int(phases[k])

    def test_statevector_agrees_on_full_3d_oracle(self):
        # one superposed statevector run covers every basis environment at once
        spec = make_spec(3, 1, GaugeGroup.TRUNCATED_U1, "dirac")
        circ = build_oracle(spec)
        m = circ.n_wires
        k = 10  # environment wires come first
        rng = np.random.default_rng(9)
        amps = np.zeros(1 << m, dtype=complex)
        coeffs = rng.normal(size=1 << k) + 1j * rng.normal(size=1 << k)
        coeffs /= np.linalg.norm(coeffs)
        envs = np.arange(1 << k, dtype=np.uint64) << np.uint64(m - k)
        amps[envs.astype(np.int64)] = coeffs
        psi = StateVector(amps, circ.registers)
        got = apply(circ, psi).amplitudes
        outs, phases = run_basis_path_batch(circ, envs)
        want = np.zeros_like(amps)
        want[outs.astype(np.int64)] = coeffs * phases
        assert np.abs(got - want).max() < 1e-12


class TestDump:
    def test_format_and_threshold(self):
        c = Circuit([("q", 2)])
        amps = np.zeros(4, dtype=complex)
        amps[0] = 1 / math.sqrt(2)
        amps[3] = -1j / math.sqrt(2)
        amps[1] = 1e-16  # below threshold
        text = dump_state(StateVector(amps, c.registers))
        lines = text.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("00 0.707106781186")
        assert lines[1].split()[0] == "11"

    def test_round_trip_precision(self):
        c = Circuit([("q", 1)])
        amps = np.array([math.sqrt(1 / 3), math.sqrt(2 / 3)], dtype=complex)
        line = dump_state(StateVector(amps, c.registers)).splitlines()[0]
        assert float(line.split()[1]) == amps[0].real
