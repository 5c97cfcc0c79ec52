"""Truncated-link Schwinger chain: Hamiltonian terms, Trotter steps, leakage.

The chain has 2*N_ph staggered sites on a periodic ring; each site carries one
matter wire followed by an n-wire link register, so the wire layout is
(m0, l0, m1, l1, ...). The Hamiltonian is

    H = x * sum_s [ sigma-(s) U(s) sigma+(s+1) + h.c. ]
        + sum_s [ E(s)^2 + (mu/2) (-1)^s Z(s) ],

with E(s) = eps(s) + E_min diagonal on the link register.

Conventions (all in one place, since every sign below follows from them):

* occupation n(s) is the computational label of the matter wire
  (occupied = |1>), sigma- = |0><1|, sigma+ = |1><0|;
* the hopping ladder U steps the link *label* down by one unit,
  U = sum_m |m-1><m| on the n link wires (binary, most significant first);
* the staggered charge is rho(s) = n(s) - (s mod 2), so the site constraint
  G_s = E(s) - E(s-1) - rho(s) commutes with every hopping term, and the
  zero-charge vacuum is the odd-occupied basis state with E = 0 everywhere.

With these choices the n=1 hopping block expands to exactly
(1/4)(XXX + XYY - YYX + YXY) and the n=2 block to the 4 + 8 string family
with coefficients 1/4 and 1/8. Identity strings from E^2 are dropped (a
global energy offset; invisible to commutators and leakage).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from . import sim
from .circuit import Circuit
from .sim import StateVector, expectation_projector

_HALF = 0.5
_FACTORS = {
    "P0": (("I", _HALF), ("Z", _HALF)),
    "P1": (("I", _HALF), ("Z", -_HALF)),
    "sm": (("X", _HALF), ("Y", 0.5j)),
    "sp": (("X", _HALF), ("Y", -0.5j)),
}


class SchwingerError(ValueError):
    """Raised for wire-budget violations and malformed inputs."""


@dataclass(frozen=True)
class PauliTerm:
    """A real coefficient times a tensor string over {I, X, Y, Z}."""

    coefficient: float
    string: str

    def __post_init__(self):
        if self.coefficient == 0.0:
            raise SchwingerError("PauliTerm coefficient must be nonzero")
        if any(ch not in "IXYZ" for ch in self.string):
            raise SchwingerError(f"bad Pauli string {self.string!r}")


@dataclass(frozen=True)
class SchwingerSpec:
    """Couplings and sizes; the staggered-site count is 2 * n_ph."""

    n_ph: int
    bits_per_link: int
    x: float = 1.0
    mu: float = 1.0
    e_min: int | None = None

    def __post_init__(self):
        if self.n_ph < 1 or self.bits_per_link < 1:
            raise SchwingerError("n_ph and bits_per_link must be >= 1")
        if self.e_min is None:
            object.__setattr__(self, "e_min", -(2 ** (self.bits_per_link - 1)))

    @property
    def n_sites(self) -> int:
        return 2 * self.n_ph

    @property
    def n_wires(self) -> int:
        return self.n_sites * (self.bits_per_link + 1)

    def matter_wire(self, s: int) -> int:
        return (s % self.n_sites) * (self.bits_per_link + 1)

    def link_wires(self, s: int) -> list[int]:
        base = (s % self.n_sites) * (self.bits_per_link + 1) + 1
        return list(range(base, base + self.bits_per_link))


def registers(spec: SchwingerSpec) -> list[tuple[str, int]]:
    regs = []
    for s in range(spec.n_sites):
        regs.append((f"m{s}", 1))
        regs.append((f"l{s}", spec.bits_per_link))
    return regs


# -- Pauli expansion of the hopping block ---------------------------------------


def _expand_product(factors: list[str]) -> dict[str, complex]:
    """Multiply out a tensor product of two-term wire factors."""
    out: dict[str, complex] = {}
    choices = [_FACTORS[f] for f in factors]
    for combo in itertools.product(*choices):
        letters = "".join(letter for letter, _ in combo)
        coeff = 1.0 + 0.0j
        for _, c in combo:
            coeff *= c
        out[letters] = out.get(letters, 0.0j) + coeff
    return out


def decompose_hopping(
    spec: SchwingerSpec, s: int = 0, order: str = "interleaved"
) -> list[PauliTerm]:
    """Pauli expansion of sigma-(s) U(s) sigma+(s+1) + h.c. (local strings).

    Strings have length n+2 and act on (site s, link s, site s+1). The
    expansion is done symbolically from the ladder's dyadic projector/raiser
    factors, so dense-matrix reconstructions make an independent check.

    The strings fall into families, one per carry pattern of the label ladder
    (each the expansion of one transition operator plus its conjugate);
    strings within a family always commute. ``order`` fixes the list order:

    * ``"interleaved"`` (default): round-robin across the families. Trotter
      steps in this order show the generic gauge-law-breaking errors.
    * ``"grouped"``: family by family. Each family turns out to be gauge
      invariant on its own, so Trotterization in this order never leaks out
      of the physical subspace even though the families do not commute with
      each other (the Trotter error is nonzero but entirely gauge-safe).
    """
    del s  # the block is identical at every site
    n = spec.bits_per_link
    totals: dict[str, complex] = {}
    for m in range(1, 2 ** n):
        a, b = m - 1, m
        factors = ["sm"]
        for j in range(n):
            abit = (a >> (n - 1 - j)) & 1
            bbit = (b >> (n - 1 - j)) & 1
            factors.append({(0, 0): "P0", (1, 1): "P1", (0, 1): "sm", (1, 0): "sp"}[(abit, bbit)])
        factors.append("sp")
        for letters, coeff in _expand_product(factors).items():
            totals[letters] = totals.get(letters, 0.0j) + coeff
    by_family: dict[tuple[int, ...], list[PauliTerm]] = {}
    for letters in sorted(totals):
        real = 2.0 * totals[letters].real  # adding the Hermitian conjugate
        if abs(real) > 1e-15:
            support = tuple(i for i, ch in enumerate(letters[1:-1]) if ch != "I")
            by_family.setdefault(support, []).append(PauliTerm(real, letters))
    families = [by_family[key] for key in sorted(by_family)]
    if order == "grouped":
        return [t for fam in families for t in fam]
    if order != "interleaved":
        raise SchwingerError(f"unknown hopping order {order!r}")
    out: list[PauliTerm] = []
    depth = 0
    while any(depth < len(fam) for fam in families):
        for fam in families:
            if depth < len(fam):
                out.append(fam[depth])
        depth += 1
    return out


# -- full Hamiltonian ------------------------------------------------------------


def _embed(spec: SchwingerSpec, coeff: float, placed: dict[int, str]) -> PauliTerm:
    letters = ["I"] * spec.n_wires
    for wire, letter in placed.items():
        letters[wire] = letter
    return PauliTerm(coeff, "".join(letters))


def build_hamiltonian(spec: SchwingerSpec, hopping_order: str = "interleaved") -> list[PauliTerm]:
    """All Pauli terms of H, in the order the Trotter step applies them:
    electric (by site), mass (by site), hopping (by site, then string)."""
    if spec.n_wires > sim.MAX_STATEVECTOR_WIRES:
        raise SchwingerError(
            f"{spec.n_wires} wires exceeds the {sim.MAX_STATEVECTOR_WIRES}-wire budget"
        )
    n = spec.bits_per_link
    terms: list[PauliTerm] = []

    # E(s)^2: Z and ZZ pieces on each link register (identity part dropped).
    weights = [2 ** (n - 1 - j) for j in range(n)]
    const = spec.e_min + (2 ** n - 1) / 2.0
    for s in range(spec.n_sites):
        wires = spec.link_wires(s)
        for j in range(n):
            coeff = -const * weights[j]
            if coeff != 0.0:
                terms.append(_embed(spec, coeff, {wires[j]: "Z"}))
        for j in range(n):
            for k in range(j + 1, n):
                coeff = weights[j] * weights[k] / 2.0
                terms.append(_embed(spec, coeff, {wires[j]: "Z", wires[k]: "Z"}))

    # (mu/2) (-1)^s Z on each matter wire.
    for s in range(spec.n_sites):
        coeff = 0.5 * spec.mu * (1 if s % 2 == 0 else -1)
        if coeff != 0.0:
            terms.append(_embed(spec, coeff, {spec.matter_wire(s): "Z"}))

    # x * hopping blocks.
    if spec.x != 0.0:
        local = decompose_hopping(spec, order=hopping_order)
        for s in range(spec.n_sites):
            wires = [spec.matter_wire(s)] + spec.link_wires(s) + [spec.matter_wire(s + 1)]
            for t in local:
                placed = {w: ch for w, ch in zip(wires, t.string) if ch != "I"}
                terms.append(_embed(spec, spec.x * t.coefficient, placed))
    return terms


# -- Trotter steps ---------------------------------------------------------------


def trotter_step(spec: SchwingerSpec, dt: float, ordering: str = "default") -> Circuit:
    """First-order step: the product of exp(-i * dt * coeff * P) rotations.

    ``ordering``: "default" applies terms in build_hamiltonian order with the
    hopping strings family-interleaved; "grouped" keeps each site's hopping
    families contiguous (exactly gauge-safe, see decompose_hopping);
    "reversed" is the default order backwards.
    """
    if ordering in ("default", "reversed"):
        terms = build_hamiltonian(spec)
        if ordering == "reversed":
            terms = list(reversed(terms))
    elif ordering == "grouped":
        terms = build_hamiltonian(spec, hopping_order="grouped")
    else:
        raise SchwingerError(f"unknown ordering {ordering!r}")
    c = Circuit(registers(spec))
    for t in terms:
        qubits = [w for w, ch in enumerate(t.string) if ch != "I"]
        letters = "".join(ch for ch in t.string if ch != "I")
        c.phase_exp(dt * t.coefficient, letters, qubits)
    return c


# -- Gauss law, physical subspace, leakage ---------------------------------------


def gauss_diagonal(spec: SchwingerSpec, s: int) -> np.ndarray:
    """G_s eigenvalue for every basis label: E(s) - E(s-1) - n(s) + (s mod 2)."""
    m = spec.n_wires
    idx = np.arange(1 << m, dtype=np.int64)
    n = spec.bits_per_link

    def link_value(site: int) -> np.ndarray:
        val = np.zeros_like(idx)
        for j, w in enumerate(spec.link_wires(site)):
            val += ((idx >> (m - 1 - w)) & 1) << (n - 1 - j)
        return val + spec.e_min

    occ = (idx >> (m - 1 - spec.matter_wire(s))) & 1
    return link_value(s) - link_value((s - 1) % spec.n_sites) - occ + (s % 2)


def physical_mask(spec: SchwingerSpec) -> np.ndarray:
    """Boolean mask of globally physical basis labels."""
    mask = np.ones(1 << spec.n_wires, dtype=bool)
    for s in range(spec.n_sites):
        mask &= gauss_diagonal(spec, s) == 0
    return mask


def vacuum_state(spec: SchwingerSpec) -> StateVector:
    """The zero-charge vacuum: odd sites occupied, E = 0 on every link."""
    c = Circuit(registers(spec))
    bits = [0] * spec.n_wires
    for s in range(spec.n_sites):
        if s % 2 == 1:
            bits[spec.matter_wire(s)] = 1
        eps0 = -spec.e_min
        for j, w in enumerate(spec.link_wires(s)):
            bits[w] = (eps0 >> (spec.bits_per_link - 1 - j)) & 1
    return sim.basis_state(c, tuple(bits))


def leakage(psi: StateVector, spec: SchwingerSpec, mask: np.ndarray | None = None) -> float:
    """Probability weight outside the globally physical subspace."""
    if mask is None:
        mask = physical_mask(spec)
    return expectation_projector(psi, lambda i: not mask[i])


def leakage_experiment(
    spec: SchwingerSpec,
    dt_list: list[float],
    steps: int,
    initial: StateVector | None = None,
    ordering: str = "default",
) -> list[tuple[float, int, float]]:
    """Evolve by N_t Trotter steps for each dt and record the leakage."""
    if initial is None:
        initial = vacuum_state(spec)
    mask = physical_mask(spec)
    if leakage(initial, spec, mask) > 1e-12:
        raise SchwingerError("initial state must be globally physical")
    rows = []
    for dt in dt_list:
        circ = trotter_step(spec, dt, ordering)
        psi = initial.copy()
        for _ in range(steps):
            psi = sim.apply(circ, psi)
        rows.append((float(dt), int(steps), leakage(psi, spec, mask)))
    return rows


def write_leakage_csv(rows: list[tuple[float, int, float]]) -> str:
    lines = ["dt,steps,leakage"]
    for dt, steps, leak in rows:
        lines.append(f"{dt:.17g},{steps},{leak:.17g}")
    return "\n".join(lines) + "\n"


def fit_loglog_slope(rows: list[tuple[float, int, float]], floor: float = 1e-28) -> float:
    """Least-squares slope of log(leakage) against log(dt)."""
    pts = [(math.log(dt), math.log(leak)) for dt, _, leak in rows if leak > floor]
    if len(pts) < 2:
        raise SchwingerError("not enough points above the noise floor to fit a slope")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


# -- dense/sparse operator builders ----------------------------------------------

_P1 = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def dense_matrix(terms: list[PauliTerm], n_wires: int) -> np.ndarray:
    """Sum of coeff * tensor-string as a dense matrix (small systems only)."""
    dim = 1 << n_wires
    out = np.zeros((dim, dim), dtype=np.complex128)
    for t in terms:
        if len(t.string) != n_wires:
            raise SchwingerError(f"string {t.string!r} does not span {n_wires} wires")
        m = np.array([[1.0 + 0.0j]])
        for ch in t.string:
            m = np.kron(m, _P1[ch])
        out += t.coefficient * m
    return out


def _string_action(t: PauliTerm, m: int):
    """Signed-permutation data of a Pauli string: flip mask and phase(b)."""
    idx = np.arange(1 << m, dtype=np.int64)
    flip = 0
    n_y = 0
    parity = np.zeros(1 << m, dtype=np.int64)
    for w, ch in enumerate(t.string):
        bitpos = m - 1 - w
        if ch in ("X", "Y"):
            flip |= 1 << bitpos
        if ch in ("Y", "Z"):
            parity ^= (idx >> bitpos) & 1
        if ch == "Y":
            n_y += 1
    phase = (1j ** n_y) * np.where(parity == 1, -1.0, 1.0)
    return idx ^ flip, phase


def sparse_matrix(terms: list[PauliTerm], n_wires: int) -> sp.csr_matrix:
    dim = 1 << n_wires
    rows, cols, data = [], [], []
    for t in terms:
        perm, phase = _string_action(t, n_wires)
        rows.append(perm)
        cols.append(np.arange(dim, dtype=np.int64))
        data.append(t.coefficient * phase)
    return sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )


def gauss_commutator_norm(spec: SchwingerSpec, s: int) -> float:
    """Frobenius norm of [G_s, H]; zero means exact dynamics is gauge-safe."""
    h = sparse_matrix(build_hamiltonian(spec), spec.n_wires).tocoo()
    g = gauss_diagonal(spec, s)
    vals = (g[h.row] - g[h.col]) * h.data
    return float(np.sqrt(np.sum(np.abs(vals) ** 2)))


def exact_leakage(spec: SchwingerSpec, t: float, initial: StateVector | None = None) -> float:
    """Leakage of exp(-i H t)|psi0>, computed without Trotterization."""
    if initial is None:
        initial = vacuum_state(spec)
    h = sparse_matrix(build_hamiltonian(spec), spec.n_wires)
    amps = expm_multiply(-1j * t * h, initial.amplitudes)
    psi = StateVector(amps, initial.registers)
    return leakage(psi, spec)
