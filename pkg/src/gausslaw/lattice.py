"""Lattice geometry, field-label encoding, and the classical Gauss constraint.

Everything here is pure integer arithmetic over immutable inputs; it is the
reference implementation the quantum circuits are checked against.

Field labels are the stored quantum numbers: an n-bit label eps in
[0, 2^n - 1] maps affinely to the electric field value E = eps + E_min. The
site constraint is evaluated in its split form,

    (sum of out-labels + negative-charge occupations)
    - (sum of in-labels + positive-charge occupations),

which equals div(E) - rho because each site has as many in- as out-links, so
the E_min offsets cancel. For the Z_{2^n} group the value is reduced modulo
2^n; for truncated U(1) it is an exact integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class GaugeGroup(Enum):
    TRUNCATED_U1 = "u1"
    Z2N = "z2n"


class LatticeError(ValueError):
    """Raised for out-of-range labels or malformed assignments."""


@dataclass(frozen=True)
class Species:
    """One matter species: unit charge and a single occupation bit."""

    name: str
    charge: int

    def __post_init__(self):
        if self.charge not in (+1, -1):
            raise LatticeError(f"species {self.name!r} must carry unit charge")


@dataclass(frozen=True)
class FermionSpec:
    """The matter content at every site (possibly empty: pure gauge)."""

    species: tuple[Species, ...] = ()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    def charge(self, name: str) -> int:
        for s in self.species:
            if s.name == name:
                return s.charge
        raise LatticeError(f"unknown species {name!r}")


def dirac_species(dimension: int) -> FermionSpec:
    """One Dirac fermion: (nu, p) in 1D/2D, (nu1, nu2, p1, p2) in 3D.

    The nu components carry charge -1, the p components +1.
    """
    if dimension in (1, 2):
        return FermionSpec((Species("nu", -1), Species("p", +1)))
    if dimension == 3:
        return FermionSpec(
            (Species("nu1", -1), Species("nu2", -1), Species("p1", +1), Species("p2", +1))
        )
    raise LatticeError(f"unsupported dimension {dimension}")


PURE_GAUGE = FermionSpec(())


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry plus encoding parameters for a periodic cubic lattice.

    ``extent`` gives the number of sites per axis; links attach to each site
    along +/- each axis, so a site always has 2*dimension links. ``e_min`` is
    the lowest represented field value (default -2^(n-1), a near-symmetric
    truncation window).
    """

    dimension: int
    extent: tuple[int, ...]
    bits_per_link: int
    group: GaugeGroup = GaugeGroup.TRUNCATED_U1
    e_min: int | None = None
    fermions: FermionSpec = PURE_GAUGE

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise LatticeError(f"dimension must be 1, 2, or 3, not {self.dimension}")
        if len(self.extent) != self.dimension or any(L < 1 for L in self.extent):
            raise LatticeError(f"bad extent {self.extent} for dimension {self.dimension}")
        if self.bits_per_link < 1:
            raise LatticeError("bits_per_link must be >= 1")
        if self.e_min is None:
            object.__setattr__(self, "e_min", -(2 ** (self.bits_per_link - 1)))

    @property
    def n_levels(self) -> int:
        return 2 ** self.bits_per_link

    @property
    def e_max(self) -> int:
        return self.e_min + self.n_levels - 1

    @property
    def n_sites(self) -> int:
        out = 1
        for L in self.extent:
            out *= L
        return out


def make_spec(
    dimension: int,
    bits_per_link: int,
    group: GaugeGroup = GaugeGroup.TRUNCATED_U1,
    matter: str = "dirac",
    extent: tuple[int, ...] | None = None,
    e_min: int | None = None,
) -> LatticeSpec:
    """Convenience factory; ``matter`` is ``"dirac"`` or ``"none"``."""
    if matter == "dirac":
        fermions = dirac_species(dimension)
    elif matter == "none":
        fermions = PURE_GAUGE
    else:
        raise LatticeError(f"matter must be 'dirac' or 'none', not {matter!r}")
    if extent is None:
        extent = (2,) * dimension
    return LatticeSpec(dimension, extent, bits_per_link, group, e_min, fermions)


@dataclass(frozen=True)
class SiteEnvironment:
    """The quantum numbers entering one site's constraint.

    ``eps_out[i]`` / ``eps_in[i]`` are the labels of the links leaving /
    entering the site along axis i; ``occ`` holds one occupation bit per
    species, in the order of the spec's species list.
    """

    eps_out: tuple[int, ...]
    eps_in: tuple[int, ...]
    occ: tuple[int, ...] = ()


def _check_label(eps: int, spec: LatticeSpec) -> None:
    if not 0 <= eps < spec.n_levels:
        raise LatticeError(
            f"label {eps} outside [0, {spec.n_levels - 1}] for n={spec.bits_per_link}"
        )


def _check_env(env: SiteEnvironment, spec: LatticeSpec) -> None:
    if len(env.eps_out) != spec.dimension or len(env.eps_in) != spec.dimension:
        raise LatticeError(
            f"environment has {len(env.eps_out)}/{len(env.eps_in)} links, "
            f"expected {spec.dimension} each"
        )
    if len(env.occ) != len(spec.fermions.species):
        raise LatticeError(
            f"environment has {len(env.occ)} occupation bits, "
            f"expected {len(spec.fermions.species)}"
        )
    for eps in (*env.eps_out, *env.eps_in):
        _check_label(eps, spec)
    for bit in env.occ:
        if bit not in (0, 1):
            raise LatticeError(f"occupation bits must be 0 or 1, got {bit}")


def field_label_to_E(eps: int, spec: LatticeSpec) -> int:
    """Map a stored label to its electric field value, E = eps + E_min."""
    _check_label(eps, spec)
    return eps + spec.e_min


def gauss_value(env: SiteEnvironment, spec: LatticeSpec) -> int:
    """The constraint value G_s at a site, in the group's arithmetic.

    Computed in the split form with negative charges absorbed into the
    out-flux and positive charges into the in-flux; reduced mod 2^n for Z2N.
    """
    _check_env(env, spec)
    out_side = sum(env.eps_out)
    in_side = sum(env.eps_in)
    for s, bit in zip(spec.fermions.species, env.occ):
        if s.charge < 0:
            out_side += bit
        else:
            in_side += bit
    g = out_side - in_side
    if spec.group is GaugeGroup.Z2N:
        g %= spec.n_levels
    return g


def physicality(env: SiteEnvironment, spec: LatticeSpec) -> int:
    """Eigenvalue of the site projector: 1 iff the constraint vanishes."""
    return 1 if gauss_value(env, spec) == 0 else 0


# -- full-lattice assignments ---------------------------------------------------


@dataclass
class LatticeAssignment:
    """A complete classical configuration: every link label, every occupation.

    ``links[(site, axis)]`` stores the label of the link leaving ``site`` in
    the +axis direction (axes are 1-based); ``occ[(site, species)]`` the
    occupation bits. Sites are indexed row-major over the extent.
    """

    spec: LatticeSpec
    links: dict[tuple[int, int], int] = field(default_factory=dict)
    occ: dict[tuple[int, str], int] = field(default_factory=dict)

    def site_coords(self, site: int) -> tuple[int, ...]:
        coords = []
        for L in reversed(self.spec.extent):
            coords.append(site % L)
            site //= L
        return tuple(reversed(coords))

    def site_index(self, coords: tuple[int, ...]) -> int:
        idx = 0
        for c, L in zip(coords, self.spec.extent):
            idx = idx * L + (c % L)
        return idx

    def neighbor(self, site: int, axis: int, step: int) -> int:
        coords = list(self.site_coords(site))
        coords[axis - 1] += step
        return self.site_index(tuple(coords))

    def environment(self, site: int) -> SiteEnvironment:
        spec = self.spec
        try:
            eps_out = tuple(self.links[(site, i)] for i in range(1, spec.dimension + 1))
            eps_in = tuple(
                self.links[(self.neighbor(site, i, -1), i)]
                for i in range(1, spec.dimension + 1)
            )
            occ = tuple(self.occ[(site, name)] for name in spec.fermions.names)
        except KeyError as missing:
            raise LatticeError(f"incomplete assignment: missing {missing}") from None
        env = SiteEnvironment(eps_out, eps_in, occ)
        _check_env(env, spec)
        return env


def uniform_assignment(spec: LatticeSpec, eps: int = 0) -> LatticeAssignment:
    """Every link set to the same label, all occupations zero."""
    a = LatticeAssignment(spec)
    for site in range(spec.n_sites):
        for axis in range(1, spec.dimension + 1):
            a.links[(site, axis)] = eps
        for name in spec.fermions.names:
            a.occ[(site, name)] = 0
    return a


def global_physicality(assignment: LatticeAssignment) -> int:
    """1 iff the constraint holds at every site of the lattice."""
    spec = assignment.spec
    for site in range(spec.n_sites):
        if not physicality(assignment.environment(site), spec):
            return 0
    return 1


# -- text serialization ---------------------------------------------------------


def assignment_to_text(a: LatticeAssignment) -> str:
    spec = a.spec
    extents = ",".join(str(L) for L in spec.extent)
    lines = [
        f"lattice D={spec.dimension} L={extents} n={spec.bits_per_link} "
        f"group={spec.group.value} Emin={spec.e_min}"
    ]
    for (site, axis), eps in sorted(a.links.items()):
        lines.append(f"link {site} {axis} {eps}")
    for (site, name), bit in sorted(a.occ.items()):
        lines.append(f"occ {site} {name} {bit}")
    return "\n".join(lines) + "\n"


def assignment_from_text(text: str) -> LatticeAssignment:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("lattice "):
        raise LatticeError("assignment text must start with a 'lattice' header")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    try:
        dimension = int(fields["D"])
        extent = tuple(int(x) for x in fields["L"].split(","))
        bits = int(fields["n"])
        group = GaugeGroup(fields["group"])
        e_min = int(fields["Emin"])
    except (KeyError, ValueError) as exc:
        raise LatticeError(f"bad lattice header: {lines[0]!r}") from exc

    links: dict[tuple[int, int], int] = {}
    occ: dict[tuple[int, str], int] = {}
    species_names: list[str] = []
    for ln in lines[1:]:
        tokens = ln.split()
        if tokens[0] == "link" and len(tokens) == 4:
            links[(int(tokens[1]), int(tokens[2]))] = int(tokens[3])
        elif tokens[0] == "occ" and len(tokens) == 4:
            name = tokens[2]
            occ[(int(tokens[1]), name)] = int(tokens[3])
            if name not in species_names:
                species_names.append(name)
        else:
            raise LatticeError(f"bad assignment line: {ln!r}")

    if species_names:
        fermions = dirac_species(dimension)
        if set(species_names) != set(fermions.names):
            raise LatticeError(
                f"occupation species {sorted(species_names)} do not match the "
                f"one-Dirac-fermion content {sorted(fermions.names)}"
            )
    else:
        fermions = PURE_GAUGE
    spec = LatticeSpec(dimension, extent, bits, group, e_min, fermions)
    a = LatticeAssignment(spec, links, occ)
    for site in range(spec.n_sites):
        a.environment(site)  # raises on anything missing or out of range
    return a
