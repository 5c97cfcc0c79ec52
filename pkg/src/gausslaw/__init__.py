"""Gauss-law constraint oracles for Abelian lattice gauge theories.

Subpackages: ``lattice`` (classical constraint), ``circuit`` (gate IR),
``arith`` (reversible adders), ``oracle`` (constraint-checking circuits),
``sim`` (statevector and basis-path backends), ``schwinger`` (Trotter-leakage
study), ``cli`` (command line).
"""

from .arith import AdderLayout, adder, adder_extend, comparator, subtractor
from .circuit import (
    Circuit,
    CircuitError,
    Gate,
    QubitRef,
    ResourceReport,
    compose,
    decompose,
    from_text,
    inverse,
    resources,
    to_text,
)
from .lattice import (
    FermionSpec,
    GaugeGroup,
    LatticeAssignment,
    LatticeSpec,
    SiteEnvironment,
    Species,
    dirac_species,
    field_label_to_E,
    gauss_value,
    global_physicality,
    make_spec,
    physicality,
)
from .oracle import (
    OracleLayout,
    build_oracle,
    build_query,
    controlled_oracle,
    exhaustive_check,
    measure_physicality,
    oracle_layout,
)
from .schwinger import (
    PauliTerm,
    SchwingerSpec,
    build_hamiltonian,
    decompose_hopping,
    leakage_experiment,
    trotter_step,
)
from .sim import (
    BasisState,
    StateVector,
    apply,
    basis_index,
    basis_state,
    dump_state,
    expectation_projector,
    measure,
    project,
    run_basis_path,
    zero_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
