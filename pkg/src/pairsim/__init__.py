"""pairsim: exact simulation of qubit-pairing coherence preservation.

Data qubits are paired with ancillas that couple to the same bath modes;
logical states stored in the zero eigenspace of the pair noise-sums factor
out of the system-bath dynamics exactly, for phase damping, amplitude
damping, and anything in between, once a classical drive absorbs the free
qubit Hamiltonian.  This package builds the Hamiltonians, constructs the
subspaces and encoding circuits, evolves the full state exactly, and checks
the zero-decoherence, efficiency, and gate-commutation claims numerically.
"""

from .config import ExperimentConfig, load_config, parse_config, random_logical_state
from .dfs import (
    Circuit,
    DfsSubspace,
    Gate,
    LogicalState,
    build_encode_circuit,
    cluster_efficiency,
    coherence_preserving_subspace,
    decode,
    encode,
    logical_product_state,
    pair_dfs_projector,
    pair_noise_sums,
)
from .errors import (
    BranchAmbiguityWarning,
    ConfigError,
    GateCommutationError,
    HermiticityError,
    InvalidNoiseError,
    LayoutError,
    LeakageError,
    PairsimError,
    UndrivableModelError,
)
from .evolve import (
    EvolutionResult,
    GateExperimentConfig,
    GateExperimentResult,
    Propagator,
    StorageConfig,
    StorageResult,
    evolve_exact,
    fidelity_to_pure,
    offdiag_coherence,
    partial_trace,
    run_gate_experiment,
    run_storage_experiment,
)
from .gates import (
    GateParams,
    check_gate_commutation,
    controlled_gate,
    eigen_to_computational,
    gate_hamiltonian,
    paired_controlled_gate,
    target_rotation,
)
from .model import (
    BathMode,
    BathSpec,
    CoherentInit,
    DriveField,
    NoiseModel,
    ThermalInit,
    VacuumInit,
    bare_hamiltonian,
    bath_state_components,
    drive_field,
    drive_hamiltonian,
    paired_hamiltonian,
    total_hamiltonian,
)
from .qops import (
    HilbertLayout,
    NoiseVector,
    annihilation,
    embed,
    embed_product,
    noise_eigenbasis,
    noise_operator,
    noise_rotation_angle,
    pauli,
)
from .runner import ScenarioOutcome, check_goldens, run_scenario

__version__ = "0.1.0"
