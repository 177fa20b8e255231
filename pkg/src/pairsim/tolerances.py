"""Numerical tolerances used by both the runner assertions and the test suite.

Single source of truth: the CLI summary pass/fail verdicts and the acceptance
tests import these constants, so the two can never drift apart.
"""

# Exact linear-algebra identities (Hermiticity, unitarity, assembly identity).
MATRIX_IDENTITY_TOL = 1e-12

# Hermiticity residual above which a matrix is rejected for evolution.
HERMITICITY_TOL = 1e-10

# Commutator-with-noise-sum check in the gate module.
COMMUTATOR_TOL = 1e-10

# Gate Hamiltonian round trip |exp(-iH) - U|.
GATE_LOG_ROUNDTRIP_TOL = 1e-10

# Zero-eigenvalue residual of coherence-preserving basis vectors.
SUBSPACE_RESIDUAL_TOL = 1e-12

# Encode -> decode round-trip infidelity.
ROUNDTRIP_INFIDELITY_TOL = 1e-12

# Weight outside the encoded subspace that counts as genuine leakage when
# decoding (separates float noise from decoherence-induced leakage).
DECODE_LEAKAGE_TOL = 1e-9

# Storage experiment: encoded reduced-state infidelity bound.
STORAGE_INFIDELITY_TOL = 1e-9

# Storage experiment: the bare run must dip below this fidelity to count as
# visibly decohered.
BARE_DECOHERENCE_FIDELITY = 0.99

# Gate experiment: infidelity bound of the reduced state against the ideal
# gate action on the encoded input.
GATE_INFIDELITY_TOL = 1e-8

# Gate experiment: logical action of the paired gate vs the two-qubit gate.
LOGICAL_ACTION_TOL = 1e-10

# Leakage out of the coherence-preserving subspace during evolution.
EVOLUTION_LEAKAGE_TOL = 1e-9

# Stirling approximation of the cluster efficiency at large m.
EFFICIENCY_APPROX_TOL = 1e-3

# Population of a mode's top Fock level above which a run is flagged as
# truncation-limited.
TRUNCATION_GUARD = 1e-4

# Smallest negative value tolerated for probabilities/leakages in outputs.
NEGATIVE_WEIGHT_TOL = -1e-12
