import numpy as np
import pytest
from hypothesis import strategies as st

from pairsim.qops import NoiseVector


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def bounded_floats(lo=-3.0, hi=3.0):
    return st.floats(min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False)


def noise_vectors(min_magnitude=0.1):
    """Finite noise triples bounded away from the zero vector."""
    triples = st.tuples(bounded_floats(), bounded_floats(), bounded_floats())
    return triples.filter(
        lambda t: t[0] * t[0] + t[1] * t[1] + t[2] * t[2] >= min_magnitude**2
    ).map(lambda t: NoiseVector(*t))


def random_noise_vector(rng, min_magnitude=0.1):
    while True:
        triple = rng.uniform(-1.5, 1.5, size=3)
        if np.linalg.norm(triple) >= min_magnitude:
            return NoiseVector(*triple)


def random_logical(rng, qubits):
    from pairsim.dfs import LogicalState

    amps = rng.normal(size=2**qubits) + 1j * rng.normal(size=2**qubits)
    return LogicalState(amps / np.linalg.norm(amps))
