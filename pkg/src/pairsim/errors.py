"""Exception types shared across the package."""


class PairsimError(Exception):
    """Base class for all package-specific errors."""


class InvalidNoiseError(PairsimError, ValueError):
    """Noise vector is zero, non-finite, or otherwise unusable."""


class UndrivableModelError(PairsimError, ValueError):
    """The drive ratio condition g1:g2:omega0 = l1:l2:l3 has no solution.

    Raised for models with lambda3 = 0 but omega0 != 0: no finite driving
    field can cancel the free qubit Hamiltonian in that case.
    """


class LayoutError(PairsimError, ValueError):
    """Operator/layout dimension mismatch or invalid factor index."""


class HermiticityError(PairsimError, ValueError):
    """A matrix required to be Hermitian failed the symmetry check."""


class LeakageError(PairsimError, RuntimeError):
    """Decoded vector has weight outside the encoded subspace.

    Attributes
    ----------
    leaked : float
        Probability weight found outside the coherence-preserving subspace.
    """

    def __init__(self, leaked: float):
        self.leaked = float(leaked)
        super().__init__(
            f"vector has {self.leaked:.3e} probability weight outside the "
            "coherence-preserving subspace"
        )


class GateCommutationError(PairsimError, RuntimeError):
    """An operator fails to commute with a pair noise-sum up to a scalar.

    Attributes
    ----------
    pair : int
        Index of the offending pair.
    norm : float
        Spectral norm of the non-scalar commutator remainder.
    """

    def __init__(self, pair: int, norm: float):
        self.pair = pair
        self.norm = float(norm)
        super().__init__(
            f"commutator with noise-sum of pair {pair} is not scalar: "
            f"|[op, S-sum]| = {self.norm:.3e}"
        )


class ConfigError(PairsimError, ValueError):
    """Experiment configuration failed schema or physics validation.

    Attributes
    ----------
    violations : list[str]
        Every violation found, not just the first.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        lines = "\n  - ".join(self.violations)
        super().__init__(f"invalid experiment config:\n  - {lines}")


class BranchAmbiguityWarning(UserWarning):
    """A unitary has an eigenvalue at -1; its log phase is pinned to +pi."""
