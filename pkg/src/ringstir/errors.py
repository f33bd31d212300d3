"""Exception types shared across the package."""


class RingstirError(Exception):
    """Base class for all package-specific errors."""


class DegenerateSpectrumError(RingstirError):
    """Two eigenvalues coincide within the documented degeneracy threshold."""


class NonHermitianInputError(RingstirError):
    """Matrix handed to an eigensolver is not Hermitian."""


class ZeroCouplingError(RingstirError):
    """Closed form is singular because the relevant coupling vanishes."""


class DegenerateSplittingError(RingstirError):
    """c1 = c2 with nonzero intra-wire coupling: the splitting ratio diverges."""


class NonzeroC0Error(RingstirError):
    """Dark-state reduction requires exactly zero intra-wire coupling."""


class ZeroC0Error(RingstirError):
    """Operation undefined at zero intra-wire coupling."""


class ZeroWireCouplingError(RingstirError):
    """Both dot-wire couplings vanish; the bright/dark wire basis is undefined."""


class DegeneracyNearbyError(RingstirError):
    """Finite differencing unreliable: spectral gap below the safe threshold."""


class PropagationError(RingstirError):
    """Base class for time-propagation failures."""


class StepUnderflowError(PropagationError):
    """Adaptive step size fell below the floor step."""


class NormDriftError(PropagationError):
    """State norm drifted beyond the unitarity tolerance."""
