"""ringstir: adiabatic transport and quantum stirring in a driven 3-site ring.

A dot (site 0) at controllable potential u is coupled to a two-site
wire; sweeping u drives a double-path level crossing.  The package
provides the exact adiabatic spectrum, geometric conductance and
transported charge in closed form, a numerical flux-derivative oracle,
effective two-level reductions with regime classification, and
norm-preserving time-dependent propagation beyond the adiabatic limit.
"""

from .errors import (
    DegeneracyNearbyError,
    DegenerateSpectrumError,
    DegenerateSplittingError,
    NonHermitianInputError,
    NonzeroC0Error,
    NormDriftError,
    PropagationError,
    RingstirError,
    StepUnderflowError,
    ZeroC0Error,
    ZeroCouplingError,
    ZeroWireCouplingError,
)
from .model import (
    Bond,
    RingParams,
    TestFlux,
    TwoSiteParams,
    build_current_operator,
    build_current_operator_2site,
    build_hamiltonian_2site,
    build_hamiltonian_3site,
    is_hermitian,
)
from .spectral import (
    CubicAux,
    GroundState3,
    Spectrum3,
    cubic_aux,
    eigenvalues_trig,
    ground_energy,
    ground_state,
    oracle_eigensolve,
)
from .transport import (
    AdiabaticPoint,
    adiabatic_point,
    conductance_bond12,
    conductance_exact,
    conductance_numeric,
    integrate_conductance,
    integrated_current,
    q_infinity,
    tail_charge_estimate,
    two_site_charge,
    two_site_conductance,
    two_site_conductance_numeric,
    two_site_ground_energy,
)
from .twolevel import (
    MetamorphosisPoint,
    Regime,
    RegimeLabel,
    Scheme,
    TwoLevelParams,
    approx_charge,
    approx_conductance,
    bright_dark_basis,
    classify_regime,
    dark_state_params,
    dressed_basis,
    metamorphosis_point,
    mixing_angle,
    reduced_wire_hamiltonian,
    reduced_wire_valid,
    shifted_params,
    simple_params,
    to_two_site,
    transform_to_basis,
    wire_basis,
)
from .dynamics import (
    AdiabaticityRegime,
    StepControl,
    SweepProtocol,
    TimeTrace,
    adiabaticity_classify,
    max_current_estimate,
    propagate,
    propagate_two_site,
)

__version__ = "0.1.0"
