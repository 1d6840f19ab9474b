"""GKP stabilizer expectation values, maximum fidelities and their bounds."""

__version__ = "0.1.0"

from .bounds import (
    IDEAL,
    BoundsRegion,
    distances_from_fidelity,
    f_upper_from_sevs,
    region_contains,
    sp_lower,
    sp_upper,
)
from .estimators import FidelityRegionClassifier, StabilizerFidelityTransformer
from .exceptions import DomainError, FidelityConvergenceError, PreconditionError
from .metrics import (
    EnvelopeResult,
    FidelityResult,
    SevResult,
    effective_squeezing,
    fidelity_discrete,
    fidelity_gaussian,
    sev_discrete,
    sev_fidelity_envelope,
    sev_gaussian,
)
from .quadrature import PERIOD_P, PERIOD_Q, Phasor, gaussian_overlap, phasor_sum, sinc
from .sampler import SampleConfig, SampleRecord, coverage_report, sample_region
from .states import (
    DiscreteBaseState,
    GaussianCombState,
    GkpParams,
    PeriodicEnvelope,
    make_box_base,
    make_gaussian_gkp,
    make_roots_of_unity_state,
    make_spike_state,
    make_three_vector_state,
    make_two_vector_state,
)
