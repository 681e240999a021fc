"""Antilinear-operator description of bipartite pure states and conditional
teleportation with partially entangled resources."""

from .antilinear import (
    AntilinearOp,
    adjoint,
    apply,
    compose_aa,
    hs_inner,
    index_state,
    is_maximally_entangled,
    maximally_entangled_state,
    measurement_state_from_op,
    op_from_measurement_state,
    op_from_state,
    reconstruct_from_index,
    state_from_op,
)
from .channels import (
    KrausChannel,
    apply_channel_relative,
    check_marginal_condition,
    dual_state_of_channel,
)
from .errors import (
    DimensionMismatch,
    NonUnitaryArgument,
    NotMatching,
    SingularSharedState,
    TeleportError,
    ZeroProbabilityOutcome,
)
from .linalg import (
    DensityOperator,
    PureState,
    fidelity,
    partial_trace,
    random_pure_state,
    random_unitary,
    schmidt_decompose,
    tensor_product,
)
from .matching import (
    MatchResult,
    is_matching,
    matching_orbit_check,
    matching_outcome,
    schmidt_example,
    success_probability,
)
from .teleport import (
    MeasurementBasis,
    TeleportReport,
    bell_basis,
    channel_linearity,
    outcome_probability,
    povm_element,
    probability_spread,
    teleport_density,
    teleport_pure,
)

__version__ = "0.1.0"
