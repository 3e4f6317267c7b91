"""Construction, verification and search for conical 2-designs."""
from .bloch import (
    Membership,
    bloch_norm,
    body_membership,
    from_bloch,
    kappa_max_direction,
    to_bloch,
)
from .constructors import (
    mub_prime,
    mum_counterexample,
    mum_inball,
    random_rotate,
    scale_design,
    sic_fixture,
    sic_kets,
    sim_inball,
    theorem3_design,
)
from .design import (
    ConicalDesign,
    DesignParameters,
    VerificationReport,
    classify,
    expand_operator,
    induced_povm,
    parameters,
    reconstruct,
    structural_transpose_check,
    verify,
)
from .errors import (
    ConicalError,
    ConstructionUnavailableError,
    DimensionError,
    DomainError,
    InvalidProjectorError,
    NoDecompositionError,
    NotADesignError,
    NumericalError,
    ZeroTraceError,
)
from .estimators import ContractionSearch, DesignExpansion
from .polytope import (
    DesignProjector,
    SearchResult,
    centering_projector,
    cp_search,
    gram_projector,
    mub_block_projector,
    validate_projector,
    verify_bloch_one_design,
)
from .werner import (
    DecompositionReport,
    isotropic_state,
    symmetric_decomposition,
    verify_decomposition,
    werner_isotropic_transform,
    werner_state,
)

__version__ = "0.1.0"
