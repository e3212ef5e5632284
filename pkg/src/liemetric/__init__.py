"""liemetric: quantum Fisher information matrices, Uhlmann curvature and
optimality criteria over orthonormal Hermitian Lie-algebra bases, with
executable checks of the spectrum conservation law under group-generated
evolution."""

__version__ = "0.1.0"

from .basis import (
    DIM_CAP_DEFAULT,
    BasisVerification,
    LieBasis,
    SymmetricIndex,
    build_collective_full,
    build_collective_symmetric,
    build_full_observable_basis,
    build_gellmann,
    build_spin1_dipole,
    build_su3_collective,
    casimir,
    collective_norm_constant,
    dipole_norm_constant,
    iter_full_observable_generators,
    symmetric_dimension,
    symmetric_embedding,
    verify_basis,
)
from .criteria import (
    AOptDiagnostic,
    CriteriaReport,
    McResponse,
    WitnessResult,
    a_opt_diagnostic,
    avg_response,
    avg_response_mc,
    c_opt,
    entanglement_witness,
    evaluate_criteria,
)
from .dynamics import (
    SWEEP_QUANTITIES,
    SweepResult,
    SweepSpec,
    evolve,
    example_state,
    hyperfine_unitary_apply,
    oat_unitary_apply,
    run_sweep,
)
from .exceptions import (
    AlgebraMembershipError,
    ConfigError,
    DimensionCapError,
    InvalidDimensionError,
    LieMetricError,
    NormalizationError,
    NumericalError,
    OrthogonalityError,
    RegimeError,
    UndefinedIncompatibilityError,
    ValidationError,
)
from .geometry import (
    RANK_REL_DEFAULT,
    RHO_SUPPORT_REL_DEFAULT,
    IncompatibilityResult,
    Qfim,
    SldSet,
    Uct,
    cfim,
    full_observable_qfim_trace,
    incompatibility,
    incompatibility_from_matrices,
    precision_bound,
    pseudo_inverse,
    qfim,
    qfim_pure,
    qgt_pure,
    sld,
    sld_set,
    trace_qfim_pure,
    uct,
    uct_pure,
)
from .invariance import (
    AdjointMatrix,
    GroupElement,
    PairCheck,
    adjoint_matrix,
    check_spectrum_invariance,
    check_transformation_law,
    check_uct_invariance,
    manifold_dimension,
    random_group_element,
    random_mixed_state,
    random_pure_state,
    run_invariance_suite,
)
from .states import (
    DensityMatrix,
    PureState,
    conjugate,
    css,
    density,
    ghz_balanced,
    initial_example_state,
    maximally_mixed,
    mix,
    noon,
    sqrt_fidelity,
    uhlmann_distance_sq,
)
