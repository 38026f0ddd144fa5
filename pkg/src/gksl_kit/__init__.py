"""gksl-kit: verification and construction toolkit for completely positive
maps and generators of CP quantum dynamical semigroups.

Highlights:

* :mod:`gksl_kit.superops` -- fixed vectorization and Choi conventions, the
  Jamiolkowski transform as an involution, exact CP tests, falsifiers.
* :mod:`gksl_kit.cp_maps` -- Kraus extraction/assembly, intermediate form.
* :mod:`gksl_kit.generators` -- canonical generator form L(Psi, G, H), exact
  dCP decision, minimal presentation, trace conditions, unitary averages.
* :mod:`gksl_kit.evolution` -- exponentials, the CP Euler-limit construction,
  piecewise-constant splicing of time-dependent generators.
* :mod:`gksl_kit.filtration` -- nested truncations and projective sequences.
* :mod:`gksl_kit.cli` -- batch commands over versioned JSON files.
"""

from .operators import (
    DEFAULT_TOL,
    HermitianSplit,
    PsdResult,
    Tolerance,
    dag,
    hermitian_split,
    hs_inner,
    hs_norm,
    is_positive_semidefinite,
    operator_norm,
    random_density_matrix,
    random_ginibre,
    random_haar_unitary,
    random_hermitian,
    trace_norm,
    traceless_projection,
)
from .superops import (
    ChoiMatrix,
    CpResult,
    MonotoneWitness,
    PropertyReport,
    RankWitness,
    SuperOperator,
    choi_quadratic_form,
    dyad_vec,
    dyad_unvec,
    hs_inner_superop,
    identity_superop,
    is_cp,
    is_dag_morphism,
    jamiolkowski,
    jamiolkowski_inv,
    jamiolkowski_superop,
    monotone_falsifier,
    property_report,
    quadratic_form,
    rank_n_positive_falsifier,
    sandwich,
    superop_from_action,
    tensor_superop,
    tensor_with_identity,
    transpose_map,
    unvec,
    vec,
)
from .cp_maps import (
    IntermediateForm,
    KrausFamily,
    cp_closure_checks,
    intermediate_form,
    kraus_assemble,
    kraus_extract,
    random_cp_map,
    reconstruct_choi,
    traceless_block_projector,
)
from .generators import (
    DcpVerdict,
    GkslPresentation,
    TraceConditionResult,
    assemble_generator,
    commutator_generator,
    embedded_presentation,
    haar_conjugation_average,
    induced_trace_norm_estimate,
    is_cp_group_generator,
    is_dcp,
    lindblad_trick_average,
    minimal_presentation,
    monte_carlo_generator_average,
    norm_bounds_check,
    random_dcp_generator,
    random_minimal_presentation,
    trace_condition,
)
from .evolution import (
    GeneratorSchedule,
    Propagator,
    cocycle_check,
    constant_schedule,
    euler_factor,
    euler_limit_exp,
    euler_shift,
    exp_generator,
    invertibility_check,
    propagate,
)
from .filtration import (
    AdaptedSequence,
    Filtration,
    TruncationRow,
    compress,
    diverging_diagonal_sequence,
    lift_projection,
    projective_reconstruction,
    restrict,
    truncation_study,
)
from .errors import (
    NonHermitianChoiError,
    NormBoundViolatedError,
    NotCPError,
    NotDcpError,
    NotMinimalError,
    NotProjectiveError,
)

__version__ = "0.1.0"
