"""Exact computations with Poisson vector bundles in polynomial trivializations."""
from .core import GaussianRational, MultiVector, OneForm, Poly, PolyMatrix, schouten_bracket
from .errors import (
    JacobiViolation,
    NotACocycle,
    NotFlat,
    NotSemisimple,
    ObstructionFound,
    PVKError,
    UnitaryObstruction,
)
from .lie import (
    CECochain,
    LieAlgebra,
    LieModule,
    ce_cohomology_dims,
    ce_differential,
    killing_form,
    module_preset,
    preset_algebra,
    solve_coboundary,
    validate_lie_algebra,
)
from .normalize import (
    GaugeTransform,
    dilation_homotopy,
    formal_normalize,
    gauge_transform,
    homogeneous_parts,
    line_bundle_moduli_dim,
    trace_word_invariants,
)
from .poisson import (
    PoissonStructure,
    d_pi,
    from_lie_algebra,
    one_form_bracket,
    pairing,
    poisson_bracket,
    poisson_cohomology_dims,
    preset_poisson,
    product_poisson,
    sharp,
)
from .pvb import (
    ConnectionData,
    GlCocycle,
    Section,
    action,
    bracket,
    canonical_bundle,
    characteristic_class,
    from_representation,
    homogeneity_check,
    is_unitary,
    isotropy_representation,
    mc_residual,
    product_extension,
    restrict_to_base,
)

__version__ = "0.1.0"
