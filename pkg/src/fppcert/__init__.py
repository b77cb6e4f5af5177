"""Fixed point property certificates for finite presentation complexes.

Verifies from first principles that a finite presentation defines an
efficient presentation of a Bing group, and hence that its presentation
complex has the fixed point property, emitting auditable certificates.
"""

from .certify import (
    Certificate,
    CertifyOptions,
    WedgeReport,
    bing_check,
    efficiency_check,
    fpp_certificate,
    merge_invariant_factors,
    render_report,
    wedge_analysis,
)
from .coset import GroupTable, element_order, evaluate_word, todd_coxeter
from .endos import (
    GroupEndomorphism,
    dedup_modulo_inner,
    enumerate_endomorphisms,
    induced_h2_set,
)
from .errors import (
    CompositionNotZero,
    ConsistencyError,
    CosetLimitExceeded,
    FppError,
    NoSolution,
    OrderTooLarge,
    ParseError,
)
from .presentation import (
    FreeAlgebraSum,
    Presentation,
    Word,
    euler_characteristic,
    exponent_matrix,
    fox_derivative,
    format_presentation,
    free_reduce,
    parse_presentation,
    wedge_presentation,
)
from .resolution import (
    ChainMap3,
    FreeResolution3,
    H2Data,
    H2Endo,
    build_resolution,
    h2_of_group,
    h2_via_bar_complex,
    induced_h2,
    lift_chain_map,
    tensor_trivial,
)
from .zmatrix import (
    ColumnEchelonSolver,
    FpAbelianGroup,
    SmithDecomposition,
    ZMatrix,
    hermite_normal_form,
    homology_of_pair,
    kernel_basis,
    smith_normal_form,
    solve_integer_system,
)

__version__ = "0.1.0"
