"""Entanglement of two identical particles: Slater/Schmidt canonical forms,
entropy criteria, property attribution and spin correlations."""
from .bell import (
    BellSetting,
    Direction,
    ExampleState,
    build_example_state,
    chsh,
    chsh_scan,
    correlation,
)
from .criteria import (
    Classification,
    PropertyReport,
    Subcase,
    Tolerances,
    Verdict,
    attribute_properties,
    classify,
    classify_spectral,
    expectation_E_P,
)
from .decompositions import TakagiResult, YoulaResult, takagi, youla
from .errors import (
    CertificationError,
    ConsistencyError,
    ConvergenceError,
    DegenerateInputError,
    DimensionError,
    IdententError,
    NumericalError,
    ValidationError,
)
from .linalg import HermitianEig, hermitian_eig
from .states import (
    DensityOperator,
    SchmidtData,
    Statistics,
    TwoParticleState,
    antisymmetrize_product,
    from_coefficients,
    predicted_schmidt_coefficients,
    reduced_density,
    schmidt_data,
    state_from_schmidt,
    symmetrize_product,
    von_neumann_entropy,
)

__version__ = "0.1.0"
