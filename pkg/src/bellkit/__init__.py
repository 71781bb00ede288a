"""Bell-type inequalities for bipartite quantum states in finite dimension."""

from .classical import (
    LhvModel,
    Observable,
    classical_bell_report,
    classical_correlation,
    classical_extended_chsh,
    random_model,
)
from .expectations import (
    CorrelationRecord,
    bob_bob_correlation,
    correlation,
    joint_probability,
)
from .inequalities import (
    ConditionSign,
    GammaVector,
    InequalityReport,
    Restriction,
    bell_original,
    bell_restriction,
    chsh_report,
    chsh_value,
    condition_sor,
    condition_vbi,
    extended_chsh,
    quantum_bell_analogue,
    scalar_bound,
    separable_bound,
    separable_bound_inf,
    two_term_linear_bound,
)
from .measurements import (
    DiscretePovm,
    OutcomeSet,
    effect_operator,
    joint_expectation_operator,
    make_povm,
    noise_povm,
    similarity_holds,
    spin_observable,
)
from .qlinalg import hermitian_eigen, kron, swap_operator, sym_tensor
from .states import (
    DensityOperator,
    SeparableRepresentation,
    assemble,
    is_special_form,
    is_swap_symmetric,
    make_density,
    mix_representations,
    representation,
    rho_zero,
    rho_zero_representation,
    sigma1_of,
    sigma2_of,
    sigma_sym_of,
)

__version__ = "0.1.0"
