"""Open-system dynamics of maximally entangled pairs and their distillability."""

from .channels import (
    DephasingLaw,
    KrausChannel,
    SpectralDensity,
    amplitude_damping,
    apply,
    dephase,
    lift_one_sided,
    phase_damping,
    phase_integral,
    tensor,
    validate,
)
from .distill import (
    closed_Gf_dephasing,
    critical_time,
    fidelity_F,
    fidelity_from_kraus,
    paper_curve_Ff,
    ppt_min_eigenvalue,
    reduction_G,
)
from .dynamics import IntegratorConfig, LindbladModel, evolve, lindblad_rhs
from .states import (
    DensityMatrix,
    PureState,
    anticorrelated,
    max_entangled,
    projector,
    singlet,
    spin_operators,
)

__version__ = "0.1.0"
