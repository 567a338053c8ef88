"""anires: resummation toolkit for divergent anisotropic perturbation series.

Subpackage map:

* :mod:`anires.specfun`    scalar special functions, scaled arithmetic
* :mod:`anires.quadrature` double-exponential integrators on (0,1), (0,inf)
* :mod:`anires.series`     exact coefficient tables, crossover diagnostics
* :mod:`anires.model`      the 2-D quartic model integral, exact and numeric
* :mod:`anires.borel`      hypergeometric-Borel resummation engine
* :mod:`anires.benderwu`   exact oscillator perturbation coefficients
* :mod:`anires.qm`         oscillator large-order data and resummed energy
* :mod:`anires.vpt`        variational perturbation theory
* :mod:`anires.cli`        command-line interface (`anires ...`)
"""

from .specfun import ScaledValue, bessel_i0_scaled, generalized_binomial, legendre_scaled, log_gamma
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureError,
    QuadratureSpec,
    QuadResult,
    integrate_semiline,
    integrate_unit,
)
from .series import (
    AffineInN,
    BigRational,
    CoefficientTable,
    CrossoverReport,
    LargeOrderParams,
    local_exponent,
    truncated_double_sum,
)
from .model import (
    ModelCoefficients,
    ImaginaryPartTerm,
    imaginary_part,
    imaginary_part_terms,
    large_order_estimate,
    large_order_estimate_delta,
    model_large_order_params,
    strong_coupling_kappa,
    z_coeff,
    z_coeff_delta,
    z_coeff_delta_scaled,
    z_reference,
)
from .borel import (
    BorelBasisSpec,
    ResummedApproximant,
    approximant_to_json,
    basis_integral,
    basis_integral_tform,
    basis_series_coefficient,
    borel_coefficients,
    build_approximant,
    reexpansion_check,
    resum,
)
from .benderwu import BwState, build as benderwu_build, energy_series
from .qm import (
    QmLargeOrder,
    qm_approximant,
    qm_imaginary_part,
    qm_imaginary_terms,
    qm_large_order_estimate,
    qm_large_order_params,
    resum_energy,
)
from .vpt import (
    LaurentInOmega,
    OmegaCandidate,
    VptOrderResult,
    optimize_omega,
    reexpansion_coefficients,
    vpt_energy,
    w_laurent,
)

__version__ = "0.1.0"
