"""Harmonic analysis toolkit for the Bessel operator on the half-line.

The operator is L = -d^2/dx^2 - (2 lambda / x) d/dx on (0, infinity),
self-adjoint with respect to the measure x^(2 lambda) dx.  The package
evaluates its heat and Poisson kernels and their derivatives, applies the
associated maximal operators, Riesz transform, square functions and
Hardy-type operators to test functions, classifies the exact power-weight
(p, delta) boundedness regions of those operators, and ships a
verification harness plus quantitative sharpness experiments.
"""

from .specfun import (
    SpecialValue,
    AsymCoeffTable,
    asym_coeffs,
    bessel_i,
    bessel_i_scaled,
    bessel_j,
    gamma_fn,
    gauss_2f1,
)
from .quad import QuadratureSpec, GridSpec, integrate_weighted, integrate_t, pv_local
from .kernels import (
    BesselParam,
    KernelPoint,
    region_tag,
    heat_kernel,
    heat_kernel_at_zero,
    gauss_weierstrass,
    dgauss_dt,
    dheat_dx,
    dheat_dt,
    poisson_kernel,
    conj_poisson_kernel,
    riesz_kernel,
    tilde_kernel,
    spectral_oracle,
)
from .operators import (
    SampledFunction,
    WeightedSpace,
    OperatorReport,
    heat_apply,
    poisson_apply,
    maximal_apply,
    riesz_apply,
    riesz_adjoint_apply,
    potential_apply,
    conj_poisson_apply,
    g_heat,
    g_poisson,
    g_loc,
    hardy_apply,
    local_max,
    aux_T,
    aux_N,
    aux_calN,
    apply_on_grid,
    norm_estimate,
)
from .theory import (
    MappingQuery,
    MappingClassSet,
    SharpnessReport,
    classify,
    classify_tilde,
    region_map,
    sharpness_l1_blowup,
    sharpness_boundary_weak,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
