"""Aliasing of hyperspherical harmonic coefficients under separable uniform sampling."""
from .aliasing import (
    AliasRecord,
    alias_distance,
    aliases_2d,
    classify_location,
    enumerate_aliases,
    eta,
    tau_direct,
    tau_separable,
)
from .design import SpherePoint, SphericalDesign, flatten, uniform_design
from .harmonics import HarmonicIndex, eval_Y, index_set, kernel_K, multiplicity
from .quadrature import gauss_gegenbauer, trapezoid_phi
from .spectrum import (
    PowerSpectrum,
    aliased_coeffs,
    fold_spectrum,
    lambda_matrix,
    reconstruct,
    sample_field,
    synthesize_field,
)

__version__ = "0.1.0"
