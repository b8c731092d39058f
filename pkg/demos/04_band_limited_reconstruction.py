"""
Exact recovery of band-limited fields
=====================================

A field with bandwidth L0 sampled on a design with Q > L0 and M > L0 has
exact quadrature coefficients, and kernel interpolation reproduces it
everywhere on the sphere.
"""
import numpy as np

from hyperalias.design import uniform_design
from hyperalias.harmonics import embed_arrays
from hyperalias.spectrum import (
    PowerSpectrum,
    aliased_coeffs,
    check_sample_size,
    reconstruct,
    sample_field,
    synthesize_field,
)

L0, d = 3, 3
size = check_sample_size(L0, d)
print(size)

C = PowerSpectrum((1.0,) * (L0 + 1), band_limit=L0)
field = synthesize_field(C, L0, d, seed=7)

rng = np.random.default_rng(0)
theta = np.arccos(rng.uniform(-1, 1, (100, d - 1)))
phi = rng.uniform(0, 2 * np.pi, 100)
truth = field.evaluate(theta, phi)

for Q, M in ((list(size.Q), size.M), ([2, 2], 1)):
    design = uniform_design(d, Q, M)
    samples = sample_field(field, design)
    coeffs = aliased_coeffs(samples, design, L0)
    err = max(abs(coeffs[k] - field.coefficients[k]) for k in coeffs)
    recon = reconstruct(samples, design, L0, embed_arrays(theta, phi))
    print(f"Q={Q} M={M}: max coefficient error {err:.2e}, "
          f"max reconstruction error {np.max(np.abs(recon - truth)):.2e}")
