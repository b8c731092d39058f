"""
Folding of the angular power spectrum
=====================================

For an isotropic field the estimated spectrum is a weighted sum of the true
spectrum at degrees ell + 2 s_0. The folding matrix holds those weights; a
Monte Carlo run shows the prediction in action.
"""
import numpy as np

from hyperalias.design import uniform_design
from hyperalias.spectrum import PowerSpectrum, fold_spectrum, lambda_matrix, monte_carlo_spectrum

C = PowerSpectrum((1.0, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2), band_limit=6)

# Undersampled: Q = (2, 2), M = 1.
coarse = uniform_design(3, [2, 2], 1)
L = lambda_matrix(2, 3, coarse)
for ell, row in enumerate(L.rows):
    print(ell, [(t, round(v, 4)) for t, v in row])
predicted = fold_spectrum(L, C).values
mean, se = monte_carlo_spectrum(C, 6, coarse, 2, 2000, seed=1)
print("true     ", C.values[:3])
print("predicted", np.round(predicted, 4))
print("simulated", np.round(mean, 4), "+/-", np.round(se, 4))

# With Q = M = 7 > 6 the band-limited spectrum passes through unchanged.
fine = uniform_design(3, [7, 7], 7)
print("fine design:", np.round(fold_spectrum(lambda_matrix(6, 2, fine), C).values, 12))
