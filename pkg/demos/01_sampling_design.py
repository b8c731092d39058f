"""
Sampling designs on the hypersphere
===================================

A uniform design on S^d is a product of Gauss-Gegenbauer rules for the
d - 1 polar angles and a trapezoidal rule with 2M points for the azimuth.
"""
import numpy as np

from hyperalias.aliasing import gram_deviation
from hyperalias.design import flatten, surface_area, uniform_design
from hyperalias.quadrature import gauss_gegenbauer, rule_exactness_error

# A 6-point rule for the weight (1 - t^2)^(alpha - 1/2) is exact up to degree 11.
rule = gauss_gegenbauer(6, 1.0)
print("nodes  ", np.round(rule.nodes, 6))
print("weights", np.round(rule.weights, 6))
print("moment error, p <= 11:", rule_exactness_error(rule, 11))
print("moment error, p <= 12:", rule_exactness_error(rule, 12))

# Build the design on S^3 with Q = (4, 4) polar nodes and 2M = 8 azimuths.
design = uniform_design(3, [4, 4], 4)
flat = flatten(design)
print("N =", design.size)
print("sum of w f =", flat.weights @ flat.f, " |S^3| =", surface_area(3))

# The polar angles are mirrored about pi/2, bit for bit.
theta = design.theta[0]
print("mirror exact:", np.all(theta == np.pi - theta[::-1]))

# Harmonics stay orthonormal on the design while ell + ell' <= 2Q - 1 and < 2M.
print("Gram deviation, ell + ell' <= 7:", gram_deviation(design, 7))
print("Gram deviation, ell + ell' <= 8:", gram_deviation(design, 8))
