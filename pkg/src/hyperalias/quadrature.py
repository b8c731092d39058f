"""One-dimensional rules: Gauss-Gegenbauer for the polar angles and the
trapezoidal rule for the azimuth."""
import math
from dataclasses import dataclass

import numpy as np

from .specfun import _golub_welsch, _symmetrize, gegenbauer_zeros

__all__ = [
    "Rule1D",
    "AzimuthRule",
    "gauss_gegenbauer",
    "trapezoid_phi",
    "gegenbauer_mass",
    "gegenbauer_moment",
    "lagrange_weights",
    "rule_exactness_error",
]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Rule1D:
    """Nodes and unit-sum weights of a rule for the weight (1 - t^2)^(alpha - 1/2).

    ``integral(p) ~= mass * sum(weights * p(nodes))``.
    """

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")

    @property
    def size(self):
        return len(self.nodes)

    @property
    def mass(self):
        return gegenbauer_mass(self.alpha)

    def integrate(self, values):
        """Approximate the weighted integral from values sampled at the nodes."""
        return self.mass * np.dot(self.weights, values)


@dataclass(frozen=True, eq=False)
class AzimuthRule:
    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")

    @property
    def angles(self):
        return np.arange(2 * self.M) * math.pi / self.M

    @property
    def weight(self):
        return math.pi / self.M

    @property
    def weights(self):
        return np.full(2 * self.M, self.weight)


def gegenbauer_mass(alpha):
    """Total mass of nu_alpha on [-1, 1], i.e. B(1/2, alpha + 1/2)."""
    return gegenbauer_moment(0, alpha)


def gegenbauer_moment(p, alpha):
    """Closed-form moment of t^p against (1 - t^2)^(alpha - 1/2) on [-1, 1]."""
    if p % 2:
        return 0.0
    b = alpha + 0.5
    return math.exp(math.lgamma(0.5 * (p + 1)) + math.lgamma(b) - math.lgamma(0.5 * (p + 1) + b))


def gauss_gegenbauer(r, alpha):
    """r-point Gauss-Gegenbauer rule, exact to degree 2r - 1."""
    if int(r) != r or r < 1:
        raise ValueError(f"number of nodes must be a positive integer, got {r}")
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    r = int(r)
    nodes = gegenbauer_zeros(r, alpha)
    _, weights = _golub_welsch(r, alpha)
    weights = _symmetrize(weights, odd=False)
    return Rule1D(float(alpha), nodes, weights / weights.sum())


def lagrange_weights(nodes, alpha):
    """Unit-sum weights by integrating the Lagrange basis polynomials.

    Direct transcription of the interpolatory definition; only sensible for
    small rules. Used as a cross-check of the eigenvector weights.
    """
    nodes = np.asarray(nodes, dtype=float)
    r = len(nodes)
    mass = gegenbauer_mass(alpha)
    moments = np.array([gegenbauer_moment(p, alpha) for p in range(r)])
    out = np.empty(r)
    for k in range(r):
        others = np.delete(nodes, k)
        coeffs = np.poly(others)[::-1] / np.prod(nodes[k] - others)
        out[k] = np.dot(coeffs, moments) / mass
    return out


def trapezoid_phi(M):
    """2M equispaced azimuth angles with uniform weight pi / M."""
    return AzimuthRule(M)


def rule_exactness_error(rule, p_max):
    """Largest relative moment error over p = 0..p_max.

    Odd moments vanish exactly, so their error is taken relative to the
    neighbouring even moment.
    """
    worst = 0.0
    mass = rule.mass
    for p in range(p_max + 1):
        approx = mass * np.dot(rule.weights, rule.nodes**p)
        exact = gegenbauer_moment(p, rule.alpha)
        scale = exact if p % 2 == 0 else gegenbauer_moment(p - 1, rule.alpha)
        worst = max(worst, abs(approx - exact) / abs(scale))
    return worst
