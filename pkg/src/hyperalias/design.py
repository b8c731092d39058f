"""Separable spherical uniform designs on S^d."""
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .quadrature import AzimuthRule, gauss_gegenbauer, gegenbauer_mass

__all__ = [
    "SpherePoint",
    "SphericalDesign",
    "FlatDesign",
    "uniform_design",
    "measure_f",
    "flatten",
    "surface_area",
    "design_to_dict",
    "design_from_dict",
    "dumps_design",
    "loads_design",
]


def surface_area(d):
    """Surface area of the unit sphere S^d embedded in R^(d+1)."""
    return 2.0 * math.pi ** (0.5 * (d + 1)) / math.gamma(0.5 * (d + 1))


@dataclass(frozen=True)
class SpherePoint:
    theta: tuple
    phi: float

    def __post_init__(self):
        theta = tuple(float(t) for t in np.atleast_1d(self.theta))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(self.phi))
        if any(not 0.0 <= t <= math.pi for t in theta):
            raise ValueError("polar angles must lie in [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError("azimuth must lie in [0, 2 pi)")

    @property
    def d(self):
        return len(self.theta) + 1


def _ro(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SphericalDesign:
    """Product of d - 1 Gauss-Gegenbauer rules and a 2M-point trapezoid.

    ``w_theta[j-1][k]`` is the polar weight of coordinate j; it carries the
    mass of the Gegenbauer weight so that
    ``sum_k w_theta[j-1][k] * sin(theta[j-1][k])**(d-j)`` equals
    ``B(1/2, (d-j+1)/2)`` and the full design integrates 1 to |S^d|.
    """

    d: int
    Q: tuple
    M: int
    nodes: tuple  # cosines of the polar angles, per coordinate
    theta: tuple
    w_theta: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def azimuth(self):
        return AzimuthRule(self.M)

    @property
    def phi(self):
        return self.azimuth.angles

    @property
    def w_phi(self):
        return math.pi / self.M

    @property
    def size(self):
        return 2 * self.M * int(np.prod(self.Q))

    def alpha(self, j):
        return 0.5 * (self.d - j)

    def sin_theta(self, j):
        t = self.nodes[j - 1]
        return np.sqrt(1.0 - t * t)

    def unit_weights(self, j):
        """Quadrature weights omega of coordinate j (unit sum)."""
        return self.w_theta[j - 1] * self.sin_theta(j) ** (self.d - j) / gegenbauer_mass(self.alpha(j))


def uniform_design(d, Q, M):
    """Spherical uniform design with Q[j-1] polar nodes per coordinate and 2M azimuths."""
    d = int(d)
    Q = tuple(int(q) for q in np.atleast_1d(Q))
    if d < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {d}")
    if len(Q) != d - 1:
        raise ValueError(f"need {d - 1} polar node counts for d={d}, got {len(Q)}")
    if any(q < 1 for q in Q):
        raise ValueError(f"polar node counts must be >= 1, got {Q}")
    if int(M) != M or M < 1:
        raise ValueError(f"M must be a positive integer, got {M}")
    nodes, thetas, weights = [], [], []
    for j in range(1, d):
        rule = gauss_gegenbauer(Q[j - 1], 0.5 * (d - j))
        t = rule.nodes
        n = len(t)
        theta = np.empty(n)
        obtuse = np.arange(n // 2)
        # angles above pi/2 from arccos; pi - theta is then exact (Sterbenz),
        # which makes the mirror relation hold bit-for-bit in both directions
        theta[obtuse] = np.arccos(t[obtuse])
        theta[n - 1 - obtuse] = math.pi - theta[obtuse]
        if n % 2:
            theta[n // 2] = 0.5 * math.pi
        sin = np.sqrt(1.0 - t * t)
        w = rule.mass * rule.weights / sin ** (d - j)
        nodes.append(_ro(t))
        thetas.append(_ro(theta))
        weights.append(_ro(w))
    return SphericalDesign(d, Q, int(M), tuple(nodes), tuple(thetas), tuple(weights))


def measure_f(theta, d=None):
    """prod_j sin(theta_j)^(d-j); accepts one angle vector or an (N, d-1) array."""
    theta = np.asarray(theta, dtype=float)
    if d is None:
        d = theta.shape[-1] + 1
    powers = d - np.arange(1, d)
    return np.prod(np.sin(theta) ** powers, axis=-1)


class FlatDesign(NamedTuple):
    theta: np.ndarray  # (N, d-1)
    cos_theta: np.ndarray  # (N, d-1)
    phi: np.ndarray  # (N,)
    weights: np.ndarray  # (N,)
    f: np.ndarray  # (N,) measure factor at each point

    @property
    def size(self):
        return len(self.phi)

    def points(self):
        return [SpherePoint(th, ph) for th, ph in zip(self.theta, self.phi)]


def flatten(design):
    """All N design points with product weights, k_0 slowest, azimuth fastest."""
    cached = design._cache.get("flat")
    if cached is not None:
        return cached
    d = design.d
    axes = [np.arange(q) for q in design.Q] + [np.arange(2 * design.M)]
    grids = [g.ravel() for g in np.meshgrid(*axes, indexing="ij")]
    theta = np.stack([design.theta[j][grids[j]] for j in range(d - 1)], axis=1)
    cos_theta = np.stack([design.nodes[j][grids[j]] for j in range(d - 1)], axis=1)
    sin_pow = np.ones(len(grids[0]))
    weights = np.full(len(grids[0]), design.w_phi)
    for j in range(1, d):
        k = grids[j - 1]
        weights = weights * design.w_theta[j - 1][k]
        sin_pow = sin_pow * design.sin_theta(j)[k] ** (d - j)
    phi = design.phi[grids[-1]]
    flat = FlatDesign(theta, cos_theta, phi, weights, sin_pow)
    for a in flat[:-1]:
        a.flags.writeable = False
    design._cache["flat"] = flat
    return flat


def design_to_dict(design):
    return {
        "d": design.d,
        "Q": list(design.Q),
        "M": design.M,
        "theta": [a.tolist() for a in design.theta],
        "w_theta": [a.tolist() for a in design.w_theta],
        "phi": design.phi.tolist(),
        "w_phi": design.w_phi,
        "t": [a.tolist() for a in design.nodes],
    }


def design_from_dict(obj):
    d, Q, M = int(obj["d"]), tuple(int(q) for q in obj["Q"]), int(obj["M"])
    theta = tuple(_ro(a) for a in obj["theta"])
    if "t" in obj:
        nodes = tuple(_ro(a) for a in obj["t"])
    else:
        nodes = tuple(_ro(np.cos(a)) for a in theta)
    weights = tuple(_ro(a) for a in obj["w_theta"])
    if len(theta) != d - 1 or tuple(len(a) for a in theta) != Q:
        raise ValueError("design JSON: theta lists do not match Q")
    return SphericalDesign(d, Q, M, nodes, theta, weights)


def dumps_design(design, **kwargs):
    return json.dumps(design_to_dict(design), **kwargs)


def loads_design(text):
    return design_from_dict(json.loads(text))
