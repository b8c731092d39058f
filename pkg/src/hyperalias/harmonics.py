"""Hyperspherical harmonics: index sets, evaluation and the projection kernel."""
import math
import sys
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .design import SpherePoint, surface_area
from .specfun import gegenbauer_eval, log_norm_h

__all__ = [
    "HarmonicIndex",
    "index_set",
    "harmonic_indices",
    "multiplicity",
    "eval_Y",
    "eval_Y_cos",
    "kernel_K",
    "kernel_coefficient",
    "embed",
    "embed_arrays",
]


@dataclass(frozen=True, order=True)
class HarmonicIndex:
    """Degree ``ell`` and order chain (m_1, ..., m_{d-1})."""

    ell: int
    orders: tuple

    def __post_init__(self):
        orders = tuple(int(m) for m in self.orders)
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "ell", int(self.ell))
        if not orders:
            raise ValueError("a harmonic index needs at least one order (d >= 2)")
        chain = (self.ell,) + orders[:-1]
        if self.ell < 0 or any(b < 0 or b > a for a, b in zip(chain, chain[1:])):
            raise ValueError(f"invalid order chain {self.chain}")
        if abs(orders[-1]) > chain[-1]:
            raise ValueError(f"invalid order chain {self.chain}")

    @property
    def d(self):
        return len(self.orders) + 1

    @property
    def chain(self):
        """(m_0, m_1, ..., m_{d-1}) with m_0 = ell."""
        return (self.ell,) + self.orders

    def __str__(self):
        return "a_{" + ",".join(str(m) for m in self.chain) + "}"


def multiplicity(ell, d):
    """Number of harmonics of degree ell on S^d."""
    ell, d = int(ell), int(d)
    if ell < 0 or d < 2:
        raise ValueError("multiplicity requires ell >= 0 and d >= 2")
    num = (2 * ell + d - 1) * math.factorial(ell + d - 2)
    den = math.factorial(ell) * math.factorial(d - 1)
    value = num // den
    if value > sys.maxsize:
        raise OverflowError(f"multiplicity({ell}, {d}) exceeds the integer range")
    return value


@lru_cache(maxsize=None)
def _index_set(ell, d):
    out = []

    def chains(prev, depth):
        if depth == d - 2:
            for m in range(-prev, prev + 1):
                yield (m,)
            return
        for m in range(prev + 1):
            for rest in chains(m, depth + 1):
                yield (m,) + rest

    for orders in chains(ell, 0):
        out.append(HarmonicIndex(ell, orders))
    return tuple(out)


def index_set(ell, d):
    """All order chains of degree ell on S^d, in lexicographic order."""
    if ell < 0 or d < 2:
        raise ValueError("index_set requires ell >= 0 and d >= 2")
    return list(_index_set(int(ell), int(d)))


def harmonic_indices(ell_max, d):
    """All indices with degree <= ell_max, degree-major."""
    return [idx for ell in range(ell_max + 1) for idx in _index_set(ell, d)]


def _polar_log_and_sign(index, cos_theta, sin_theta):
    d = index.d
    chain = index.chain
    log_mag = np.zeros(cos_theta.shape[0])
    sign = np.ones(cos_theta.shape[0])
    for j in range(1, d):
        m_prev, m = chain[j - 1], abs(chain[j])
        c = gegenbauer_eval(m_prev - m, cos_theta[:, j - 1], m + 0.5 * (d - j))
        with np.errstate(divide="ignore"):
            log_mag += log_norm_h(m_prev, m, j, d) + np.log(np.abs(c))
            if m:
                log_mag += m * np.log(sin_theta[:, j - 1])
        sign *= np.sign(c)
    return log_mag, sign


def eval_Y_cos(index, cos_theta, phi, sin_theta=None):
    """Y at points given by polar cosines (N, d-1) and azimuths (N,)."""
    cos_theta = np.atleast_2d(np.asarray(cos_theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if cos_theta.shape[1] != index.d - 1:
        raise ValueError(f"index is for d={index.d}, points have {cos_theta.shape[1]} polar angles")
    if sin_theta is None:
        sin_theta = np.sqrt(np.clip(1.0 - cos_theta**2, 0.0, None))
    log_mag, sign = _polar_log_and_sign(index, cos_theta, sin_theta)
    radial = sign * np.exp(log_mag) / math.sqrt(2.0 * math.pi)
    return radial * np.exp(1j * index.orders[-1] * phi)


def eval_Y(index, x, phi=None):
    """Evaluate Y_{ell, m} at a SpherePoint, or at arrays of polar angles and azimuths.

    With arrays, ``x`` has shape (N, d-1) and ``phi`` shape (N,); the result
    is a complex array of length N.
    """
    if isinstance(x, SpherePoint):
        theta = np.array([x.theta])
        return complex(eval_Y_cos(index, np.cos(theta), [x.phi], np.sin(theta))[0])
    theta = np.atleast_2d(np.asarray(x, dtype=float))
    return eval_Y_cos(index, np.cos(theta), phi, np.sin(theta))


def embed(x):
    """Unit vector in R^(d+1) of a SpherePoint.

    x_0 = cos theta_1, x_1 = sin theta_1 cos theta_2, ..., and the last two
    coordinates carry cos phi and sin phi.
    """
    return embed_arrays([x.theta], [x.phi])[0]


def embed_arrays(theta, phi):
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    n, k = theta.shape
    out = np.empty((n, k + 2))
    running = np.ones(n)
    for j in range(k):
        out[:, j] = running * np.cos(theta[:, j])
        running = running * np.sin(theta[:, j])
    out[:, k] = running * np.cos(phi)
    out[:, k + 1] = running * np.sin(phi)
    return out


def kernel_coefficient(ell, d):
    """Constant c with K_ell(x, y) = c * C_ell^((d-1)/2)(<x, y>).

    c = multiplicity / (|S^d| * C_ell^((d-1)/2)(1)) = (2 ell + d - 1) / ((d - 1) |S^d|),
    so that K_ell(x, x) = multiplicity(ell, d) / |S^d|.
    """
    return (2 * ell + d - 1) / ((d - 1) * surface_area(d))


def kernel_K(ell, x, y, d=None):
    """Projection kernel onto degree-ell harmonics, K_ell(x, y).

    ``x`` and ``y`` are SpherePoints or arrays of unit vectors (broadcast).
    """
    if isinstance(x, SpherePoint):
        d = x.d
        x = embed(x)
    if isinstance(y, SpherePoint):
        y = embed(y)
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if d is None:
        d = x.shape[-1] - 1
    inner = np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)
    value = kernel_coefficient(ell, d) * gegenbauer_eval(ell, inner, 0.5 * (d - 1))
    return value

