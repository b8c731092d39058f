"""Scalar special functions: Gegenbauer polynomials, their zeros, log-gamma
and the normalizing constants of hyperspherical harmonics."""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "GegenbauerSpec",
    "gegenbauer_eval",
    "gegenbauer_derivative",
    "gegenbauer_zeros",
    "log_gamma",
    "log_norm_h",
    "norm_h",
]


@dataclass(frozen=True)
class GegenbauerSpec:
    degree: int
    alpha: float

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")
        if not self.alpha > 0:
            raise ValueError(f"parameter alpha must be > 0, got {self.alpha}")


def _as_spec(spec, alpha=None):
    if isinstance(spec, GegenbauerSpec):
        return spec
    return GegenbauerSpec(int(spec), float(alpha))


def gegenbauer_eval(spec, t, alpha=None):
    """Evaluate C_n^alpha(t) by the three-term recurrence.

    ``spec`` is a GegenbauerSpec, or a degree with ``alpha`` passed separately.
    ``t`` may be a scalar or an array; the result has the same shape.
    """
    spec = _as_spec(spec, alpha)
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("gegenbauer_eval requires |t| <= 1")
    n, a = spec.degree, spec.alpha
    c_prev = np.ones_like(t)
    if n == 0:
        return c_prev if t.ndim else float(c_prev)
    c = 2.0 * a * t
    for k in range(2, n + 1):
        c_prev, c = c, (2.0 * (k + a - 1.0) * t * c - (k + 2.0 * a - 2.0) * c_prev) / k
    return c if t.ndim else float(c)


def gegenbauer_derivative(spec, t, alpha=None):
    """d/dt C_n^alpha(t) = 2 alpha C_{n-1}^{alpha+1}(t)."""
    spec = _as_spec(spec, alpha)
    if spec.degree == 0:
        return np.zeros_like(np.asarray(t, dtype=float))
    return 2.0 * spec.alpha * gegenbauer_eval(spec.degree - 1, t, spec.alpha + 1.0)


def _jacobi_offdiag(n, alpha):
    k = np.arange(1, n, dtype=float)
    return np.sqrt(k * (k + 2.0 * alpha - 1.0) / (4.0 * (k + alpha) * (k + alpha - 1.0)))


def _symmetrize(x, odd):
    """Average x with its reflection -x[::-1]; the even counterpart when odd=False."""
    x = np.asarray(x, dtype=float)
    if odd:
        y = 0.5 * (x - x[::-1])
    else:
        y = 0.5 * (x + x[::-1])
    n = len(x)
    # make the mirror relation bit-exact, not just exact up to rounding
    half = n // 2
    if odd:
        y[:half] = -y[::-1][:half]
        if n % 2:
            y[half] = 0.0
    else:
        y[:half] = y[::-1][:half]
    return y


def _golub_welsch(n, alpha):
    """Eigen-decomposition of the symmetric Jacobi matrix of nu_alpha.

    Returns the nodes and the squared first eigenvector components (weights
    normalized to unit sum).
    """
    if n == 1:
        return np.zeros(1), np.ones(1)
    nodes, vecs = eigh_tridiagonal(np.zeros(n), _jacobi_offdiag(n, alpha))
    order = np.argsort(nodes)
    return nodes[order], vecs[0, order] ** 2


def gegenbauer_zeros(spec, alpha=None):
    """All zeros of C_n^alpha, ascending and exactly symmetric about 0."""
    spec = _as_spec(spec, alpha)
    n, a = spec.degree, spec.alpha
    if n < 1:
        raise ValueError("gegenbauer_zeros requires degree >= 1")
    t, _ = _golub_welsch(n, a)
    # one Newton polish
    dp = gegenbauer_derivative(spec, t)
    if np.any(dp == 0):
        raise ArithmeticError("zero derivative at a Gegenbauer root estimate")
    step = gegenbauer_eval(spec, t) / dp
    t_new = t - step
    if not np.all(np.isfinite(t_new)) or np.any(np.abs(step) > 1e-6):
        raise ArithmeticError(f"root refinement failed for C_{n}^{a}")
    t = _symmetrize(t_new, odd=True)
    if np.any(np.diff(t) <= 0) or np.any(np.abs(t) >= 1):
        raise ArithmeticError(f"root refinement failed for C_{n}^{a}")
    return t


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


@lru_cache(maxsize=None)
def log_norm_h(m_prev, m, j, d):
    """Natural log of the normalizing constant h_{m_prev, m; j} on S^d."""
    m_prev, m = int(m_prev), int(m)
    if m < 0 or m_prev < m:
        raise ValueError(f"norm_h requires m_prev >= m >= 0, got ({m_prev}, {m})")
    if not 1 <= j <= d - 1:
        raise ValueError(f"coordinate index j={j} outside 1..{d - 1}")
    a = 0.5 * (d - j)
    log_sq = (
        (2 * m + d - j - 2) * math.log(2.0)
        + math.lgamma(m_prev - m + 1)
        + math.log(2 * m_prev + d - j)
        + 2.0 * math.lgamma(m + a)
        - math.log(math.pi)
        - math.lgamma(m_prev + m + d - j)
    )
    return 0.5 * log_sq


def norm_h(m_prev, m, j, d):
    """Normalizing constant h_{m_prev, m; j} of the hyperspherical harmonics."""
    return math.exp(log_norm_h(m_prev, m, j, d))
