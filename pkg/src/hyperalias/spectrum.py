"""Angular power spectrum folding, isotropic field synthesis and band-limited recovery.

Fields are complex circular Gaussian: every coefficient a_{ell,m} is drawn
independently with mean zero and variance C_ell (real and imaginary parts
each carry C_ell / 2).
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .aliasing import _Y_on_design, alias_index_sets, eta
from .design import SpherePoint, flatten, uniform_design
from .harmonics import (
    HarmonicIndex,
    embed,
    embed_arrays,
    eval_Y,
    eval_Y_cos,
    harmonic_indices,
    index_set,
    kernel_K,
    multiplicity,
)

__all__ = [
    "PowerSpectrum",
    "FieldRealization",
    "FoldingMatrix",
    "SampleSize",
    "v_fold",
    "lambda_matrix",
    "fold_spectrum",
    "covariance",
    "replica_seed",
    "synthesize_field",
    "sample_field",
    "aliased_coeffs",
    "reconstruct",
    "estimate_spectrum",
    "monte_carlo_spectrum",
    "check_sample_size",
    "matrix_to_dict",
    "matrix_from_dict",
    "matrix_to_csv",
    "spectrum_to_csv",
]


@dataclass(frozen=True)
class PowerSpectrum:
    """C_0, ..., C_L; degrees past the end are zero when ``band_limit`` is set."""

    values: tuple
    band_limit: Optional[int] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError("power spectrum values must be finite and non-negative")
        object.__setattr__(self, "values", vals)
        if self.band_limit is not None:
            if self.band_limit < 0:
                raise ValueError("band_limit must be >= 0")
            if any(v != 0.0 for v in vals[self.band_limit + 1:]):
                raise ValueError("nonzero values above band_limit")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, ell):
        if ell < len(self.values):
            return self.values[ell]
        if self.band_limit is not None:
            return 0.0
        raise IndexError(f"spectrum has no value for degree {ell}")

    def covers(self, ell):
        return ell < len(self.values) or self.band_limit is not None


@dataclass(frozen=True)
class FieldRealization:
    d: int
    L0: int
    coefficients: dict = field(repr=False)
    seed: object = None

    def __post_init__(self):
        expected = sum(multiplicity(ell, self.d) for ell in range(self.L0 + 1))
        if len(self.coefficients) != expected:
            raise ValueError(f"expected {expected} coefficients, got {len(self.coefficients)}")

    def __call__(self, x):
        """Evaluate the field at a SpherePoint."""
        return sum(a * eval_Y(idx, x) for idx, a in self.coefficients.items())

    def evaluate(self, theta, phi):
        """Evaluate at arrays of polar angles (N, d-1) and azimuths (N,)."""
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        out = np.zeros(theta.shape[0], dtype=complex)
        for idx, a in self.coefficients.items():
            if a != 0:
                out += a * eval_Y(idx, theta, phi)
        return out


@dataclass(frozen=True)
class FoldingMatrix:
    """Lambda_ell(ell + 2 s_0) for ell <= ell_max and -ell//2 <= s_0 <= s0_max."""

    ell_max: int
    s0_max: int
    rows: tuple  # rows[ell] = tuple of (ell_target, lambda)
    Q: tuple = ()
    M: int = 0

    def row(self, ell):
        return dict(self.rows[ell])

    def entry(self, ell, ell_target):
        return self.row(ell).get(ell_target, 0.0)


def v_fold(src, s0, design, rule="exact"):
    """Sum of squared intensities over all index tuples at this s_0.

    The identity tuple contributes its own squared intensity, which is 1
    only inside the exactness range of the design.
    """
    sets = alias_index_sets(src, design.Q, design.M, s0, rule)
    total = 0.0
    for z in sets.Z:
        total += eta(src, s0, z.s + (z.r * design.M,), design) ** 2
    return total


def lambda_matrix(ell_max, s0_max, design, rule="exact"):
    """Folding matrix averaged over the orders at each degree."""
    if ell_max < 0 or s0_max < 0:
        raise ValueError("ell_max and s0_max must be >= 0")
    rows = []
    for ell in range(ell_max + 1):
        indices = index_set(ell, design.d)
        entries = []
        for s0 in range(-(ell // 2), s0_max + 1):
            value = sum(v_fold(src, s0, design, rule) for src in indices) / len(indices)
            entries.append((ell + 2 * s0, value))
        rows.append(tuple(entries))
    return FoldingMatrix(ell_max, s0_max, tuple(rows), tuple(design.Q), design.M)


def fold_spectrum(matrix, C):
    """Folded spectrum: sum over s_0 of Lambda_ell(ell + 2 s_0) C_{ell + 2 s_0}."""
    needed = matrix.ell_max + 2 * matrix.s0_max
    if not C.covers(needed):
        raise ValueError(
            f"spectrum covers degrees 0..{len(C) - 1}, folding needs up to {needed}"
        )
    out = []
    for row in matrix.rows:
        out.append(sum(lam * C[target] for target, lam in row))
    return PowerSpectrum(tuple(out))


def covariance(C, x, y, d=None):
    """Isotropic covariance sum_ell C_ell K_ell(x, y)."""
    if isinstance(x, SpherePoint):
        d = x.d
        x = embed(x)
    if isinstance(y, SpherePoint):
        y = embed(y)
    if C.band_limit is not None:
        top = min(C.band_limit, len(C) - 1)
    else:
        top = len(C) - 1
    total = 0.0
    for ell in range(top + 1):
        if C[ell] != 0.0:
            total = total + C[ell] * kernel_K(ell, x, y, d)
    return total


def replica_seed(master, k):
    """Child seed k of ``master``; identical to SeedSequence(master).spawn(...)[k]."""
    return np.random.SeedSequence(entropy=master, spawn_key=(k,))


def synthesize_field(C, L0, d, seed):
    """Band-limited complex Gaussian field with per-coefficient variance C_ell."""
    if L0 < 0:
        raise ValueError("L0 must be >= 0")
    if not C.covers(L0):
        raise ValueError(f"spectrum does not cover degree {L0}")
    rng = np.random.default_rng(seed)
    indices = harmonic_indices(L0, d)
    z = rng.standard_normal((len(indices), 2))
    coeffs = {}
    for i, idx in enumerate(indices):
        scale = math.sqrt(C[idx.ell] / 2.0)
        coeffs[idx] = complex(scale * z[i, 0], scale * z[i, 1])
    return FieldRealization(d, L0, coeffs, seed)


def _basis(design, indices):
    return np.array([_Y_on_design(design, idx) for idx in indices])


def sample_field(field, design):
    """Field values at the flattened design points."""
    if field.d != design.d:
        raise ValueError(f"field is on S^{field.d}, design on S^{design.d}")
    indices = list(field.coefficients)
    a = np.array([field.coefficients[i] for i in indices])
    return a @ _basis(design, indices)


def aliased_coeffs(samples, design, ell_max):
    """Quadrature estimates sum_i w_i T(x_i) conj(Y(x_i)) f(theta_i) for ell <= ell_max."""
    flat = flatten(design)
    samples = np.asarray(samples)
    if samples.shape != (flat.size,):
        raise ValueError(f"expected {flat.size} samples, got shape {samples.shape}")
    indices = harmonic_indices(ell_max, design.d)
    values = np.conj(_basis(design, indices)) @ (flat.weights * flat.f * samples)
    return dict(zip(indices, values))


def reconstruct(samples, design, L, x):
    """Band-limited interpolation from design samples with the projection kernels.

    ``x`` is a SpherePoint or an (n, d+1) array of unit vectors.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    flat = flatten(design)
    samples = np.asarray(samples)
    if samples.shape != (flat.size,):
        raise ValueError(f"expected {flat.size} samples, got shape {samples.shape}")
    single = isinstance(x, SpherePoint)
    xs = embed(x)[None, :] if single else np.atleast_2d(np.asarray(x, dtype=float))
    nodes = design._cache.get("embedded")
    if nodes is None:
        nodes = embed_arrays(flat.theta, flat.phi)
        design._cache["embedded"] = nodes
    inner = xs @ nodes.T
    kern = sum(kernel_K(ell, inner[..., None], np.ones(1), design.d) for ell in range(L + 1))
    out = kern @ (flat.weights * flat.f * samples)
    return complex(out[0]) if single else out


def estimate_spectrum(coeffs, d):
    """Per-degree mean of |a_{ell,m}|^2 over the orders (known zero mean)."""
    sums, counts = {}, {}
    for idx, a in coeffs.items():
        if idx.d != d:
            raise ValueError(f"index {idx} is not for d={d}")
        sums[idx.ell] = sums.get(idx.ell, 0.0) + abs(a) ** 2
        counts[idx.ell] = counts.get(idx.ell, 0) + 1
    if not sums:
        return np.zeros(0)
    top = max(sums)
    out = np.zeros(top + 1)
    for ell in range(top + 1):
        n = multiplicity(ell, d)
        if counts.get(ell, 0) != n:
            raise ValueError(f"degree {ell} has {counts.get(ell, 0)} of {n} coefficients")
        out[ell] = sums[ell] / n
    return out


def monte_carlo_spectrum(C, L0, design, ell_max, replicas, seed):
    """Mean and standard error of the estimated spectrum over seeded replicas.

    Replica k uses ``replica_seed(seed, k)``, so results do not depend on
    evaluation order.
    """
    estimates = np.empty((replicas, ell_max + 1))
    for k in range(replicas):
        fld = synthesize_field(C, L0, design.d, replica_seed(seed, k))
        coeffs = aliased_coeffs(sample_field(fld, design), design, ell_max)
        estimates[k] = estimate_spectrum(coeffs, design.d)
    mean = estimates.mean(axis=0)
    stderr = estimates.std(axis=0, ddof=1) / math.sqrt(replicas)
    return mean, stderr


class SampleSize(NamedTuple):
    Q: tuple
    M: int
    N: int
    bound: int


def check_sample_size(L0, d):
    """Smallest uniform design with Q_j = M = L0 + 1, checked against N >= 2 L0^d."""
    if L0 < 1:
        raise ValueError("L0 must be >= 1")
    if d < 2:
        raise ValueError("d must be >= 2")
    Q = (L0 + 1,) * (d - 1)
    M = L0 + 1
    N = 2 * M * (L0 + 1) ** (d - 1)
    bound = 2 * L0**d
    assert N >= bound
    return SampleSize(Q, M, N, bound)


def sample_size_design(L0, d):
    size = check_sample_size(L0, d)
    return uniform_design(d, list(size.Q), size.M)


# ---------------------------------------------------------------------------
# serialization


def matrix_to_dict(matrix):
    return {
        "ell_max": matrix.ell_max,
        "s0_max": matrix.s0_max,
        "rows": [
            {"ell": ell, "entries": [{"ell_target": t, "lambda": v} for t, v in row]}
            for ell, row in enumerate(matrix.rows)
        ],
    }


def matrix_from_dict(obj):
    rows = tuple(
        tuple((e["ell_target"], e["lambda"]) for e in r["entries"])
        for r in sorted(obj["rows"], key=lambda r: r["ell"])
    )
    return FoldingMatrix(obj["ell_max"], obj["s0_max"], rows)


def matrix_to_csv(matrix):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ell", "ell_target", "lambda"])
    for ell, row in enumerate(matrix.rows):
        for t, v in row:
            writer.writerow([ell, t, repr(v)])
    return buf.getvalue()


def spectrum_to_csv(C, name="C"):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ell", name])
    for ell, v in enumerate(C.values):
        writer.writerow([ell, repr(v)])
    return buf.getvalue()


def spectrum_to_json(C):
    return json.dumps({"values": list(C.values), "band_limit": C.band_limit})


def spectrum_from_json(text):
    obj = json.loads(text)
    if isinstance(obj, list):
        return PowerSpectrum(tuple(obj))
    return PowerSpectrum(tuple(obj["values"]), obj.get("band_limit"))
