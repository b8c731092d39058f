"""Aliasing function, alias index sets, alias enumeration and classification.

Two enumeration rules are available:

``"exact"`` (default)
    Index sets as in the closed-form alias formula, except that a zero offset
    s_j = 0 (or r = 0) is only excluded below an exactly-integrated coordinate
    when the preceding offset s_{j-1} is itself nonzero, and no monotonicity
    constraint on the offsets is imposed. This reproduces the brute-force
    aliasing function.
``"literal"``
    Zero offsets are excluded below every
    exactly-integrated coordinate and s_1 >= ... >= s_{d-1} is enforced.
    Kept for comparison; it misses genuine aliases.
"""
import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .design import flatten
from .harmonics import HarmonicIndex, eval_Y_cos, harmonic_indices
from .specfun import gegenbauer_eval, norm_h

__all__ = [
    "RULES",
    "ZERO_TOL",
    "ORACLE_TOL",
    "AliasRecord",
    "AliasIndexSets",
    "tau_direct",
    "tau_matrix",
    "gram_deviation",
    "factor_J",
    "factor_J_sum",
    "factor_I",
    "factor_I_exact",
    "tau_separable",
    "d0_min",
    "a_range",
    "b_range",
    "h_range",
    "r_range",
    "delta_range",
    "alias_index_sets",
    "target_index",
    "eta",
    "enumerate_aliases",
    "classify_location",
    "location_columns",
    "alias_distance",
    "zeta_2d",
    "aliases_2d",
    "brute_force_aliases",
    "compare_with_oracle",
    "alias_report",
    "report_to_json",
    "report_from_json",
    "report_to_csv",
]

RULES = ("exact", "literal")
ZERO_TOL = 1e-12
ORACLE_TOL = 1e-8


# ---------------------------------------------------------------------------
# aliasing function: direct and factorized


def _Y_on_design(design, index):
    cache = design._cache.setdefault("Y", {})
    values = cache.get(index)
    if values is None:
        flat = flatten(design)
        values = eval_Y_cos(index, flat.cos_theta, flat.phi)
        values.flags.writeable = False
        cache[index] = values
    return values


def tau_direct(design, src, tgt):
    """sum_i w_i Y_tgt(x_i) conj(Y_src(x_i)) f(theta_i) over the flattened design."""
    flat = flatten(design)
    y_s = _Y_on_design(design, src)
    y_t = _Y_on_design(design, tgt)
    return complex(np.sum(flat.weights * flat.f * y_t * np.conj(y_s)))


def tau_matrix(design, sources, targets):
    """tau for every (source, target) pair; rows follow ``sources``."""
    flat = flatten(design)
    ys = np.array([_Y_on_design(design, i) for i in sources])
    yt = np.array([_Y_on_design(design, i) for i in targets])
    return (np.conj(ys) * (flat.weights * flat.f)) @ yt.T


def factor_J(m_last, m_last_t, M):
    """Azimuth factor in closed form: 2 pi if the orders agree modulo 2M, else 0."""
    return 2.0 * math.pi if (m_last_t - m_last) % (2 * M) == 0 else 0.0


def factor_J_sum(m_last, m_last_t, M):
    """Azimuth factor as the literal 2M-term trapezoidal sum."""
    q = np.arange(2 * M)
    return complex(np.sum(math.pi / M * np.exp(1j * (m_last_t - m_last) * q * math.pi / M)))


def factor_I(j, m_prev, m, m_prev_t, m_t, design):
    """Polar factor of coordinate j: weighted sum of the two Gegenbauer profiles."""
    m, m_t = abs(m), abs(m_t)
    key = (j, m_prev, m, m_prev_t, m_t)
    cache = design._cache.setdefault("I", {})
    if key in cache:
        return cache[key]
    if key[3:] + key[1:3] in cache:
        return cache[(j, m_prev_t, m_t, m_prev, m)]
    d = design.d
    a = 0.5 * (d - j)
    t = design.nodes[j - 1]
    sin = design.sin_theta(j)
    c = gegenbauer_eval(m_prev - m, t, m + a)
    c_t = gegenbauer_eval(m_prev_t - m_t, t, m_t + a)
    value = float(np.sum(design.w_theta[j - 1] * sin ** (m + m_t + d - j) * c * c_t))
    cache[key] = value
    return value


def factor_I_exact(j, m_prev, m, d):
    """Continuous value of the diagonal polar factor (Gegenbauer orthogonality)."""
    a = 0.5 * (d - j)
    log_v = (
        math.log(math.pi)
        + (1.0 - 2.0 * (m + a)) * math.log(2.0)
        + math.lgamma(m_prev + m + d - j)
        - math.lgamma(m_prev - m + 1)
        - math.log(m_prev + a)
        - 2.0 * math.lgamma(m + a)
    )
    return math.exp(log_v)


def _polar_product(design, src, tgt):
    d = design.d
    a, b = src.chain, tgt.chain
    value = 1.0
    for j in range(1, d):
        value *= (
            norm_h(a[j - 1], abs(a[j]), j, d)
            * norm_h(b[j - 1], abs(b[j]), j, d)
            * factor_I(j, a[j - 1], a[j], b[j - 1], b[j], design)
        )
        if value == 0.0:
            break
    return value


def tau_separable(design, src, tgt):
    """Aliasing function as the product of normalizers, polar factors and the azimuth factor."""
    J = factor_J_sum(src.orders[-1], tgt.orders[-1], design.M)
    if factor_J(src.orders[-1], tgt.orders[-1], design.M) == 0.0:
        return 0j
    return _polar_product(design, src, tgt) * J / (2.0 * math.pi)


def gram_deviation(design, max_sum):
    """Largest |tau(src, tgt) - delta| over all pairs with ell + ell' <= max_sum."""
    indices = harmonic_indices(max_sum, design.d)
    degrees = np.array([i.ell for i in indices])
    gram = tau_matrix(design, indices, indices)
    gram[np.diag_indices_from(gram)] -= 1.0
    mask = degrees[:, None] + degrees[None, :] <= max_sum
    return float(np.max(np.abs(gram[mask])))


# ---------------------------------------------------------------------------
# index sets


def d0_min(ell):
    """Smallest s_0 with s_0 >= -ell/2."""
    return -(ell // 2)


def a_range(m_j, Q_j, upper):
    """A_j: offsets with -m_j/2 <= s_j <= min(Q_j - m_j - 1, upper)."""
    lo = -(m_j // 2)
    hi = min(Q_j - m_j - 1, upper) if b_range(m_j, Q_j, upper) else upper
    return range(lo, hi + 1)


def b_range(m_j, Q_j, upper):
    """B_j: Q_j - m_j <= s_j <= upper (empty when Q_j - m_j > upper)."""
    return range(max(Q_j - m_j, -(m_j // 2)), upper + 1)


def h_range(m_j, target_prev):
    """H_j: -m_j/2 <= s_j <= (target_prev - m_j)/2, target_prev = m_{j-1} + 2 s_{j-1}."""
    return range(-(m_j // 2), (target_prev - m_j) // 2 + 1)


def r_range(m_last, target_prev, M):
    """R^M: -(t + m_last)/(2M) <= r <= (t - m_last)/(2M), t = m_{d-2} + 2 s_{d-2}."""
    lo = -((target_prev + m_last) // (2 * M))
    hi = (target_prev - m_last) // (2 * M)
    return range(lo, hi + 1)


def _drop_zero(prev_exact, s_prev, rule):
    if not prev_exact:
        return False
    return rule == "literal" or s_prev != 0


def delta_range(m_j, target_prev, prev_exact, s_prev, rule="exact"):
    """Delta_j: H_j, without the null offset when the previous coordinate is exact."""
    values = h_range(m_j, target_prev)
    if _drop_zero(prev_exact, s_prev, rule):
        return [s for s in values if s != 0]
    return list(values)


def delta_last(m_last, target_prev, M, prev_exact, s_prev, rule="exact"):
    """Delta_{d-1}: admissible r (azimuth offset r M)."""
    values = r_range(m_last, target_prev, M)
    if _drop_zero(prev_exact, s_prev, rule):
        return [r for r in values if r != 0]
    return list(values)


@dataclass(frozen=True)
class ZTuple:
    s: tuple  # (s_1, ..., s_{d-2})
    r: int
    in_B: tuple  # membership of s_0, ..., s_{d-2} in the B sets


@dataclass(frozen=True)
class AliasIndexSets:
    """Resolved index sets for one source and one value of s_0."""

    source: HarmonicIndex
    Q: tuple
    M: int
    s0: int
    rule: str
    d0_min: int
    A0: range
    B0_start: int
    s0_in_A0: bool
    Z: tuple  # of ZTuple

    def offsets(self):
        return [(z.s, z.r) for z in self.Z]


def alias_index_sets(src, Q, M, s0, rule="exact"):
    """Enumerate the admissible (s_1, ..., s_{d-2}, r) for a given s_0."""
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    chain = src.chain
    d = src.d
    Q = tuple(Q)
    if len(Q) != d - 1:
        raise ValueError(f"need {d - 1} polar node counts, got {len(Q)}")
    ell = src.ell
    if s0 < d0_min(ell):
        raise ValueError(f"s0={s0} below the lower bound -ell/2 for ell={ell}")
    s0_in_A0 = s0 <= Q[0] - ell - 1
    out = []

    def walk(j, s_prev, prev_exact, s_acc, in_B):
        target_prev = chain[j - 1] + 2 * s_prev
        if j == d - 1:
            for r in delta_last(chain[d - 1], target_prev, M, prev_exact, s_prev, rule):
                if rule == "literal":
                    seq = s_acc + (r * M,)
                    if any(x < y for x, y in zip(seq, seq[1:])):
                        continue
                out.append(ZTuple(s_acc, r, in_B))
            return
        m_j = chain[j]
        for s_j in delta_range(m_j, target_prev, prev_exact, s_prev, rule):
            exact_j = s_j <= Q[j] - m_j - 1
            walk(j + 1, s_j, exact_j, s_acc + (s_j,), in_B + (not exact_j,))

    walk(1, s0, s0_in_A0, (), (not s0_in_A0,))
    return AliasIndexSets(
        source=src,
        Q=Q,
        M=M,
        s0=s0,
        rule=rule,
        d0_min=d0_min(ell),
        A0=range(d0_min(ell), Q[0] - ell),
        B0_start=Q[0] - ell,
        s0_in_A0=s0_in_A0,
        Z=tuple(out),
    )


def target_index(src, s0, s, r, M):
    """Index (ell + 2 s_0, m + 2 s) with the last offset r M."""
    chain = src.chain
    orders = [chain[j] + 2 * s[j - 1] for j in range(1, src.d - 1)]
    orders.append(chain[-1] + 2 * r * M)
    return HarmonicIndex(src.ell + 2 * s0, tuple(orders))


def eta(src, s0, s, design):
    """Alias intensity for full offsets s = (s_1, ..., s_{d-1}).

    The aliasing function with the azimuth factor set to 2 pi; the last
    offset must be a multiple of M for the target to be an alias.
    """
    s = tuple(s)
    if len(s) != src.d - 1:
        raise ValueError(f"expected {src.d - 1} offsets, got {len(s)}")
    chain = src.chain
    orders = tuple(chain[j] + 2 * s[j - 1] for j in range(1, src.d))
    tgt = HarmonicIndex(src.ell + 2 * s0, orders)
    return _polar_product(design, src, tgt)


# ---------------------------------------------------------------------------
# alias records


@dataclass(frozen=True)
class AliasRecord:
    source: HarmonicIndex
    target: HarmonicIndex
    s0: int
    s: tuple
    r: int
    intensity: float
    distance: float
    location: str

    @property
    def offsets(self):
        return (self.s0,) + self.s + (self.r,)


def alias_distance(record, M=None):
    """Euclidean distance between source and target harmonic numbers."""
    a, b = record.source.chain, record.target.chain
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def classify_location(record, Q, M=None):
    """'primary' if every s_j lies in B_j (j = 0..d-2), else 'secondary'."""
    chain = record.source.chain
    offsets = (record.s0,) + tuple(record.s)
    for j, s_j in enumerate(offsets):
        if s_j < Q[j] - chain[j]:
            return "secondary"
    return "primary"


def location_columns(record, Q):
    """Column label such as 'B_0,A_1' giving the A/B membership of s_0..s_{d-2}."""
    chain = record.source.chain
    offsets = (record.s0,) + tuple(record.s)
    return ",".join(
        ("B" if s_j >= Q[j] - chain[j] else "A") + f"_{j}" for j, s_j in enumerate(offsets)
    )


def enumerate_aliases(src, design, s0_max, rule="exact", zero_tol=ZERO_TOL, s0_min=None):
    """All aliases of ``src`` with s_0 <= s0_max, sorted by (s_0, s, r).

    Records with |intensity| <= zero_tol are dropped; the source itself is
    never reported.
    """
    if s0_max < 0:
        raise ValueError("s0_max must be >= 0")
    if src.d != design.d:
        raise ValueError(f"source is for d={src.d}, design for d={design.d}")
    start = d0_min(src.ell) if s0_min is None else max(s0_min, d0_min(src.ell))
    records = []
    for s0 in range(start, s0_max + 1):
        sets = alias_index_sets(src, design.Q, design.M, s0, rule)
        for z in sets.Z:
            if s0 == 0 and z.r == 0 and not any(z.s):
                continue
            full = z.s + (z.r * design.M,)
            value = eta(src, s0, full, design)
            if abs(value) <= zero_tol:
                continue
            tgt = target_index(src, s0, z.s, z.r, design.M)
            rec = AliasRecord(src, tgt, s0, z.s, z.r, value, 0.0, "")
            rec = AliasRecord(
                src, tgt, s0, z.s, z.r, value,
                alias_distance(rec), classify_location(rec, design.Q),
            )
            records.append(rec)
    records.sort(key=lambda rec: (rec.s0, rec.s, rec.r))
    return records


def fold_terms(src, design, s0, rule="exact"):
    """(target, eta) for every tuple of Z at s_0, the source itself included."""
    sets = alias_index_sets(src, design.Q, design.M, s0, rule)
    out = []
    for z in sets.Z:
        value = eta(src, s0, z.s + (z.r * design.M,), design)
        out.append((target_index(src, s0, z.s, z.r, design.M), value))
    return out


# ---------------------------------------------------------------------------
# the two-sphere formula, computed with Legendre functions


def zeta_2d(ell, m):
    """Normalizer of the associated Legendre function P_ell^|m| on S^2."""
    m = abs(m)
    return math.sqrt((2 * ell + 1) / 2.0 * math.exp(math.lgamma(ell - m + 1) - math.lgamma(ell + m + 1)))


def aliases_2d(ell, m, Q, M, s_max, zero_tol=ZERO_TOL):
    """Aliases of a_{ell,m} on S^2 from the Legendre double-sum formula.

    Gauss-Legendre nodes, scipy's associated Legendre functions and the
    zeta normalizers are used, independently of the hyperspherical path.
    The r = 0 term is excluded for s in the exact range (s <= Q - ell - 1,
    s != 0) and allowed for s >= Q - ell.
    """
    from numpy.polynomial.legendre import leggauss
    from scipy.special import lpmv

    if abs(m) > ell:
        raise ValueError("need |m| <= ell")
    t, w = leggauss(Q)

    def p(n, k):
        return lpmv(abs(k), n, t)

    src = HarmonicIndex(ell, (m,))
    out = []
    for s in range(-(ell // 2), s_max + 1):
        ell_t = ell + 2 * s
        exact = s <= Q - ell - 1
        for r in r_range(m, ell_t, M):
            if r == 0 and (s == 0 or exact):
                continue
            m_t = m + 2 * r * M
            value = zeta_2d(ell, m) * zeta_2d(ell_t, m_t) * float(np.sum(w * p(ell, m) * p(ell_t, m_t)))
            if abs(value) <= zero_tol:
                continue
            tgt = HarmonicIndex(ell_t, (m_t,))
            rec = AliasRecord(src, tgt, s, (), r, value, 0.0, "")
            out.append(
                AliasRecord(src, tgt, s, (), r, value, alias_distance(rec), classify_location(rec, (Q,)))
            )
    return out


# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_aliases(src, design, ell_max, tol=ORACLE_TOL):
    """{target: tau} for every target with degree <= ell_max and |tau| > tol."""
    targets = [t for t in harmonic_indices(ell_max, design.d) if t != src]
    values = tau_matrix(design, [src], targets)[0]
    return {t: v for t, v in zip(targets, values) if abs(v) > tol}


def compare_with_oracle(src, design, s0_max, rule="exact", tol=ORACLE_TOL):
    """Set and intensity comparison of the enumeration against brute force.

    Returns a dict with the missing and extra targets and the largest
    intensity mismatch over the common targets.
    """
    ell_max = src.ell + 2 * s0_max
    records = enumerate_aliases(src, design, s0_max, rule)
    enumerated = {rec.target: rec.intensity for rec in records if abs(rec.intensity) > tol}
    oracle = brute_force_aliases(src, design, ell_max, tol)
    common = set(enumerated) & set(oracle)
    err = max((abs(enumerated[t] - oracle[t]) for t in common), default=0.0)
    return {
        "missing": sorted(set(oracle) - set(enumerated)),
        "extra": sorted(set(enumerated) - set(oracle)),
        "max_intensity_error": err,
        "n_oracle": len(oracle),
        "n_enumerated": len(enumerated),
    }


# ---------------------------------------------------------------------------
# report serialization


def alias_report(src, design, s0_max, records, rule="exact"):
    from .design import design_to_dict

    return {
        "source": {"ell": src.ell, "m": list(src.orders)},
        "design": design_to_dict(design),
        "s0_max": s0_max,
        "rule": rule,
        "aliases": [
            {
                "ell": rec.target.ell,
                "m": list(rec.target.orders),
                "s0": rec.s0,
                "s": list(rec.s),
                "r": rec.r,
                "intensity": rec.intensity,
                "distance": rec.distance,
                "class": rec.location,
            }
            for rec in records
        ],
    }


def report_to_json(report, **kwargs):
    return json.dumps(report, **kwargs)


def report_from_json(text):
    return json.loads(text)


CSV_COLUMNS = ["ell", "m", "s0", "s", "r", "intensity", "distance", "class"]


def report_to_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for a in report["aliases"]:
        writer.writerow(
            [
                a["ell"],
                " ".join(str(v) for v in a["m"]),
                a["s0"],
                " ".join(str(v) for v in a["s"]),
                a["r"],
                repr(a["intensity"]),
                repr(a["distance"]),
                a["class"],
            ]
        )
    return buf.getvalue()
