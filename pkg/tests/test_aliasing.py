import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperalias.aliasing import (
    AliasRecord,
    alias_distance,
    alias_index_sets,
    alias_report,
    aliases_2d,
    brute_force_aliases,
    classify_location,
    compare_with_oracle,
    enumerate_aliases,
    eta,
    factor_I,
    factor_I_exact,
    factor_J,
    factor_J_sum,
    report_from_json,
    report_to_csv,
    report_to_json,
    tau_direct,
    tau_matrix,
    tau_separable,
    zeta_2d,
)
from hyperalias.design import uniform_design
from hyperalias.harmonics import HarmonicIndex, harmonic_indices, index_set
from hyperalias.specfun import norm_h

A000 = HarmonicIndex(0, (0, 0))


@pytest.fixture(scope="module")
def d221():
    return uniform_design(3, [2, 2], 1)


def test_tau_examples(d221):
    assert tau_direct(d221, A000, A000) == pytest.approx(1.0)
    assert abs(tau_direct(d221, A000, HarmonicIndex(2, (2, 2)))) > 0.1
    assert abs(tau_direct(d221, A000, HarmonicIndex(1, (0, 0)))) < 1e-12


def test_factor_J():
    assert factor_J(0, 0, 2) == 2 * math.pi
    assert factor_J(0, 2, 1) == 2 * math.pi
    assert factor_J(0, 2, 2) == 0.0
    for m in range(-4, 5):
        for mt in range(-9, 10):
            for M in (1, 2, 3):
                assert abs(factor_J_sum(m, mt, M) - factor_J(m, mt, M)) <= 1e-12


def test_factor_I_parity_and_closed_form():
    D = uniform_design(4, [6, 6, 6], 6)
    assert abs(factor_I(1, 3, 1, 2, 1, D)) < 1e-12
    for j, mp, m in ((1, 4, 2), (2, 3, 0), (3, 5, 5), (1, 0, 0)):
        got = factor_I(j, mp, m, mp, m, D)
        assert got == pytest.approx(factor_I_exact(j, mp, m, 4), rel=1e-12)
        assert norm_h(mp, m, j, 4) ** 2 * got == pytest.approx(1.0, rel=1e-12)
    assert abs(factor_I(1, 2, 1, 4, 1, D)) < 1e-12


def test_factorization_matches_direct():
    D = uniform_design(3, [4, 4], 2)
    rng = np.random.default_rng(0)
    idx = harmonic_indices(7, 3)
    for _ in range(50):
        a, b = (idx[i] for i in rng.integers(0, len(idx), 2))
        assert abs(tau_separable(D, a, b) - tau_direct(D, a, b)) <= 1e-10


def test_tau_matrix_matches_pairwise(d221):
    idx = harmonic_indices(2, 3)
    mat = tau_matrix(d221, idx, idx)
    assert mat[3, 5] == pytest.approx(tau_direct(d221, idx[3], idx[5]))


def test_index_sets_worked_examples():
    z = alias_index_sets(A000, [2, 2], 1, 1)
    assert z.s0_in_A0
    assert sorted(z.offsets()) == [((1,), -1), ((1,), 1)]
    z = alias_index_sets(A000, [2, 2], 1, 2)
    assert not z.s0_in_A0
    by_s1 = {}
    for s, r in z.offsets():
        by_s1.setdefault(s[0], []).append(r)
    assert sorted(by_s1[1]) == [-1, 1]
    assert sorted(by_s1[2]) == [-2, -1, 0, 1, 2]


def test_index_sets_reject_low_s0():
    with pytest.raises(ValueError):
        alias_index_sets(HarmonicIndex(3, (1, 0)), [3, 3], 2, -2)
    with pytest.raises(ValueError):
        alias_index_sets(A000, [2, 2], 1, 0, rule="bogus")


def test_index_sets_empty_when_forced_zero():
    z = alias_index_sets(A000, [4, 4], 4, 1)
    assert z.Z == ()


def test_eta_examples(d221):
    assert eta(A000, 0, (0, 0), d221) == pytest.approx(1.0)
    assert eta(A000, 1, (1, 1), d221) == pytest.approx(tau_direct(d221, A000, HarmonicIndex(2, (2, 2))).real, abs=1e-12)
    with pytest.raises(ValueError):
        eta(A000, 1, (2, 0), d221)


def test_eta_prefactor_closed_form():
    # h_{0,0;1} h_{2s0,2s1;1} h_{0,0;2} h_{2s1,2s2;2} for a_{0,0,0} on S^3
    def eps(s0, s1, s2):
        a = math.factorial(2 * s0 - 2 * s1) * math.factorial(2 * s1 - 2 * s2) * (2 * s0 + 1) * (4 * s1 + 1)
        b = math.factorial(2 * s0 + 2 * s1 + 1) * math.factorial(2 * s1 + 2 * s2)
        return math.sqrt(a / b) * 2 ** (2 * (s1 - s2)) * math.factorial(2 * s1) * math.factorial(4 * s2) / (math.pi * math.factorial(2 * s2))

    def ours(s0, s1, s2):
        return norm_h(0, 0, 1, 3) * norm_h(2 * s0, 2 * s1, 1, 3) * norm_h(0, 0, 2, 3) * norm_h(2 * s1, 2 * s2, 2, 3)

    # the printed closed form uses m_2 = 2 s_2 >= 0 with its own normalization; check the
    # ratio is constant in s_0 at fixed (s_1, s_2), which isolates the s_0 dependence
    for s1, s2 in ((0, 0), (1, 0), (1, 1), (2, 1)):
        ratios = [ours(s0, s1, s2) / eps(s0, s1, s2) for s0 in range(s1, s1 + 4)]
        assert max(ratios) == pytest.approx(min(ratios), rel=1e-12)


def test_enumerate_examples():
    D = uniform_design(3, [2, 2], 1)
    got = {str(r.target) for r in enumerate_aliases(A000, D, 1)}
    assert got == {"a_{2,2,-2}", "a_{2,2,2}"}
    assert enumerate_aliases(A000, uniform_design(3, [4, 4], 2), 1) == []
    assert enumerate_aliases(A000, uniform_design(3, [4, 4], 4), 3) == []


def test_enumerate_sorted_and_consistent(d221):
    recs = enumerate_aliases(HarmonicIndex(2, (1, -1)), d221, 3)
    keys = [(r.s0, r.s, r.r) for r in recs]
    assert keys == sorted(keys)
    for r in recs:
        chain = r.source.chain
        assert r.target.ell == r.source.ell + 2 * r.s0
        assert r.target.orders[-1] == chain[-1] + 2 * r.r * 1
        assert r.intensity != 0


@pytest.mark.parametrize("Q", [[2, 2], [4, 4]])
@pytest.mark.parametrize("M", [1, 2, 4])
def test_oracle_equivalence(Q, M):
    D = uniform_design(3, Q, M)
    for src in harmonic_indices(2, 3):
        res = compare_with_oracle(src, D, (10 - src.ell) // 2)
        assert res["missing"] == [] and res["extra"] == []
        assert res["max_intensity_error"] <= 1e-8


def test_literal_rule_misses_aliases(d221):
    res = compare_with_oracle(A000, d221, 4, rule="literal")
    missing = {str(t) for t in res["missing"]}
    assert {"a_{4,0,0}", "a_{6,0,0}"} <= missing


def test_oracle_equivalence_d4():
    D = uniform_design(4, [2, 3, 2], 2)
    for src in (HarmonicIndex(0, (0, 0, 0)), HarmonicIndex(1, (1, 1, -1)), HarmonicIndex(2, (1, 0, 0))):
        res = compare_with_oracle(src, D, 2)
        assert res["missing"] == [] and res["extra"] == []


def test_parity_and_azimuth_annihilation(d221):
    D = uniform_design(3, [3, 3], 2)
    idx = harmonic_indices(6, 3)
    mat = tau_matrix(D, idx, idx)
    for i, a in enumerate(idx):
        for k, b in enumerate(idx):
            odd = any((x - y) % 2 for x, y in zip(a.chain, b.chain))
            fold = (a.orders[-1] - b.orders[-1]) % (2 * D.M) != 0
            if odd or fold:
                assert abs(mat[i, k]) <= 1e-12


def test_classification(d221):
    recs = {str(r.target): r for r in enumerate_aliases(A000, d221, 2)}
    assert classify_location(recs["a_{2,2,2}"], [2, 2], 1) == "secondary"
    assert classify_location(recs["a_{4,4,4}"], [2, 2], 1) == "primary"


def test_distance():
    rec = AliasRecord(A000, HarmonicIndex(2, (2, 2)), 1, (1,), 1, 1.0, 0.0, "")
    assert alias_distance(rec) == pytest.approx(2 * math.sqrt(3))
    same = AliasRecord(A000, A000, 0, (0,), 0, 1.0, 0.0, "")
    assert alias_distance(same) == 0.0


def test_zeta_2d():
    assert zeta_2d(0, 0) == pytest.approx(1 / math.sqrt(2))


def test_aliases_2d_empty_and_agreement():
    # with r forced nonzero and 2M > 2 s_max no azimuth order is reachable
    assert aliases_2d(0, 0, 3, 3, 2) == []
    # M > ell alone is not enough: with M = 1 the orders +-2 are reached at s = 1
    assert {str(r.target) for r in aliases_2d(0, 0, 3, 1, 1)} == {"a_{2,-2}", "a_{2,2}"}
    rng = np.random.default_rng(11)
    for _ in range(20):
        ell = int(rng.integers(0, 8))
        m = int(rng.integers(-ell, ell + 1))
        Q, M, s = int(rng.integers(1, 7)), int(rng.integers(1, 7)), int(rng.integers(0, 5))
        a = {r.target: r.intensity for r in aliases_2d(ell, m, Q, M, s)}
        b = {r.target: r.intensity for r in enumerate_aliases(HarmonicIndex(ell, (m,)), uniform_design(2, [Q], M), s)}
        assert set(a) == set(b)
        for t in a:
            assert a[t] == pytest.approx(b[t], abs=1e-10)


def test_brute_force_excludes_source(d221):
    found = brute_force_aliases(A000, d221, 4)
    assert A000 not in found
    assert HarmonicIndex(2, (2, 2)) in found


def test_report_round_trip(d221):
    recs = enumerate_aliases(A000, d221, 2)
    rep = alias_report(A000, d221, 2, recs)
    assert report_from_json(report_to_json(rep)) == rep
    assert rep["s0_max"] == 2
    lines = report_to_csv(rep).strip().splitlines()
    assert lines[0].split(",")[-2:] == ["distance", "class"]
    assert len(lines) == len(recs) + 1


@settings(max_examples=25, deadline=None)
@given(ell=st.integers(0, 4), M=st.integers(1, 3), q=st.integers(1, 4))
def test_symmetric_in_r_when_last_order_zero(ell, M, q):
    D = uniform_design(3, [q, q], M)
    src = HarmonicIndex(ell, (ell % 2, 0))
    recs = enumerate_aliases(src, D, 2)
    keys = {(r.s0, r.s, r.r): r.intensity for r in recs}
    for (s0, s, r), v in keys.items():
        assert keys.get((s0, s, -r)) == pytest.approx(v, abs=1e-12)


def test_distances_exceed_two_for_constant_source(d221):
    recs = enumerate_aliases(A000, d221, 4)
    assert min(r.distance for r in recs) > 2


LARGE_M_CASES = [([2, 2], 3), ([4, 4], 5), ([3, 2], 4), ([5, 3], 7)]


def test_large_M_every_alias_primary():
    """Q_0 >= ... >= Q_{d-2} and M > Q_0 should leave only primary aliases."""
    secondary = []
    for Q, M in LARGE_M_CASES:
        D = uniform_design(3, Q, M)
        for src in harmonic_indices(2, 3):
            secondary += [
                (str(src), str(r.target), tuple(Q), M)
                for r in enumerate_aliases(src, D, 4)
                if r.location == "secondary"
            ]
    assert secondary == [], f"{len(secondary)} secondary aliases, e.g. {secondary[:3]}"


def test_large_M_counterexamples_have_zero_azimuth_offset():
    for Q, M in LARGE_M_CASES:
        D = uniform_design(3, Q, M)
        for src in harmonic_indices(2, 3):
            for r in enumerate_aliases(src, D, 4):
                if r.location == "secondary":
                    assert r.r == 0
