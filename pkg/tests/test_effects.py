import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coex import effects as eff
from coex import exemplars as ex
from coex import hermitian as hm
from coex.effects import Effect

from helpers import rand_effect, rand_hermitian, rand_unit


# ------------------------------------------------------------------ validation

def test_validate_half_identity():
    E = eff.validate_effect(np.eye(3) / 2)
    assert E.dim == 3
    np.testing.assert_allclose(E.matrix, np.eye(3) / 2)


def test_validate_rejects_oversized_eigenvalue():
    with pytest.raises(eff.SpectrumOutOfRange) as exc:
        eff.validate_effect(np.diag([1.5, 0.0]))
    assert exc.value.witness == pytest.approx(1.5, abs=1e-12)


def test_validate_rejects_negative_eigenvalue():
    with pytest.raises(eff.SpectrumOutOfRange) as exc:
        eff.validate_effect(np.diag([-0.25, 0.5]))
    assert exc.value.witness == pytest.approx(-0.25, abs=1e-12)


def test_validate_boundary_projection_like():
    v = np.array([0.0, 0.0, 1.0])
    E = eff.validate_effect(ex.qubit_effect(1, v).matrix)
    np.testing.assert_allclose(sorted(hm.eigvalsh(E.matrix)), [0.0, 1.0], atol=1e-14)


def test_validate_rejects_nonfinite():
    with pytest.raises(ValueError):
        eff.validate_effect(np.array([[np.nan, 0], [0, 0.5]]))


# ------------------------------------------------------------------ complement

def test_complement_examples():
    Id = eff.validate_effect(np.eye(2))
    np.testing.assert_allclose(eff.complement(Id).matrix, np.zeros((2, 2)))
    half = eff.validate_effect(np.eye(2) / 2)
    np.testing.assert_allclose(eff.complement(half).matrix, np.eye(2) / 2)
    E = ex.qubit_effect(0.8, (0.1, 0.2, 0.3))
    expected = ex.qubit_effect(2 - 0.8, (-0.1, -0.2, -0.3)).matrix
    np.testing.assert_allclose(eff.complement(E).matrix, expected, atol=1e-15)


def test_complement_involution():
    # 1 - (1 - x) is exact off the diagonal and for diagonal entries >= 1/2
    # (Sterbenz); below 1/2 the complement may be unrepresentable, leaving at
    # most half an ulp of 1 on the way back
    rng = np.random.default_rng(41)
    for d in (2, 3, 5):
        E = rand_effect(rng, d)
        back = eff.complement(eff.complement(E)).matrix
        diff = back - E.matrix
        assert np.all(np.abs(diff) <= 2.0**-53)
        off = ~np.eye(d, dtype=bool)
        assert np.array_equal(back[off], E.matrix[off])
    half = eff.validate_effect(np.eye(2) / 2)
    assert np.array_equal(eff.complement(eff.complement(half)).matrix, half.matrix)


# ----------------------------------------------------------------------- order

def test_leq_below_identity():
    rng = np.random.default_rng(43)
    Id = eff.validate_effect(np.eye(4))
    for _ in range(10):
        assert eff.leq(rand_effect(rng, 4), Id)


def test_leq_incomparable_pair():
    half = eff.validate_effect(np.eye(2) / 2)
    proj = eff.validate_effect(np.diag([1.0, 0.0]))
    assert not eff.leq(half, proj)
    assert not eff.leq(proj, half)


def test_leq_noisy_pair_inequality():
    # (tF + (1-t)I)^perp <= tE + (1-t)I for t <= 1/2
    rng = np.random.default_rng(47)
    for t in (0.1, 0.3, 0.5):
        E, F = rand_effect(rng, 3), rand_effect(rng, 3)
        En, Fn = ex.noisy_pair(E, F, t)
        assert eff.leq(eff.complement(Fn), En)


def test_leq_dimension_mismatch():
    with pytest.raises(hm.DimensionMismatch):
        eff.leq(eff.validate_effect(np.eye(2) / 2), eff.validate_effect(np.eye(3) / 2))


# -------------------------------------------------------------- jordan product

def test_jordan_commuting_diagonal():
    E = eff.validate_effect(np.diag([0.2, 0.7]))
    F = eff.validate_effect(np.diag([0.5, 0.9]))
    np.testing.assert_allclose(eff.jordan_product(E, F), E.matrix @ F.matrix, atol=0)


def test_jordan_rank_one_spectrum():
    rng = np.random.default_rng(53)
    for r in (0.2, 0.5, 0.8):
        psi = np.zeros(3, dtype=complex); psi[0] = 1
        phi = np.array([r, math.sqrt(1 - r * r), 0.0], dtype=complex)
        E, F = ex.rank_one_pair(psi, phi, 0.5, 0.5)
        w = hm.eigvalsh(eff.jordan_product(E, F))
        nonzero = sorted(x for x in w if abs(x) > 1e-13)
        assert nonzero == pytest.approx([r * (r - 1) / 8, r * (1 + r) / 8], abs=1e-14)


def test_jordan_mub_boundary_dimension_two():
    E, F = ex.mub_pair(2, math.sqrt(2) / 2)
    assert hm.min_eigenvalue(eff.jordan_product(E, F)) == pytest.approx(0.0, abs=1e-9)


def test_jordan_symmetric_and_bilinear():
    rng = np.random.default_rng(59)
    for _ in range(20):
        E, F, G = (rand_effect(rng, 3) for _ in range(3))
        J1 = eff.jordan_product(E, F)
        J2 = eff.jordan_product(F, E)
        assert hm.frobenius(J1 - J2) <= 1e-12
        s = 0.3
        mix = Effect(s * F.matrix + (1 - s) * G.matrix)
        lhs = eff.jordan_product(E, mix)
        rhs = s * eff.jordan_product(E, F) + (1 - s) * eff.jordan_product(E, G)
        assert hm.frobenius(lhs - rhs) <= 1e-12


def test_jordan_marginal_identities():
    rng = np.random.default_rng(61)
    for d in (2, 4):
        E, F = rand_effect(rng, d), rand_effect(rng, d)
        Ec, Fc = eff.complement(E), eff.complement(F)
        assert hm.frobenius(eff.jordan_product(E, F) + eff.jordan_product(E, Fc)
                            - E.matrix) <= 1e-12
        total = (eff.jordan_product(E, F) + eff.jordan_product(E, Fc)
                 + eff.jordan_product(Ec, F) + eff.jordan_product(Ec, Fc))
        assert hm.frobenius(total - np.eye(d)) <= 1e-12


# --------------------------------------------------------- generalized infimum

def test_ginf_idempotent():
    rng = np.random.default_rng(67)
    E = rand_effect(rng, 4)
    np.testing.assert_allclose(eff.generalized_infimum(E, E), E.matrix, atol=1e-13)


def test_ginf_of_comparable_pair_is_smaller():
    rng = np.random.default_rng(71)
    for _ in range(10):
        E = rand_effect(rng, 3)
        t = rng.uniform(0, 1)
        F = Effect(E.matrix + t * (np.eye(3) - E.matrix))  # E <= F
        np.testing.assert_allclose(eff.generalized_infimum(E, F), E.matrix, atol=1e-12)


def test_ginf_unbiased_qubit_minimum_eigenvalue():
    rng = np.random.default_rng(73)
    for _ in range(50):
        e = rng.normal(size=3); e *= rng.uniform() / np.linalg.norm(e)
        f = rng.normal(size=3); f *= rng.uniform() / np.linalg.norm(f)
        E, F = ex.qubit_effect(1, e), ex.qubit_effect(1, f)
        target = (2 - np.linalg.norm(e - f) - np.linalg.norm(e + f)) / 4
        got = hm.min_eigenvalue(eff.generalized_infimum(E, F))
        assert got == pytest.approx(target, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=8))
def test_ginf_symmetric_and_below(seed, dim):
    rng = np.random.default_rng(seed)
    E, F = rand_effect(rng, dim), rand_effect(rng, dim)
    G1 = eff.generalized_infimum(E, F)
    G2 = eff.generalized_infimum(F, E)
    assert hm.frobenius(G1 - G2) <= 1e-12
    assert hm.min_eigenvalue(E.matrix - G1) >= -1e-10
    assert hm.min_eigenvalue(F.matrix - G1) >= -1e-10


# ------------------------------------------------------------------ projectors

def test_range_projector_examples():
    E = eff.validate_effect(np.diag([0.5, 0.0]))
    np.testing.assert_allclose(eff.range_projector(E), np.diag([1.0, 0.0]), atol=1e-14)
    rng = np.random.default_rng(79)
    inv = rand_effect(rng, 3, min_eig=1e-3)
    np.testing.assert_allclose(eff.range_projector(inv), np.eye(3), atol=1e-12)
    psi = rand_unit(rng, 4)
    E1 = Effect(0.37 * np.outer(psi, psi.conj()))
    np.testing.assert_allclose(eff.range_projector(E1), np.outer(psi, psi.conj()),
                               atol=1e-12)


def test_intersection_projector_examples():
    rng = np.random.default_rng(83)
    psi = rand_unit(rng, 3)
    P = np.outer(psi, psi.conj())
    np.testing.assert_allclose(eff.intersection_projector(P, P), P, atol=1e-12)
    zero = np.diag([1.0, 0.0]).astype(complex)
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    Q = np.outer(plus, plus.conj())
    np.testing.assert_allclose(eff.intersection_projector(zero, Q),
                               np.zeros((2, 2)), atol=1e-12)


def test_intersection_projector_rank_one_inside_range():
    # P_{E,F} = |psi><psi| when E = e|psi><psi| and psi lies in ran(F)
    rng = np.random.default_rng(89)
    psi = rand_unit(rng, 3)
    E = Effect(0.6 * np.outer(psi, psi.conj()))
    F = rand_effect(rng, 3, min_eig=1e-3)  # full range
    P = eff.intersection_projector(eff.range_projector(E), eff.range_projector(F))
    np.testing.assert_allclose(P, np.outer(psi, psi.conj()), atol=1e-10)


def test_intersection_projector_rejects_non_projection():
    with pytest.raises(eff.NotAProjection):
        eff.intersection_projector(np.diag([0.5, 0.0]), np.eye(2))
    with pytest.raises(eff.NotAProjection):
        eff.intersection_projector(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2))


# ------------------------------------------------------------ shorted operator

def test_shorted_with_identity_is_identity_map():
    rng = np.random.default_rng(97)
    E = rand_effect(rng, 4)
    S = eff.infimum_with_projection(E, np.eye(4))
    np.testing.assert_allclose(S.matrix, E.matrix, atol=1e-12)


def test_shorted_commuting_case_is_compression():
    E = eff.validate_effect(np.diag([0.9, 0.4, 0.1]))
    P = np.diag([1.0, 1.0, 0.0]).astype(complex)
    S = eff.infimum_with_projection(E, P)
    np.testing.assert_allclose(S.matrix, np.diag([0.9, 0.4, 0.0]), atol=1e-12)


def test_shorted_rank_one_closed_form_and_bisection():
    rng = np.random.default_rng(101)
    for _ in range(5):
        E = rand_effect(rng, 3, min_eig=1e-2)
        psi = rand_unit(rng, 3)
        P = np.outer(psi, psi.conj())
        S = eff.infimum_with_projection(E, P)
        c_closed = 1.0 / float((psi.conj() @ np.linalg.inv(E.matrix) @ psi).real)
        c_got = float((psi.conj() @ S.matrix @ psi).real)
        assert c_got == pytest.approx(c_closed, rel=1e-9)
        # independent oracle: largest c with c|psi><psi| <= E, by bisection
        lo, hi = 0.0, 1.0
        for _ in range(52):
            mid = (lo + hi) / 2
            if hm.min_eigenvalue(E.matrix - mid * P) >= -1e-14:
                lo = mid
            else:
                hi = mid
        assert c_got == pytest.approx(lo, abs=1e-9)


def test_shorted_invariants_below_and_compressed():
    rng = np.random.default_rng(103)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        E = rand_effect(rng, d)
        k = int(rng.integers(1, d + 1))
        Q = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0][:, :k]
        P = hm.hermitize(Q @ Q.conj().T)
        S = eff.infimum_with_projection(E, P)
        assert hm.min_eigenvalue(E.matrix - S.matrix) >= -1e-9
        assert hm.min_eigenvalue(P - S.matrix) >= -1e-9
        np.testing.assert_allclose(P @ S.matrix @ P, S.matrix, atol=1e-10)


def test_shorted_maximality_probe():
    # no PSD bump supported in ran(P) can be added while staying below E
    rng = np.random.default_rng(107)
    E = rand_effect(rng, 3, min_eig=1e-2)
    Q = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0][:, :2]
    P = hm.hermitize(Q @ Q.conj().T)
    S = eff.infimum_with_projection(E, P)
    for _ in range(20):
        psi = Q @ rand_unit(rng, 2)
        D = np.outer(psi, psi.conj())
        lo, hi = 0.0, 1.0
        for _ in range(40):
            mid = (lo + hi) / 2
            if hm.min_eigenvalue(E.matrix - S.matrix - mid * D) >= -1e-12:
                lo = mid
            else:
                hi = mid
        assert lo <= 1e-5


def test_shorted_rejects_non_projection():
    E = eff.validate_effect(np.eye(2) / 2)
    with pytest.raises(eff.NotAProjection):
        eff.infimum_with_projection(E, np.diag([0.5, 0.0]))


# --------------------------------------------------------------------- infimum

def test_infimum_of_comparable_pair():
    rng = np.random.default_rng(109)
    E = rand_effect(rng, 3)
    F = Effect(E.matrix + 0.4 * (np.eye(3) - E.matrix))
    res = eff.infimum(E, F)
    assert res.kind == eff.EXISTS
    np.testing.assert_allclose(res.value.matrix, E.matrix, atol=1e-10)


def test_infimum_disjoint_ranges_is_zero():
    # rank-one E whose vector misses ran(F): the meet collapses to zero
    e1 = np.array([1.0, 0.0, 0.0], dtype=complex)
    E = Effect(0.8 * np.outer(e1, e1.conj()))
    F = eff.validate_effect(np.diag([0.0, 0.6, 0.3]))
    res = eff.infimum(E, F)
    assert res.kind == eff.EXISTS
    np.testing.assert_allclose(res.value.matrix, np.zeros((3, 3)), atol=1e-12)


def test_infimum_rank_one_inside_range():
    rng = np.random.default_rng(113)
    psi = rand_unit(rng, 3)
    E = Effect(0.7 * np.outer(psi, psi.conj()))
    F = rand_effect(rng, 3, min_eig=1e-2)
    res = eff.infimum(E, F)
    assert res.kind == eff.EXISTS
    c_f = 1.0 / float((psi.conj() @ np.linalg.inv(F.matrix) @ psi).real)
    target = min(0.7, c_f) * np.outer(psi, psi.conj())
    np.testing.assert_allclose(res.value.matrix, target, atol=1e-10)


def test_infimum_invertible_incomparable_pair_does_not_exist():
    rng = np.random.default_rng(127)
    found = 0
    while found < 10:
        E = rand_effect(rng, 2, min_eig=1e-2)
        F = rand_effect(rng, 2, min_eig=1e-2)
        if eff.leq(E, F) or eff.leq(F, E):
            continue
        res = eff.infimum(E, F)
        assert res.kind == eff.NOT_EXISTS
        assert res.value is None
        assert not res.e_below_f and not res.f_below_e
        found += 1


def test_infimum_diagnostics_always_populated():
    rng = np.random.default_rng(131)
    E, F = rand_effect(rng, 3), rand_effect(rng, 3)
    res = eff.infimum(E, F)
    assert isinstance(res.meet_e, Effect) and isinstance(res.meet_f, Effect)


def test_gudder_equality_when_both_sides_defined():
    # whenever the generalized infimum is PSD and the true infimum exists,
    # the two coincide
    rng = np.random.default_rng(137)
    checked = 0
    for _ in range(300):
        d = int(rng.integers(2, 4))
        if rng.uniform() < 0.5:
            E = rand_effect(rng, d)
            F = Effect(E.matrix + rng.uniform(0, 1) * (np.eye(d) - E.matrix))
        else:
            psi = rand_unit(rng, d)
            E = Effect(rng.uniform(0.05, 1) * np.outer(psi, psi.conj()))
            F = rand_effect(rng, d)
        G = eff.generalized_infimum(E, F)
        ok, _ = hm.is_psd(G, 1e-9)
        res = eff.infimum(E, F)
        if ok and res.kind == eff.EXISTS:
            assert hm.frobenius(res.value.matrix - G) <= 1e-8
            checked += 1
    assert checked >= 50


def test_projection_commutation_equivalence():
    # E ⊓ P is positive exactly when E and the projection P commute
    commuting = [
        (np.diag([0.3, 0.8]), np.diag([1.0, 0.0])),
        (np.diag([0.5, 0.5, 0.1]), np.diag([1.0, 1.0, 0.0])),
    ]
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    noncommuting = [
        (np.diag([0.7, 0.3]), np.outer(plus, plus.conj())),
        (np.diag([0.9, 0.2]), np.outer(plus, plus.conj())),
    ]
    for Em, Pm in commuting:
        E = eff.validate_effect(Em)
        P = eff.validate_effect(Pm)
        assert hm.commutator_norm(E.matrix, P.matrix) <= 1e-9
        ok, _ = hm.is_psd(eff.generalized_infimum(E, P), 1e-9)
        assert ok
    for Em, Pm in noncommuting:
        E = eff.validate_effect(Em)
        P = eff.validate_effect(Pm)
        assert hm.commutator_norm(E.matrix, P.matrix) > 1e-9
        ok, _ = hm.is_psd(eff.generalized_infimum(E, P), 1e-9)
        assert not ok


def test_projected_meet_coefficient_divergence_report(capsys):
    # the one-dimensional meet coefficient is 1/<psi|F^-1 psi>, which can sit
    # strictly below the compression value <psi|F psi>; report the spread
    rng = np.random.default_rng(139)
    worst = 0.0
    for _ in range(50):
        F = rand_effect(rng, 3, min_eig=1e-2)
        psi = rand_unit(rng, 3)
        P = np.outer(psi, psi.conj())
        S = eff.infimum_with_projection(eff.validate_effect(F.matrix), P)
        shorted_c = float((psi.conj() @ S.matrix @ psi).real)
        compression_c = float((psi.conj() @ F.matrix @ psi).real)
        assert shorted_c <= compression_c + 1e-10
        worst = max(worst, compression_c - shorted_c)
    print(f"\nmax divergence of meet coefficient from compression value: {worst:.6f}")
    assert worst > 1e-3  # the two notions genuinely differ
