import numpy as np
import pytest

from condsic.csic import (
    Povm,
    UnderdeterminedSchemeError,
    build_from_difference_set,
    canonical_dual,
    certify_csic,
    comparison_povm,
    complete,
    diagonal_povm,
    dual_coords,
    dual_cost,
    estimated_part,
    frame_superoperator,
    overlap_target,
    reconstruction_deviation,
    shift_unitary,
    sic_from_fiducial,
    spectral_deviation,
    tetrahedral_sic,
    theoretical_risk,
)
from condsic.diffset import DifferenceSet, planar_set
from condsic.matspace import Scheme, build_basis, pseudo_inverse, superop_eigen
from condsic.tomo import probabilities, reconstruct

from conftest import random_density


@pytest.fixture(scope="module")
def csic3():
    return build_from_difference_set(DifferenceSet(7, (0, 1, 3)), 3)


def gram(P):
    Pn = P.normalized
    return np.einsum("aij,bji->ab", Pn, Pn).real


def test_povm_validation():
    with pytest.raises(ValueError):
        Povm(np.array([np.eye(2) / 3] * 2))
    with pytest.raises(ValueError):
        Povm(np.array([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])]))
    P = Povm(np.array([np.eye(2) / 2] * 2))
    np.testing.assert_allclose(P.weights, [1, 1])


def test_qubit_construction():
    P = build_from_difference_set(DifferenceSet(3, (0, 1)), 2)
    assert P.N == 3
    G = gram(P)
    off = ~np.eye(3, dtype=bool)
    np.testing.assert_allclose(G[off], 1 / 4, atol=1e-14)
    np.testing.assert_allclose(P.normalized.sum(0), 1.5 * np.eye(2), atol=1e-14)
    # |<e_j, U^k phi>|^2 = 1/n
    np.testing.assert_allclose(np.einsum("kjj->kj", P.normalized).real, 1 / 2, atol=1e-15)


def test_qutrit_construction(csic3):
    G = gram(csic3)
    np.testing.assert_allclose(G[~np.eye(7, dtype=bool)], 2 / 9, atol=1e-14)
    np.testing.assert_allclose(csic3.normalized.sum(0), 7 / 3 * np.eye(3), atol=1e-14)
    np.testing.assert_allclose(np.einsum("kjj->kj", csic3.normalized).real, 1 / 3, atol=1e-15)


def test_construction_errors():
    with pytest.raises(ValueError):
        build_from_difference_set(DifferenceSet(7, (0, 1, 3)), 4)
    qr = DifferenceSet(11, (1, 3, 4, 5, 9), 2)
    with pytest.raises(ValueError):
        build_from_difference_set(qr, 5)
    with pytest.raises(TypeError):
        build_from_difference_set([0, 1, 3], 3)


def test_shift_covariance(csic3):
    D = DifferenceSet(7, (0, 1, 3))
    U = shift_unitary(D)
    P = csic3.normalized
    for k in range(7):
        np.testing.assert_allclose(U @ P[k] @ U.conj().T, P[(k + 1) % 7], atol=1e-14)
    G = gram(csic3)
    for i in range(7):
        for j in range(7):
            assert G[i, j] == pytest.approx(G[0, (j - i) % 7], abs=1e-14)


@pytest.mark.parametrize("n", range(2, 11))
def test_diagonal_povm(n):
    P = diagonal_povm(n)
    np.testing.assert_allclose(P.weights, 1)
    cert = certify_csic(P, Scheme.offdiagonal(n))
    assert cert.overlap_target == 0
    assert cert.passed


def test_certificate_examples(csic3):
    assert certify_csic(csic3, Scheme.diagonal(3)).passed
    sic = tetrahedral_sic()
    cert = certify_csic(sic, Scheme.full(2))
    assert cert.overlap_target == pytest.approx(1 / 3)
    assert cert.passed
    bad = certify_csic(Povm(np.array([np.eye(2) / 2] * 2)), Scheme.full(2))
    assert not bad.passed
    assert not bad.parameter_count_ok
    assert bad.rank1_deviation == pytest.approx(0.5)
    # wrong scheme: diagonal csic is not orthogonal to the off-diagonal part
    wrong = certify_csic(csic3, Scheme(3, (3,)))
    assert not wrong.passed


def test_weyl_heisenberg_qubit_sic():
    # qubit fiducial pointing along (1,1,1)/sqrt3
    theta = np.arccos(1 / np.sqrt(3))
    psi = [np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)]
    assert certify_csic(sic_from_fiducial(psi), Scheme.full(2)).passed


def test_frame_superoperator_spectra(csic3):
    w, V = superop_eigen(frame_superoperator(csic3))
    np.testing.assert_allclose(w, [1] + [1 / 3] * 6 + [0, 0], atol=1e-12)
    w, _ = superop_eigen(frame_superoperator(diagonal_povm(2)))
    np.testing.assert_allclose(w, [1, 1, 0, 0], atol=1e-14)
    # independent hand matrix for the qubit diagonal POVM
    np.testing.assert_allclose(frame_superoperator(diagonal_povm(2)).matrix,
                               np.diag([1, 1, 0, 0]), atol=1e-15)


def test_frame_superoperator_generic(rng):
    b = build_basis(3)
    for _ in range(20):
        P = random_povm(3, 6, rng)
        F = frame_superoperator(P, b)
        np.testing.assert_allclose(F.matrix[:, 0], np.eye(9)[0], atol=1e-12)
        assert F.trace() <= 3 + 1e-9


def random_povm(n, N, rng):
    G = rng.normal(size=(N, n, n)) + 1j * rng.normal(size=(N, n, n))
    E = np.einsum("kij,klj->kil", G, G.conj())
    return complete(E)


def test_spectral_condition_iff_certificate(rng):
    cases = [
        (build_from_difference_set(planar_set(n)), Scheme.diagonal(n)) for n in (2, 3, 4, 5)
    ]
    cases += [(tetrahedral_sic(), Scheme.full(2))]
    cases += [(diagonal_povm(n), Scheme.offdiagonal(n)) for n in (2, 3, 4)]
    cases += [(comparison_povm(planar_set(3), 0.2, rng), Scheme.diagonal(3))]
    cases += [(random_povm(3, 7, rng), Scheme.diagonal(3)) for _ in range(10)]
    cases += [(random_povm(2, 4, rng), Scheme.full(2)) for _ in range(10)]
    # a csic certified against the wrong scheme
    cases += [(build_from_difference_set(planar_set(3)), Scheme(3, (3, 4)))]
    verdicts = []
    for P, s in cases:
        spectral = spectral_deviation(P, s) < 1e-9
        cert = certify_csic(P, s).passed
        assert spectral == cert
        verdicts.append(cert)
    assert any(verdicts) and not all(verdicts)


def test_canonical_dual_diagonal():
    P = diagonal_povm(2)
    R = canonical_dual(P, Scheme.offdiagonal(2))
    np.testing.assert_allclose(R.elements, P.elements, atol=1e-14)
    assert reconstruction_deviation(P, R) < 1e-13


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_canonical_dual_cost(n):
    P = build_from_difference_set(planar_set(n))
    s = Scheme.diagonal(n)
    b = build_basis(n)
    R = canonical_dual(P, s, b)
    N = P.N
    expected = 1 + (N - 1) ** 2 / (n - 1)
    # oracle: numpy's pseudo-inverse trace of the same frame superoperator
    F = frame_superoperator(P, b).matrix
    assert np.trace(np.linalg.pinv(F, rcond=1e-10, hermitian=True)) == pytest.approx(expected)
    assert dual_cost(P, R, b) == pytest.approx(expected, rel=1e-12)
    assert reconstruction_deviation(P, R, b) < 1e-12
    # sum_i lambda_i |R_i><R_i| = F^-
    r = dual_coords(R, b)
    Finv = pseudo_inverse(frame_superoperator(P, b)).matrix
    np.testing.assert_allclose(np.einsum("i,ia,ib->ab", P.weights, r, r), Finv, atol=1e-10)


def test_qubit_dual_cost_is_five():
    P = build_from_difference_set(planar_set(2))
    assert dual_cost(P, canonical_dual(P, Scheme.diagonal(2))) == pytest.approx(5)


def test_canonical_dual_underdetermined():
    with pytest.raises(UnderdeterminedSchemeError):
        canonical_dual(diagonal_povm(2), Scheme.full(2))


def test_theoretical_risk_examples():
    P = build_from_difference_set(planar_set(2))
    s = Scheme.diagonal(2)
    R = canonical_dual(P, s)
    # (1/2) * 5 - Tr (I/2)^2
    assert theoretical_risk(P, R, np.eye(2) / 2, s) == pytest.approx(2)
    D = diagonal_povm(2)
    s2 = Scheme.offdiagonal(2)
    rho = np.diag([1.0, 0.0])
    # (1/2)(1 + 1) - Tr diag(1,0)^2
    assert theoretical_risk(D, canonical_dual(D, s2), rho, s2) == pytest.approx(0, abs=1e-14)


def test_theoretical_risk_nonnegative(rng):
    for n in (2, 3, 4):
        P = build_from_difference_set(planar_set(n))
        s = Scheme.diagonal(n)
        R = canonical_dual(P, s)
        for _ in range(30):
            rho = random_density(n, rng, rank=1)
            assert theoretical_risk(P, R, rho, s) >= -1e-9


def test_dual_optimality(rng):
    """Any Q = R + Z with sum_i lambda_i |R_i><Z_i| = 0 costs at least as much as R."""
    P = build_from_difference_set(planar_set(3))
    s = Scheme.diagonal(3)
    b = build_basis(3)
    R = canonical_dual(P, s, b)
    r = dual_coords(R, b)
    lam = P.weights
    base = dual_cost(P, R, b)
    # projector onto {Z : r^T diag(lam) Z = 0}, column by column
    L = np.diag(lam)
    proj = np.eye(P.N) - r @ np.linalg.pinv(r.T @ L @ r) @ r.T @ L
    for _ in range(100):
        Z = proj @ rng.normal(size=r.shape)
        assert np.max(np.abs(r.T @ L @ Z)) < 1e-10
        q = r + Z
        cost = float(np.dot(lam, np.einsum("ia,ia->i", q, q)))
        assert cost >= base - 1e-10
        assert cost - base == pytest.approx(float(np.dot(lam, np.einsum("ia,ia->i", Z, Z))))
    assert float(np.dot(lam, np.einsum("ia,ia->i", r, r))) == pytest.approx(base)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exact_linear_reconstruction(n, rng):
    P = build_from_difference_set(planar_set(n))
    s = Scheme.diagonal(n)
    b = build_basis(n)
    R = canonical_dual(P, s, b)
    for _ in range(100):
        rho = random_density(n, rng)
        est = reconstruct(probabilities(rho, P), R)
        assert np.linalg.norm(est - estimated_part(rho, s, b)) < 1e-9


def test_comparison_povm_is_valid_and_worse(rng):
    D = planar_set(3)
    s = Scheme.diagonal(3)
    Q = comparison_povm(D, 0.3, rng)
    cert = certify_csic(Q, s)
    assert cert.parameter_count_ok and cert.orthogonality_deviation < 1e-12
    assert cert.sum_deviation < 1e-12
    assert not cert.passed
    P = build_from_difference_set(D)
    assert dual_cost(Q, canonical_dual(Q, s)) > dual_cost(P, canonical_dual(P, s))


def test_overlap_target_special_cases():
    assert overlap_target(3, 9) == pytest.approx(1 / 4)  # SIC: 1/(n+1)
    assert overlap_target(3, 3) == 0  # diagonal matrix units
    assert overlap_target(4, 13) == pytest.approx(3 / 16)  # (n-1)/n^2
