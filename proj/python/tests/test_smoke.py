import cmath
import math

import numpy as np
import pytest

import zrs


def two_point():
    return zrs.ScattererSet([[0, 0, 0], [1, 0, 0]], [1.0, -0.5])


def test_free_green():
    assert zrs.free_green(-1, 1.0) == pytest.approx(math.exp(-1) / (4 * math.pi), rel=1e-14)
    k = cmath.sqrt(2j)
    assert zrs.free_green(2j, 0.7) == pytest.approx(cmath.exp(1j * k * 0.7) / (4 * math.pi * 0.7))


def test_scatterers_and_errors():
    s = two_point()
    assert len(s) == 2
    assert np.allclose(s.points[1], [1, 0, 0])
    with pytest.raises(zrs.DuplicatePoint):
        zrs.ScattererSet([[0, 0, 0], [0, 0, 0]], [1.0, 1.0])
    with pytest.raises(zrs.BadParams):
        zrs.ScattererSet.from_json('{"points": [[0, 0, 0]]}')
    assert issubclass(zrs.SingularSchurComplement, zrs.SingularMatrix)
    assert issubclass(zrs.TailNotContractive, zrs.Error)


def test_from_json_family():
    s = zrs.ScattererSet.from_json('{"family": {"kind": "clustering", "params": {"p": 2, "q": 6}, "n": 8}}')
    assert len(s) == 8
    report = zrs.admissibility(s)
    assert report["verdict"]["pass"] is True


def test_gram_is_imag_q():
    s = two_point()
    lam = 3.0
    q = zrs.q_matrix_boundary(lam, s)
    k = math.sqrt(lam)
    g = np.array([[k, math.sin(k)], [math.sin(k), k]]) / (4 * math.pi)
    assert np.abs(q.imag - g).max() < 1e-15
    assert np.abs(zrs.gram_matrix(lam, s) - g).max() < 1e-15


def test_smatrix_unitary_on_grid():
    s = two_point()
    rep = zrs.smatrix(4.0, s)
    assert rep.unitarity_defect_reduced() < 1e-12
    grid = zrs.SphereGrid("gauss-legendre-product", 24)
    assert len(grid) == 24 * 48
    assert sum(grid.weights) == pytest.approx(4 * math.pi)
    f = np.exp(1j * np.array(grid.theta))
    sf = rep.apply(grid, f)
    w = np.array(grid.weights)
    assert math.sqrt(np.sum(w * abs(sf) ** 2)) == pytest.approx(math.sqrt(np.sum(w * abs(f) ** 2)), rel=1e-10)


def test_schur_matches_direct():
    s = zrs.ScattererSet([[0, 0, 0], [3, 0, 0], [0, 3, 0]], [1.0, 200.0, -300.0])
    direct = zrs.gamma(s, 2.0)
    schur = zrs.gamma_schur(s, 2.0, 1, 4.0)
    assert np.abs(direct - schur).max() < 1e-12 * np.abs(direct).max()
    with pytest.raises(zrs.TailNotContractive):
        zrs.gamma_schur(zrs.ScattererSet([[0, 0, 0], [1, 0, 0]], [1.0, 1e-3]), 2.0, 1, 4.0)


def test_resolvent_identities():
    s = two_point()
    assert zrs.hilbert_identity_residual(1 + 1j, -2 + 0.5j, s) < 1e-12
    assert zrs.symmetry_residual(1j, s) < 1e-14
    assert max(zrs.boundary_condition_residual(1j, s, [3.0, 0.5, 0.25])) < 1e-5
    k = zrs.resolvent_kernel(1j, s)
    x, y = np.array([0.3, 0.4, 2.0]), np.array([-1.0, 0.2, 0.1])
    assert k(x, y) == pytest.approx(k(y, x), rel=1e-13)


def test_omega():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    ups = a @ a.conj().T + 0.1 * np.eye(4)
    lam = (a + a.conj().T) / 2
    om = zrs.omega_unitary(ups, lam)
    assert np.abs(om.conj().T @ ups @ om - ups).max() < 1e-11
