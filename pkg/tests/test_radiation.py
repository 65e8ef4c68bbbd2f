import math

import numpy as np
import pytest

from focklimit.fock import commutator, occupation_subspace
from focklimit.radiation import photon_mode, polarization_pair


def completeness_defect(k):
    e1, e2 = polarization_pair(k)
    khat = k / np.linalg.norm(k)
    return np.abs(np.outer(e1, e1) + np.outer(e2, e2) - (np.eye(3) - np.outer(khat, khat))).max()


def test_polarization_completeness_random():
    rng = np.random.default_rng(5)
    ks = rng.normal(size=(200, 3)) * rng.uniform(1e-3, 1e3, size=(200, 1))
    assert max(completeness_defect(k) for k in ks) < 1e-13


@pytest.mark.parametrize("k", [[0, 0, 1], [0, 0, -3], [1, 0, 0], [1, 1, 1], [1e-8, 0, 1]])
def test_polarization_frame(k):
    k = np.asarray(k, dtype=float)
    e1, e2 = polarization_pair(k)
    assert abs(e1 @ k) < 1e-15 * np.linalg.norm(k) + 1e-15
    assert abs(e2 @ k) < 1e-15 * np.linalg.norm(k) + 1e-15
    assert abs(e1 @ e2) < 1e-15
    assert np.linalg.norm(e1) == pytest.approx(1.0) and np.linalg.norm(e2) == pytest.approx(1.0)
    assert completeness_defect(k) < 1e-13


def test_polarization_undefined_at_zero():
    with pytest.raises(ValueError):
        polarization_pair(np.zeros(3))


def test_mode_order():
    assert photon_mode(0, 0) == 0 and photon_mode(3, 1) == 7


def test_fields_hermitian_and_local_commutation(d1):
    rad = d1.radiation
    for a in range(len(d1.spatial_grid)):
        for j in range(3):
            assert rad.A_at_nodes[a][j].hermiticity_defect() == 0.0
            assert rad.Pi_at_nodes[a][j].hermiticity_defect() == 0.0
    # photons along z: no z-polarization, so A^3 = Pi^3 = 0
    assert rad.A_at_nodes[0][2].max_abs() == 0.0
    # [A^j(x), A^l(y)] vanishes exactly even with truncation (both are a + a^dag of real-phase sums)
    low = d1.basis.boson
    for j in range(2):
        c = commutator(rad.A_at_nodes[0][j], rad.A_at_nodes[1][j])
        mask = np.flatnonzero(occupation_subspace(low, low.n_max - 1))
        assert np.abs(c.matrix[:, mask].toarray()).max() < 1e-15


def test_h_rad_spectrum(d1):
    diag = d1.radiation.H_rad.matrix.diagonal().real
    occ = d1.basis.boson.occupations()
    assert np.array_equal(diag, occ.sum(axis=1) * 1.0)  # |k| = 1 at both nodes


def test_bound_constants_d1(d1):
    M = d1.radiation_bounds.M
    # two nodes, |chi| = omega = 1, |eps^j_r| in {0, 1}
    scale = math.sqrt(2.0) / math.sqrt(2.0 * (2 * math.pi) ** 3)
    eps_abs = np.abs(d1.radiation.eps[0])  # (r, j), same at both nodes up to sign
    for l in range(4):
        assert np.allclose(M[l], scale * eps_abs.T)
