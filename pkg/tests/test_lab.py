import numpy as np
import pytest
import scipy.linalg as la

from focklimit.lab import (
    ConvergenceTable,
    SolverError,
    SuiteReport,
    SweepRow,
    bound_suite,
    convergence_sweep,
    default_test_vectors,
    dressed_split,
    dressing_unitary,
    evolve,
    fermion_basis_vectors,
    identity_suite,
    resolvent_apply,
    Resolvent,
    thread_count,
)


@pytest.fixture(scope="module")
def psi(d1):
    rng = np.random.default_rng(3)
    v = rng.normal(size=d1.basis.dim) + 1j * rng.normal(size=d1.basis.dim)
    return v / np.linalg.norm(v)


def test_resolvent_round_trip_dense_and_iterative(d1, psi):
    H = d1.H_scaled(1.0)
    z = 0.3 + 1j
    r_dense = resolvent_apply(H, z, psi)
    r_iter = resolvent_apply(H, z, psi, dense_threshold=0)
    shifted = H.toarray() - z * np.eye(d1.basis.dim)
    for r in (r_dense, r_iter):
        assert np.linalg.norm(shifted @ r - psi) <= 1e-10
    assert np.linalg.norm(r_dense - r_iter) < 1e-9


def test_resolvent_rejects_real_z(d1, psi):
    with pytest.raises(ValueError, match="non-real"):
        resolvent_apply(d1.H_scaled(1.0), 2.0, psi)


def test_resolvent_reports_nonconvergence(d1, psi):
    with pytest.raises(SolverError) as info:
        Resolvent(d1.H_scaled(64.0), 1j, tol=1e-30, dense_threshold=0).apply(psi)
    assert info.value.residual > 1e-30


def test_dressing_unitary_matches_spectral_oracle(d1):
    T = d1.hamiltonians.T.toarray()
    U = dressing_unitary(d1.hamiltonians.T, 0.37).toarray()
    w, V = la.eigh(T)
    assert np.abs(U - (V * np.exp(0.37j * w)) @ V.conj().T).max() < 1e-12
    assert np.abs(U.conj().T @ U - np.eye(len(U))).max() < 1e-11


def test_dressed_split(d1):
    H0, K_lam, transformed = dressed_split(d1, 4.0)
    assert np.abs(H0.toarray() + K_lam.toarray() - transformed).max() <= 1e-11
    assert K_lam.hermiticity_defect() < 1e-13
    far = np.linalg.norm(dressed_split(d1, 16.0)[1].toarray() - d1.K().toarray(), 2)
    near = np.linalg.norm(K_lam.toarray() - d1.K().toarray(), 2)
    assert far < near
    with pytest.raises(ValueError):
        dressed_split(d1, -1.0)


def test_evolve_paths_agree_and_are_unitary(d1, psi):
    H = d1.H_scaled(2.0)
    a = evolve(H, 0.8, psi)
    b = evolve(H, 0.8, psi, dense_threshold=0)
    assert np.linalg.norm(a - b) < 1e-9
    assert abs(np.linalg.norm(a) - 1.0) < 1e-11
    block = evolve(H, 0.8, np.stack([psi, 2 * psi], axis=1))
    assert np.linalg.norm(block[:, 0] - a) < 1e-13 and np.linalg.norm(block[:, 1] - 2 * a) < 1e-12
    assert np.array_equal(evolve(H, 0.0, psi), psi)


def test_sweep_uncoupled_vacuum_sector_exact(d1):
    table = convergence_sweep(d1, lambdas=[1.0, 8.0], e=0.0)
    for vid in ("vacuum", "vac_random"):
        assert np.all(table.series(vid)[1] == 0.0)
    lam, err = table.series("one_photon")
    assert np.allclose(err, 1 / np.abs(lam**2 - 1j), rtol=1e-9)


def test_sweep_threads_deterministic(d1, monkeypatch):
    one = convergence_sweep(d1, lambdas=[1.0, 2.0, 4.0], threads=1)
    monkeypatch.setenv("FOCKLIMIT_THREADS", "3")
    assert thread_count(1) == 3
    three = convergence_sweep(d1, lambdas=[1.0, 2.0, 4.0])
    key = lambda t: [(r.lam, r.vector_id, r.error, r.residual) for r in t.rows]
    assert key(one) == key(three)
    monkeypatch.setenv("FOCKLIMIT_THREADS", "junk")
    assert thread_count(2) == 2


def test_test_vectors(d1):
    vecs = default_test_vectors(d1)
    assert list(vecs) == ["vacuum", "vac_random", "one_photon", "random_full"]
    for v in vecs.values():
        assert v.shape == (1296,) and abs(np.linalg.norm(v) - 1) < 1e-14
    again = default_test_vectors(d1)
    assert all(np.array_equal(vecs[k], again[k]) for k in vecs)
    basis_vecs = fermion_basis_vectors(d1)
    assert len(basis_vecs) == 16 and "occ_1000" in basis_vecs


def test_table_helpers():
    rows = [SweepRow(lam, "x", err, 0.0, 0.0) for lam, err in [(1, 1.0), (2, 1.04), (4, 0.5), (8, 0.04)]]
    rows += [SweepRow(lam, "y", err, 0.0, 0.0) for lam, err in [(1, 1.0), (2, 1.2), (4, 0.01), (8, 0.001)]]
    t = ConvergenceTable(rows)
    assert t.decrease_ok() == {"x": True, "y": False}
    assert t.rate("x") < 0
    assert t.to_records()[0] == {"lambda": 1, "vector_id": "x", "error": 1.0, "residual": 0.0, "seconds": 0.0}


def test_suite_report_logic():
    rep = SuiteReport("demo")
    rep.add_equality("eq", 1e-15, 1e-14)
    rep.add_inequality("ineq", [1.0, 2.0], [1.0, 3.0])
    assert rep.passed and rep["ineq"].deviation == 0.0
    rep.add_inequality("bad", [1.1], [1.0])
    assert not rep.passed
    d = rep.to_dict()
    assert d["passed"] is False and [c["name"] for c in d["checks"]] == ["eq", "ineq", "bad"]


def test_identity_and_bound_suites_pass(d1):
    ids = identity_suite(d1)
    assert ids.passed, [c for c in ids.checks if not c.passed]
    assert ids["pi_pi"].restriction == "occupation <= 0"
    bounds = bound_suite(d1)
    assert bounds.passed, [c for c in bounds.checks if not c.passed]
    assert {c.name for c in bounds.checks} >= {
        "fermion_ladder_norm", "psi_norm", "a_relative", "a_dag_relative", "A_relative", "Pi_relative",
        "H_I_relative", "longitudinal_norm", "H_dirac_J_commutator", "rho_rho_J_commutator",
        "kernel_uniform"}
