from __future__ import annotations

import csv

import numpy as np
import pytest

from corpus import CORPUS, SMALL, reference_pst, reference_walk
from grover_pst import graph_core as gc
from grover_pst.exact_spectra import discriminant_spectrum, period, u_spectrum
from grover_pst.pst_engine import PstCertificate, analyze_pst
from grover_pst.sim_oracle import (
    _stepper,
    brute_force_pst,
    fidelity,
    fidelity_trace,
    minimal_hits,
    oracle_horizon,
    oracle_period,
    verify_certificates,
)
from grover_pst.walk_operators import build_walk


@pytest.fixture(scope="module")
def walks():
    return {name: build_walk(CORPUS[name]()) for name in CORPUS}


# --- fidelity -----------------------------------------------------------


@pytest.mark.parametrize("name", ["C4", "Petersen", "K1,3", "tadpole"])
def test_fidelity_at_time_zero(walks, name):
    w = walks[name]
    for u in range(w.vertex_count):
        assert fidelity(w, u, u, 0) == pytest.approx(1.0, abs=1e-12)


def test_c4_antipode_fidelity(walks):
    assert fidelity(walks["C4"], 0, 2, 2) >= 1 - 1e-9


def test_k3_fidelity_stays_low(walks):
    w = walks["K3"]
    for t in range(1, 49):
        assert fidelity(w, 0, 1, t) < 1 - 1e-6


def test_fidelity_is_not_squared(walks):
    # on C6 at t=1 the amplitude <Phi_1, U Phi_0> is 1/2, not 1/4
    assert fidelity(walks["C6"], 0, 1, 1) == pytest.approx(0.5, abs=1e-12)


# --- brute force --------------------------------------------------------


@pytest.mark.parametrize("name", SMALL)
def test_brute_force_matches_dense_reference(walks, name):
    w = walks[name]
    _, _, nmat, u = reference_walk(w.graph.adjacency)
    assert minimal_hits(brute_force_pst(w, 24)) == reference_pst(u, nmat, 24)


def test_j421_six_hits_at_six(walks):
    hits = brute_force_pst(walks["J(4,2,1)"], 12)
    first = minimal_hits(hits)
    assert len(first) == 6 and set(first.values()) == {6}
    assert all(f >= 1 - 1e-8 for *_, f in hits)


@pytest.mark.parametrize("name,expected", [("Q2", {(0, 3): 2, (1, 2): 2, (2, 1): 2, (3, 0): 2}), ("Petersen", {})])
def test_brute_force_examples(walks, name, expected):
    assert minimal_hits(brute_force_pst(walks[name], 64)) == expected


def test_hits_repeat_with_period(walks):
    # C6: PST at 3, return at 6, PST again at 9
    hits = brute_force_pst(walks["C6"], 12)
    assert sorted({t for u, v, t, _ in hits if u == 0}) == [3, 9]


@pytest.mark.parametrize("spec", [(5, 3, 2), (4, 2, 3), (3, 3, 1)])
def test_step_forms_agree(spec):
    w = build_walk(gc.hamming(*spec))
    x = np.random.default_rng(1).standard_normal((w.arc_count, 4))
    assert np.abs(_stepper(w)(x) - w.sparse_U @ x).max() <= 1e-12
    assert np.abs(_stepper(w)(x) - w.apply_U(x)).max() <= 1e-12


# --- certificate verification ------------------------------------------


@pytest.mark.parametrize("name", ["C6", "H(2,2,1)", "C5", "J(4,2,1)", "K2,2,2"])
def test_verify_engine_certificates(walks, name):
    w = walks[name]
    v = analyze_pst(w.graph, w=w)
    rep = verify_certificates(v.certificates, w, period=v.period)
    assert rep.agrees and not rep.mismatches()
    assert rep.confirmed == sorted((c.u, c.v, c.tau) for c in v.certificates)
    if v.certificates:
        assert rep.min_fidelity >= 1 - 1e-8
    else:
        assert rep.min_fidelity is None


def test_false_certificate_detected(walks):
    w = walks["C5"]
    rep = verify_certificates([PstCertificate(0, 2, 2, "test")], w, tau_max=10)
    assert not rep.agrees and rep.missing == [(0, 2, 2)]
    assert rep.checks[0].fidelity < 1 - 1e-6


def test_missing_certificate_detected(walks):
    w = walks["C4"]
    rep = verify_certificates([PstCertificate(0, 2, 2, "test")], w, tau_max=4)
    assert not rep.agrees
    assert [(u, v, t) for u, v, t, _ in rep.unexpected] == [(1, 3, 2), (2, 0, 2), (3, 1, 2)]


def test_wrong_time_detected(walks):
    # C6 transfers at 3; claiming 9 is PST but not the least time
    rep = verify_certificates([PstCertificate(0, 3, 9, "test")], walks["C6"], tau_max=12)
    assert not rep.agrees and rep.checks[0].observed_tau == 3


def test_report_dict(walks):
    w = walks["C4"]
    rep = verify_certificates(analyze_pst(w.graph).certificates, w, period=4)
    d = rep.to_dict()
    assert d["horizon"] == 4 and d["agrees"] is True and d["unexpected"] == []
    assert [(c["u"], c["v"], c["tau"], c["pass"]) for c in d["certificates"]] == [
        (0, 2, 2, True), (1, 3, 2, True), (2, 0, 2, True), (3, 1, 2, True)
    ]


# --- operator identities along the trajectory ---------------------------


@pytest.mark.parametrize("name", ["C7", "Petersen", "tadpole", "K2,2,2"])
def test_unitarity_drift(walks, name):
    w = walks[name]
    x = np.eye(w.arc_count)
    for _ in range(256):
        x = w.sparse_U @ x
    assert np.abs(x.T @ x - np.eye(w.arc_count)).max() <= 1e-10


@pytest.mark.parametrize("name", SMALL)
def test_projected_powers_are_chebyshev(walks, name):
    w = walks[name]
    ds = discriminant_spectrum(w)
    nmat = w.N
    x = np.eye(w.arc_count)
    for tau in range(1, 33):
        x = w.U @ x
        assert np.abs(nmat @ x @ nmat.T - ds.chebyshev_matrix(tau)).max() <= 1e-9


# --- periodicity --------------------------------------------------------


@pytest.mark.parametrize("name", SMALL)
def test_oracle_period_matches_analytic(walks, name):
    w = walks[name]
    assert oracle_period(w) == period(u_spectrum(w, discriminant_spectrum(w)))


@pytest.mark.parametrize("name,k", [("C4", 4), ("C6", 6), ("K2,2,2", 12), ("H(2,2,1)", 4)])
def test_no_early_return(walks, name, k):
    w = walks[name]
    x = np.eye(w.arc_count)
    for j in range(1, k):
        x = w.U @ x
        assert np.abs(x - np.eye(w.arc_count)).max() > 1e-4
    assert np.abs(w.U @ x - np.eye(w.arc_count)).max() <= 1e-8


@pytest.mark.parametrize("p,tau_max,expected", [(12, 64, 12), (None, 64, 64), (300, 40, 40), (256, 64, 256)])
def test_oracle_horizon(p, tau_max, expected):
    assert oracle_horizon(p, tau_max) == expected


# --- traces -------------------------------------------------------------


def test_trace_csv(walks, tmp_path):
    w = walks["C4"]
    tr = fidelity_trace(w, 0, 8)
    assert tr.fidelities.shape == (9, 4) and tr.horizon == 8
    assert tr.fidelities[2, 2] == pytest.approx(1.0)
    path = tr.write_csv(tmp_path / "trace.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "v", "fidelity"] and len(rows) == 1 + 9 * 4
    assert float(rows[1 + 2 * 4 + 2][2]) == tr.fidelities[2, 2]


def test_trace_agrees_with_pointwise(walks):
    w = walks["Petersen"]
    tr = fidelity_trace(w, 3, 10)
    for t in (0, 1, 5, 10):
        for v in (0, 3, 7):
            assert tr.fidelities[t, v] == pytest.approx(fidelity(w, 3, v, t), abs=1e-12)


def test_trace_is_bounded(walks):
    tr = fidelity_trace(walks["tadpole"], 0, 64)
    assert tr.fidelities.max() <= 1 + 1e-12 and tr.fidelities.min() >= 0
