from __future__ import annotations

import json

import numpy as np
import pytest

from corpus import CORPUS
from grover_pst import graph_core as gc
from grover_pst.errors import NotDistanceRegularError, SchemeHypothesisError
from grover_pst.exact_spectra import discriminant_spectrum, period, u_spectrum
from grover_pst.pst_engine import (
    PstCertificate,
    analyze_pst,
    chebyshev_scan,
    classify_distance_regular,
    classify_hamming,
    classify_johnson,
    drg_generic,
    pst_chebyshev,
    pst_scheme,
    pst_search,
    transfer_residual,
)
from grover_pst.scheme_algebra import hamming_scheme, johnson_scheme
from grover_pst.walk_operators import build_walk


def spectra(g):
    w = build_walk(g)
    ds = discriminant_spectrum(w)
    return w, ds, u_spectrum(w, ds)


# --- Chebyshev column test ----------------------------------------------


def test_c4_antipodes():
    w, ds, _ = spectra(gc.cycle(4))
    ok, r = pst_chebyshev(w, ds, 0, 2, 2)
    assert ok and r <= 1e-12


def test_j421_complements_at_six():
    g = gc.johnson(4, 2, 1)
    w, ds, _ = spectra(g)
    fib = gc.antipodal_fibres(g)
    for u in range(6):
        assert pst_chebyshev(w, ds, u, fib.antipode(u), 6)[0]
        assert not pst_chebyshev(w, ds, u, fib.antipode(u), 3)[0]


def test_k3_never():
    w, ds, _ = spectra(gc.complete(3))
    for tau in range(1, 25):
        for u in range(3):
            for v in range(3):
                if u != v:
                    assert not pst_chebyshev(w, ds, u, v, tau)[0]


def test_chebyshev_argument_errors():
    w, ds, _ = spectra(gc.cycle(4))
    with pytest.raises(IndexError):
        pst_chebyshev(w, ds, 0, 9, 1)
    with pytest.raises(ValueError):
        pst_chebyshev(w, ds, 0, 2, 0)
    assert not pst_chebyshev(w, ds, 0, 0, 4)[0]  # u == v is never transfer


def test_phase_is_plus_one():
    # U^2 on C4 sends Phi_0 to +Phi_2: T_2(P) e_0 = +e_2, not -e_2
    w, ds, _ = spectra(gc.cycle(4))
    col = ds.chebyshev_matrix(2)[:, 0]
    assert col[2] == pytest.approx(1.0)


# --- scheme sign-partition test -----------------------------------------


def test_h221_scheme_pst():
    g = gc.hamming(2, 2, 1)
    _, ds, us = spectra(g)
    certs = pst_scheme(hamming_scheme(2, 2), ds, us)
    assert [(c.u, c.v, c.tau) for c in certs] == [(0, 3, 2), (1, 2, 2), (2, 1, 2), (3, 0, 2)]
    assert all(c.route == "scheme" and c.flip_class == 2 for c in certs)
    assert certs[0].sign_partition == ((0, 2), (1,))


def test_h421_scheme_rejects():
    g = gc.hypercube(4)
    _, ds, us = spectra(g)
    assert period(us) == 12
    assert pst_scheme(hamming_scheme(4, 2), ds, us) == []


@pytest.mark.parametrize("k", [2, 3, 4])
def test_johnson_matching_scheme_pst(k):
    g = gc.johnson(2 * k, k, 0)
    _, ds, us = spectra(g)
    s = johnson_scheme(2 * k, k)
    # disjoint-complement matching has 2 eigenvalues, the scheme k+1 idempotents
    with pytest.raises(SchemeHypothesisError):
        pst_scheme(s, ds, us)
    verdict = analyze_pst(g)
    assert verdict.pst and {c.tau for c in verdict.certificates} == {1}


def test_j421_scheme_certificates():
    g = gc.johnson(4, 2, 1)
    _, ds, us = spectra(g)
    certs = pst_scheme(johnson_scheme(4, 2), ds, us)
    assert len(certs) == 6 and {c.tau for c in certs} == {6}
    assert all(c.residual <= 1e-8 for c in certs)


def test_scheme_hypothesis_error_for_foreign_graph():
    _, ds, us = spectra(gc.cycle(6))
    with pytest.raises(SchemeHypothesisError):
        pst_scheme(hamming_scheme(2, 2), ds, us)


# --- closed-form classifiers --------------------------------------------


@pytest.mark.parametrize(
    "args,pst,tau",
    [((5, 2, 5), True, 1), ((2, 2, 1), True, 2), ((3, 3, 1), False, None), ((1, 2, 1), True, 1), ((4, 2, 1), False, None)],
)
def test_classify_hamming(args, pst, tau):
    c = classify_hamming(*args)
    assert (c.pst, c.tau) == (pst, tau)


@pytest.mark.parametrize(
    "args,pst,tau",
    [((6, 3, 0), True, 1), ((4, 2, 1), True, 6), ((6, 3, 1), False, None), ((5, 2, 0), False, None)],
)
def test_classify_johnson(args, pst, tau):
    c = classify_johnson(*args)
    assert (c.pst, c.tau) == (pst, tau)


@pytest.mark.parametrize("args", [(0, 2, 1), (2, 2, 3), (2, 1, 1)])
def test_classify_hamming_invalid(args):
    with pytest.raises(ValueError):
        classify_hamming(*args)


@pytest.mark.parametrize("args", [(3, 2, 0), (4, 2, 2)])
def test_classify_johnson_invalid(args):
    with pytest.raises(ValueError):
        classify_johnson(*args)


# --- distance-regular pipeline ------------------------------------------


@pytest.mark.parametrize(
    "name,pst,tau,route",
    [
        ("Petersen", False, None, "drg:antipodal"),
        ("C6", True, 3, "drg:diameter-3"),
        ("K2,2,2", True, 6, "drg:diameter-2"),
        ("C4", True, 2, "drg:diameter-2"),
        ("K2", True, 1, "drg:complete"),
        ("K4", False, None, "drg:antipodal"),
        ("K3,3", False, None, "drg:antipodal"),
        ("K2,2,2,2", False, None, "drg:diameter-2"),
        ("Q3", False, None, "drg:diameter-3"),
        ("Q4", False, None, "drg:integral"),
        ("C8", True, 4, "drg"),
        ("C10", True, 5, "drg"),
        ("C12", True, 6, "drg"),
        ("C9", False, None, "drg:antipodal"),
    ],
)
def test_classify_distance_regular(name, pst, tau, route):
    v = classify_distance_regular(CORPUS[name]())
    assert v.pst is pst and v.route == route
    assert ({c.tau for c in v.certificates} or {None}) == {tau}


def test_q4_rejected_by_t6_half():
    v = classify_distance_regular(gc.hypercube(4))
    assert v.period == 12 and "T_6(1/2) = 1" in v.reason


def test_not_distance_regular_error():
    with pytest.raises(NotDistanceRegularError):
        classify_distance_regular(gc.path(3))
    with pytest.raises(NotDistanceRegularError):
        drg_generic(gc.complete_multipartite(1, 3))


@pytest.mark.parametrize("name", ["C4", "C6", "C8", "C10", "C12", "K2", "K2,2,2", "Q2", "Q4", "Petersen", "J(4,2,1)", "K3,3"])
def test_shortcuts_agree_with_generic(name):
    g = CORPUS[name]()
    a = classify_distance_regular(g)
    b = drg_generic(g)
    assert a.pst == b.pst
    assert [(c.u, c.v, c.tau) for c in a.certificates] == [(c.u, c.v, c.tau) for c in b.certificates]


# --- dispatcher ---------------------------------------------------------


@pytest.mark.parametrize(
    "name,expected",
    [
        ("K2", [(0, 1, 1), (1, 0, 1)]),
        ("Q3", []),
        ("C5", []),
        ("C4", [(0, 2, 2), (1, 3, 2), (2, 0, 2), (3, 1, 2)]),
        ("P3", [(0, 2, 2), (2, 0, 2)]),
        ("K1,3", []),
    ],
)
def test_pst_search_examples(name, expected):
    assert [(c.u, c.v, c.tau) for c in pst_search(CORPUS[name]())] == expected


@pytest.mark.parametrize("name", list(CORPUS))
def test_certificate_invariants(name):
    g = CORPUS[name]()
    w, ds, us = spectra(g)
    v = analyze_pst(g, w=w)
    sources = {}
    for c in v.certificates:
        assert c.u != c.v
        assert transfer_residual(ds, c.tau, c.u, c.v) <= 1e-8
        assert sources.setdefault(c.u, c.v) == c.v
        if g.is_regular and v.period is not None and v.route != "chebyshev":
            assert 2 * c.tau == v.period
    if g.is_connected and gc.is_distance_regular(g) is not None and v.certificates:
        dist = gc.distance_structure(g)
        assert all(dist.dist[c.u, c.v] == dist.diameter for c in v.certificates)


@pytest.mark.parametrize("name", ["C4", "C6", "K2", "J(4,2,1)", "H(2,2,1)", "K2,2,2", "C8", "Q4", "Petersen", "H(3,2,3)", "J(6,3,0)"])
def test_routes_agree_with_full_scan(name):
    # the reduced search (tau = period/2 only) must match scanning every time
    g = CORPUS[name]()
    _, ds, us = spectra(g)
    per = period(us) or 64
    scan = chebyshev_scan(ds, range(1, per + 1))
    got = analyze_pst(g).certificates
    assert [(c.u, c.v, c.tau) for c in scan] == [(c.u, c.v, c.tau) for c in got]


@pytest.mark.parametrize("name", ["tadpole", "diamond", "paw"])
def test_aperiodic_irregular_is_inconclusive(name):
    v = analyze_pst(CORPUS[name]())
    assert v.period is None and not v.pst and not v.conclusive
    assert "scanned" in v.reason


def test_certificate_json():
    c = PstCertificate(0, 3, 2, "scheme", 2, ((0, 2), (1,)), 1e-16)
    doc = json.loads(c.to_json())
    assert doc == {
        "u": 0,
        "v": 3,
        "tau": 2,
        "route": "scheme",
        "flip_class": 2,
        "sign_partition": {"plus": [0, 2], "minus": [1]},
        "residual": 1e-16,
    }
    assert PstCertificate(1, 0, 1, "drg").to_dict()["sign_partition"] is None
